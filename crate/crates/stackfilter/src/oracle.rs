//! Naive reference implementations of every computed quantity.
//!
//! Everything here enumerates bitstrings directly and stays deliberately
//! simple; the fast paths are validated against these in the test suites
//! and through the `verify` command. Width limits keep the exponential
//! costs bounded.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::balanced::{BalancedPbf, BalancedProfile, ExponentTuple};
use crate::distribution::{a_profile, rank_selection, transfer, AProfile};
use crate::engine::enumerate_zeros;
use crate::error::Error;
use crate::joint::{joint_profile, JointMatrix};
use crate::pbf::{Bitstring, Pbf};
use crate::poly::{MixedMonomial, TransferPolynomial};

/// Brute-force reference with a configurable width budget.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    max_width: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { max_width: 22 }
    }
}

impl Oracle {
    pub fn new(max_width: usize) -> Self {
        Oracle { max_width }
    }

    pub fn max_width(&self) -> usize {
        self.max_width
    }

    fn check(&self, width: usize) -> Result<(), Error> {
        if width > self.max_width {
            Err(Error::WidthLimit {
                width,
                limit: self.max_width,
            })
        } else {
            Ok(())
        }
    }

    /// All bitstrings on which the function vanishes, in lexicographic
    /// order (first window position most significant).
    pub fn brute_zeros(&self, pbf: &Pbf) -> Result<Vec<Bitstring>, Error> {
        let w = pbf.width();
        self.check(w)?;
        let window = pbf.window();
        let mut out = Vec::new();
        for m in 0..(1u128 << w) {
            let mask = reverse_bits(m as u64, w);
            let x = Bitstring::from_mask(window, mask);
            if !pbf.eval_bool(&x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Transfer polynomial and weight profile by direct summation over the
    /// zero set. The expansion in `p` is carried out with a local binomial
    /// accumulation, independent of the fast path.
    pub fn brute_transfer_profile(
        &self,
        pbf: &Pbf,
    ) -> Result<(TransferPolynomial, AProfile), Error> {
        let w = pbf.width();
        self.check(w)?;
        let window = pbf.window();
        let mut mixed: BTreeMap<(u32, u32), num_bigint::BigInt> = BTreeMap::new();
        let mut counts = vec![BigUint::zero(); w + 1];
        let mut expanded = vec![num_bigint::BigInt::zero(); w + 1];
        for m in 0..(1u128 << w) {
            let x = Bitstring::from_mask(window, m as u64);
            if pbf.eval_bool(&x)? {
                continue;
            }
            let ones = x.weight();
            let zeros = w as u32 - ones;
            counts[ones as usize] += BigUint::one();
            *mixed.entry((zeros, ones)).or_default() += 1;
            // p^zeros (1-p)^ones expanded directly.
            let mut sign = num_bigint::BigInt::one();
            for k in 0..=ones as usize {
                expanded[zeros as usize + k] +=
                    &sign * num_bigint::BigInt::from(crate::poly::binomial_big(ones as usize, k));
                sign = -sign;
            }
        }
        let mixed: Vec<MixedMonomial> = mixed
            .into_iter()
            .map(|((p_exp, q_exp), coeff)| MixedMonomial {
                coeff,
                p_exp,
                q_exp,
            })
            .collect();
        let poly = TransferPolynomial::from_mixed(mixed);
        // Cross-check the two expansion routes before trusting either.
        let mut trimmed = expanded;
        while trimmed.len() > 1 && trimmed.last().map(num_traits::Zero::is_zero) == Some(true) {
            trimmed.pop();
        }
        assert_eq!(
            poly.expanded(),
            trimmed.as_slice(),
            "expansion routes disagree"
        );
        Ok((poly, AProfile::from_counts(counts)))
    }

    /// Pair-count matrix by enumerating every `x >= y` pair directly.
    pub fn brute_joint(&self, b1: &Pbf, b2: &Pbf) -> Result<JointMatrix, Error> {
        if b1.window() != b2.window() {
            return Err(Error::WindowMismatch);
        }
        let w = b1.width();
        self.check(2 * w)?;
        let window = b1.window();
        let mut a = vec![vec![BigUint::zero(); w + 1]; w + 1];
        for x in (0..(1u128 << w)).map(|m| m as u64) {
            if b1.eval_bool(&Bitstring::from_mask(window, x))? {
                continue;
            }
            let i = w - x.count_ones() as usize;
            let mut y = x;
            loop {
                if !b2.eval_bool(&Bitstring::from_mask(window, y))? {
                    a[i][y.count_ones() as usize] += BigUint::one();
                }
                if y == 0 {
                    break;
                }
                y = (y - 1) & x;
            }
        }
        Ok(JointMatrix::from_entries(w, a))
    }

    /// Exponent-tuple profile by enumerating all `2^(2w)` block pairs.
    pub fn brute_balanced(&self, bpbf: &BalancedPbf) -> Result<BalancedProfile, Error> {
        let w = bpbf.width();
        self.check(2 * w)?;
        let window = bpbf.pbf().window();
        let half = crate::window::mask_of_width(w);
        let mut counts: BTreeMap<ExponentTuple, BigUint> = BTreeMap::new();
        for m in (0..(1u128 << (2 * w))).map(|m| m as u64) {
            if bpbf.pbf().eval_bool(&Bitstring::from_mask(window, m))? {
                continue;
            }
            let x = m & half;
            let y = m >> w;
            let tuple = ExponentTuple {
                pp: (x & y).count_ones(),
                pm: (x & !y).count_ones(),
                mp: (!x & y & half).count_ones(),
                mm: (!x & !y & half).count_ones(),
            };
            *counts.entry(tuple).or_insert_with(BigUint::zero) += BigUint::one();
        }
        Ok(BalancedProfile::from_counts(w, counts))
    }
}

fn reverse_bits(m: u64, w: usize) -> u64 {
    let mut out = 0u64;
    for i in 0..w {
        if m >> i & 1 == 1 {
            out |= 1 << (w - 1 - i);
        }
    }
    out
}

/// One compared quantity of a verification run.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub quantity: String,
    pub fast: String,
    pub brute: String,
    pub equal: bool,
    pub instance: String,
}

impl OracleReport {
    fn compare(quantity: &str, instance: &str, fast: impl ToString, brute: impl ToString) -> Self {
        let fast = fast.to_string();
        let brute = brute.to_string();
        OracleReport {
            quantity: quantity.into(),
            equal: fast == brute,
            fast,
            brute,
            instance: instance.into(),
        }
    }
}

/// Runs every plain-DNF quantity against the oracle: zero count, zero-set
/// membership, cover disjointness, transfer coefficients, weight profile
/// and rank probabilities.
pub fn verify_pbf(pbf: &Pbf, oracle: &Oracle, instance: &str) -> Result<Vec<OracleReport>, Error> {
    let zeros = oracle.brute_zeros(pbf)?;
    let (brute_poly, brute_profile) = oracle.brute_transfer_profile(pbf)?;
    let rowset = enumerate_zeros(pbf);
    let mut reports = Vec::new();

    reports.push(OracleReport::compare(
        "zero count N",
        instance,
        rowset.member_count(),
        zeros.len(),
    ));

    let mut disjoint = true;
    let mut exact = true;
    let w = pbf.width();
    for m in (0..(1u128 << w)).map(|m| m as u64) {
        let hits = rowset.rows().iter().filter(|r| r.contains_mask(m)).count();
        if hits > 1 {
            disjoint = false;
        }
        let is_zero = !pbf.eval_mask(m);
        if (hits == 1) != is_zero {
            exact = false;
        }
    }
    reports.push(OracleReport::compare(
        "cover disjoint",
        instance,
        disjoint,
        true,
    ));
    reports.push(OracleReport::compare("zero set", instance, exact, true));

    let fast_poly = transfer(&rowset);
    reports.push(OracleReport::compare(
        "transfer polynomial",
        instance,
        fast_poly.to_string(),
        brute_poly.to_string(),
    ));

    let fast_profile = a_profile(&rowset);
    reports.push(OracleReport::compare(
        "weight profile",
        instance,
        fast_profile.to_string(),
        brute_profile.to_string(),
    ));

    match (
        rank_selection(&fast_profile),
        rank_selection(&brute_profile),
    ) {
        (Ok(a), Ok(b)) => {
            reports.push(OracleReport::compare(
                "rank probabilities",
                instance,
                format!("{:?}", a.probs()),
                format!("{:?}", b.probs()),
            ));
        }
        (Err(Error::NoModels), Err(Error::NoModels)) => {}
        (a, b) => {
            reports.push(OracleReport::compare(
                "rank probabilities",
                instance,
                format!("{a:?}"),
                format!("{b:?}"),
            ));
        }
    }
    Ok(reports)
}

/// Compares the joint pair-count matrix against brute force.
pub fn verify_joint(
    b1: &Pbf,
    b2: &Pbf,
    oracle: &Oracle,
    instance: &str,
) -> Result<Vec<OracleReport>, Error> {
    let brute = oracle.brute_joint(b1, b2)?;
    let fast = joint_profile(b1, b2)?;
    Ok(vec![OracleReport::compare(
        "joint matrix",
        instance,
        format!("{:?}", fast.entries()),
        format!("{:?}", brute.entries()),
    )])
}

/// Compares the balanced exponent profile against brute force.
pub fn verify_balanced(
    bpbf: &BalancedPbf,
    oracle: &Oracle,
    instance: &str,
) -> Result<Vec<OracleReport>, Error> {
    let brute = oracle.brute_balanced(bpbf)?;
    let fast = crate::balanced::balanced_profile(bpbf);
    Ok(vec![OracleReport::compare(
        "balanced profile",
        instance,
        fast.to_string(),
        brute.to_string(),
    )])
}
