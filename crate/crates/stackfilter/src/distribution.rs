//! From a row cover of the zero set to exact distribution data: the
//! transfer polynomial, the per-weight profile of the zero set, and rank
//! selection probabilities.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::engine::RowSet;
use crate::error::Error;
use crate::poly::{binomial_big, MixedMonomial, TransferPolynomial};
use crate::row::MultiRow;

/// The mixed-form terms a single row adds to the transfer polynomial:
/// `p^#zeros q^#ones prod(1 - q^|bubble|)`, expanded by distributing the
/// bubble factors.
pub fn row_contribution(row: &MultiRow) -> Vec<MixedMonomial> {
    let p0 = row.zeros_mask().count_ones();
    let q0 = row.ones_mask().count_ones();
    let mut terms = vec![MixedMonomial::new(1, p0, q0)];
    for b in row.bubble_masks() {
        let size = b.count_ones();
        let mut next = Vec::with_capacity(terms.len() * 2);
        for t in &terms {
            next.push(t.clone());
            next.push(MixedMonomial::new(
                -t.coeff.clone(),
                t.p_exp,
                t.q_exp + size,
            ));
        }
        terms = next;
    }
    terms
}

/// Sums the row contributions of a cover into a transfer polynomial.
///
/// An empty cover (constant-1 function) gives the zero polynomial; the
/// all-free cover (constant-0 function) gives the constant 1.
pub fn transfer(rowset: &RowSet) -> TransferPolynomial {
    let mut mixed = Vec::new();
    for row in rowset.rows() {
        mixed.extend(row_contribution(row));
    }
    TransferPolynomial::from_mixed(mixed)
}

/// Counts of zero-set members by number of ones: `counts[i]` is the number
/// of bitstrings with `i` ones on which the function vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AProfile {
    counts: Vec<BigUint>,
}

impl AProfile {
    pub fn from_counts(counts: Vec<BigUint>) -> Self {
        assert!(!counts.is_empty());
        AProfile { counts }
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// Window width `w`; the profile has `w + 1` entries.
    pub fn width(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

impl fmt::Display for AProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Tallies the weight profile of a cover, row by row, via each row's
/// counting polynomial.
pub fn a_profile(rowset: &RowSet) -> AProfile {
    let w = rowset.window().width();
    let mut counts = vec![BigUint::zero(); w + 1];
    for row in rowset.rows() {
        for (i, c) in row.weight_profile().into_iter().enumerate() {
            counts[i] += c;
        }
    }
    AProfile { counts }
}

/// Exact probabilities that the filter output equals the i-th smallest
/// window sample, `i = 1..w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankVector {
    probs: Vec<BigRational>,
}

impl RankVector {
    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn probs_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.probs
            .iter()
            .map(|r| r.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

/// Rank selection probabilities from a weight profile:
/// `p_i = A_{w-i} / C(w, w-i) - A_{w-i+1} / C(w, w-i+1)`.
///
/// Fails with [`Error::NoModels`] for the empty profile (constant-1
/// function), where no output exists to rank.
pub fn rank_selection(profile: &AProfile) -> Result<RankVector, Error> {
    let w = profile.width();
    if profile.counts().iter().all(BigUint::is_zero) {
        return Err(Error::NoModels);
    }
    let density = |i: usize| -> BigRational {
        BigRational::new(
            BigInt::from(profile.counts()[i].clone()),
            BigInt::from(binomial_big(w, i)),
        )
    };
    let probs = (1..=w)
        .map(|i| density(w - i) - density(w - i + 1))
        .collect();
    Ok(RankVector { probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::enumerate_zeros;
    use crate::pbf::{Implicant, Pbf};
    use crate::row::Cell;
    use crate::window::Window;
    use num_traits::One;

    fn row(window: Window, text: &str) -> MultiRow {
        let cells: Vec<Cell> = text
            .split_whitespace()
            .map(|tok| match tok {
                "0" => Cell::Zero,
                "1" => Cell::One,
                "2" => Cell::Free,
                t => Cell::Bubble(t.strip_prefix('n').unwrap().parse::<usize>().unwrap()),
            })
            .collect();
        MultiRow::from_cells(window, &cells).unwrap()
    }

    fn majority3() -> Pbf {
        let w = Window::new(-1, 1).unwrap();
        Pbf::new(
            w,
            vec![
                Implicant::new([-1, 0]),
                Implicant::new([0, 1]),
                Implicant::new([-1, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn row_contributions_match_worked_rows() {
        let w = Window::new(-4, 4).unwrap();
        assert_eq!(
            row_contribution(&row(w, "2 1 1 n1 0 0 1 1 n1")),
            vec![MixedMonomial::new(1, 2, 4), MixedMonomial::new(-1, 2, 6)]
        );
        assert_eq!(
            row_contribution(&row(w, "2 n1 n1 2 0 2 n1 n1 2")),
            vec![MixedMonomial::new(1, 1, 0), MixedMonomial::new(-1, 1, 4)]
        );
        assert_eq!(
            row_contribution(&MultiRow::all_free(w)),
            vec![MixedMonomial::new(1, 0, 0)]
        );
    }

    #[test]
    fn transfer_of_majority_of_three() {
        let t = transfer(&enumerate_zeros(&majority3()));
        // 3 p^2 - 2 p^3 1-complemented: zeros have <= 1 one, so phi(p) counts them.
        assert_eq!(
            t.expanded(),
            &[
                BigInt::zero(),
                BigInt::zero(),
                BigInt::from(3),
                BigInt::from(-2)
            ]
        );
        assert_eq!(t.eval(0.5), 0.5);
        assert_eq!(t.eval(0.0), 0.0);
        assert_eq!(t.eval(1.0), 1.0);
    }

    #[test]
    fn transfer_of_identity_is_p() {
        let t = transfer(&enumerate_zeros(&Pbf::identity()));
        assert_eq!(t.expanded(), &[BigInt::zero(), BigInt::one()]);
    }

    #[test]
    fn profile_of_majority() {
        let prof = a_profile(&enumerate_zeros(&majority3()));
        let expect: Vec<BigUint> = [1u32, 3, 0, 0].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(prof.counts(), expect.as_slice());
        assert_eq!(prof.total(), BigUint::from(4u32));
    }

    #[test]
    fn profile_of_empty_dnf_is_binomial() {
        let w = Window::new(0, 1).unwrap();
        let prof = a_profile(&enumerate_zeros(&Pbf::constant(w, false)));
        let expect: Vec<BigUint> = [1u32, 2, 1].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(prof.counts(), expect.as_slice());
    }

    #[test]
    fn majority_selects_the_median_rank() {
        let rv = rank_selection(&a_profile(&enumerate_zeros(&majority3()))).unwrap();
        let expect = [BigRational::zero(), BigRational::one(), BigRational::zero()];
        assert_eq!(rv.probs(), expect.as_slice());
    }

    #[test]
    fn identity_selects_rank_one() {
        let rv = rank_selection(&a_profile(&enumerate_zeros(&Pbf::identity()))).unwrap();
        assert_eq!(rv.probs(), &[BigRational::one()]);
    }

    #[test]
    fn rank_selection_needs_models() {
        let w = Window::new(0, 2).unwrap();
        let prof = a_profile(&enumerate_zeros(&Pbf::constant(w, true)));
        assert_eq!(rank_selection(&prof), Err(Error::NoModels));
    }
}
