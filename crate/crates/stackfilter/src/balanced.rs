//! Output distribution of filters whose defining function takes a
//! mirrored pair of argument blocks `b(x, y)`.
//!
//! Thresholding at `t` and `-t` splits every sample into one of four
//! cases, with probabilities collected in a [`ThresholdQuadruple`]. The
//! output distribution is a sum over the zeros of `b(x, y)` of monomials
//! in those four probabilities, with exponents counting the positions in
//! each (x-bit, y-bit) combination. [`BalancedProfile`] stores those
//! exponent tuples with exact multiplicities so a single enumeration
//! serves every threshold.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::engine::enumerate_zeros;
use crate::error::Error;
use crate::pbf::Pbf;
use crate::poly::binomial_big;
use crate::row::MultiRow;
use crate::window::Window;

/// A function over paired blocks: `w` x-variables then `w` y-variables.
///
/// Internally the blocks are flattened into one window `0..2w-1`; the
/// stored x-window only affects parsing and display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedPbf {
    x_window: Window,
    pbf: Pbf,
}

impl BalancedPbf {
    pub fn new(x_window: Window, pbf: Pbf) -> Result<Self, Error> {
        let w = x_window.width();
        let expected = Window::new(0, (2 * w - 1) as i32)?;
        if pbf.window() != expected {
            return Err(Error::WindowMismatch);
        }
        Ok(BalancedPbf { x_window, pbf })
    }

    /// Block width `w` (the function has `2w` variables).
    pub fn width(&self) -> usize {
        self.x_window.width()
    }

    pub fn x_window(&self) -> Window {
        self.x_window
    }

    /// The flattened function over `0..2w-1`.
    pub fn pbf(&self) -> &Pbf {
        &self.pbf
    }

    /// True when no implicant touches the y block.
    pub fn ignores_y(&self) -> bool {
        let w = self.width() as i32;
        self.pbf
            .implicants()
            .iter()
            .all(|imp| imp.positions().iter().all(|&p| p < w))
    }

    /// For a y-ignoring function, the same function over the x-window.
    pub fn x_projection(&self) -> Option<Pbf> {
        if !self.ignores_y() {
            return None;
        }
        let lo = self.x_window.lo();
        let implicants = self
            .pbf
            .implicants()
            .iter()
            .map(|imp| crate::pbf::Implicant::new(imp.positions().iter().map(|&p| p + lo)))
            .collect();
        Some(Pbf::new(self.x_window, implicants).expect("projection stays in window"))
    }
}

/// The four mirrored-threshold probabilities. Always sums to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdQuadruple {
    pub p_pp: BigRational,
    pub p_pm: BigRational,
    pub p_mp: BigRational,
    pub p_mm: BigRational,
}

impl ThresholdQuadruple {
    /// Convenience constructor from floats (converted exactly).
    pub fn from_f64(f_t: f64, f_neg_t: f64, t_nonpositive: bool) -> Result<Self, Error> {
        let conv = |x: f64, name: &str| -> Result<BigRational, Error> {
            BigRational::from_float(x)
                .ok_or_else(|| Error::BadParameter(format!("{name} is not finite")))
        };
        threshold_probs(&conv(f_t, "F(t)")?, &conv(f_neg_t, "F(-t)")?, t_nonpositive)
    }
}

/// Builds the quadruple from `F(t)` and `F(-t)` for the given sign of `t`.
///
/// For `t <= 0` the both-above case has probability `F(-t) - F(t)` and the
/// both-below case is impossible; for `t > 0` the roles mirror. The inputs
/// must be probabilities ordered consistently with the sign case.
pub fn threshold_probs(
    f_t: &BigRational,
    f_neg_t: &BigRational,
    t_nonpositive: bool,
) -> Result<ThresholdQuadruple, Error> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    for (v, name) in [(f_t, "F(t)"), (f_neg_t, "F(-t)")] {
        if v < &zero || v > &one {
            return Err(Error::BadParameter(format!("{name} outside [0, 1]")));
        }
    }
    if t_nonpositive {
        if f_t > f_neg_t {
            return Err(Error::InconsistentThresholds);
        }
        Ok(ThresholdQuadruple {
            p_pp: f_neg_t - f_t,
            p_pm: &one - f_neg_t,
            p_mp: f_t.clone(),
            p_mm: zero,
        })
    } else {
        if f_neg_t > f_t {
            return Err(Error::InconsistentThresholds);
        }
        Ok(ThresholdQuadruple {
            p_pp: zero,
            p_pm: &one - f_t,
            p_mp: f_neg_t.clone(),
            p_mm: f_t - f_neg_t,
        })
    }
}

/// Counts of `(x, y)` positions by bit pattern: `pp` where both blocks
/// hold 1, `pm` where x holds 1 and y holds 0, and so on. Every tuple of a
/// width-`w` profile sums to `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentTuple {
    pub pp: u32,
    pub pm: u32,
    pub mp: u32,
    pub mm: u32,
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.pp, self.pm, self.mp, self.mm)
    }
}

/// Exact multiplicity of every exponent tuple over the zeros of `b(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedProfile {
    width: usize,
    counts: BTreeMap<ExponentTuple, BigUint>,
}

impl BalancedProfile {
    pub(crate) fn from_counts(width: usize, counts: BTreeMap<ExponentTuple, BigUint>) -> Self {
        BalancedProfile { width, counts }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn counts(&self) -> &BTreeMap<ExponentTuple, BigUint> {
        &self.counts
    }

    /// Total number of zeros represented.
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    fn add(&mut self, tuple: ExponentTuple, count: BigUint) {
        if !count.is_zero() {
            *self.counts.entry(tuple).or_default() += count;
        }
    }

    /// Tallies the exponent tuples of every member of the given rows,
    /// which must live on a `2w`-wide window holding the x block in its
    /// low half.
    ///
    /// Per row, the x block is enumerated (bubbles confined to the x block
    /// exclude their all-ones pattern; a bubble straddling both blocks
    /// conditions its y part on whether its x part is saturated), and the
    /// matching y choices are counted by a two-variable polynomial that
    /// keeps ones under x-ones and ones under x-zeros separate.
    pub fn from_rows(w: usize, rows: &[MultiRow]) -> Result<Self, Error> {
        let mut profile = BalancedProfile {
            width: w,
            counts: BTreeMap::new(),
        };
        for row in rows {
            if row.width() != 2 * w {
                return Err(Error::WindowMismatch);
            }
            profile.add_row(row);
        }
        Ok(profile)
    }

    fn add_row(&mut self, row: &MultiRow) {
        let w = self.width;
        let xmask = crate::window::mask_of_width(w);
        let ymask = xmask << w;

        // Split the row's bubbles by block.
        let mut x_groups: Vec<(u64, bool)> = Vec::new(); // (mask, exclude_full)
        let mut mixed: Vec<(u64, u64)> = Vec::new(); // (x part, y part)
        let mut y_bubbles: Vec<u64> = Vec::new();
        let free_x = row.free_mask() & xmask;
        if free_x != 0 {
            x_groups.push((free_x, false));
        }
        for &b in row.bubble_masks() {
            let bx = b & xmask;
            let by = b & ymask;
            if by == 0 {
                x_groups.push((bx, true));
            } else if bx == 0 {
                y_bubbles.push(by);
            } else {
                x_groups.push((bx, false));
                mixed.push((bx, by));
            }
        }
        let base_x = row.ones_mask() & xmask;
        let ones_y = row.ones_mask() & ymask;
        let free_y = row.free_mask() & ymask;

        let mut visit = |x_extra: u64| {
            let x_star = base_x | x_extra;
            let wt_x = x_star.count_ones();
            let sm = x_star << w; // y positions paired with x-ones
            let mut poly = BiPoly::monomial(
                (ones_y & sm).count_ones() as usize,
                (ones_y & !sm).count_ones() as usize,
            );
            poly = poly.mul(&BiPoly::free(
                (free_y & sm).count_ones() as usize,
                (free_y & !sm).count_ones() as usize,
            ));
            for &by in &y_bubbles {
                poly = poly.mul(&BiPoly::bubble(
                    (by & sm).count_ones() as usize,
                    (by & !sm).count_ones() as usize,
                ));
            }
            for &(bx, by) in &mixed {
                let s = (by & sm).count_ones() as usize;
                let u = (by & !sm).count_ones() as usize;
                let factor = if x_star & bx == bx {
                    // x part saturated: the y part must keep a 0.
                    BiPoly::bubble(s, u)
                } else {
                    BiPoly::free(s, u)
                };
                poly = poly.mul(&factor);
            }
            for (i, row_c) in poly.c.iter().enumerate() {
                for (j, c) in row_c.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let tuple = ExponentTuple {
                        pp: i as u32,
                        pm: wt_x - i as u32,
                        mp: j as u32,
                        mm: (w as u32 - wt_x) - j as u32,
                    };
                    self.add(tuple, c.clone());
                }
            }
        };
        for_each_combination(&x_groups, 0, &mut visit);
    }
}

impl fmt::Display for BalancedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (tuple, count) in &self.counts {
            writeln!(f, "{tuple}: {count}")?;
        }
        Ok(())
    }
}

/// Enumerates all zero tuples of the function and tallies their exponent
/// quadruples.
pub fn balanced_profile(bpbf: &BalancedPbf) -> BalancedProfile {
    let rows = enumerate_zeros(bpbf.pbf());
    BalancedProfile::from_rows(bpbf.width(), rows.rows())
        .expect("enumeration rows share the function window")
}

/// The output distribution value: the profile summed against the
/// threshold probabilities.
pub fn balanced_eval(profile: &BalancedProfile, q: &ThresholdQuadruple) -> BigRational {
    let pow = |base: &BigRational, e: u32| -> BigRational {
        let mut acc = BigRational::one();
        for _ in 0..e {
            acc *= base;
        }
        acc
    };
    let mut acc = BigRational::zero();
    for (t, c) in profile.counts() {
        let term = BigRational::from(BigInt::from(c.clone()))
            * pow(&q.p_pp, t.pp)
            * pow(&q.p_pm, t.pm)
            * pow(&q.p_mp, t.mp)
            * pow(&q.p_mm, t.mm);
        acc += term;
    }
    acc
}

/// `balanced_eval` as a float.
pub fn balanced_eval_f64(profile: &BalancedProfile, q: &ThresholdQuadruple) -> f64 {
    balanced_eval(profile, q).to_f64().unwrap_or(f64::NAN)
}

/// Two-variable counting polynomial with nonnegative coefficients;
/// `c[i][j]` counts choices with `i` ones in the first class and `j` in
/// the second.
struct BiPoly {
    c: Vec<Vec<BigUint>>,
}

impl BiPoly {
    fn monomial(i: usize, j: usize) -> Self {
        let mut c = vec![vec![BigUint::zero(); j + 1]; i + 1];
        c[i][j] = BigUint::one();
        BiPoly { c }
    }

    /// `(1+s)^a (1+u)^b`
    fn free(a: usize, b: usize) -> Self {
        let c = (0..=a)
            .map(|i| {
                (0..=b)
                    .map(|j| binomial_big(a, i) * binomial_big(b, j))
                    .collect()
            })
            .collect();
        BiPoly { c }
    }

    /// `(1+s)^a (1+u)^b - s^a u^b`
    fn bubble(a: usize, b: usize) -> Self {
        let mut p = BiPoly::free(a, b);
        p.c[a][b] -= BigUint::one();
        p
    }

    fn mul(&self, other: &BiPoly) -> BiPoly {
        let rows = self.c.len() + other.c.len() - 1;
        let cols = self.c[0].len() + other.c[0].len() - 1;
        let mut c = vec![vec![BigUint::zero(); cols]; rows];
        for (i, row_a) in self.c.iter().enumerate() {
            for (j, a) in row_a.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, row_b) in other.c.iter().enumerate() {
                    for (l, b) in row_b.iter().enumerate() {
                        if !b.is_zero() {
                            c[i + k][j + l] += a * b;
                        }
                    }
                }
            }
        }
        BiPoly { c }
    }
}

/// Calls `visit` with every admissible union of one submask per group;
/// groups flagged `exclude_full` skip their full mask.
fn for_each_combination(groups: &[(u64, bool)], acc: u64, visit: &mut impl FnMut(u64)) {
    match groups.split_first() {
        None => visit(acc),
        Some((&(mask, exclude_full), rest)) => {
            let mut s = 0u64;
            loop {
                if !(exclude_full && s == mask) {
                    for_each_combination(rest, acc | s, visit);
                }
                if s == mask {
                    break;
                }
                s = (s | !mask).wrapping_add(1) & mask;
            }
        }
    }
}
