//! Joint output distribution of two filters over the same window.
//!
//! For thresholds `s <= t` with `p = F(s)` and `pi = F(t)`, the joint
//! probability that both outputs stay below their thresholds is
//!
//! ```text
//! sum_{i,j} A[i][j] * p^i * (pi - p)^(w-i-j) * (1 - pi)^j
//! ```
//!
//! where `A[i][j]` counts pairs `x >= y` with `b1(x) = b2(y) = 0`, `i`
//! positions where both are 0 and `j` positions where both are 1.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::engine::{enumerate_zeros, restrict_to_zeros};
use crate::error::Error;
use crate::pbf::Pbf;
use crate::row::MultiRow;

/// The exact pair-count matrix of two filters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointMatrix {
    width: usize,
    a: Vec<Vec<BigUint>>,
}

impl JointMatrix {
    fn zero(width: usize) -> Self {
        JointMatrix {
            width,
            a: vec![vec![BigUint::zero(); width + 1]; width + 1],
        }
    }

    pub(crate) fn from_entries(width: usize, a: Vec<Vec<BigUint>>) -> Self {
        debug_assert!(a.len() == width + 1 && a.iter().all(|r| r.len() == width + 1));
        JointMatrix { width, a }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.a[i][j]
    }

    /// Rows indexed by `i` (both-zero count), columns by `j` (both-one).
    pub fn entries(&self) -> &[Vec<BigUint>] {
        &self.a
    }

    /// Total number of counted pairs.
    pub fn total(&self) -> BigUint {
        self.a.iter().flatten().sum()
    }

    /// Evaluates the joint sum assuming `p <= pi`.
    pub fn eval_ordered(&self, p: f64, pi: f64) -> Result<f64, Error> {
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&pi) || p > pi {
            return Err(Error::BadParameter(format!(
                "need 0 <= p <= pi <= 1, got p={p}, pi={pi}"
            )));
        }
        let w = self.width;
        let mut acc = 0.0;
        for i in 0..=w {
            for j in 0..=w - i {
                let c = self.a[i][j].to_f64().unwrap_or(f64::NAN);
                if c == 0.0 {
                    continue;
                }
                acc += c
                    * p.powi(i as i32)
                    * (pi - p).powi((w - i - j) as i32)
                    * (1.0 - pi).powi(j as i32);
            }
        }
        Ok(acc)
    }

    /// Exact evaluation assuming `p <= pi`.
    pub fn eval_ordered_exact(
        &self,
        p: &BigRational,
        pi: &BigRational,
    ) -> Result<BigRational, Error> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if p < &zero || pi < &zero || p > &one || pi > &one || p > pi {
            return Err(Error::BadParameter("need 0 <= p <= pi <= 1".into()));
        }
        let w = self.width;
        let mid = pi - p;
        let top = &one - pi;
        let pow = |base: &BigRational, e: usize| -> BigRational {
            let mut acc = BigRational::one();
            for _ in 0..e {
                acc *= base;
            }
            acc
        };
        let mut acc = BigRational::zero();
        for i in 0..=w {
            for j in 0..=w - i {
                if self.a[i][j].is_zero() {
                    continue;
                }
                let c = BigRational::from(BigInt::from(self.a[i][j].clone()));
                acc += c * pow(p, i) * pow(&mid, w - i - j) * pow(&top, j);
            }
        }
        Ok(acc)
    }
}

/// Replaces every 1 cell by a free cell: the result describes everything
/// lying below some member of the row. Bubbles are already downward
/// closed, so they pass through untouched.
pub fn downward_closure(row: &MultiRow) -> MultiRow {
    MultiRow::new(
        row.window(),
        row.zeros_mask(),
        0,
        row.bubble_masks().to_vec(),
    )
    .expect("masks of a valid row stay valid")
}

/// Computes the pair-count matrix of `(b1, b2)`.
///
/// Works row-wise over the zero cover of `b1`: the downward closure of
/// each row is restricted to the zeros of `b2` by re-running the
/// enumeration engine, and every member `x` of the row then counts the
/// restricted members below it, stratified by weight.
pub fn joint_profile(b1: &Pbf, b2: &Pbf) -> Result<JointMatrix, Error> {
    if b1.window() != b2.window() {
        return Err(Error::WindowMismatch);
    }
    let w = b1.width();
    let mut matrix = JointMatrix::zero(w);
    for row in enumerate_zeros(b1).rows() {
        let below = restrict_to_zeros(downward_closure(row), b2)?;
        if below.is_empty() {
            continue;
        }
        for x in row.members() {
            let i = w - x.weight() as usize;
            for rho in below.rows() {
                if let Some(profile) = rho.le_weight_profile(x.ones()) {
                    for (j, c) in profile.into_iter().enumerate() {
                        if !c.is_zero() {
                            matrix.a[i][j] += c;
                        }
                    }
                }
            }
        }
    }
    Ok(matrix)
}

/// Both orientations of a filter pair, so the joint distribution can be
/// evaluated for any argument order: when `p > pi` the roles of the two
/// filters swap and the mirrored matrix applies.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    forward: JointMatrix,
    reverse: JointMatrix,
}

impl JointDistribution {
    pub fn new(b1: &Pbf, b2: &Pbf) -> Result<Self, Error> {
        Ok(JointDistribution {
            forward: joint_profile(b1, b2)?,
            reverse: joint_profile(b2, b1)?,
        })
    }

    pub fn forward(&self) -> &JointMatrix {
        &self.forward
    }

    pub fn reverse(&self) -> &JointMatrix {
        &self.reverse
    }

    pub fn eval(&self, p: f64, pi: f64) -> Result<f64, Error> {
        if p <= pi {
            self.forward.eval_ordered(p, pi)
        } else {
            self.reverse.eval_ordered(pi, p)
        }
    }

    pub fn eval_exact(&self, p: &BigRational, pi: &BigRational) -> Result<BigRational, Error> {
        if p <= pi {
            self.forward.eval_ordered_exact(p, pi)
        } else {
            self.reverse.eval_ordered_exact(pi, p)
        }
    }
}
