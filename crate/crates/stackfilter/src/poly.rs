//! Exact polynomial machinery: small nonnegative counting polynomials in
//! one variable and the transfer polynomial of a filter.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `C(n, k)` as a big integer.
pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    binomial(BigUint::from(n), BigUint::from(k))
}

/// Coefficients of `(1 + t)^n`, ascending.
pub(crate) fn binomial_row(n: usize) -> Vec<BigUint> {
    (0..=n).map(|k| binomial_big(n, k)).collect()
}

/// Coefficients of `(1 + t)^b - t^b`: members of a b-cell bubble counted
/// by weight (everything except the all-ones pattern).
pub(crate) fn bubble_factor(b: usize) -> Vec<BigUint> {
    let mut row = binomial_row(b);
    row[b] -= BigUint::one();
    while row.len() > 1 && row.last().map(BigUint::is_zero) == Some(true) {
        row.pop();
    }
    row
}

pub(crate) fn poly_one() -> Vec<BigUint> {
    vec![BigUint::one()]
}

/// Multiply by `t^k`.
pub(crate) fn upoly_shift(mut p: Vec<BigUint>, k: usize) -> Vec<BigUint> {
    if k > 0 {
        let mut out = vec![BigUint::zero(); k];
        out.append(&mut p);
        p = out;
    }
    p
}

/// Product truncated to `cap` coefficients.
pub(crate) fn upoly_mul(a: &[BigUint], b: &[BigUint], cap: usize) -> Vec<BigUint> {
    let len = (a.len() + b.len() - 1).min(cap.max(1));
    let mut out = vec![BigUint::zero(); len];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() || i >= len {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// One exact term `coeff * p^p_exp * q^q_exp` of a mixed-form polynomial,
/// with `q` standing for `1 - p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedMonomial {
    pub coeff: BigInt,
    pub p_exp: u32,
    pub q_exp: u32,
}

impl MixedMonomial {
    pub fn new(coeff: impl Into<BigInt>, p_exp: u32, q_exp: u32) -> Self {
        MixedMonomial {
            coeff: coeff.into(),
            p_exp,
            q_exp,
        }
    }
}

impl fmt::Display for MixedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mag = self.coeff.abs();
        let bare = self.p_exp == 0 && self.q_exp == 0;
        if !mag.is_one() || bare {
            write!(f, "{mag}")?;
            if !bare {
                write!(f, " ")?;
            }
        }
        match self.p_exp {
            0 => {}
            1 => write!(f, "p")?,
            e => write!(f, "p^{e}")?,
        }
        if self.p_exp > 0 && self.q_exp > 0 {
            write!(f, " ")?;
        }
        match self.q_exp {
            0 => {}
            1 => write!(f, "q")?,
            e => write!(f, "q^{e}")?,
        }
        Ok(())
    }
}

/// The distribution transfer of a filter: an exact polynomial in the
/// per-sample probability `p`, kept in two forms.
///
/// The mixed form lists `p^a q^b` terms as the zero-set rows produced
/// them, one group of monomials per row; it is display-faithful but not
/// canonical. The expanded form substitutes `q = 1 - p` and collects, and
/// is the canonical representation all comparisons use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferPolynomial {
    mixed: Vec<MixedMonomial>,
    expanded: Vec<BigInt>,
}

impl TransferPolynomial {
    /// Builds from mixed monomials, expanding in `p` exactly.
    pub fn from_mixed(mixed: Vec<MixedMonomial>) -> Self {
        let mut expanded: Vec<BigInt> = Vec::new();
        for m in &mixed {
            // coeff * p^a * (1-p)^e
            let a = m.p_exp as usize;
            let e = m.q_exp as usize;
            if expanded.len() < a + e + 1 {
                expanded.resize(a + e + 1, BigInt::zero());
            }
            let mut sign = BigInt::one();
            for k in 0..=e {
                let term = &m.coeff * &sign * BigInt::from(binomial_big(e, k));
                expanded[a + k] += term;
                sign = -sign;
            }
        }
        while expanded.len() > 1 && expanded.last().map(BigInt::is_zero) == Some(true) {
            expanded.pop();
        }
        if expanded.is_empty() {
            expanded.push(BigInt::zero());
        }
        TransferPolynomial { mixed, expanded }
    }

    /// Mixed-form terms in production order.
    pub fn mixed(&self) -> &[MixedMonomial] {
        &self.mixed
    }

    /// Mixed terms collected: like monomials summed, zeros dropped, sorted
    /// by `(p_exp, q_exp)`.
    pub fn collected_mixed(&self) -> Vec<MixedMonomial> {
        let mut terms: Vec<MixedMonomial> = Vec::new();
        for m in &self.mixed {
            match terms
                .iter_mut()
                .find(|t| t.p_exp == m.p_exp && t.q_exp == m.q_exp)
            {
                Some(t) => t.coeff += &m.coeff,
                None => terms.push(m.clone()),
            }
        }
        terms.retain(|t| !t.coeff.is_zero());
        terms.sort_by_key(|t| (t.p_exp, t.q_exp));
        terms
    }

    /// Expanded coefficients in `p`, ascending degree, trailing zeros
    /// trimmed (a single zero for the zero polynomial).
    pub fn expanded(&self) -> &[BigInt] {
        &self.expanded
    }

    pub fn degree(&self) -> usize {
        self.expanded.len() - 1
    }

    /// Horner evaluation of the expanded form.
    pub fn eval(&self, p: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.expanded.iter().rev() {
            acc = acc * p + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, p: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.expanded.iter().rev() {
            acc = acc * p + BigRational::from(c.clone());
        }
        acc
    }
}

impl fmt::Display for TransferPolynomial {
    /// Renders the expanded form as `c0 + c1 p + c2 p^2 + ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.expanded.iter().enumerate() {
            if c.is_zero() && self.expanded.len() > 1 {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mag = c.abs();
            if !mag.is_one() || k == 0 {
                write!(f, "{mag}")?;
                if k > 0 {
                    write!(f, " ")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "p")?,
                _ => write!(f, "p^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Renders mixed monomials joined with signs, Eq-style:
/// `p^2 q^2 + p q - p q^3 + ...`.
pub fn render_mixed(terms: &[MixedMonomial]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        if i == 0 {
            if t.coeff.is_negative() {
                out.push('-');
            }
        } else if t.coeff.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&t.to_string());
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
