//! Positive Boolean functions in disjunctive normal form.
//!
//! A [`Pbf`] is a [`Window`] plus an ordered list of [`Implicant`]s, each a
//! set of window positions. The function is 1 on a bitstring exactly when
//! some implicant has all of its positions set. Positivity is built in:
//! there is no way to express a negated variable.
//!
//! Two degenerate values are legal and handled throughout: an empty
//! implicant list is the constant-0 function, and a list containing the
//! empty implicant is the constant-1 function.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use crate::error::Error;
use crate::window::Window;

/// A conjunction of plain (unnegated) variables, stored as the sorted set
/// of their window positions. The empty implicant is the constant-1 term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implicant {
    positions: Vec<i32>,
}

impl Implicant {
    /// Builds an implicant from any iterator of positions; sorts and dedups.
    pub fn new<I: IntoIterator<Item = i32>>(positions: I) -> Self {
        let mut positions: Vec<i32> = positions.into_iter().collect();
        positions.sort_unstable();
        positions.dedup();
        Implicant { positions }
    }

    /// The constant-1 marker.
    pub fn empty() -> Self {
        Implicant {
            positions: Vec::new(),
        }
    }

    pub fn positions(&self) -> &[i32] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, pos: i32) -> bool {
        self.positions.binary_search(&pos).is_ok()
    }

    pub fn is_subset_of(&self, other: &Implicant) -> bool {
        self.positions.iter().all(|p| other.contains(*p))
    }

    /// The implicant translated by `offset`.
    pub fn shift(&self, offset: i32) -> Implicant {
        Implicant {
            positions: self.positions.iter().map(|p| p + offset).collect(),
        }
    }

    /// Bitmask relative to `window`; every position must lie inside it.
    pub(crate) fn mask(&self, window: &Window) -> Result<u64, Error> {
        let mut m = 0u64;
        for &p in &self.positions {
            let idx = window.index(p).ok_or(Error::OutOfWindow {
                position: p,
                lo: window.lo(),
                hi: window.hi(),
            })?;
            m |= 1u64 << idx;
        }
        Ok(m)
    }

    pub(crate) fn from_mask(mask: u64, window: &Window) -> Implicant {
        let positions = (0..window.width())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| window.position(i))
            .collect();
        Implicant { positions }
    }
}

impl fmt::Display for Implicant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.positions {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

/// Ordering used for canonical implicant lists: by size, then by positions.
pub(crate) fn canonical_cmp(a: &Implicant, b: &Implicant) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.positions.cmp(&b.positions))
}

/// A fixed assignment of one bit per window position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bitstring {
    window: Window,
    mask: u64,
}

impl Bitstring {
    pub fn from_mask(window: Window, mask: u64) -> Self {
        Bitstring {
            window,
            mask: mask & window.mask(),
        }
    }

    /// Builds from bits listed in window order (`lo` first).
    pub fn from_bits(window: Window, bits: &[bool]) -> Result<Self, Error> {
        if bits.len() != window.width() {
            return Err(Error::WindowMismatch);
        }
        let mut mask = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                mask |= 1u64 << i;
            }
        }
        Ok(Bitstring { window, mask })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Mask of positions holding a 1, indexed from `window.lo()`.
    pub fn ones(&self) -> u64 {
        self.mask
    }

    pub fn bit(&self, pos: i32) -> Option<bool> {
        self.window.index(pos).map(|i| self.mask >> i & 1 == 1)
    }

    pub fn weight(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn complement(&self) -> Bitstring {
        Bitstring {
            window: self.window,
            mask: !self.mask & self.window.mask(),
        }
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.window.width() {
            write!(f, "{}", self.mask >> i & 1)?;
        }
        Ok(())
    }
}

/// A positive Boolean function given as a window and an ordered DNF.
///
/// The implicant order is significant: it is the constraint-processing
/// order of the zero-set enumeration, so two `Pbf`s with the same
/// implicants in different order denote the same function but may yield
/// differently shaped (always equivalent) row covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pbf {
    window: Window,
    implicants: Vec<Implicant>,
}

impl Pbf {
    pub fn new(window: Window, implicants: Vec<Implicant>) -> Result<Self, Error> {
        for imp in &implicants {
            for &p in imp.positions() {
                if window.index(p).is_none() {
                    return Err(Error::OutOfWindow {
                        position: p,
                        lo: window.lo(),
                        hi: window.hi(),
                    });
                }
            }
        }
        Ok(Pbf { window, implicants })
    }

    /// The one-variable identity filter `{{0}}`.
    pub fn identity() -> Self {
        Pbf {
            window: Window::new(0, 0).unwrap(),
            implicants: vec![Implicant::new([0])],
        }
    }

    /// The constant function over `window`.
    pub fn constant(window: Window, value: bool) -> Self {
        let implicants = if value {
            vec![Implicant::empty()]
        } else {
            Vec::new()
        };
        Pbf { window, implicants }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn width(&self) -> usize {
        self.window.width()
    }

    pub fn implicants(&self) -> &[Implicant] {
        &self.implicants
    }

    /// Number of implicants.
    pub fn implicant_count(&self) -> usize {
        self.implicants.len()
    }

    pub fn is_constant_zero(&self) -> bool {
        self.implicants.is_empty()
    }

    pub fn is_constant_one(&self) -> bool {
        self.implicants.iter().any(|i| i.is_empty())
    }

    /// Implicants as window-relative bitmasks, in list order.
    pub(crate) fn masks(&self) -> Vec<u64> {
        self.implicants
            .iter()
            .map(|i| i.mask(&self.window).expect("validated at construction"))
            .collect()
    }

    pub(crate) fn from_masks(window: Window, masks: Vec<u64>) -> Pbf {
        let implicants = masks
            .iter()
            .map(|&m| Implicant::from_mask(m, &window))
            .collect();
        Pbf { window, implicants }
    }

    /// Evaluates the Boolean function on a bitstring over the same window.
    pub fn eval_bool(&self, x: &Bitstring) -> Result<bool, Error> {
        if x.window() != self.window {
            return Err(Error::WindowMismatch);
        }
        Ok(self.eval_mask(x.ones()))
    }

    pub(crate) fn eval_mask(&self, ones: u64) -> bool {
        self.implicants
            .iter()
            .any(|imp| imp.mask(&self.window).expect("validated") & !ones == 0)
    }

    /// Min/max extension to real inputs: the max over implicants of the min
    /// of `values` over the implicant's positions.
    ///
    /// Degenerate cases follow the min/max algebra: the constant-0 function
    /// returns `-inf` and the constant-1 function `+inf`.
    pub fn eval_real(&self, values: &[f64]) -> Result<f64, Error> {
        if values.len() != self.width() {
            return Err(Error::WindowMismatch);
        }
        let mut out = f64::NEG_INFINITY;
        for imp in &self.implicants {
            let mut term = f64::INFINITY;
            for &p in imp.positions() {
                let idx = self.window.index(p).expect("validated");
                term = term.min(values[idx]);
            }
            out = out.max(term);
        }
        Ok(out)
    }

    /// Removes every implicant that is a superset of another one (keeping
    /// the first copy of duplicates); survivors keep their relative order.
    pub fn absorb(&self) -> Pbf {
        let keep = absorb_keep_flags(&self.masks());
        let implicants = self
            .implicants
            .iter()
            .zip(keep)
            .filter_map(|(imp, k)| if k { Some(imp.clone()) } else { None })
            .collect();
        Pbf {
            window: self.window,
            implicants,
        }
    }

    /// True when no implicant contains another (i.e. `absorb` is a no-op).
    pub fn is_normalized(&self) -> bool {
        self.absorb().implicant_count() == self.implicant_count()
    }

    /// Returns the function with its implicant list in canonical order
    /// (by size, then lexicographically by positions).
    pub fn canonical(&self) -> Pbf {
        let mut implicants = self.implicants.clone();
        implicants.sort_by(canonical_cmp);
        Pbf {
            window: self.window,
            implicants,
        }
    }

    /// The dual function `b*(x) = !b(!x)` in normalized DNF, i.e. the
    /// minimal transversals of the implicant hypergraph.
    ///
    /// Clause-by-clause product with absorption after every step; the
    /// result comes out in canonical order. Constants dualize to the
    /// opposite constant.
    pub fn dualize(&self) -> Pbf {
        let clauses = self.masks();
        let mut cur: Vec<u64> = vec![0];
        for &clause in &clauses {
            if clause == 0 {
                // A constant-1 term in the primal annihilates the dual.
                cur.clear();
                break;
            }
            let mut next = Vec::with_capacity(cur.len() * clause.count_ones() as usize);
            for &t in &cur {
                let mut rest = clause;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    next.push(t | bit);
                    rest ^= bit;
                }
            }
            absorb_masks(&mut next);
            cur = next;
        }
        Pbf::from_masks(self.window, cur).canonical()
    }

    /// The DNF of the composed filter `self ∘ inner`: every variable of
    /// `self` at offset `j` is substituted by `inner` shifted by `j`, the
    /// conjunction of DNFs is expanded distributively with absorption after
    /// each product, and the final list is absorbed and canonically sorted.
    ///
    /// The output window is the interval sum, so the width is
    /// `self.width() + inner.width() - 1`.
    pub fn compose(&self, inner: &Pbf) -> Result<Pbf, Error> {
        let window = self.window.sum(&inner.window)?;
        let mut result: Vec<u64> = Vec::new();
        for outer_imp in &self.implicants {
            let mut cur: Vec<u64> = vec![0];
            for &j in outer_imp.positions() {
                let shifted: Vec<u64> = inner
                    .implicants
                    .iter()
                    .map(|imp| {
                        imp.shift(j)
                            .mask(&window)
                            .expect("interval sum covers all shifts")
                    })
                    .collect();
                let mut next = Vec::with_capacity(cur.len() * shifted.len().max(1));
                for &t in &cur {
                    for &s in &shifted {
                        next.push(t | s);
                    }
                }
                absorb_masks(&mut next);
                cur = next;
                if cur.is_empty() {
                    break;
                }
            }
            result.extend(cur);
        }
        absorb_masks(&mut result);
        Ok(Pbf::from_masks(window, result).canonical())
    }
}

impl fmt::Display for Pbf {
    /// Renders in the DNF file format: a `window` header line followed by
    /// one implicant per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "window {}", self.window)?;
        for imp in &self.implicants {
            writeln!(f, "{imp}")?;
        }
        Ok(())
    }
}

/// Keeps the inclusion-minimal masks: drops duplicates (first copy wins)
/// and every proper superset of another mask. Survivors keep their order.
pub(crate) fn absorb_masks(masks: &mut Vec<u64>) {
    let keep = absorb_keep_flags(masks);
    let mut i = 0;
    masks.retain(|_| {
        let k = keep[i];
        i += 1;
        k
    });
}

fn absorb_keep_flags(masks: &[u64]) -> Vec<bool> {
    let mut keep = vec![true; masks.len()];
    let mut seen = HashSet::with_capacity(masks.len());
    for (i, &m) in masks.iter().enumerate() {
        if !seen.insert(m) {
            keep[i] = false;
        }
    }
    // Popcount buckets: a strict subset always has strictly fewer bits.
    let mut order: Vec<usize> = (0..masks.len()).filter(|&i| keep[i]).collect();
    order.sort_by_key(|&i| masks[i].count_ones());
    let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); 65];
    for &i in &order {
        let m = masks[i];
        let pc = m.count_ones() as usize;
        let mut minimal = true;
        'scan: for bucket in buckets.iter().take(pc) {
            for &k in bucket {
                if k & !m == 0 {
                    minimal = false;
                    break 'scan;
                }
            }
        }
        if minimal {
            buckets[pc].push(m);
        } else {
            keep[i] = false;
        }
    }
    keep
}
