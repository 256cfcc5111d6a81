//! Multivalued rows: compact descriptions of sets of bitstrings.
//!
//! A row fixes some positions to 0 or 1, leaves some free, and groups the
//! rest into *bubbles*: a bubble is a set of at least two positions that
//! are forbidden to be simultaneously 1. A bitstring belongs to the row
//! when it matches every fixed cell and every bubble keeps at least one 0.
//! A single row can therefore stand for exponentially many bitstrings,
//! and a handful of rows can cover the whole zero set of a DNF.
//!
//! Rows render with cells `0`, `1`, `2` (free) and `n<k>` for the k-th
//! bubble, e.g. `2 n1 n1 2 0 2 n1 n1 2`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::pbf::{Bitstring, Implicant};
use crate::poly::{binomial_row, bubble_factor, poly_one, upoly_mul, upoly_shift};
use crate::window::Window;

/// The value of one row position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Zero,
    One,
    Free,
    /// Member of the bubble with this row-local label.
    Bubble(usize),
}

/// A set of bitstrings over a window, in fixed/free/bubble form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiRow {
    window: Window,
    zeros: u64,
    ones: u64,
    /// Bubble position masks in creation order. Each has at least two bits
    /// and is disjoint from the fixed cells and from every other bubble.
    bubbles: Vec<u64>,
}

impl MultiRow {
    /// The row containing every bitstring over `window`.
    pub fn all_free(window: Window) -> Self {
        MultiRow {
            window,
            zeros: 0,
            ones: 0,
            bubbles: Vec::new(),
        }
    }

    /// Builds a row from raw masks, normalizing size-1 bubbles to zeros.
    pub fn new(window: Window, zeros: u64, ones: u64, bubbles: Vec<u64>) -> Result<Self, Error> {
        let wmask = window.mask();
        let mut row = MultiRow {
            window,
            zeros: zeros & wmask,
            ones: ones & wmask,
            bubbles: Vec::new(),
        };
        if row.zeros & row.ones != 0 {
            return Err(Error::InvalidRow("a cell cannot be both 0 and 1".into()));
        }
        let mut used = row.zeros | row.ones;
        for b in bubbles {
            let b = b & wmask;
            if b == 0 {
                continue;
            }
            if b & used != 0 {
                return Err(Error::InvalidRow(
                    "bubbles must not overlap other cells".into(),
                ));
            }
            used |= b;
            row.push_bubble(b);
        }
        Ok(row)
    }

    /// Builds a row from a cell list in window order. Bubble labels only
    /// need to be consistent within the slice.
    pub fn from_cells(window: Window, cells: &[Cell]) -> Result<Self, Error> {
        if cells.len() != window.width() {
            return Err(Error::WindowMismatch);
        }
        let mut zeros = 0u64;
        let mut ones = 0u64;
        let mut labels: Vec<(usize, u64)> = Vec::new();
        for (i, cell) in cells.iter().enumerate() {
            let bit = 1u64 << i;
            match cell {
                Cell::Zero => zeros |= bit,
                Cell::One => ones |= bit,
                Cell::Free => {}
                Cell::Bubble(lab) => match labels.iter_mut().find(|(l, _)| l == lab) {
                    Some((_, m)) => *m |= bit,
                    None => labels.push((*lab, bit)),
                },
            }
        }
        MultiRow::new(
            window,
            zeros,
            ones,
            labels.into_iter().map(|(_, m)| m).collect(),
        )
    }

    fn push_bubble(&mut self, mask: u64) {
        debug_assert!(mask != 0);
        if mask.count_ones() == 1 {
            self.zeros |= mask;
        } else {
            self.bubbles.push(mask);
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn width(&self) -> usize {
        self.window.width()
    }

    pub fn zeros_mask(&self) -> u64 {
        self.zeros
    }

    pub fn ones_mask(&self) -> u64 {
        self.ones
    }

    pub fn free_mask(&self) -> u64 {
        let mut used = self.zeros | self.ones;
        for b in &self.bubbles {
            used |= b;
        }
        !used & self.window.mask()
    }

    pub fn bubble_masks(&self) -> &[u64] {
        &self.bubbles
    }

    /// The cell at a window position (`None` outside the window).
    pub fn cell(&self, pos: i32) -> Option<Cell> {
        let i = self.window.index(pos)?;
        let bit = 1u64 << i;
        if self.zeros & bit != 0 {
            return Some(Cell::Zero);
        }
        if self.ones & bit != 0 {
            return Some(Cell::One);
        }
        for (lab, b) in self.bubbles.iter().enumerate() {
            if b & bit != 0 {
                return Some(Cell::Bubble(lab));
            }
        }
        Some(Cell::Free)
    }

    pub fn cells(&self) -> Vec<Cell> {
        self.window
            .positions()
            .map(|p| self.cell(p).unwrap())
            .collect()
    }

    /// Membership test for a bitstring over the same window.
    pub fn contains(&self, x: &Bitstring) -> Result<bool, Error> {
        if x.window() != self.window {
            return Err(Error::WindowMismatch);
        }
        Ok(self.contains_mask(x.ones()))
    }

    /// Membership test on a raw ones-mask (indexed from the window's low
    /// end).
    pub fn contains_mask(&self, ones: u64) -> bool {
        if ones & self.zeros != 0 || self.ones & !ones != 0 {
            return false;
        }
        self.bubbles.iter().all(|&b| b & !ones != 0)
    }

    /// Number of bitstrings in the row: `2^#free * prod(2^|bubble| - 1)`.
    pub fn cardinality(&self) -> BigUint {
        let mut n = BigUint::one() << self.free_mask().count_ones();
        for b in &self.bubbles {
            n *= (BigUint::one() << b.count_ones()) - BigUint::one();
        }
        n
    }

    /// True when no member of the row covers `a_star`, i.e. imposing the
    /// constraint would leave the row unchanged. Holds exactly when some
    /// position of `a_star` is a 0 cell or some bubble lies inside it.
    pub fn satisfies(&self, a_star: &Implicant) -> bool {
        self.satisfies_mask(self.implicant_mask(a_star))
    }

    pub(crate) fn satisfies_mask(&self, a: u64) -> bool {
        if a & self.zeros != 0 {
            return true;
        }
        self.bubbles.iter().any(|&b| b & !a == 0)
    }

    fn implicant_mask(&self, a_star: &Implicant) -> u64 {
        a_star
            .mask(&self.window)
            .expect("constraint positions must lie inside the row window")
    }

    /// Carves out of the row exactly the members that do not cover
    /// `a_star`, as a list of pairwise disjoint rows.
    ///
    /// When the row already satisfies the constraint it is returned alone.
    /// Otherwise the bubbles meeting `a_star` are processed in creation
    /// order: each yields a son in which that bubble shrinks to its part
    /// inside `a_star` (the remainder becomes free), while the continuing
    /// branch fixes that part to 1 and turns the remainder into a new
    /// bubble. In the last branch the free cells of `a_star` become a new
    /// bubble; a single cell degenerates to 0 and no remaining cell kills
    /// the branch. The empty list means no member survives.
    pub fn impose(&self, a_star: &Implicant) -> Vec<MultiRow> {
        self.impose_mask(self.implicant_mask(a_star))
    }

    pub(crate) fn impose_mask(&self, a: u64) -> Vec<MultiRow> {
        if self.satisfies_mask(a) {
            return vec![self.clone()];
        }
        let meeting: Vec<usize> = (0..self.bubbles.len())
            .filter(|&i| self.bubbles[i] & a != 0)
            .collect();
        let mut sons = Vec::with_capacity(meeting.len() + 1);
        // Branch state: intersections fixed to 1 so far, remainders respawned.
        let mut branch = self.clone();
        for &i in &meeting {
            let bubble = self.bubbles[i];
            let inter = bubble & a;
            let rem = bubble & !a;
            debug_assert!(rem != 0, "a bubble inside a_star would have satisfied it");

            let mut son = branch.clone();
            son.replace_bubble(bubble, inter);
            sons.push(son);

            branch.ones |= inter;
            branch.replace_bubble(bubble, rem);
        }
        let free_a = a & branch.free_mask();
        if free_a != 0 {
            branch.push_bubble(free_a);
            sons.push(branch);
        }
        sons
    }

    /// Swaps the bubble with mask `old` for `new` (normalizing size 1 to a
    /// 0 cell); positions of `old` outside `new` become free.
    fn replace_bubble(&mut self, old: u64, new: u64) {
        let idx = self
            .bubbles
            .iter()
            .position(|&b| b == old)
            .expect("bubble present");
        if new.count_ones() == 1 {
            self.bubbles.remove(idx);
            self.zeros |= new;
        } else {
            self.bubbles[idx] = new;
        }
    }

    /// Iterates over every bitstring in the row.
    pub fn members(&self) -> Members {
        let mut groups = vec![Group {
            mask: self.free_mask(),
            exclude_full: false,
        }];
        groups.extend(self.bubbles.iter().map(|&b| Group {
            mask: b,
            exclude_full: true,
        }));
        Members {
            window: self.window,
            base: self.ones,
            groups,
            current: None,
        }
    }

    /// Coefficients of `t^#ones (1+t)^#free prod((1+t)^|b| - t^|b|)`:
    /// the number of members with each possible count of ones.
    pub fn weight_profile(&self) -> Vec<BigUint> {
        let w = self.width();
        let mut poly = upoly_shift(poly_one(), self.ones.count_ones() as usize);
        poly = upoly_mul(
            &poly,
            &binomial_row(self.free_mask().count_ones() as usize),
            w + 1,
        );
        for b in &self.bubbles {
            poly = upoly_mul(&poly, &bubble_factor(b.count_ones() as usize), w + 1);
        }
        poly.resize(w + 1, BigUint::zero());
        poly
    }

    /// Weight profile of `{y in row : y <= x}`: how many members lie below
    /// the given bitstring, counted by their number of ones. `None` when
    /// the restriction is empty.
    pub fn weight_profile_below(&self, x: &Bitstring) -> Result<Option<Vec<BigUint>>, Error> {
        if x.window() != self.window {
            return Err(Error::WindowMismatch);
        }
        Ok(self.le_weight_profile(x.ones()))
    }

    /// Mask-level core of [`MultiRow::weight_profile_below`].
    ///
    /// Positions where `x` is 0 force `y` to 0 there; a bubble touching a
    /// forced 0 is already satisfied and its surviving positions are free,
    /// while a bubble entirely under ones of `x` keeps its constraint.
    pub(crate) fn le_weight_profile(&self, x_ones: u64) -> Option<Vec<BigUint>> {
        if self.ones & !x_ones != 0 {
            return None;
        }
        let w = self.width();
        let mut poly = upoly_shift(poly_one(), self.ones.count_ones() as usize);
        let free_live = (self.free_mask() & x_ones).count_ones() as usize;
        poly = upoly_mul(&poly, &binomial_row(free_live), w + 1);
        for &b in &self.bubbles {
            if b & !x_ones == 0 {
                poly = upoly_mul(&poly, &bubble_factor(b.count_ones() as usize), w + 1);
            } else {
                let live = (b & x_ones).count_ones() as usize;
                poly = upoly_mul(&poly, &binomial_row(live), w + 1);
            }
        }
        poly.resize(w + 1, BigUint::zero());
        Some(poly)
    }
}

struct Group {
    mask: u64,
    exclude_full: bool,
}

impl Group {
    /// Largest admissible state in ascending submask order.
    fn last(&self) -> u64 {
        if self.exclude_full {
            // The predecessor of the full mask is the mask minus its
            // lowest set bit.
            self.mask & self.mask.wrapping_sub(1)
        } else {
            self.mask
        }
    }
}

/// Iterator over the bitstrings of a row, produced by an odometer over the
/// free cells and each bubble's admissible patterns.
pub struct Members {
    window: Window,
    base: u64,
    groups: Vec<Group>,
    current: Option<Vec<u64>>,
}

fn assemble(window: Window, base: u64, states: &[u64]) -> Bitstring {
    let mut ones = base;
    for s in states {
        ones |= s;
    }
    Bitstring::from_mask(window, ones)
}

impl Iterator for Members {
    type Item = Bitstring;

    fn next(&mut self) -> Option<Self::Item> {
        let window = self.window;
        let base = self.base;
        match &mut self.current {
            None => {
                let states = vec![0u64; self.groups.len()];
                let out = assemble(window, base, &states);
                self.current = Some(states);
                Some(out)
            }
            Some(states) => {
                for (i, group) in self.groups.iter().enumerate() {
                    if states[i] == group.last() {
                        states[i] = 0; // wrapped; carry into the next group
                        continue;
                    }
                    let m = group.mask;
                    states[i] = (states[i] | !m).wrapping_add(1) & m;
                    return Some(assemble(window, base, states));
                }
                None
            }
        }
    }
}

impl fmt::Display for MultiRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Bubble indices are renumbered by first appearance, 1-based.
        let mut order: Vec<usize> = Vec::new();
        let mut first = true;
        for cell in self.cells() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match cell {
                Cell::Zero => write!(f, "0")?,
                Cell::One => write!(f, "1")?,
                Cell::Free => write!(f, "2")?,
                Cell::Bubble(lab) => {
                    let k = match order.iter().position(|&l| l == lab) {
                        Some(k) => k,
                        None => {
                            order.push(lab);
                            order.len() - 1
                        }
                    };
                    write!(f, "n{}", k + 1)?;
                }
            }
        }
        Ok(())
    }
}
