use std::fmt;

use crate::error::Error;

/// Widest window the bitmask-based engine supports.
pub const MAX_WIDTH: usize = 64;

/// An inclusive integer interval of signal offsets.
///
/// The interval can sit anywhere on the integer line (e.g. `-4..4` or
/// `1..11`); internally every position is addressed by its 0-based index
/// relative to `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    lo: i32,
    hi: i32,
}

impl Window {
    pub fn new(lo: i32, hi: i32) -> Result<Self, Error> {
        if lo > hi {
            return Err(Error::InvalidWindow(format!("{lo}..{hi} is reversed")));
        }
        let width = (hi as i64) - (lo as i64) + 1;
        if width > MAX_WIDTH as i64 {
            return Err(Error::InvalidWindow(format!(
                "{lo}..{hi} is {width} positions wide, limit is {MAX_WIDTH}"
            )));
        }
        Ok(Window { lo, hi })
    }

    /// The symmetric window `-half..half`.
    pub fn centered(half: u32) -> Result<Self, Error> {
        Window::new(-(half as i32), half as i32)
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.hi
    }

    pub fn width(&self) -> usize {
        (self.hi - self.lo) as usize + 1
    }

    /// 0-based index of `pos`, or `None` when it falls outside the window.
    pub fn index(&self, pos: i32) -> Option<usize> {
        if pos < self.lo || pos > self.hi {
            None
        } else {
            Some((pos - self.lo) as usize)
        }
    }

    /// Position addressed by a 0-based index. Panics when out of range.
    pub fn position(&self, index: usize) -> i32 {
        assert!(index < self.width(), "index {index} out of window {self}");
        self.lo + index as i32
    }

    pub fn positions(&self) -> impl Iterator<Item = i32> {
        self.lo..=self.hi
    }

    /// Bitmask with one set bit per window position.
    pub fn mask(&self) -> u64 {
        mask_of_width(self.width())
    }

    /// Interval sum, the window of a composed filter.
    pub fn sum(&self, other: &Window) -> Result<Window, Error> {
        Window::new(self.lo + other.lo, self.hi + other.hi)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

pub(crate) fn mask_of_width(width: usize) -> u64 {
    debug_assert!(width <= MAX_WIDTH);
    if width == MAX_WIDTH {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}
