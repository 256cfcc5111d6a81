//! Zero-set enumeration: all bitstrings on which a DNF evaluates to 0,
//! produced as a disjoint union of multivalued rows.
//!
//! Each implicant is a constraint ("do not cover this set"). A LIFO
//! working stack holds rows paired with the index of their next pending
//! constraint; the top row is popped, advanced past every constraint it
//! already satisfies, and split by the pending one. Rows that outlive all
//! constraints move to the final list. Splitting preserves disjointness,
//! so the final rows partition the zero set exactly.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Error;
use crate::pbf::Pbf;
use crate::row::MultiRow;
use crate::window::Window;

/// A stack entry: a row plus the index of its next unimposed constraint.
/// `pending == h` marks a final row.
#[derive(Debug, Clone)]
pub struct WorkItem {
    pub row: MultiRow,
    pub pending: usize,
}

/// Simple counters describing one enumeration run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    /// Work items pushed onto the working stack.
    pub rows_pushed: u64,
    /// Impositions that split a row into two or more sons.
    pub splits: u64,
    /// Impositions that killed a row outright.
    pub cancellations: u64,
}

/// The final disjoint cover of a zero set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSet {
    window: Window,
    rows: Vec<MultiRow>,
    member_count: BigUint,
    stats: EngineStats,
}

impl RowSet {
    fn new(window: Window, rows: Vec<MultiRow>, stats: EngineStats) -> Self {
        let member_count = rows.iter().map(|r| r.cardinality()).sum();
        RowSet {
            window,
            rows,
            member_count,
            stats,
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Final rows in order of arrival.
    pub fn rows(&self) -> &[MultiRow] {
        &self.rows
    }

    /// Number of final rows (`R`).
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Total number of covered bitstrings (`N`).
    pub fn member_count(&self) -> &BigUint {
        &self.member_count
    }

    pub fn is_empty(&self) -> bool {
        self.member_count.is_zero()
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    /// Membership in the union (for tests and verification).
    pub fn contains_mask(&self, ones: u64) -> bool {
        self.rows.iter().any(|r| r.contains_mask(ones))
    }
}

/// Enumerates `{x : pbf(x) = 0}` as a disjoint row cover.
///
/// The constant-0 function yields the single all-free row; the constant-1
/// function yields no rows at all. Expects a normalized DNF: redundant
/// implicants stay correct but waste work.
pub fn enumerate_zeros(pbf: &Pbf) -> RowSet {
    restrict(MultiRow::all_free(pbf.window()), pbf)
}

/// Runs the same enumeration starting from an arbitrary row: the result
/// covers `{x in start : pbf(x) = 0}`.
pub fn restrict_to_zeros(start: MultiRow, pbf: &Pbf) -> Result<RowSet, Error> {
    if start.window() != pbf.window() {
        return Err(Error::WindowMismatch);
    }
    Ok(restrict(start, pbf))
}

fn restrict(start: MultiRow, pbf: &Pbf) -> RowSet {
    let window = pbf.window();
    let constraints = pbf.masks();
    let h = constraints.len();
    let mut stats = EngineStats::default();
    let mut finals: Vec<MultiRow> = Vec::new();
    let mut work: Vec<WorkItem> = vec![WorkItem {
        row: start,
        pending: 0,
    }];
    stats.rows_pushed = 1;

    while let Some(WorkItem { row, mut pending }) = work.pop() {
        while pending < h && row.satisfies_mask(constraints[pending]) {
            pending += 1;
        }
        if pending == h {
            finals.push(row);
            continue;
        }
        let sons = row.impose_mask(constraints[pending]);
        match sons.len() {
            0 => stats.cancellations += 1,
            1 => {}
            _ => stats.splits += 1,
        }
        // Reverse so the first son is processed first (LIFO).
        for son in sons.into_iter().rev() {
            stats.rows_pushed += 1;
            work.push(WorkItem {
                row: son,
                pending: pending + 1,
            });
        }
    }
    RowSet::new(window, finals, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbf::{Bitstring, Implicant};
    use crate::row::Cell;

    fn b1() -> Pbf {
        let w = Window::new(-4, 4).unwrap();
        Pbf::new(
            w,
            vec![
                Implicant::new([-2, -1, 0]),
                Implicant::new([-1, 0, 1]),
                Implicant::new([0, 1, 2]),
                Implicant::new([-4, -3, -2, 1, 2, 3]),
                Implicant::new([-3, -2, -1, 1, 2, 3]),
                Implicant::new([-3, -2, -1, 2, 3, 4]),
            ],
        )
        .unwrap()
    }

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

    #[test]
    fn values_are_shareable_across_threads() {
        fn check<T: Send + Sync>() {}
        check::<Pbf>();
        check::<MultiRow>();
        check::<RowSet>();
        check::<Bitstring>();
    }

    #[test]
    fn shared_function_enumerates_concurrently() {
        let b = std::sync::Arc::new(b1());
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let b = b.clone();
                std::thread::spawn(move || enumerate_zeros(&b).member_count().clone())
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), BigUint::from(376u32));
        }
    }

    #[test]
    fn b1_counts() {
        let rs = enumerate_zeros(&b1());
        assert_eq!(rs.member_count(), &BigUint::from(376u32));
        assert_eq!(rs.row_count(), 5);
    }

    #[test]
    fn b1_rows_arrive_in_trace_order() {
        let w = Window::new(-4, 4).unwrap();
        let rs = enumerate_zeros(&b1());
        let expected = [
            "2 n1 n1 2 0 2 n1 n1 2",
            "2 1 1 n1 0 0 1 1 n1",
            "0 1 1 0 0 1 1 1 2",
            "2 2 2 0 1 n1 n1 2 2",
            "2 2 0 1 1 0 2 2 2",
        ];
        let got: Vec<String> = rs.rows().iter().map(|r| r.to_string()).collect();
        assert_eq!(got, expected);
        for (r, e) in rs.rows().iter().zip(expected) {
            assert_eq!(r, &row(w, e));
        }
    }

    #[test]
    fn b1_rows_are_disjoint_and_exact() {
        let b = b1();
        let rs = enumerate_zeros(&b);
        let w = b.window();
        let mut n = 0u32;
        for m in 0..512u64 {
            let hits = rs.rows().iter().filter(|r| r.contains_mask(m)).count();
            let is_zero = !b.eval_bool(&Bitstring::from_mask(w, m)).unwrap();
            assert_eq!(hits, usize::from(is_zero), "mask {m:b}");
            n += is_zero as u32;
        }
        assert_eq!(n, 376);
    }

    #[test]
    fn constant_functions() {
        let w = Window::new(0, 4).unwrap();
        let zero = Pbf::constant(w, false);
        let rs = enumerate_zeros(&zero);
        assert_eq!(rs.row_count(), 1);
        assert_eq!(rs.member_count(), &BigUint::from(32u32));
        assert_eq!(rs.rows()[0], MultiRow::all_free(w));

        let one = Pbf::constant(w, true);
        let rs = enumerate_zeros(&one);
        assert_eq!(rs.row_count(), 0);
        assert!(rs.is_empty());
    }

    #[test]
    fn single_variable() {
        let rs = enumerate_zeros(&Pbf::identity());
        assert_eq!(rs.row_count(), 1);
        assert_eq!(rs.member_count(), &BigUint::from(1u32));
        let w = Window::new(0, 0).unwrap();
        assert_eq!(rs.rows()[0], row(w, "0"));
    }

    #[test]
    fn restrict_from_arbitrary_row() {
        // Restrict a bubbled row to the zeros of a second function.
        let w = Window::new(1, 11).unwrap();
        let r0 = row(w, "n1 n1 n1 2 2 0 n2 n2 n2 2 2");
        let b2 = Pbf::new(w, vec![Implicant::new([3, 9, 10])]).unwrap();
        let rs = restrict_to_zeros(r0.clone(), &b2).unwrap();
        assert_eq!(rs.row_count(), 3);
        for m in 0..(1u64 << 11) {
            let in_cover = rs.contains_mask(m);
            let expected =
                r0.contains_mask(m) && !b2.eval_bool(&Bitstring::from_mask(w, m)).unwrap();
            assert_eq!(in_cover, expected, "mask {m:b}");
        }
    }

    #[test]
    fn window_mismatch_rejected() {
        let start = MultiRow::all_free(Window::new(0, 3).unwrap());
        assert_eq!(
            restrict_to_zeros(start, &Pbf::identity()).unwrap_err(),
            Error::WindowMismatch
        );
    }
}
