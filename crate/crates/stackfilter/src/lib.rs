//! Exact analysis of stack filters from the DNF of their positive Boolean
//! function.
//!
//! A stack filter slides a window over a signal and outputs the min/max
//! evaluation of a positive (monotone) Boolean function on the window
//! samples; medians and the LULU smoother family are the classic cases.
//! For independent identically distributed inputs the whole output
//! distribution is governed by one polynomial in the per-sample
//! probability. This crate computes that polynomial exactly, without ever
//! listing the zero set bit by bit: the zeros are enumerated as a small
//! disjoint union of multivalued rows, and every distribution quantity is
//! read off the rows.
//!
//! What is here:
//!
//! * [`Pbf`]: parse ([`parse_dnf`]), evaluate, normalize ([`Pbf::absorb`]),
//!   dualize and compose positive DNFs; build LULU cascades
//!   ([`build_ced`]) and run filters over signals ([`apply`]).
//! * [`enumerate_zeros`]: the row enumeration engine, with
//!   [`MultiRow`]/[`RowSet`] as its vocabulary.
//! * [`transfer`], [`a_profile`], [`rank_selection`]: the transfer
//!   polynomial with exact integer coefficients, the zero-set weight
//!   profile, and rank selection probabilities as exact rationals.
//! * [`joint_profile`] / [`JointDistribution`]: the joint output
//!   distribution of two filters on the same window.
//! * [`balanced_profile`] / [`balanced_eval`]: distributions of filters
//!   over mirrored argument pairs `b(x, y)`.
//! * [`Oracle`]: naive brute-force counterparts of everything, for
//!   verification.
//!
//! ```
//! use stackfilter::{build_ced, enumerate_zeros, transfer};
//!
//! // The 9-wide filter U2L2, as a normalized DNF.
//! let b = build_ced("U2L2")?;
//! assert_eq!(b.implicant_count(), 6);
//!
//! // Its zero set: 376 bitstrings covered by just 5 rows.
//! let rows = enumerate_zeros(&b);
//! assert_eq!(rows.member_count().to_string(), "376");
//! assert_eq!(rows.row_count(), 5);
//!
//! // The output distribution transfer polynomial, exactly.
//! let phi = transfer(&rows);
//! assert_eq!(phi.eval(0.5), 376.0 / 512.0);
//! # Ok::<(), stackfilter::Error>(())
//! ```

mod balanced;
mod distribution;
mod engine;
mod error;
mod filter;
mod joint;
mod lulu;
mod oracle;
mod parse;
mod pbf;
mod poly;
mod row;
mod window;

pub use balanced::{
    balanced_eval, balanced_eval_f64, balanced_profile, threshold_probs, BalancedPbf,
    BalancedProfile, ExponentTuple, ThresholdQuadruple,
};
pub use distribution::{
    a_profile, rank_selection, row_contribution, transfer, AProfile, RankVector,
};
pub use engine::{enumerate_zeros, restrict_to_zeros, EngineStats, RowSet, WorkItem};
pub use error::Error;
pub use filter::{apply, Boundary};
pub use joint::{downward_closure, joint_profile, JointDistribution, JointMatrix};
pub use lulu::{build_ced, lower_smoother, upper_smoother};
pub use oracle::{verify_balanced, verify_joint, verify_pbf, Oracle, OracleReport};
pub use parse::{balanced_to_dnf_string, parse_balanced_dnf, parse_dnf};
pub use pbf::{Bitstring, Implicant, Pbf};
pub use poly::{binomial_big, render_mixed, MixedMonomial, TransferPolynomial};
pub use row::{Cell, Members, MultiRow};
pub use window::{Window, MAX_WIDTH};

pub use num_bigint::BigUint;
pub use num_rational::BigRational;
