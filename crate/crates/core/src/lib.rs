//! Exact machinery for building a real α whose multiples `{α n_k}` have
//! logarithmic discrepancy: Fibonacci numeration, arithmetic in Q(√5),
//! nested rational intervals, and discrepancy of finite point sets.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod alpha;
pub mod decimal;
pub mod discrepancy;
pub mod fib;
pub mod golden;

pub use alpha::{
    check_growth, construct_alpha, min_c, AlphaApprox, AlphaError, CertifiedPoint, ConstantChoice,
    GrowthReport, GrowthSequence, Targets,
};
pub use discrepancy::{
    brute_force_discrepancy, dn_series, exact_discrepancy, partition_discrepancy,
    segment_discrepancy, DiscrepancyError, DiscrepancyReport, PointSet, SeriesRow,
};
pub use fib::{
    apply_procedure1, apply_procedure2, fib, partition, to_positive_rep, zeckendorf, Block,
    FibDigits, NumerationError, SegmentPartition, ZeckDigits,
};
pub use golden::{frac_phi_k, sigma_permutation, GoldenError, GoldenNumber, Substitution};
