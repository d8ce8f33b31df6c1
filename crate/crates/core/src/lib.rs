//! Rank-based extreme tail association.
//!
//! The crate computes the sample ETA coefficient `eta_{k,n}(X|Y)` from
//! concomitant reverse ranks, the tail-asymmetry statistic
//! `Delta_{k,n} = eta_{k,n}(X|Y) - eta_{k,n}(Y|X)`, the empirical upper tail
//! copula slice they integrate, and multiplier-bootstrap tests built on top.
//! Three analytical copula families with closed-form tail copulas serve as
//! population oracles and simulation sources.
//!
//! Everything here is `no_std` with `alloc`; file formats, CLI and
//! parallel drivers live in the companion `eta` crate.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is used on purpose: NaN must fail every range check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bootstrap;
pub mod copula;
mod error;
pub mod estimators;
pub mod normal;
pub mod quadrature;
pub mod ranks;
mod rng;

pub use bootstrap::{
    bootstrap_delta, bootstrap_eta, draw_multipliers, replicate_multipliers, sweep_verdict,
    test_delta_zero, test_eta_zero, weighted_reverse_rank, Bootstrap, BootstrapConfig,
    MultiplierScheme, Replicate, SweepVerdict, TestResult,
};
pub use copula::{CopulaModel, PopulationMethod, PopulationValues};
pub use error::{Error, Result};
pub use estimators::{
    delta_kn, empirical_tail_copula_slice, eta_from_ranks, eta_from_tail_copula, eta_kn, eta_sweep,
    eta_upper_bound, DeltaEstimate, Direction, EtaEstimate, TailCopulaGrid,
};
pub use normal::normal_quantile;
pub use ranks::{concomitant_ranks, reverse_ranks, ConcomitantRanks, PairedSample, TiePolicy};
