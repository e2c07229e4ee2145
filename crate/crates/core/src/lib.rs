//! Sum-functions of m-tuples of uniform spacings on the circle.
//!
//! The crate builds circular samples and their spacings, evaluates the
//! Greenwood, Moran (log-spacings) and entropy sums together with general
//! tuple statistics, standardises them with closed-form null moments, and
//! checks those moments by seeded Monte Carlo over exponential windows.
//!
//! It is `no_std` and needs only `alloc`.
//!
//! ```
//! use spacings_core::asymptotics::{closed_form_moments, standardize};
//! use spacings_core::statistics::statistic_v;
//! use spacings_core::{CircularSample, StatisticKind};
//!
//! let sample = CircularSample::from_unit_observations(&[0.2, 0.5, 0.9])?;
//! let g = statistic_v(&sample, 1, StatisticKind::Greenwood)?;
//! let moments = closed_form_moments(StatisticKind::Greenwood, sample.arc_count(), 1)?;
//! let report = standardize(&g, &moments)?;
//! assert!((report.z + 0.8).abs() < 1e-12);
//! # Ok::<(), spacings_core::Error>(())
//! ```

#![no_std]
// NaN must fail these comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod asymptotics;
pub mod error;
pub mod montecarlo;
pub mod spacings;
pub mod specfun;
pub mod statistics;
pub mod sum;

pub use asymptotics::{
    closed_form_moments, clt_condition_ratio, disjoint_moments, estimate_general_moments,
    holst_vs_corrected, mean_correction, null_moments, per_term_moments,
    sigma_m_closed_form_large_m, standardize, AsymptoticMoments, GeneralMoments,
    HolstComparison, PerTermMoments, TestReport,
};
pub use error::{Error, ReplicationFailure, Result};
pub use montecarlo::{
    estimate_sigma_m, simulate_null, Estimate, McConfig, McSummary, SeededStream, WindowFunction,
};
pub use spacings::{m_spacings, CircularSample, SpacingScheme, SpacingsVector};
pub use statistics::{
    statistic_q, statistic_r, statistic_v, statistic_w, statistic_z, Indexed, KindLabel,
    NamedStatistic, Repeated, StatisticKind, StatisticResult, SumFunction, SumOf, TupleFunction,
    TupleFunctionFamily, Variant,
};
