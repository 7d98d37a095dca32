//! Computational learning theory on finite and discrete objects.
//!
//! The crate computes VC dimensions and growth functions of hypothesis
//! spaces, evaluates sample-complexity bounds, runs learners, estimates
//! uniform-convergence and PAC success probabilities over discrete
//! distributions, and enumerates the No-Free-Lunch construction exactly.
//! Probabilities and errors are exact rationals throughout.
//!
//! ```
//! use vclab::{vc_dimension, HypothesisSpace, Instance};
//!
//! let pool: Vec<Instance> = (0..6).map(Instance::int).collect();
//! let verdict = vc_dimension(&HypothesisSpace::intervals(), &pool, 4).unwrap();
//! assert_eq!(verdict.value, 2);
//! ```

pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod formula;
pub mod harness;
pub mod hypothesis;
pub mod io;
pub mod learners;
mod linsep;
pub mod model;
pub mod nfl;
pub mod rational;
pub mod space;

pub use bounds::{
    bounds_report, epsilon0, hoeffding_tail, m0_pac, m0_singleton, m0_ucp, tail_to_expectation_bound, BoundsReport,
};
pub use combinatorics::{
    growth_function, sauer_bound, sauer_poly_bound, shatters, vc_dimension, vc_dimension_with, GrowthValue,
    ShatterVerdict, VcSearch, VcStatus, VcVerdict,
};
pub use error::{Error, Result};
pub use harness::{
    estimate_pac_probability, estimate_ucp_probability, exact_pac_probability, exact_ucp_probability,
    symmetrized_deviation, u_statistic, v_statistic, ExactReport, TrialReport,
};
pub use hypothesis::{Hypothesis, HypothesisKey, Labeling};
pub use learners::{apply, LearningFunction, SemLearner};
pub use model::{
    approximation_error, empirical_distribution, empirical_opt, loss, sample_error, true_error, DiscreteDistribution,
    Flagged, Instance, MultiSample, Sample,
};
pub use nfl::{build_nfl_instance, nfl_expected_errors, nfl_report, NflInstance, NflReport};
pub use rational::Rational;
pub use space::{Dichotomies, HypothesisSpace, SpaceKind};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    pub mod spaces {}
    #[doc = include_str!("../../../book/src/vc-dimension.md")]
    pub mod vc_dimension {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    pub mod bounds {}
    #[doc = include_str!("../../../book/src/learners.md")]
    pub mod learners {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    pub mod simulation {}
    #[doc = include_str!("../../../book/src/no-free-lunch.md")]
    pub mod no_free_lunch {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    pub mod formulas {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
