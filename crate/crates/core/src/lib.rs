//! Bipartite behavior boxes `P(a,b|x,y)` generated from two-qubit entangled
//! states measured in sequence: Alice's outcome follows the Born rule, Bob's
//! follows the power-law rule `|a0|^n / (|a0|^n + |a1|^n)`.
//!
//! The math is generic over the scalar type (`f32` or `f64`, see
//! [`Scalar`]). The aliases at the bottom of this file pin the common
//! `f64` instantiation used by the command-line tool.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod boxgen;
pub mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod rules;
pub mod scalar;

pub use analysis::{
    chsh_observables_closed_form, chsh_value, correlator, isotropy_check, no_signaling_report,
    nonisotropic_chsh_closed_form, nosignal_residual_eq15, pr_angle_region, pr_distance,
    solve_power_for_chsh, ChshReport, NoSignalingReport, Party,
};
pub use boxgen::{bell_closed_form, chsh_observables_box, joint_distribution, pr_box};
pub use error::{Error, Result};
pub use model::{
    basis_change, BehaviorBox, ComplexAmplitude, MeasurementConfig, ProbabilityRule, TwoQubitState,
};
pub use oracle::{born_oracle, mc_sampler, SampledBox};
pub use rules::{check_axioms, eval_f0, AxiomReport, OutcomeRule};
pub use scalar::Scalar;

/// Double-double scalar.
pub type DoubleDouble = twofloat::TwoFloat;

pub type BehaviorBoxF64 = BehaviorBox<f64>;
pub type BehaviorBoxF32 = BehaviorBox<f32>;
pub type TwoQubitStateF64 = TwoQubitState<f64>;
pub type TwoQubitStateF32 = TwoQubitState<f32>;
pub type MeasurementConfigF64 = MeasurementConfig<f64>;
pub type MeasurementConfigF32 = MeasurementConfig<f32>;
pub type ProbabilityRuleF64 = ProbabilityRule<f64>;
pub type ProbabilityRuleF32 = ProbabilityRule<f32>;
pub type ChshReportF64 = ChshReport<f64>;
pub type NoSignalingReportF64 = NoSignalingReport<f64>;
