//! Run reports. The payload is a pure function of the input bytes, the
//! command and the seeds; the wall-clock duration sits outside it.

use serde::Serialize;

use crate::problem::Tolerances;

pub const TOOL: &str = "hv";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Payload {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// SHA-256 of the problem file bytes, lowercase hex.
    pub input_digest: String,
    pub seeds: Vec<u64>,
    pub tolerances: Tolerances,
    pub experiments: Vec<ExperimentReport>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub payload: Payload,
    pub duration_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub passed: bool,
    #[serde(flatten)]
    pub result: ExperimentResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentResult {
    Spectra(SpectraResult),
    Prob(ProbResult),
    Quantile(QuantileResult),
    Verify(VerifyResult),
    Roundtrip(RoundtripResult),
    Chsh(ChshResult),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectraResult {
    pub operator: String,
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub projector_traces: Vec<f64>,
    pub reconstruction_residual: f64,
    /// Largest deviation of `sum P_k = I`, `P_j P_k = 0`.
    pub resolution_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbResult {
    pub operator: String,
    pub state: String,
    pub set: String,
    pub probability: f64,
    pub complement_probability: f64,
    /// Fiber measure of the proposition for the set.
    pub fiber_measure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantileResult {
    pub operator: String,
    pub state: String,
    pub cuts: Vec<f64>,
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    pub fiber_integral: f64,
    pub expectation: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyResult {
    pub operator: String,
    pub state: String,
    pub function: Option<String>,
    pub samples: usize,
    pub seed: u64,
    pub outcomes: Vec<f64>,
    pub counts: Vec<u64>,
    pub empirical: Vec<f64>,
    pub predicted: Vec<f64>,
    pub budgets: Vec<f64>,
    pub max_abs_deviation: f64,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripResult {
    pub operator: String,
    pub function: Option<String>,
    /// `max |tau(f) - T|`.
    pub residual: f64,
    /// `max |tau(g . f) - g(T)|` when a function is given.
    pub function_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshResult {
    pub state: String,
    pub projectors: [String; 4],
    /// `<T_ij>` with `i` over `E` and `j` over `F`.
    pub correlations: [[f64; 2]; 2],
    pub value: f64,
    pub classical_bound_respected: bool,
    pub commuting: bool,
    /// Present only for commuting configurations.
    pub joint: Option<JointCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointCheck {
    pub homomorphism_residual: f64,
    pub preserves_operations: bool,
    pub images_commute: bool,
    pub intersection_residual: f64,
    pub pointwise_identity_holds: bool,
    pub fiber_integrals: [[f64; 2]; 2],
    pub fiber_value: f64,
    pub integral_residual: f64,
}
