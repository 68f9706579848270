//! Problem files: named operators, states, Borel sets and functions plus
//! experiment blocks that reference them by name.

use std::collections::BTreeMap;

use hv_core::linalg::{ComplexMatrix, HermitianOperator, Projector};
use hv_core::quantum::{BorelSet, Interval, Piece, PiecewiseFn, PureState};
use hv_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A scalar written either as a bare real or as an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Scalar> for Complex64 {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Real(re) => Complex64::new(re, 0.0),
            Scalar::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSpec {
    /// `null` means unbounded below.
    pub lo: Option<f64>,
    /// `null` means unbounded above.
    pub hi: Option<f64>,
    #[serde(default = "yes")]
    pub lo_closed: bool,
    #[serde(default = "yes")]
    pub hi_closed: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    #[serde(default)]
    pub quad: f64,
    #[serde(default)]
    pub slope: f64,
    #[serde(default)]
    pub intercept: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    #[serde(default)]
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<PieceSpec>,
    /// Values at the breakpoints; defaults to the right-hand piece.
    pub point_values: Option<Vec<f64>>,
}

/// Numerical tolerances; every field may be overridden in the file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub hermitian: f64,
    pub projector: f64,
    pub cluster: f64,
    pub snap: f64,
    pub reconstruction: f64,
    pub identity: f64,
    pub roundtrip: f64,
    pub budget_sigmas: f64,
    pub chsh_slack: f64,
    pub homomorphism: f64,
    pub commute: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: hv_core::linalg::HERMITIAN_TOL,
            projector: hv_core::linalg::PROJECTOR_TOL,
            cluster: hv_core::linalg::CLUSTER_TOL,
            snap: hv_core::quantum::SNAP_TOL,
            reconstruction: 1e-8,
            identity: 1e-9,
            roundtrip: 1e-8,
            budget_sigmas: 4.0,
            chsh_slack: hv_core::bell::CHSH_SLACK,
            homomorphism: hv_core::bell::HOMOMORPHISM_TOL,
            commute: hv_core::linalg::COMMUTE_TOL,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentSpec {
    Spectra {
        name: Option<String>,
        operator: String,
    },
    Prob {
        name: Option<String>,
        operator: String,
        state: String,
        set: String,
    },
    Quantile {
        name: Option<String>,
        operator: String,
        state: String,
    },
    Verify {
        name: Option<String>,
        operator: String,
        state: String,
        function: Option<String>,
        samples: Option<usize>,
        seed: Option<u64>,
    },
    Roundtrip {
        name: Option<String>,
        operator: String,
        function: Option<String>,
    },
    Chsh {
        name: Option<String>,
        e1: String,
        e2: String,
        f1: String,
        f2: String,
        state: String,
    },
}

impl ExperimentSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentSpec::Spectra { .. } => "spectra",
            ExperimentSpec::Prob { .. } => "prob",
            ExperimentSpec::Quantile { .. } => "quantile",
            ExperimentSpec::Verify { .. } => "verify",
            ExperimentSpec::Roundtrip { .. } => "roundtrip",
            ExperimentSpec::Chsh { .. } => "chsh",
        }
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            ExperimentSpec::Spectra { name, .. }
            | ExperimentSpec::Prob { name, .. }
            | ExperimentSpec::Quantile { name, .. }
            | ExperimentSpec::Verify { name, .. }
            | ExperimentSpec::Roundtrip { name, .. }
            | ExperimentSpec::Chsh { name, .. } => name.as_deref(),
        }
    }

    fn references(&self) -> Vec<(&'static str, &str)> {
        match self {
            ExperimentSpec::Spectra { operator, .. } => vec![("operator", operator)],
            ExperimentSpec::Prob {
                operator, state, set, ..
            } => vec![("operator", operator), ("state", state), ("borel set", set)],
            ExperimentSpec::Quantile { operator, state, .. } => vec![("operator", operator), ("state", state)],
            ExperimentSpec::Verify {
                operator,
                state,
                function,
                ..
            } => {
                let mut refs = vec![("operator", operator.as_str()), ("state", state.as_str())];
                refs.extend(function.as_deref().map(|f| ("function", f)));
                refs
            }
            ExperimentSpec::Roundtrip { operator, function, .. } => {
                let mut refs = vec![("operator", operator.as_str())];
                refs.extend(function.as_deref().map(|f| ("function", f)));
                refs
            }
            ExperimentSpec::Chsh {
                e1, e2, f1, f2, state, ..
            } => vec![
                ("projector", e1),
                ("projector", e2),
                ("projector", f1),
                ("projector", f2),
                ("state", state),
            ],
        }
    }
}

/// On-disk layout of a problem file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub dimension: usize,
    #[serde(default)]
    pub operators: BTreeMap<String, Vec<Vec<Scalar>>>,
    #[serde(default)]
    pub states: BTreeMap<String, Vec<Scalar>>,
    #[serde(default)]
    pub borel_sets: BTreeMap<String, Vec<IntervalSpec>>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default)]
    pub experiments: Vec<ExperimentSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// A validated problem: every operator is Hermitian, every name resolves.
#[derive(Debug, Clone)]
pub struct Problem {
    pub dimension: usize,
    pub operators: BTreeMap<String, HermitianOperator>,
    pub states: BTreeMap<String, PureState>,
    pub borel_sets: BTreeMap<String, BorelSet>,
    pub functions: BTreeMap<String, PiecewiseFn>,
    pub experiments: Vec<ExperimentSpec>,
    pub tolerances: Tolerances,
}

impl Problem {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let spec: ProblemSpec =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed problem file: {e}")))?;
        Self::from_spec(spec)
    }

    pub fn from_spec(spec: ProblemSpec) -> Result<Self, CliError> {
        let n = spec.dimension;
        if n == 0 {
            return Err(CliError::Input("dimension must be positive".into()));
        }
        let tol = spec.tolerances;

        let mut operators = BTreeMap::new();
        for (name, rows) in spec.operators {
            let m = matrix(&name, n, rows)?;
            let op = HermitianOperator::with_tolerance(m, tol.hermitian)
                .map_err(|e| CliError::Input(format!("operator `{name}`: {e}")))?;
            operators.insert(name, op);
        }

        let mut states = BTreeMap::new();
        for (name, entries) in spec.states {
            if entries.len() != n {
                return Err(CliError::Input(format!(
                    "state `{name}` has {} entries, expected {n}",
                    entries.len()
                )));
            }
            let h = PureState::new(entries.into_iter().map(Complex64::from).collect())
                .map_err(|e| CliError::Input(format!("state `{name}`: {e}")))?;
            states.insert(name, h);
        }

        let mut borel_sets = BTreeMap::new();
        for (name, intervals) in spec.borel_sets {
            let ivs = intervals
                .iter()
                .map(|iv| interval(&name, iv))
                .collect::<Result<Vec<_>, _>>()?;
            borel_sets.insert(name, BorelSet::from_intervals(ivs));
        }

        let mut functions = BTreeMap::new();
        for (name, f) in spec.functions {
            functions.insert(name.clone(), function(&name, f)?);
        }

        let problem = Self {
            dimension: n,
            operators,
            states,
            borel_sets,
            functions,
            experiments: spec.experiments,
            tolerances: tol,
        };
        problem.check_references()?;
        Ok(problem)
    }

    fn check_references(&self) -> Result<(), CliError> {
        for exp in &self.experiments {
            for (what, name) in exp.references() {
                let found = match what {
                    "operator" | "projector" => self.operators.contains_key(name),
                    "state" => self.states.contains_key(name),
                    "borel set" => self.borel_sets.contains_key(name),
                    _ => self.functions.contains_key(name),
                };
                if !found {
                    return Err(CliError::Input(format!(
                        "{} experiment references unknown {what} `{name}`",
                        exp.kind()
                    )));
                }
            }
            if let ExperimentSpec::Chsh { e1, e2, f1, f2, .. } = exp {
                for name in [e1, e2, f1, f2] {
                    self.projector(name)?;
                }
            }
            if let ExperimentSpec::Verify { samples: Some(0), .. } = exp {
                return Err(CliError::Input("verify needs at least one sample".into()));
            }
        }
        Ok(())
    }

    pub fn operator(&self, name: &str) -> &HermitianOperator {
        &self.operators[name]
    }

    pub fn state(&self, name: &str) -> &PureState {
        &self.states[name]
    }

    pub fn projector(&self, name: &str) -> Result<Projector, CliError> {
        Projector::with_tolerance(self.operators[name].matrix().clone(), self.tolerances.projector)
            .map_err(|e| CliError::Input(format!("operator `{name}` is not a projector: {e}")))
    }
}

fn matrix(name: &str, n: usize, rows: Vec<Vec<Scalar>>) -> Result<ComplexMatrix, CliError> {
    // Accept either `n` rows of `n` entries or one flat row-major list.
    let square = rows.len() == n && rows.iter().all(|r| r.len() == n);
    let flat = rows.len() == 1 && rows[0].len() == n * n;
    let entries: Vec<Scalar> = if square || flat {
        rows.into_iter().flatten().collect()
    } else {
        return Err(CliError::Input(format!("operator `{name}` is not {n}x{n}")));
    };
    ComplexMatrix::from_row_major(n, entries.into_iter().map(Complex64::from).collect())
        .map_err(|e| CliError::Input(format!("operator `{name}`: {e}")))
}

fn interval(name: &str, iv: &IntervalSpec) -> Result<Interval, CliError> {
    let lo = iv.lo.unwrap_or(f64::NEG_INFINITY);
    let hi = iv.hi.unwrap_or(f64::INFINITY);
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(CliError::Input(format!("borel set `{name}` has a reversed interval")));
    }
    Ok(Interval::new(lo, iv.lo_closed, hi, iv.hi_closed))
}

fn function(name: &str, f: FunctionSpec) -> Result<PiecewiseFn, CliError> {
    let pieces: Vec<Piece> = f
        .pieces
        .iter()
        .map(|p| Piece::quadratic(p.quad, p.slope, p.intercept))
        .collect();
    let point_values = match f.point_values {
        Some(v) => v,
        None => f
            .breakpoints
            .iter()
            .zip(pieces.iter().skip(1))
            .map(|(&x, p)| p.eval(x))
            .collect(),
    };
    PiecewiseFn::new(f.breakpoints, pieces, point_values)
        .map_err(|e| CliError::Input(format!("function `{name}`: {e}")))
}
