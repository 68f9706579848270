//! The six experiment kinds and their pass/fail rules.

use std::sync::Arc;

use hv_core::bell::{
    boolean_homomorphism_report, chsh_combination, classical_chsh_functions, ChshConfig, PropositionQuadruple,
};
use hv_core::hidden::{
    compose, fiber_subset, proposition_from, quantile_function, sample_with, tau, ClassicalObservable, Proposition,
};
use hv_core::linalg::{eigh, SpectralDecomposition};
use hv_core::quantum::{expectation, functional_calculus, prob, prob_snapped};
use hv_core::Execution;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::problem::{ExperimentSpec, Problem, Tolerances};
use crate::report::*;

pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Spectra,
    Prob,
    Quantile,
    Verify,
    Roundtrip,
    Chsh,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Spectra => "spectra",
            Command::Prob => "prob",
            Command::Quantile => "quantile",
            Command::Verify => "verify",
            Command::Roundtrip => "roundtrip",
            Command::Chsh => "chsh",
        }
    }
}

/// Run-time overrides. Seed precedence: `seed`, then the experiment's own
/// seed, then `env_seed`, then 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub env_seed: Option<u64>,
    pub samples: Option<usize>,
    pub execution: Option<Execution>,
}

/// Parses, validates and runs every experiment of kind `command` in `input`.
pub fn run(command: Command, input: &[u8], overrides: &Overrides) -> Result<Payload, CliError> {
    let text = std::str::from_utf8(input).map_err(|_| CliError::Input("problem file is not UTF-8".into()))?;
    let problem = Problem::parse(text)?;
    if overrides.samples == Some(0) {
        return Err(CliError::Input("--samples must be at least 1".into()));
    }

    let mut selected: Vec<ExperimentSpec> = problem
        .experiments
        .iter()
        .filter(|e| e.kind() == command.as_str())
        .cloned()
        .collect();
    if selected.is_empty() && command == Command::Spectra {
        selected = problem
            .operators
            .keys()
            .map(|op| ExperimentSpec::Spectra {
                name: Some(op.clone()),
                operator: op.clone(),
            })
            .collect();
    }
    if selected.is_empty() {
        return Err(CliError::Input(format!(
            "problem file has no `{}` experiments",
            command.as_str()
        )));
    }

    let runner = Runner {
        problem: &problem,
        tol: problem.tolerances,
        overrides,
    };
    let mut seeds = Vec::new();
    let mut experiments = Vec::with_capacity(selected.len());
    for (i, spec) in selected.iter().enumerate() {
        let name = spec
            .name()
            .map(str::to_owned)
            .unwrap_or_else(|| format!("{}-{i}", command.as_str()));
        let (result, passed) = runner.run(spec)?;
        if let ExperimentResult::Verify(v) = &result {
            seeds.push(v.seed);
        }
        experiments.push(ExperimentReport { name, passed, result });
    }

    Ok(Payload {
        tool: TOOL,
        version: VERSION,
        command: command.as_str().to_owned(),
        input_digest: hex::encode(Sha256::digest(input)),
        seeds,
        tolerances: problem.tolerances,
        passed: experiments.iter().all(|e| e.passed),
        experiments,
    })
}

struct Runner<'a> {
    problem: &'a Problem,
    tol: Tolerances,
    overrides: &'a Overrides,
}

impl Runner<'_> {
    fn decompose(&self, operator: &str) -> Result<Arc<SpectralDecomposition>, CliError> {
        Ok(Arc::new(eigh(self.problem.operator(operator), self.tol.cluster)?))
    }

    fn run(&self, spec: &ExperimentSpec) -> Result<(ExperimentResult, bool), CliError> {
        match spec {
            ExperimentSpec::Spectra { operator, .. } => self.spectra(operator),
            ExperimentSpec::Prob {
                operator, state, set, ..
            } => self.prob(operator, state, set),
            ExperimentSpec::Quantile { operator, state, .. } => self.quantile(operator, state),
            ExperimentSpec::Verify {
                operator,
                state,
                function,
                samples,
                seed,
                ..
            } => {
                let seed = self.overrides.seed.or(*seed).or(self.overrides.env_seed).unwrap_or(0);
                let samples = self.overrides.samples.or(*samples).unwrap_or(DEFAULT_SAMPLES);
                self.verify(operator, state, function.as_deref(), samples, seed)
            }
            ExperimentSpec::Roundtrip { operator, function, .. } => self.roundtrip(operator, function.as_deref()),
            ExperimentSpec::Chsh {
                e1, e2, f1, f2, state, ..
            } => self.chsh([e1, e2, f1, f2], state),
        }
    }

    fn spectra(&self, operator: &str) -> Result<(ExperimentResult, bool), CliError> {
        let dec = self.decompose(operator)?;
        let reconstruction_residual = dec.reconstruct().max_abs_diff(self.problem.operator(operator).matrix());
        let (identity, ortho) = dec.invariant_residuals();
        let resolution_residual = identity.max(ortho);
        let passed =
            reconstruction_residual <= self.tol.reconstruction && resolution_residual <= self.tol.reconstruction;
        let result = SpectraResult {
            operator: operator.to_owned(),
            eigenvalues: dec.eigenvalues().to_vec(),
            multiplicities: dec.multiplicities(),
            projector_traces: dec.projectors().iter().map(|p| p.matrix().trace().re).collect(),
            reconstruction_residual,
            resolution_residual,
        };
        Ok((ExperimentResult::Spectra(result), passed))
    }

    fn prob(&self, operator: &str, state: &str, set: &str) -> Result<(ExperimentResult, bool), CliError> {
        let dec = self.decompose(operator)?;
        let h = self.problem.state(state);
        let b = &self.problem.borel_sets[set];
        let probability = prob_snapped(&dec, h, b, self.tol.snap)?;
        let complement_probability = prob_snapped(&dec, h, &b.complement(), self.tol.snap)?;
        let fiber_measure = fiber_subset(&proposition_from(dec.clone(), b.clone()), h)?.measure();
        let exact = prob(&dec, h, b)?;
        let passed = (probability + complement_probability - 1.0).abs() <= self.tol.identity
            && (fiber_measure - exact).abs() <= self.tol.identity;
        let result = ProbResult {
            operator: operator.to_owned(),
            state: state.to_owned(),
            set: b.to_string(),
            probability,
            complement_probability,
            fiber_measure,
        };
        Ok((ExperimentResult::Prob(result), passed))
    }

    fn quantile(&self, operator: &str, state: &str) -> Result<(ExperimentResult, bool), CliError> {
        let dec = self.decompose(operator)?;
        let h = self.problem.state(state);
        let step = quantile_function(&dec, h)?;
        let fiber_integral = step.integrate(|v| v);
        let expectation = expectation(&dec, h)?;
        let residual = (fiber_integral - expectation).abs();
        let result = QuantileResult {
            operator: operator.to_owned(),
            state: state.to_owned(),
            cuts: step.cuts().to_vec(),
            values: step.values().to_vec(),
            weights: step.weights(),
            fiber_integral,
            expectation,
            residual,
        };
        Ok((ExperimentResult::Quantile(result), residual <= self.tol.identity))
    }

    fn verify(
        &self,
        operator: &str,
        state: &str,
        function: Option<&str>,
        samples: usize,
        seed: u64,
    ) -> Result<(ExperimentResult, bool), CliError> {
        let mut obs = ClassicalObservable::new(self.decompose(operator)?);
        if let Some(g) = function {
            obs = compose(&self.problem.functions[g], &obs);
        }
        let h = self.problem.state(state);
        let exec = self.overrides.execution.unwrap_or_default();
        let report = sample_with(&obs, h, samples, seed, exec)?;
        let n = samples as f64;
        let budgets: Vec<f64> = report
            .predicted
            .iter()
            .map(|&p| self.tol.budget_sigmas * (p * (1.0 - p) / n).max(0.0).sqrt())
            .collect();
        let passed = report
            .empirical
            .iter()
            .zip(&report.predicted)
            .zip(&budgets)
            .all(|((e, p), b)| (e - p).abs() <= *b);
        let degrees_of_freedom = report.degrees_of_freedom();
        let result = VerifyResult {
            operator: operator.to_owned(),
            state: state.to_owned(),
            function: function.map(str::to_owned),
            samples,
            seed,
            outcomes: report.outcomes,
            counts: report.counts,
            empirical: report.empirical,
            predicted: report.predicted,
            budgets,
            max_abs_deviation: report.max_abs_deviation,
            chi_square: report.chi_square,
            degrees_of_freedom,
        };
        Ok((ExperimentResult::Verify(result), passed))
    }

    fn roundtrip(&self, operator: &str, function: Option<&str>) -> Result<(ExperimentResult, bool), CliError> {
        let dec = self.decompose(operator)?;
        let obs = ClassicalObservable::new(dec.clone());
        let residual = tau(&obs)
            .matrix()
            .max_abs_diff(self.problem.operator(operator).matrix());
        let function_residual = function.map(|name| {
            let g = &self.problem.functions[name];
            tau(&compose(g, &obs))
                .matrix()
                .max_abs_diff(functional_calculus(&dec, g).matrix())
        });
        let passed = residual <= self.tol.roundtrip && function_residual.is_none_or(|r| r <= self.tol.roundtrip);
        let result = RoundtripResult {
            operator: operator.to_owned(),
            function: function.map(str::to_owned),
            residual,
            function_residual,
        };
        Ok((ExperimentResult::Roundtrip(result), passed))
    }

    fn chsh(&self, names: [&String; 4], state: &str) -> Result<(ExperimentResult, bool), CliError> {
        let [e1, e2, f1, f2] = names.map(|n| self.problem.projector(n));
        let h = self.problem.state(state);
        let cfg = ChshConfig::new(e1?, e2?, f1?, f2?, h.clone())?;
        let correlations = cfg.correlations()?;
        let value = chsh_combination(&correlations);
        let classical_bound_respected = value <= 2.0 + self.tol.chsh_slack;
        let commuting = cfg.is_commuting(self.tol.commute)?;

        // A violation is only a failure when a shared backing exists.
        let (joint, passed) = if commuting {
            let q = PropositionQuadruple::from_projectors(&cfg.e, &cfg.f)?;
            let joint = self.joint_check(&q, h, &correlations)?;
            let passed = classical_bound_respected
                && joint.preserves_operations
                && joint.images_commute
                && joint.intersection_residual <= self.tol.homomorphism
                && joint.pointwise_identity_holds
                && joint.integral_residual <= self.tol.identity;
            (Some(joint), passed)
        } else {
            (None, true)
        };

        let result = ChshResult {
            state: state.to_owned(),
            projectors: names.map(|n| n.clone()),
            correlations,
            value,
            classical_bound_respected,
            commuting,
            joint,
        };
        Ok((ExperimentResult::Chsh(result), passed))
    }

    fn joint_check(
        &self,
        q: &PropositionQuadruple,
        h: &hv_core::quantum::PureState,
        correlations: &[[f64; 2]; 2],
    ) -> Result<JointCheck, CliError> {
        let props: [&Proposition; 4] = [&q.a[0], &q.a[1], &q.b[0], &q.b[1]];
        let mut homomorphism_residual: f64 = 0.0;
        let mut images_commute = true;
        for (i, a) in props.iter().enumerate() {
            for b in &props[i + 1..] {
                let report = boolean_homomorphism_report(a, b)?;
                homomorphism_residual = homomorphism_residual.max(report.max_residual);
                images_commute &= report.commutes;
            }
        }
        let fns = classical_chsh_functions(q, h)?;
        let fiber_integrals = fns.integrals();
        let integral_residual = (0..4)
            .map(|k| (fiber_integrals[k / 2][k % 2] - correlations[k / 2][k % 2]).abs())
            .fold(0.0, f64::max);
        Ok(JointCheck {
            homomorphism_residual,
            preserves_operations: homomorphism_residual <= self.tol.homomorphism,
            images_commute,
            intersection_residual: q.intersection_residual()?,
            pointwise_identity_holds: fns.identity_holds(),
            fiber_integrals,
            fiber_value: fns.chsh_value(),
            integral_residual,
        })
    }
}
