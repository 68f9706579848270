//! Report rendering: pretty JSON or a CSV table of the payload.

use crate::error::CliError;
use crate::report::{ExperimentResult, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn render(report: &RunReport, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(|e| CliError::Output(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => csv_table(report),
    }
}

/// Serializes only the payload; byte-identical across runs.
pub fn payload_json(report: &RunReport) -> Result<String, CliError> {
    serde_json::to_string(&report.payload).map_err(|e| CliError::Output(e.to_string()))
}

fn csv_table(report: &RunReport) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: &[&str] = match report.payload.command.as_str() {
        "spectra" => &[
            "experiment",
            "operator",
            "eigenvalue",
            "multiplicity",
            "projector_trace",
            "passed",
        ],
        "prob" => &["experiment", "operator", "state", "set", "probability", "passed"],
        "quantile" => &[
            "experiment",
            "operator",
            "state",
            "cut_lo",
            "cut_hi",
            "value",
            "weight",
            "passed",
        ],
        "verify" => &[
            "experiment",
            "operator",
            "state",
            "seed",
            "outcome",
            "count",
            "empirical",
            "predicted",
            "budget",
            "passed",
        ],
        "roundtrip" => &[
            "experiment",
            "operator",
            "function",
            "residual",
            "function_residual",
            "passed",
        ],
        _ => &["experiment", "state", "i", "j", "correlation", "value", "passed"],
    };
    w.write_record(header).map_err(csv_err)?;

    for exp in &report.payload.experiments {
        let name = exp.name.as_str();
        let passed = exp.passed.to_string();
        let rows: Vec<Vec<String>> = match &exp.result {
            ExperimentResult::Spectra(r) => (0..r.eigenvalues.len())
                .map(|k| {
                    vec![
                        r.eigenvalues[k].to_string(),
                        r.multiplicities[k].to_string(),
                        r.projector_traces[k].to_string(),
                    ]
                })
                .map(|tail| prefix(&[name, &r.operator], tail))
                .collect(),
            ExperimentResult::Prob(r) => vec![prefix(
                &[name, &r.operator, &r.state, &r.set],
                vec![r.probability.to_string()],
            )],
            ExperimentResult::Quantile(r) => (0..r.values.len())
                .map(|k| {
                    prefix(
                        &[name, &r.operator, &r.state],
                        vec![
                            r.cuts[k].to_string(),
                            r.cuts[k + 1].to_string(),
                            r.values[k].to_string(),
                            r.weights[k].to_string(),
                        ],
                    )
                })
                .collect(),
            ExperimentResult::Verify(r) => (0..r.outcomes.len())
                .map(|k| {
                    prefix(
                        &[name, &r.operator, &r.state, &r.seed.to_string()],
                        vec![
                            r.outcomes[k].to_string(),
                            r.counts[k].to_string(),
                            r.empirical[k].to_string(),
                            r.predicted[k].to_string(),
                            r.budgets[k].to_string(),
                        ],
                    )
                })
                .collect(),
            ExperimentResult::Roundtrip(r) => vec![prefix(
                &[name, &r.operator, r.function.as_deref().unwrap_or("")],
                vec![
                    r.residual.to_string(),
                    r.function_residual.map(|x| x.to_string()).unwrap_or_default(),
                ],
            )],
            ExperimentResult::Chsh(r) => (0..4)
                .map(|k| {
                    prefix(
                        &[name, &r.state, &(k / 2 + 1).to_string(), &(k % 2 + 1).to_string()],
                        vec![r.correlations[k / 2][k % 2].to_string(), r.value.to_string()],
                    )
                })
                .collect(),
        };
        for mut row in rows {
            row.push(passed.clone());
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    w.into_inner().map_err(|e| CliError::Output(e.to_string()))
}

fn prefix(head: &[&str], tail: Vec<String>) -> Vec<String> {
    head.iter().map(|s| s.to_string()).chain(tail).collect()
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}
