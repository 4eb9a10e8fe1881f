//! Extraction of answer sets from solver output.
//!
//! Two line-oriented formats are understood. In the clasp-like format an
//! `Answer: k` line is followed by one line of space separated literals and
//! a verdict line closes the run. In the DLV-like format every model is a
//! single `{l1, l2, ...}` line.

use aspwb_core::parse::parse_interpretation;
use aspwb_core::{Dialect, Interpretation};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    ClaspLike,
    DlvLike,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct OutputError {
    /// 1-based.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverOutput {
    pub interpretations: Vec<Interpretation>,
    pub satisfiable: bool,
}

// Informational lines clasp, clingo and gringo print around the models.
const CLASP_INFO: &[&str] = &[
    "clasp version",
    "clingo version",
    "gringo version",
    "Reading from",
    "Solving",
    "Models",
    "Calls",
    "Time",
    "CPU Time",
    "Optimization",
    "Optimum",
    "Threads",
    "Choices",
    "Conflicts",
    "Restarts",
    "Backjumps",
    "Rules",
    "Atoms",
    "Bodies",
    "Tight",
    "Variables",
    "Constraints",
    "Lemmas",
    "Progression",
    "Warning",
    "warning",
    "info",
    "%",
    "c ",
    "s ",
    "v ",
];

const DLV_INFO: &[&str] = &["DLV", "Cost", "%", "Best model", "Warning", "warning"];

const DLV_FAILURE: &[&str] = &["Incoherent", "INCOHERENT", "UNSATISFIABLE", "INCONSISTENT", "No model"];

pub fn parse_solver_output(text: &str, format: OutputFormat) -> Result<SolverOutput, OutputError> {
    match format {
        OutputFormat::ClaspLike => parse_clasp(text),
        OutputFormat::DlvLike => parse_dlv(text),
    }
}

fn model(text: &str, dialect: Dialect, line: usize) -> Result<Interpretation, OutputError> {
    parse_interpretation(text, dialect).map_err(|e| OutputError {
        line,
        message: e.to_string(),
    })
}

fn parse_clasp(text: &str) -> Result<SolverOutput, OutputError> {
    let mut out = SolverOutput::default();
    let mut verdict = None;
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i].trim_end_matches('\r');
        let trimmed = line.trim();
        let number = i + 1;
        i += 1;
        if let Some(rest) = trimmed.strip_prefix("Answer:") {
            if rest.trim().parse::<u64>().is_err() {
                return Err(OutputError {
                    line: number,
                    message: format!("malformed answer header `{trimmed}`"),
                });
            }
            let Some(next) = lines.get(i) else {
                return Err(OutputError {
                    line: number,
                    message: "answer header without a model line".into(),
                });
            };
            out.interpretations.push(model(next.trim(), Dialect::Gringo, i + 1)?);
            i += 1;
            continue;
        }
        match trimmed {
            "" => {}
            "SATISFIABLE" | "OPTIMUM FOUND" => verdict = Some(true),
            "UNSATISFIABLE" => verdict = Some(false),
            "UNKNOWN" => verdict = None,
            _ if CLASP_INFO.iter().any(|p| trimmed.starts_with(p)) => {}
            _ => {
                return Err(OutputError {
                    line: number,
                    message: format!("unrecognised line `{trimmed}`"),
                })
            }
        }
    }
    out.satisfiable = verdict.unwrap_or(!out.interpretations.is_empty());
    if !out.satisfiable {
        out.interpretations.clear();
    }
    Ok(out)
}

fn parse_dlv(text: &str) -> Result<SolverOutput, OutputError> {
    let mut out = SolverOutput::default();
    let mut failed = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let number = i + 1;
        let braced = line
            .strip_prefix("Best model:")
            .map(str::trim)
            .unwrap_or(line);
        if braced.starts_with('{') {
            if !braced.ends_with('}') {
                return Err(OutputError {
                    line: number,
                    message: "model line without closing `}`".into(),
                });
            }
            out.interpretations.push(model(braced, Dialect::Dlv, number)?);
        } else if DLV_FAILURE.iter().any(|p| line.starts_with(p)) {
            failed = true;
        } else if !line.is_empty() && !DLV_INFO.iter().any(|p| line.starts_with(p)) {
            return Err(OutputError {
                line: number,
                message: format!("unrecognised line `{line}`"),
            });
        }
    }
    out.satisfiable = !failed && !out.interpretations.is_empty();
    if failed {
        out.interpretations.clear();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clasp_one_answer() {
        let out = parse_solver_output("Answer: 1\nq(1,2) q(2,4)\nSATISFIABLE", OutputFormat::ClaspLike).unwrap();
        assert!(out.satisfiable);
        assert_eq!(out.interpretations.len(), 1);
        assert_eq!(out.interpretations[0].len(), 2);
    }

    #[test]
    fn clasp_unsat() {
        let out = parse_solver_output("UNSATISFIABLE", OutputFormat::ClaspLike).unwrap();
        assert!(!out.satisfiable);
        assert!(out.interpretations.is_empty());
    }

    #[test]
    fn clasp_empty_model_and_stats() {
        let text = "clasp version 3.3.5\nReading from stdin\nSolving...\nAnswer: 1\n\nSATISFIABLE\n\nModels       : 1\nCalls        : 1\nTime         : 0.001s (Solving: 0.00s 1st Model: 0.00s Unsat: 0.00s)\nCPU Time     : 0.000s\n";
        let out = parse_solver_output(text, OutputFormat::ClaspLike).unwrap();
        assert_eq!(out.interpretations.len(), 1);
        assert!(out.interpretations[0].is_empty());
    }

    #[test]
    fn clasp_garbage_reports_line() {
        let err = parse_solver_output("Answer: 1\na\nwhat is this\n", OutputFormat::ClaspLike).unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_solver_output("Answer: 1\na(\n", OutputFormat::ClaspLike).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn dlv_braces() {
        let out = parse_solver_output("{a, -b}", OutputFormat::DlvLike).unwrap();
        assert!(out.satisfiable);
        let i = &out.interpretations[0];
        assert_eq!(i.to_string(), "{a, -b}");
    }

    #[test]
    fn dlv_banner_and_failure() {
        let out = parse_solver_output("DLV [build BEN/Dec 21 2011]\n\n", OutputFormat::DlvLike).unwrap();
        assert!(!out.satisfiable);
        let out = parse_solver_output("Incoherent\n", OutputFormat::DlvLike).unwrap();
        assert!(!out.satisfiable);
        let err = parse_solver_output("{a}\n{b\n", OutputFormat::DlvLike).unwrap_err();
        assert_eq!(err.line, 2);
    }
}
