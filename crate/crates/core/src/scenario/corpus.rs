//! The scenarios shipped with the crate.

use super::{parse_scenario, run::run_scenario_with_state, Report};
use crate::par::Execution;

macro_rules! bundled {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../../scenarios/", $file)))),*]
    };
}

/// `(file name, source)` pairs.
pub const BUNDLED: &[(&str, &str)] = bundled!(
    "i8_169_89.plm",
    "i8_301_62.plm",
    "i8_44_9.plm",
    "i8_540_301.plm",
    "i8_79_44.plm",
    "i8_89_9.plm",
    "qn.plm",
    "r.plm",
    "xn.plm",
    "xn_212.plm",
);

pub fn source(file: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(f, _)| *f == file).map(|(_, s)| *s)
}

/// Parses and runs one file; parse failures become failing reports.
pub fn run_text(file: &str, text: &str, exec: Execution) -> Report {
    match parse_scenario(text) {
        Ok(s) => run_scenario_with_state(&s, exec).0,
        Err(e) => Report::failure(file, format!("parse error: {e}")),
    }
}

/// Runs every bundled scenario; reports come back ordered by scenario name
/// whatever order they finish in.
pub fn run_corpus(exec: Execution) -> Vec<Report> {
    let mut reports = exec.map(BUNDLED, |(file, text)| run_text(file, text, exec));
    reports.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    reports
}
