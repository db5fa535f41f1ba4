//! Evaluation output: a readable table plus one JSON line.

use serde::{Deserialize, Serialize};
use sessiontiling_core::eval::EvalReport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub predicted: usize,
    pub gold: usize,
    pub tp: usize,
}

impl From<&EvalReport> for ReportJson {
    fn from(r: &EvalReport) -> Self {
        ReportJson {
            precision: r.precision,
            recall: r.recall,
            f1: r.f1,
            predicted: r.predicted,
            gold: r.gold,
            tp: r.true_positives,
        }
    }
}

pub fn table(report: &EvalReport) -> String {
    format!(
        "precision  {:.4}\nrecall     {:.4}\nf1         {:.4}\npredicted  {}\ngold       {}\ntp         {}\n",
        report.precision,
        report.recall,
        report.f1,
        report.predicted,
        report.gold,
        report.true_positives
    )
}

pub fn json_line(report: &EvalReport) -> String {
    serde_json::to_string(&ReportJson::from(report)).expect("report serializes")
}

/// The table followed by the JSON line.
pub fn render(report: &EvalReport) -> String {
    format!("{}{}\n", table(report), json_line(report))
}
