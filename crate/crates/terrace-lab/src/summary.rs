use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use terrace_core::fronts::SpeedReport;
use terrace_core::speeds::SpeedPrediction;
use terrace_core::ModelParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    /// [`crate::Analysis::label`] of the analysis that produced it.
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    pub detail: String,
}

/// Result of one scenario. Everything except `wall_clock_s` is a function of the input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario: String,
    pub schema_version: u32,
    pub params: ModelParams,
    pub prediction: Option<SpeedPrediction>,
    /// Keyed by analysis label.
    pub measured: BTreeMap<String, SpeedReport>,
    /// One entry per declared analysis, in declaration order.
    pub criteria: Vec<CriterionOutcome>,
    pub max_range_excess: f64,
    pub snapshots: usize,
    pub passed: bool,
    pub artifacts: Vec<String>,
    pub wall_clock_s: f64,
}

impl RunSummary {
    pub fn criterion(&self, name: &str) -> Option<&CriterionOutcome> {
        self.criteria.iter().find(|c| c.name == name)
    }

    /// The summary as JSON without the wall clock, for reproducibility checks.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("summary serializes");
        if let Some(o) = v.as_object_mut() {
            o.remove("wall_clock_s");
        }
        serde_json::to_string_pretty(&v).expect("summary serializes")
    }
}
