//! Machine-readable solve reports.
//!
//! `--json` renders one [`Report`] per invocation. The schema is
//! versioned: any field addition, removal or rename bumps
//! [`REPORT_VERSION`], and golden tests pin the exact key set so
//! accidental drift fails the build.

use basp_core::{NodeId, RoadGraph, SearchStats};
use serde::{Deserialize, Serialize};

/// Version of the JSON report schema.
pub const REPORT_VERSION: u32 = 1;

/// Search effort counters, mirroring the library's statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDto {
    /// States popped and expanded.
    pub expanded: u64,
    /// Successor states pushed onto the queue.
    pub generated: u64,
    /// Suffix window of the run that produced the answer.
    pub final_k: usize,
    /// Largest queue length observed.
    pub queue_peak: usize,
    /// Wall-clock seconds spent inside the solver.
    pub wall_time_s: f64,
}

impl From<&SearchStats> for StatsDto {
    fn from(s: &SearchStats) -> StatsDto {
        StatsDto {
            expanded: s.expanded,
            generated: s.generated,
            final_k: s.final_k,
            queue_peak: s.queue_peak,
            wall_time_s: s.wall_time,
        }
    }
}

/// The search state that failed the suffix-window saturation test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationDto {
    /// Node labels of the offending suffix word.
    pub state: Vec<String>,
    /// Whether the state was a goal candidate.
    pub terminal: bool,
}

/// One invocation's outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Schema version; always [`REPORT_VERSION`].
    pub version: u32,
    /// The subcommand that produced the report.
    pub command: String,
    /// `"solved"`, `"infeasible"`, `"no_path"`, `"saturation_violation"`
    /// or `"k_limit_exceeded"`.
    pub status: String,
    /// Solver that produced the answer.
    pub algorithm: String,
    /// Node labels of the best route, in travel order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<String>>,
    /// Node ids of the best route.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_ids: Option<Vec<u32>>,
    /// Optimal travel time in seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_s: Option<f64>,
    /// The same quantity recomputed independently over the returned
    /// route; disagreement beyond 1e-6 is an internal error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_check_time_s: Option<f64>,
    /// Search effort counters, when the solver reports them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsDto>,
    /// The saturation-violating state, when one aborted the search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationDto>,
}

impl Report {
    /// A skeleton report for `command`; fields default to absent.
    pub fn new(command: &str, algorithm: &str, status: &str) -> Report {
        Report {
            version: REPORT_VERSION,
            command: command.to_string(),
            status: status.to_string(),
            algorithm: algorithm.to_string(),
            path: None,
            path_ids: None,
            time_s: None,
            self_check_time_s: None,
            stats: None,
            violation: None,
        }
    }

    /// Fills the route fields from a node word.
    pub fn with_path(mut self, g: &RoadGraph, word: &[NodeId]) -> Report {
        self.path = Some(word.iter().map(|&n| g.label(n)).collect());
        self.path_ids = Some(word.iter().map(|n| n.0).collect());
        self
    }

    /// Renders the report as pretty-printed JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("reports always serialize");
        text.push('\n');
        text
    }
}
