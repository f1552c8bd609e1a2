//! Accuracy against ground truth and the run report.
//!
//! Accuracy is the plain ratio `count / true_count × 100`. It is not clamped,
//! so overcounting shows up as a value above 100.

use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::line_counter::{Counters, CrossEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGroundTruth")]
pub struct GroundTruth {
    pub true_in: u64,
    pub true_out: u64,
    pub true_total: u64,
}

#[derive(Deserialize)]
struct RawGroundTruth {
    true_in: u64,
    true_out: u64,
    true_total: u64,
}

impl TryFrom<RawGroundTruth> for GroundTruth {
    type Error = Error;

    fn try_from(raw: RawGroundTruth) -> Result<Self> {
        if raw.true_total != raw.true_in + raw.true_out {
            return Err(Error::Schema(format!(
                "true_total {} != true_in {} + true_out {}",
                raw.true_total, raw.true_in, raw.true_out
            )));
        }
        Ok(GroundTruth::new(raw.true_in, raw.true_out))
    }
}

impl GroundTruth {
    pub fn new(true_in: u64, true_out: u64) -> Self {
        Self {
            true_in,
            true_out,
            true_total: true_in + true_out,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("truth: {e}")))
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// `count / true_count × 100`; both zero is perfect agreement (100).
pub fn accuracy_pct(count: u64, true_count: u64) -> Result<f64> {
    if true_count == 0 {
        return if count == 0 {
            Ok(100.0)
        } else {
            Err(Error::UndefinedAccuracy { count })
        };
    }
    // One rounding step: the product is exact for any realistic count.
    Ok((count as f64 * 100.0) / true_count as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Accuracies {
    pub in_accuracy: f64,
    pub out_accuracy: f64,
    pub tc_accuracy: f64,
}

impl Accuracies {
    pub fn compute(counters: &Counters, truth: &GroundTruth) -> Result<Self> {
        Ok(Self {
            in_accuracy: accuracy_pct(counters.in_count(), truth.true_in)?,
            out_accuracy: accuracy_pct(counters.out_count(), truth.true_out)?,
            tc_accuracy: accuracy_pct(counters.total_count(), truth.true_total)?,
        })
    }

    /// Values rounded to two decimals for display.
    pub fn rounded(&self) -> Self {
        let r = |v: f64| (v * 100.0).round() / 100.0;
        Self {
            in_accuracy: r(self.in_accuracy),
            out_accuracy: r(self.out_accuracy),
            tc_accuracy: r(self.tc_accuracy),
        }
    }

    /// Compact JSON object with two decimals, e.g. `{"in_accuracy":100.00,...}`.
    pub fn to_display_json(&self) -> String {
        format!(
            "{{\"in_accuracy\":{:.2},\"out_accuracy\":{:.2},\"tc_accuracy\":{:.2}}}",
            self.in_accuracy, self.out_accuracy, self.tc_accuracy
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ReportWire", try_from = "ReportWire")]
pub struct CountReport {
    pub counters: Counters,
    pub events: Vec<CrossEvent>,
    pub ground_truth: Option<GroundTruth>,
    /// Present exactly when `ground_truth` is.
    pub accuracies: Option<Accuracies>,
    pub params: PipelineConfig,
}

impl CountReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("report: {e}")))
    }
}

pub fn build_report(
    counters: Counters,
    events: Vec<CrossEvent>,
    ground_truth: Option<GroundTruth>,
    params: PipelineConfig,
) -> Result<CountReport> {
    let accuracies = ground_truth
        .as_ref()
        .map(|truth| Accuracies::compute(&counters, truth))
        .transpose()?;
    Ok(CountReport {
        counters,
        events,
        ground_truth,
        accuracies,
        params,
    })
}

// Flat on-the-wire layout of a report.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportWire {
    #[serde(rename = "in")]
    in_count: u64,
    #[serde(rename = "out")]
    out_count: u64,
    #[serde(rename = "total")]
    total_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    true_in: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    true_out: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    true_total: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    in_accuracy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    out_accuracy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tc_accuracy: Option<f64>,
    events: Vec<CrossEvent>,
    params: PipelineConfig,
}

impl From<CountReport> for ReportWire {
    fn from(r: CountReport) -> Self {
        Self {
            in_count: r.counters.in_count(),
            out_count: r.counters.out_count(),
            total_count: r.counters.total_count(),
            true_in: r.ground_truth.map(|t| t.true_in),
            true_out: r.ground_truth.map(|t| t.true_out),
            true_total: r.ground_truth.map(|t| t.true_total),
            in_accuracy: r.accuracies.map(|a| a.in_accuracy),
            out_accuracy: r.accuracies.map(|a| a.out_accuracy),
            tc_accuracy: r.accuracies.map(|a| a.tc_accuracy),
            events: r.events,
            params: r.params,
        }
    }
}

impl TryFrom<ReportWire> for CountReport {
    type Error = Error;

    fn try_from(w: ReportWire) -> Result<Self> {
        if w.total_count != w.in_count + w.out_count {
            return Err(Error::Schema(format!(
                "total {} != in {} + out {}",
                w.total_count, w.in_count, w.out_count
            )));
        }
        let ground_truth = match (w.true_in, w.true_out, w.true_total) {
            (None, None, None) => None,
            (Some(true_in), Some(true_out), Some(true_total)) => {
                Some(GroundTruth::try_from(RawGroundTruth {
                    true_in,
                    true_out,
                    true_total,
                })?)
            }
            _ => return Err(Error::Schema("partial ground truth in report".into())),
        };
        let accuracies = match (w.in_accuracy, w.out_accuracy, w.tc_accuracy) {
            (None, None, None) => None,
            (Some(in_accuracy), Some(out_accuracy), Some(tc_accuracy)) => Some(Accuracies {
                in_accuracy,
                out_accuracy,
                tc_accuracy,
            }),
            _ => return Err(Error::Schema("partial accuracies in report".into())),
        };
        if ground_truth.is_some() != accuracies.is_some() {
            return Err(Error::Schema(
                "accuracies must accompany ground truth".into(),
            ));
        }
        Ok(CountReport {
            counters: Counters::new(w.in_count, w.out_count),
            events: w.events,
            ground_truth,
            accuracies,
            params: w.params,
        })
    }
}
