//! Serializable per-dataset metric reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named metric values for one dataset or one group, with the counts and
/// priors they were computed under.
///
/// All values lie in `[0, 1]`; metrics whose raw value was clamped into that
/// range (the gain areas) are listed in `clamped`. `pi0` is present exactly
/// when calibrated metrics are. The best-F1 thresholds live outside `values`
/// because they are raw score values, not unit-interval metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub n: usize,
    pub n_pos: usize,
    pub pi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi0: Option<f64>,
    pub values: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_f1_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_f1_c_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clamped: Vec<String>,
}

impl MetricReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// CSV rendering of a batch of reports sharing one metric set: a header row
/// followed by one row per report.
pub fn reports_to_csv(reports: &[MetricReport]) -> Result<String> {
    let first = reports
        .first()
        .ok_or_else(|| Error::InvalidConfig("no reports to render".into()))?;
    let keys: Vec<&String> = first.values.keys().collect();
    for r in reports {
        if r.values.keys().ne(keys.iter().copied()) {
            return Err(Error::InvalidConfig(
                "reports carry different metric sets".into(),
            ));
        }
    }

    let mut out = String::from("group,n,n_pos,pi,pi0");
    for k in &keys {
        out.push(',');
        out.push_str(k);
    }
    out.push_str(",best_f1_threshold,best_f1_c_threshold,clamped\n");

    for r in reports {
        write!(out, "{}", r.group.as_deref().unwrap_or("")).unwrap();
        write!(out, ",{},{},{}", r.n, r.n_pos, r.pi).unwrap();
        match r.pi0 {
            Some(p) => write!(out, ",{p}").unwrap(),
            None => out.push(','),
        }
        for k in &keys {
            write!(out, ",{}", r.values[*k]).unwrap();
        }
        for t in [r.best_f1_threshold, r.best_f1_c_threshold] {
            match t {
                Some(v) => write!(out, ",{v}").unwrap(),
                None => out.push(','),
            }
        }
        write!(out, ",{}", r.clamped.join(";")).unwrap();
        out.push('\n');
    }
    Ok(out)
}
