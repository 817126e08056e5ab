//! Score-file ingestion: CSV with a `label,score[,group]` header, UTF-8,
//! `.` decimal separator. Parse errors are positional (1-based file line)
//! and fatal.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use calmetrics::LabeledScores;

use crate::CliError;

#[derive(Debug, Clone)]
pub struct InputRecord {
    pub label: u8,
    pub score: f64,
    pub group: Option<String>,
}

fn parse_error(line: Option<u64>, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_score_file(path: &Path) -> Result<Vec<InputRecord>, CliError> {
    let file = File::open(path).map_err(CliError::Io)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);

    let headers = reader
        .headers()
        .map_err(|e| parse_error(Some(1), e.to_string()))?;
    let columns: Vec<&str> = headers.iter().collect();
    let has_group = match columns.as_slice() {
        ["label", "score"] => false,
        ["label", "score", "group"] => true,
        other => {
            return Err(parse_error(
                Some(1),
                format!(
                    "header must be `label,score` or `label,score,group`, got `{}`",
                    other.join(",")
                ),
            ))
        }
    };

    let mut records = Vec::new();
    for result in reader.records() {
        let record =
            result.map_err(|e| parse_error(e.position().map(|p| p.line()), e.to_string()))?;
        let line = record.position().map(|p| p.line());

        let label = match &record[0] {
            "0" => 0u8,
            "1" => 1u8,
            other => {
                return Err(parse_error(
                    line,
                    format!("label must be 0 or 1, got `{other}`"),
                ))
            }
        };
        let score: f64 = record[1]
            .parse()
            .map_err(|_| parse_error(line, format!("invalid score `{}`", &record[1])))?;
        if !score.is_finite() {
            return Err(parse_error(line, "score must be finite"));
        }
        let group = if has_group {
            let g = record[2].to_string();
            if g.is_empty() {
                return Err(parse_error(line, "empty group field"));
            }
            Some(g)
        } else {
            None
        };
        records.push(InputRecord {
            label,
            score,
            group,
        });
    }
    if records.is_empty() {
        return Err(CliError::Lib(calmetrics::Error::EmptyDataset));
    }
    Ok(records)
}

/// Collapse records into one dataset, ignoring any group column.
pub fn to_labeled(records: &[InputRecord]) -> Result<LabeledScores, CliError> {
    LabeledScores::new(
        records.iter().map(|r| r.label).collect(),
        records.iter().map(|r| r.score).collect(),
    )
    .map_err(CliError::Lib)
}

/// Split records by group id, sorted for canonical output order.
pub fn group_split(records: &[InputRecord]) -> Result<Vec<(String, LabeledScores)>, CliError> {
    let mut grouped: BTreeMap<&str, (Vec<u8>, Vec<f64>)> = BTreeMap::new();
    for r in records {
        let group = r.group.as_deref().ok_or_else(|| {
            CliError::Lib(calmetrics::Error::InvalidConfig(
                "--by-group requires a `group` column".into(),
            ))
        })?;
        let entry = grouped.entry(group).or_default();
        entry.0.push(r.label);
        entry.1.push(r.score);
    }
    grouped
        .into_iter()
        .map(|(id, (labels, scores))| {
            LabeledScores::new(labels, scores)
                .map(|data| (id.to_string(), data))
                .map_err(CliError::Lib)
        })
        .collect()
}
