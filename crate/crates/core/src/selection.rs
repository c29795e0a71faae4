//! Per-cluster representative selection.
//!
//! Clusters are visited largest first. For every member of a cluster the
//! member is taken out, the remaining members are matched against it, and a
//! score is computed from the match count:
//!
//! * SMM: the match count itself.
//! * SSF: `matches^i / words`, which favours short arguments when match
//!   counts are close.
//!
//! The highest score wins. Ties go to the argument with fewer words, then the
//! lexicographically smaller text, then the smaller id.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::clustering::ClusterAssignment;
use crate::corpus::{Argument, Corpus};
use crate::error::{Error, Result};
use crate::matching::Matcher;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMethod {
    #[default]
    Smm,
    Ssf,
}

impl std::fmt::Display for SelectionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SelectionMethod::Smm => "smm",
            SelectionMethod::Ssf => "ssf",
        })
    }
}

pub const DEFAULT_EXPONENT: f64 = 5.0;

fn default_exponent() -> f64 {
    DEFAULT_EXPONENT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    #[serde(default)]
    pub method: SelectionMethod,
    /// Exponent on the match count; used by SSF only.
    #[serde(default = "default_exponent")]
    pub exponent: f64,
    /// Keep only the representatives of this many largest clusters.
    #[serde(default)]
    pub max_key_points: Option<usize>,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            method: SelectionMethod::Smm,
            exponent: DEFAULT_EXPONENT,
            max_key_points: None,
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.exponent.is_finite() && self.exponent > 0.0) {
            return Err(Error::Config(format!("exponent must be positive, got {}", self.exponent)));
        }
        if self.max_key_points == Some(0) {
            return Err(Error::Config("max_key_points must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub argument_id: String,
    pub text: String,
    /// Position of the source cluster in size order (0 = largest).
    pub cluster_index: usize,
    pub cluster_size: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedSummary {
    pub topic_id: String,
    /// Absent for summaries not produced by selection, such as pseudo-summaries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<SelectionMethod>,
    pub entries: Vec<SummaryEntry>,
}

impl GeneratedSummary {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serialization is infallible")
    }

    pub fn from_json_str(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Format(format!("summary JSON: {e}")))
    }
}

/// Number of whitespace-separated tokens.
pub fn word_count(text: &str) -> Result<usize> {
    match text.split_whitespace().count() {
        0 => Err(Error::EmptyText("cannot count words of empty text".into())),
        n => Ok(n),
    }
}

pub fn score_smm(match_count: usize) -> f64 {
    match_count as f64
}

/// `match_count^exponent / word_count`.
pub fn score_ssf(match_count: usize, word_count: usize, exponent: f64) -> Result<f64> {
    if word_count == 0 {
        return Err(Error::Usage("word count must be positive".into()));
    }
    let m = match_count as f64;
    let numerator = if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        m.powi(exponent as i32)
    } else {
        m.powf(exponent)
    };
    Ok(numerator / word_count as f64)
}

struct Candidate<'a> {
    arg: &'a Argument,
    words: usize,
    score: f64,
}

/// Better candidates order first.
fn rank(a: &Candidate<'_>, b: &Candidate<'_>) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.words.cmp(&b.words))
        .then_with(|| a.arg.text.cmp(&b.arg.text))
        .then_with(|| a.arg.id.cmp(&b.arg.id))
}

/// Picks one representative per cluster, largest cluster first, keeping at
/// most `max_key_points` entries.
pub fn select_representatives(
    clusters: &ClusterAssignment,
    corpus: &Corpus,
    matcher: &Matcher<'_>,
    config: &SelectionConfig,
) -> Result<GeneratedSummary> {
    config.validate()?;
    if clusters.is_empty() {
        return Err(Error::Usage("no clusters to select from".into()));
    }
    let limit = config.max_key_points.unwrap_or(usize::MAX).min(clusters.len());

    let mut topic_id: Option<&str> = None;
    let mut entries = Vec::with_capacity(limit);
    for (cluster_index, ids) in clusters.clusters().iter().enumerate().take(limit) {
        if ids.is_empty() {
            return Err(Error::Internal(format!("cluster {cluster_index} is empty")));
        }
        let members: Vec<&Argument> = ids
            .iter()
            .map(|id| {
                corpus
                    .argument(id)
                    .ok_or_else(|| Error::Integrity(format!("clustered id {id} is not an argument")))
            })
            .collect::<Result<_>>()?;
        for m in &members {
            match topic_id {
                None => topic_id = Some(&m.topic_id),
                Some(t) if t != m.topic_id => {
                    return Err(Error::Usage(format!(
                        "clusters mix topics {t} and {}",
                        m.topic_id
                    )))
                }
                Some(_) => {}
            }
        }

        let mut candidates = Vec::with_capacity(members.len());
        for (i, &arg) in members.iter().enumerate() {
            let rest: Vec<&Argument> = members
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &m)| m)
                .collect();
            let matches = matcher.match_count(&rest, arg)?;
            let words = word_count(&arg.text)?;
            let score = match config.method {
                SelectionMethod::Smm => score_smm(matches),
                SelectionMethod::Ssf => score_ssf(matches, words, config.exponent)?,
            };
            candidates.push(Candidate { arg, words, score });
        }
        let best = candidates
            .into_iter()
            .min_by(rank)
            .expect("cluster has at least one member");
        entries.push(SummaryEntry {
            argument_id: best.arg.id.clone(),
            text: best.arg.text.clone(),
            cluster_index,
            cluster_size: members.len(),
            score: best.score,
        });
    }

    Ok(GeneratedSummary {
        topic_id: topic_id.unwrap_or_default().to_string(),
        method: Some(config.method),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_counts() {
        assert_eq!(word_count("vaccines save lives").unwrap(), 3);
        assert_eq!(word_count("  a  b ").unwrap(), 2);
        assert_eq!(word_count("state-of-the-art").unwrap(), 1);
        assert!(word_count("   ").is_err());
    }

    #[test]
    fn smm_scores() {
        assert_eq!(score_smm(0), 0.0);
        assert_eq!(score_smm(7), 7.0);
        assert_eq!(score_smm(50), 50.0);
    }

    #[test]
    fn ssf_scores() {
        assert!((score_ssf(3, 10, 5.0).unwrap() - 24.3).abs() < 1e-12);
        assert_eq!(score_ssf(0, 17, 5.0).unwrap(), 0.0);
        assert_eq!(score_ssf(0, 3, 0.5).unwrap(), 0.0);
        assert_eq!(score_ssf(2, 8, 1.0).unwrap(), 0.25);
        assert!((score_ssf(4, 2, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(score_ssf(1, 0, 5.0).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = SelectionConfig {
            exponent: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SelectionConfig {
            max_key_points: Some(0),
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
