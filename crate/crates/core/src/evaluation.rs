//! Summary evaluation: predicted and actual coverage, redundancy,
//! conciseness and ROUGE.
//!
//! Predicted coverage pairs every summary entry (argument slot) with every
//! reference key point (key point slot). Each entry is assigned at most one
//! reference key point: the highest-scoring one among those the matcher
//! accepts, with ties going to the smallest key point id. Coverage is the
//! fraction of reference key points that received at least one entry.
//!
//! Actual coverage and redundancy use gold labels instead of a matcher, which
//! is possible because every entry is an argument from the corpus.

use std::collections::{BTreeSet, HashMap};

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, KeyPoint};
use crate::error::{Error, Result};
use crate::matching::{Matcher, PairRequest};
use crate::selection::{word_count, GeneratedSummary};
use crate::text::alphanumeric_tokens;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageAssignment {
    pub argument_id: String,
    pub key_point_id: Option<String>,
    pub score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageResult {
    pub covered_key_point_ids: BTreeSet<String>,
    pub coverage: f64,
    pub assignments: Vec<CoverageAssignment>,
}

/// Coverage of `reference_kps` predicted by `matcher`.
pub fn coverage_predicted(
    summary: &GeneratedSummary,
    reference_kps: &[&KeyPoint],
    matcher: &Matcher<'_>,
) -> Result<CoverageResult> {
    if reference_kps.is_empty() {
        return Err(Error::Usage("no reference key points".into()));
    }
    let mut refs: Vec<&KeyPoint> = reference_kps.to_vec();
    refs.sort_by(|a, b| a.id.cmp(&b.id));

    let mut covered = BTreeSet::new();
    let mut assignments = Vec::with_capacity(summary.entries.len());
    for entry in &summary.entries {
        let requests: Vec<PairRequest<'_>> = refs
            .iter()
            .map(|kp| PairRequest::new(&entry.text, &kp.text).with_ids(&entry.argument_id, &kp.id))
            .collect();
        let scores = matcher.score_pairs(&requests)?;
        let mut best: Option<(&KeyPoint, f64)> = None;
        for (kp, s) in refs.iter().zip(&scores) {
            if s.is_match && best.is_none_or(|(_, b)| s.score > b) {
                best = Some((kp, s.score));
            }
        }
        if let Some((kp, _)) = best {
            covered.insert(kp.id.clone());
        }
        assignments.push(CoverageAssignment {
            argument_id: entry.argument_id.clone(),
            key_point_id: best.map(|(kp, _)| kp.id.clone()),
            score: best.map(|(_, s)| s),
        });
    }
    Ok(CoverageResult {
        coverage: covered.len() as f64 / refs.len() as f64,
        covered_key_point_ids: covered,
        assignments,
    })
}

fn entry_gold<'c>(summary: &GeneratedSummary, corpus: &'c Corpus) -> Result<Vec<&'c BTreeSet<String>>> {
    summary
        .entries
        .iter()
        .map(|e| {
            corpus
                .gold_key_points(&e.argument_id)
                .filter(|g| !g.is_empty())
                .ok_or_else(|| Error::Integrity(format!("summary entry {} has no gold label", e.argument_id)))
        })
        .collect()
}

/// Fraction of the topic's key points (catch-all included) with at least one
/// summary entry gold-labeled to them.
pub fn coverage_actual(summary: &GeneratedSummary, corpus: &Corpus) -> Result<f64> {
    let topic_kps: BTreeSet<&str> = corpus.key_points_of(&summary.topic_id).map(|k| k.id.as_str()).collect();
    if topic_kps.is_empty() {
        return Err(Error::Usage(format!("topic {} has no key points", summary.topic_id)));
    }
    let gold = entry_gold(summary, corpus)?;
    let covered: BTreeSet<&str> = gold
        .iter()
        .flat_map(|g| g.iter().map(String::as_str))
        .filter(|k| topic_kps.contains(k))
        .collect();
    Ok(covered.len() as f64 / topic_kps.len() as f64)
}

/// Share of entry pairs that have a gold key point in common. Zero for fewer
/// than two entries.
pub fn redundancy_actual(summary: &GeneratedSummary, corpus: &Corpus) -> Result<f64> {
    let gold = entry_gold(summary, corpus)?;
    let n = gold.len();
    if n < 2 {
        return Ok(0.0);
    }
    let mut duplicates = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            if gold[i].intersection(gold[j]).next().is_some() {
                duplicates += 1;
            }
        }
    }
    Ok(duplicates as f64 / (n * (n - 1) / 2) as f64)
}

/// Mean word count of the entries.
pub fn avg_words(summary: &GeneratedSummary) -> Result<f64> {
    if summary.entries.is_empty() {
        return Err(Error::Usage("cannot average words of an empty summary".into()));
    }
    let total = summary
        .entries
        .iter()
        .map(|e| word_count(&e.text))
        .sum::<Result<usize>>()?;
    Ok(total as f64 / summary.entries.len() as f64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RougeOptions {
    /// Stem tokens longer than three characters with the Snowball English
    /// stemmer.
    #[serde(default)]
    pub stem: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScores {
    pub rouge1: f64,
    pub rouge2: f64,
    pub rouge_l: f64,
    /// Set when either side had no tokens; all scores are then zero.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub empty_input: bool,
}

fn f_measure(overlap: usize, candidate_total: usize, reference_total: usize) -> f64 {
    if overlap == 0 || candidate_total == 0 || reference_total == 0 {
        return 0.0;
    }
    let p = overlap as f64 / candidate_total as f64;
    let r = overlap as f64 / reference_total as f64;
    2.0 * p * r / (p + r)
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

fn rouge_n(candidate: &[String], reference: &[String], n: usize) -> f64 {
    let c = ngram_counts(candidate, n);
    let r = ngram_counts(reference, n);
    let overlap: usize = c.iter().map(|(g, &k)| k.min(r.get(g).copied().unwrap_or(0))).sum();
    f_measure(
        overlap,
        candidate.len().saturating_sub(n - 1),
        reference.len().saturating_sub(n - 1),
    )
}

fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn rouge_tokens(text: &str, options: &RougeOptions) -> Vec<String> {
    let tokens = alphanumeric_tokens(text);
    if !options.stem {
        return tokens;
    }
    let stemmer = Stemmer::create(Algorithm::English);
    tokens
        .into_iter()
        .map(|t| if t.chars().count() > 3 { stemmer.stem(&t).into_owned() } else { t })
        .collect()
}

/// ROUGE-1, ROUGE-2 and ROUGE-L F-measures without stemming.
pub fn rouge(candidate: &str, reference: &str) -> RougeScores {
    rouge_with(candidate, reference, &RougeOptions::default())
}

pub fn rouge_with(candidate: &str, reference: &str, options: &RougeOptions) -> RougeScores {
    let c = rouge_tokens(candidate, options);
    let r = rouge_tokens(reference, options);
    if c.is_empty() || r.is_empty() {
        return RougeScores {
            rouge1: 0.0,
            rouge2: 0.0,
            rouge_l: 0.0,
            empty_input: true,
        };
    }
    RougeScores {
        rouge1: rouge_n(&c, &r, 1),
        rouge2: rouge_n(&c, &r, 2),
        rouge_l: f_measure(lcs_len(&c, &r), c.len(), r.len()),
        empty_input: false,
    }
}

/// ROUGE of a whole summary: entry texts joined by newlines against the
/// topic's non-catch-all key point texts joined by newlines.
pub fn rouge_summary(summary: &GeneratedSummary, reference_kps: &[&KeyPoint], options: &RougeOptions) -> RougeScores {
    let candidate = summary.entries.iter().map(|e| e.text.as_str()).collect::<Vec<_>>().join("\n");
    let reference = reference_kps
        .iter()
        .filter(|k| !k.is_catch_all)
        .map(|k| k.text.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    rouge_with(&candidate, &reference, options)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationModes {
    pub predicted: bool,
    pub actual: bool,
    pub rouge: bool,
}

impl EvaluationModes {
    pub const ALL: EvaluationModes = EvaluationModes {
        predicted: true,
        actual: true,
        rouge: true,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub topic_id: String,
    pub entries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_coverage: Option<CoverageResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual_coverage: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub redundancy: Option<f64>,
    pub avg_words: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rouge1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rouge2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rouge_l: Option<f64>,
}

/// Evaluates one summary against its topic's key points. `matcher` is only
/// needed for predicted coverage.
pub fn evaluate(
    summary: &GeneratedSummary,
    corpus: &Corpus,
    matcher: Option<&Matcher<'_>>,
    modes: EvaluationModes,
    rouge_options: &RougeOptions,
) -> Result<EvaluationReport> {
    if corpus.topic(&summary.topic_id).is_none() {
        return Err(Error::Usage(format!("unknown topic {}", summary.topic_id)));
    }
    let reference: Vec<&KeyPoint> = corpus.key_points_of(&summary.topic_id).collect();
    let predicted_coverage = if modes.predicted {
        let matcher = matcher.ok_or_else(|| Error::Usage("predicted coverage needs a matcher".into()))?;
        Some(coverage_predicted(summary, &reference, matcher)?)
    } else {
        None
    };
    let (actual_coverage, redundancy) = if modes.actual {
        (
            Some(coverage_actual(summary, corpus)?),
            Some(redundancy_actual(summary, corpus)?),
        )
    } else {
        (None, None)
    };
    let scores = modes.rouge.then(|| rouge_summary(summary, &reference, rouge_options));
    Ok(EvaluationReport {
        topic_id: summary.topic_id.clone(),
        entries: summary.entries.len(),
        predicted_coverage,
        actual_coverage,
        redundancy,
        avg_words: avg_words(summary)?,
        rouge1: scores.map(|s| s.rouge1),
        rouge2: scores.map(|s| s.rouge2),
        rouge_l: scores.map(|s| s.rouge_l),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rouge_identical_and_disjoint() {
        let s = rouge("Vaccines save lives", "vaccines save lives");
        assert_eq!((s.rouge1, s.rouge2, s.rouge_l), (1.0, 1.0, 1.0));
        let s = rouge("alpha beta", "gamma delta");
        assert_eq!((s.rouge1, s.rouge2, s.rouge_l), (0.0, 0.0, 0.0));
        assert!(!s.empty_input);
    }

    #[test]
    fn rouge_cat_sat_ran() {
        // unigrams {the, cat, sat} vs {the, cat, ran}: overlap 2 of 3 each side
        // bigrams {the cat, cat sat} vs {the cat, cat ran}: overlap 1 of 2
        // LCS "the cat": 2 of 3
        let s = rouge("the cat sat", "the cat ran");
        assert!((s.rouge1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.rouge2 - 0.5).abs() < 1e-15);
        assert!((s.rouge_l - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rouge_empty_tokens_flagged() {
        let s = rouge("!!!", "something");
        assert!(s.empty_input);
        assert_eq!(s.rouge1, 0.0);
    }

    #[test]
    fn rouge_single_token_has_no_bigrams() {
        let s = rouge("cat", "cat");
        assert_eq!(s.rouge1, 1.0);
        assert_eq!(s.rouge2, 0.0);
    }

    #[test]
    fn rouge_stemming_merges_inflections() {
        let plain = rouge("vaccinations protect children", "vaccination protects child");
        let stemmed = rouge_with(
            "vaccinations protect children",
            "vaccination protects child",
            &RougeOptions { stem: true },
        );
        assert_eq!(plain.rouge1, 0.0);
        assert!(stemmed.rouge1 > plain.rouge1);
    }

    #[test]
    fn lcs_reference_values() {
        let t = |s: &str| alphanumeric_tokens(s);
        assert_eq!(lcs_len(&t("a b c d e"), &t("a c e")), 3);
        assert_eq!(lcs_len(&t("a b"), &t("b a")), 1);
        assert_eq!(lcs_len(&t("x"), &t("y")), 0);
    }
}
