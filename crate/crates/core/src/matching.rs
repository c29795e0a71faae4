//! Ordered-pair key point matching.
//!
//! A [`Matcher`] answers "does the text in the argument slot match the text
//! in the key point slot?" with a score in `[0, 1]` and a decision
//! `score >= decision_threshold`. Backends:
//!
//! * `oracle`: each slot id resolves to a set of gold key points (an argument
//!   to its positive labels, a key point to itself). The pair matches iff the
//!   sets intersect, so an argument matches a key point iff it is labeled to
//!   it, and two arguments match iff they share a gold key point.
//! * `lexical`: Jaccard similarity of the lowercased token sets.
//! * `file`: precomputed JSON Lines `{"a": ..., "b": ..., "score": ...}`
//!   looked up by the ordered id pair; a missing pair is an error.
//! * `remote`: `POST /v1/match` with `{"pairs": [{"argument", "key_point"}]}`.
//!
//! Scores of pairs with both ids known are cached per ordered id pair.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::corpus::{Argument, Corpus};
use crate::error::{Error, Result};
use crate::remote::{Client, RemoteConfig};
use crate::text::lexical_tokens;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatcherKind {
    Oracle,
    Lexical,
    File { path: PathBuf },
    Remote(RemoteConfig),
}

fn default_decision_threshold() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatcherConfig {
    #[serde(flatten)]
    pub kind: MatcherKind,
    #[serde(default = "default_decision_threshold")]
    pub decision_threshold: f64,
    /// Put the candidate in the argument slot (and the cluster member in the
    /// key point slot) when counting matches inside a cluster.
    #[serde(default)]
    pub swap_slots: bool,
}

impl MatcherConfig {
    pub fn new(kind: MatcherKind) -> Self {
        MatcherConfig {
            kind,
            decision_threshold: default_decision_threshold(),
            swap_slots: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.decision_threshold > 0.0 && self.decision_threshold < 1.0) {
            return Err(Error::Config(format!(
                "decision threshold must lie in (0, 1), got {}",
                self.decision_threshold
            )));
        }
        if let MatcherKind::Remote(r) = &self.kind {
            r.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchScore {
    pub score: f64,
    pub is_match: bool,
}

/// One ordered pair to score. Ids are required by the oracle and file
/// backends, and enable caching.
#[derive(Debug, Clone, Copy)]
pub struct PairRequest<'a> {
    pub argument_text: &'a str,
    pub key_point_text: &'a str,
    pub argument_id: Option<&'a str>,
    pub key_point_id: Option<&'a str>,
}

impl<'a> PairRequest<'a> {
    pub fn new(argument_text: &'a str, key_point_text: &'a str) -> Self {
        PairRequest {
            argument_text,
            key_point_text,
            argument_id: None,
            key_point_id: None,
        }
    }

    pub fn with_ids(mut self, argument_id: &'a str, key_point_id: &'a str) -> Self {
        self.argument_id = Some(argument_id);
        self.key_point_id = Some(key_point_id);
        self
    }

    fn ids(&self) -> Option<(&'a str, &'a str)> {
        Some((self.argument_id?, self.key_point_id?))
    }
}

enum Backend<'c> {
    Oracle(&'c Corpus),
    Lexical,
    File(HashMap<(String, String), f64>),
    Remote(Client),
}

pub struct Matcher<'c> {
    config: MatcherConfig,
    backend: Backend<'c>,
    cache: Mutex<HashMap<(String, String), f64>>,
}

impl std::fmt::Debug for Matcher<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Matcher").field("config", &self.config).finish_non_exhaustive()
    }
}

#[derive(Serialize)]
struct MatchPairBody<'a> {
    argument: &'a str,
    key_point: &'a str,
}

#[derive(Serialize)]
struct MatchRequestBody<'a> {
    pairs: Vec<MatchPairBody<'a>>,
}

#[derive(Deserialize)]
struct MatchResponseBody {
    scores: Vec<f64>,
}

#[derive(Deserialize)]
struct MatchFileLine {
    a: String,
    b: String,
    score: f64,
}

/// Loads a precomputed match file keyed by ordered (a, b) id pairs.
pub fn load_match_file(path: &Path) -> Result<HashMap<(String, String), f64>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut scores = HashMap::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: n as u64 + 1,
            message,
        };
        let entry: MatchFileLine = serde_json::from_str(&line).map_err(|e| parse(e.to_string()))?;
        if !(0.0..=1.0).contains(&entry.score) {
            return Err(parse(format!("score {} outside [0, 1]", entry.score)));
        }
        if scores.insert((entry.a.clone(), entry.b.clone()), entry.score).is_some() {
            return Err(parse(format!("duplicate pair ({}, {})", entry.a, entry.b)));
        }
    }
    Ok(scores)
}

/// Jaccard similarity of the lexical token sets; 0 when both are empty.
pub fn jaccard(a: &str, b: &str) -> f64 {
    let sa: HashSet<String> = lexical_tokens(a).into_iter().collect();
    let sb: HashSet<String> = lexical_tokens(b).into_iter().collect();
    let union = sa.union(&sb).count();
    if union == 0 {
        return 0.0;
    }
    sa.intersection(&sb).count() as f64 / union as f64
}

impl<'c> Matcher<'c> {
    /// Builds a matcher. The oracle backend reads gold labels from `corpus`.
    pub fn new(config: &MatcherConfig, corpus: Option<&'c Corpus>) -> Result<Self> {
        config.validate()?;
        let backend = match &config.kind {
            MatcherKind::Oracle => Backend::Oracle(
                corpus.ok_or_else(|| Error::Usage("the oracle matcher needs a labeled corpus".into()))?,
            ),
            MatcherKind::Lexical => Backend::Lexical,
            MatcherKind::File { path } => Backend::File(load_match_file(path)?),
            MatcherKind::Remote(r) => Backend::Remote(Client::new(r)?),
        };
        Ok(Matcher {
            config: config.clone(),
            backend,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &MatcherConfig {
        &self.config
    }

    fn decide(&self, score: f64) -> MatchScore {
        MatchScore {
            score,
            is_match: score >= self.config.decision_threshold,
        }
    }

    /// Scores one ordered pair.
    pub fn score(&self, request: PairRequest<'_>) -> Result<MatchScore> {
        Ok(self.score_pairs(&[request])?[0])
    }

    /// Scores a batch of ordered pairs, in order. Remote requests are issued
    /// in batches of the configured size.
    pub fn score_pairs(&self, requests: &[PairRequest<'_>]) -> Result<Vec<MatchScore>> {
        for r in requests {
            if r.argument_text.trim().is_empty() || r.key_point_text.trim().is_empty() {
                return Err(Error::EmptyText("match texts must be non-empty".into()));
            }
        }
        let mut scores: Vec<Option<f64>> = {
            let cache = self.cache.lock().expect("pair cache poisoned");
            requests
                .iter()
                .map(|r| r.ids().and_then(|(a, b)| cache.get(&(a.to_string(), b.to_string())).copied()))
                .collect()
        };
        let missing: Vec<usize> = (0..requests.len()).filter(|&i| scores[i].is_none()).collect();
        if !missing.is_empty() {
            let todo: Vec<PairRequest<'_>> = missing.iter().map(|&i| requests[i]).collect();
            let fresh = self.compute(&todo)?;
            let mut cache = self.cache.lock().expect("pair cache poisoned");
            for (&i, s) in missing.iter().zip(fresh) {
                if let Some((a, b)) = requests[i].ids() {
                    cache.insert((a.to_string(), b.to_string()), s);
                }
                scores[i] = Some(s);
            }
        }
        Ok(scores.into_iter().map(|s| self.decide(s.expect("every pair scored"))).collect())
    }

    fn compute(&self, requests: &[PairRequest<'_>]) -> Result<Vec<f64>> {
        match &self.backend {
            Backend::Oracle(corpus) => requests
                .iter()
                .map(|r| {
                    let (a, b) = r
                        .ids()
                        .ok_or_else(|| Error::Usage("the oracle matcher needs both ids".into()))?;
                    let ga = oracle_gold_set(corpus, a);
                    let gb = oracle_gold_set(corpus, b);
                    Ok(if ga.intersection(&gb).next().is_some() { 1.0 } else { 0.0 })
                })
                .collect(),
            Backend::Lexical => Ok(requests
                .iter()
                .map(|r| jaccard(r.argument_text, r.key_point_text))
                .collect()),
            Backend::File(table) => requests
                .iter()
                .map(|r| {
                    let (a, b) = r
                        .ids()
                        .ok_or_else(|| Error::Usage("the file matcher needs both ids".into()))?;
                    table
                        .get(&(a.to_string(), b.to_string()))
                        .copied()
                        .ok_or_else(|| Error::MissingPair {
                            argument: a.to_string(),
                            key_point: b.to_string(),
                        })
                })
                .collect(),
            Backend::Remote(client) => {
                let mut out = Vec::with_capacity(requests.len());
                for chunk in requests.chunks(client.batch_size()) {
                    let body = MatchRequestBody {
                        pairs: chunk
                            .iter()
                            .map(|r| MatchPairBody {
                                argument: r.argument_text,
                                key_point: r.key_point_text,
                            })
                            .collect(),
                    };
                    let response: MatchResponseBody = client.post("/v1/match", &body)?;
                    if response.scores.len() != chunk.len() {
                        return Err(Error::Transport(format!(
                            "/v1/match returned {} scores for {} pairs",
                            response.scores.len(),
                            chunk.len()
                        )));
                    }
                    if let Some(bad) = response.scores.iter().find(|s| !(0.0..=1.0).contains(*s)) {
                        return Err(Error::Transport(format!("/v1/match returned score {bad} outside [0, 1]")));
                    }
                    out.extend(response.scores);
                }
                Ok(out)
            }
        }
    }

    /// Number of `cluster` members that match `candidate`. Each member sits
    /// in the argument slot and the candidate in the key point slot, unless
    /// `swap_slots` is set.
    pub fn match_count(&self, cluster: &[&Argument], candidate: &Argument) -> Result<usize> {
        let requests: Vec<PairRequest<'_>> = cluster
            .iter()
            .map(|m| {
                if self.config.swap_slots {
                    PairRequest::new(&candidate.text, &m.text).with_ids(&candidate.id, &m.id)
                } else {
                    PairRequest::new(&m.text, &candidate.text).with_ids(&m.id, &candidate.id)
                }
            })
            .collect();
        Ok(self.score_pairs(&requests)?.iter().filter(|s| s.is_match).count())
    }
}

fn oracle_gold_set(corpus: &Corpus, id: &str) -> BTreeSet<String> {
    if corpus.argument(id).is_some() {
        corpus.gold_key_points(id).cloned().unwrap_or_default()
    } else if corpus.key_point(id).is_some() {
        BTreeSet::from([id.to_string()])
    } else {
        BTreeSet::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{GoldLabel, KeyPoint, Topic};

    fn corpus() -> Corpus {
        let arg = |id: &str| Argument {
            id: id.into(),
            topic_id: "t".into(),
            text: format!("argument {id}"),
            stance: None,
            parent_id: None,
            sentence_index: None,
        };
        let kp = |id: &str| KeyPoint {
            id: id.into(),
            topic_id: "t".into(),
            text: format!("kp {id}"),
            stance: None,
            is_catch_all: false,
        };
        let l = |a: &str, k: &str, v: u8| GoldLabel {
            argument_id: a.into(),
            key_point_id: k.into(),
            label: v,
        };
        Corpus::new(
            vec![Topic {
                id: "t".into(),
                text: "topic".into(),
            }],
            ["c", "m1", "m2", "m3", "m4", "m5", "m6"].into_iter().map(arg).collect(),
            vec![kp("k1"), kp("k2")],
            vec![
                l("c", "k1", 1),
                l("m1", "k1", 1),
                l("m2", "k1", 1),
                l("m3", "k1", 1),
                l("m4", "k1", 1),
                l("m4", "k2", 1),
                l("m5", "k2", 1),
                l("m6", "k2", 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn oracle_argument_key_point_pairs() {
        let c = corpus();
        let m = Matcher::new(&MatcherConfig::new(MatcherKind::Oracle), Some(&c)).unwrap();
        let yes = m.score(PairRequest::new("x", "y").with_ids("c", "k1")).unwrap();
        assert_eq!(yes, MatchScore { score: 1.0, is_match: true });
        let labeled_zero = m.score(PairRequest::new("x", "y").with_ids("m6", "k2")).unwrap();
        assert_eq!(labeled_zero, MatchScore { score: 0.0, is_match: false });
        let absent = m.score(PairRequest::new("x", "y").with_ids("m5", "k1")).unwrap();
        assert!(!absent.is_match);
        assert!(matches!(m.score(PairRequest::new("x", "y")), Err(Error::Usage(_))));
    }

    #[test]
    fn oracle_match_count_uses_shared_gold() {
        let c = corpus();
        let m = Matcher::new(&MatcherConfig::new(MatcherKind::Oracle), Some(&c)).unwrap();
        let members: Vec<&Argument> = ["m1", "m2", "m3", "m4", "m5", "m6"]
            .iter()
            .map(|id| c.argument(id).unwrap())
            .collect();
        assert_eq!(m.match_count(&members, c.argument("c").unwrap()).unwrap(), 4);
        assert_eq!(m.match_count(&[], c.argument("c").unwrap()).unwrap(), 0);
    }

    #[test]
    fn lexical_scores() {
        let m = Matcher::new(&MatcherConfig::new(MatcherKind::Lexical), None).unwrap();
        let s = m.score(PairRequest::new("Vaccines save lives", "vaccines save lives!")).unwrap();
        assert_eq!(s, MatchScore { score: 1.0, is_match: true });
        assert!((jaccard("a b c", "b c d") - 0.5).abs() < 1e-15);
        assert!(matches!(m.score(PairRequest::new(" ", "x")), Err(Error::EmptyText(_))));
    }

    #[test]
    fn oracle_requires_corpus_and_threshold_is_validated() {
        assert!(Matcher::new(&MatcherConfig::new(MatcherKind::Oracle), None).is_err());
        let mut cfg = MatcherConfig::new(MatcherKind::Lexical);
        cfg.decision_threshold = 1.0;
        assert!(cfg.validate().is_err());
    }
}
