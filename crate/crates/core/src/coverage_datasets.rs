//! Pseudo-summaries with a prescribed key point coverage.
//!
//! A pseudo-summary for a topic at level `L` is built by choosing
//! `round_half_up(L * m)` (at least one) of the topic's `m` non-catch-all key
//! points uniformly at random, then drawing exactly `size` arguments whose
//! positive labels all lie inside the chosen set. One argument per chosen key
//! point is drawn first so that every chosen key point is represented; the
//! rest are drawn uniformly without replacement.
//!
//! # Random streams
//!
//! Each `(seed, topic_id, level, sample_index)` gets its own ChaCha20 stream
//! whose 32-byte key is the SHA-256 of
//!
//! ```text
//! "kpsum/coverage-sample/v1" || seed (u64 LE) || len(topic_id) (u64 LE)
//!     || topic_id (UTF-8) || level (f64 bits, u64 LE) || sample_index (u64 LE)
//! ```
//!
//! so samples are reproducible independently of the order they are generated
//! in. Candidate lists are sorted by id before drawing, which makes the result
//! independent of corpus row order too.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::selection::{GeneratedSummary, SummaryEntry};

pub const STREAM_DOMAIN: &str = "kpsum/coverage-sample/v1";
pub const ARGKP_SAMPLE_SIZE: usize = 25;
pub const DEBATE_SAMPLE_SIZE: usize = 75;
pub const DEFAULT_SAMPLES: usize = 10;
pub const DEFAULT_LEVELS: [f64; 3] = [1.0, 0.75, 0.5];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageSampleSpec {
    pub topic_id: String,
    pub level: f64,
    pub size: usize,
    pub n_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoSummary {
    pub spec: CoverageSampleSpec,
    pub sample_index: usize,
    /// Sorted ascending.
    pub selected_key_point_ids: Vec<String>,
    /// In draw order.
    pub argument_ids: Vec<String>,
}

impl PseudoSummary {
    /// Views the sample as a summary whose entries are the drawn arguments.
    pub fn to_summary(&self, corpus: &Corpus) -> Result<GeneratedSummary> {
        let entries = self
            .argument_ids
            .iter()
            .enumerate()
            .map(|(i, id)| {
                let arg = corpus
                    .argument(id)
                    .ok_or_else(|| Error::Integrity(format!("pseudo-summary argument {id} is not in the corpus")))?;
                Ok(SummaryEntry {
                    argument_id: id.clone(),
                    text: arg.text.clone(),
                    cluster_index: i,
                    cluster_size: 1,
                    score: 0.0,
                })
            })
            .collect::<Result<_>>()?;
        Ok(GeneratedSummary {
            topic_id: self.spec.topic_id.clone(),
            method: None,
            entries,
        })
    }
}

/// Number of key points to select: `level * total` rounded half up, at least
/// one and at most `total`. A 1e-9 slack absorbs products such as
/// `0.15 * 10 = 1.4999999999999998`.
pub fn selected_count(level: f64, total: usize) -> usize {
    let raw = (level * total as f64 + 0.5 + 1e-9).floor() as usize;
    raw.clamp(1, total.max(1))
}

fn stream(seed: u64, topic_id: &str, level: f64, sample_index: usize) -> ChaCha20Rng {
    let mut h = Sha256::new();
    h.update(STREAM_DOMAIN.as_bytes());
    h.update(seed.to_le_bytes());
    h.update((topic_id.len() as u64).to_le_bytes());
    h.update(topic_id.as_bytes());
    h.update(level.to_bits().to_le_bytes());
    h.update((sample_index as u64).to_le_bytes());
    let digest = h.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha20Rng::from_seed(key)
}

/// Moves a uniform random `k`-subset of `items` to its front, in draw order.
fn partial_shuffle<T>(items: &mut [T], k: usize, rng: &mut ChaCha20Rng) {
    for i in 0..k.min(items.len()) {
        let j = rng.gen_range(i..items.len());
        items.swap(i, j);
    }
}

/// Draws one pseudo-summary.
pub fn sample_pseudo_summary(corpus: &Corpus, spec: &CoverageSampleSpec, sample_index: usize) -> Result<PseudoSummary> {
    if !(spec.level > 0.0 && spec.level <= 1.0) {
        return Err(Error::Config(format!("coverage level must lie in (0, 1], got {}", spec.level)));
    }
    if spec.size == 0 {
        return Err(Error::Config("sample size must be positive".into()));
    }
    if corpus.topic(&spec.topic_id).is_none() {
        return Err(Error::Usage(format!("unknown topic {}", spec.topic_id)));
    }
    let mut key_points: Vec<&str> = corpus
        .key_points_of(&spec.topic_id)
        .filter(|k| !k.is_catch_all)
        .map(|k| k.id.as_str())
        .collect();
    if key_points.is_empty() {
        return Err(Error::Usage(format!("topic {} has no key points to select", spec.topic_id)));
    }
    key_points.sort_unstable();

    let mut rng = stream(spec.seed, &spec.topic_id, spec.level, sample_index);
    let count = selected_count(spec.level, key_points.len());
    if spec.size < count {
        return Err(Error::Config(format!(
            "sample size {} is smaller than the {count} key points selected for topic {}",
            spec.size, spec.topic_id
        )));
    }
    partial_shuffle(&mut key_points, count, &mut rng);
    let selected: BTreeSet<&str> = key_points[..count].iter().copied().collect();

    let mut pool: Vec<(&str, &BTreeSet<String>)> = corpus
        .arguments_of(&spec.topic_id)
        .filter_map(|a| {
            let gold = corpus.gold_key_points(&a.id)?;
            (!gold.is_empty() && gold.iter().all(|k| selected.contains(k.as_str()))).then_some((a.id.as_str(), gold))
        })
        .collect();
    pool.sort_unstable_by(|a, b| a.0.cmp(b.0));
    if pool.len() < spec.size {
        return Err(Error::Capacity {
            context: format!(" for topic {} at level {}", spec.topic_id, spec.level),
            required: spec.size,
            available: pool.len(),
        });
    }

    let mut chosen: Vec<&str> = Vec::with_capacity(spec.size);
    let mut represented: BTreeSet<&str> = BTreeSet::new();
    for &kp in &selected {
        if represented.contains(kp) {
            continue;
        }
        let candidates: Vec<usize> = (0..pool.len()).filter(|&i| pool[i].1.contains(kp)).collect();
        let Some(&pick) = candidates.get(rng.gen_range(0..candidates.len().max(1))) else {
            return Err(Error::Capacity {
                context: format!(" for key point {kp} of topic {}", spec.topic_id),
                required: 1,
                available: 0,
            });
        };
        let (id, gold) = pool.remove(pick);
        represented.extend(gold.iter().map(String::as_str));
        chosen.push(id);
    }
    let remaining = spec.size - chosen.len();
    partial_shuffle(&mut pool, remaining, &mut rng);
    chosen.extend(pool[..remaining].iter().map(|(id, _)| *id));

    Ok(PseudoSummary {
        spec: spec.clone(),
        sample_index,
        selected_key_point_ids: selected.into_iter().map(String::from).collect(),
        argument_ids: chosen.into_iter().map(String::from).collect(),
    })
}

/// Draws `n_samples` pseudo-summaries for every topic (ascending id) and
/// level (in the given order).
pub fn generate_suite(corpus: &Corpus, levels: &[f64], size: usize, n_samples: usize, seed: u64) -> Result<Vec<PseudoSummary>> {
    let mut topic_ids: Vec<&str> = corpus.topics().iter().map(|t| t.id.as_str()).collect();
    topic_ids.sort_unstable();
    let mut suite = Vec::with_capacity(topic_ids.len() * levels.len() * n_samples);
    for topic_id in topic_ids {
        for &level in levels {
            let spec = CoverageSampleSpec {
                topic_id: topic_id.to_string(),
                level,
                size,
                n_samples,
                seed,
            };
            for i in 0..n_samples {
                suite.push(sample_pseudo_summary(corpus, &spec, i)?);
            }
        }
    }
    Ok(suite)
}

/// One JSON object per line.
pub fn suite_to_jsonl(suite: &[PseudoSummary]) -> String {
    let mut out = String::new();
    for p in suite {
        out.push_str(&serde_json::to_string(p).expect("pseudo-summary serialization is infallible"));
        out.push('\n');
    }
    out
}

pub fn suite_from_jsonl(text: &str) -> Result<Vec<PseudoSummary>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| serde_json::from_str(l).map_err(|e| Error::Format(format!("suite line {}: {e}", n + 1))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_rule() {
        assert_eq!(selected_count(0.5, 9), 5);
        assert_eq!(selected_count(0.75, 9), 7);
        assert_eq!(selected_count(1.0, 9), 9);
        assert_eq!(selected_count(0.5, 4), 2);
        assert_eq!(selected_count(0.15, 10), 2);
        assert_eq!(selected_count(0.01, 9), 1);
    }

    #[test]
    fn streams_differ_per_component() {
        let draw = |seed, topic: &str, level, idx| stream(seed, topic, level, idx).gen::<u64>();
        let base = draw(7, "t0", 0.5, 0);
        assert_eq!(base, draw(7, "t0", 0.5, 0));
        assert_ne!(base, draw(8, "t0", 0.5, 0));
        assert_ne!(base, draw(7, "t1", 0.5, 0));
        assert_ne!(base, draw(7, "t0", 0.75, 0));
        assert_ne!(base, draw(7, "t0", 0.5, 1));
    }
}
