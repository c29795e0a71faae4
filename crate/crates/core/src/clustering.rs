//! Threshold-stopped agglomerative clustering and Rand-index scoring.
//!
//! [`cluster`] merges the two closest clusters until the closest pair is
//! farther apart than `distance_threshold` (or until `n_clusters` remain).
//! Linkage distances are maintained with the Lance–Williams updates on a
//! full distance matrix, with a cached nearest neighbour per row.
//!
//! Merges are fully deterministic: among pairs at equal distance the pair
//! whose smallest member ids, taken as an ordered (lower, higher) tuple, is
//! lexicographically smallest wins. Members are compared by argument id, so
//! the result does not depend on the order in which arguments were loaded.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linkage {
    #[default]
    Average,
    Complete,
    /// Ward's minimum-variance criterion, reported as the Ward distance
    /// `sqrt(2 n_a n_b / (n_a + n_b)) * |c_a - c_b|`.
    Ward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    Euclidean,
    /// `1 - cos(u, v)`.
    Cosine,
}

pub const DEFAULT_DISTANCE_THRESHOLD: f64 = 1.5;

fn default_threshold() -> f64 {
    DEFAULT_DISTANCE_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterConfig {
    #[serde(default = "default_threshold")]
    pub distance_threshold: f64,
    #[serde(default)]
    pub linkage: Linkage,
    #[serde(default)]
    pub metric: Metric,
    /// When set, merging stops at this many clusters and the threshold is
    /// ignored.
    #[serde(default)]
    pub n_clusters: Option<usize>,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            distance_threshold: DEFAULT_DISTANCE_THRESHOLD,
            linkage: Linkage::default(),
            metric: Metric::default(),
            n_clusters: None,
        }
    }
}

impl ClusterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_clusters.is_none() && !(self.distance_threshold.is_finite() && self.distance_threshold >= 0.0) {
            return Err(Error::Config(format!(
                "distance threshold must be a non-negative number, got {}",
                self.distance_threshold
            )));
        }
        if self.n_clusters == Some(0) {
            return Err(Error::Config("n_clusters must be positive".into()));
        }
        if self.linkage == Linkage::Ward && self.metric != Metric::Euclidean {
            return Err(Error::Config("ward linkage requires the euclidean metric".into()));
        }
        Ok(())
    }
}

/// A partition of argument ids, largest cluster first. Members of each
/// cluster are in ascending id order; clusters of equal size are ordered by
/// their smallest member id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAssignment")]
pub struct ClusterAssignment {
    clusters: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct RawAssignment {
    clusters: Vec<Vec<String>>,
}

impl TryFrom<RawAssignment> for ClusterAssignment {
    type Error = Error;

    fn try_from(raw: RawAssignment) -> Result<Self> {
        ClusterAssignment::from_clusters(raw.clusters)
    }
}

impl ClusterAssignment {
    /// Canonicalizes member and cluster order. Fails on empty clusters or ids
    /// that appear more than once.
    pub fn from_clusters(mut clusters: Vec<Vec<String>>) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &mut clusters {
            if c.is_empty() {
                return Err(Error::Format("empty cluster".into()));
            }
            for id in c.iter() {
                if !seen.insert(id.clone()) {
                    return Err(Error::Format(format!("id {id} appears in more than one cluster")));
                }
            }
            c.sort();
        }
        clusters.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
        Ok(ClusterAssignment { clusters })
    }

    pub fn clusters(&self) -> &[Vec<String>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(Vec::len).collect()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("assignment serialization is infallible")
    }

    pub fn from_json_str(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Format(format!("cluster assignment JSON: {e}")))
    }
}

fn point_distance(metric: Metric, a: &[f64], b: &[f64]) -> f64 {
    match metric {
        Metric::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt(),
        Metric::Cosine => {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
            1.0 - dot / (na * nb)
        }
    }
}

/// Best partner of a row: distance then partner slot.
#[derive(Clone, Copy)]
struct Neighbor {
    dist: f64,
    partner: usize,
}

fn pair_key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// Orders candidate merges by distance, then by pair key.
fn cmp_candidate(d1: f64, k1: (usize, usize), d2: f64, k2: (usize, usize)) -> Ordering {
    d1.total_cmp(&d2).then(k1.cmp(&k2))
}

/// Agglomerative clustering of the embeddings.
pub fn cluster(embeddings: &EmbeddingSet, config: &ClusterConfig) -> Result<ClusterAssignment> {
    config.validate()?;
    let ids: Vec<&str> = embeddings.iter().map(|(id, _)| id).collect();
    let points: Vec<&[f64]> = embeddings.iter().map(|(_, v)| v).collect();
    let n = ids.len();
    if n == 0 {
        return Err(Error::Usage("cannot cluster an empty embedding set".into()));
    }
    if let Some(k) = config.n_clusters {
        if k > n {
            return Err(Error::Config(format!("n_clusters {k} exceeds the number of points {n}")));
        }
    }

    let mut dist = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = point_distance(config.metric, points[i], points[j]);
            if !d.is_finite() {
                return Err(Error::Format(format!(
                    "non-finite distance between {} and {}",
                    ids[i], ids[j]
                )));
            }
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    // Slot i always holds the cluster whose smallest member index is i.
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut active: Vec<bool> = vec![true; n];
    let mut active_count = n;

    let nearest = |row: usize, active: &[bool], dist: &[f64]| -> Option<Neighbor> {
        let mut best: Option<Neighbor> = None;
        for j in (0..n).filter(|&j| j != row && active[j]) {
            let d = dist[row * n + j];
            let better = best.is_none_or(|b| {
                cmp_candidate(d, pair_key(row, j), b.dist, pair_key(row, b.partner)) == Ordering::Less
            });
            if better {
                best = Some(Neighbor { dist: d, partner: j });
            }
        }
        best
    };

    let mut nn: Vec<Option<Neighbor>> = (0..n).map(|i| nearest(i, &active, &dist)).collect();

    loop {
        let target = config.n_clusters.unwrap_or(1);
        if active_count <= target {
            break;
        }
        let mut best: Option<(usize, Neighbor)> = None;
        for i in (0..n).filter(|&i| active[i]) {
            if let Some(cand) = nn[i] {
                let better = best.is_none_or(|(bi, b)| {
                    cmp_candidate(cand.dist, pair_key(i, cand.partner), b.dist, pair_key(bi, b.partner))
                        == Ordering::Less
                });
                if better {
                    best = Some((i, cand));
                }
            }
        }
        let Some((i, nb)) = best else { break };
        if config.n_clusters.is_none() && nb.dist > config.distance_threshold {
            break;
        }

        let (keep, gone) = pair_key(i, nb.partner);
        let (size_keep, size_gone) = (members[keep].len() as f64, members[gone].len() as f64);
        let d_merge = dist[keep * n + gone];
        for k in (0..n).filter(|&k| active[k] && k != keep && k != gone) {
            let (dk, dg) = (dist[k * n + keep], dist[k * n + gone]);
            let updated = match config.linkage {
                Linkage::Average => (size_keep * dk + size_gone * dg) / (size_keep + size_gone),
                Linkage::Complete => dk.max(dg),
                Linkage::Ward => {
                    let size_k = members[k].len() as f64;
                    let sq = ((size_keep + size_k) * dk * dk + (size_gone + size_k) * dg * dg
                        - size_k * d_merge * d_merge)
                        / (size_keep + size_gone + size_k);
                    sq.max(0.0).sqrt()
                }
            };
            dist[k * n + keep] = updated;
            dist[keep * n + k] = updated;
        }
        let moved = std::mem::take(&mut members[gone]);
        members[keep].extend(moved);
        active[gone] = false;
        active_count -= 1;
        nn[gone] = None;

        nn[keep] = nearest(keep, &active, &dist);
        for k in (0..n).filter(|&k| active[k] && k != keep) {
            match nn[k] {
                Some(cur) if cur.partner != keep && cur.partner != gone => {
                    let d = dist[k * n + keep];
                    if cmp_candidate(d, pair_key(k, keep), cur.dist, pair_key(k, cur.partner)) == Ordering::Less {
                        nn[k] = Some(Neighbor { dist: d, partner: keep });
                    }
                }
                _ => nn[k] = nearest(k, &active, &dist),
            }
        }
    }

    let clusters = (0..n)
        .filter(|&i| active[i])
        .map(|i| members[i].iter().map(|&m| ids[m].to_string()).collect())
        .collect();
    ClusterAssignment::from_clusters(clusters)
}

/// Plain and adjusted Rand index of a predicted partition against gold
/// groups.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandScores {
    pub rand: f64,
    pub adjusted_rand: f64,
    /// Number of arguments retained for pair counting.
    pub retained: usize,
}

/// Gold group per argument for Rand-index scoring, plus the ids of catch-all
/// key points. An argument labeled to several key points is assigned to the
/// smallest non-catch-all key point id among them.
pub fn gold_groups(corpus: &Corpus) -> (BTreeMap<String, String>, BTreeSet<String>) {
    let catch_all: BTreeSet<String> = corpus
        .key_points()
        .iter()
        .filter(|k| k.is_catch_all)
        .map(|k| k.id.clone())
        .collect();
    let mut gold = BTreeMap::new();
    for arg in corpus.arguments() {
        let Some(kps) = corpus.gold_key_points(&arg.id) else { continue };
        let chosen = kps.iter().find(|k| !catch_all.contains(*k)).or_else(|| kps.iter().next());
        if let Some(kp) = chosen {
            gold.insert(arg.id.clone(), kp.clone());
        }
    }
    (gold, catch_all)
}

fn comb2(n: u64) -> f64 {
    (n * n.saturating_sub(1) / 2) as f64
}

/// Pair-counting agreement between `predicted` and `gold`. Arguments whose
/// gold group is a catch-all key point are dropped before counting.
pub fn rand_index(
    predicted: &ClusterAssignment,
    gold: &BTreeMap<String, String>,
    catch_all: &BTreeSet<String>,
) -> Result<RandScores> {
    let mut pairs: Vec<(usize, &str)> = Vec::new();
    for (ci, cluster) in predicted.clusters().iter().enumerate() {
        for id in cluster {
            let g = gold
                .get(id)
                .ok_or_else(|| Error::Usage(format!("argument {id} has no gold label")))?;
            if !catch_all.contains(g) {
                pairs.push((ci, g.as_str()));
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::NoLabeledArguments);
    }

    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<&str, u64> = HashMap::new();
    let mut cells: HashMap<(usize, &str), u64> = HashMap::new();
    for &(p, g) in &pairs {
        *rows.entry(p).or_default() += 1;
        *cols.entry(g).or_default() += 1;
        *cells.entry((p, g)).or_default() += 1;
    }
    let n = pairs.len() as u64;
    let total = comb2(n);
    if total == 0.0 {
        return Ok(RandScores {
            rand: 1.0,
            adjusted_rand: 1.0,
            retained: pairs.len(),
        });
    }
    let same_both: f64 = cells.values().map(|&c| comb2(c)).sum();
    let same_pred: f64 = rows.values().map(|&c| comb2(c)).sum();
    let same_gold: f64 = cols.values().map(|&c| comb2(c)).sum();
    let agreements = total + 2.0 * same_both - same_pred - same_gold;
    let rand = agreements / total;

    let expected = same_pred * same_gold / total;
    let max_index = 0.5 * (same_pred + same_gold);
    let adjusted_rand = if max_index == expected {
        1.0
    } else {
        (same_both - expected) / (max_index - expected)
    };
    Ok(RandScores {
        rand,
        adjusted_rand,
        retained: pairs.len(),
    })
}
