#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;

use kpsum::clustering::{Linkage, Metric};
use kpsum::corpus::{Argument, Corpus, GoldLabel, KeyPoint, Topic};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VOCABULARY: &[&str] = &[
    "people", "should", "have", "the", "right", "to", "choose", "because", "it", "is", "good", "for", "society",
    "children", "money", "health", "freedom", "safety", "government", "cost", "education", "families", "crime",
    "economy", "future", "public", "private", "risk", "benefit", "law", "jobs", "energy", "environment",
];

pub fn topic(id: &str) -> Topic {
    Topic {
        id: id.into(),
        text: format!("Statement about {id}"),
    }
}

pub fn argument(id: &str, topic_id: &str, text: &str) -> Argument {
    Argument {
        id: id.into(),
        topic_id: topic_id.into(),
        text: text.into(),
        stance: None,
        parent_id: None,
        sentence_index: None,
    }
}

pub fn key_point(id: &str, topic_id: &str, text: &str) -> KeyPoint {
    KeyPoint {
        id: id.into(),
        topic_id: topic_id.into(),
        text: text.into(),
        stance: None,
        is_catch_all: false,
    }
}

pub fn label(argument_id: &str, key_point_id: &str, value: u8) -> GoldLabel {
    GoldLabel {
        argument_id: argument_id.into(),
        key_point_id: key_point_id.into(),
        label: value,
    }
}

/// Random sentence of `len` words over the shared vocabulary.
pub fn sentence(rng: &mut impl Rng, len: usize) -> String {
    let words: Vec<&str> = (0..len).map(|_| *VOCABULARY.choose(rng).unwrap()).collect();
    let mut s = words.join(" ");
    s.push('.');
    s
}

/// One topic per entry of `topics`, each with key points `{topic}_k{j}` of the
/// given sizes. Every argument carries exactly one positive label; argument
/// texts are random sentences over a shared vocabulary, so no text reveals its
/// key point.
pub fn synthetic_corpus(topics: &[(&str, &[usize])], seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ts = Vec::new();
    let mut args = Vec::new();
    let mut kps = Vec::new();
    let mut labels = Vec::new();
    for &(tid, sizes) in topics {
        ts.push(topic(tid));
        for (j, &size) in sizes.iter().enumerate() {
            let kid = format!("{tid}_k{j}");
            kps.push(key_point(&kid, tid, &sentence(&mut rng, 6)));
            for m in 0..size {
                let aid = format!("{tid}_k{j}_a{m:03}");
                let len = rng.gen_range(5..15);
                args.push(argument(&aid, tid, &sentence(&mut rng, len)));
                labels.push(label(&aid, &kid, 1));
            }
        }
    }
    Corpus::new(ts, args, kps, labels).unwrap()
}

/// The same corpus with every collection in a shuffled row order.
pub fn shuffled(corpus: &Corpus, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut topics = corpus.topics().to_vec();
    let mut args = corpus.arguments().to_vec();
    let mut kps = corpus.key_points().to_vec();
    let mut labels = corpus.labels().to_vec();
    topics.shuffle(&mut rng);
    args.shuffle(&mut rng);
    kps.shuffle(&mut rng);
    labels.shuffle(&mut rng);
    Corpus::new(topics, args, kps, labels).unwrap()
}

fn point_distance(metric: Metric, a: &[f64], b: &[f64]) -> f64 {
    match metric {
        Metric::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt(),
        Metric::Cosine => {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
            1.0 - dot / (na * nb)
        }
    }
}

fn centroid(points: &[&[f64]]) -> Vec<f64> {
    let mut c = vec![0.0; points[0].len()];
    for p in points {
        for (ci, x) in c.iter_mut().zip(p.iter()) {
            *ci += x;
        }
    }
    c.iter().map(|x| x / points.len() as f64).collect()
}

/// Linkage distance computed from scratch from the member points.
fn linkage_distance(linkage: Linkage, metric: Metric, a: &[&[f64]], b: &[&[f64]]) -> f64 {
    match linkage {
        Linkage::Average => {
            let mut total = 0.0;
            for p in a {
                for q in b {
                    total += point_distance(metric, p, q);
                }
            }
            total / (a.len() * b.len()) as f64
        }
        Linkage::Complete => a
            .iter()
            .flat_map(|p| b.iter().map(move |q| point_distance(metric, p, q)))
            .fold(f64::NEG_INFINITY, f64::max),
        Linkage::Ward => {
            let (na, nb) = (a.len() as f64, b.len() as f64);
            let gap = point_distance(Metric::Euclidean, &centroid(a), &centroid(b));
            (2.0 * na * nb / (na + nb)).sqrt() * gap
        }
    }
}

/// Cubic-time agglomeration: every round recomputes all cluster distances
/// from the member points and merges the closest pair, ties going to the pair
/// of smallest member positions (positions in ascending id order). Returns
/// clusters as sets of ids.
pub fn naive_agglomeration(
    points: &BTreeMap<String, Vec<f64>>,
    linkage: Linkage,
    metric: Metric,
    threshold: f64,
    n_clusters: Option<usize>,
) -> BTreeSet<BTreeSet<String>> {
    let ids: Vec<&String> = points.keys().collect();
    let mut clusters: Vec<Vec<usize>> = (0..ids.len()).map(|i| vec![i]).collect();
    loop {
        if clusters.len() <= n_clusters.unwrap_or(1) {
            break;
        }
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for x in 0..clusters.len() {
            for y in (x + 1)..clusters.len() {
                let pa: Vec<&[f64]> = clusters[x].iter().map(|&i| points[ids[i]].as_slice()).collect();
                let pb: Vec<&[f64]> = clusters[y].iter().map(|&i| points[ids[i]].as_slice()).collect();
                let d = linkage_distance(linkage, metric, &pa, &pb);
                let (mx, my) = (clusters[x][0], clusters[y][0]);
                let key = (mx.min(my), mx.max(my));
                let better = match best {
                    None => true,
                    Some((bd, bk, _, _)) => d < bd || (d == bd && key < bk),
                };
                if better {
                    best = Some((d, key, x, y));
                }
            }
        }
        let (d, _, x, y) = best.unwrap();
        if n_clusters.is_none() && d > threshold {
            break;
        }
        let moved = clusters.remove(y);
        clusters[x].extend(moved);
        clusters[x].sort_unstable();
    }
    clusters
        .into_iter()
        .map(|c| c.into_iter().map(|i| ids[i].clone()).collect())
        .collect()
}

/// Rand and adjusted Rand by enumerating every pair of elements.
pub fn brute_force_rand(predicted: &[usize], gold: &[usize]) -> (f64, f64) {
    let n = predicted.len();
    let (mut a, mut b, mut c, mut d) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..n {
        for j in (i + 1)..n {
            let same_p = predicted[i] == predicted[j];
            let same_g = gold[i] == gold[j];
            match (same_p, same_g) {
                (true, true) => a += 1,
                (true, false) => b += 1,
                (false, true) => c += 1,
                (false, false) => d += 1,
            }
        }
    }
    let total = a + b + c + d;
    if total == 0 {
        return (1.0, 1.0);
    }
    let rand = (a + d) as f64 / total as f64;
    let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
    let denominator = (a + b) * (b + d) + (a + c) * (c + d);
    let ari = if denominator == 0.0 {
        1.0
    } else {
        2.0 * (a * d - b * c) / denominator
    };
    (rand, ari)
}

/// A throwaway HTTP server that answers `/v1/embed` and `/v1/match`.
///
/// Embedding vectors are `[word count, character count, 1]`. A pair matches
/// (score 0.9, else 0.1) when both texts start with the same word. Requests
/// to any other path, or every request when `fail_status` is set, get that
/// status instead.
pub struct MockServer {
    pub endpoint: String,
    pub requests: Arc<AtomicUsize>,
    pub items: Arc<AtomicUsize>,
}

pub fn spawn_mock_server(fail_status: Option<u16>) -> MockServer {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let endpoint = format!("http://{}", listener.local_addr().unwrap());
    let requests = Arc::new(AtomicUsize::new(0));
    let items = Arc::new(AtomicUsize::new(0));
    let (req, it) = (requests.clone(), items.clone());
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(stream) = stream else { continue };
            let (req, it) = (req.clone(), it.clone());
            thread::spawn(move || handle(stream, fail_status, &req, &it));
        }
    });
    MockServer {
        endpoint,
        requests,
        items,
    }
}

fn first_word(s: &str) -> String {
    s.split_whitespace().next().unwrap_or("").to_lowercase()
}

fn handle(stream: std::net::TcpStream, fail_status: Option<u16>, requests: &AtomicUsize, items: &AtomicUsize) {
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    loop {
        let mut request_line = String::new();
        if reader.read_line(&mut request_line).unwrap_or(0) == 0 {
            return;
        }
        let path = request_line.split_whitespace().nth(1).unwrap_or("").to_string();
        let mut length = 0usize;
        loop {
            let mut line = String::new();
            reader.read_line(&mut line).unwrap();
            let line = line.trim_end();
            if line.is_empty() {
                break;
            }
            if let Some((name, value)) = line.split_once(':') {
                if name.eq_ignore_ascii_case("content-length") {
                    length = value.trim().parse().unwrap();
                }
            }
        }
        let mut body = vec![0u8; length];
        reader.read_exact(&mut body).unwrap();
        requests.fetch_add(1, Ordering::SeqCst);

        let json: serde_json::Value = serde_json::from_slice(&body).unwrap_or_default();
        let (status, payload) = match (fail_status, path.as_str()) {
            (Some(code), _) => (code, serde_json::json!({"error": "unavailable"})),
            (None, "/v1/embed") => {
                let texts = json["texts"].as_array().cloned().unwrap_or_default();
                items.fetch_add(texts.len(), Ordering::SeqCst);
                let vectors: Vec<Vec<f64>> = texts
                    .iter()
                    .map(|t| {
                        let t = t.as_str().unwrap();
                        vec![t.split_whitespace().count() as f64, t.chars().count() as f64, 1.0]
                    })
                    .collect();
                (200, serde_json::json!({ "vectors": vectors }))
            }
            (None, "/v1/match") => {
                let pairs = json["pairs"].as_array().cloned().unwrap_or_default();
                items.fetch_add(pairs.len(), Ordering::SeqCst);
                let scores: Vec<f64> = pairs
                    .iter()
                    .map(|p| {
                        let a = first_word(p["argument"].as_str().unwrap());
                        let b = first_word(p["key_point"].as_str().unwrap());
                        if a == b {
                            0.9
                        } else {
                            0.1
                        }
                    })
                    .collect();
                (200, serde_json::json!({ "scores": scores }))
            }
            (None, _) => (404, serde_json::json!({"error": "not found"})),
        };
        let body = payload.to_string();
        let mut out = stream.try_clone().unwrap();
        let reason = if status == 200 { "OK" } else { "Error" };
        write!(
            out,
            "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{body}",
            body.len()
        )
        .unwrap();
        out.flush().unwrap();
    }
}
