//! Per-topic argument embeddings behind a uniform backend interface.
//!
//! | kind      | source                                                   |
//! |-----------|----------------------------------------------------------|
//! | `oracle`  | multi-hot indicator of the argument's gold key points    |
//! | `lexical` | hashed term frequencies over 4096 buckets, L2-normalized |
//! | `file`    | JSON Lines `{"id": ..., "vector": [...]}`                |
//! | `remote`  | `POST /v1/embed` with `{"texts": [...]}`                 |
//!
//! Embeddings are always requested for one topic at a time.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::remote::{Client, RemoteConfig};
use crate::text::{fnv1a, lexical_tokens};

/// Number of hash buckets used by the lexical backend.
pub const LEXICAL_BUCKETS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EmbeddingBackendConfig {
    Oracle,
    Lexical,
    File { path: PathBuf },
    Remote(RemoteConfig),
}

/// Vectors of one common dimension, keyed by argument id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingSet {
    dim: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingSet {
    pub fn new(vectors: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        let dim = vectors.values().next().map_or(0, Vec::len);
        if dim == 0 && !vectors.is_empty() {
            return Err(Error::Format("embedding vectors must be non-empty".into()));
        }
        for (id, v) in &vectors {
            if v.len() != dim {
                return Err(Error::Format(format!(
                    "vector for {id} has dimension {}, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Format(format!("vector for {id} has a non-finite component")));
            }
        }
        Ok(EmbeddingSet { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&[f64]> {
        self.vectors.get(id).map(Vec::as_slice)
    }

    /// Entries in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.vectors.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

/// Embeds every argument of `topic_id`.
pub fn embed(config: &EmbeddingBackendConfig, corpus: &Corpus, topic_id: &str) -> Result<EmbeddingSet> {
    if corpus.topic(topic_id).is_none() {
        return Err(Error::Usage(format!("unknown topic {topic_id}")));
    }
    match config {
        EmbeddingBackendConfig::Oracle => oracle_embeddings(corpus, topic_id),
        EmbeddingBackendConfig::Lexical => EmbeddingSet::new(
            corpus
                .arguments_of(topic_id)
                .map(|a| (a.id.clone(), lexical_vector(&a.text)))
                .collect(),
        ),
        EmbeddingBackendConfig::File { path } => {
            let ids: BTreeSet<&str> = corpus.arguments_of(topic_id).map(|a| a.id.as_str()).collect();
            load_embedding_file(path, &ids)
        }
        EmbeddingBackendConfig::Remote(remote) => remote_embeddings(remote, corpus, topic_id),
    }
}

fn oracle_embeddings(corpus: &Corpus, topic_id: &str) -> Result<EmbeddingSet> {
    let kp_ids: BTreeSet<&str> = corpus.key_points_of(topic_id).map(|k| k.id.as_str()).collect();
    let position: HashMap<&str, usize> = kp_ids.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    if kp_ids.is_empty() {
        return Err(Error::Usage(format!(
            "oracle embeddings need key points, topic {topic_id} has none"
        )));
    }
    let vectors = corpus
        .arguments_of(topic_id)
        .map(|a| {
            let mut v = vec![0.0; kp_ids.len()];
            for kp in corpus.gold_key_points(&a.id).into_iter().flatten() {
                v[position[kp.as_str()]] = 1.0;
            }
            (a.id.clone(), v)
        })
        .collect();
    EmbeddingSet::new(vectors)
}

/// Hashed term-frequency vector of `text`, L2-normalized unless it has no
/// tokens (then all zeros).
pub fn lexical_vector(text: &str) -> Vec<f64> {
    let mut v = vec![0.0; LEXICAL_BUCKETS];
    for token in lexical_tokens(text) {
        v[(fnv1a(token.as_bytes()) % LEXICAL_BUCKETS as u64) as usize] += 1.0;
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

#[derive(Deserialize)]
struct EmbeddingLine {
    id: String,
    vector: Vec<f64>,
}

/// Reads a JSON Lines embedding file, keeping only `ids`. Every id in `ids`
/// must be present.
pub fn load_embedding_file(path: &Path, ids: &BTreeSet<&str>) -> Result<EmbeddingSet> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut vectors = BTreeMap::new();
    let mut dim = None;
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line_no = n as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        let entry: EmbeddingLine = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message: e.to_string(),
        })?;
        match dim {
            None => dim = Some(entry.vector.len()),
            Some(d) if d != entry.vector.len() => {
                return Err(Error::Format(format!(
                    "{}:{line_no}: vector has dimension {}, expected {d}",
                    path.display(),
                    entry.vector.len()
                )))
            }
            Some(_) => {}
        }
        if !ids.contains(entry.id.as_str()) {
            continue;
        }
        if vectors.insert(entry.id.clone(), entry.vector).is_some() {
            return Err(Error::Format(format!(
                "{}:{line_no}: duplicate id {}",
                path.display(),
                entry.id
            )));
        }
    }
    let missing: Vec<String> = ids
        .iter()
        .filter(|id| !vectors.contains_key(**id))
        .map(|id| id.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingEmbeddings(missing));
    }
    EmbeddingSet::new(vectors)
}

/// Writes an embedding set in the JSON Lines file format, ids ascending.
pub fn write_embedding_file(set: &EmbeddingSet, path: &Path) -> Result<()> {
    let mut out = String::new();
    for (id, v) in set.iter() {
        out.push_str(&serde_json::json!({ "id": id, "vector": v }).to_string());
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    texts: Vec<&'a str>,
}

#[derive(Deserialize)]
struct EmbedResponse {
    vectors: Vec<Vec<f64>>,
}

fn remote_embeddings(remote: &RemoteConfig, corpus: &Corpus, topic_id: &str) -> Result<EmbeddingSet> {
    let client = Client::new(remote)?;
    let args: Vec<_> = corpus.arguments_of(topic_id).collect();
    let mut vectors = BTreeMap::new();
    for chunk in args.chunks(client.batch_size()) {
        let request = EmbedRequest {
            texts: chunk.iter().map(|a| a.text.as_str()).collect(),
        };
        let response: EmbedResponse = client.post("/v1/embed", &request)?;
        if response.vectors.len() != chunk.len() {
            return Err(Error::Transport(format!(
                "/v1/embed returned {} vectors for {} texts",
                response.vectors.len(),
                chunk.len()
            )));
        }
        for (a, v) in chunk.iter().zip(response.vectors) {
            vectors.insert(a.id.clone(), v);
        }
    }
    EmbeddingSet::new(vectors)
}

/// Scales every vector to unit Euclidean norm.
pub fn normalize(set: &EmbeddingSet) -> Result<EmbeddingSet> {
    let mut vectors = BTreeMap::new();
    for (id, v) in set.iter() {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector(id.to_string()));
        }
        vectors.insert(id.to_string(), v.iter().map(|x| x / norm).collect());
    }
    Ok(EmbeddingSet {
        dim: set.dim,
        vectors,
    })
}
