//! Argument corpora: topics, arguments, reference key points and gold labels.
//!
//! A [`Corpus`] is validated on construction and immutable afterwards. Every
//! operation that derives a new corpus ([`attach_catch_all`],
//! [`split_sentences`]) goes back through the same validation, so referential
//! integrity holds for every value of the type.
//!
//! Two CSV layouts are understood:
//!
//! * ArgKP: `arguments.csv` (`arg_id,argument,topic,stance`), `key_points.csv`
//!   (`key_point_id,key_point,topic,stance`) and `labels.csv`
//!   (`arg_id,key_point_id,label`).
//! * Debate: a single file `arg_id,argument,topic,aspect`, where each distinct
//!   aspect of a topic becomes a key point.
//!
//! In both layouts the `topic` column carries the topic statement. Topic ids
//! are assigned as `t0, t1, ...` in lexicographic order of the statement, so
//! they do not depend on row order.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Text of the per-topic catch-all key point.
pub const CATCH_ALL_TEXT: &str = "No matching key point";

/// Suffix appended to a topic id to form its catch-all key point id.
pub const CATCH_ALL_SUFFIX: &str = "__none";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topic {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Argument {
    pub id: String,
    pub topic_id: String,
    pub text: String,
    /// Loaded when present, never consulted by the pipeline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stance: Option<i8>,
    /// Set on arguments produced by [`split_sentences`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyPoint {
    pub id: String,
    pub topic_id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stance: Option<i8>,
    #[serde(default)]
    pub is_catch_all: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldLabel {
    pub argument_id: String,
    pub key_point_id: String,
    pub label: u8,
}

#[derive(Debug, Clone, Deserialize)]
struct CorpusParts {
    topics: Vec<Topic>,
    arguments: Vec<Argument>,
    key_points: Vec<KeyPoint>,
    labels: Vec<GoldLabel>,
}

#[derive(Debug, Clone, Default)]
struct CorpusIndex {
    topics: HashMap<String, usize>,
    arguments: HashMap<String, usize>,
    key_points: HashMap<String, usize>,
    /// argument id -> ids of key points it is positively labeled to
    positives: HashMap<String, BTreeSet<String>>,
}

/// A validated, immutable collection of topics, arguments, key points and
/// gold labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "CorpusParts")]
pub struct Corpus {
    topics: Vec<Topic>,
    arguments: Vec<Argument>,
    key_points: Vec<KeyPoint>,
    labels: Vec<GoldLabel>,
    #[serde(skip)]
    index: CorpusIndex,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.topics == other.topics
            && self.arguments == other.arguments
            && self.key_points == other.key_points
            && self.labels == other.labels
    }
}

impl TryFrom<CorpusParts> for Corpus {
    type Error = Error;

    fn try_from(parts: CorpusParts) -> Result<Self> {
        Corpus::new(parts.topics, parts.arguments, parts.key_points, parts.labels)
    }
}

fn valid_stance(stance: Option<i8>) -> bool {
    matches!(stance, None | Some(-1) | Some(1))
}

impl Corpus {
    /// Validates the collections and builds the lookup indexes.
    pub fn new(
        topics: Vec<Topic>,
        arguments: Vec<Argument>,
        key_points: Vec<KeyPoint>,
        labels: Vec<GoldLabel>,
    ) -> Result<Self> {
        let mut index = CorpusIndex::default();

        for (i, topic) in topics.iter().enumerate() {
            if topic.text.trim().is_empty() {
                return Err(Error::Integrity(format!("topic {} has empty text", topic.id)));
            }
            if index.topics.insert(topic.id.clone(), i).is_some() {
                return Err(Error::Integrity(format!("duplicate topic id {}", topic.id)));
            }
        }

        for (i, arg) in arguments.iter().enumerate() {
            if index.arguments.insert(arg.id.clone(), i).is_some() {
                return Err(Error::Integrity(format!("duplicate argument id {}", arg.id)));
            }
            if !index.topics.contains_key(&arg.topic_id) {
                return Err(Error::Integrity(format!(
                    "argument {} refers to unknown topic {}",
                    arg.id, arg.topic_id
                )));
            }
            if arg.text.trim().is_empty() {
                return Err(Error::Integrity(format!("argument {} has empty text", arg.id)));
            }
            if !valid_stance(arg.stance) {
                return Err(Error::Integrity(format!("argument {} has invalid stance", arg.id)));
            }
        }

        let mut catch_all_topics = HashSet::new();
        for (i, kp) in key_points.iter().enumerate() {
            if index.key_points.insert(kp.id.clone(), i).is_some() {
                return Err(Error::Integrity(format!("duplicate key point id {}", kp.id)));
            }
            if index.arguments.contains_key(&kp.id) {
                return Err(Error::Integrity(format!(
                    "key point id {} collides with an argument id",
                    kp.id
                )));
            }
            if !index.topics.contains_key(&kp.topic_id) {
                return Err(Error::Integrity(format!(
                    "key point {} refers to unknown topic {}",
                    kp.id, kp.topic_id
                )));
            }
            if kp.text.trim().is_empty() {
                return Err(Error::Integrity(format!("key point {} has empty text", kp.id)));
            }
            if !valid_stance(kp.stance) {
                return Err(Error::Integrity(format!("key point {} has invalid stance", kp.id)));
            }
            if kp.is_catch_all {
                if kp.text != CATCH_ALL_TEXT {
                    return Err(Error::Integrity(format!(
                        "catch-all key point {} must have text {CATCH_ALL_TEXT:?}",
                        kp.id
                    )));
                }
                if !catch_all_topics.insert(kp.topic_id.clone()) {
                    return Err(Error::Integrity(format!(
                        "topic {} has more than one catch-all key point",
                        kp.topic_id
                    )));
                }
            }
        }

        let mut seen_pairs = HashSet::new();
        for label in &labels {
            let arg = index
                .arguments
                .get(&label.argument_id)
                .map(|&i| &arguments[i])
                .ok_or_else(|| {
                    Error::Integrity(format!("label refers to unknown argument {}", label.argument_id))
                })?;
            let kp = index
                .key_points
                .get(&label.key_point_id)
                .map(|&i| &key_points[i])
                .ok_or_else(|| {
                    Error::Integrity(format!(
                        "label refers to unknown key point {}",
                        label.key_point_id
                    ))
                })?;
            if label.label > 1 {
                return Err(Error::Integrity(format!(
                    "label ({}, {}) must be 0 or 1, got {}",
                    label.argument_id, label.key_point_id, label.label
                )));
            }
            if arg.topic_id != kp.topic_id {
                return Err(Error::Integrity(format!(
                    "label pairs argument {} and key point {} from different topics",
                    arg.id, kp.id
                )));
            }
            if !seen_pairs.insert((label.argument_id.as_str(), label.key_point_id.as_str())) {
                return Err(Error::Integrity(format!(
                    "duplicate label for pair ({}, {})",
                    label.argument_id, label.key_point_id
                )));
            }
            if label.label == 1 {
                index
                    .positives
                    .entry(label.argument_id.clone())
                    .or_default()
                    .insert(label.key_point_id.clone());
            }
        }

        Ok(Corpus {
            topics,
            arguments,
            key_points,
            labels,
            index,
        })
    }

    pub fn topics(&self) -> &[Topic] {
        &self.topics
    }

    pub fn arguments(&self) -> &[Argument] {
        &self.arguments
    }

    pub fn key_points(&self) -> &[KeyPoint] {
        &self.key_points
    }

    pub fn labels(&self) -> &[GoldLabel] {
        &self.labels
    }

    pub fn topic(&self, id: &str) -> Option<&Topic> {
        self.index.topics.get(id).map(|&i| &self.topics[i])
    }

    pub fn argument(&self, id: &str) -> Option<&Argument> {
        self.index.arguments.get(id).map(|&i| &self.arguments[i])
    }

    pub fn key_point(&self, id: &str) -> Option<&KeyPoint> {
        self.index.key_points.get(id).map(|&i| &self.key_points[i])
    }

    /// Arguments of a topic, in load order.
    pub fn arguments_of<'a>(&'a self, topic_id: &'a str) -> impl Iterator<Item = &'a Argument> + 'a {
        self.arguments.iter().filter(move |a| a.topic_id == topic_id)
    }

    /// Key points of a topic, in load order.
    pub fn key_points_of<'a>(&'a self, topic_id: &'a str) -> impl Iterator<Item = &'a KeyPoint> + 'a {
        self.key_points.iter().filter(move |k| k.topic_id == topic_id)
    }

    /// Ids of the key points an argument is positively labeled to.
    pub fn gold_key_points(&self, argument_id: &str) -> Option<&BTreeSet<String>> {
        self.index.positives.get(argument_id)
    }

    /// Parses the canonical JSON representation.
    pub fn from_json_str(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Format(format!("corpus JSON: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("corpus serialization is infallible")
    }
}

/// Loads a corpus from its canonical JSON file.
pub fn load_json(path: &Path) -> Result<Corpus> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let corpus: Corpus = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    if corpus.arguments.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(corpus)
}

pub fn save_json(corpus: &Corpus, path: &Path) -> Result<()> {
    std::fs::write(path, corpus.to_json_string()).map_err(|e| Error::io(path, e))
}

fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<(u64, T)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().flexible(false).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .clone();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record.deserialize(Some(&headers)).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        })?;
        rows.push((line, row));
    }
    Ok(rows)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: e.to_string(),
    }
}

fn parse_stance(path: &Path, line: u64, raw: Option<&str>) -> Result<Option<i8>> {
    let raw = match raw.map(str::trim) {
        None | Some("") => return Ok(None),
        Some(raw) => raw,
    };
    match raw.parse::<f64>() {
        Ok(1.0) => Ok(Some(1)),
        Ok(-1.0) => Ok(Some(-1)),
        _ => Err(Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("stance must be -1 or 1, got {raw:?}"),
        }),
    }
}

/// Assigns `t0, t1, ...` to topic statements in lexicographic order.
fn topic_ids<'a>(texts: impl IntoIterator<Item = &'a str>) -> (Vec<Topic>, HashMap<String, String>) {
    let distinct: BTreeSet<&str> = texts.into_iter().collect();
    let mut topics = Vec::with_capacity(distinct.len());
    let mut ids = HashMap::with_capacity(distinct.len());
    for (i, text) in distinct.into_iter().enumerate() {
        let id = format!("t{i}");
        ids.insert(text.to_string(), id.clone());
        topics.push(Topic {
            id,
            text: text.to_string(),
        });
    }
    (topics, ids)
}

#[derive(Deserialize)]
struct ArgKpArgumentRow {
    arg_id: String,
    argument: String,
    topic: String,
    #[serde(default)]
    stance: Option<String>,
}

#[derive(Deserialize)]
struct ArgKpKeyPointRow {
    key_point_id: String,
    key_point: String,
    topic: String,
    #[serde(default)]
    stance: Option<String>,
}

#[derive(Deserialize)]
struct ArgKpLabelRow {
    arg_id: String,
    key_point_id: String,
    label: String,
}

/// Loads an ArgKP-format corpus from its three CSV files.
pub fn load_argkp(arguments_file: &Path, key_points_file: &Path, labels_file: &Path) -> Result<Corpus> {
    let arg_rows: Vec<(u64, ArgKpArgumentRow)> = read_csv(arguments_file)?;
    let kp_rows: Vec<(u64, ArgKpKeyPointRow)> = read_csv(key_points_file)?;
    let label_rows: Vec<(u64, ArgKpLabelRow)> = read_csv(labels_file)?;
    if arg_rows.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let (topics, topic_ids) = topic_ids(
        arg_rows
            .iter()
            .map(|(_, r)| r.topic.as_str())
            .chain(kp_rows.iter().map(|(_, r)| r.topic.as_str())),
    );

    let mut arguments = Vec::with_capacity(arg_rows.len());
    let mut seen = HashSet::new();
    for (line, row) in arg_rows {
        if !seen.insert(row.arg_id.clone()) {
            return Err(Error::Integrity(format!(
                "{}:{line}: duplicate argument id {}",
                arguments_file.display(),
                row.arg_id
            )));
        }
        arguments.push(Argument {
            stance: parse_stance(arguments_file, line, row.stance.as_deref())?,
            id: row.arg_id,
            topic_id: topic_ids[&row.topic].clone(),
            text: row.argument,
            parent_id: None,
            sentence_index: None,
        });
    }

    let mut key_points = Vec::with_capacity(kp_rows.len());
    let mut seen_kps = HashSet::new();
    for (line, row) in kp_rows {
        if !seen_kps.insert(row.key_point_id.clone()) {
            return Err(Error::Integrity(format!(
                "{}:{line}: duplicate key point id {}",
                key_points_file.display(),
                row.key_point_id
            )));
        }
        key_points.push(KeyPoint {
            stance: parse_stance(key_points_file, line, row.stance.as_deref())?,
            id: row.key_point_id,
            topic_id: topic_ids[&row.topic].clone(),
            text: row.key_point,
            is_catch_all: false,
        });
    }

    let mut labels = Vec::with_capacity(label_rows.len());
    for (line, row) in label_rows {
        if !seen.contains(&row.arg_id) {
            return Err(Error::Integrity(format!(
                "{}:{line}: unknown argument id {}",
                labels_file.display(),
                row.arg_id
            )));
        }
        if !seen_kps.contains(&row.key_point_id) {
            return Err(Error::Integrity(format!(
                "{}:{line}: unknown key point id {}",
                labels_file.display(),
                row.key_point_id
            )));
        }
        let label = match row.label.trim().parse::<f64>() {
            Ok(0.0) => 0,
            Ok(1.0) => 1,
            _ => {
                return Err(Error::Parse {
                    path: labels_file.to_path_buf(),
                    line,
                    message: format!("label must be 0 or 1, got {:?}", row.label),
                })
            }
        };
        labels.push(GoldLabel {
            argument_id: row.arg_id,
            key_point_id: row.key_point_id,
            label,
        });
    }

    Corpus::new(topics, arguments, key_points, labels)
}

#[derive(Deserialize)]
struct DebateRow {
    arg_id: String,
    argument: String,
    topic: String,
    #[serde(default)]
    aspect: Option<String>,
}

/// Loads a Debate-format corpus. Aspects become key points with ids
/// `kp0, kp1, ...` in order of first appearance; rows with an empty aspect
/// carry no label.
pub fn load_debate(file: &Path) -> Result<Corpus> {
    let rows: Vec<(u64, DebateRow)> = read_csv(file)?;
    if rows.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let (topics, topic_ids) = topic_ids(rows.iter().map(|(_, r)| r.topic.as_str()));

    let mut arguments = Vec::with_capacity(rows.len());
    let mut key_points: Vec<KeyPoint> = Vec::new();
    let mut aspect_ids: HashMap<(String, String), String> = HashMap::new();
    let mut labels = Vec::new();
    let mut seen = HashSet::new();
    for (line, row) in rows {
        if !seen.insert(row.arg_id.clone()) {
            return Err(Error::Integrity(format!(
                "{}:{line}: duplicate argument id {}",
                file.display(),
                row.arg_id
            )));
        }
        let topic_id = topic_ids[&row.topic].clone();
        if let Some(aspect) = row.aspect.as_deref().map(str::trim).filter(|a| !a.is_empty()) {
            let key = (topic_id.clone(), aspect.to_string());
            let kp_id = match aspect_ids.get(&key) {
                Some(id) => id.clone(),
                None => {
                    let id = format!("kp{}", key_points.len());
                    key_points.push(KeyPoint {
                        id: id.clone(),
                        topic_id: topic_id.clone(),
                        text: aspect.to_string(),
                        stance: None,
                        is_catch_all: false,
                    });
                    aspect_ids.insert(key, id.clone());
                    id
                }
            };
            labels.push(GoldLabel {
                argument_id: row.arg_id.clone(),
                key_point_id: kp_id,
                label: 1,
            });
        }
        arguments.push(Argument {
            id: row.arg_id,
            topic_id,
            text: row.argument,
            stance: None,
            parent_id: None,
            sentence_index: None,
        });
    }
    Corpus::new(topics, arguments, key_points, labels)
}

/// Writes the corpus back out in ArgKP layout. Catch-all key points (and
/// their labels) are omitted, as are sentence-split provenance fields.
pub fn write_argkp(corpus: &Corpus, arguments_file: &Path, key_points_file: &Path, labels_file: &Path) -> Result<()> {
    let topic_text = |id: &str| corpus.topic(id).map(|t| t.text.clone()).unwrap_or_default();
    let stance = |s: Option<i8>| s.map(|v| v.to_string()).unwrap_or_default();

    let mut w = csv_writer(arguments_file)?;
    w.write_record(["arg_id", "argument", "topic", "stance"])
        .map_err(|e| csv_error(arguments_file, e))?;
    for a in &corpus.arguments {
        w.write_record([a.id.clone(), a.text.clone(), topic_text(&a.topic_id), stance(a.stance)])
            .map_err(|e| csv_error(arguments_file, e))?;
    }
    w.flush().map_err(|e| Error::io(arguments_file, e))?;

    let mut w = csv_writer(key_points_file)?;
    w.write_record(["key_point_id", "key_point", "topic", "stance"])
        .map_err(|e| csv_error(key_points_file, e))?;
    for k in corpus.key_points.iter().filter(|k| !k.is_catch_all) {
        w.write_record([k.id.clone(), k.text.clone(), topic_text(&k.topic_id), stance(k.stance)])
            .map_err(|e| csv_error(key_points_file, e))?;
    }
    w.flush().map_err(|e| Error::io(key_points_file, e))?;

    let mut w = csv_writer(labels_file)?;
    w.write_record(["arg_id", "key_point_id", "label"])
        .map_err(|e| csv_error(labels_file, e))?;
    for l in &corpus.labels {
        if corpus.key_point(&l.key_point_id).is_some_and(|k| k.is_catch_all) {
            continue;
        }
        w.write_record([l.argument_id.clone(), l.key_point_id.clone(), l.label.to_string()])
            .map_err(|e| csv_error(labels_file, e))?;
    }
    w.flush().map_err(|e| Error::io(labels_file, e))?;
    Ok(())
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

/// Id of the catch-all key point for a topic.
pub fn catch_all_id(topic_id: &str) -> String {
    format!("{topic_id}{CATCH_ALL_SUFFIX}")
}

/// Gives every argument without a positive label a positive label to its
/// topic's catch-all key point, creating that key point when needed.
pub fn attach_catch_all(corpus: &Corpus) -> Result<Corpus> {
    let mut key_points = corpus.key_points.clone();
    let mut labels = corpus.labels.clone();

    let mut unmatched: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for arg in &corpus.arguments {
        if corpus.gold_key_points(&arg.id).is_none_or(|s| s.is_empty()) {
            unmatched.entry(arg.topic_id.as_str()).or_default().push(arg.id.as_str());
        }
    }
    if unmatched.is_empty() {
        return Ok(corpus.clone());
    }

    for topic in &corpus.topics {
        let Some(args) = unmatched.get(topic.id.as_str()) else {
            continue;
        };
        let catch_all = match corpus.key_points_of(&topic.id).find(|k| k.is_catch_all) {
            Some(kp) => kp.id.clone(),
            None => {
                let id = catch_all_id(&topic.id);
                key_points.push(KeyPoint {
                    id: id.clone(),
                    topic_id: topic.id.clone(),
                    text: CATCH_ALL_TEXT.to_string(),
                    stance: None,
                    is_catch_all: true,
                });
                id
            }
        };
        for &arg_id in args {
            match labels
                .iter_mut()
                .find(|l| l.argument_id == arg_id && l.key_point_id == catch_all)
            {
                Some(existing) => existing.label = 1,
                None => labels.push(GoldLabel {
                    argument_id: arg_id.to_string(),
                    key_point_id: catch_all.clone(),
                    label: 1,
                }),
            }
        }
    }
    Corpus::new(corpus.topics.clone(), corpus.arguments.clone(), key_points, labels)
}

/// Splits text into sentences.
///
/// A sentence ends at `.`, `!` or `?` when the next non-whitespace character
/// is uppercase and at least one whitespace character intervenes, or at the
/// end of the text. Because a boundary needs following whitespace, a period
/// inside a token such as `3.5` never splits. Sentences are trimmed and keep
/// their terminal punctuation.
pub fn split_text(text: &str) -> Vec<String> {
    let mut sentences = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let end = i + c.len_utf8();
        let rest = &text[end..];
        let next = rest.trim_start();
        let boundary = if next.is_empty() {
            true
        } else {
            next.len() < rest.len() && next.chars().next().is_some_and(char::is_uppercase)
        };
        if boundary {
            let sentence = text[start..end].trim();
            if !sentence.is_empty() {
                sentences.push(sentence.to_string());
            }
            start = end;
        }
    }
    let tail = text[start..].trim();
    if !tail.is_empty() {
        sentences.push(tail.to_string());
    }
    sentences
}

/// Id of the `index`-th sentence derived from `parent_id`.
pub fn derived_argument_id(parent_id: &str, index: usize) -> String {
    format!("{parent_id}__s{index}")
}

/// Replaces every multi-sentence argument by one argument per sentence.
/// Derived arguments inherit the parent's topic, stance and labels.
pub fn split_sentences(corpus: &Corpus) -> Result<Corpus> {
    let mut arguments = Vec::with_capacity(corpus.arguments.len());
    let mut derived: HashMap<&str, Vec<String>> = HashMap::new();
    for arg in &corpus.arguments {
        let sentences = split_text(&arg.text);
        if sentences.len() <= 1 {
            arguments.push(arg.clone());
            continue;
        }
        let ids = derived.entry(arg.id.as_str()).or_default();
        for (i, sentence) in sentences.into_iter().enumerate() {
            let id = derived_argument_id(&arg.id, i);
            ids.push(id.clone());
            arguments.push(Argument {
                id,
                topic_id: arg.topic_id.clone(),
                text: sentence,
                stance: arg.stance,
                parent_id: Some(arg.id.clone()),
                sentence_index: Some(i),
            });
        }
    }
    if derived.is_empty() {
        return Ok(corpus.clone());
    }

    let mut labels = Vec::with_capacity(corpus.labels.len());
    for label in &corpus.labels {
        match derived.get(label.argument_id.as_str()) {
            Some(ids) => labels.extend(ids.iter().map(|id| GoldLabel {
                argument_id: id.clone(),
                key_point_id: label.key_point_id.clone(),
                label: label.label,
            })),
            None => labels.push(label.clone()),
        }
    }
    Corpus::new(corpus.topics.clone(), arguments, corpus.key_points.clone(), labels)
}
