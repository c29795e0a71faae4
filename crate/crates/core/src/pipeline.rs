//! End-to-end summarization of one topic: embed, cluster, select.

use serde::{Deserialize, Serialize};

use crate::clustering::{cluster, ClusterAssignment, ClusterConfig};
use crate::corpus::Corpus;
use crate::embedding::{embed, normalize, EmbeddingBackendConfig};
use crate::error::Result;
use crate::matching::Matcher;
use crate::selection::{select_representatives, GeneratedSummary, SelectionConfig};

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub embedding: EmbeddingBackendConfig,
    /// L2-normalize embeddings before clustering.
    #[serde(default = "yes")]
    pub normalize: bool,
    #[serde(default)]
    pub clustering: ClusterConfig,
    #[serde(default)]
    pub selection: SelectionConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicSummary {
    pub clusters: ClusterAssignment,
    pub summary: GeneratedSummary,
}

pub fn summarize_topic(
    corpus: &Corpus,
    topic_id: &str,
    config: &PipelineConfig,
    matcher: &Matcher<'_>,
) -> Result<TopicSummary> {
    let mut embeddings = embed(&config.embedding, corpus, topic_id)?;
    if config.normalize {
        embeddings = normalize(&embeddings)?;
    }
    let clusters = cluster(&embeddings, &config.clustering)?;
    let summary = select_representatives(&clusters, corpus, matcher, &config.selection)?;
    Ok(TopicSummary { clusters, summary })
}
