//! Command-line flags and their mapping onto [`RunConfig`] keys.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kpsum::clustering::{Linkage, Metric};
use kpsum::embedding::EmbeddingBackendConfig;
use kpsum::matching::MatcherKind;
use kpsum::selection::SelectionMethod;
use kpsum::{Error, RemoteConfig, Result};

use crate::config::{DataFormat, Mode, RunConfig};

#[derive(Parser)]
#[command(name = "kpsum", version, about = "Extractive key point summaries of argument collections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Cluster each topic's arguments and pick one representative per cluster.
    Summarize(SummarizeArgs),
    /// Score summaries or coverage suites against the corpus key points.
    Evaluate(EvaluateArgs),
    /// Draw pseudo-summaries with prescribed key point coverage.
    SampleCoverage(SampleCoverageArgs),
    /// Rand and adjusted Rand index of cluster assignments against gold labels.
    ClusterEval(ClusterEvalArgs),
}

#[derive(Args)]
pub struct SharedArgs {
    /// TOML run configuration; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<DataFormat>,
    /// ArgKP arguments CSV.
    #[arg(long)]
    arguments: Option<PathBuf>,
    /// ArgKP key points CSV.
    #[arg(long)]
    key_points: Option<PathBuf>,
    /// ArgKP labels CSV.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Debate CSV or corpus JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Split multi-sentence arguments into one argument per sentence.
    #[arg(long)]
    split_sentences: bool,
    /// Do not add catch-all key points for unlabeled arguments.
    #[arg(long)]
    no_catch_all: bool,
}

impl SharedArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            c.seed = seed;
        }
        if let Some(dir) = &self.output_dir {
            c.output_dir = Some(dir.clone());
        }
        if let Some(format) = self.format {
            c.data.format = format;
        }
        for (flag, key) in [
            (&self.arguments, &mut c.data.arguments),
            (&self.key_points, &mut c.data.key_points),
            (&self.labels, &mut c.data.labels),
            (&self.input, &mut c.data.input),
        ] {
            if flag.is_some() {
                *key = flag.clone();
            }
        }
        if self.split_sentences {
            c.data.split_sentences = true;
        }
        if self.no_catch_all {
            c.data.catch_all = false;
        }
        Ok(c)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendKind {
    Oracle,
    Lexical,
    File,
    Remote,
}

#[derive(Args)]
pub struct MatcherArgs {
    /// Pair matcher backend.
    #[arg(long, value_enum)]
    matcher: Option<BackendKind>,
    /// JSON Lines match scores for the file matcher.
    #[arg(long)]
    match_file: Option<PathBuf>,
    /// Base URL of a remote matcher.
    #[arg(long)]
    match_endpoint: Option<String>,
    /// Scores at or above this value count as matches.
    #[arg(long)]
    decision_threshold: Option<f64>,
    /// Put the candidate in the argument slot when counting cluster matches.
    #[arg(long)]
    swap_slots: bool,
}

/// Applies a backend flag and its file/endpoint companions on top of the
/// configured backend. A companion alone selects its backend.
fn backend_override(
    kind: Option<BackendKind>,
    path: &Option<PathBuf>,
    endpoint: &Option<String>,
    what: &str,
) -> Result<Option<BackendChoice>> {
    let kind = match (kind, path, endpoint) {
        (Some(k), _, _) => k,
        (None, Some(_), None) => BackendKind::File,
        (None, None, Some(_)) => BackendKind::Remote,
        (None, None, None) => return Ok(None),
        (None, Some(_), Some(_)) => {
            return Err(Error::Config(format!("{what}: give either a file or an endpoint, not both")))
        }
    };
    Ok(Some(match kind {
        BackendKind::Oracle => BackendChoice::Oracle,
        BackendKind::Lexical => BackendChoice::Lexical,
        BackendKind::File => BackendChoice::File(
            path.clone()
                .ok_or_else(|| Error::Config(format!("{what} backend `file` needs a path flag")))?,
        ),
        BackendKind::Remote => BackendChoice::Remote(RemoteConfig::new(
            endpoint
                .clone()
                .ok_or_else(|| Error::Config(format!("{what} backend `remote` needs an endpoint flag")))?,
        )),
    }))
}

enum BackendChoice {
    Oracle,
    Lexical,
    File(PathBuf),
    Remote(RemoteConfig),
}

impl MatcherArgs {
    fn apply(&self, c: &mut RunConfig) -> Result<()> {
        if let Some(choice) = backend_override(self.matcher, &self.match_file, &self.match_endpoint, "matcher")? {
            c.matcher.kind = match choice {
                BackendChoice::Oracle => MatcherKind::Oracle,
                BackendChoice::Lexical => MatcherKind::Lexical,
                BackendChoice::File(path) => MatcherKind::File { path },
                BackendChoice::Remote(r) => MatcherKind::Remote(r),
            };
        }
        if let Some(t) = self.decision_threshold {
            c.matcher.decision_threshold = t;
        }
        if self.swap_slots {
            c.matcher.swap_slots = true;
        }
        Ok(())
    }
}

#[derive(Args)]
pub struct SummarizeArgs {
    #[command(flatten)]
    shared: SharedArgs,
    #[command(flatten)]
    matcher: MatcherArgs,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Exponent on the match count in the SSF score [default: 5].
    #[arg(long)]
    exponent: Option<f64>,
    /// Stop merging clusters farther apart than this [default: 1.5].
    #[arg(long)]
    distance_threshold: Option<f64>,
    /// Keep only the representatives of the K largest clusters.
    #[arg(long, value_name = "K")]
    max_key_points: Option<usize>,
    /// Merge down to exactly this many clusters, ignoring the threshold.
    #[arg(long)]
    n_clusters: Option<usize>,
    #[arg(long, value_enum)]
    linkage: Option<LinkageArg>,
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Embedding backend.
    #[arg(long, value_enum)]
    embed_backend: Option<BackendKind>,
    /// JSON Lines embeddings for the file backend.
    #[arg(long)]
    embeddings_file: Option<PathBuf>,
    /// Base URL of a remote embedding service.
    #[arg(long)]
    embed_endpoint: Option<String>,
    /// Cluster raw embeddings instead of unit-length ones.
    #[arg(long)]
    no_normalize: bool,
    /// Summarize only this topic id; repeatable.
    #[arg(long = "topic")]
    topics: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Smm,
    Ssf,
}

#[derive(Clone, Copy, ValueEnum)]
enum LinkageArg {
    Average,
    Complete,
    Ward,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Euclidean,
    Cosine,
}

impl SummarizeArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = self.shared.resolve()?;
        self.matcher.apply(&mut c)?;
        if let Some(m) = self.method {
            c.selection.method = match m {
                MethodArg::Smm => SelectionMethod::Smm,
                MethodArg::Ssf => SelectionMethod::Ssf,
            };
        }
        if let Some(e) = self.exponent {
            c.selection.exponent = e;
        }
        if let Some(k) = self.max_key_points {
            c.selection.max_key_points = Some(k);
        }
        if let Some(t) = self.distance_threshold {
            c.clustering.distance_threshold = t;
        }
        if let Some(n) = self.n_clusters {
            c.clustering.n_clusters = Some(n);
        }
        if let Some(l) = self.linkage {
            c.clustering.linkage = match l {
                LinkageArg::Average => Linkage::Average,
                LinkageArg::Complete => Linkage::Complete,
                LinkageArg::Ward => Linkage::Ward,
            };
        }
        if let Some(m) = self.metric {
            c.clustering.metric = match m {
                MetricArg::Euclidean => Metric::Euclidean,
                MetricArg::Cosine => Metric::Cosine,
            };
        }
        if let Some(choice) = backend_override(
            self.embed_backend,
            &self.embeddings_file,
            &self.embed_endpoint,
            "embedding",
        )? {
            c.embedding = match choice {
                BackendChoice::Oracle => EmbeddingBackendConfig::Oracle,
                BackendChoice::Lexical => EmbeddingBackendConfig::Lexical,
                BackendChoice::File(path) => EmbeddingBackendConfig::File { path },
                BackendChoice::Remote(r) => EmbeddingBackendConfig::Remote(r),
            };
        }
        if self.no_normalize {
            c.normalize = false;
        }
        if !self.topics.is_empty() {
            c.topics = self.topics.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    shared: SharedArgs,
    #[command(flatten)]
    matcher: MatcherArgs,
    /// Summary JSON files and/or coverage suite JSON Lines files.
    #[arg(required = true)]
    summaries: Vec<PathBuf>,
    /// Comma-separated evaluation modes.
    #[arg(long, value_enum, value_delimiter = ',')]
    modes: Vec<Mode>,
    /// Stem tokens before computing ROUGE.
    #[arg(long)]
    stem: bool,
}

impl EvaluateArgs {
    pub fn resolve(&self) -> Result<(RunConfig, Vec<PathBuf>)> {
        let mut c = self.shared.resolve()?;
        self.matcher.apply(&mut c)?;
        if !self.modes.is_empty() {
            c.evaluation.modes = self.modes.clone();
        }
        if self.stem {
            c.evaluation.rouge.stem = true;
        }
        c.validate()?;
        Ok((c, self.summaries.clone()))
    }
}

#[derive(Args)]
pub struct SampleCoverageArgs {
    #[command(flatten)]
    shared: SharedArgs,
    /// Comma-separated coverage levels in (0, 1] [default: 1.0,0.75,0.5].
    #[arg(long, value_delimiter = ',')]
    levels: Vec<f64>,
    /// Pseudo-summaries per topic and level [default: 10].
    #[arg(long)]
    samples: Option<usize>,
    /// Arguments per pseudo-summary [default: 25 for argkp and json, 75 for debate].
    #[arg(long)]
    size: Option<usize>,
}

impl SampleCoverageArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = self.shared.resolve()?;
        if !self.levels.is_empty() {
            c.sampling.levels = self.levels.clone();
        }
        if let Some(n) = self.samples {
            c.sampling.samples = n;
        }
        if let Some(s) = self.size {
            c.sampling.size = Some(s);
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args)]
pub struct ClusterEvalArgs {
    #[command(flatten)]
    shared: SharedArgs,
    /// Cluster assignment JSON files, reported side by side.
    #[arg(required = true)]
    assignments: Vec<PathBuf>,
}

impl ClusterEvalArgs {
    pub fn resolve(&self) -> Result<(RunConfig, Vec<PathBuf>)> {
        let c = self.shared.resolve()?;
        c.validate()?;
        Ok((c, self.assignments.clone()))
    }
}
