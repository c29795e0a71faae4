//! Run configuration: a TOML document whose keys every command-line flag can
//! override. The effective configuration is echoed next to every output.

use std::path::{Path, PathBuf};

use kpsum::clustering::ClusterConfig;
use kpsum::corpus::{self, Corpus};
use kpsum::coverage_datasets::{ARGKP_SAMPLE_SIZE, DEBATE_SAMPLE_SIZE, DEFAULT_LEVELS, DEFAULT_SAMPLES};
use kpsum::embedding::EmbeddingBackendConfig;
use kpsum::evaluation::{EvaluationModes, RougeOptions};
use kpsum::matching::{MatcherConfig, MatcherKind};
use kpsum::pipeline::PipelineConfig;
use kpsum::selection::SelectionConfig;
use kpsum::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DataFormat {
    #[default]
    Argkp,
    Debate,
    Json,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    #[serde(default)]
    pub format: DataFormat,
    /// ArgKP arguments CSV.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arguments: Option<PathBuf>,
    /// ArgKP key points CSV.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key_points: Option<PathBuf>,
    /// ArgKP labels CSV.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<PathBuf>,
    /// Debate CSV or corpus JSON.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub split_sentences: bool,
    /// Give unlabeled arguments a per-topic catch-all key point.
    #[serde(default = "yes")]
    pub catch_all: bool,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig {
            format: DataFormat::Argkp,
            arguments: None,
            key_points: None,
            labels: None,
            input: None,
            split_sentences: false,
            catch_all: true,
        }
    }
}

impl DataConfig {
    pub fn input_paths(&self) -> Vec<&Path> {
        match self.format {
            DataFormat::Argkp => [&self.arguments, &self.key_points, &self.labels]
                .into_iter()
                .flatten()
                .map(PathBuf::as_path)
                .collect(),
            DataFormat::Debate | DataFormat::Json => self.input.iter().map(PathBuf::as_path).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        let missing = |flag: &str| Error::Config(format!("{:?} input needs {flag}", self.format));
        match self.format {
            DataFormat::Argkp => {
                self.arguments.as_ref().ok_or_else(|| missing("--arguments"))?;
                self.key_points.as_ref().ok_or_else(|| missing("--key-points"))?;
                self.labels.as_ref().ok_or_else(|| missing("--labels"))?;
                if self.input.is_some() {
                    return Err(Error::Config("--input is not used with the argkp format".into()));
                }
            }
            DataFormat::Debate | DataFormat::Json => {
                self.input.as_ref().ok_or_else(|| missing("--input"))?;
                if self.arguments.is_some() || self.key_points.is_some() || self.labels.is_some() {
                    return Err(Error::Config(
                        "--arguments/--key-points/--labels are only used with the argkp format".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Loads, optionally sentence-splits, and attaches catch-all key points.
    pub fn load(&self) -> Result<Corpus> {
        let mut corpus = match self.format {
            DataFormat::Argkp => corpus::load_argkp(
                self.arguments.as_deref().expect("validated"),
                self.key_points.as_deref().expect("validated"),
                self.labels.as_deref().expect("validated"),
            )?,
            DataFormat::Debate => corpus::load_debate(self.input.as_deref().expect("validated"))?,
            DataFormat::Json => corpus::load_json(self.input.as_deref().expect("validated"))?,
        };
        if self.split_sentences {
            corpus = corpus::split_sentences(&corpus)?;
        }
        if self.catch_all {
            corpus = corpus::attach_catch_all(&corpus)?;
        }
        Ok(corpus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Predicted,
    Actual,
    Rouge,
    All,
}

fn default_modes() -> Vec<Mode> {
    vec![Mode::All]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationConfig {
    #[serde(default = "default_modes")]
    pub modes: Vec<Mode>,
    #[serde(default)]
    pub rouge: RougeOptions,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig {
            modes: default_modes(),
            rouge: RougeOptions::default(),
        }
    }
}

impl EvaluationConfig {
    pub fn modes(&self) -> EvaluationModes {
        let has = |m: Mode| self.modes.contains(&m) || self.modes.contains(&Mode::All);
        EvaluationModes {
            predicted: has(Mode::Predicted),
            actual: has(Mode::Actual),
            rouge: has(Mode::Rouge),
        }
    }
}

fn default_levels() -> Vec<f64> {
    DEFAULT_LEVELS.to_vec()
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingConfig {
    #[serde(default = "default_levels")]
    pub levels: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Arguments per pseudo-summary; defaults by input format.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            levels: default_levels(),
            samples: default_samples(),
            size: None,
        }
    }
}

fn default_embedding() -> EmbeddingBackendConfig {
    EmbeddingBackendConfig::Lexical
}

fn default_matcher() -> MatcherConfig {
    MatcherConfig::new(MatcherKind::Lexical)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Summarize only these topics; all topics when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub topics: Vec<String>,
    /// L2-normalize embeddings before clustering.
    #[serde(default = "yes")]
    pub normalize: bool,
    #[serde(default)]
    pub data: DataConfig,
    #[serde(default = "default_embedding")]
    pub embedding: EmbeddingBackendConfig,
    #[serde(default = "default_matcher")]
    pub matcher: MatcherConfig,
    #[serde(default)]
    pub clustering: ClusterConfig,
    #[serde(default)]
    pub selection: SelectionConfig,
    #[serde(default)]
    pub evaluation: EvaluationConfig,
    #[serde(default)]
    pub sampling: SamplingConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            output_dir: None,
            topics: Vec::new(),
            normalize: true,
            data: DataConfig::default(),
            embedding: default_embedding(),
            matcher: default_matcher(),
            clustering: ClusterConfig::default(),
            selection: SelectionConfig::default(),
            evaluation: EvaluationConfig::default(),
            sampling: SamplingConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configuration serializes to TOML")
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            embedding: self.embedding.clone(),
            normalize: self.normalize,
            clustering: self.clustering.clone(),
            selection: self.selection.clone(),
        }
    }

    pub fn sample_size(&self) -> usize {
        self.sampling.size.unwrap_or(match self.data.format {
            DataFormat::Debate => DEBATE_SAMPLE_SIZE,
            DataFormat::Argkp | DataFormat::Json => ARGKP_SAMPLE_SIZE,
        })
    }

    /// Checks the parts every command needs; command-specific checks happen
    /// in the commands.
    pub fn validate(&self) -> Result<()> {
        self.data.validate()?;
        self.clustering.validate()?;
        self.selection.validate()?;
        self.matcher.validate()?;
        if let EmbeddingBackendConfig::Remote(r) = &self.embedding {
            if r.endpoint.trim().is_empty() {
                return Err(Error::Config("remote embedding endpoint is empty".into()));
            }
        }
        if self.sampling.levels.is_empty() {
            return Err(Error::Config("at least one coverage level is required".into()));
        }
        if let Some(bad) = self.sampling.levels.iter().find(|l| !(**l > 0.0 && **l <= 1.0)) {
            return Err(Error::Config(format!("coverage level must lie in (0, 1], got {bad}")));
        }
        if self.sampling.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        if self.evaluation.modes.is_empty() {
            return Err(Error::Config("at least one evaluation mode is required".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips_through_toml() {
        let config = RunConfig::default();
        let back: RunConfig = toml::from_str(&config.to_toml()).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn backend_tables_parse() {
        let config: RunConfig = toml::from_str(
            r#"
            seed = 3
            [embedding]
            kind = "remote"
            endpoint = "http://localhost:9"
            batch_size = 8
            [matcher]
            kind = "file"
            path = "scores.jsonl"
            decision_threshold = 0.7
            [clustering]
            distance_threshold = 1.0
            linkage = "ward"
            "#,
        )
        .unwrap();
        let EmbeddingBackendConfig::Remote(r) = &config.embedding else { panic!() };
        assert_eq!((r.batch_size, r.retries), (8, 2));
        assert_eq!(config.matcher.kind, MatcherKind::File { path: "scores.jsonl".into() });
        assert_eq!(config.matcher.decision_threshold, 0.7);
        let back: RunConfig = toml::from_str(&config.to_toml()).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("sead = 3").is_err());
    }

    #[test]
    fn modes_expand_all() {
        let e = EvaluationConfig {
            modes: vec![Mode::Actual],
            ..Default::default()
        };
        assert_eq!(
            e.modes(),
            EvaluationModes {
                predicted: false,
                actual: true,
                rouge: false
            }
        );
        assert_eq!(EvaluationConfig::default().modes(), EvaluationModes::ALL);
    }
}
