//! Blocking JSON-over-HTTP client shared by the remote embedding and
//! matching backends.

use std::thread;
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_timeout() -> f64 {
    30.0
}

fn default_batch_size() -> usize {
    64
}

fn default_retries() -> u32 {
    2
}

/// Connection settings for an inference service.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemoteConfig {
    /// Base URL, e.g. `http://127.0.0.1:8080`. Request paths are appended.
    pub endpoint: String,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    /// Extra attempts after the first failure, with exponential backoff.
    #[serde(default = "default_retries")]
    pub retries: u32,
}

impl RemoteConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        RemoteConfig {
            endpoint: endpoint.into(),
            timeout_secs: default_timeout(),
            batch_size: default_batch_size(),
            retries: default_retries(),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.endpoint.trim().is_empty() {
            return Err(Error::Config("remote endpoint is empty".into()));
        }
        if !(self.timeout_secs.is_finite() && self.timeout_secs > 0.0) {
            return Err(Error::Config("remote timeout must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("remote batch size must be positive".into()));
        }
        Ok(())
    }
}

const BACKOFF_BASE: Duration = Duration::from_millis(200);

#[derive(Debug)]
pub(crate) struct Client {
    config: RemoteConfig,
    http: reqwest::blocking::Client,
}

impl Client {
    pub(crate) fn new(config: &RemoteConfig) -> Result<Self> {
        config.validate()?;
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs_f64(config.timeout_secs))
            .build()
            .map_err(|e| Error::Transport(e.to_string()))?;
        Ok(Client {
            config: config.clone(),
            http,
        })
    }

    pub(crate) fn batch_size(&self) -> usize {
        self.config.batch_size
    }

    /// POSTs `body` to `path` and decodes the JSON response. Any status other
    /// than 200 is a transport error.
    pub(crate) fn post<B: Serialize, R: DeserializeOwned>(&self, path: &str, body: &B) -> Result<R> {
        let url = format!("{}{}", self.config.endpoint.trim_end_matches('/'), path);
        let mut attempt = 0;
        loop {
            match self.post_once(&url, body) {
                Ok(r) => return Ok(r),
                Err(_) if attempt < self.config.retries => {
                    thread::sleep(BACKOFF_BASE * 2u32.pow(attempt));
                    attempt += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn post_once<B: Serialize, R: DeserializeOwned>(&self, url: &str, body: &B) -> Result<R> {
        let response = self
            .http
            .post(url)
            .json(body)
            .send()
            .map_err(|e| Error::Transport(format!("POST {url}: {e}")))?;
        let status = response.status();
        if status != reqwest::StatusCode::OK {
            return Err(Error::Transport(format!("POST {url}: status {status}")));
        }
        response
            .json()
            .map_err(|e| Error::Transport(format!("POST {url}: malformed response: {e}")))
    }
}
