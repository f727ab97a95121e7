//! HTTP client for the scorer service.
//!
//! Protocol (JSON bodies):
//!
//! | route            | request                              | response                               |
//! |------------------|--------------------------------------|----------------------------------------|
//! | `POST /nli`      | `{"premise": s, "hypothesis": s}`    | `{"entail": p, "contradict": p, "neutral": p}` |
//! | `POST /semantic` | `{"reference": s, "candidate": s}`   | `{"f1": x, "precision": x, "recall": x}` |
//! | `GET /health`    |                                      | `{"status": s, "model_versions": {..}}` |
//!
//! `/nli` scores one direction per call. Transport failures and 5xx statuses
//! are retried with exponential backoff; 4xx statuses and malformed bodies
//! are protocol errors and fail immediately. Texts are sent un-normalized.

use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{NliProbs, ScorerError};

pub const ENDPOINT_ENV: &str = "SCORER_ENDPOINT";
pub const VERSION_HEADER: &str = "x-scorer-version";

#[derive(Debug, Clone)]
pub struct RemoteConfig {
    pub endpoint: String,
    pub timeout: Duration,
    pub max_attempts: u32,
    pub backoff_base: Duration,
}

impl RemoteConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        RemoteConfig {
            endpoint: endpoint.into().trim_end_matches('/').to_string(),
            timeout: Duration::from_secs(30),
            max_attempts: 3,
            backoff_base: Duration::from_secs(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemoteScores {
    pub nli_forward: NliProbs,
    pub nli_backward: NliProbs,
    pub s_sem: f64,
}

#[derive(Serialize)]
struct NliRequest<'a> {
    premise: &'a str,
    hypothesis: &'a str,
}

#[derive(Serialize)]
struct SemanticRequest<'a> {
    reference: &'a str,
    candidate: &'a str,
}

#[derive(Deserialize)]
struct SemanticResponse {
    f1: f64,
}

#[derive(Deserialize)]
struct HealthResponse {
    #[serde(default)]
    model_versions: Value,
}

enum Failure {
    Retryable(String),
    Fatal(String),
}

pub struct RemoteScorer {
    config: RemoteConfig,
    agent: ureq::Agent,
    version: String,
}

impl RemoteScorer {
    /// Client with an explicit scorer version (used in cache keys).
    pub fn new(config: RemoteConfig, version: impl Into<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        RemoteScorer {
            config,
            agent,
            version: version.into(),
        }
    }

    /// Queries `/health` and derives the version from the reported model versions.
    pub fn connect(config: RemoteConfig) -> Result<Self, ScorerError> {
        let mut scorer = RemoteScorer::new(config, "");
        let body = scorer.with_retry(|s| s.request("GET", "/health", None))?;
        let health: HealthResponse = serde_json::from_str(&body)
            .map_err(|e| ScorerError::Protocol(format!("/health: {e}")))?;
        scorer.version = version_string(&health.model_versions);
        Ok(scorer)
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn endpoint(&self) -> &str {
        &self.config.endpoint
    }

    /// Forward direction takes the reference as premise; backward swaps.
    pub fn fetch(&self, reference: &str, hypothesis: &str) -> Result<RemoteScores, ScorerError> {
        let nli_forward = self.nli(reference, hypothesis)?;
        let nli_backward = self.nli(hypothesis, reference)?;
        let body = serde_json::to_string(&SemanticRequest {
            reference,
            candidate: hypothesis,
        })
        .expect("request serializes");
        let text = self.with_retry(|s| s.request("POST", "/semantic", Some(&body)))?;
        let sem: SemanticResponse = serde_json::from_str(&text)
            .map_err(|e| ScorerError::Protocol(format!("/semantic: {e}")))?;
        if !(-1.0..=1.0).contains(&sem.f1) {
            return Err(ScorerError::Protocol(format!("/semantic: f1 {} out of range", sem.f1)));
        }
        Ok(RemoteScores {
            nli_forward,
            nli_backward,
            s_sem: sem.f1,
        })
    }

    fn nli(&self, premise: &str, hypothesis: &str) -> Result<NliProbs, ScorerError> {
        let body = serde_json::to_string(&NliRequest {
            premise,
            hypothesis,
        })
        .expect("request serializes");
        let text = self.with_retry(|s| s.request("POST", "/nli", Some(&body)))?;
        let probs: NliProbs = serde_json::from_str(&text)
            .map_err(|e| ScorerError::Protocol(format!("/nli: {e}")))?;
        probs
            .validate()
            .map_err(|e| ScorerError::Protocol(format!("/nli: {e}")))?;
        Ok(probs)
    }

    fn with_retry(&self, call: impl Fn(&Self) -> Result<String, Failure>) -> Result<String, ScorerError> {
        let attempts = self.config.max_attempts.max(1);
        let mut last = String::new();
        for attempt in 1..=attempts {
            match call(self) {
                Ok(body) => return Ok(body),
                Err(Failure::Fatal(msg)) => return Err(ScorerError::Protocol(msg)),
                Err(Failure::Retryable(msg)) => {
                    last = msg;
                    if attempt < attempts {
                        thread::sleep(self.config.backoff_base * 2u32.pow(attempt - 1));
                    }
                }
            }
        }
        Err(ScorerError::Transport {
            attempts,
            message: last,
        })
    }

    fn request(&self, method: &str, route: &str, body: Option<&str>) -> Result<String, Failure> {
        let url = format!("{}{}", self.config.endpoint, route);
        let result = match (method, body) {
            ("GET", _) => self.agent.get(&url).call(),
            (_, Some(body)) => self
                .agent
                .post(&url)
                .header("content-type", "application/json")
                .send(body),
            (_, None) => self.agent.post(&url).send_empty(),
        };
        let mut response = result.map_err(|e| match e {
            ureq::Error::BadUri(_) | ureq::Error::InvalidProxyUrl => Failure::Fatal(format!("{url}: {e}")),
            other => Failure::Retryable(format!("{url}: {other}")),
        })?;
        let status = response.status().as_u16();
        let text = response
            .body_mut()
            .read_to_string()
            .map_err(|e| Failure::Retryable(format!("{url}: reading body: {e}")))?;
        match status {
            200..=299 => Ok(text),
            500..=599 => Err(Failure::Retryable(format!("{url}: HTTP {status}"))),
            _ => Err(Failure::Fatal(format!("{url}: HTTP {status}: {}", text.trim()))),
        }
    }
}

fn version_string(versions: &Value) -> String {
    match versions {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())))
            .collect::<Vec<_>>()
            .join(";"),
        Value::Array(items) => items
            .iter()
            .map(|v| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()))
            .collect::<Vec<_>>()
            .join(";"),
        Value::String(s) => s.clone(),
        Value::Null => "unknown".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_string_is_order_stable() {
        let v: Value = serde_json::from_str(r#"{"nli":"roberta-large-mnli","semantic":"bertscore"}"#).unwrap();
        assert_eq!(version_string(&v), "nli=roberta-large-mnli;semantic=bertscore");
        assert_eq!(version_string(&Value::Null), "unknown");
    }

    #[test]
    fn unreachable_endpoint_exhausts_attempts() {
        // Bind then drop to get a port with nothing listening.
        let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
        let mut config = RemoteConfig::new(format!("http://127.0.0.1:{port}/"));
        config.backoff_base = Duration::from_millis(1);
        config.timeout = Duration::from_secs(2);
        let scorer = RemoteScorer::new(config, "v");
        match scorer.fetch("A", "B") {
            Err(ScorerError::Transport { attempts, .. }) => assert_eq!(attempts, 3),
            other => panic!("expected transport error, got {other:?}"),
        }
    }
}
