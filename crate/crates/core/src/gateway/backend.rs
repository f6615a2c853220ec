use std::env;
use std::thread;
use std::time::{Duration, Instant};

use rand::Rng;
use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde_json::{json, Value};

use super::limiter::{ConcurrencyLimit, TokenBucket};
use super::{
    build_prompt, parse_answer, AnswerStatus, ApiStyle, FaultLocTask, GatewayError, MockKind, ModelAnswer, ModelSpec,
    Provider,
};
use crate::corpus::estimate_tokens;
use crate::hashing::rng_for;
use crate::source_model::Quartile;

/// A connected model: the spec plus its HTTP client, credential and limits.
pub struct Gateway {
    spec: ModelSpec,
    client: Option<Client>,
    api_key: Option<String>,
    bucket: Option<TokenBucket>,
    slots: ConcurrencyLimit,
}

struct Completion {
    text: String,
    prompt_tokens: Option<u64>,
    completion_tokens: Option<u64>,
}

enum Failure {
    Transient(String),
    Fatal(String),
}

impl Gateway {
    /// Prepares a backend. Fails with `AuthMissing` when a remote model's
    /// credential variable is unset.
    pub fn connect(spec: ModelSpec) -> Result<Self, GatewayError> {
        let (client, api_key) = match &spec.provider {
            Provider::Mock(_) => (None, None),
            Provider::RemoteApi { .. } | Provider::LocalRuntime { .. } => {
                let api_key = match (&spec.provider, &spec.credential_env) {
                    (_, Some(var)) => Some(env::var(var).map_err(|_| GatewayError::AuthMissing(var.clone()))?),
                    (Provider::RemoteApi { .. }, None) => {
                        return Err(GatewayError::Config(format!("model `{}` needs credential_env", spec.name)))
                    }
                    _ => None,
                };
                let client = Client::builder()
                    .timeout(Duration::from_secs(300))
                    .build()
                    .map_err(|e| GatewayError::Config(e.to_string()))?;
                (Some(client), api_key)
            }
        };
        Ok(Gateway {
            bucket: spec.requests_per_minute.map(TokenBucket::per_minute),
            slots: ConcurrencyLimit::new(spec.max_concurrent),
            spec,
            client,
            api_key,
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    /// Asks the model to localize the fault in `task`.
    ///
    /// Over-long prompts come back as a `Skipped` answer rather than an
    /// error, so they are recorded and never re-sent.
    pub fn query(&self, task: &FaultLocTask) -> Result<ModelAnswer, GatewayError> {
        let prompt = build_prompt(task);
        let prompt_estimate = estimate_tokens(&prompt);
        let mut answer = ModelAnswer {
            task_id: task.task_id.clone(),
            model_name: self.spec.name.clone(),
            raw_text: String::new(),
            predicted_line: None,
            latency_ms: 0,
            prompt_tokens: prompt_estimate as u64,
            completion_tokens: 0,
            attempts: 0,
            status: AnswerStatus::Answered,
        };
        if let Some(limit) = self.spec.context_limit_tokens {
            if prompt_estimate > limit {
                answer.status = AnswerStatus::Skipped;
                answer.raw_text = GatewayError::ContextOverflow { tokens: prompt_estimate, limit }.to_string();
                return Ok(answer);
            }
        }
        if let Provider::Mock(kind) = self.spec.provider {
            let line = mock_line(kind, task);
            answer.raw_text = format!("FAULT_LINE: {line}");
            answer.completion_tokens = estimate_tokens(&answer.raw_text) as u64;
            answer.predicted_line = parse_answer(&answer.raw_text, task.line_count());
            answer.attempts = 1;
            return Ok(answer);
        }
        let started = Instant::now();
        let (completion, attempts) = self.complete_with_retries(&prompt)?;
        answer.latency_ms = started.elapsed().as_millis() as u64;
        answer.attempts = attempts;
        answer.prompt_tokens = completion.prompt_tokens.unwrap_or(prompt_estimate as u64);
        answer.completion_tokens = completion
            .completion_tokens
            .unwrap_or(estimate_tokens(&completion.text) as u64);
        answer.predicted_line = parse_answer(&completion.text, task.line_count());
        answer.raw_text = completion.text;
        Ok(answer)
    }

    /// Free-form completion, used for generated mutation content. Mocks
    /// have nothing to say and return `None`.
    pub fn complete(&self, prompt: &str) -> Result<Option<String>, GatewayError> {
        if self.spec.is_mock() {
            return Ok(None);
        }
        Ok(Some(self.complete_with_retries(prompt)?.0.text))
    }

    fn complete_with_retries(&self, prompt: &str) -> Result<(Completion, u32), GatewayError> {
        let mut attempts = 0;
        loop {
            attempts += 1;
            if let Some(bucket) = &self.bucket {
                bucket.acquire();
            }
            let outcome = {
                let _permit = self.slots.acquire();
                self.send(prompt)
            };
            let message = match outcome {
                Ok(c) => return Ok((c, attempts)),
                Err(Failure::Fatal(m)) => {
                    return Err(GatewayError::ProviderError { model: self.spec.name.clone(), attempts, message: m })
                }
                Err(Failure::Transient(m)) => m,
            };
            if attempts > self.spec.max_retries {
                return Err(GatewayError::ProviderError { model: self.spec.name.clone(), attempts, message });
            }
            let delay = self.spec.backoff_base_ms.saturating_mul(1 << (attempts - 1).min(16));
            log::warn!("{}: attempt {attempts} failed ({message}); retrying in {delay} ms", self.spec.name);
            thread::sleep(Duration::from_millis(delay));
        }
    }

    fn send(&self, prompt: &str) -> Result<Completion, Failure> {
        let client = self.client.as_ref().expect("remote providers have a client");
        let spec = &self.spec;
        let (request, style) = match &spec.provider {
            Provider::RemoteApi { style, endpoint, model } => {
                let model = model.as_deref().unwrap_or(&spec.name);
                let url = endpoint.replace("{model}", model);
                let key = self.api_key.as_deref().unwrap_or_default();
                let request = match style {
                    ApiStyle::OpenaiChat => client.post(url).bearer_auth(key).json(&json!({
                        "model": model,
                        "messages": [{"role": "user", "content": prompt}],
                        "temperature": spec.temperature,
                        "max_tokens": spec.max_output_tokens,
                    })),
                    ApiStyle::AnthropicMessages => client
                        .post(url)
                        .header("x-api-key", key)
                        .header("anthropic-version", "2023-06-01")
                        .json(&json!({
                            "model": model,
                            "messages": [{"role": "user", "content": prompt}],
                            "temperature": spec.temperature,
                            "max_tokens": spec.max_output_tokens,
                        })),
                    ApiStyle::Gemini => client.post(url).header("x-goog-api-key", key).json(&json!({
                        "contents": [{"role": "user", "parts": [{"text": prompt}]}],
                        "generationConfig": {
                            "temperature": spec.temperature,
                            "maxOutputTokens": spec.max_output_tokens,
                        },
                    })),
                };
                (request, Some(*style))
            }
            Provider::LocalRuntime { host, port, model } => {
                let model = model.as_deref().unwrap_or(&spec.name);
                let mut request = client.post(format!("http://{host}:{port}/api/generate")).json(&json!({
                    "model": model,
                    "prompt": prompt,
                    "stream": false,
                    "options": {"temperature": spec.temperature, "num_predict": spec.max_output_tokens},
                }));
                if let Some(key) = &self.api_key {
                    request = request.bearer_auth(key);
                }
                (request, None)
            }
            Provider::Mock(_) => unreachable!("mocks never reach the network"),
        };
        let response = request.send().map_err(|e| Failure::Transient(e.to_string()))?;
        let status = response.status();
        let body = response.text().map_err(|e| Failure::Transient(e.to_string()))?;
        if !status.is_success() {
            let message = format!("HTTP {status}: {}", body.chars().take(300).collect::<String>());
            return Err(if is_transient(status) {
                Failure::Transient(message)
            } else {
                Failure::Fatal(message)
            });
        }
        let value: Value = serde_json::from_str(&body).map_err(|e| Failure::Fatal(format!("bad JSON: {e}")))?;
        extract(style, &value).ok_or_else(|| Failure::Fatal(format!("unexpected response shape: {body:.300}")))
    }
}

fn is_transient(status: StatusCode) -> bool {
    status == StatusCode::TOO_MANY_REQUESTS || status == StatusCode::REQUEST_TIMEOUT || status.is_server_error()
}

fn extract(style: Option<ApiStyle>, v: &Value) -> Option<Completion> {
    let (text, prompt, completion) = match style {
        Some(ApiStyle::OpenaiChat) => (
            v["choices"][0]["message"]["content"].as_str()?.to_string(),
            &v["usage"]["prompt_tokens"],
            &v["usage"]["completion_tokens"],
        ),
        Some(ApiStyle::AnthropicMessages) => (
            join_texts(v["content"].as_array()?, "text"),
            &v["usage"]["input_tokens"],
            &v["usage"]["output_tokens"],
        ),
        Some(ApiStyle::Gemini) => (
            join_texts(v["candidates"][0]["content"]["parts"].as_array()?, "text"),
            &v["usageMetadata"]["promptTokenCount"],
            &v["usageMetadata"]["candidatesTokenCount"],
        ),
        None => (
            v["response"].as_str()?.to_string(),
            &v["prompt_eval_count"],
            &v["eval_count"],
        ),
    };
    Some(Completion {
        text,
        prompt_tokens: prompt.as_u64(),
        completion_tokens: completion.as_u64(),
    })
}

fn join_texts(parts: &[Value], field: &str) -> String {
    parts.iter().filter_map(|p| p[field].as_str()).collect::<Vec<_>>().join("")
}

/// The line a mock predicts; deterministic per (task, mock seed).
fn mock_line(kind: MockKind, task: &FaultLocTask) -> usize {
    let n = task.line_count().max(1);
    match kind {
        MockKind::Oracle => task.ground_truth_line,
        MockKind::UniformRandom { seed } => rng_for(seed, &["mock", &task.task_id]).gen_range(1..=n),
        MockKind::FirstQuartileBiased { bias, seed } => {
            let mut rng = rng_for(seed, &["mock", &task.task_id]);
            let (lo, hi) = Quartile::Q1.line_range(n);
            if rng.gen_bool(bias) {
                if (lo..=hi).contains(&task.ground_truth_line) {
                    task.ground_truth_line
                } else {
                    rng.gen_range(lo..=hi)
                }
            } else if hi < n {
                rng.gen_range(hi + 1..=n)
            } else {
                rng.gen_range(1..=n)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::test_task;

    fn program(lines: usize) -> String {
        (1..=lines).map(|i| format!("x{i} = {i}\n")).collect()
    }

    #[test]
    fn oracle_answers_with_the_ground_truth() {
        let gw = Gateway::connect("mock:oracle".parse().unwrap()).unwrap();
        let answer = gw.query(&test_task(&program(20), 13)).unwrap();
        assert_eq!(answer.raw_text, "FAULT_LINE: 13");
        assert_eq!(answer.predicted_line, Some(13));
        assert_eq!(answer.latency_ms, 0);
    }

    #[test]
    fn random_mock_is_deterministic_per_task_and_seed() {
        let a = Gateway::connect("mock:random:1".parse().unwrap()).unwrap();
        let task = test_task(&program(100), 5);
        let first = a.query(&task).unwrap();
        assert_eq!(first, a.query(&task).unwrap());
        let lines: Vec<_> = (0..20)
            .map(|seed| {
                let g = Gateway::connect(format!("mock:random:{seed}").parse().unwrap()).unwrap();
                g.query(&task).unwrap().predicted_line.unwrap()
            })
            .collect();
        assert!(lines.iter().any(|&l| l != lines[0]));
        assert!(lines.iter().all(|l| (1..=100).contains(l)));
    }

    #[test]
    fn oversized_prompts_are_skipped() {
        let mut spec: ModelSpec = "mock:oracle".parse().unwrap();
        spec.context_limit_tokens = Some(10);
        let gw = Gateway::connect(spec).unwrap();
        let answer = gw.query(&test_task(&program(20), 3)).unwrap();
        assert_eq!(answer.status, AnswerStatus::Skipped);
        assert_eq!(answer.predicted_line, None);
    }

    #[test]
    fn missing_credentials_are_reported() {
        let spec: ModelSpec = toml::from_str(
            r#"
            name = "remote"
            credential_env = "FLBENCH_TEST_SURELY_UNSET_KEY"
            provider = { type = "remote_api", style = "anthropic_messages", endpoint = "http://127.0.0.1:9/v1/messages" }
            "#,
        )
        .unwrap();
        assert!(matches!(Gateway::connect(spec), Err(GatewayError::AuthMissing(_))));
    }

    #[test]
    fn unreachable_servers_exhaust_retries() {
        let spec: ModelSpec = toml::from_str(
            r#"
            name = "local"
            max_retries = 2
            backoff_base_ms = 1
            provider = { type = "local_runtime", host = "127.0.0.1", port = 9 }
            "#,
        )
        .unwrap();
        let gw = Gateway::connect(spec).unwrap();
        match gw.query(&test_task("x = 1\n", 1)) {
            Err(GatewayError::ProviderError { attempts, .. }) => assert_eq!(attempts, 3),
            other => panic!("expected provider error, got {other:?}"),
        }
    }

    #[test]
    fn response_shapes() {
        let openai = json!({"choices": [{"message": {"content": "FAULT_LINE: 4"}}], "usage": {"prompt_tokens": 10, "completion_tokens": 3}});
        let c = extract(Some(ApiStyle::OpenaiChat), &openai).unwrap();
        assert_eq!((c.text.as_str(), c.prompt_tokens, c.completion_tokens), ("FAULT_LINE: 4", Some(10), Some(3)));
        let anthropic = json!({"content": [{"type": "text", "text": "a"}, {"type": "text", "text": "b"}], "usage": {"input_tokens": 1, "output_tokens": 2}});
        assert_eq!(extract(Some(ApiStyle::AnthropicMessages), &anthropic).unwrap().text, "ab");
        let gemini = json!({"candidates": [{"content": {"parts": [{"text": "line 2"}]}}]});
        assert_eq!(extract(Some(ApiStyle::Gemini), &gemini).unwrap().text, "line 2");
        let ollama = json!({"response": "FAULT_LINE: 1", "eval_count": 4});
        assert_eq!(extract(None, &ollama).unwrap().completion_tokens, Some(4));
        assert!(extract(Some(ApiStyle::OpenaiChat), &json!({})).is_none());
    }
}
