//! Model gateway: prompt rendering for the five agent roles, pluggable
//! backends (HTTP chat-completion, transcript replay, rule-based),
//! fenced-code extraction, and the dialect guard.

pub mod backend;
pub mod extract;
pub mod guard;
pub mod prompt;

pub use backend::{
    prompt_hash, Backend, BackendConfig, ChatExchange, Completion, RecordingBackend,
};
pub use extract::extract_code_block;
pub use guard::{dialect_guard, Dialect, Violation};
pub use prompt::{render_prompt, render_single_agent_prompt, AgentRole, PromptContext};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("prompt for {role:?} is missing required context block `{label}`")]
    MissingContext { role: AgentRole, label: String },
    #[error("backend request timed out")]
    BackendTimeout,
    #[error("no recorded response for prompt hash {0}")]
    ReplayMiss(String),
    #[error("backend returned HTTP {status}: {message}")]
    HttpError { status: u16, message: String },
    #[error("no usable code block in response")]
    NoCodeFound,
    #[error("malformed backend response: {0}")]
    BadResponse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
