//! Audit-and-repair toolchain for Move and Solidity smart contracts.
//!
//! The crate is organized as a stack: language frontends produce
//! span-preserving ASTs, rule-based detectors turn a parsed unit into an
//! audit report, repair rules turn findings into span edits, and the
//! pipeline orchestrates the five agent roles (auditor, architect, code
//! generator, refiner, validator) over a pluggable model backend. An
//! evaluation harness sweeps fixture corpora and reports pass@1 and
//! exploit-mitigation metrics.

pub mod detectors;
pub mod eval;
pub mod llm;
pub mod move_lang;
pub mod pipeline;
pub mod rag;
pub mod repair;
pub mod sol_lang;
pub mod source;

pub use source::{Language, SourceUnit, Span};
