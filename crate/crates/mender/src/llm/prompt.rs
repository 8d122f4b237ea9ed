//! Prompt rendering. Every agent prompt has four sections in fixed
//! order — Role, Task, Instruction, Context — and renders byte-identically
//! for identical inputs. The task line and numbered steps for each role
//! live in `assets/prompts/` as editable data files.

use crate::llm::GatewayError;
use crate::source::Language;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AgentRole {
    Auditor,
    Architect,
    CodeGenerator,
    Refiner,
    Validator,
}

impl AgentRole {
    pub fn display_name(self) -> &'static str {
        match self {
            AgentRole::Auditor => "Auditor",
            AgentRole::Architect => "Architect",
            AgentRole::CodeGenerator => "Code Generator",
            AgentRole::Refiner => "Refiner",
            AgentRole::Validator => "Validator",
        }
    }

    fn template(self) -> &'static str {
        match self {
            AgentRole::Auditor => include_str!("../../assets/prompts/auditor.txt"),
            AgentRole::Architect => include_str!("../../assets/prompts/architect.txt"),
            AgentRole::CodeGenerator => include_str!("../../assets/prompts/code_generator.txt"),
            AgentRole::Refiner => include_str!("../../assets/prompts/refiner.txt"),
            AgentRole::Validator => include_str!("../../assets/prompts/validator.txt"),
        }
    }

    /// Context block labels the role's prompt must provide.
    fn required_blocks(self, rag_expected: bool) -> Vec<&'static str> {
        match self {
            AgentRole::Auditor => vec![INPUT_CODE],
            AgentRole::Architect => vec![AUDIT_REPORT],
            AgentRole::CodeGenerator => {
                if rag_expected {
                    vec![REPAIR_PLAN, EXEMPLARS]
                } else {
                    vec![REPAIR_PLAN]
                }
            }
            AgentRole::Refiner => vec![GENERATED_CODE],
            AgentRole::Validator => vec![REPAIRED_CODE],
        }
    }
}

pub const INPUT_CODE: &str = "Input Code";
pub const AUDIT_REPORT: &str = "Audit Report";
pub const REPAIR_PLAN: &str = "Repair Plan";
pub const EXEMPLARS: &str = "Exemplars";
pub const GENERATED_CODE: &str = "Generated Code";
pub const PREVIOUS_ITERATION: &str = "Previous Iteration";
pub const REPAIRED_CODE: &str = "Repaired Code";

const SINGLE_AGENT_ROLE: &str = "Smart Contract Repair Agent";
const SINGLE_AGENT_TEMPLATE: &str = include_str!("../../assets/prompts/single_agent.txt");

/// Ordered context for one prompt.
#[derive(Clone, Debug)]
pub struct PromptContext {
    pub language: Language,
    pub blocks: Vec<(String, String)>,
    /// The code generator must receive an `Exemplars` block when
    /// retrieval is enabled.
    pub rag_expected: bool,
}

impl PromptContext {
    pub fn new(language: Language) -> PromptContext {
        PromptContext { language, blocks: Vec::new(), rag_expected: false }
    }

    pub fn block(mut self, label: &str, text: impl Into<String>) -> PromptContext {
        self.blocks.push((label.to_string(), text.into()));
        self
    }

    pub fn expect_rag(mut self, expected: bool) -> PromptContext {
        self.rag_expected = expected;
        self
    }
}

pub fn render_prompt(role: AgentRole, ctx: &PromptContext) -> Result<String, GatewayError> {
    for required in role.required_blocks(ctx.rag_expected) {
        if !ctx.blocks.iter().any(|(label, _)| label == required) {
            return Err(GatewayError::MissingContext { role, label: required.to_string() });
        }
    }
    Ok(render(role.display_name(), role.template(), ctx))
}

/// The chained audit-plan-repair prompt for the single-agent baseline.
pub fn render_single_agent_prompt(ctx: &PromptContext) -> Result<String, GatewayError> {
    if !ctx.blocks.iter().any(|(label, _)| label == INPUT_CODE) {
        return Err(GatewayError::MissingContext {
            role: AgentRole::Auditor,
            label: INPUT_CODE.to_string(),
        });
    }
    Ok(render(SINGLE_AGENT_ROLE, SINGLE_AGENT_TEMPLATE, ctx))
}

fn render(role_name: &str, template: &str, ctx: &PromptContext) -> String {
    let language = ctx.language.display_name();
    let filled = template.replace("{language}", language);
    let mut lines = filled.lines();
    let task = lines.next().unwrap_or_default();
    let steps: Vec<&str> = lines.filter(|l| !l.trim().is_empty()).collect();

    let mut out = String::new();
    out.push_str(&format!(
        "Role: You are a {role_name} specializing in {language} smart contracts.\n"
    ));
    out.push_str(&format!("Task: {task}\n"));
    out.push_str("Instruction: Based on the provided Context, please follow these steps:\n");
    for step in steps {
        out.push_str(step);
        out.push('\n');
    }
    out.push_str("Context:\n");
    for (label, text) in &ctx.blocks {
        out.push_str(&format!("### {label}\n{text}\n"));
    }
    out
}

/// Parse a rendered prompt back into (role name, language, blocks); the
/// rule-based backend dispatches on this.
pub fn parse_prompt(prompt: &str) -> Option<ParsedPrompt> {
    let role_line = prompt.lines().next()?;
    let rest = role_line.strip_prefix("Role: You are a ")?;
    let (role_name, tail) = rest.split_once(" specializing in ")?;
    let language = if tail.starts_with("Move") {
        Language::Move
    } else if tail.starts_with("Solidity") {
        Language::Solidity
    } else {
        return None;
    };
    let mut blocks = Vec::new();
    if let Some(ctx_start) = prompt.find("\nContext:\n") {
        let ctx = &prompt[ctx_start + "\nContext:\n".len()..];
        for section in ctx.split("### ") {
            if section.trim().is_empty() {
                continue;
            }
            let (label, text) = match section.split_once('\n') {
                Some(pair) => pair,
                None => (section, ""),
            };
            let text = text.strip_suffix('\n').unwrap_or(text);
            blocks.push((label.trim().to_string(), text.to_string()));
        }
    }
    Some(ParsedPrompt { role_name: role_name.to_string(), language, blocks })
}

#[derive(Clone, Debug)]
pub struct ParsedPrompt {
    pub role_name: String,
    pub language: Language,
    pub blocks: Vec<(String, String)>,
}

impl ParsedPrompt {
    pub fn block(&self, label: &str) -> Option<&str> {
        self.blocks
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, t)| t.as_str())
    }

    pub fn is_single_agent(&self) -> bool {
        self.role_name == SINGLE_AGENT_ROLE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auditor_prompt_has_expected_header() {
        let ctx = PromptContext::new(Language::Move).block(INPUT_CODE, "module 0x1::m { }");
        let prompt = render_prompt(AgentRole::Auditor, &ctx).unwrap();
        assert!(
            prompt.starts_with("Role: You are a Auditor specializing in Move smart contracts."),
            "{prompt}"
        );
        let pos = |needle: &str| prompt.find(needle).unwrap();
        assert!(pos("Role:") < pos("Task:"));
        assert!(pos("Task:") < pos("Instruction:"));
        assert!(pos("Instruction:") < pos("Context:"));
    }

    #[test]
    fn missing_rag_block_is_rejected_when_expected() {
        let ctx = PromptContext::new(Language::Move)
            .block(REPAIR_PLAN, "plan")
            .expect_rag(true);
        match render_prompt(AgentRole::CodeGenerator, &ctx) {
            Err(GatewayError::MissingContext { role, label }) => {
                assert_eq!(role, AgentRole::CodeGenerator);
                assert_eq!(label, EXEMPLARS);
            }
            other => panic!("expected MissingContext, got {other:?}"),
        }
    }

    #[test]
    fn rendering_is_deterministic() {
        let ctx = PromptContext::new(Language::Solidity)
            .block(AUDIT_REPORT, "{\"findings\":[]}");
        let a = render_prompt(AgentRole::Architect, &ctx).unwrap();
        let b = render_prompt(AgentRole::Architect, &ctx).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn prompts_parse_back() {
        let ctx = PromptContext::new(Language::Move)
            .block(INPUT_CODE, "module 0x1::m { }")
            .block(AUDIT_REPORT, "none");
        let prompt = render_prompt(AgentRole::Auditor, &ctx).unwrap();
        let parsed = parse_prompt(&prompt).unwrap();
        assert_eq!(parsed.role_name, "Auditor");
        assert_eq!(parsed.language, Language::Move);
        assert_eq!(parsed.block(INPUT_CODE), Some("module 0x1::m { }"));
        assert_eq!(parsed.block(AUDIT_REPORT), Some("none"));
    }

    #[test]
    fn single_agent_prompt_round_trips() {
        let ctx = PromptContext::new(Language::Solidity).block(INPUT_CODE, "contract C {}");
        let prompt = render_single_agent_prompt(&ctx).unwrap();
        let parsed = parse_prompt(&prompt).unwrap();
        assert!(parsed.is_single_agent());
        assert_eq!(parsed.language, Language::Solidity);
    }
}
