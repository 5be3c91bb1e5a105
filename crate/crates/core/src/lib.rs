//! Reasoning over templated-English rule theories.
//!
//! Theories of facts and rules are parsed from (and rendered back to) a
//! closed templated language, evaluated by forward chaining under closed- or
//! open-world semantics, and queried for answers, proofs, implications and
//! single missing facts. Around that core sit a dataset generator, a proof
//! codec, a step verifier, scorers and a pluggable one-step generator loop.

pub mod abduction;
pub mod bridge;
pub mod config;
pub mod datagen;
pub mod grammar;
pub mod inference;
pub mod metrics;
pub mod model;
pub mod proofs;
pub mod t5;

pub use grammar::{parse_context, parse_fact, parse_question, parse_sentence, render_fact};
pub use inference::{answer, check_stratifiable, closure, one_step_inferences, Answer, Closure};
pub use model::{
    negate_question, signature_of, Entity, Literal, Mode, Rule, Sentence, SentenceId, Theory,
    TruthValue,
};
