use serde::{Deserialize, Serialize};

use super::dag::{ProofDag, ProofNode};
use crate::inference::{closure, one_step_inferences, Closure};
use crate::model::{Fact, Literal, Mode, Namespace, Sentence, SentenceId, Theory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Check NAF leaves against the closure of the full theory. When off,
    /// proofs with NAF leaves are at best partially verified.
    pub check_naf: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { check_naf: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedStep {
    /// Rule of the failing step, or `None` for a bad leaf.
    pub rule: Option<SentenceId>,
    pub literal: Literal,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VerifiedReport {
    FullyVerified,
    PartiallyVerified { unverified_naf: Vec<Literal> },
    Failed(FailedStep),
}

impl VerifiedReport {
    pub fn is_fully_verified(&self) -> bool {
        matches!(self, VerifiedReport::FullyVerified)
    }

    pub fn is_failed(&self) -> bool {
        matches!(self, VerifiedReport::Failed(_))
    }
}

fn fail(rule: Option<SentenceId>, literal: &Literal, reason: impl Into<String>) -> VerifiedReport {
    VerifiedReport::Failed(FailedStep {
        rule,
        literal: literal.clone(),
        reason: reason.into(),
    })
}

/// Is `conclusion` a one-step inference of the theory made of `rule` and
/// the positive condition literals alone?
fn step_holds(t: &Theory, rule: SentenceId, conditions: &[ProofNode], conclusion: &Literal) -> Result<(), String> {
    let r = t.rule(rule).ok_or_else(|| format!("`{rule}` is not a rule of the theory"))?;
    let mut sentences = vec![Sentence::Rule(r.clone())];
    for (i, c) in conditions.iter().enumerate() {
        if let ProofNode::Naf { .. } = c {
            continue;
        }
        sentences.push(Sentence::Fact(Fact {
            id: SentenceId::new(Namespace::Fact, i as u32 + 1),
            literal: c.literal().clone(),
        }));
    }
    let micro = Theory::new(sentences, t.mode()).map_err(|e| format!("micro-theory rejected: {e}"))?;
    let inferred = one_step_inferences(&micro).map_err(|e| e.to_string())?;
    if inferred.iter().any(|i| &i.literal == conclusion) {
        Ok(())
    } else {
        Err(format!("`{conclusion}` does not follow from `{rule}` and the given conditions"))
    }
}

fn check(
    n: &ProofNode,
    t: &Theory,
    full: Option<&Closure>,
    unverified: &mut Vec<Literal>,
) -> Option<VerifiedReport> {
    match n {
        ProofNode::Fact { id, literal } => match t.fact(*id) {
            Some(f) if &f.literal == literal => None,
            Some(_) => Some(fail(None, literal, format!("`{id}` states a different fact"))),
            None => Some(fail(None, literal, format!("`{id}` is not a fact of the theory"))),
        },
        ProofNode::Naf { literal } => {
            if t.mode() == Mode::Owa {
                return Some(fail(None, literal, "negation as failure is not available under OWA"));
            }
            if !literal.is_negative() {
                return Some(fail(None, literal, "NAF leaf must be a negated literal"));
            }
            match full {
                Some(c) if c.contains(&literal.positive_form()) => Some(fail(
                    None,
                    literal,
                    "assumed-false literal is provable",
                )),
                Some(_) => None,
                None => {
                    unverified.push(literal.clone());
                    None
                }
            }
        }
        ProofNode::Derived {
            rule,
            literal,
            conditions,
        } => {
            for c in conditions {
                if let Some(r) = check(c, t, full, unverified) {
                    return Some(r);
                }
            }
            step_holds(t, *rule, conditions, literal)
                .err()
                .map(|reason| fail(Some(*rule), literal, reason))
        }
    }
}

/// Check each rule application of `p` against a micro-theory holding only
/// that rule and its conditions. NAF leaves need the full theory.
pub fn verify_proof_with(p: &ProofDag, t: &Theory, opts: VerifyOptions) -> VerifiedReport {
    let full = if opts.check_naf && t.mode() == Mode::Cwa {
        match closure(t) {
            Ok(c) => Some(c),
            Err(e) => return fail(None, p.conclusion(), e.to_string()),
        }
    } else {
        None
    };
    let mut unverified = Vec::new();
    if let Some(r) = check(&p.root, t, full.as_ref(), &mut unverified) {
        return r;
    }
    if unverified.is_empty() {
        VerifiedReport::FullyVerified
    } else {
        VerifiedReport::PartiallyVerified {
            unverified_naf: unverified,
        }
    }
}

pub fn verify_proof(p: &ProofDag, t: &Theory) -> VerifiedReport {
    verify_proof_with(p, t, VerifyOptions::default())
}
