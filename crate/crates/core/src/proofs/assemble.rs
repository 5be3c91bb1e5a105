use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dag::{ProofDag, ProofNode};
use crate::inference::{ConditionRef, Implication};
use crate::model::{Literal, SentenceId, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepCondition {
    /// A context fact or an earlier fragment's id.
    Sentence(SentenceId),
    /// A negated condition satisfied by failure.
    Naf(Literal),
}

/// One generated depth-1 inference. `id` is the sentence id the implication
/// receives when appended to the context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFragment {
    pub id: SentenceId,
    pub implication: Literal,
    pub rule: SentenceId,
    pub conditions: Vec<StepCondition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssembleError {
    #[error("condition `{0}` is neither a context fact nor a fragment of the chain")]
    DanglingReference(SentenceId),
    #[error("`{0}` is not concluded by any fragment of the chain")]
    TargetNotInChain(Literal),
    #[error("fragment `{0}` depends on itself")]
    Cycle(SentenceId),
}

struct Assembler<'a> {
    theory: &'a Theory,
    by_id: BTreeMap<SentenceId, &'a StepFragment>,
}

impl Assembler<'_> {
    fn build(&self, f: &StepFragment, active: &mut BTreeSet<SentenceId>) -> Result<ProofNode, AssembleError> {
        if !active.insert(f.id) {
            return Err(AssembleError::Cycle(f.id));
        }
        let mut conditions = Vec::with_capacity(f.conditions.len());
        for c in &f.conditions {
            conditions.push(match c {
                StepCondition::Naf(l) => ProofNode::Naf { literal: l.clone() },
                StepCondition::Sentence(id) => {
                    if let Some(fact) = self.theory.fact(*id) {
                        ProofNode::Fact {
                            id: *id,
                            literal: fact.literal.clone(),
                        }
                    } else if let Some(sub) = self.by_id.get(id) {
                        self.build(sub, active)?
                    } else {
                        return Err(AssembleError::DanglingReference(*id));
                    }
                }
            });
        }
        active.remove(&f.id);
        Ok(ProofNode::Derived {
            rule: f.rule,
            literal: f.implication.clone(),
            conditions,
        })
    }
}

/// Splice a chain of one-step fragments into a full proof of `target`.
/// References to earlier fragments are replaced by their sub-proofs.
pub fn assemble_iterative_proof(
    chain: &[StepFragment],
    target: &Literal,
    t: &Theory,
) -> Result<ProofDag, AssembleError> {
    let mut by_id = BTreeMap::new();
    for f in chain {
        by_id.entry(f.id).or_insert(f);
    }
    let a = Assembler { theory: t, by_id };
    let root = chain
        .iter()
        .find(|f| &f.implication == target)
        .ok_or_else(|| AssembleError::TargetNotInChain(target.clone()))?;
    Ok(ProofDag::new(a.build(root, &mut BTreeSet::new())?))
}

/// The depth-1 proof of a one-step inference.
pub fn step_proof(imp: &Implication, t: &Theory) -> ProofDag {
    let conditions = imp
        .support
        .conditions
        .iter()
        .map(|c| match c {
            ConditionRef::Context(id) => ProofNode::Fact {
                id: *id,
                literal: t.fact(*id).expect("context fact").literal.clone(),
            },
            ConditionRef::Naf(l) => ProofNode::Naf { literal: l.clone() },
            ConditionRef::Derived(l) => unreachable!("one-step support cites derived `{l}`"),
        })
        .collect();
    ProofDag::new(ProofNode::Derived {
        rule: imp.support.rule,
        literal: imp.literal.clone(),
        conditions,
    })
}

/// The fragment recorded when a one-step proof's conclusion is added to
/// the context under `id`. `None` if `p` is not a single rule step.
pub fn fragment_of(p: &ProofDag, id: SentenceId) -> Option<StepFragment> {
    let ProofNode::Derived {
        rule,
        literal,
        conditions,
    } = &p.root
    else {
        return None;
    };
    let conditions = conditions
        .iter()
        .map(|c| match c {
            ProofNode::Fact { id, .. } => Some(StepCondition::Sentence(*id)),
            ProofNode::Naf { literal } => Some(StepCondition::Naf(literal.clone())),
            ProofNode::Derived { .. } => None,
        })
        .collect::<Option<Vec<_>>>()?;
    Some(StepFragment {
        id,
        implication: literal.clone(),
        rule: *rule,
        conditions,
    })
}
