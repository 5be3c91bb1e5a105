//! Single-fact abduction over open-world theories.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grammar::render_fact;
use crate::inference::{answer_with, closure, InferenceError};
use crate::model::{signature_of, Literal, Mode, Namespace, Polarity, Predicate, Theory, TruthValue};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidatePolarity {
    #[default]
    Both,
    PositiveOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbductionError {
    #[error("abduction requires an OWA theory")]
    WrongMode,
    #[error("question is already {0}")]
    NotUnprovable(TruthValue),
    #[error(transparent)]
    Inference(#[from] InferenceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingFact {
    pub literal: Literal,
    pub text: String,
    /// Depth of the question's proof once the fact is added.
    pub depth: u32,
}

/// All alternative missing facts, sorted by text. Empty means "None".
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbductionAnswer {
    pub missing_facts: Vec<MissingFact>,
}

impl AbductionAnswer {
    pub fn is_none(&self) -> bool {
        self.missing_facts.is_empty()
    }

    pub fn texts(&self) -> Vec<String> {
        self.missing_facts.iter().map(|m| m.text.clone()).collect()
    }

    /// Facts joined with " , ", or "None".
    pub fn to_output(&self) -> String {
        if self.is_none() {
            "None".to_string()
        } else {
            self.texts().join(" , ")
        }
    }
}

/// Every ground literal over the theory's signature that is not already a
/// stated fact. Relation atoms range over ordered entity pairs, self-pairs
/// included.
pub fn candidate_space(t: &Theory, polarity: CandidatePolarity) -> BTreeSet<Literal> {
    let stated = t.fact_literals();
    let mut out = BTreeSet::new();
    for atom in signature_of(t).ground_atoms() {
        let mut forms = vec![atom.clone()];
        if polarity == CandidatePolarity::Both {
            forms.push(atom.negated());
        }
        for f in forms {
            if !stated.contains(&f) {
                out.insert(f);
            }
        }
    }
    out
}

/// (predicate, polarity) pairs that can contribute to deriving `q`: `q`'s
/// own, plus the conditions of rules concluding a relevant pair.
fn relevant_patterns(t: &Theory, q: &Literal) -> BTreeSet<(Predicate, Polarity)> {
    let mut by_conclusion: BTreeMap<(Predicate, Polarity), Vec<(Predicate, Polarity)>> =
        BTreeMap::new();
    for r in t.rules() {
        let key = (r.conclusion.predicate(), r.conclusion.polarity);
        let conds = by_conclusion.entry(key).or_default();
        conds.extend(r.conditions.iter().map(|c| (c.predicate(), c.polarity)));
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![(q.predicate(), q.polarity)];
    while let Some(p) = stack.pop() {
        if !seen.insert(p.clone()) {
            continue;
        }
        if let Some(conds) = by_conclusion.get(&p) {
            stack.extend(conds.iter().cloned());
        }
    }
    seen
}

/// Depth at which `q` becomes True once `m` is added, or `None` if it does
/// not (or if `m` makes the theory inconsistent).
pub fn completes(t: &Theory, q: &Literal, m: &Literal) -> Option<u32> {
    let t2 = t.with_fact(t.next_id(Namespace::Fact), m.clone()).ok()?;
    let c = closure(&t2).ok()?;
    let a = answer_with(&c, q);
    (a.value == TruthValue::True).then(|| a.depth.unwrap_or(0))
}

pub fn abduce_single_fact_with(
    t: &Theory,
    q: &Literal,
    polarity: CandidatePolarity,
) -> Result<AbductionAnswer, AbductionError> {
    if t.mode() != Mode::Owa {
        return Err(AbductionError::WrongMode);
    }
    let base = answer_with(&closure(t)?, q);
    if base.value != TruthValue::Unknown {
        return Err(AbductionError::NotUnprovable(base.value));
    }
    let relevant = relevant_patterns(t, q);
    // A candidate matching no relevant pattern adds only itself.
    let candidates: Vec<Literal> = candidate_space(t, polarity)
        .into_iter()
        .filter(|m| m != q && relevant.contains(&(m.predicate(), m.polarity)))
        .collect();
    let mut missing: Vec<MissingFact> = candidates
        .par_iter()
        .filter_map(|m| {
            completes(t, q, m).map(|depth| MissingFact {
                literal: m.clone(),
                text: render_fact(m).unwrap_or_else(|_| m.to_string()),
                depth,
            })
        })
        .collect();
    missing.sort_by(|a, b| a.text.cmp(&b.text));
    Ok(AbductionAnswer {
        missing_facts: missing,
    })
}

/// Every single fact whose addition makes the unprovable `q` True.
pub fn abduce_single_fact(t: &Theory, q: &Literal) -> Result<AbductionAnswer, AbductionError> {
    abduce_single_fact_with(t, q, CandidatePolarity::Both)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse_context, parse_fact};

    const C5: &str = "triple1: Anne is white. triple2: Charlie is young. triple3: Dave is round. triple4: Erin is quiet. rule1: If someone is rough and young then they are blue. rule2: Rough, white people are smart. rule3: All smart people are rough. rule4: All white people are smart. rule5: If someone is young then they are smart. rule6: All smart people are rough.";

    #[test]
    fn dave_candidate_count() {
        let t = parse_context(C5, Mode::Owa).unwrap();
        assert_eq!(candidate_space(&t, CandidatePolarity::Both).len(), 52);
        assert_eq!(candidate_space(&t, CandidatePolarity::PositiveOnly).len(), 24);
    }

    #[test]
    fn dave_abduction_contains_expected_facts() {
        let t = parse_context(C5, Mode::Owa).unwrap();
        let q = parse_fact("Dave is rough.").unwrap();
        let a = abduce_single_fact(&t, &q).unwrap();
        let texts = a.texts();
        assert!(texts.contains(&"Dave is young.".to_string()));
        assert!(texts.contains(&"Dave is smart.".to_string()));
        assert!(a.missing_facts.iter().all(|m| m.literal != q));
    }

    #[test]
    fn wrong_mode_and_known_questions() {
        let t = parse_context(C5, Mode::Cwa).unwrap();
        let q = parse_fact("Dave is rough.").unwrap();
        assert_eq!(abduce_single_fact(&t, &q), Err(AbductionError::WrongMode));
        let t = parse_context(C5, Mode::Owa).unwrap();
        let q = parse_fact("Anne is rough.").unwrap();
        assert_eq!(
            abduce_single_fact(&t, &q),
            Err(AbductionError::NotUnprovable(TruthValue::True))
        );
    }

    #[test]
    fn no_path_gives_none() {
        let t = parse_context("sent1: Bob is big. sent2: If someone is big then they are red.", Mode::Owa).unwrap();
        let q = parse_fact("Bob is kind.").unwrap();
        assert_eq!(abduce_single_fact(&t, &q).unwrap().to_output(), "None");
    }
}
