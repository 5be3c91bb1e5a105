use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use super::dag::{CanonicalProof, ProofDag, ProofNode};
use crate::inference::{closure, Closure, ConditionRef, InferenceError};
use crate::model::{Literal, Theory};

pub const DEFAULT_PROOF_CAP: usize = 5000;

/// Result of proof enumeration; `truncated` is set when the cap was hit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofSet {
    pub proofs: Vec<ProofDag>,
    pub truncated: bool,
}

impl ProofSet {
    pub fn is_empty(&self) -> bool {
        self.proofs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.proofs.len()
    }
}

type Memo = HashMap<(Literal, BTreeSet<Literal>), (Rc<Vec<ProofNode>>, bool)>;

struct Enumerator<'a> {
    theory: &'a Theory,
    closure: &'a Closure,
    cap: usize,
    memo: Memo,
}

impl Enumerator<'_> {
    /// Proof trees of `lit` in which no literal of `ancestors` is re-derived.
    fn proofs(&mut self, lit: &Literal, ancestors: &BTreeSet<Literal>) -> (Rc<Vec<ProofNode>>, bool) {
        if let Some(id) = self.closure.fact_id(lit) {
            return (
                Rc::new(vec![ProofNode::Fact {
                    id,
                    literal: lit.clone(),
                }]),
                false,
            );
        }
        let key = (lit.clone(), ancestors.clone());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }

        let mut below = ancestors.clone();
        below.insert(lit.clone());
        let mut out: Vec<ProofNode> = Vec::new();
        let mut truncated = false;

        'supports: for support in self.closure.supports(lit).to_vec() {
            let mut options: Vec<Rc<Vec<ProofNode>>> = Vec::new();
            for c in &support.conditions {
                let opts = match c {
                    ConditionRef::Context(id) => {
                        let fact = self.theory.fact(*id).expect("support cites a theory fact");
                        Rc::new(vec![ProofNode::Fact {
                            id: *id,
                            literal: fact.literal.clone(),
                        }])
                    }
                    ConditionRef::Naf(l) => Rc::new(vec![ProofNode::Naf { literal: l.clone() }]),
                    ConditionRef::Derived(l) => {
                        if below.contains(l) {
                            continue 'supports;
                        }
                        let (sub, t) = self.proofs(l, &below);
                        truncated |= t;
                        if sub.is_empty() {
                            continue 'supports;
                        }
                        sub
                    }
                };
                options.push(opts);
            }
            // Cartesian product over condition alternatives.
            let mut idx = vec![0usize; options.len()];
            loop {
                if out.len() >= self.cap {
                    truncated = true;
                    break 'supports;
                }
                out.push(ProofNode::Derived {
                    rule: support.rule,
                    literal: lit.clone(),
                    conditions: idx
                        .iter()
                        .zip(&options)
                        .map(|(&i, o)| o[i].clone())
                        .collect(),
                });
                let mut k = options.len();
                loop {
                    if k == 0 {
                        continue 'supports;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < options[k].len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        }
        let result = (Rc::new(out), truncated);
        self.memo.insert(key, result.clone());
        result
    }
}

/// Every distinct proof of `q` (up to `cap`) given a precomputed closure.
pub fn all_proofs_with(t: &Theory, c: &Closure, q: &Literal, cap: usize) -> ProofSet {
    let mut e = Enumerator {
        theory: t,
        closure: c,
        cap,
        memo: HashMap::new(),
    };
    if !c.contains(q) {
        return ProofSet::default();
    }
    let (nodes, truncated) = e.proofs(q, &BTreeSet::new());
    let mut unique: BTreeMap<(usize, CanonicalProof), ProofDag> = BTreeMap::new();
    for n in nodes.iter() {
        let p = ProofDag::new(n.clone());
        unique.entry((p.node_count(), p.canonical())).or_insert(p);
    }
    ProofSet {
        proofs: unique.into_values().take(cap).collect(),
        truncated,
    }
}

/// Every distinct proof of `q`, up to `cap`. Context facts have exactly one
/// proof, the fact itself; unprovable literals have none.
pub fn all_proofs(t: &Theory, q: &Literal, cap: usize) -> Result<ProofSet, InferenceError> {
    let c = closure(t)?;
    Ok(all_proofs_with(t, &c, q, cap))
}

/// The proofs with the fewest nodes; ties are all kept.
pub fn shortest_proofs(ps: &[ProofDag]) -> Vec<ProofDag> {
    let Some(min) = ps.iter().map(ProofDag::node_count).min() else {
        return Vec::new();
    };
    ps.iter().filter(|p| p.node_count() == min).cloned().collect()
}
