use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Literal, SentenceId};

/// A node of a proof. A `Derived` node stands for a rule node together with
/// the fact node it concludes, so fact and rule levels always alternate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProofNode {
    /// A fact stated in the context (leaf).
    Fact { id: SentenceId, literal: Literal },
    /// A negated literal assumed true because its atom is unprovable (leaf).
    Naf { literal: Literal },
    /// `literal` concluded by `rule` from `conditions`.
    Derived {
        rule: SentenceId,
        literal: Literal,
        conditions: Vec<ProofNode>,
    },
}

impl ProofNode {
    pub fn literal(&self) -> &Literal {
        match self {
            ProofNode::Fact { literal, .. }
            | ProofNode::Naf { literal }
            | ProofNode::Derived { literal, .. } => literal,
        }
    }

    pub fn depth(&self) -> u32 {
        match self {
            ProofNode::Derived { conditions, .. } => {
                1 + conditions.iter().map(ProofNode::depth).max().unwrap_or(0)
            }
            _ => 0,
        }
    }

    /// Fact nodes plus rule nodes.
    pub fn node_count(&self) -> usize {
        match self {
            ProofNode::Derived { conditions, .. } => {
                2 + conditions.iter().map(ProofNode::node_count).sum::<usize>()
            }
            _ => 1,
        }
    }

    fn canonical_into(&self, skeleton: bool) -> String {
        match self {
            ProofNode::Fact { literal, .. } => format!("F:{literal}"),
            ProofNode::Naf { literal } => format!("N:{literal}"),
            ProofNode::Derived {
                rule,
                literal,
                conditions,
            } => {
                let mut kids: Vec<String> = conditions
                    .iter()
                    .map(|c| c.canonical_into(skeleton))
                    .collect();
                kids.sort();
                if skeleton {
                    format!("(C <- R:{rule} [{}])", kids.join(" "))
                } else {
                    format!("(C:{literal} <- R:{rule} [{}])", kids.join(" "))
                }
            }
        }
    }

    /// Visit derived nodes children-first.
    pub fn for_each_step<'a>(&'a self, f: &mut impl FnMut(&'a ProofNode)) {
        if let ProofNode::Derived { conditions, .. } = self {
            for c in conditions {
                c.for_each_step(f);
            }
            f(self);
        }
    }

    pub fn for_each_leaf<'a>(&'a self, f: &mut impl FnMut(&'a ProofNode)) {
        match self {
            ProofNode::Derived { conditions, .. } => {
                for c in conditions {
                    c.for_each_leaf(f);
                }
            }
            leaf => f(leaf),
        }
    }
}

/// A proof of `root.literal()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProofDag {
    pub root: ProofNode,
}

/// Order-insensitive normal form of a proof. Intermediate conclusions are
/// identified by their sentence text, never by their `conc`/`int` number.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalProof(pub String);

impl fmt::Display for CanonicalProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Fact,
    Naf,
    Concluded,
    Rule,
}

/// Explicit node/edge view of a proof. Edges run fact -> rule (condition)
/// and rule -> fact (conclusion).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofGraph {
    pub nodes: Vec<(NodeKind, String)>,
    pub edges: Vec<(usize, usize)>,
}

impl ProofDag {
    pub fn new(root: ProofNode) -> Self {
        ProofDag { root }
    }

    pub fn conclusion(&self) -> &Literal {
        self.root.literal()
    }

    pub fn depth(&self) -> u32 {
        self.root.depth()
    }

    pub fn node_count(&self) -> usize {
        self.root.node_count()
    }

    pub fn canonical(&self) -> CanonicalProof {
        CanonicalProof(self.root.canonical_into(false))
    }

    /// Canonical form with concluded-fact texts removed.
    pub fn skeleton(&self) -> CanonicalProof {
        CanonicalProof(self.root.canonical_into(true))
    }

    pub fn to_graph(&self) -> ProofGraph {
        fn walk(n: &ProofNode, g: &mut ProofGraph) -> usize {
            match n {
                ProofNode::Fact { literal, .. } => {
                    g.nodes.push((NodeKind::Fact, literal.to_string()));
                    g.nodes.len() - 1
                }
                ProofNode::Naf { literal } => {
                    g.nodes.push((NodeKind::Naf, literal.to_string()));
                    g.nodes.len() - 1
                }
                ProofNode::Derived {
                    rule,
                    literal,
                    conditions,
                } => {
                    g.nodes.push((NodeKind::Concluded, literal.to_string()));
                    let fact = g.nodes.len() - 1;
                    g.nodes.push((NodeKind::Rule, rule.to_string()));
                    let r = g.nodes.len() - 1;
                    g.edges.push((r, fact));
                    for c in conditions {
                        let k = walk(c, g);
                        g.edges.push((k, r));
                    }
                    fact
                }
            }
        }
        let mut g = ProofGraph {
            nodes: Vec::new(),
            edges: Vec::new(),
        };
        walk(&self.root, &mut g);
        g
    }
}

/// Canonical form used for exact proof matching.
pub fn canonicalize(p: &ProofDag) -> CanonicalProof {
    p.canonical()
}
