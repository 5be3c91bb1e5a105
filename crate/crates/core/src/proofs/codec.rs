//! Linear proof strings.
//!
//! ```text
//! proof  := "None" | body [" ; with " binding (" ; " binding)*]
//! node   := id | "#" rule-token node | "&" node node
//! rule-token := id "%" concK | id "@" intK | id
//! ```
//!
//! `&` is emitted binary and left-nested; the decoder flattens any nesting.
//! NAF leaves are written `nafK` and bound to the assumed-false sentence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dag::{ProofDag, ProofNode};
use crate::grammar::{parse_fact, render_fact};
use crate::inference::apply_rule;
use crate::model::{Literal, Namespace, SentenceId, Theory};

const MAX_NESTING: usize = 256;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dialect {
    /// `rule1%conc1`
    #[default]
    PercentConc,
    /// `sent7@int1`
    AtInt,
}

impl Dialect {
    fn marker(self) -> char {
        match self {
            Dialect::PercentConc => '%',
            Dialect::AtInt => '@',
        }
    }

    fn namespace(self) -> Namespace {
        match self {
            Dialect::PercentConc => Namespace::Conc,
            Dialect::AtInt => Namespace::Int,
        }
    }
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "percent" | "percent-conc" | "conc" => Ok(Dialect::PercentConc),
            "at" | "at-int" | "int" => Ok(Dialect::AtInt),
            other => Err(format!("unknown proof dialect `{other}`")),
        }
    }
}

/// A proof in linear form. `bindings` holds conc/int entries in numeric
/// order followed by naf entries; texts end with a period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedProof {
    pub body: String,
    pub bindings: Vec<(SentenceId, String)>,
}

impl fmt::Display for EncodedProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.body)?;
        for (i, (id, text)) in self.bindings.iter().enumerate() {
            let sep = if i == 0 { " ; with " } else { " ; " };
            write!(f, "{sep}{id}: {text}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("malformed proof at token {position}: {message}")]
    Malformed { position: usize, message: String },
    #[error("intermediate `{0}` is not bound in the with-clause")]
    UnboundIntermediate(SentenceId),
    #[error("unknown sentence id `{0}`")]
    UnknownSentenceId(String),
    #[error("cannot read binding text for `{id}`: {text}")]
    BadBindingText { id: SentenceId, text: String },
}

impl FromStr for EncodedProof {
    type Err = CodecError;

    /// Split a proof string into body and bindings without resolving ids.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (body, rest) = match s.find(" ; with ") {
            Some(i) => (&s[..i], Some(&s[i + " ; with ".len()..])),
            None => (s, None),
        };
        let mut bindings = Vec::new();
        if let Some(rest) = rest {
            for part in rest.split(" ; ") {
                let (id, text) = part.split_once(':').ok_or_else(|| CodecError::Malformed {
                    position: 0,
                    message: format!("binding without `:` in `{part}`"),
                })?;
                let id: SentenceId = id.trim().parse().map_err(|_| CodecError::Malformed {
                    position: 0,
                    message: format!("bad binding id `{}`", id.trim()),
                })?;
                bindings.push((id, text.trim().to_string()));
            }
        }
        Ok(EncodedProof {
            body: body.trim().to_string(),
            bindings,
        })
    }
}

struct Encoder {
    dialect: Dialect,
    omit_root_marker: bool,
    tokens: Vec<String>,
    concs: Vec<(SentenceId, String)>,
    nafs: Vec<(SentenceId, String)>,
}

fn sentence_text(lit: &Literal) -> String {
    render_fact(lit).unwrap_or_else(|_| format!("{lit}."))
}

impl Encoder {
    fn node(&mut self, n: &ProofNode) {
        match n {
            ProofNode::Fact { id, .. } => self.tokens.push(id.to_string()),
            ProofNode::Naf { literal } => {
                let id = SentenceId::new(Namespace::Naf, self.nafs.len() as u32 + 1);
                self.nafs.push((id, sentence_text(&literal.positive_form())));
                self.tokens.push(id.to_string());
            }
            ProofNode::Derived {
                rule,
                literal,
                conditions,
            } => {
                self.tokens.push("#".into());
                if std::mem::take(&mut self.omit_root_marker) {
                    self.tokens.push(rule.to_string());
                } else {
                    let id =
                        SentenceId::new(self.dialect.namespace(), self.concs.len() as u32 + 1);
                    self.concs.push((id, sentence_text(literal)));
                    self.tokens
                        .push(format!("{rule}{}{id}", self.dialect.marker()));
                }
                self.antecedent(conditions);
            }
        }
    }

    fn antecedent(&mut self, conds: &[ProofNode]) {
        // k conditions become k-1 leading "&" tokens: & & a b c.
        for _ in 1..conds.len() {
            self.tokens.push("&".into());
        }
        for c in conds {
            self.node(c);
        }
    }
}

/// Encode a proof. A depth-0 proof is the fact id alone.
pub fn encode_proof(p: &ProofDag, dialect: Dialect) -> EncodedProof {
    encode_with(p, dialect, false)
}

/// Encode a one-step proof the way iterative outputs carry it: the root
/// rule has no conclusion marker (`# sent2 sent12`).
pub fn encode_step_proof(p: &ProofDag) -> EncodedProof {
    encode_with(p, Dialect::PercentConc, true)
}

fn encode_with(p: &ProofDag, dialect: Dialect, omit_root_marker: bool) -> EncodedProof {
    let mut e = Encoder {
        dialect,
        omit_root_marker,
        tokens: Vec::new(),
        concs: Vec::new(),
        nafs: Vec::new(),
    };
    e.node(&p.root);
    let mut bindings = e.concs;
    bindings.extend(e.nafs);
    EncodedProof {
        body: e.tokens.join(" "),
        bindings,
    }
}

/// Encode an optional proof; `None` becomes the literal string "None".
pub fn encode_optional(p: Option<&ProofDag>, dialect: Dialect) -> String {
    match p {
        Some(p) => encode_proof(p, dialect).to_string(),
        None => "None".to_string(),
    }
}

enum Raw {
    Leaf(String),
    Rule { rule: String, conc: Option<String>, body: Box<Raw> },
    And(Box<Raw>, Box<Raw>),
}

struct Parser<'a> {
    tokens: Vec<&'a str>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> CodecError {
        CodecError::Malformed {
            position: self.pos,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<&str, CodecError> {
        let t = self
            .tokens
            .get(self.pos)
            .copied()
            .ok_or_else(|| self.err("unexpected end of proof"))?;
        self.pos += 1;
        Ok(t)
    }

    fn node(&mut self, nesting: usize) -> Result<Raw, CodecError> {
        if nesting > MAX_NESTING {
            return Err(self.err("proof nested too deeply"));
        }
        match self.next()? {
            "&" => {
                let a = self.node(nesting + 1)?;
                let b = self.node(nesting + 1)?;
                Ok(Raw::And(Box::new(a), Box::new(b)))
            }
            "#" => {
                let tok = self.next()?.to_string();
                if tok == "&" || tok == "#" {
                    return Err(self.err("expected a rule id after `#`"));
                }
                let (rule, conc) = match tok.find(['%', '@']) {
                    Some(i) => (tok[..i].to_string(), Some(tok[i + 1..].to_string())),
                    None => (tok, None),
                };
                let body = self.node(nesting + 1)?;
                Ok(Raw::Rule {
                    rule,
                    conc,
                    body: Box::new(body),
                })
            }
            leaf => Ok(Raw::Leaf(leaf.to_string())),
        }
    }
}

struct Resolver<'a> {
    theory: &'a Theory,
    bindings: BTreeMap<SentenceId, &'a str>,
}

fn parse_id(s: &str) -> Result<SentenceId, CodecError> {
    s.parse()
        .map_err(|_| CodecError::UnknownSentenceId(s.to_string()))
}

impl Resolver<'_> {
    fn binding(&self, id: SentenceId) -> Result<Literal, CodecError> {
        let text = self
            .bindings
            .get(&id)
            .ok_or(CodecError::UnboundIntermediate(id))?;
        parse_fact(text).map_err(|_| CodecError::BadBindingText {
            id,
            text: text.to_string(),
        })
    }

    fn flatten<'r>(raw: &'r Raw, out: &mut Vec<&'r Raw>) {
        match raw {
            Raw::And(a, b) => {
                Self::flatten(a, out);
                Self::flatten(b, out);
            }
            other => out.push(other),
        }
    }

    fn node(&self, raw: &Raw) -> Result<ProofNode, CodecError> {
        match raw {
            Raw::Leaf(tok) => {
                let id = parse_id(tok)?;
                match id.namespace {
                    Namespace::Naf => {
                        let lit = self.binding(id)?;
                        // Accept both the assumed-false sentence and its negation.
                        let literal = if lit.is_positive() { lit.negated() } else { lit };
                        Ok(ProofNode::Naf { literal })
                    }
                    Namespace::Conc | Namespace::Int => Err(CodecError::Malformed {
                        position: 0,
                        message: format!("`{tok}` used as a leaf; intermediates must be derived in place"),
                    }),
                    _ => {
                        let fact = self
                            .theory
                            .fact(id)
                            .ok_or_else(|| CodecError::UnknownSentenceId(tok.clone()))?;
                        Ok(ProofNode::Fact {
                            id,
                            literal: fact.literal.clone(),
                        })
                    }
                }
            }
            Raw::And(..) => Err(CodecError::Malformed {
                position: 0,
                message: "`&` outside a rule antecedent".into(),
            }),
            Raw::Rule { rule, conc, body } => {
                let rule_id = parse_id(rule)?;
                let r = self
                    .theory
                    .rule(rule_id)
                    .ok_or_else(|| CodecError::UnknownSentenceId(rule.clone()))?;
                let mut parts = Vec::new();
                Self::flatten(body, &mut parts);
                let conditions = parts
                    .into_iter()
                    .map(|p| self.node(p))
                    .collect::<Result<Vec<_>, _>>()?;
                let literal = match conc {
                    Some(c) => {
                        let cid = parse_id(c)?;
                        if !matches!(cid.namespace, Namespace::Conc | Namespace::Int) {
                            return Err(CodecError::Malformed {
                                position: 0,
                                message: format!("`{c}` is not a conc/int id"),
                            });
                        }
                        self.binding(cid)?
                    }
                    None => {
                        let lits: Vec<Literal> =
                            conditions.iter().map(|c| c.literal().clone()).collect();
                        apply_rule(r, &lits).ok_or_else(|| CodecError::Malformed {
                            position: 0,
                            message: format!("cannot infer the conclusion of `{rule}`"),
                        })?
                    }
                };
                Ok(ProofNode::Derived {
                    rule: rule_id,
                    literal,
                    conditions,
                })
            }
        }
    }
}

/// Decode a proof string against `t`. "None" decodes to `Ok(None)`.
pub fn decode_proof(s: &str, t: &Theory) -> Result<Option<ProofDag>, CodecError> {
    if s.trim() == "None" {
        return Ok(None);
    }
    let e: EncodedProof = s.parse()?;
    decode_encoded(&e, t).map(Some)
}

pub fn decode_encoded(e: &EncodedProof, t: &Theory) -> Result<ProofDag, CodecError> {
    let mut p = Parser {
        tokens: e.body.split_whitespace().collect(),
        pos: 0,
    };
    if p.tokens.is_empty() {
        return Err(p.err("empty proof"));
    }
    let raw = p.node(0)?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing tokens after proof"));
    }
    let r = Resolver {
        theory: t,
        bindings: e.bindings.iter().map(|(id, s)| (*id, s.as_str())).collect(),
    };
    Ok(ProofDag::new(r.node(&raw)?))
}

/// Encode a depth-1 step as `# rule cond1 cond2 ...` style (the rule token
/// carries no conclusion marker; the implication is given separately).
pub fn encode_step(rule: SentenceId, conditions: &[String]) -> String {
    let mut tokens = vec!["#".to_string(), rule.to_string()];
    for _ in 1..conditions.len() {
        tokens.push("&".into());
    }
    tokens.extend(conditions.iter().cloned());
    tokens.join(" ")
}

/// Split a step proof into its rule id and condition tokens.
pub fn decode_step(s: &str) -> Result<(SentenceId, Vec<String>), CodecError> {
    let e: EncodedProof = s.parse()?;
    let mut p = Parser {
        tokens: e.body.split_whitespace().collect(),
        pos: 0,
    };
    let raw = p.node(0)?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing tokens after step"));
    }
    let Raw::Rule { rule, body, .. } = raw else {
        return Err(CodecError::Malformed {
            position: 0,
            message: "a step must start with `#`".into(),
        });
    };
    let mut parts = Vec::new();
    Resolver::flatten(&body, &mut parts);
    let conds = parts
        .into_iter()
        .map(|r| match r {
            Raw::Leaf(s) => Ok(s.clone()),
            _ => Err(CodecError::Malformed {
                position: 0,
                message: "a step's conditions must be ids".into(),
            }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((parse_id(&rule)?, conds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse_context, parse_question};
    use crate::model::Mode;
    use crate::proofs::{all_proofs, shortest_proofs, DEFAULT_PROOF_CAP};

    const C1: &str = "sent1: The tiger chases the lion. sent2: The lion is not big. sent3: If something visits the dog and it is kind then it visits the mouse. sent4: The dog chases the lion. sent5: If something is big then it visits the dog. sent6: The tiger eats the dog. sent7: If something visits the tiger and the tiger is not red then it is not nice. sent8: If something chases the dog then it is not red. sent9: The mouse does not chase the tiger. sent10: If something visits the mouse then the mouse is red. sent11: The tiger visits the lion. sent12: The tiger does not eat the mouse. sent13: The mouse is nice. sent14: The lion does not eat the tiger. sent15: If the tiger visits the dog and the dog is not big then the dog chases the mouse. sent16: The lion visits the tiger. sent17: If something chases the lion and it visits the dog then it chases the dog. sent18: The dog is nice. sent19: If something chases the lion then it is big. sent20: If something eats the lion then it is not cold.";
    const C1_PROOF: &str = "# sent7@int1 & sent16 # sent8@int2 # sent17@int3 & sent1 # sent5@int4 # sent19@int5 sent1 ; with int1: The lion is not nice. ; int2: The tiger is not red. ; int3: The tiger chases the dog. ; int4: The tiger visits the dog. ; int5: The tiger is big.";

    #[test]
    fn long_at_dialect_proof_round_trips() {
        let t = parse_context(C1, Mode::Owa).unwrap();
        let q = parse_question("The lion is not nice?").unwrap();
        let ps = all_proofs(&t, &q, DEFAULT_PROOF_CAP).unwrap();
        let best = shortest_proofs(&ps.proofs);
        assert_eq!(best.len(), 1);
        assert_eq!(encode_proof(&best[0], Dialect::AtInt).to_string(), C1_PROOF);
        let back = decode_proof(C1_PROOF, &t).unwrap().unwrap();
        assert_eq!(back.canonical(), best[0].canonical());
        assert_eq!(back.depth(), 5);
    }

    #[test]
    fn none_and_bare_facts() {
        let t = parse_context(C1, Mode::Owa).unwrap();
        assert_eq!(decode_proof("None", &t).unwrap(), None);
        let p = decode_proof("sent13", &t).unwrap().unwrap();
        assert_eq!(p.depth(), 0);
        assert_eq!(encode_proof(&p, Dialect::PercentConc).to_string(), "sent13");
    }

    #[test]
    fn decode_errors() {
        let t = parse_context(C1, Mode::Owa).unwrap();
        assert!(matches!(
            decode_proof("# sent8@int1 sent99 ; with int1: The tiger is not red.", &t),
            Err(CodecError::UnknownSentenceId(_))
        ));
        assert!(matches!(
            decode_proof("# sent19@int1 sent1", &t),
            Err(CodecError::UnboundIntermediate(_))
        ));
        assert!(matches!(
            decode_proof("# sent19@int1", &t),
            Err(CodecError::Malformed { .. })
        ));
        assert!(matches!(
            decode_proof("sent1 sent2", &t),
            Err(CodecError::Malformed { .. })
        ));
    }

    #[test]
    fn missing_conclusion_marker_is_inferred() {
        let t = parse_context(C1, Mode::Owa).unwrap();
        let p = decode_proof("# sent19 sent1", &t).unwrap().unwrap();
        assert_eq!(p.conclusion().to_string(), "The tiger is big.");
    }

    #[test]
    fn step_codec() {
        assert_eq!(encode_step(SentenceId::sent(2), &["sent12".into()]), "# sent2 sent12");
        let (r, c) = decode_step("# sent1 & sent23 sent11").unwrap();
        assert_eq!(r, SentenceId::sent(1));
        assert_eq!(c, vec!["sent23".to_string(), "sent11".to_string()]);
    }
}
