//! Domain types for rule theories: entities, atoms, literals, facts, rules and
//! the theory container itself.
//!
//! Every theory sentence carries a [`SentenceId`]. Proof-only namespaces
//! (`naf`, `conc`, `int`) are rejected when building a [`Theory`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Namespace {
    Sent,
    Fact,
    Rule,
    Triple,
    Naf,
    Conc,
    Int,
}

impl Namespace {
    pub const ALL: [Namespace; 7] = [
        Namespace::Sent,
        Namespace::Fact,
        Namespace::Rule,
        Namespace::Triple,
        Namespace::Naf,
        Namespace::Conc,
        Namespace::Int,
    ];

    pub fn prefix(self) -> &'static str {
        match self {
            Namespace::Sent => "sent",
            Namespace::Fact => "fact",
            Namespace::Rule => "rule",
            Namespace::Triple => "triple",
            Namespace::Naf => "naf",
            Namespace::Conc => "conc",
            Namespace::Int => "int",
        }
    }

    /// Namespaces that only ever name proof nodes, never theory sentences.
    pub fn is_proof_only(self) -> bool {
        matches!(self, Namespace::Naf | Namespace::Conc | Namespace::Int)
    }
}

/// Identifier of a sentence, e.g. `sent3`, `triple1`, `conc2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SentenceId {
    pub namespace: Namespace,
    pub index: u32,
}

impl SentenceId {
    pub fn new(namespace: Namespace, index: u32) -> Self {
        SentenceId { namespace, index }
    }

    pub fn sent(index: u32) -> Self {
        SentenceId::new(Namespace::Sent, index)
    }
}

impl fmt::Display for SentenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.namespace.prefix(), self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid sentence id `{0}`")]
pub struct InvalidSentenceId(pub String);

impl FromStr for SentenceId {
    type Err = InvalidSentenceId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        for ns in Namespace::ALL {
            if let Some(rest) = s.strip_prefix(ns.prefix()) {
                if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                    return match rest.parse::<u32>() {
                        Ok(index) if index > 0 => Ok(SentenceId::new(ns, index)),
                        _ => Err(InvalidSentenceId(s.to_string())),
                    };
                }
            }
        }
        Err(InvalidSentenceId(s.to_string()))
    }
}

impl Serialize for SentenceId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SentenceId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An individual such as `Bob` or `the bald eagle`.
///
/// Names are stored in their mid-sentence form: proper names keep their
/// capital, `the ...` phrases are lowercase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Entity(String);

impl Entity {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        debug_assert!(!name.trim().is_empty());
        Entity(name)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Argument position of an atom. Rules have at most one variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Term {
    Var,
    Const(Entity),
}

impl Term {
    pub fn constant(name: &str) -> Self {
        Term::Const(Entity::new(name))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var)
    }

    fn bind(&self, value: &Entity) -> Term {
        match self {
            Term::Var => Term::Const(value.clone()),
            c => c.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Atom {
    /// `<subject> is <attr>`
    Attribute { subject: Term, attr: String },
    /// `<subject> <verb>s <object>`; `verb` is the base form (`chase`).
    Relation {
        verb: String,
        subject: Term,
        object: Term,
    },
}

/// The predicate symbol of an atom, used for stratification.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Predicate {
    Attribute(String),
    Verb(String),
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Attribute(a) => write!(f, "is {a}"),
            Predicate::Verb(v) => f.write_str(v),
        }
    }
}

impl Atom {
    pub fn attribute(subject: Term, attr: &str) -> Self {
        Atom::Attribute {
            subject,
            attr: attr.to_string(),
        }
    }

    pub fn relation(verb: &str, subject: Term, object: Term) -> Self {
        Atom::Relation {
            verb: verb.to_string(),
            subject,
            object,
        }
    }

    pub fn predicate(&self) -> Predicate {
        match self {
            Atom::Attribute { attr, .. } => Predicate::Attribute(attr.clone()),
            Atom::Relation { verb, .. } => Predicate::Verb(verb.clone()),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let (a, b) = match self {
            Atom::Attribute { subject, .. } => (subject, None),
            Atom::Relation {
                subject, object, ..
            } => (subject, Some(object)),
        };
        std::iter::once(a).chain(b)
    }

    pub fn has_var(&self) -> bool {
        self.terms().any(Term::is_var)
    }

    pub fn bind(&self, value: &Entity) -> Atom {
        match self {
            Atom::Attribute { subject, attr } => Atom::Attribute {
                subject: subject.bind(value),
                attr: attr.clone(),
            },
            Atom::Relation {
                verb,
                subject,
                object,
            } => Atom::Relation {
                verb: verb.clone(),
                subject: subject.bind(value),
                object: object.bind(value),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// A possibly negated atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub atom: Atom,
    pub polarity: Polarity,
}

impl Literal {
    pub fn positive(atom: Atom) -> Self {
        Literal {
            atom,
            polarity: Polarity::Positive,
        }
    }

    pub fn negative(atom: Atom) -> Self {
        Literal {
            atom,
            polarity: Polarity::Negative,
        }
    }

    /// Ground attribute literal, e.g. `Literal::attr("Bob", "big", true)`.
    pub fn attr(entity: &str, attr: &str, positive: bool) -> Self {
        let atom = Atom::attribute(Term::constant(entity), attr);
        if positive {
            Literal::positive(atom)
        } else {
            Literal::negative(atom)
        }
    }

    /// Ground relation literal, e.g. `Literal::rel("the tiger", "chase", "the lion", true)`.
    pub fn rel(subject: &str, verb: &str, object: &str, positive: bool) -> Self {
        let atom = Atom::relation(verb, Term::constant(subject), Term::constant(object));
        if positive {
            Literal::positive(atom)
        } else {
            Literal::negative(atom)
        }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.polarity == Polarity::Negative
    }

    pub fn is_ground(&self) -> bool {
        !self.atom.has_var()
    }

    pub fn has_var(&self) -> bool {
        self.atom.has_var()
    }

    pub fn predicate(&self) -> Predicate {
        self.atom.predicate()
    }

    pub fn negated(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            polarity: self.polarity.flip(),
        }
    }

    /// The positive literal over the same atom.
    pub fn positive_form(&self) -> Literal {
        Literal::positive(self.atom.clone())
    }

    pub fn bind(&self, value: &Entity) -> Literal {
        Literal {
            atom: self.atom.bind(value),
            polarity: self.polarity,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::grammar::render_literal_text(self))
    }
}

/// Flip the polarity of a question. This is an involution.
pub fn negate_question(q: &Literal) -> Literal {
    debug_assert!(q.is_ground());
    q.negated()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub id: SentenceId,
    pub literal: Literal,
}

/// Surface template a rule was written in. Logic ignores it; the grammar
/// uses it to reproduce the original sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleForm {
    /// `If ... then ...`
    #[default]
    IfThen,
    /// `All big people are kind.`
    All,
    /// `Big, round things are kind.`
    Plural,
}

/// How the rule variable is spoken: `someone`/`they`/`people` or
/// `something`/`it`/`things`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarNoun {
    Someone,
    #[default]
    Something,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub id: SentenceId,
    pub conditions: Vec<Literal>,
    pub conclusion: Literal,
    #[serde(default)]
    pub form: RuleForm,
    #[serde(default)]
    pub noun: VarNoun,
}

impl Rule {
    pub fn new(id: SentenceId, conditions: Vec<Literal>, conclusion: Literal) -> Self {
        Rule {
            id,
            conditions,
            conclusion,
            form: RuleForm::IfThen,
            noun: VarNoun::Something,
        }
    }

    pub fn with_noun(mut self, noun: VarNoun) -> Self {
        self.noun = noun;
        self
    }

    pub fn with_form(mut self, form: RuleForm) -> Self {
        self.form = form;
        self
    }

    pub fn has_var(&self) -> bool {
        self.conclusion.has_var() || self.conditions.iter().any(Literal::has_var)
    }

    /// Instantiate the rule for one binding of its variable.
    pub fn instantiate(&self, value: &Entity) -> (Vec<Literal>, Literal) {
        (
            self.conditions.iter().map(|c| c.bind(value)).collect(),
            self.conclusion.bind(value),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Sentence {
    Fact(Fact),
    Rule(Rule),
}

impl Sentence {
    pub fn id(&self) -> SentenceId {
        match self {
            Sentence::Fact(f) => f.id,
            Sentence::Rule(r) => r.id,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Closed world with negation as failure.
    #[default]
    Cwa,
    /// Open world with hard negation and three truth values.
    Owa,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Cwa => "CWA",
            Mode::Owa => "OWA",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cwa" => Ok(Mode::Cwa),
            "owa" => Ok(Mode::Owa),
            other => Err(format!("unknown mode `{other}` (expected cwa or owa)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TruthValue {
    True,
    False,
    Unknown,
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::True => "True",
            TruthValue::False => "False",
            TruthValue::Unknown => "Unknown",
        })
    }
}

impl FromStr for TruthValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "True" | "true" => Ok(TruthValue::True),
            "False" | "false" => Ok(TruthValue::False),
            "Unknown" | "unknown" => Ok(TruthValue::Unknown),
            other => Err(format!("unknown truth value `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("duplicate sentence id {0}")]
    DuplicateId(SentenceId),
    #[error("sentence id {0} uses a proof-only namespace")]
    ProofOnlyId(SentenceId),
    #[error("fact {0} is not ground")]
    NonGroundFact(SentenceId),
    #[error("rule {0} has no conditions")]
    EmptyRule(SentenceId),
    #[error("negated fact {0} is not allowed under CWA")]
    NegativeFactUnderCwa(SentenceId),
    #[error("negated conclusion in rule {0} is not allowed under CWA")]
    NegativeConclusionUnderCwa(SentenceId),
    #[error("rule {0} concludes about a variable that no usable condition binds")]
    UnboundConclusionVariable(SentenceId),
    #[error("rule {0} has a free variable that only occurs in negated conditions")]
    VariableOnlyInNegatedCondition(SentenceId),
}

/// Violations of the CWA well-formedness repairs, reported by [`lint_cwa`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LintIssue {
    NegativeFact(SentenceId),
    NegativeConclusion(SentenceId),
    VariableOnlyInNegatedCondition(SentenceId),
    /// Same literal stated under two ids; closure deduplicates it.
    DuplicateLiteral(SentenceId, SentenceId),
}

fn variable_only_negated(rule: &Rule) -> bool {
    let in_positive = rule
        .conditions
        .iter()
        .any(|c| c.is_positive() && c.has_var());
    let in_negative = rule
        .conditions
        .iter()
        .any(|c| c.is_negative() && c.has_var());
    in_negative && !in_positive
}

/// The three CWA repairs (no negated facts, no negated conclusions, no free
/// variable confined to negated conditions) plus the duplicate-literal lint.
/// Works on any sentence list so it can audit raw generator output.
pub fn lint_cwa(sentences: &[Sentence]) -> Vec<LintIssue> {
    let mut issues = Vec::new();
    let mut seen: BTreeMap<&Literal, SentenceId> = BTreeMap::new();
    for s in sentences {
        match s {
            Sentence::Fact(f) => {
                if f.literal.is_negative() {
                    issues.push(LintIssue::NegativeFact(f.id));
                }
                if let Some(first) = seen.insert(&f.literal, f.id) {
                    issues.push(LintIssue::DuplicateLiteral(first, f.id));
                }
            }
            Sentence::Rule(r) => {
                if r.conclusion.is_negative() {
                    issues.push(LintIssue::NegativeConclusion(r.id));
                }
                if variable_only_negated(r) {
                    issues.push(LintIssue::VariableOnlyInNegatedCondition(r.id));
                }
            }
        }
    }
    issues
}

/// Entities, attributes and verbs mentioned anywhere in a theory.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub entities: BTreeSet<Entity>,
    pub attributes: BTreeSet<String>,
    pub verbs: BTreeSet<String>,
}

impl Signature {
    pub fn add_literal(&mut self, lit: &Literal) {
        match &lit.atom {
            Atom::Attribute { attr, .. } => {
                self.attributes.insert(attr.clone());
            }
            Atom::Relation { verb, .. } => {
                self.verbs.insert(verb.clone());
            }
        }
        for t in lit.atom.terms() {
            if let Term::Const(e) = t {
                self.entities.insert(e.clone());
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty() && self.attributes.is_empty() && self.verbs.is_empty()
    }

    /// Every positive ground atom over the signature, as positive literals.
    /// Relations range over ordered entity pairs including self-pairs.
    pub fn ground_atoms(&self) -> Vec<Literal> {
        let mut out = Vec::new();
        for e in &self.entities {
            for a in &self.attributes {
                out.push(Literal::positive(Atom::attribute(Term::Const(e.clone()), a)));
            }
        }
        for v in &self.verbs {
            for s in &self.entities {
                for o in &self.entities {
                    out.push(Literal::positive(Atom::relation(
                        v,
                        Term::Const(s.clone()),
                        Term::Const(o.clone()),
                    )));
                }
            }
        }
        out
    }
}

/// A set of identified facts and rules under one semantics mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theory {
    sentences: Vec<Sentence>,
    mode: Mode,
}

impl Theory {
    /// Build a theory, rejecting duplicate ids and (under CWA) negated facts,
    /// negated conclusions and unsafe negated variables.
    pub fn new(sentences: Vec<Sentence>, mode: Mode) -> Result<Theory, TheoryError> {
        let mut ids = BTreeSet::new();
        for s in &sentences {
            let id = s.id();
            if id.namespace.is_proof_only() {
                return Err(TheoryError::ProofOnlyId(id));
            }
            if !ids.insert(id) {
                return Err(TheoryError::DuplicateId(id));
            }
            match s {
                Sentence::Fact(f) => {
                    if !f.literal.is_ground() {
                        return Err(TheoryError::NonGroundFact(id));
                    }
                    if mode == Mode::Cwa && f.literal.is_negative() {
                        return Err(TheoryError::NegativeFactUnderCwa(id));
                    }
                }
                Sentence::Rule(r) => {
                    if r.conditions.is_empty() {
                        return Err(TheoryError::EmptyRule(id));
                    }
                    if mode == Mode::Cwa && r.conclusion.is_negative() {
                        return Err(TheoryError::NegativeConclusionUnderCwa(id));
                    }
                    if mode == Mode::Cwa && variable_only_negated(r) {
                        return Err(TheoryError::VariableOnlyInNegatedCondition(id));
                    }
                    // Under CWA negated conditions cannot bind; under OWA they are
                    // ordinary literals and can.
                    let binds = r.conditions.iter().any(|c| {
                        c.has_var() && (mode == Mode::Owa || c.is_positive())
                    });
                    if r.conclusion.has_var() && !binds {
                        return Err(TheoryError::UnboundConclusionVariable(id));
                    }
                }
            }
        }
        Ok(Theory { sentences, mode })
    }

    pub fn empty(mode: Mode) -> Theory {
        Theory {
            sentences: Vec::new(),
            mode,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn facts(&self) -> impl Iterator<Item = &Fact> {
        self.sentences.iter().filter_map(|s| match s {
            Sentence::Fact(f) => Some(f),
            _ => None,
        })
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.sentences.iter().filter_map(|s| match s {
            Sentence::Rule(r) => Some(r),
            _ => None,
        })
    }

    pub fn get(&self, id: SentenceId) -> Option<&Sentence> {
        self.sentences.iter().find(|s| s.id() == id)
    }

    pub fn rule(&self, id: SentenceId) -> Option<&Rule> {
        match self.get(id) {
            Some(Sentence::Rule(r)) => Some(r),
            _ => None,
        }
    }

    pub fn fact(&self, id: SentenceId) -> Option<&Fact> {
        match self.get(id) {
            Some(Sentence::Fact(f)) => Some(f),
            _ => None,
        }
    }

    /// First fact id stating `lit`, if any.
    pub fn fact_id_of(&self, lit: &Literal) -> Option<SentenceId> {
        self.facts().find(|f| &f.literal == lit).map(|f| f.id)
    }

    pub fn fact_literals(&self) -> BTreeSet<Literal> {
        self.facts().map(|f| f.literal.clone()).collect()
    }

    /// A fresh id in `ns` whose index exceeds every index used in the theory.
    pub fn next_id(&self, ns: Namespace) -> SentenceId {
        let max = self.sentences.iter().map(|s| s.id().index).max().unwrap_or(0);
        SentenceId::new(ns, max + 1)
    }

    /// Copy of the theory with one extra fact appended.
    pub fn with_fact(&self, id: SentenceId, literal: Literal) -> Result<Theory, TheoryError> {
        let mut sentences = self.sentences.clone();
        sentences.push(Sentence::Fact(Fact { id, literal }));
        Theory::new(sentences, self.mode)
    }

    pub fn with_mode(&self, mode: Mode) -> Result<Theory, TheoryError> {
        Theory::new(self.sentences.clone(), mode)
    }

    pub fn lint(&self) -> Vec<LintIssue> {
        lint_cwa(&self.sentences)
    }
}

/// The exact sets of entities, attributes and verbs mentioned in `t`.
pub fn signature_of(t: &Theory) -> Signature {
    let mut sig = Signature::default();
    for s in t.sentences() {
        match s {
            Sentence::Fact(f) => sig.add_literal(&f.literal),
            Sentence::Rule(r) => {
                for c in &r.conditions {
                    sig.add_literal(c);
                }
                sig.add_literal(&r.conclusion);
            }
        }
    }
    sig
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact(i: u32, lit: Literal) -> Sentence {
        Sentence::Fact(Fact {
            id: SentenceId::sent(i),
            literal: lit,
        })
    }

    #[test]
    fn sentence_id_round_trip() {
        for s in ["sent1", "fact16", "rule18", "triple4", "naf2", "conc3", "int5"] {
            let id: SentenceId = s.parse().unwrap();
            assert_eq!(id.to_string(), s);
        }
        assert!("sent".parse::<SentenceId>().is_err());
        assert!("sent0".parse::<SentenceId>().is_err());
        assert!("foo1".parse::<SentenceId>().is_err());
        assert!("sent1x".parse::<SentenceId>().is_err());
    }

    #[test]
    fn negate_is_involution() {
        let q = Literal::attr("Bob", "big", true);
        assert_eq!(negate_question(&negate_question(&q)), q);
        assert_ne!(negate_question(&q), q);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = Theory::new(
            vec![
                fact(1, Literal::attr("Bob", "big", true)),
                fact(1, Literal::attr("Bob", "red", true)),
            ],
            Mode::Cwa,
        )
        .unwrap_err();
        assert_eq!(err, TheoryError::DuplicateId(SentenceId::sent(1)));
    }

    #[test]
    fn cwa_rejects_negative_fact_but_owa_accepts() {
        let s = vec![fact(1, Literal::attr("Bob", "big", false))];
        assert!(matches!(
            Theory::new(s.clone(), Mode::Cwa),
            Err(TheoryError::NegativeFactUnderCwa(_))
        ));
        assert!(Theory::new(s, Mode::Owa).is_ok());
    }

    #[test]
    fn cwa_rejects_variable_only_in_negated_condition() {
        // If someone is not blue then Bob is happy.
        let rule = Rule::new(
            SentenceId::sent(1),
            vec![Literal::negative(Atom::attribute(Term::Var, "blue"))],
            Literal::attr("Bob", "happy", true),
        );
        let s = vec![Sentence::Rule(rule)];
        assert_eq!(
            Theory::new(s.clone(), Mode::Cwa).unwrap_err(),
            TheoryError::VariableOnlyInNegatedCondition(SentenceId::sent(1))
        );
        assert_eq!(
            lint_cwa(&s),
            vec![LintIssue::VariableOnlyInNegatedCondition(SentenceId::sent(1))]
        );
    }

    #[test]
    fn proof_namespaces_rejected_in_theory() {
        let s = vec![Sentence::Fact(Fact {
            id: SentenceId::new(Namespace::Conc, 1),
            literal: Literal::attr("Bob", "big", true),
        })];
        assert!(matches!(
            Theory::new(s, Mode::Owa),
            Err(TheoryError::ProofOnlyId(_))
        ));
    }

    #[test]
    fn empty_signature() {
        assert!(signature_of(&Theory::empty(Mode::Cwa)).is_empty());
    }

    #[test]
    fn duplicate_literal_is_linted() {
        let s = vec![
            fact(1, Literal::attr("Bob", "big", true)),
            fact(2, Literal::attr("Bob", "big", true)),
        ];
        let t = Theory::new(s, Mode::Cwa).unwrap();
        assert_eq!(
            t.lint(),
            vec![LintIssue::DuplicateLiteral(SentenceId::sent(1), SentenceId::sent(2))]
        );
    }
}
