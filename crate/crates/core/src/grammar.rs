//! Templated English for facts, rules and contexts.
//!
//! The accepted language is closed; `docs/grammar.md` carries the BNF. Parsing
//! is recursive descent over a small token stream, rendering is the inverse.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    Atom, Entity, Fact, Literal, Mode, Polarity, Rule, RuleForm, Sentence, SentenceId, Term,
    Theory, TheoryError, VarNoun,
};

/// Irregular or common verbs with their third-person singular forms.
const VERB_FORMS: &[(&str, &str)] = &[
    ("chase", "chases"),
    ("visit", "visits"),
    ("eat", "eats"),
    ("see", "sees"),
    ("like", "likes"),
    ("need", "needs"),
];

/// Multi-word nouns the parser must keep together after `the`.
const KNOWN_NOUNS: &[&str] = &[
    "bald eagle",
    "bear",
    "cat",
    "cow",
    "dog",
    "lion",
    "mouse",
    "rabbit",
    "squirrel",
    "tiger",
];

const RESERVED: &[&str] = &[
    "if", "then", "and", "all", "is", "are", "not", "does", "do", "the", "someone", "something",
    "it", "they", "them", "people", "things",
];

pub fn third_person(verb: &str) -> String {
    VERB_FORMS
        .iter()
        .find(|(base, _)| *base == verb)
        .map(|(_, s)| s.to_string())
        .unwrap_or_else(|| format!("{verb}s"))
}

fn base_form(word: &str) -> String {
    if let Some((base, _)) = VERB_FORMS.iter().find(|(_, s)| *s == word) {
        return base.to_string();
    }
    if VERB_FORMS.iter().any(|(b, _)| *b == word) {
        return word.to_string();
    }
    match word.strip_suffix('s') {
        Some(stem) if !stem.is_empty() => stem.to_string(),
        _ => word.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum World {
    People,
    Animals,
}

/// Vocabulary for one world. Rendering is world-independent; the profile
/// drives generation and pronoun choice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrammarProfile {
    pub world: World,
    pub entities: Vec<String>,
    pub attributes: Vec<String>,
    pub verbs: Vec<String>,
}

impl GrammarProfile {
    pub fn people() -> Self {
        GrammarProfile {
            world: World::People,
            entities: ["Anne", "Bob", "Charlie", "Dave", "Erin", "Fiona", "Gary", "Harry"]
                .map(String::from)
                .to_vec(),
            attributes: [
                "big", "blue", "cold", "furry", "green", "kind", "nice", "quiet", "red", "rough",
                "round", "smart", "white", "young",
            ]
            .map(String::from)
            .to_vec(),
            verbs: Vec::new(),
        }
    }

    pub fn animals() -> Self {
        GrammarProfile {
            world: World::Animals,
            entities: KNOWN_NOUNS.iter().map(|n| format!("the {n}")).collect(),
            attributes: [
                "big", "blue", "cold", "green", "kind", "nice", "red", "rough", "round", "young",
            ]
            .map(String::from)
            .to_vec(),
            verbs: VERB_FORMS.iter().map(|(b, _)| b.to_string()).collect(),
        }
    }

    pub fn for_world(world: World) -> Self {
        match world {
            World::People => Self::people(),
            World::Animals => Self::animals(),
        }
    }

    pub fn var_noun(&self) -> VarNoun {
        match self.world {
            World::People => VarNoun::Someone,
            World::Animals => VarNoun::Something,
        }
    }
}

/// An identified sentence as it appears in a context string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSentence {
    pub id: SentenceId,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" | "),
            if self.found.is_empty() {
                "end of input"
            } else {
                &self.found
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("literal `{0:?}` cannot be rendered")]
    UnrenderableLiteral(Literal),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("text before the first sentence id at byte {0}")]
    MissingId(usize),
    #[error("sentence {id}: {source}")]
    Parse { id: SentenceId, source: ParseError },
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// Parsed body of one sentence, before an id is attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SentenceBody {
    Fact(Literal),
    Rule {
        conditions: Vec<Literal>,
        conclusion: Literal,
        form: RuleForm,
        noun: VarNoun,
    },
}

impl SentenceBody {
    pub fn with_id(self, id: SentenceId) -> Sentence {
        match self {
            SentenceBody::Fact(literal) => Sentence::Fact(Fact { id, literal }),
            SentenceBody::Rule {
                conditions,
                conclusion,
                form,
                noun,
            } => Sentence::Rule(Rule {
                id,
                conditions,
                conclusion,
                form,
                noun,
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(first) => first.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

fn valid_word(w: &str) -> bool {
    !w.is_empty() && w.chars().all(|c| c.is_ascii_alphabetic() || c == '-')
}

struct Mentions {
    noun: VarNoun,
    seen: bool,
}

impl Mentions {
    fn new(noun: VarNoun) -> Self {
        Mentions { noun, seen: false }
    }

    /// Phrase for a term and whether it takes plural agreement.
    fn subject(&mut self, t: &Term) -> (String, bool) {
        match t {
            Term::Const(e) => (e.as_str().to_string(), false),
            Term::Var if !self.seen => {
                self.seen = true;
                match self.noun {
                    VarNoun::Someone => ("someone".into(), false),
                    VarNoun::Something => ("something".into(), false),
                }
            }
            Term::Var => match self.noun {
                VarNoun::Someone => ("they".into(), true),
                VarNoun::Something => ("it".into(), false),
            },
        }
    }

    fn object(&mut self, t: &Term) -> String {
        match t {
            Term::Const(e) => e.as_str().to_string(),
            Term::Var if !self.seen => {
                self.seen = true;
                match self.noun {
                    VarNoun::Someone => "someone".into(),
                    VarNoun::Something => "something".into(),
                }
            }
            Term::Var => match self.noun {
                VarNoun::Someone => "them".into(),
                VarNoun::Something => "it".into(),
            },
        }
    }
}

fn attr_phrase(attr: &str, polarity: Polarity) -> String {
    match polarity {
        Polarity::Positive => attr.to_string(),
        Polarity::Negative => format!("not {attr}"),
    }
}

/// Clause without capitalisation or final punctuation.
fn clause(lit: &Literal, m: &mut Mentions) -> String {
    match &lit.atom {
        Atom::Attribute { subject, attr } => {
            let (s, plural) = m.subject(subject);
            let be = if plural { "are" } else { "is" };
            format!("{s} {be} {}", attr_phrase(attr, lit.polarity))
        }
        Atom::Relation {
            verb,
            subject,
            object,
        } => {
            let (s, plural) = m.subject(subject);
            let o = m.object(object);
            match (lit.polarity, plural) {
                (Polarity::Positive, false) => format!("{s} {} {o}", third_person(verb)),
                (Polarity::Positive, true) => format!("{s} {verb} {o}"),
                (Polarity::Negative, false) => format!("{s} does not {verb} {o}"),
                (Polarity::Negative, true) => format!("{s} do not {verb} {o}"),
            }
        }
    }
}

/// Render a ground literal as a sentence ending in `.`; never fails.
pub(crate) fn render_literal_text(lit: &Literal) -> String {
    let mut m = Mentions::new(VarNoun::Something);
    format!("{}.", capitalize(&clause(lit, &mut m)))
}

fn check_renderable(lit: &Literal) -> Result<(), RenderError> {
    let ok = match &lit.atom {
        Atom::Attribute { attr, .. } => valid_word(attr),
        Atom::Relation { verb, .. } => valid_word(verb),
    } && lit.atom.terms().all(|t| match t {
        Term::Var => true,
        Term::Const(e) => !e.as_str().trim().is_empty(),
    });
    if ok {
        Ok(())
    } else {
        Err(RenderError::UnrenderableLiteral(lit.clone()))
    }
}

/// `Erin is young.` / `The tiger does not chase the lion.`
pub fn render_fact(lit: &Literal) -> Result<String, RenderError> {
    if !lit.is_ground() {
        return Err(RenderError::UnrenderableLiteral(lit.clone()));
    }
    check_renderable(lit)?;
    Ok(render_literal_text(lit))
}

/// Question form of a ground literal: `The lion is not nice?`
pub fn render_question(lit: &Literal) -> Result<String, RenderError> {
    let mut s = render_fact(lit)?;
    s.pop();
    s.push('?');
    Ok(s)
}

fn simple_var_attr_rule(rule: &Rule) -> bool {
    let var_attr = |l: &Literal| matches!(&l.atom, Atom::Attribute { subject: Term::Var, .. });
    rule.conditions
        .iter()
        .all(|c| var_attr(c) && c.is_positive())
        && var_attr(&rule.conclusion)
}

fn attr_name(l: &Literal) -> &str {
    match &l.atom {
        Atom::Attribute { attr, .. } => attr,
        Atom::Relation { verb, .. } => verb,
    }
}

pub fn render_rule(rule: &Rule) -> Result<String, RenderError> {
    for l in rule.conditions.iter().chain(std::iter::once(&rule.conclusion)) {
        check_renderable(l)?;
    }
    let class = match rule.noun {
        VarNoun::Someone => "people",
        VarNoun::Something => "things",
    };
    if rule.form != RuleForm::IfThen && simple_var_attr_rule(rule) {
        let attrs: Vec<&str> = rule.conditions.iter().map(attr_name).collect();
        let tail = format!(
            "{class} are {}.",
            attr_phrase(attr_name(&rule.conclusion), rule.conclusion.polarity)
        );
        return Ok(match rule.form {
            RuleForm::All => format!("All {} {tail}", attrs.join(", ")),
            _ => format!("{} {tail}", capitalize(&attrs.join(", "))),
        });
    }

    let mut m = Mentions::new(rule.noun);
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < rule.conditions.len() {
        let c = &rule.conditions[i];
        let mut text = clause(c, &mut m);
        if let Atom::Attribute { subject, .. } = &c.atom {
            // Consecutive attribute conditions on one subject share the verb.
            while let Some(next) = rule.conditions.get(i + 1) {
                match &next.atom {
                    Atom::Attribute {
                        subject: s2,
                        attr: a2,
                    } if s2 == subject => {
                        text.push_str(" and ");
                        text.push_str(&attr_phrase(a2, next.polarity));
                        i += 1;
                    }
                    _ => break,
                }
            }
        }
        parts.push(text);
        i += 1;
    }
    let concl = clause(&rule.conclusion, &mut m);
    Ok(format!("If {} then {concl}.", parts.join(" and ")))
}

pub fn render_sentence(s: &Sentence) -> Result<String, RenderError> {
    match s {
        Sentence::Fact(f) => render_fact(&f.literal),
        Sentence::Rule(r) => render_rule(r),
    }
}

/// Sentences of a theory with their rendered text, in theory order.
pub fn render_theory(t: &Theory) -> Result<Vec<SurfaceSentence>, RenderError> {
    t.sentences()
        .iter()
        .map(|s| {
            Ok(SurfaceSentence {
                id: s.id(),
                text: render_sentence(s)?,
            })
        })
        .collect()
}

/// `sent1: ... sent2: ...`
pub fn join_context(sentences: &[SurfaceSentence]) -> String {
    sentences
        .iter()
        .map(|s| format!("{}: {}", s.id, s.text))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_context(t: &Theory) -> Result<String, RenderError> {
    Ok(join_context(&render_theory(t)?))
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    offset: usize,
}

fn tokenize(s: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in s.char_indices() {
        let word = ch.is_alphanumeric() || ch == '-' || ch == '\'';
        if word {
            if start.is_none() {
                start = Some(i);
            }
            continue;
        }
        if let Some(st) = start.take() {
            out.push(Token {
                text: &s[st..i],
                offset: st,
            });
        }
        if !ch.is_whitespace() {
            out.push(Token {
                text: &s[i..i + ch.len_utf8()],
                offset: i,
            });
        }
    }
    if let Some(st) = start {
        out.push(Token {
            text: &s[st..],
            offset: st,
        });
    }
    out
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token<'a>>,
    pos: usize,
    noun: Option<VarNoun>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            toks: tokenize(src),
            pos: 0,
            noun: None,
        }
    }

    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|t| t.text)
    }

    fn peek_at(&self, k: usize) -> Option<&str> {
        self.toks.get(self.pos + k).map(|t| t.text)
    }

    fn peek_lower(&self) -> Option<String> {
        self.peek().map(str::to_ascii_lowercase)
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (offset, found) = match self.toks.get(self.pos) {
            Some(t) => (t.offset, t.text.to_string()),
            None => (self.src.len(), String::new()),
        };
        ParseError {
            offset,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.peek_lower().as_deref() == Some(w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{w}`")]))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn is_lower_word(w: &str) -> bool {
        w.chars().next().is_some_and(|c| c.is_ascii_lowercase())
            && w.chars().all(|c| c.is_ascii_alphabetic() || c == '-')
    }

    fn is_name(w: &str) -> bool {
        w.chars().next().is_some_and(|c| c.is_ascii_uppercase())
            && w.chars().all(|c| c.is_ascii_alphabetic() || c == '-' || c == '\'')
            && !RESERVED.contains(&w.to_ascii_lowercase().as_str())
    }

    fn set_noun(&mut self, n: VarNoun) {
        if self.noun.is_none() {
            self.noun = Some(n);
        }
    }

    fn attribute(&mut self) -> PResult<String> {
        match self.peek() {
            Some(w) if Self::is_lower_word(w) && !RESERVED.contains(&w) => {
                let a = w.to_string();
                self.pos += 1;
                Ok(a)
            }
            _ => Err(self.error(&["attribute"])),
        }
    }

    /// `the <noun>` with longest match against known multi-word nouns.
    fn the_phrase(&mut self) -> PResult<Entity> {
        self.expect_word("the")?;
        let mut best: Option<(usize, String)> = None;
        for noun in KNOWN_NOUNS {
            let words: Vec<&str> = noun.split(' ').collect();
            let matches = words
                .iter()
                .enumerate()
                .all(|(k, w)| self.peek_at(k).map(str::to_ascii_lowercase).as_deref() == Some(*w));
            if matches && best.as_ref().is_none_or(|(n, _)| words.len() > *n) {
                best = Some((words.len(), noun.to_string()));
            }
        }
        if let Some((n, noun)) = best {
            self.pos += n;
            return Ok(Entity::new(format!("the {noun}")));
        }
        match self.peek() {
            Some(w) if Self::is_lower_word(w) && !RESERVED.contains(&w) => {
                let e = Entity::new(format!("the {w}"));
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.error(&["noun"])),
        }
    }

    fn entity(&mut self) -> PResult<Entity> {
        match self.peek() {
            Some(w) if w.eq_ignore_ascii_case("the") => self.the_phrase(),
            Some(w) if Self::is_name(w) => {
                let e = Entity::new(w);
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.error(&["entity"])),
        }
    }

    /// Subject of a rule clause; returns the term and whether it is plural.
    fn rule_subject(&mut self) -> PResult<(Term, bool)> {
        match self.peek_lower().as_deref() {
            Some("someone") => {
                self.pos += 1;
                self.set_noun(VarNoun::Someone);
                Ok((Term::Var, false))
            }
            Some("something") => {
                self.pos += 1;
                self.set_noun(VarNoun::Something);
                Ok((Term::Var, false))
            }
            Some("it") => {
                self.pos += 1;
                self.set_noun(VarNoun::Something);
                Ok((Term::Var, false))
            }
            Some("they") => {
                self.pos += 1;
                self.set_noun(VarNoun::Someone);
                Ok((Term::Var, true))
            }
            _ => Ok((Term::Const(self.entity()?), false)),
        }
    }

    fn object(&mut self, allow_var: bool) -> PResult<Term> {
        if allow_var {
            match self.peek_lower().as_deref() {
                Some("someone") | Some("them") => {
                    self.pos += 1;
                    self.set_noun(VarNoun::Someone);
                    return Ok(Term::Var);
                }
                Some("something") | Some("it") => {
                    self.pos += 1;
                    self.set_noun(VarNoun::Something);
                    return Ok(Term::Var);
                }
                _ => {}
            }
        }
        Ok(Term::Const(self.entity()?))
    }

    fn starts_subject(&self, k: usize) -> bool {
        match self.peek_at(k) {
            Some(w) => {
                let l = w.to_ascii_lowercase();
                matches!(l.as_str(), "someone" | "something" | "it" | "they" | "the")
                    || Self::is_name(w)
            }
            None => false,
        }
    }

    /// Verb phrase after a subject. With `conjunction`, `is a and not b`
    /// yields several literals over the same subject.
    fn verb_phrase(
        &mut self,
        subject: Term,
        allow_var: bool,
        conjunction: bool,
    ) -> PResult<Vec<Literal>> {
        let word = self.peek_lower();
        match word.as_deref() {
            Some("is") | Some("are") => {
                self.pos += 1;
                let mut out = Vec::new();
                loop {
                    let neg = self.eat_word("not");
                    let attr = self.attribute()?;
                    let atom = Atom::attribute(subject.clone(), &attr);
                    out.push(if neg {
                        Literal::negative(atom)
                    } else {
                        Literal::positive(atom)
                    });
                    let continues = conjunction
                        && self.peek_lower().as_deref() == Some("and")
                        && !self.starts_subject(1);
                    if continues {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                Ok(out)
            }
            Some("does") | Some("do") => {
                self.pos += 1;
                self.expect_word("not")?;
                let verb = match self.peek() {
                    Some(w) if Self::is_lower_word(w) && !RESERVED.contains(&w) => w.to_string(),
                    _ => return Err(self.error(&["verb"])),
                };
                self.pos += 1;
                let object = self.object(allow_var)?;
                Ok(vec![Literal::negative(Atom::relation(
                    &base_form(&verb),
                    subject,
                    object,
                ))])
            }
            Some(w) if Self::is_lower_word(w) && !RESERVED.contains(&w) => {
                let verb = base_form(w);
                self.pos += 1;
                let object = self.object(allow_var)?;
                Ok(vec![Literal::positive(Atom::relation(&verb, subject, object))])
            }
            _ => Err(self.error(&["`is`", "`does not`", "verb"])),
        }
    }

    fn end(&mut self, question: bool) -> PResult<()> {
        let ok = match self.peek() {
            Some(".") => true,
            Some("?") => question,
            _ => false,
        };
        if !ok {
            return Err(self.error(if question { &["`.`", "`?`"] } else { &["`.`"] }));
        }
        self.pos += 1;
        if !self.at_end() {
            return Err(self.error(&["end of sentence"]));
        }
        Ok(())
    }

    fn ground_literal(&mut self, question: bool) -> PResult<Literal> {
        let subject = Term::Const(self.entity()?);
        let mut lits = self.verb_phrase(subject, false, false)?;
        self.end(question)?;
        Ok(lits.remove(0))
    }

    /// Lookahead for `Attr(, attr)* (people|things)`.
    fn looks_plural(&self) -> bool {
        let mut k = 0;
        loop {
            match self.peek_at(k) {
                Some(w) if w.chars().all(|c| c.is_ascii_alphabetic()) => {}
                _ => return false,
            }
            match self.peek_at(k + 1).map(str::to_ascii_lowercase).as_deref() {
                Some(",") => k += 2,
                Some("people") | Some("things") => return true,
                _ => return false,
            }
        }
    }

    fn class_rule(&mut self, form: RuleForm) -> PResult<SentenceBody> {
        let mut attrs = vec![self.attribute_any_case()?];
        while self.peek() == Some(",") {
            self.pos += 1;
            attrs.push(self.attribute()?);
        }
        let noun = match self.peek_lower().as_deref() {
            Some("people") => VarNoun::Someone,
            Some("things") => VarNoun::Something,
            _ => return Err(self.error(&["`people`", "`things`", "`,`"])),
        };
        self.pos += 1;
        self.expect_word("are")?;
        let neg = self.eat_word("not");
        let concl_attr = self.attribute()?;
        self.end(false)?;
        let conditions = attrs
            .iter()
            .map(|a| Literal::positive(Atom::attribute(Term::Var, a)))
            .collect();
        let atom = Atom::attribute(Term::Var, &concl_attr);
        Ok(SentenceBody::Rule {
            conditions,
            conclusion: if neg {
                Literal::negative(atom)
            } else {
                Literal::positive(atom)
            },
            form,
            noun,
        })
    }

    fn attribute_any_case(&mut self) -> PResult<String> {
        match self.peek() {
            Some(w)
                if w.chars().all(|c| c.is_ascii_alphabetic())
                    && !RESERVED.contains(&w.to_ascii_lowercase().as_str()) =>
            {
                let a = w.to_ascii_lowercase();
                self.pos += 1;
                Ok(a)
            }
            _ => Err(self.error(&["attribute"])),
        }
    }

    fn if_rule(&mut self) -> PResult<SentenceBody> {
        self.expect_word("if")?;
        let mut conditions = Vec::new();
        loop {
            let (subject, _) = self.rule_subject()?;
            conditions.extend(self.verb_phrase(subject, true, true)?);
            if self.eat_word("and") {
                continue;
            }
            if self.eat_word("then") {
                break;
            }
            return Err(self.error(&["`and`", "`then`"]));
        }
        let (subject, _) = self.rule_subject()?;
        let mut concl = self.verb_phrase(subject, true, false)?;
        self.end(false)?;
        Ok(SentenceBody::Rule {
            conditions,
            conclusion: concl.remove(0),
            form: RuleForm::IfThen,
            noun: self.noun.unwrap_or_default(),
        })
    }

    fn sentence(&mut self) -> PResult<SentenceBody> {
        match self.peek_lower().as_deref() {
            None => Err(self.error(&["sentence"])),
            Some("if") => self.if_rule(),
            Some("all") => {
                self.pos += 1;
                self.class_rule(RuleForm::All)
            }
            _ if self.looks_plural() => self.class_rule(RuleForm::Plural),
            _ => Ok(SentenceBody::Fact(self.ground_literal(false)?)),
        }
    }
}

/// Parse one theory sentence (fact or rule).
pub fn parse_sentence(s: &str) -> Result<SentenceBody, ParseError> {
    Parser::new(s).sentence()
}

/// Parse a ground fact sentence ending in `.`.
pub fn parse_fact(s: &str) -> Result<Literal, ParseError> {
    Parser::new(s).ground_literal(false)
}

/// Parse a question (`Bob is big?`); a final `.` is also accepted.
pub fn parse_question(s: &str) -> Result<Literal, ParseError> {
    Parser::new(s).ground_literal(true)
}

fn id_token(tok: &str) -> Option<SentenceId> {
    tok.strip_suffix(':').and_then(|t| t.parse().ok())
}

/// Split `id: text id: text ...` into surface sentences without parsing them.
pub fn split_context(ctx: &str) -> Result<Vec<SurfaceSentence>, ContextError> {
    let mut out: Vec<SurfaceSentence> = Vec::new();
    let mut current: Option<(SentenceId, usize)> = None;
    let mut offset = 0;
    let bytes = ctx.as_bytes();
    while offset < ctx.len() {
        while offset < ctx.len() && bytes[offset].is_ascii_whitespace() {
            offset += 1;
        }
        if offset >= ctx.len() {
            break;
        }
        let start = offset;
        while offset < ctx.len() && !bytes[offset].is_ascii_whitespace() {
            offset += 1;
        }
        let tok = &ctx[start..offset];
        if let Some(id) = id_token(tok) {
            if let Some((prev, text_start)) = current.take() {
                out.push(SurfaceSentence {
                    id: prev,
                    text: ctx[text_start..start].trim().to_string(),
                });
            }
            current = Some((id, offset));
        } else if current.is_none() {
            return Err(ContextError::MissingId(start));
        }
    }
    if let Some((prev, text_start)) = current {
        out.push(SurfaceSentence {
            id: prev,
            text: ctx[text_start..].trim().to_string(),
        });
    }
    Ok(out)
}

pub fn parse_surface(sentences: &[SurfaceSentence], mode: Mode) -> Result<Theory, ContextError> {
    let mut parsed = Vec::with_capacity(sentences.len());
    for s in sentences {
        let body = parse_sentence(&s.text).map_err(|source| ContextError::Parse {
            id: s.id,
            source,
        })?;
        parsed.push(body.with_id(s.id));
    }
    Ok(Theory::new(parsed, mode)?)
}

/// Parse a full context string into a theory with the given semantics.
pub fn parse_context(ctx: &str, mode: Mode) -> Result<Theory, ContextError> {
    parse_surface(&split_context(ctx)?, mode)
}
