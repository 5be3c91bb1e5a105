//! Brute-force oracles and small random theories shared by the integration
//! tests. Nothing here calls the engine's inference code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use nlproof::grammar::{parse_context, render_context};
use nlproof::model::{
    Atom, Entity, Fact, Namespace, Rule, RuleForm, Term, VarNoun,
};
use nlproof::proofs::ProofNode;
use nlproof::{Literal, Mode, Sentence, SentenceId, Theory};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CHARLIE_QUIET: &str = "# rule18%conc1 & fact5 # rule12%conc2 # rule11%conc3 fact16 ; with conc1: Charlie is quiet. ; conc2: Charlie is young. ; conc3: Charlie is kind.";
pub const LION_PROOF: &str = "# sent7@int1 & sent16 # sent8@int2 # sent17@int3 & sent1 # sent5@int4 # sent19@int5 sent1 ; with int1: The lion is not nice. ; int2: The tiger is not red. ; int3: The tiger chases the dog. ; int4: The tiger visits the dog. ; int5: The tiger is big.";
pub const LION_IMPLICATIONS: &str = "The dog is big. The tiger is big. The dog visits the dog. The tiger visits the dog. The dog chases the dog. The tiger chases the dog. The dog is not red. The tiger is not red. The lion is not nice.";

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn fixture(name: &str, mode: Mode) -> Theory {
    let text = std::fs::read_to_string(data_path(name)).expect("fixture file");
    parse_context(&text, mode).expect("fixture parses")
}

// ---------------------------------------------------------------------------
// Grounding

#[derive(Debug, Clone)]
pub struct Instance {
    pub rule: SentenceId,
    pub conditions: Vec<Literal>,
    pub conclusion: Literal,
}

fn term_entities(l: &Literal, out: &mut BTreeSet<Entity>) {
    let terms: Vec<&Term> = match &l.atom {
        Atom::Attribute { subject, .. } => vec![subject],
        Atom::Relation { subject, object, .. } => vec![subject, object],
    };
    for t in terms {
        if let Term::Const(e) = t {
            out.insert(e.clone());
        }
    }
}

pub fn entities(t: &Theory) -> BTreeSet<Entity> {
    let mut out = BTreeSet::new();
    for s in t.sentences() {
        match s {
            Sentence::Fact(f) => term_entities(&f.literal, &mut out),
            Sentence::Rule(r) => {
                for l in r.conditions.iter().chain([&r.conclusion]) {
                    term_entities(l, &mut out);
                }
            }
        }
    }
    out
}

fn bind(l: &Literal, e: &Entity) -> Literal {
    Literal {
        atom: l.atom.bind(e),
        polarity: l.polarity,
    }
}

pub fn instances(t: &Theory) -> Vec<Instance> {
    let ents = entities(t);
    let mut out = Vec::new();
    for r in t.rules() {
        let has_var = r.conditions.iter().chain([&r.conclusion]).any(|l| l.has_var());
        if has_var {
            for e in &ents {
                out.push(Instance {
                    rule: r.id,
                    conditions: r.conditions.iter().map(|c| bind(c, e)).collect(),
                    conclusion: bind(&r.conclusion, e),
                });
            }
        } else {
            out.push(Instance {
                rule: r.id,
                conditions: r.conditions.clone(),
                conclusion: r.conclusion.clone(),
            });
        }
    }
    out
}

/// Every ground literal over the theory's entities, attributes and verbs.
pub fn ground_literals(t: &Theory) -> BTreeSet<Literal> {
    let ents: Vec<Entity> = entities(t).into_iter().collect();
    let mut attrs = BTreeSet::new();
    let mut verbs = BTreeSet::new();
    for s in t.sentences() {
        let lits: Vec<&Literal> = match s {
            Sentence::Fact(f) => vec![&f.literal],
            Sentence::Rule(r) => r.conditions.iter().chain([&r.conclusion]).collect(),
        };
        for l in lits {
            match &l.atom {
                Atom::Attribute { attr, .. } => {
                    attrs.insert(attr.clone());
                }
                Atom::Relation { verb, .. } => {
                    verbs.insert(verb.clone());
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for e in &ents {
        for a in &attrs {
            let l = Literal::positive(Atom::attribute(Term::Const(e.clone()), a));
            out.insert(l.negated());
            out.insert(l);
        }
        for v in &verbs {
            for o in &ents {
                let l = Literal::positive(Atom::relation(v, Term::Const(e.clone()), Term::Const(o.clone())));
                out.insert(l.negated());
                out.insert(l);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Naive fixpoint

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    NotStratifiable,
    Inconsistent,
}

#[derive(Debug, Clone)]
pub struct Model {
    pub mode: Mode,
    pub facts: BTreeSet<Literal>,
    pub known: BTreeSet<Literal>,
    pub depth: BTreeMap<Literal, u32>,
    pub instances: Vec<Instance>,
}

impl Model {
    pub fn implications(&self) -> BTreeSet<Literal> {
        self.known.difference(&self.facts).cloned().collect()
    }

    fn naf(&self, c: &Literal) -> bool {
        self.mode == Mode::Cwa && c.is_negative()
    }

    /// Instances whose conditions all hold in the final model.
    pub fn satisfied(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| {
            i.conditions.iter().all(|c| {
                if self.naf(c) {
                    !self.known.contains(&c.negated())
                } else {
                    self.known.contains(c)
                }
            })
        })
    }
}

fn pred_key(l: &Literal) -> String {
    match &l.atom {
        Atom::Attribute { attr, .. } => format!("a:{attr}"),
        Atom::Relation { verb, .. } => format!("v:{verb}"),
    }
}

/// Least model by repeated full passes over every ground instance; CWA is
/// evaluated stratum by stratum with strata found by relaxation.
pub fn naive_model(t: &Theory) -> Result<Model, OracleError> {
    let mode = t.mode();
    let insts = instances(t);
    let facts: BTreeSet<Literal> = t.facts().map(|f| f.literal.clone()).collect();
    let mut known = facts.clone();

    let mut level: BTreeMap<String, usize> = BTreeMap::new();
    if mode == Mode::Cwa {
        let preds: BTreeSet<String> = t
            .rules()
            .flat_map(|r| r.conditions.iter().chain([&r.conclusion]).map(pred_key).collect::<Vec<_>>())
            .collect();
        for p in &preds {
            level.insert(p.clone(), 0);
        }
        let mut rounds = 0;
        loop {
            let mut changed = false;
            for r in t.rules() {
                let k = pred_key(&r.conclusion);
                for c in &r.conditions {
                    let need = level[&pred_key(c)] + usize::from(c.is_negative());
                    if level[&k] < need {
                        level.insert(k.clone(), need);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
            rounds += 1;
            if rounds > preds.len() + 1 {
                return Err(OracleError::NotStratifiable);
            }
        }
    }
    let top = level.values().copied().max().unwrap_or(0);
    for s in 0..=top {
        loop {
            let mut changed = false;
            for i in &insts {
                if mode == Mode::Cwa && level[&pred_key(&i.conclusion)] != s {
                    continue;
                }
                let ok = i.conditions.iter().all(|c| {
                    if mode == Mode::Cwa && c.is_negative() {
                        !known.contains(&c.negated())
                    } else {
                        known.contains(c)
                    }
                });
                if ok && known.insert(i.conclusion.clone()) {
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    if mode == Mode::Owa && known.iter().any(|l| l.is_positive() && known.contains(&l.negated())) {
        return Err(OracleError::Inconsistent);
    }

    let mut m = Model {
        mode,
        facts,
        known,
        depth: BTreeMap::new(),
        instances: insts,
    };
    let mut depth: BTreeMap<Literal, u32> = m.facts.iter().map(|f| (f.clone(), 0)).collect();
    let sat: Vec<Instance> = m.satisfied().cloned().collect();
    loop {
        let mut changed = false;
        for i in &sat {
            if m.facts.contains(&i.conclusion) {
                continue;
            }
            let mut d = 0;
            let mut ok = true;
            for c in &i.conditions {
                if m.naf(c) {
                    continue;
                }
                match depth.get(c) {
                    Some(x) => d = d.max(*x),
                    None => ok = false,
                }
            }
            if ok {
                let e = depth.entry(i.conclusion.clone()).or_insert(u32::MAX);
                if d + 1 < *e {
                    *e = d + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    m.depth = depth;
    Ok(m)
}

// ---------------------------------------------------------------------------
// AND-OR proof counting

/// Number of proof trees of `l` with no literal repeated on a root-to-leaf
/// path, saturating at `cap + 1`. Stated facts are leaves only.
pub fn count_proofs(m: &Model, l: &Literal, cap: usize) -> usize {
    let sat: Vec<&Instance> = m.satisfied().collect();
    fn go(m: &Model, sat: &[&Instance], l: &Literal, path: &mut Vec<Literal>, cap: usize) -> usize {
        if m.facts.contains(l) {
            return 1;
        }
        path.push(l.clone());
        let mut total = 0usize;
        for i in sat.iter().filter(|i| &i.conclusion == l) {
            let mut prod = 1usize;
            for c in &i.conditions {
                let n = if m.naf(c) {
                    1
                } else if path.contains(c) {
                    0
                } else {
                    go(m, sat, c, path, cap)
                };
                prod = prod.saturating_mul(n).min(cap + 1);
                if prod == 0 {
                    break;
                }
            }
            total = (total + prod).min(cap + 1);
        }
        path.pop();
        total
    }
    go(m, &sat, l, &mut Vec::new(), cap)
}

// ---------------------------------------------------------------------------
// Abduction by trying every candidate

pub fn brute_abduction(t: &Theory, q: &Literal) -> BTreeSet<Literal> {
    let stated: BTreeSet<Literal> = t.facts().map(|f| f.literal.clone()).collect();
    let id = t.next_id(Namespace::Fact);
    ground_literals(t)
        .into_iter()
        .filter(|m| m != q && !stated.contains(m))
        .filter(|m| {
            let Ok(t2) = t.with_fact(id, m.clone()) else {
                return false;
            };
            matches!(naive_model(&t2), Ok(model) if model.known.contains(q))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Proof-tree isomorphism by trying every child permutation

fn label(n: &ProofNode) -> String {
    match n {
        ProofNode::Fact { id, literal } => format!("F {id} {literal}"),
        ProofNode::Naf { literal } => format!("N {literal}"),
        ProofNode::Derived { rule, literal, .. } => format!("D {rule} {literal}"),
    }
}

fn children(n: &ProofNode) -> &[ProofNode] {
    match n {
        ProofNode::Derived { conditions, .. } => conditions,
        _ => &[],
    }
}

pub fn brute_isomorphic(a: &ProofNode, b: &ProofNode) -> bool {
    if label(a) != label(b) {
        return false;
    }
    let (ca, cb) = (children(a), children(b));
    if ca.len() != cb.len() {
        return false;
    }
    let mut used = vec![false; cb.len()];
    fn assign(ca: &[ProofNode], cb: &[ProofNode], i: usize, used: &mut [bool]) -> bool {
        if i == ca.len() {
            return true;
        }
        for j in 0..cb.len() {
            if !used[j] && brute_isomorphic(&ca[i], &cb[j]) {
                used[j] = true;
                if assign(ca, cb, i + 1, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    assign(ca, cb, 0, &mut used)
}

// ---------------------------------------------------------------------------
// Small random theories

const NOUNS: &[&str] = &["the cat", "the dog", "the lion", "the mouse", "the tiger", "the bear"];
const ATTRS: &[&str] = &["big", "red", "kind", "cold", "nice", "young", "round"];
const VERBS: &[&str] = &["chase", "like", "see", "visit"];

#[derive(Debug, Clone, Copy)]
pub struct SmallSpec {
    pub max_entities: usize,
    pub max_attrs: usize,
    pub max_verbs: usize,
    pub max_facts: usize,
    pub max_rules: usize,
}

impl Default for SmallSpec {
    fn default() -> Self {
        SmallSpec {
            max_entities: 4,
            max_attrs: 4,
            max_verbs: 2,
            max_facts: 9,
            max_rules: 8,
        }
    }
}

fn term(var: bool, ents: &[&str], rng: &mut ChaCha8Rng) -> Term {
    if var {
        Term::Var
    } else {
        Term::constant(ents.choose(rng).unwrap())
    }
}

fn random_atom(ents: &[&str], attrs: &[&str], verbs: &[&str], var_subject: bool, rng: &mut ChaCha8Rng) -> Atom {
    if verbs.is_empty() || rng.gen_bool(0.6) {
        Atom::attribute(term(var_subject, ents, rng), attrs.choose(rng).unwrap())
    } else {
        let verb = verbs.choose(rng).unwrap();
        // The variable sits on one side of a relation at most.
        if var_subject && rng.gen_bool(0.3) {
            Atom::relation(verb, term(false, ents, rng), Term::Var)
        } else {
            Atom::relation(verb, term(var_subject, ents, rng), term(false, ents, rng))
        }
    }
}

fn lit(atom: Atom, negative: bool) -> Literal {
    if negative {
        Literal::negative(atom)
    } else {
        Literal::positive(atom)
    }
}

/// Candidate random theory; `None` if the draw breaks a mode constraint or
/// does not survive a render/parse round trip.
fn draw(mode: Mode, spec: SmallSpec, rng: &mut ChaCha8Rng) -> Option<Theory> {
    let owa = mode == Mode::Owa;
    let mut nouns = NOUNS.to_vec();
    nouns.shuffle(rng);
    let ents = &nouns[..rng.gen_range(1..=spec.max_entities.min(NOUNS.len()))];
    let mut attrs = ATTRS.to_vec();
    attrs.shuffle(rng);
    let attrs = &attrs[..rng.gen_range(1..=spec.max_attrs.min(ATTRS.len()))];
    let mut verbs = VERBS.to_vec();
    verbs.shuffle(rng);
    let verbs = &verbs[..rng.gen_range(0..=spec.max_verbs.min(VERBS.len()))];

    let mut sentences = Vec::new();
    let n_facts = rng.gen_range(1..=spec.max_facts);
    let n_rules = rng.gen_range(1..=spec.max_rules);
    let mut seen = BTreeSet::new();
    for _ in 0..n_facts {
        let l = lit(random_atom(ents, attrs, verbs, false, rng), owa && rng.gen_bool(0.2));
        if seen.insert(l.clone()) {
            sentences.push(l);
        }
    }
    let mut rules = Vec::new();
    for _ in 0..n_rules {
        let var = rng.gen_bool(0.75);
        let n_conds = *[1, 1, 2, 2, 3].choose(rng).unwrap();
        let mut conds: Vec<Literal> = Vec::new();
        for k in 0..n_conds {
            let neg = rng.gen_bool(0.25) && (owa || k > 0);
            let c = lit(random_atom(ents, attrs, verbs, var && (k == 0 || rng.gen_bool(0.6)), rng), neg);
            if !conds.iter().any(|d| d.atom == c.atom) {
                conds.push(c);
            }
        }
        let conclusion = lit(random_atom(ents, attrs, verbs, var && rng.gen_bool(0.9), rng), owa && rng.gen_bool(0.2));
        rules.push((conds, conclusion));
    }
    let mut all: Vec<Sentence> = Vec::new();
    let mut order: Vec<usize> = (0..sentences.len() + rules.len()).collect();
    order.shuffle(rng);
    for (k, &i) in order.iter().enumerate() {
        let id = SentenceId::sent(k as u32 + 1);
        if i < sentences.len() {
            all.push(Sentence::Fact(Fact {
                id,
                literal: sentences[i].clone(),
            }));
        } else {
            let (conditions, conclusion) = rules[i - sentences.len()].clone();
            all.push(Sentence::Rule(Rule {
                id,
                conditions,
                conclusion,
                form: RuleForm::IfThen,
                noun: VarNoun::Something,
            }));
        }
    }
    let t = Theory::new(all, mode).ok()?;
    // Bindings must not collapse two conditions of a rule into one.
    let ents_all = entities(&t);
    for r in t.rules() {
        for e in &ents_all {
            let bound: BTreeSet<Literal> = r.conditions.iter().map(|c| bind(c, e)).collect();
            if bound.len() != r.conditions.len() {
                return None;
            }
        }
    }
    let back = parse_context(&render_context(&t).ok()?, mode).ok()?;
    (back == t).then_some(t)
}

/// Random theory `index` of the stream for `seed`: at most 6 entities and
/// 25 sentences. Not filtered for stratifiability or consistency.
pub fn small_theory(mode: Mode, seed: u64, index: u64, spec: SmallSpec) -> Theory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index);
    loop {
        if let Some(t) = draw(mode, spec, &mut rng) {
            return t;
        }
    }
}
