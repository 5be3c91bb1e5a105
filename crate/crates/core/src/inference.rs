//! Forward chaining under closed-world (stratified negation as failure) and
//! open-world (hard negation, three truth values) semantics.
//!
//! Rules have at most one variable, so grounding is a loop over the
//! signature's entities. Each stratum is saturated with a counter-based
//! worklist: an instance fires once its last missing condition arrives.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    signature_of, Atom, Entity, Literal, Mode, Predicate, Rule, SentenceId, Signature, Term,
    Theory, TruthValue,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("theory is not stratifiable: negation cycle through {}", display_cycle(.cycle))]
pub struct StratificationError {
    /// Predicates on the cycle, first element repeated at the end.
    pub cycle: Vec<Predicate>,
}

fn display_cycle(c: &[Predicate]) -> String {
    c.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error(transparent)]
    Stratification(#[from] StratificationError),
    #[error("inconsistent theory: both `{0}` and its negation hold")]
    InconsistentTheory(Literal),
}

/// How one condition of a rule application is satisfied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionRef {
    /// A fact stated in the context.
    Context(SentenceId),
    /// A literal derived earlier in the closure.
    Derived(Literal),
    /// A negated condition assumed true because its atom is unprovable (CWA).
    Naf(Literal),
}

/// One rule application concluding a literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Support {
    pub rule: SentenceId,
    pub conditions: Vec<ConditionRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Implication {
    pub literal: Literal,
    pub depth: u32,
    pub support: Support,
}

/// Predicate strata; NAF conditions always sit in a strictly lower stratum
/// than the conclusion that uses them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Strata {
    pub level: BTreeMap<Predicate, usize>,
}

impl Strata {
    pub fn of(&self, p: &Predicate) -> usize {
        self.level.get(p).copied().unwrap_or(0)
    }
}

/// Check that no dependency cycle passes through a negated condition.
pub fn check_stratifiable(t: &Theory) -> Result<Strata, StratificationError> {
    let mut graph: DiGraph<Predicate, bool> = DiGraph::new();
    let mut nodes: BTreeMap<Predicate, NodeIndex> = BTreeMap::new();
    let mut node = |g: &mut DiGraph<Predicate, bool>, p: Predicate| {
        *nodes.entry(p.clone()).or_insert_with(|| g.add_node(p))
    };
    for r in t.rules() {
        let to = node(&mut graph, r.conclusion.predicate());
        for c in &r.conditions {
            let from = node(&mut graph, c.predicate());
            graph.add_edge(from, to, c.is_negative());
        }
    }
    for f in t.facts() {
        node(&mut graph, f.literal.predicate());
    }

    // tarjan_scc yields components in reverse topological order.
    let sccs = tarjan_scc(&graph);
    let mut comp = vec![0usize; graph.node_count()];
    for (ci, members) in sccs.iter().enumerate() {
        for &n in members {
            comp[n.index()] = ci;
        }
    }
    for e in graph.edge_indices() {
        let (a, b) = graph.edge_endpoints(e).expect("edge exists");
        if graph[e] && comp[a.index()] == comp[b.index()] {
            return Err(StratificationError {
                cycle: negative_cycle(&graph, a, b, &comp),
            });
        }
    }

    let mut stratum = vec![0usize; sccs.len()];
    for ci in (0..sccs.len()).rev() {
        for &n in &sccs[ci] {
            for e in graph.edges_directed(n, petgraph::Direction::Incoming) {
                use petgraph::visit::EdgeRef;
                let src = comp[e.source().index()];
                if src != ci {
                    let need = stratum[src] + usize::from(*e.weight());
                    stratum[ci] = stratum[ci].max(need);
                }
            }
        }
    }
    let level = nodes
        .into_iter()
        .map(|(p, n)| (p, stratum[comp[n.index()]]))
        .collect();
    Ok(Strata { level })
}

fn negative_cycle(
    g: &DiGraph<Predicate, bool>,
    from: NodeIndex,
    to: NodeIndex,
    comp: &[usize],
) -> Vec<Predicate> {
    // BFS from `to` back to `from` inside the component.
    let target_comp = comp[from.index()];
    let mut prev: HashMap<NodeIndex, NodeIndex> = HashMap::new();
    let mut queue = std::collections::VecDeque::from([to]);
    let mut seen = HashSet::from([to]);
    while let Some(n) = queue.pop_front() {
        if n == from {
            break;
        }
        for m in g.neighbors(n) {
            if comp[m.index()] == target_comp && seen.insert(m) {
                prev.insert(m, n);
                queue.push_back(m);
            }
        }
    }
    let mut path = vec![from];
    let mut cur = from;
    while cur != to {
        match prev.get(&cur) {
            Some(&p) => {
                path.push(p);
                cur = p;
            }
            None => break,
        }
    }
    path.reverse();
    // path runs to .. from; prepend from to close the cycle.
    let mut cycle = vec![g[from].clone()];
    cycle.extend(path.into_iter().map(|n| g[n].clone()));
    cycle
}

/// A rule instantiated for one binding of its variable.
#[derive(Debug, Clone)]
pub(crate) struct GroundRule<'t> {
    pub rule: &'t Rule,
    pub conditions: Vec<Literal>,
    pub conclusion: Literal,
}

pub(crate) fn ground_rules<'t>(t: &'t Theory, entities: &BTreeSet<Entity>) -> Vec<GroundRule<'t>> {
    let mut out = Vec::new();
    for r in t.rules() {
        if r.has_var() {
            for e in entities {
                let (conditions, conclusion) = r.instantiate(e);
                out.push(GroundRule {
                    rule: r,
                    conditions,
                    conclusion,
                });
            }
        } else {
            out.push(GroundRule {
                rule: r,
                conditions: r.conditions.clone(),
                conclusion: r.conclusion.clone(),
            });
        }
    }
    out
}

/// Whether a condition is tested by absence (negation as failure).
fn is_naf(mode: Mode, cond: &Literal) -> bool {
    mode == Mode::Cwa && cond.is_negative()
}

/// Least fixpoint of a theory, with depths and every one-step support.
#[derive(Debug, Clone)]
pub struct Closure {
    mode: Mode,
    signature: Signature,
    facts: BTreeMap<Literal, SentenceId>,
    implications: BTreeMap<Literal, Implication>,
    supports: BTreeMap<Literal, Vec<Support>>,
}

impl Closure {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// True iff `lit` is a context fact or an implication.
    pub fn contains(&self, lit: &Literal) -> bool {
        self.facts.contains_key(lit) || self.implications.contains_key(lit)
    }

    pub fn is_fact(&self, lit: &Literal) -> bool {
        self.facts.contains_key(lit)
    }

    pub fn fact_id(&self, lit: &Literal) -> Option<SentenceId> {
        self.facts.get(lit).copied()
    }

    /// 0 for context facts, minimum proof depth for implications.
    pub fn depth(&self, lit: &Literal) -> Option<u32> {
        if self.facts.contains_key(lit) {
            Some(0)
        } else {
            self.implications.get(lit).map(|i| i.depth)
        }
    }

    pub fn implications(&self) -> impl Iterator<Item = &Implication> {
        self.implications.values()
    }

    pub fn implication(&self, lit: &Literal) -> Option<&Implication> {
        self.implications.get(lit)
    }

    pub fn num_implications(&self) -> usize {
        self.implications.len()
    }

    pub fn implication_set(&self) -> BTreeSet<Literal> {
        self.implications.keys().cloned().collect()
    }

    /// Every rule application concluding `lit` (empty for facts).
    pub fn supports(&self, lit: &Literal) -> &[Support] {
        self.supports.get(lit).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_depth(&self) -> u32 {
        self.implications.values().map(|i| i.depth).max().unwrap_or(0)
    }

    pub fn truth(&self, lit: &Literal) -> TruthValue {
        match self.mode {
            Mode::Cwa => {
                let holds = self.contains(&lit.positive_form());
                if holds == lit.is_positive() {
                    TruthValue::True
                } else {
                    TruthValue::False
                }
            }
            Mode::Owa => {
                if self.contains(lit) {
                    TruthValue::True
                } else if self.contains(&lit.negated()) {
                    TruthValue::False
                } else {
                    TruthValue::Unknown
                }
            }
        }
    }

    /// Truth value of every ground literal (both polarities) over the signature.
    pub fn truth_table(&self) -> BTreeMap<Literal, TruthValue> {
        let mut out = BTreeMap::new();
        for atom in self.signature.ground_atoms() {
            for lit in [atom.clone(), atom.negated()] {
                let v = self.truth(&lit);
                out.insert(lit, v);
            }
        }
        out
    }
}

fn condition_ref(
    mode: Mode,
    cond: &Literal,
    facts: &BTreeMap<Literal, SentenceId>,
) -> ConditionRef {
    if is_naf(mode, cond) {
        ConditionRef::Naf(cond.clone())
    } else if let Some(id) = facts.get(cond) {
        ConditionRef::Context(*id)
    } else {
        ConditionRef::Derived(cond.clone())
    }
}

fn fact_map(t: &Theory) -> BTreeMap<Literal, SentenceId> {
    let mut facts = BTreeMap::new();
    for f in t.facts() {
        facts.entry(f.literal.clone()).or_insert(f.id);
    }
    facts
}

/// Saturate one group of ground rules on top of `known`.
fn saturate(mode: Mode, instances: &[&GroundRule<'_>], known: &mut HashSet<Literal>) {
    let mut waiting: HashMap<Literal, Vec<usize>> = HashMap::new();
    let mut missing = vec![0usize; instances.len()];
    let mut queue: Vec<Literal> = Vec::new();

    for (i, inst) in instances.iter().enumerate() {
        // NAF conditions are fixed by lower strata.
        if inst
            .conditions
            .iter()
            .any(|c| is_naf(mode, c) && known.contains(&c.positive_form()))
        {
            missing[i] = usize::MAX;
            continue;
        }
        let needed: BTreeSet<&Literal> = inst
            .conditions
            .iter()
            .filter(|c| !is_naf(mode, c) && !known.contains(*c))
            .collect();
        missing[i] = needed.len();
        if needed.is_empty() {
            if known.insert(inst.conclusion.clone()) {
                queue.push(inst.conclusion.clone());
            }
        } else {
            for c in needed {
                waiting.entry(c.clone()).or_default().push(i);
            }
        }
    }

    while let Some(lit) = queue.pop() {
        if let Some(list) = waiting.remove(&lit) {
            for i in list {
                missing[i] -= 1;
                if missing[i] == 0 {
                    let c = &instances[i].conclusion;
                    if known.insert(c.clone()) {
                        queue.push(c.clone());
                    }
                }
            }
        }
    }
}

/// Compute the closure of a theory.
pub fn closure(t: &Theory) -> Result<Closure, InferenceError> {
    let mode = t.mode();
    let signature = signature_of(t);
    let facts = fact_map(t);
    let instances = ground_rules(t, &signature.entities);

    let mut known: HashSet<Literal> = facts.keys().cloned().collect();
    match mode {
        Mode::Cwa => {
            let strata = check_stratifiable(t)?;
            let top = strata.level.values().copied().max().unwrap_or(0);
            for s in 0..=top {
                let layer: Vec<&GroundRule<'_>> = instances
                    .iter()
                    .filter(|g| strata.of(&g.conclusion.predicate()) == s)
                    .collect();
                saturate(mode, &layer, &mut known);
            }
        }
        Mode::Owa => {
            let all: Vec<&GroundRule<'_>> = instances.iter().collect();
            saturate(mode, &all, &mut known);
            let mut sorted: Vec<&Literal> = known.iter().collect();
            sorted.sort();
            if let Some(l) = sorted
                .into_iter()
                .find(|l| l.is_positive() && known.contains(&l.negated()))
            {
                return Err(InferenceError::InconsistentTheory(l.clone()));
            }
        }
    }

    // Every satisfied instance is a support of its (non-fact) conclusion.
    let mut supports: BTreeMap<Literal, BTreeSet<Support>> = BTreeMap::new();
    for inst in &instances {
        if facts.contains_key(&inst.conclusion) {
            continue;
        }
        let satisfied = inst.conditions.iter().all(|c| {
            if is_naf(mode, c) {
                !known.contains(&c.positive_form())
            } else {
                known.contains(c)
            }
        });
        if satisfied {
            let conditions = inst
                .conditions
                .iter()
                .map(|c| condition_ref(mode, c, &facts))
                .collect();
            supports.entry(inst.conclusion.clone()).or_default().insert(Support {
                rule: inst.rule.id,
                conditions,
            });
        }
    }

    let depths = min_depths(&supports);
    let mut implications = BTreeMap::new();
    let mut support_lists = BTreeMap::new();
    for (lit, sups) in supports {
        let depth = depths[&lit];
        let best = sups
            .iter()
            .find(|s| support_depth(s, &depths) == Some(depth))
            .expect("a support achieves the minimum depth")
            .clone();
        implications.insert(
            lit.clone(),
            Implication {
                literal: lit.clone(),
                depth,
                support: best,
            },
        );
        support_lists.insert(lit, sups.into_iter().collect());
    }

    Ok(Closure {
        mode,
        signature,
        facts,
        implications,
        supports: support_lists,
    })
}

fn support_depth(s: &Support, depths: &HashMap<Literal, u32>) -> Option<u32> {
    let mut worst = 0;
    for c in &s.conditions {
        if let ConditionRef::Derived(l) = c {
            worst = worst.max(*depths.get(l)?);
        }
    }
    Some(worst + 1)
}

/// Minimum derivation height per derived literal (min over supports of
/// 1 + max condition depth; facts and NAF leaves count 0).
fn min_depths(supports: &BTreeMap<Literal, BTreeSet<Support>>) -> HashMap<Literal, u32> {
    let mut depths: HashMap<Literal, u32> = HashMap::new();
    loop {
        let mut changed = false;
        for (lit, sups) in supports {
            for s in sups {
                if let Some(d) = support_depth(s, &depths) {
                    let cur = depths.entry(lit.clone()).or_insert(u32::MAX);
                    if d < *cur {
                        *cur = d;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return depths;
        }
    }
}

/// Every literal obtainable by exactly one rule application over the stated
/// facts. Under CWA a negated condition holds when its atom is absent from
/// the full closure. Alternative supports of one literal are listed
/// separately; the result is sorted by (rule id, condition refs, literal).
pub fn one_step_inferences(t: &Theory) -> Result<Vec<Implication>, InferenceError> {
    let mode = t.mode();
    let signature = signature_of(t);
    let facts = fact_map(t);
    let full = match mode {
        Mode::Cwa => Some(closure(t)?),
        Mode::Owa => None,
    };
    let mut out = Vec::new();
    for inst in ground_rules(t, &signature.entities) {
        if facts.contains_key(&inst.conclusion) {
            continue;
        }
        let ok = inst.conditions.iter().all(|c| {
            if is_naf(mode, c) {
                !full
                    .as_ref()
                    .expect("CWA closure computed")
                    .contains(&c.positive_form())
            } else {
                facts.contains_key(c)
            }
        });
        if ok {
            out.push(Implication {
                literal: inst.conclusion.clone(),
                depth: 1,
                support: Support {
                    rule: inst.rule.id,
                    conditions: inst
                        .conditions
                        .iter()
                        .map(|c| condition_ref(mode, c, &facts))
                        .collect(),
                },
            });
        }
    }
    out.sort_by(|a, b| {
        (&a.support, &a.literal).cmp(&(&b.support, &b.literal))
    });
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub value: TruthValue,
    /// `None` when the answer rests on no proof ("N/A").
    pub depth: Option<u32>,
}

/// Resolve a question against a computed closure.
pub fn answer_with(c: &Closure, q: &Literal) -> Answer {
    if let Some(d) = c.depth(q) {
        return Answer {
            value: TruthValue::True,
            depth: Some(d),
        };
    }
    if let Some(d) = c.depth(&q.negated()) {
        return Answer {
            value: TruthValue::False,
            depth: Some(d),
        };
    }
    let value = match c.mode() {
        Mode::Cwa if q.is_positive() => TruthValue::False,
        Mode::Cwa => TruthValue::True,
        Mode::Owa => TruthValue::Unknown,
    };
    Answer { value, depth: None }
}

pub fn answer(t: &Theory, q: &Literal) -> Result<Answer, InferenceError> {
    Ok(answer_with(&closure(t)?, q))
}

/// Match a rule literal pattern against a ground literal. Returns the
/// variable binding it forces (`Some(None)` when the pattern is ground).
pub fn match_literal(pattern: &Literal, ground: &Literal) -> Option<Option<Entity>> {
    if pattern.polarity != ground.polarity {
        return None;
    }
    let mut binding: Option<Entity> = None;
    let mut unify = |p: &Term, g: &Term| -> bool {
        match (p, g) {
            (Term::Var, Term::Const(e)) => match &binding {
                Some(b) => b == e,
                None => {
                    binding = Some(e.clone());
                    true
                }
            },
            (Term::Const(a), Term::Const(b)) => a == b,
            _ => false,
        }
    };
    let ok = match (&pattern.atom, &ground.atom) {
        (
            Atom::Attribute { subject: ps, attr: pa },
            Atom::Attribute { subject: gs, attr: ga },
        ) => pa == ga && unify(ps, gs),
        (
            Atom::Relation {
                verb: pv,
                subject: ps,
                object: po,
            },
            Atom::Relation {
                verb: gv,
                subject: gs,
                object: go,
            },
        ) => pv == gv && unify(ps, gs) && unify(po, go),
        _ => false,
    };
    ok.then_some(binding)
}

/// Conclusion of `rule` when its conditions are instantiated to exactly
/// `conditions` (same order), or `None` if they do not match.
pub fn apply_rule(rule: &Rule, conditions: &[Literal]) -> Option<Literal> {
    if rule.conditions.len() != conditions.len() {
        return None;
    }
    let mut binding: Option<Entity> = None;
    for (p, g) in rule.conditions.iter().zip(conditions) {
        if let Some(b) = match_literal(p, g)? {
            match &binding {
                Some(prev) if *prev != b => return None,
                _ => binding = Some(b),
            }
        }
    }
    if rule.conclusion.has_var() {
        binding.map(|b| rule.conclusion.bind(&b))
    } else {
        Some(rule.conclusion.clone())
    }
}

/// Depth of the deepest failed backward search for `q`, for compatibility
/// with datasets that record a depth for unprovable questions. Approximate:
/// the search bound is `limit` and cycles are cut.
pub fn failed_search_depth(t: &Theory, q: &Literal, limit: u32) -> u32 {
    let sig = signature_of(t);
    let facts = fact_map(t);
    let instances = ground_rules(t, &sig.entities);
    fn go(
        lit: &Literal,
        facts: &BTreeMap<Literal, SentenceId>,
        instances: &[GroundRule<'_>],
        stack: &mut Vec<Literal>,
        limit: u32,
    ) -> u32 {
        if facts.contains_key(lit) || stack.contains(lit) || stack.len() as u32 >= limit {
            return 0;
        }
        stack.push(lit.clone());
        let mut best = 0;
        for inst in instances.iter().filter(|i| &i.conclusion == lit) {
            let sub = inst
                .conditions
                .iter()
                .map(|c| go(c, facts, instances, stack, limit))
                .max()
                .unwrap_or(0);
            best = best.max(sub + 1);
        }
        stack.pop();
        best
    }
    go(q, &facts, &instances, &mut Vec::new(), limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse_context, parse_fact};

    fn lit(s: &str) -> Literal {
        parse_fact(s).unwrap()
    }

    #[test]
    fn negation_cycle_is_rejected() {
        let t = parse_context(
            "sent1: If Bob is not red then Bob is blue. sent2: If Bob is blue then Bob is red.",
            Mode::Cwa,
        )
        .unwrap();
        let err = check_stratifiable(&t).unwrap_err();
        assert_eq!(err.cycle.first(), err.cycle.last());
        assert!(err.cycle.contains(&Predicate::Attribute("red".into())));
        assert!(err.cycle.contains(&Predicate::Attribute("blue".into())));
        assert!(matches!(closure(&t), Err(InferenceError::Stratification(_))));
    }

    #[test]
    fn positive_recursion_is_stratifiable() {
        let t = parse_context(
            "sent1: If someone is big then they are red. sent2: If someone is red then they are big. sent3: Bob is big.",
            Mode::Cwa,
        )
        .unwrap();
        assert!(check_stratifiable(&t).is_ok());
        let c = closure(&t).unwrap();
        assert_eq!(c.implication_set(), BTreeSet::from([lit("Bob is red.")]));
    }

    #[test]
    fn naf_uses_lower_stratum() {
        let t = parse_context(
            "sent1: Bob is big. sent2: If someone is big then they are kind. \
             sent3: If someone is kind and not red then they are nice. sent4: Anne is big. sent5: Anne is red.",
            Mode::Cwa,
        )
        .unwrap();
        let c = closure(&t).unwrap();
        assert!(c.contains(&lit("Bob is nice.")));
        assert!(!c.contains(&lit("Anne is nice.")));
        assert_eq!(c.depth(&lit("Bob is nice.")), Some(2));
        let sup = &c.implication(&lit("Bob is nice.")).unwrap().support;
        assert!(sup
            .conditions
            .contains(&ConditionRef::Naf(lit("Bob is not red."))));
    }

    #[test]
    fn facts_only_theory_has_no_one_step_inferences() {
        let t = parse_context("sent1: Bob is big. sent2: Anne is red.", Mode::Cwa).unwrap();
        assert!(one_step_inferences(&t).unwrap().is_empty());
        assert_eq!(closure(&t).unwrap().num_implications(), 0);
    }

    #[test]
    fn owa_inconsistency_is_an_error() {
        let t = parse_context(
            "sent1: Bob is big. sent2: Bob is not red. sent3: If someone is big then they are red.",
            Mode::Owa,
        )
        .unwrap();
        assert_eq!(
            closure(&t).unwrap_err(),
            InferenceError::InconsistentTheory(lit("Bob is red."))
        );
    }

    #[test]
    fn owa_unknown() {
        let t = parse_context("sent1: Bob is big.", Mode::Owa).unwrap();
        assert_eq!(
            answer(&t, &lit("Bob is red.")).unwrap(),
            Answer {
                value: TruthValue::Unknown,
                depth: None
            }
        );
        assert_eq!(answer(&t, &lit("Bob is big.")).unwrap().depth, Some(0));
        assert_eq!(
            answer(&t, &lit("Bob is not big.")).unwrap().value,
            TruthValue::False
        );
    }

    #[test]
    fn cwa_negative_question_defaults_true() {
        let t = parse_context("sent1: Bob is big.", Mode::Cwa).unwrap();
        assert_eq!(
            answer(&t, &lit("Bob is not red.")).unwrap(),
            Answer {
                value: TruthValue::True,
                depth: None
            }
        );
        assert_eq!(
            answer(&t, &lit("Bob is not big.")).unwrap(),
            Answer {
                value: TruthValue::False,
                depth: Some(0)
            }
        );
    }

    #[test]
    fn depth_takes_min_over_supports() {
        let t = parse_context(
            "sent1: Bob is big. sent2: If someone is big then they are red. \
             sent3: If someone is red then they are kind. sent4: If someone is big then they are kind.",
            Mode::Cwa,
        )
        .unwrap();
        let c = closure(&t).unwrap();
        assert_eq!(c.depth(&lit("Bob is kind.")), Some(1));
        assert_eq!(c.supports(&lit("Bob is kind.")).len(), 2);
    }

    #[test]
    fn apply_rule_binds_variable() {
        let t = parse_context(
            "sent1: If something visits the tiger and the tiger is not red then it is not nice.",
            Mode::Owa,
        )
        .unwrap();
        let r = t.rules().next().unwrap();
        let got = apply_rule(
            r,
            &[lit("The lion visits the tiger."), lit("The tiger is not red.")],
        );
        assert_eq!(got, Some(lit("The lion is not nice.")));
        assert_eq!(
            apply_rule(r, &[lit("The lion visits the tiger."), lit("The tiger is red.")]),
            None
        );
    }

    #[test]
    fn failed_search_depth_counts_rule_chain() {
        let t = parse_context(
            "sent1: If someone is big then they are red. sent2: If someone is red then they are kind. sent3: Bob is cold.",
            Mode::Cwa,
        )
        .unwrap();
        assert_eq!(failed_search_depth(&t, &lit("Bob is kind."), 10), 2);
        assert_eq!(failed_search_depth(&t, &lit("Bob is cold."), 10), 0);
    }
}
