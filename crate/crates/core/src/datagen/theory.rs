use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{GenConfig, GenError, WorldChoice};
use crate::grammar::{parse_context, render_context, GrammarProfile, World};
use crate::inference::closure;
use crate::model::{
    Atom, Entity, Fact, Literal, Mode, Rule, RuleForm, Sentence, SentenceId, Term, Theory,
};

struct Vocab {
    profile: GrammarProfile,
    entities: Vec<Entity>,
    attributes: Vec<String>,
    verbs: Vec<String>,
}

fn pick_range(rng: &mut ChaCha8Rng, (lo, hi): (usize, usize), cap: usize) -> usize {
    let hi = hi.min(cap).max(1);
    rng.gen_range(lo.clamp(1, hi)..=hi)
}

fn sample_vocab(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Vocab {
    let world = match cfg.world {
        WorldChoice::People => World::People,
        WorldChoice::Animals => World::Animals,
        WorldChoice::Mixed => {
            if rng.gen_bool(0.5) {
                World::People
            } else {
                World::Animals
            }
        }
    };
    let profile = GrammarProfile::for_world(world);
    let n_ent = pick_range(rng, cfg.entities, profile.entities.len());
    let n_attr = pick_range(rng, cfg.attributes, profile.attributes.len());
    let entities = profile
        .entities
        .choose_multiple(rng, n_ent)
        .map(|e| Entity::new(e.as_str()))
        .collect();
    let attributes = profile
        .attributes
        .choose_multiple(rng, n_attr)
        .cloned()
        .collect();
    let verbs = if profile.verbs.is_empty() {
        Vec::new()
    } else {
        let n = pick_range(rng, cfg.verbs, profile.verbs.len());
        profile.verbs.choose_multiple(rng, n).cloned().collect()
    };
    Vocab {
        profile,
        entities,
        attributes,
        verbs,
    }
}

impl Vocab {
    fn entity(&self, rng: &mut ChaCha8Rng) -> Term {
        Term::Const(self.entities.choose(rng).expect("non-empty").clone())
    }

    /// An atom about `subject`. Relations put `subject` on a random side.
    fn atom(&self, cfg: &GenConfig, rng: &mut ChaCha8Rng, subject: Term) -> Atom {
        if !self.verbs.is_empty() && rng.gen_bool(cfg.relation_prob) {
            let verb = self.verbs.choose(rng).expect("non-empty");
            let other = self.entity(rng);
            if subject.is_var() && rng.gen_bool(0.3) {
                Atom::relation(verb, other, subject)
            } else {
                Atom::relation(verb, subject, other)
            }
        } else {
            Atom::attribute(subject, self.attributes.choose(rng).expect("non-empty"))
        }
    }

    fn literal(&self, cfg: &GenConfig, rng: &mut ChaCha8Rng, subject: Term, neg_prob: f64) -> Literal {
        let atom = self.atom(cfg, rng, subject);
        if neg_prob > 0.0 && rng.gen_bool(neg_prob) {
            Literal::negative(atom)
        } else {
            Literal::positive(atom)
        }
    }
}

/// Re-target a previous conclusion at `subject`, keeping its predicate and
/// polarity, so the new rule can fire on what the earlier one derives.
fn chained(prev: &Literal, subject: &Term) -> Literal {
    let atom = match &prev.atom {
        Atom::Attribute { attr, .. } => Atom::attribute(subject.clone(), attr),
        Atom::Relation {
            verb,
            subject: s,
            object: o,
        } => match (s, o) {
            (Term::Var, _) | (_, Term::Const(_)) => Atom::relation(verb, subject.clone(), o.clone()),
            _ => Atom::relation(verb, s.clone(), subject.clone()),
        },
    };
    Literal {
        atom,
        polarity: prev.polarity,
    }
}

fn sample_rule(
    cfg: &GenConfig,
    v: &Vocab,
    rng: &mut ChaCha8Rng,
    id: SentenceId,
    prev: &[Literal],
    backbone: Option<(&Literal, &[Literal])>,
) -> Option<Rule> {
    let owa = cfg.mode == Mode::Owa;
    let k = 1 + weighted_index(rng, &cfg.condition_weights);
    let concl_neg = if owa { cfg.conclusion_negation_prob } else { 0.0 };
    let mut conditions = Vec::with_capacity(k);
    let conclusion;
    let link = match backbone {
        Some((f, _)) => Some(f),
        None if rng.gen_bool(cfg.chain_prob) => prev.choose(rng),
        None => None,
    };
    // Backbone rules are variable rules whose extra conditions mostly
    // restate facts about the backbone entity.
    let support = backbone.map(|(_, s)| s).unwrap_or_default();
    if backbone.is_some() || rng.gen_bool(cfg.var_rule_prob) {
        for i in 0..k {
            let ground = i > 0 && backbone.is_none() && rng.gen_bool(cfg.ground_condition_prob);
            let subject = if ground { v.entity(rng) } else { Term::Var };
            // The first condition binds the variable and stays positive.
            let neg = if i == 0 { 0.0 } else { cfg.condition_negation_prob };
            conditions.push(match link {
                Some(p) if i == 0 && (owa || p.is_positive()) => chained(p, &subject),
                _ if i > 0 && !support.is_empty() && rng.gen_bool(0.7) => {
                    chained(support.choose(rng).expect("non-empty"), &subject)
                }
                _ => v.literal(cfg, rng, subject, neg),
            });
        }
        let subject = if backbone.is_some() || rng.gen_bool(0.9) {
            Term::Var
        } else {
            v.entity(rng)
        };
        conclusion = v.literal(cfg, rng, subject, concl_neg);
    } else {
        let e = v.entity(rng);
        for i in 0..k {
            conditions.push(match link {
                Some(p) if i == 0 => chained(p, &e),
                _ => v.literal(cfg, rng, e.clone(), cfg.condition_negation_prob),
            });
        }
        conclusion = v.literal(cfg, rng, e, concl_neg);
    }
    conditions.shuffle(rng);
    // Keep a positive variable condition first so the rule reads naturally.
    if let Some(pos) = conditions.iter().position(|c| c.has_var() && c.is_positive()) {
        conditions.swap(0, pos);
    }
    let distinct: BTreeSet<&Literal> = conditions.iter().collect();
    if distinct.len() != conditions.len()
        || conditions.iter().any(|c| c.atom == conclusion.atom)
    {
        return None;
    }
    let mut rule = Rule::new(id, conditions, conclusion).with_noun(v.profile.var_noun());
    if rng.gen_bool(0.5) {
        rule = rule.with_form(if rng.gen_bool(0.5) {
            RuleForm::All
        } else {
            RuleForm::Plural
        });
    }
    Some(rule)
}

fn weighted_index(rng: &mut ChaCha8Rng, weights: &[u32]) -> usize {
    let total: u32 = weights.iter().sum();
    let mut x = rng.gen_range(0..total.max(1));
    for (i, &w) in weights.iter().enumerate() {
        if x < w {
            return i;
        }
        x -= w;
    }
    0
}

/// Forms other than If-then only exist for simple attribute rules; keep
/// the form only when the rendered sentence reads it back unchanged.
fn normalize_forms(t: Theory) -> Option<Theory> {
    let text = render_context(&t).ok()?;
    let back = parse_context(&text, t.mode()).ok()?;
    let sentences = t
        .sentences()
        .iter()
        .zip(back.sentences())
        .map(|(orig, parsed)| match (orig, parsed) {
            (Sentence::Rule(o), Sentence::Rule(p)) if o.form != p.form => {
                Sentence::Rule(o.clone().with_form(p.form))
            }
            _ => orig.clone(),
        })
        .collect();
    let t = Theory::new(sentences, t.mode()).ok()?;
    let again = parse_context(&render_context(&t).ok()?, t.mode()).ok()?;
    (again == t).then_some(t)
}

fn sample_once(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Option<Theory> {
    let v = sample_vocab(cfg, rng);
    let owa = cfg.mode == Mode::Owa;
    let n_facts = rng.gen_range(cfg.facts.0.max(1)..=cfg.facts.1.max(1));
    let n_rules = rng.gen_range(cfg.rules.0..=cfg.rules.1);

    let mut facts: Vec<Literal> = Vec::new();
    let mut seen = BTreeSet::new();
    for _ in 0..n_facts * 3 {
        if facts.len() == n_facts {
            break;
        }
        let neg = if owa { cfg.fact_negation_prob } else { 0.0 };
        let subject = v.entity(rng);
        let l = v.literal(cfg, rng, subject, neg);
        if seen.insert(l.atom.clone()) {
            facts.push(l);
        }
    }
    // A backbone of `target_depth` linked rules starting at a stated fact
    // makes deep theories likely; the remaining rules are free.
    let n_rules = n_rules.max(cfg.target_depth as usize);
    let mut rules: Vec<Rule> = Vec::with_capacity(n_rules);
    let mut conclusions: Vec<Literal> = Vec::new();
    let seed_fact = facts
        .iter()
        .filter(|f| f.is_positive() && matches!(f.atom, Atom::Attribute { .. }))
        .collect::<Vec<_>>()
        .choose(rng)
        .copied()
        .or_else(|| facts.first())
        .cloned()?;
    let seed_entity = seed_fact.atom.terms().next().cloned()?;
    let about_seed: Vec<Literal> = facts
        .iter()
        .filter(|f| {
            matches!(&f.atom, Atom::Attribute { subject, .. } if *subject == seed_entity)
        })
        .cloned()
        .collect();
    let mut link = Some(seed_fact);
    let placeholder = SentenceId::sent(1);
    for i in 0..n_rules {
        let backbone = match &link {
            Some(l) if i < cfg.target_depth as usize => Some((l, about_seed.as_slice())),
            _ => None,
        };
        let r = (0..8)
            .find_map(|_| sample_rule(cfg, &v, rng, placeholder, &conclusions, backbone))?;
        link = Some(r.conclusion.clone());
        conclusions.push(r.conclusion.clone());
        rules.push(r);
    }
    let distinct: BTreeSet<(&Vec<Literal>, &Literal)> =
        rules.iter().map(|r| (&r.conditions, &r.conclusion)).collect();
    if distinct.len() != rules.len() {
        return None;
    }

    let mut bodies: Vec<Sentence> = facts
        .into_iter()
        .map(|literal| Sentence::Fact(Fact { id: placeholder, literal }))
        .chain(rules.into_iter().map(Sentence::Rule))
        .collect();
    bodies.shuffle(rng);
    let sentences: Vec<Sentence> = bodies
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let id = SentenceId::sent(i as u32 + 1);
            match s {
                Sentence::Fact(f) => Sentence::Fact(Fact { id, ..f }),
                Sentence::Rule(r) => Sentence::Rule(Rule { id, ..r }),
            }
        })
        .collect();
    let t = Theory::new(sentences, cfg.mode).ok()?;
    if cfg.mode == Mode::Cwa && !t.lint().is_empty() {
        return None;
    }
    let c = closure(&t).ok()?;
    if c.max_depth() < cfg.target_depth {
        return None;
    }
    normalize_forms(t)
}

/// Rejection-sample a theory: valid for its mode, stratifiable, consistent,
/// renderable, and with an implication of depth at least `target_depth`.
pub fn gen_theory(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Result<Theory, GenError> {
    for _ in 0..cfg.max_retries {
        if let Some(t) = sample_once(cfg, rng) {
            return Ok(t);
        }
    }
    Err(GenError::GenerationExhausted {
        attempts: cfg.max_retries,
    })
}
