use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::GenConfig;
use crate::abduction::{abduce_single_fact_with, CandidatePolarity};
use crate::grammar::{render_fact, render_question, render_theory, SurfaceSentence};
use crate::inference::{answer_with, closure, match_literal, one_step_inferences, Closure, Implication};
use crate::model::{signature_of, Literal, Mode, Namespace, Theory, TruthValue};
use crate::proofs::{all_proofs_with, encode_proof, encode_step_proof, step_proof};

pub const ITERATIVE_QUESTION: &str = "What is one single-hop inference?";
pub const ENUMERATION_QUESTION: &str = "What are all the inferences?";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Qa,
    IterativeStep,
    Enumeration,
    Abduction,
}

/// One member of a set-valued answer with the depth of its proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub text: String,
    pub depth: Option<u32>,
}

/// One line of a JSONL dataset. `answer` holds the answer exactly as the
/// text-to-text output carries it; `targets` itemizes set-valued answers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetExample {
    pub id: String,
    pub theory_id: String,
    pub task: Task,
    pub mode: Mode,
    pub theory: Vec<SurfaceSentence>,
    pub question: String,
    pub answer: String,
    pub depth: Option<u32>,
    pub proofs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<Target>,
}

fn text(l: &Literal) -> String {
    render_fact(l).unwrap_or_else(|_| l.to_string())
}

fn question_pool(t: &Theory) -> Vec<Literal> {
    signature_of(t)
        .ground_atoms()
        .into_iter()
        .flat_map(|a| [a.negated(), a])
        .collect()
}

/// The literal whose proofs justify the answer to `q`, if any.
fn proof_target(c: &Closure, q: &Literal) -> Option<Literal> {
    if c.contains(q) {
        Some(q.clone())
    } else if c.contains(&q.negated()) {
        Some(q.negated())
    } else {
        None
    }
}

fn qa_example(
    t: &Theory,
    c: &Closure,
    surface: &[SurfaceSentence],
    q: &Literal,
    cfg: &GenConfig,
    theory_id: &str,
    n: usize,
) -> DatasetExample {
    let a = answer_with(c, q);
    let proofs = match proof_target(c, q) {
        Some(target) => all_proofs_with(t, c, &target, cfg.proof_cap)
            .proofs
            .iter()
            .map(|p| encode_proof(p, cfg.dialect).to_string())
            .collect(),
        None => Vec::new(),
    };
    DatasetExample {
        id: format!("{theory_id}-q{n}"),
        theory_id: theory_id.to_string(),
        task: super::Task::Qa,
        mode: t.mode(),
        theory: surface.to_vec(),
        question: render_question(q).unwrap_or_else(|_| format!("{q}?")),
        answer: a.value.to_string(),
        depth: a.depth,
        proofs,
        targets: Vec::new(),
    }
}

/// Label-balanced questions: each round draws one question per label, and
/// only complete rounds are kept. Under CWA a round's question is
/// unprovable with probability `unprovable_ratio`.
pub fn gen_qa_examples(
    t: &Theory,
    theory_id: &str,
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<DatasetExample> {
    let Ok(c) = closure(t) else {
        return Vec::new();
    };
    let Ok(surface) = render_theory(t) else {
        return Vec::new();
    };
    // (label, provable) -> depth -> questions
    let mut pools: BTreeMap<(TruthValue, bool), BTreeMap<Option<u32>, Vec<Literal>>> =
        BTreeMap::new();
    for q in question_pool(t) {
        let a = answer_with(&c, &q);
        if a.depth.is_some_and(|d| d > cfg.target_depth) {
            continue;
        }
        pools
            .entry((a.value, a.depth.is_some()))
            .or_default()
            .entry(a.depth)
            .or_default()
            .push(q);
    }
    let labels: &[TruthValue] = match t.mode() {
        Mode::Cwa => &[TruthValue::True, TruthValue::False],
        Mode::Owa => &[TruthValue::True, TruthValue::False, TruthValue::Unknown],
    };
    let rounds = (cfg.questions_per_theory / labels.len()).max(1);
    let mut out = Vec::new();
    'rounds: for _ in 0..rounds {
        let mut round = Vec::with_capacity(labels.len());
        for &label in labels {
            let prefer_provable = match t.mode() {
                Mode::Cwa => !rng.gen_bool(cfg.unprovable_ratio),
                Mode::Owa => label != TruthValue::Unknown,
            };
            let key = [(label, prefer_provable), (label, !prefer_provable)]
                .into_iter()
                .find(|k| pools.get(k).is_some_and(|p| !p.is_empty()));
            let Some(key) = key else {
                break 'rounds;
            };
            let by_depth = pools.get_mut(&key).expect("checked");
            let depths: Vec<Option<u32>> = by_depth.keys().copied().collect();
            let d = *depths.choose(rng).expect("non-empty");
            let qs = by_depth.get_mut(&d).expect("present");
            let q = qs.swap_remove(rng.gen_range(0..qs.len()));
            if qs.is_empty() {
                by_depth.remove(&d);
            }
            round.push(q);
        }
        for q in round {
            let n = out.len();
            out.push(qa_example(t, &c, &surface, &q, cfg, theory_id, n));
        }
    }
    out
}

/// Step proofs (`# sent2 sent12`) of every one-step support of `literal`.
pub fn iterative_step_proofs(steps: &[Implication], literal: &Literal, t: &Theory) -> Vec<String> {
    steps
        .iter()
        .filter(|i| &i.literal == literal)
        .map(|i| encode_step_proof(&step_proof(i, t)).to_string())
        .collect()
}

/// One random valid order of single-hop inferences: each step adds one
/// implication to the context, and the sequence ends with "None".
pub fn gen_iterative_examples(t: &Theory, theory_id: &str, rng: &mut ChaCha8Rng) -> Vec<DatasetExample> {
    let mut cur = t.clone();
    let mut out = Vec::new();
    loop {
        let Ok(steps) = one_step_inferences(&cur) else {
            break;
        };
        let Ok(surface) = render_theory(&cur) else {
            break;
        };
        let mut ex = DatasetExample {
            id: format!("{theory_id}-i{}", out.len()),
            theory_id: theory_id.to_string(),
            task: Task::IterativeStep,
            mode: cur.mode(),
            theory: surface,
            question: ITERATIVE_QUESTION.to_string(),
            answer: "None".to_string(),
            depth: None,
            proofs: Vec::new(),
            targets: Vec::new(),
        };
        let literals: Vec<&Literal> = steps
            .iter()
            .map(|i| &i.literal)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let Some(&chosen) = literals.choose(rng) else {
            out.push(ex);
            break;
        };
        let chosen = chosen.clone();
        ex.answer = text(&chosen);
        ex.depth = Some(1);
        ex.proofs = iterative_step_proofs(&steps, &chosen, &cur);
        out.push(ex);
        match cur.with_fact(cur.next_id(Namespace::Sent), chosen) {
            Ok(next) => cur = next,
            Err(_) => break,
        }
    }
    out
}

/// All implications of `t`, ordered by (depth, text).
pub fn gen_enumeration_example(t: &Theory, theory_id: &str) -> DatasetExample {
    let mut targets: Vec<Target> = match closure(t) {
        Ok(c) => c
            .implications()
            .map(|i| Target {
                text: text(&i.literal),
                depth: Some(i.depth),
            })
            .collect(),
        Err(_) => Vec::new(),
    };
    targets.sort_by(|a, b| (a.depth, &a.text).cmp(&(b.depth, &b.text)));
    DatasetExample {
        id: format!("{theory_id}-e0"),
        theory_id: theory_id.to_string(),
        task: Task::Enumeration,
        mode: t.mode(),
        theory: render_theory(t).unwrap_or_default(),
        question: ENUMERATION_QUESTION.to_string(),
        answer: targets
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" "),
        depth: targets.iter().filter_map(|t| t.depth).max(),
        proofs: Vec::new(),
        targets,
    }
}

/// Abduction questions: a sample of the Unknown literals of an OWA theory,
/// each with its exhaustive set of single missing facts.
pub fn gen_abduction_examples(
    t: &Theory,
    theory_id: &str,
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<DatasetExample> {
    if t.mode() != Mode::Owa {
        return Vec::new();
    }
    let (Ok(c), Ok(surface)) = (closure(t), render_theory(t)) else {
        return Vec::new();
    };
    let (mut concludable, mut other): (Vec<Literal>, Vec<Literal>) = question_pool(t)
        .into_iter()
        .filter(|q| answer_with(&c, q).value == TruthValue::Unknown)
        .partition(|q| t.rules().any(|r| match_literal(&r.conclusion, q).is_some()));
    concludable.shuffle(rng);
    other.shuffle(rng);
    let mut picked = Vec::new();
    while picked.len() < cfg.questions_per_theory && !(concludable.is_empty() && other.is_empty()) {
        let from_rules = rng.gen_bool(cfg.abduction_rule_question_share);
        let q = match (from_rules, concludable.is_empty(), other.is_empty()) {
            (true, false, _) | (_, false, true) => concludable.pop(),
            _ => other.pop(),
        };
        picked.extend(q);
    }
    let mut out = Vec::new();
    for q in picked {
        let Ok(a) = abduce_single_fact_with(t, &q, CandidatePolarity::Both) else {
            continue;
        };
        let targets: Vec<Target> = a
            .missing_facts
            .iter()
            .map(|m| Target {
                text: m.text.clone(),
                depth: Some(m.depth),
            })
            .collect();
        out.push(DatasetExample {
            id: format!("{theory_id}-a{}", out.len()),
            theory_id: theory_id.to_string(),
            task: Task::Abduction,
            mode: t.mode(),
            theory: surface.clone(),
            question: text(&q),
            answer: a.to_output(),
            depth: a.missing_facts.iter().map(|m| m.depth).min(),
            proofs: Vec::new(),
            targets,
        });
    }
    out
}
