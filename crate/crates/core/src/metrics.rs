//! Scoring predictions against gold examples, broken down by proof depth.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datagen::{DatasetExample, Task};
use crate::grammar::parse_surface;
use crate::model::Theory;
use crate::proofs::{decode_proof, verify_proof, CanonicalProof, ProofDag};
use crate::t5::{answer_items, import_output, FormatError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProofMatch {
    /// Concluded-fact texts must match too.
    #[default]
    Full,
    /// Only rule and leaf structure must match.
    Skeleton,
}

/// One model prediction: `{id, answer, proof}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub answer: String,
    #[serde(default)]
    pub proof: Option<String>,
}

impl Prediction {
    /// Read a raw `$answer$ = ... ; $proof$ = ...` output string.
    pub fn from_t5(id: impl Into<String>, output: &str) -> Result<Prediction, FormatError> {
        let o = import_output(output.trim())?;
        Ok(Prediction {
            id: id.into(),
            answer: o.answer,
            proof: o.proof,
        })
    }

    /// Gold answer and first gold proof of an example, as a prediction.
    pub fn from_gold(ex: &DatasetExample) -> Prediction {
        Prediction {
            id: ex.id.clone(),
            answer: ex.answer.clone(),
            proof: match ex.task {
                Task::Qa | Task::IterativeStep => {
                    Some(ex.proofs.first().cloned().unwrap_or_else(|| "None".into()))
                }
                _ => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignmentError {
    #[error("no prediction for gold example `{0}`")]
    MissingPrediction(String),
    #[error("prediction `{0}` has no gold example")]
    UnexpectedPrediction(String),
    #[error("duplicate prediction id `{0}`")]
    DuplicatePrediction(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthRow {
    /// "0", "1", ..., "N/A" or "All".
    pub depth: String,
    pub count: usize,
    pub answer_acc: f64,
    pub proof_acc: f64,
    pub verified_acc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub task: Task,
    pub rows: Vec<DepthRow>,
    /// Enumeration: micro F1. Abduction: mean per-example F1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f1: Option<f64>,
    /// Enumeration: exact-set accuracy. Abduction: perfect-match accuracy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set_acc: Option<f64>,
    /// Abduction: recall of gold facts by the depth of their proof.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub recall_by_depth: Vec<(String, usize, f64)>,
}

impl ScoreReport {
    pub fn all(&self) -> &DepthRow {
        self.rows.last().expect("the All row is always present")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ScoreReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, p, v) = match self.task {
            Task::Qa | Task::IterativeStep => ("Answer", "Proof", "Verified"),
            Task::Enumeration => ("SetAcc", "F1", "-"),
            Task::Abduction => ("Perfect", "F1", "-"),
        };
        writeln!(f, "{:<6} {:>7} {:>8} {:>8} {:>8}", "Depth", "Count", a, p, v)?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<6} {:>7} {:>8.2} {:>8.2} {:>8.2}",
                r.depth,
                r.count,
                100.0 * r.answer_acc,
                100.0 * r.proof_acc,
                100.0 * r.verified_acc
            )?;
        }
        if let Some(x) = self.f1 {
            writeln!(f, "F1      {x:.4}")?;
        }
        if let Some(x) = self.set_acc {
            writeln!(f, "Acc     {x:.4}")?;
        }
        for (d, n, r) in &self.recall_by_depth {
            writeln!(f, "Recall@{d:<4} {n:>6} {:.2}", 100.0 * r)?;
        }
        Ok(())
    }
}

/// Trim, collapse internal whitespace and ensure a terminal period.
pub fn normalize_sentence(s: &str) -> String {
    let mut out = s.split_whitespace().collect::<Vec<_>>().join(" ");
    if !out.is_empty() && !out.ends_with('.') {
        out.push('.');
    }
    out
}

fn normalize_label(s: &str) -> String {
    s.trim().to_ascii_lowercase()
}

fn depth_key(d: Option<u32>) -> String {
    d.map_or_else(|| "N/A".to_string(), |d| d.to_string())
}

fn align<'a>(
    preds: &'a [Prediction],
    golds: &[DatasetExample],
) -> Result<Vec<&'a Prediction>, AlignmentError> {
    let mut by_id: HashMap<&str, &Prediction> = HashMap::new();
    for p in preds {
        if by_id.insert(p.id.as_str(), p).is_some() {
            return Err(AlignmentError::DuplicatePrediction(p.id.clone()));
        }
    }
    let gold_ids: BTreeSet<&str> = golds.iter().map(|g| g.id.as_str()).collect();
    if let Some(p) = preds.iter().find(|p| !gold_ids.contains(p.id.as_str())) {
        return Err(AlignmentError::UnexpectedPrediction(p.id.clone()));
    }
    golds
        .iter()
        .map(|g| {
            by_id
                .get(g.id.as_str())
                .copied()
                .ok_or_else(|| AlignmentError::MissingPrediction(g.id.clone()))
        })
        .collect()
}

#[derive(Default)]
struct Tally {
    count: usize,
    a: f64,
    p: f64,
    v: f64,
}

fn rows(tallies: BTreeMap<(u32, String), Tally>) -> Vec<DepthRow> {
    let mut all = Tally::default();
    let mut out: Vec<DepthRow> = tallies
        .into_iter()
        .map(|((_, depth), t)| {
            all.count += t.count;
            all.a += t.a;
            all.p += t.p;
            all.v += t.v;
            row(depth, &t)
        })
        .collect();
    out.push(row("All".into(), &all));
    out
}

fn row(depth: String, t: &Tally) -> DepthRow {
    let n = t.count.max(1) as f64;
    DepthRow {
        depth,
        count: t.count,
        answer_acc: t.a / n,
        proof_acc: t.p / n,
        verified_acc: t.v / n,
    }
}

/// Sort key placing numeric depths first, then N/A.
fn order(d: Option<u32>) -> (u32, String) {
    (d.unwrap_or(u32::MAX), depth_key(d))
}

/// Parsed theories keyed by theory id.
#[derive(Default)]
struct TheoryCache(HashMap<String, Option<Theory>>);

impl TheoryCache {
    fn get(&mut self, ex: &DatasetExample) -> Option<&Theory> {
        let key = format!("{}\u{0}{}", ex.theory_id, ex.theory.len());
        self.0
            .entry(key)
            .or_insert_with(|| parse_surface(&ex.theory, ex.mode).ok())
            .as_ref()
    }
}

fn is_none_proof(p: Option<&str>) -> bool {
    p.is_none_or(|p| p.trim() == "None" || p.trim().is_empty())
}

fn proof_key(p: &ProofDag, m: ProofMatch) -> CanonicalProof {
    match m {
        ProofMatch::Full => p.canonical(),
        ProofMatch::Skeleton => p.skeleton(),
    }
}

/// Answer, proof and verified-proof accuracy per gold depth. A proof is
/// correct when it matches any gold proof; undecodable proofs score 0.
pub fn score_qa(
    preds: &[Prediction],
    golds: &[DatasetExample],
    mode: ProofMatch,
) -> Result<ScoreReport, AlignmentError> {
    let aligned = align(preds, golds)?;
    let mut cache = TheoryCache::default();
    let mut tallies: BTreeMap<(u32, String), Tally> = BTreeMap::new();
    for (g, p) in golds.iter().zip(aligned) {
        let answer_ok = normalize_label(&p.answer) == normalize_label(&g.answer);
        let (proof_ok, verified_ok) = match cache.get(g) {
            None => (false, false),
            Some(t) => {
                if g.proofs.is_empty() {
                    let ok = is_none_proof(p.proof.as_deref());
                    (ok, ok)
                } else {
                    match p.proof.as_deref().map(|s| decode_proof(s, t)) {
                        Some(Ok(Some(pd))) => {
                            let key = proof_key(&pd, mode);
                            let ok = g.proofs.iter().any(|gs| {
                                matches!(decode_proof(gs, t), Ok(Some(gd)) if proof_key(&gd, mode) == key)
                            });
                            (ok, ok && verify_proof(&pd, t).is_fully_verified())
                        }
                        _ => (false, false),
                    }
                }
            }
        };
        let t = tallies.entry(order(g.depth)).or_default();
        t.count += 1;
        t.a += f64::from(u8::from(answer_ok));
        t.p += f64::from(u8::from(proof_ok));
        t.v += f64::from(u8::from(verified_ok));
    }
    Ok(ScoreReport {
        task: golds.first().map_or(Task::Qa, |g| g.task),
        rows: rows(tallies),
        f1: None,
        set_acc: None,
        recall_by_depth: Vec::new(),
    })
}

fn item_set(task: Task, answer: &str) -> BTreeSet<String> {
    answer_items(task, answer)
        .iter()
        .map(|s| normalize_sentence(s))
        .collect()
}

fn gold_set(g: &DatasetExample) -> BTreeSet<String> {
    if g.targets.is_empty() {
        item_set(g.task, &g.answer)
    } else {
        g.targets.iter().map(|t| normalize_sentence(&t.text)).collect()
    }
}

/// F1 from counts; no gold and no prediction counts as perfect.
pub fn f1_score(tp: usize, fp: usize, fn_: usize) -> f64 {
    if tp + fp + fn_ == 0 {
        return 1.0;
    }
    if tp == 0 {
        return 0.0;
    }
    let p = tp as f64 / (tp + fp) as f64;
    let r = tp as f64 / (tp + fn_) as f64;
    2.0 * p * r / (p + r)
}

fn overlap(pred: &BTreeSet<String>, gold: &BTreeSet<String>) -> (usize, usize, usize) {
    let tp = pred.intersection(gold).count();
    (tp, pred.len() - tp, gold.len() - tp)
}

/// Micro-averaged F1 over implications plus exact-set accuracy (order
/// ignored). Rows hold set accuracy and per-row micro F1.
pub fn score_enumeration(
    preds: &[Prediction],
    golds: &[DatasetExample],
) -> Result<ScoreReport, AlignmentError> {
    let aligned = align(preds, golds)?;
    let mut tallies: BTreeMap<(u32, String), (Tally, [usize; 3])> = BTreeMap::new();
    let mut totals = [0usize; 3];
    let mut exact = 0usize;
    for (g, p) in golds.iter().zip(aligned) {
        let ps = item_set(Task::Enumeration, &p.answer);
        let gs = gold_set(g);
        let (tp, fp, fn_) = overlap(&ps, &gs);
        let hit = ps == gs;
        exact += usize::from(hit);
        for (t, x) in totals.iter_mut().zip([tp, fp, fn_]) {
            *t += x;
        }
        let (t, c) = tallies.entry(order(g.depth)).or_default();
        t.count += 1;
        t.a += f64::from(u8::from(hit));
        for (t, x) in c.iter_mut().zip([tp, fp, fn_]) {
            *t += x;
        }
    }
    let mut out = Vec::new();
    for ((_, depth), (t, c)) in tallies {
        let mut r = row(depth, &t);
        r.proof_acc = f1_score(c[0], c[1], c[2]);
        out.push(r);
    }
    let n = golds.len().max(1) as f64;
    let f1 = f1_score(totals[0], totals[1], totals[2]);
    out.push(DepthRow {
        depth: "All".into(),
        count: golds.len(),
        answer_acc: exact as f64 / n,
        proof_acc: f1,
        verified_acc: 0.0,
    });
    Ok(ScoreReport {
        task: Task::Enumeration,
        rows: out,
        f1: Some(f1),
        set_acc: Some(exact as f64 / n),
        recall_by_depth: Vec::new(),
    })
}

/// Per-example F1 and perfect-match accuracy, plus recall of gold facts
/// bucketed by the depth of the proof each one completes.
pub fn score_abduction(
    preds: &[Prediction],
    golds: &[DatasetExample],
) -> Result<ScoreReport, AlignmentError> {
    let aligned = align(preds, golds)?;
    let mut tallies: BTreeMap<(u32, String), Tally> = BTreeMap::new();
    let mut recall: BTreeMap<(u32, String), (usize, usize)> = BTreeMap::new();
    for (g, p) in golds.iter().zip(aligned) {
        let ps = item_set(Task::Abduction, &p.answer);
        let gs = gold_set(g);
        let (tp, fp, fn_) = overlap(&ps, &gs);
        let f1 = f1_score(tp, fp, fn_);
        let t = tallies.entry(order(g.depth)).or_default();
        t.count += 1;
        t.a += f64::from(u8::from(f1 == 1.0));
        t.p += f1;
        for target in &g.targets {
            let r = recall.entry(order(target.depth)).or_default();
            r.0 += 1;
            r.1 += usize::from(ps.contains(&normalize_sentence(&target.text)));
        }
    }
    let rows = rows(tallies);
    let all = rows.last().expect("All row");
    let (f1, acc) = (all.proof_acc, all.answer_acc);
    Ok(ScoreReport {
        task: Task::Abduction,
        rows,
        f1: Some(f1),
        set_acc: Some(acc),
        recall_by_depth: recall
            .into_iter()
            .map(|((_, d), (n, hit))| (d, n, hit as f64 / n.max(1) as f64))
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub depth: String,
    pub count: usize,
    pub verified: usize,
    pub rate: f64,
}

/// Share of predicted proofs that fully verify against their theory, by
/// gold depth. Examples whose gold has no proof are skipped; undecodable
/// predictions count as unverified.
pub fn run_verification_audit(
    preds: &[Prediction],
    golds: &[DatasetExample],
) -> Result<Vec<AuditRow>, AlignmentError> {
    let aligned = align(preds, golds)?;
    let mut cache = TheoryCache::default();
    let mut buckets: BTreeMap<(u32, String), (usize, usize)> = BTreeMap::new();
    for (g, p) in golds.iter().zip(aligned) {
        if g.proofs.is_empty() {
            continue;
        }
        let ok = match (cache.get(g), p.proof.as_deref()) {
            (Some(t), Some(s)) => {
                matches!(decode_proof(s, t), Ok(Some(pd)) if verify_proof(&pd, t).is_fully_verified())
            }
            _ => false,
        };
        let b = buckets.entry(order(g.depth)).or_default();
        b.0 += 1;
        b.1 += usize::from(ok);
    }
    let (mut n, mut v) = (0, 0);
    let mut out: Vec<AuditRow> = buckets
        .into_iter()
        .map(|((_, depth), (count, verified))| {
            n += count;
            v += verified;
            AuditRow {
                depth,
                count,
                verified,
                rate: verified as f64 / count.max(1) as f64,
            }
        })
        .collect();
    out.push(AuditRow {
        depth: "All".into(),
        count: n,
        verified: v,
        rate: v as f64 / n.max(1) as f64,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f1_arithmetic() {
        assert!((f1_score(8, 0, 1) - 16.0 / 17.0).abs() < 1e-12);
        assert!((f1_score(1, 0, 1) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(f1_score(0, 0, 0), 1.0);
        assert_eq!(f1_score(0, 2, 0), 0.0);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_sentence("  The dog   is big "), "The dog is big.");
        assert_eq!(normalize_sentence("Bob is red."), "Bob is red.");
    }
}
