//! Synthetic theories and the four example kinds built from them.
//!
//! All randomness comes from `GenConfig::seed`; theory `i` of a batch draws
//! from its own ChaCha stream, so batches are identical for any job count.

mod examples;
mod theory;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::model::{Mode, Theory};
use crate::proofs::{Dialect, DEFAULT_PROOF_CAP};

pub use examples::{
    gen_abduction_examples, gen_enumeration_example, gen_iterative_examples, gen_qa_examples,
    iterative_step_proofs, DatasetExample, Target, Task, ENUMERATION_QUESTION, ITERATIVE_QUESTION,
};
pub use theory::gen_theory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WorldChoice {
    People,
    Animals,
    Mixed,
}

/// Knobs of the theory and question sampler. Ranges are inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub mode: Mode,
    pub target_depth: u32,
    pub world: WorldChoice,
    pub entities: (usize, usize),
    pub attributes: (usize, usize),
    pub verbs: (usize, usize),
    pub facts: (usize, usize),
    pub rules: (usize, usize),
    /// Relative weights of rules with 1, 2, 3 conditions.
    pub condition_weights: [u32; 3],
    pub relation_prob: f64,
    pub var_rule_prob: f64,
    /// Chance that a rule's first condition reuses an earlier rule's
    /// conclusion predicate.
    pub chain_prob: f64,
    /// Chance that a condition of a variable rule is about a constant.
    pub ground_condition_prob: f64,
    pub fact_negation_prob: f64,
    pub condition_negation_prob: f64,
    pub conclusion_negation_prob: f64,
    /// Retries per theory before giving up.
    pub max_retries: usize,
    pub questions_per_theory: usize,
    /// Share of abduction questions drawn from literals some rule concludes.
    pub abduction_rule_question_share: f64,
    /// Share of CWA questions whose answer rests on no proof.
    pub unprovable_ratio: f64,
    pub proof_cap: usize,
    pub dialect: Dialect,
    pub seed: u64,
}

impl GenConfig {
    /// Default profile for a mode and target depth.
    pub fn profile(mode: Mode, target_depth: u32) -> GenConfig {
        let owa = mode == Mode::Owa;
        GenConfig {
            mode,
            target_depth,
            world: WorldChoice::Mixed,
            entities: (2, 4),
            attributes: (3, 6),
            verbs: (1, 3),
            facts: (3, 14),
            rules: (4, 10),
            condition_weights: [5, 4, 1],
            relation_prob: 0.5,
            var_rule_prob: 0.7,
            chain_prob: 0.5,
            ground_condition_prob: 0.15,
            fact_negation_prob: if owa { 0.25 } else { 0.0 },
            condition_negation_prob: 0.2,
            conclusion_negation_prob: if owa { 0.25 } else { 0.0 },
            max_retries: 20_000,
            questions_per_theory: 6,
            abduction_rule_question_share: 0.95,
            unprovable_ratio: 0.4,
            proof_cap: DEFAULT_PROOF_CAP,
            dialect: Dialect::PercentConc,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("no acceptable theory after {attempts} attempts")]
    GenerationExhausted { attempts: usize },
}

const THEORY_STREAM: u64 = 0;
const EXAMPLE_STREAM: u64 = 1;

/// Deterministic generator for item `index` of purpose `stream`.
pub(crate) fn rng_for(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(stream.to_le_bytes());
    h.update(index.to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

pub fn theory_id(cfg: &GenConfig, index: u64) -> String {
    format!("{}-D{}-{}-{index}", cfg.mode, cfg.target_depth, cfg.seed)
}

/// Theory `index` of the batch described by `cfg`.
pub fn gen_theory_at(cfg: &GenConfig, index: u64) -> Result<Theory, GenError> {
    gen_theory(cfg, &mut rng_for(cfg.seed, THEORY_STREAM, index))
}

/// `n` theories, generated in parallel, in index order.
pub fn gen_theories(cfg: &GenConfig, n: usize) -> Result<Vec<Theory>, GenError> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| gen_theory_at(cfg, i))
        .collect()
}

/// Examples of one task for theories `0..n`, in index order.
pub fn gen_dataset(cfg: &GenConfig, n: usize, task: Task) -> Result<Vec<DatasetExample>, GenError> {
    let per_theory: Vec<Vec<DatasetExample>> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let t = gen_theory_at(cfg, i)?;
            let id = theory_id(cfg, i);
            let mut rng = rng_for(cfg.seed, EXAMPLE_STREAM, i);
            Ok(match task {
                Task::Qa => gen_qa_examples(&t, &id, cfg, &mut rng),
                Task::IterativeStep => gen_iterative_examples(&t, &id, &mut rng),
                Task::Enumeration => vec![gen_enumeration_example(&t, &id)],
                Task::Abduction => gen_abduction_examples(&t, &id, cfg, &mut rng),
            })
        })
        .collect::<Result<_, GenError>>()?;
    Ok(per_theory.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

/// 70/10/20 split keyed on a stable hash of the theory id.
pub fn split_of(theory_id: &str) -> Split {
    let digest = Sha256::digest(theory_id.as_bytes());
    let bucket = u64::from_le_bytes(digest[..8].try_into().expect("8 bytes")) % 100;
    match bucket {
        0..=69 => Split::Train,
        70..=79 => Split::Dev,
        _ => Split::Test,
    }
}

/// Iterative training mix: all of `primary` plus a seeded `ratio` share of
/// `lower` (theories of smaller depth).
pub fn mix_lower_depth<T: Clone>(primary: &[T], lower: &[T], ratio: f64, seed: u64) -> Vec<T> {
    let take = ((lower.len() as f64) * ratio.clamp(0.0, 1.0)).round() as usize;
    let mut rng = rng_for(seed, 2, 0);
    let mut picked: Vec<&T> = lower.iter().collect();
    picked.shuffle(&mut rng);
    primary
        .iter()
        .chain(picked.into_iter().take(take))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_roughly_70_10_20() {
        let mut counts = [0usize; 3];
        for i in 0..10_000 {
            counts[split_of(&format!("t{i}")) as usize] += 1;
        }
        assert!((6700..7300).contains(&counts[0]), "{counts:?}");
        assert!((800..1200).contains(&counts[1]), "{counts:?}");
        assert!((1800..2200).contains(&counts[2]), "{counts:?}");
    }

    #[test]
    fn mixing_takes_share_of_lower() {
        let mixed = mix_lower_depth(&[1, 2, 3], &(10..20).collect::<Vec<_>>(), 0.2, 5);
        assert_eq!(mixed.len(), 5);
        assert_eq!(&mixed[..3], &[1, 2, 3]);
    }

    #[test]
    fn same_seed_same_theory() {
        let cfg = GenConfig::profile(Mode::Cwa, 3).with_seed(11);
        assert_eq!(gen_theory_at(&cfg, 4).unwrap(), gen_theory_at(&cfg, 4).unwrap());
    }
}
