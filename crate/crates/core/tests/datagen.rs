use std::collections::BTreeSet;

use nlproof::datagen::{gen_dataset, gen_theories, split_of, theory_id, DatasetExample, GenConfig, Split, Task};
use nlproof::grammar::parse_surface;
use nlproof::metrics::normalize_sentence;
use nlproof::proofs::{decode_proof, verify_proof};
use nlproof::t5::{answer_items, export_example, import_input, import_output};
use nlproof::{answer, closure, parse_question, Mode};

fn cfg(mode: Mode, depth: u32) -> GenConfig {
    GenConfig::profile(mode, depth).with_seed(7)
}

#[test]
fn same_seed_gives_identical_datasets() {
    for task in [Task::Qa, Task::Abduction] {
        let a = gen_dataset(&cfg(Mode::Owa, 2), 20, task).unwrap();
        let b = gen_dataset(&cfg(Mode::Owa, 2), 20, task).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
    let other = gen_dataset(&GenConfig::profile(Mode::Owa, 2).with_seed(8), 20, Task::Qa).unwrap();
    assert_ne!(gen_dataset(&cfg(Mode::Owa, 2), 20, Task::Qa).unwrap(), other);
}

#[test]
fn theories_reach_the_target_depth() {
    for mode in [Mode::Cwa, Mode::Owa] {
        for depth in 0..=3 {
            for t in gen_theories(&cfg(mode, depth), 25).unwrap() {
                let c = closure(&t).unwrap();
                assert!(c.max_depth() >= depth);
                if mode == Mode::Cwa {
                    assert!(t.lint().is_empty());
                }
            }
        }
    }
}

#[test]
fn jsonl_lines_round_trip() {
    let golds = gen_dataset(&cfg(Mode::Cwa, 3), 10, Task::Qa).unwrap();
    let text: String = golds.iter().map(|g| serde_json::to_string(g).unwrap() + "\n").collect();
    let back: Vec<DatasetExample> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(back, golds);
}

#[test]
fn qa_examples_agree_with_the_reasoner_and_their_proofs_verify() {
    for mode in [Mode::Cwa, Mode::Owa] {
        for ex in gen_dataset(&cfg(mode, 3), 30, Task::Qa).unwrap() {
            let t = parse_surface(&ex.theory, mode).unwrap();
            let q = parse_question(&ex.question).unwrap();
            let a = answer(&t, &q).unwrap();
            assert_eq!(ex.answer, a.value.to_string(), "{}", ex.id);
            assert_eq!(ex.depth, a.depth, "{}", ex.id);
            assert!(ex.depth.is_none_or(|d| d <= 3));
            for p in &ex.proofs {
                let d = decode_proof(p, &t).unwrap().unwrap();
                assert!(verify_proof(&d, &t).is_fully_verified(), "{p}");
            }
        }
    }
}

#[test]
fn abduction_targets_each_prove_the_question() {
    for ex in gen_dataset(&cfg(Mode::Owa, 3), 20, Task::Abduction).unwrap() {
        let items: BTreeSet<String> = answer_items(Task::Abduction, &ex.answer).into_iter().collect();
        let targets: BTreeSet<String> = ex.targets.iter().map(|t| t.text.clone()).collect();
        assert_eq!(items, targets);
        let q = parse_question(&ex.question).unwrap();
        for target in &ex.targets {
            let mut sentences = ex.theory.clone();
            let next = format!("sent{}", sentences.len() + 1);
            sentences.push(nlproof::grammar::SurfaceSentence {
                id: next.parse().unwrap(),
                text: target.text.clone(),
            });
            let extended = parse_surface(&sentences, Mode::Owa).unwrap();
            assert!(closure(&extended).unwrap().contains(&q), "{} does not give {}", target.text, ex.question);
        }
    }
}

#[test]
fn t5_export_reimports() {
    for task in [Task::Qa, Task::IterativeStep, Task::Enumeration, Task::Abduction] {
        for ex in gen_dataset(&cfg(Mode::Owa, 2), 5, task).unwrap() {
            let (input, output) = export_example(&ex);
            let i = import_input(&input).unwrap();
            assert_eq!((i.task, &i.question, &i.context), (ex.task, &ex.question, &ex.theory));
            let o = import_output(&output).unwrap();
            assert_eq!(normalize_sentence(&o.answer), normalize_sentence(&ex.answer));
            assert_eq!(o.proof.is_some(), matches!(task, Task::Qa | Task::IterativeStep));
        }
    }
}

#[test]
fn splits_follow_the_theory_id() {
    let c = cfg(Mode::Cwa, 1);
    let splits: Vec<Split> = (0..300).map(|i| split_of(&theory_id(&c, i))).collect();
    assert_eq!(splits, (0..300).map(|i| split_of(&theory_id(&c, i))).collect::<Vec<_>>());
    for s in [Split::Train, Split::Dev, Split::Test] {
        assert!(splits.contains(&s));
    }
}
