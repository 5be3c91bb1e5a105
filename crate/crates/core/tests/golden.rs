mod common;

use std::collections::BTreeSet;

use common::{brute_isomorphic, fixture, CHARLIE_QUIET, LION_IMPLICATIONS, LION_PROOF};
use nlproof::abduction::abduce_single_fact;
use nlproof::bridge::{run_iterative_loop, LoopLimits, OneStepRequest, SymbolicGenerator};
use nlproof::datagen::gen_enumeration_example;
use nlproof::grammar::{parse_sentence, render_context, render_fact, split_context};
use nlproof::inference::check_stratifiable;
use nlproof::model::Predicate;
use nlproof::proofs::{all_proofs, decode_proof, encode_proof, shortest_proofs, verify_proof, Dialect};
use nlproof::t5::{export_input, import_input};
use nlproof::{answer, closure, parse_context, parse_question, Mode, TruthValue};

#[test]
fn charlie_quiet_proof_is_reproduced_verbatim() {
    let t = fixture("charlie.txt", Mode::Cwa);
    assert_eq!((t.facts().count(), t.rules().count()), (16, 18));
    assert!(t.lint().is_empty());

    let q = parse_question("Charlie is not quiet?").unwrap();
    let a = answer(&t, &q).unwrap();
    assert_eq!((a.value, a.depth), (TruthValue::False, Some(3)));

    let proofs = all_proofs(&t, &q.negated(), 5000).unwrap().proofs;
    let shortest = shortest_proofs(&proofs);
    assert_eq!(shortest.len(), 1);
    assert_eq!(encode_proof(&shortest[0], Dialect::PercentConc).to_string(), CHARLIE_QUIET);

    let decoded = decode_proof(CHARLIE_QUIET, &t).unwrap().unwrap();
    assert!(brute_isomorphic(&decoded.root, &shortest[0].root));
    assert!(verify_proof(&decoded, &t).is_fully_verified());
}

#[test]
fn charlie_not_kind_is_false() {
    let t = fixture("charlie.txt", Mode::Cwa);
    let q = parse_question("Charlie is not kind?").unwrap();
    let a = answer(&t, &q).unwrap();
    assert_eq!((a.value, a.depth), (TruthValue::False, Some(1)));

    let out = run_iterative_loop(&t, &q, &mut SymbolicGenerator::new(Mode::Cwa), LoopLimits::default()).unwrap();
    assert_eq!(out.value, TruthValue::False);
    assert_eq!(render_fact(out.proof.unwrap().conclusion()).unwrap(), "Charlie is kind.");
}

#[test]
fn charlie_loop_assembles_the_quiet_proof() {
    let t = fixture("charlie.txt", Mode::Cwa);
    let q = parse_question("Charlie is not quiet?").unwrap();
    for seed in 0..5 {
        let mut g = SymbolicGenerator::seeded(Mode::Cwa, seed);
        let out = run_iterative_loop(&t, &q, &mut g, LoopLimits::default()).unwrap();
        assert_eq!(out.value, TruthValue::False);
        let p = out.proof.unwrap();
        assert_eq!(encode_proof(&p, Dialect::PercentConc).to_string(), CHARLIE_QUIET);
    }
}

#[test]
fn lion_answer_and_at_dialect_proof() {
    let t = fixture("lion.txt", Mode::Owa);
    assert_eq!((t.len(), t.rules().count(), t.facts().count()), (20, 9, 11));
    let q = parse_question("The lion is not nice?").unwrap();
    assert_eq!(answer(&t, &q).unwrap().value, TruthValue::True);
    let proofs = all_proofs(&t, &q, 5000).unwrap().proofs;
    let shortest = shortest_proofs(&proofs);
    assert_eq!(shortest.len(), 1);
    assert_eq!(encode_proof(&shortest[0], Dialect::AtInt).to_string(), LION_PROOF);
    assert_eq!(shortest[0].depth(), 5);
}

#[test]
fn lion_sentences_round_trip_through_the_grammar() {
    let text = std::fs::read_to_string(common::data_path("lion.txt")).unwrap();
    let t = parse_context(&text, Mode::Owa).unwrap();
    assert_eq!(render_context(&t).unwrap(), text.trim());
    for s in split_context(&text).unwrap() {
        assert!(parse_sentence(&s.text).is_ok(), "{}", s.text);
    }
    assert!(parse_sentence("Bob is.").is_err());
}

#[test]
fn lion_input_string_round_trips() {
    let ctx = std::fs::read_to_string(common::data_path("lion.txt")).unwrap();
    let s = format!("$answer$ ; $proof$ ; $question$ = The lion is not nice? ; $context$ = {}", ctx.trim());
    let input = import_input(&s).unwrap();
    assert_eq!(input.context.len(), 20);
    assert_eq!(export_input(&input), s);
}

#[test]
fn cow_is_rough_is_a_symbolic_step() {
    let ctx = std::fs::read_to_string(common::data_path("cow.txt")).unwrap();
    for mode in [Mode::Cwa, Mode::Owa] {
        let responses = SymbolicGenerator::new(mode)
            .all_responses(&OneStepRequest::new(ctx.trim()))
            .unwrap();
        assert!(responses
            .iter()
            .any(|r| r.answer == "The cow is rough." && r.proof == "# sent2 sent12"));
    }
}

#[test]
fn lion_closure_has_the_nine_implications() {
    let t = fixture("lion.txt", Mode::Owa);
    let c = closure(&t).unwrap();
    let got: BTreeSet<String> = c.implications().map(|i| render_fact(&i.literal).unwrap()).collect();
    let want: BTreeSet<String> = LION_IMPLICATIONS
        .split_inclusive(". ")
        .map(|s| s.trim().to_string())
        .collect();
    assert_eq!(want.len(), 9);
    assert_eq!(got, want);
    assert_eq!(gen_enumeration_example(&t, "lion").answer, LION_IMPLICATIONS);
}

#[test]
fn dave_abduction_contains_the_printed_facts() {
    let t = fixture("dave.txt", Mode::Owa);
    let q = parse_question("Dave is rough.").unwrap();
    let got: BTreeSet<String> = abduce_single_fact(&t, &q).unwrap().texts().into_iter().collect();
    assert!(got.contains("Dave is young."));
    assert!(got.contains("Dave is smart."));
    // rule4 then rule3 also prove it from this one fact.
    assert!(got.contains("Dave is white."));
}

#[test]
#[ignore = "the printed answer omits \"Dave is white.\", which rule4 and rule3 make sufficient"]
fn dave_abduction_is_exactly_the_printed_set() {
    let t = fixture("dave.txt", Mode::Owa);
    let q = parse_question("Dave is rough.").unwrap();
    let got: BTreeSet<String> = abduce_single_fact(&t, &q).unwrap().texts().into_iter().collect();
    let want: BTreeSet<String> = ["Dave is young.", "Dave is smart."].map(String::from).into();
    assert_eq!(got, want);
}

#[test]
fn negation_cycle_is_rejected_with_the_cycle() {
    let t = parse_context(
        "sent1: Bob is big. sent2: If someone is big and not red then they are kind. sent3: If someone is kind then they are red.",
        Mode::Cwa,
    )
    .unwrap();
    let e = check_stratifiable(&t).unwrap_err();
    let preds: BTreeSet<&Predicate> = e.cycle.iter().collect();
    assert!(preds.contains(&Predicate::Attribute("red".into())));
    assert!(preds.contains(&Predicate::Attribute("kind".into())));
    assert!(closure(&t).is_err());
}
