//! Text-to-text strings:
//!
//! ```text
//! $answer$ ; $proof$ ; $question$ = <q> ; $context$ = <ctx>      (QA, iterative, enumeration)
//! $answer$ ; $question$ = <q> ; $context$ = <ctx>                (abduction)
//! $answer$ = <a> ; $proof$ = <p>                                 (QA, iterative)
//! $answer$ = <a>                                                 (enumeration, abduction)
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datagen::{DatasetExample, Task, ENUMERATION_QUESTION, ITERATIVE_QUESTION};
use crate::grammar::{join_context, split_context, SurfaceSentence};

const WITH_PROOF: &str = "$answer$ ; $proof$ ; $question$ = ";
const NO_PROOF: &str = "$answer$ ; $question$ = ";
const CONTEXT: &str = " ; $context$ = ";
const ANSWER: &str = "$answer$ = ";
const PROOF: &str = " ; $proof$ = ";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{template}: {message}")]
pub struct FormatError {
    /// Which template was being matched.
    pub template: &'static str,
    pub message: String,
}

fn format_err(template: &'static str, message: impl Into<String>) -> FormatError {
    FormatError {
        template,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct T5Input {
    pub task: Task,
    pub question: String,
    pub context: Vec<SurfaceSentence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct T5Output {
    pub answer: String,
    pub proof: Option<String>,
}

pub fn task_of_question(question: &str) -> Task {
    match question {
        ITERATIVE_QUESTION => Task::IterativeStep,
        ENUMERATION_QUESTION => Task::Enumeration,
        _ => Task::Qa,
    }
}

pub fn export_input(input: &T5Input) -> String {
    let head = match input.task {
        Task::Abduction => NO_PROOF,
        _ => WITH_PROOF,
    };
    format!(
        "{head}{}{CONTEXT}{}",
        input.question,
        join_context(&input.context)
    )
}

/// Parse an input string; the task follows from the template and question.
pub fn import_input(s: &str) -> Result<T5Input, FormatError> {
    let (abduction, rest) = if let Some(r) = s.strip_prefix(WITH_PROOF) {
        (false, r)
    } else if let Some(r) = s.strip_prefix(NO_PROOF) {
        (true, r)
    } else {
        return Err(format_err(
            "input",
            "expected `$answer$ ; $proof$ ; $question$ = ` or `$answer$ ; $question$ = `",
        ));
    };
    let template = if abduction { "abduction input" } else { "input" };
    let (question, ctx) = rest
        .split_once(CONTEXT)
        .ok_or_else(|| format_err(template, "missing ` ; $context$ = `"))?;
    let context = split_context(ctx).map_err(|e| format_err(template, e.to_string()))?;
    let task = if abduction {
        Task::Abduction
    } else {
        task_of_question(question)
    };
    Ok(T5Input {
        task,
        question: question.to_string(),
        context,
    })
}

pub fn export_output(o: &T5Output) -> String {
    match &o.proof {
        Some(p) => format!("{ANSWER}{}{PROOF}{p}", o.answer),
        None => format!("{ANSWER}{}", o.answer),
    }
}

pub fn import_output(s: &str) -> Result<T5Output, FormatError> {
    let rest = s
        .strip_prefix(ANSWER)
        .ok_or_else(|| format_err("output", "expected `$answer$ = `"))?;
    Ok(match rest.split_once(PROOF) {
        Some((a, p)) => T5Output {
            answer: a.to_string(),
            proof: Some(p.to_string()),
        },
        None => T5Output {
            answer: rest.to_string(),
            proof: None,
        },
    })
}

/// Input and gold output strings of a dataset example. QA and iterative
/// outputs carry the first gold proof, or "None".
pub fn export_example(ex: &DatasetExample) -> (String, String) {
    let input = export_input(&T5Input {
        task: ex.task,
        question: ex.question.clone(),
        context: ex.theory.clone(),
    });
    let proof = match ex.task {
        Task::Qa | Task::IterativeStep => {
            Some(ex.proofs.first().cloned().unwrap_or_else(|| "None".into()))
        }
        Task::Enumeration | Task::Abduction => None,
    };
    let output = export_output(&T5Output {
        answer: ex.answer.clone(),
        proof,
    });
    (input, output)
}

/// Split an output answer into its items: space-separated sentences for
/// enumeration, " , "-separated facts for abduction. "None" and the empty
/// string give no items.
pub fn answer_items(task: Task, answer: &str) -> Vec<String> {
    let answer = answer.trim();
    if answer.is_empty() || answer == "None" {
        return Vec::new();
    }
    match task {
        Task::Abduction => answer.split(" , ").map(|s| s.trim().to_string()).collect(),
        _ => {
            let mut out = Vec::new();
            let mut cur = String::new();
            for word in answer.split_whitespace() {
                if !cur.is_empty() {
                    cur.push(' ');
                }
                cur.push_str(word);
                if word.ends_with('.') {
                    out.push(std::mem::take(&mut cur));
                }
            }
            if !cur.is_empty() {
                out.push(cur);
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const C2_IN: &str = "$answer$ ; $proof$ ; $question$ = What is one single-hop inference? ; $context$ = sent1: If something eats the cow and it is big then the cow sees the bald eagle. sent2: If something likes the bald eagle then it is rough. sent12: The cow likes the bald eagle.";
    const C5_IN: &str = "$answer$ ; $question$ = Dave is rough. ; $context$ = triple1: Anne is white. rule3: All smart people are rough.";

    #[test]
    fn inputs_round_trip() {
        for s in [C2_IN, C5_IN] {
            assert_eq!(export_input(&import_input(s).unwrap()), s);
        }
        assert_eq!(import_input(C2_IN).unwrap().task, Task::IterativeStep);
        assert_eq!(import_input(C5_IN).unwrap().task, Task::Abduction);
    }

    #[test]
    fn outputs_round_trip() {
        for s in [
            "$answer$ = The cow is rough. ; $proof$ = # sent2 sent12",
            "$answer$ = Dave is young. , Dave is smart.",
            "$answer$ = None ; $proof$ = None",
        ] {
            assert_eq!(export_output(&import_output(s).unwrap()), s);
        }
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(import_input("hello world").is_err());
        assert!(import_input("$answer$ ; $proof$ ; $question$ = Bob is big?").is_err());
        assert!(import_output("answer: yes").is_err());
    }

    #[test]
    fn items() {
        assert_eq!(
            answer_items(Task::Enumeration, "The dog is big. The tiger visits the dog."),
            vec!["The dog is big.", "The tiger visits the dog."]
        );
        assert_eq!(
            answer_items(Task::Abduction, "Dave is young. , Dave is smart."),
            vec!["Dave is young.", "Dave is smart."]
        );
        assert!(answer_items(Task::Abduction, "None").is_empty());
    }
}
