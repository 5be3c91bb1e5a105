use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use nlproof::datagen::DatasetExample;
use nlproof::grammar::parse_surface;
use nlproof::metrics::Prediction;
use nlproof::t5::import_input;
use nlproof::{Mode, Theory};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

/// A theory file holds a context (`sent1: ... sent2: ...`, any line breaks)
/// or a full text-to-text input string.
pub fn read_theory(path: &Path, mode: Mode) -> Result<Theory> {
    let text = read_text(path)?;
    let text = text.trim();
    let sentences = if text.starts_with("$answer$") {
        import_input(text)
            .with_context(|| format!("{}: not a text-to-text input", path.display()))?
            .context
    } else {
        nlproof::grammar::split_context(text).with_context(|| format!("{}", path.display()))?
    };
    parse_surface(&sentences, mode).with_context(|| format!("{}", path.display()))
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = read_text(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).with_context(|| format!("{}:{}: bad record", path.display(), i + 1))
        })
        .collect()
}

/// Predictions as JSONL `{id, answer, proof}` records, or one raw output
/// string per line taking its id from the gold example at the same line.
pub fn read_predictions(path: &Path, gold_ids: &[String]) -> Result<Vec<Prediction>> {
    let text = read_text(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let line = line.trim();
        let where_ = || format!("{}:{}", path.display(), i + 1);
        if line.starts_with('{') {
            // A gold example stands for its own answer and first proof.
            let p = match serde_json::from_str::<DatasetExample>(line) {
                Ok(g) => Prediction::from_gold(&g),
                Err(_) => serde_json::from_str(line).with_context(|| format!("{}: bad prediction", where_()))?,
            };
            out.push(p);
        } else {
            let Some(id) = gold_ids.get(out.len()) else {
                bail!("{}: more raw predictions than gold examples", where_());
            };
            out.push(Prediction::from_t5(id.clone(), line).with_context(where_)?);
        }
    }
    Ok(out)
}

/// Output sink: a file when a path is given, stdout otherwise.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_jsonl<T: Serialize>(w: &mut dyn Write, items: &[T]) -> Result<()> {
    for it in items {
        serde_json::to_writer(&mut *w, it)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
