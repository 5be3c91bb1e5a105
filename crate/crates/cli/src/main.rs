mod io;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nlproof::abduction::abduce_single_fact;
use nlproof::bridge::{
    run_iterative_loop, LoopLimits, OneStepGenerator, RemoteGenerator, SymbolicGenerator,
    GENERATOR_URL_ENV,
};
use nlproof::config::RunConfig;
use nlproof::datagen::{gen_dataset, DatasetExample, GenConfig, Task};
use nlproof::grammar::{render_fact, render_theory};
use nlproof::metrics::{
    run_verification_audit, score_abduction, score_enumeration, score_qa, Prediction, ProofMatch,
};
use nlproof::proofs::{
    all_proofs, decode_proof, encode_proof, shortest_proofs, verify_proof, Dialect, ProofDag,
    VerifiedReport, DEFAULT_PROOF_CAP,
};
use nlproof::t5::export_example;
use nlproof::{closure, parse_question, Literal, Mode, Theory};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "nlproof", version, about = "Rule-theory reasoning, proofs and dataset tooling")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    /// Semantics: cwa or owa.
    #[arg(long, global = true, default_value = "cwa")]
    mode: Mode,
    /// Proof encoding dialect.
    #[arg(long, global = true, value_enum, default_value_t = DialectArg::Percent)]
    dialect: DialectArg,
    #[arg(long, global = true, default_value_t = DEFAULT_PROOF_CAP)]
    proof_cap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Output order does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DialectArg {
    Percent,
    At,
}

impl From<DialectArg> for Dialect {
    fn from(d: DialectArg) -> Self {
        match d {
            DialectArg::Percent => Dialect::PercentConc,
            DialectArg::At => Dialect::AtInt,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Qa,
    Iterative,
    Enumeration,
    Abduction,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Qa => Task::Qa,
            TaskArg::Iterative => Task::IterativeStep,
            TaskArg::Enumeration => Task::Enumeration,
            TaskArg::Abduction => Task::Abduction,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a theory and print it back with sentence counts.
    Parse { theory: PathBuf },
    /// Answer questions, each with one shortest proof.
    Solve {
        theory: PathBuf,
        #[arg(short, long = "question", required = true)]
        questions: Vec<String>,
    },
    /// List every proof of a question's answer.
    Prove {
        theory: PathBuf,
        #[arg(short, long)]
        question: String,
    },
    /// List all implications with their depths.
    Enumerate { theory: PathBuf },
    /// Single missing facts that would prove a question (OWA).
    Abduce {
        theory: PathBuf,
        #[arg(short, long)]
        question: String,
    },
    /// Answer a question by repeated one-step generation.
    Iterate {
        theory: PathBuf,
        #[arg(short, long)]
        question: String,
        /// Remote one-step generator; the symbolic engine is used otherwise.
        #[arg(long, env = GENERATOR_URL_ENV)]
        generator_url: Option<String>,
        /// Context token limit (default 512 for a remote generator).
        #[arg(long)]
        max_context_tokens: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        max_iterations: usize,
        #[arg(long, default_value_t = 30)]
        timeout_secs: u64,
        #[arg(long, default_value_t = 2)]
        retries: usize,
        /// Shuffle the symbolic generator's order with --seed.
        #[arg(long)]
        shuffle: bool,
        /// Print every step.
        #[arg(long)]
        trace: bool,
    },
    /// Generate a JSONL dataset.
    Gen {
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, value_enum, default_value_t = TaskArg::Qa)]
        task: TaskArg,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Score predictions against a gold dataset.
    Score {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Match proofs ignoring intermediate conclusions.
        #[arg(long)]
        skeleton: bool,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Verify one proof, or audit a prediction file by depth.
    Verify {
        #[arg(long, conflicts_with = "gold")]
        theory: Option<PathBuf>,
        #[arg(long, requires = "theory")]
        proof: Option<String>,
        #[arg(long)]
        gold: Option<PathBuf>,
        /// Defaults to the gold proofs themselves.
        #[arg(long, requires = "gold")]
        pred: Option<PathBuf>,
    },
    /// Convert a dataset to text-to-text JSONL `{id, input, output}`.
    ExportT5 {
        dataset: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn question(s: &str) -> Result<Literal> {
    parse_question(s).with_context(|| format!("question `{s}`"))
}

fn text(l: &Literal) -> String {
    render_fact(l).unwrap_or_else(|_| l.to_string())
}

fn engine(t: &Theory) -> Result<nlproof::Closure> {
    closure(t).context("theory has no well-defined closure")
}

/// Proofs of whichever of `q` and its negation is derivable.
fn proofs_for(t: &Theory, q: &Literal, cap: usize) -> Result<Vec<ProofDag>> {
    let c = engine(t)?;
    let target = if c.contains(q) {
        q.clone()
    } else if c.contains(&q.negated()) {
        q.negated()
    } else {
        return Ok(Vec::new());
    };
    Ok(all_proofs(t, &target, cap)?.proofs)
}

fn run(cli: Cli) -> Result<()> {
    let g = cli.global;
    if let Some(j) = g.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .context("configuring worker threads")?;
    }
    let dialect: Dialect = g.dialect.into();
    let mut cfg = RunConfig::new("");
    cfg.mode = g.mode;
    cfg.dialect = dialect;
    cfg.proof_cap = g.proof_cap;
    cfg.seed = g.seed;
    cfg.jobs = g.jobs;
    let mut out = io::sink(None)?;

    match cli.cmd {
        Cmd::Parse { theory } => {
            let t = io::read_theory(&theory, g.mode)?;
            for s in render_theory(&t)? {
                writeln!(out, "{}: {}", s.id, s.text)?;
            }
            writeln!(
                out,
                "# {} sentences, {} facts, {} rules",
                t.len(),
                t.facts().count(),
                t.rules().count()
            )?;
        }
        Cmd::Solve { theory, questions } => {
            let t = io::read_theory(&theory, g.mode)?;
            let c = engine(&t)?;
            for q in &questions {
                let q = question(q)?;
                let a = nlproof::inference::answer_with(&c, &q);
                writeln!(out, "{}", a.value)?;
                let ps = proofs_for(&t, &q, g.proof_cap)?;
                match shortest_proofs(&ps).first() {
                    Some(p) => writeln!(out, "{}", encode_proof(p, dialect))?,
                    None => writeln!(out, "None")?,
                }
            }
        }
        Cmd::Prove { theory, question: q } => {
            let t = io::read_theory(&theory, g.mode)?;
            let q = question(&q)?;
            let c = engine(&t)?;
            let ps = proofs_for(&t, &q, g.proof_cap)?;
            writeln!(out, "{}", nlproof::inference::answer_with(&c, &q).value)?;
            if ps.is_empty() {
                writeln!(out, "None")?;
            }
            for p in &ps {
                writeln!(out, "{}", encode_proof(p, dialect))?;
            }
        }
        Cmd::Enumerate { theory } => {
            let t = io::read_theory(&theory, g.mode)?;
            let c = engine(&t)?;
            let mut items: Vec<(u32, String)> =
                c.implications().map(|i| (i.depth, text(&i.literal))).collect();
            items.sort();
            for (d, s) in items {
                writeln!(out, "{d}\t{s}")?;
            }
        }
        Cmd::Abduce { theory, question: q } => {
            let t = io::read_theory(&theory, g.mode)?;
            let a = abduce_single_fact(&t, &question(&q)?)?;
            writeln!(out, "{}", a.to_output())?;
        }
        Cmd::Iterate {
            theory,
            question: q,
            generator_url,
            max_context_tokens,
            max_iterations,
            timeout_secs,
            retries,
            shuffle,
            trace,
        } => {
            let t = io::read_theory(&theory, g.mode)?;
            let q = question(&q)?;
            let limits = LoopLimits {
                max_iterations,
                max_context_tokens,
            };
            let mut gen: Box<dyn OneStepGenerator> = match &generator_url {
                Some(url) => {
                    let mut r = RemoteGenerator::new(url.clone());
                    r.timeout = Duration::from_secs(timeout_secs);
                    r.retries = retries;
                    Box::new(r)
                }
                None if shuffle => Box::new(SymbolicGenerator::seeded(g.mode, g.seed)),
                None => Box::new(SymbolicGenerator::new(g.mode)),
            };
            let o = run_iterative_loop(&t, &q, gen.as_mut(), limits)?;
            if trace {
                for s in &o.trace {
                    let id = s.id.map(|i| i.to_string()).unwrap_or_else(|| "-".into());
                    writeln!(out, "{}\t{id}\t{}\t{}", s.iteration, s.answer, s.proof)?;
                }
            }
            writeln!(out, "{}", o.value)?;
            match &o.proof {
                Some(p) => writeln!(out, "{}", encode_proof(p, dialect))?,
                None => writeln!(out, "None")?,
            }
        }
        Cmd::Gen { depth, n, task, out: path } => {
            let mut gc = GenConfig::profile(g.mode, depth).with_seed(g.seed);
            gc.proof_cap = g.proof_cap;
            gc.dialect = dialect;
            let data = gen_dataset(&gc, n, task.into())?;
            let mut w = io::sink(path.as_deref())?;
            io::write_jsonl(&mut *w, &data)?;
            w.flush()?;
            if let Some(p) = &path {
                cfg.command = "gen".into();
                cfg.depth = Some(depth);
                cfg.output = Some(p.clone());
                echo(&cfg, p, &gc)?;
            }
        }
        Cmd::Score {
            gold,
            pred,
            skeleton,
            json,
        } => {
            let golds: Vec<DatasetExample> = io::read_jsonl(&gold)?;
            let ids: Vec<String> = golds.iter().map(|g| g.id.clone()).collect();
            let preds = io::read_predictions(&pred, &ids)?;
            let Some(task) = golds.first().map(|g| g.task) else {
                bail!("{}: no gold examples", gold.display());
            };
            if golds.iter().any(|g| g.task != task) {
                bail!("{}: mixed tasks in one gold file", gold.display());
            }
            let mode = if skeleton { ProofMatch::Skeleton } else { ProofMatch::Full };
            let report = match task {
                Task::Qa | Task::IterativeStep => score_qa(&preds, &golds, mode)?,
                Task::Enumeration => score_enumeration(&preds, &golds)?,
                Task::Abduction => score_abduction(&preds, &golds)?,
            };
            write!(out, "{report}")?;
            if let Some(p) = json {
                std::fs::write(&p, report.to_json() + "\n")
                    .with_context(|| format!("writing {}", p.display()))?;
                cfg.command = "score".into();
                cfg.inputs = vec![gold, pred];
                cfg.output = Some(p.clone());
                cfg.write_echo(&p)?;
            }
        }
        Cmd::Verify {
            theory,
            proof,
            gold,
            pred,
        } => match (theory, gold) {
            (Some(theory), _) => {
                let t = io::read_theory(&theory, g.mode)?;
                let Some(s) = proof else {
                    bail!("--proof is required with --theory");
                };
                let line = match decode_proof(&s, &t) {
                    Ok(Some(p)) => match verify_proof(&p, &t) {
                        VerifiedReport::FullyVerified => "verified".to_string(),
                        VerifiedReport::PartiallyVerified { unverified_naf } => {
                            format!("partially verified ({} NAF leaves unchecked)", unverified_naf.len())
                        }
                        VerifiedReport::Failed(f) => format!("failed: {}", f.reason),
                    },
                    Ok(None) => "no proof".to_string(),
                    Err(e) => format!("failed: {e}"),
                };
                writeln!(out, "{line}")?;
            }
            (None, Some(gold)) => {
                let golds: Vec<DatasetExample> = io::read_jsonl(&gold)?;
                let preds = match pred {
                    Some(p) => {
                        let ids: Vec<String> = golds.iter().map(|g| g.id.clone()).collect();
                        io::read_predictions(&p, &ids)?
                    }
                    None => golds.iter().map(Prediction::from_gold).collect(),
                };
                writeln!(out, "depth\tcount\tverified\trate")?;
                for r in run_verification_audit(&preds, &golds)? {
                    writeln!(out, "{}\t{}\t{}\t{:.4}", r.depth, r.count, r.verified, r.rate)?;
                }
            }
            (None, None) => bail!("give --theory and --proof, or --gold"),
        },
        Cmd::ExportT5 { dataset, out: path } => {
            #[derive(Serialize)]
            struct Line {
                id: String,
                input: String,
                output: String,
            }
            let data: Vec<DatasetExample> = io::read_jsonl(&dataset)?;
            let lines: Vec<Line> = data
                .iter()
                .map(|ex| {
                    let (input, output) = export_example(ex);
                    Line {
                        id: ex.id.clone(),
                        input,
                        output,
                    }
                })
                .collect();
            let mut w = io::sink(path.as_deref())?;
            io::write_jsonl(&mut *w, &lines)?;
            w.flush()?;
            if let Some(p) = &path {
                cfg.command = "export-t5".into();
                cfg.inputs = vec![dataset];
                cfg.output = Some(p.clone());
                cfg.write_echo(p)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Write `<out>.config.json` holding the run and generator settings.
fn echo(cfg: &RunConfig, out: &Path, gen: &GenConfig) -> Result<()> {
    let v = serde_json::json!({ "run": cfg, "generator": gen });
    let path = nlproof::config::echo_path(out);
    std::fs::write(&path, serde_json::to_string_pretty(&v)? + "\n")
        .with_context(|| format!("writing {}", path.display()))
}

fn main() -> Result<()> {
    run(Cli::parse())
}
