//! The one-step generator boundary and the iterative loop built on it.
//!
//! A generator sees a context and answers with one new implication and its
//! single-step proof, or "None". The symbolic generator is backed by the
//! inference engine; the remote one forwards the text-to-text input to an
//! HTTP endpoint as `{"input": ...}` and reads `{"output": ...}` back.

use std::time::Duration;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datagen::{Task, ITERATIVE_QUESTION};
use crate::grammar::{parse_context, parse_fact, render_context, render_fact, split_context};
use crate::inference::{one_step_inferences, InferenceError};
use crate::model::{Literal, Mode, Namespace, SentenceId, Theory, TruthValue};
use crate::proofs::{
    assemble_iterative_proof, decode_proof, decode_step, encode_step_proof, fragment_of,
    step_proof, verify_proof, CodecError, ProofDag, ProofNode, StepFragment,
};
use crate::t5::{export_input, export_output, import_output, T5Input, T5Output};

pub const GENERATOR_URL_ENV: &str = "PROOFWRITER_GENERATOR_URL";
pub const DEFAULT_REMOTE_CONTEXT_TOKENS: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneStepRequest {
    /// `sent1: ... sent2: ...`
    pub context: String,
    pub question: String,
}

impl OneStepRequest {
    pub fn new(context: impl Into<String>) -> Self {
        OneStepRequest {
            context: context.into(),
            question: ITERATIVE_QUESTION.to_string(),
        }
    }

    /// The text-to-text input string for this request.
    pub fn to_t5(&self) -> Result<String, BridgeError> {
        let context = split_context(&self.context)
            .map_err(|e| BridgeError::MalformedRequest(e.to_string()))?;
        Ok(export_input(&T5Input {
            task: Task::IterativeStep,
            question: self.question.clone(),
            context,
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneStepResponse {
    /// A sentence, or "None".
    pub answer: String,
    /// A one-step proof, or "None".
    pub proof: String,
}

impl OneStepResponse {
    pub fn none() -> Self {
        OneStepResponse {
            answer: "None".into(),
            proof: "None".into(),
        }
    }

    pub fn is_none(&self) -> bool {
        self.answer.trim() == "None"
    }

    pub fn to_t5(&self) -> String {
        export_output(&T5Output {
            answer: self.answer.clone(),
            proof: Some(self.proof.clone()),
        })
    }
}

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("generator unavailable: {0}")]
    RemoteUnavailable(String),
    #[error("malformed generator response: {0}")]
    MalformedResponse(String),
    #[error("response proof references unknown sentence `{0}`")]
    UnknownIdInProof(String),
    #[error("malformed request context: {0}")]
    MalformedRequest(String),
    #[error("no fixpoint after {0} iterations")]
    IterationLimit(usize),
    #[error("context of {tokens} tokens exceeds the limit of {limit}")]
    ContextLimit { tokens: usize, limit: usize },
    #[error(transparent)]
    Inference(#[from] InferenceError),
}

pub trait OneStepGenerator {
    fn next_implication(&mut self, req: &OneStepRequest) -> Result<OneStepResponse, BridgeError>;

    /// Context size limit in whitespace tokens, if the backend has one.
    fn context_limit(&self) -> Option<usize> {
        None
    }
}

/// Engine-backed generator. Returns the first one-step inference in
/// (rule id, condition ids) order, or a seeded shuffle of that order.
#[derive(Debug, Clone)]
pub struct SymbolicGenerator {
    mode: Mode,
    rng: Option<ChaCha8Rng>,
}

impl SymbolicGenerator {
    pub fn new(mode: Mode) -> Self {
        SymbolicGenerator { mode, rng: None }
    }

    pub fn seeded(mode: Mode, seed: u64) -> Self {
        SymbolicGenerator {
            mode,
            rng: Some(ChaCha8Rng::seed_from_u64(seed)),
        }
    }

    /// Every valid response to `req`, in the generator's base order.
    pub fn all_responses(&self, req: &OneStepRequest) -> Result<Vec<OneStepResponse>, BridgeError> {
        let t = parse_context(&req.context, self.mode)
            .map_err(|e| BridgeError::MalformedRequest(e.to_string()))?;
        let steps = one_step_inferences(&t)?;
        Ok(steps
            .iter()
            .map(|s| OneStepResponse {
                answer: render_fact(&s.literal).unwrap_or_else(|_| s.literal.to_string()),
                proof: encode_step_proof(&step_proof(s, &t)).to_string(),
            })
            .collect())
    }
}

impl OneStepGenerator for SymbolicGenerator {
    fn next_implication(&mut self, req: &OneStepRequest) -> Result<OneStepResponse, BridgeError> {
        let mut all = self.all_responses(req)?;
        if let Some(rng) = self.rng.as_mut() {
            all.shuffle(rng);
        }
        Ok(all.into_iter().next().unwrap_or_else(OneStepResponse::none))
    }
}

/// Moves one JSON request to an endpoint and returns the JSON reply.
pub trait Transport {
    fn post_json(
        &self,
        url: &str,
        body: &serde_json::Value,
        timeout: Duration,
    ) -> Result<serde_json::Value, String>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UreqTransport;

impl Transport for UreqTransport {
    fn post_json(
        &self,
        url: &str,
        body: &serde_json::Value,
        timeout: Duration,
    ) -> Result<serde_json::Value, String> {
        let agent = ureq::AgentBuilder::new().timeout(timeout).build();
        let resp = agent.post(url).send_json(body.clone()).map_err(|e| e.to_string())?;
        resp.into_json().map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct RemoteGenerator<T: Transport = UreqTransport> {
    pub url: String,
    pub timeout: Duration,
    /// Extra attempts after a transport failure.
    pub retries: usize,
    pub max_context_tokens: Option<usize>,
    transport: T,
}

impl RemoteGenerator<UreqTransport> {
    pub fn new(url: impl Into<String>) -> Self {
        Self::with_transport(url, UreqTransport)
    }

    /// Endpoint taken from `PROOFWRITER_GENERATOR_URL`.
    pub fn from_env() -> Result<Self, BridgeError> {
        std::env::var(GENERATOR_URL_ENV)
            .map(Self::new)
            .map_err(|_| BridgeError::RemoteUnavailable(format!("{GENERATOR_URL_ENV} is not set")))
    }
}

impl<T: Transport> RemoteGenerator<T> {
    pub fn with_transport(url: impl Into<String>, transport: T) -> Self {
        RemoteGenerator {
            url: url.into(),
            timeout: Duration::from_secs(30),
            retries: 2,
            max_context_tokens: Some(DEFAULT_REMOTE_CONTEXT_TOKENS),
            transport,
        }
    }
}

/// Check that a response is "None" or an answer with a single-step proof
/// whose ids all occur in the request context.
pub fn validate_response(req: &OneStepRequest, resp: &OneStepResponse) -> Result<(), BridgeError> {
    if resp.is_none() {
        return Ok(());
    }
    let (rule, conds) = decode_step(&resp.proof)
        .map_err(|e| BridgeError::MalformedResponse(format!("not a one-step proof: {e}")))?;
    let known: Vec<SentenceId> = split_context(&req.context)
        .map_err(|e| BridgeError::MalformedRequest(e.to_string()))?
        .into_iter()
        .map(|s| s.id)
        .collect();
    for id in std::iter::once(rule.to_string()).chain(conds) {
        let parsed: SentenceId = id
            .parse()
            .map_err(|_| BridgeError::MalformedResponse(format!("bad id `{id}`")))?;
        if parsed.namespace != Namespace::Naf && !known.contains(&parsed) {
            return Err(BridgeError::UnknownIdInProof(id));
        }
    }
    Ok(())
}

impl<T: Transport> OneStepGenerator for RemoteGenerator<T> {
    fn next_implication(&mut self, req: &OneStepRequest) -> Result<OneStepResponse, BridgeError> {
        let body = serde_json::json!({ "input": req.to_t5()? });
        let mut last = String::new();
        for _ in 0..=self.retries {
            match self.transport.post_json(&self.url, &body, self.timeout) {
                Ok(v) => {
                    let out = v.get("output").and_then(|o| o.as_str()).ok_or_else(|| {
                        BridgeError::MalformedResponse("missing string field `output`".into())
                    })?;
                    let o = import_output(out.trim())
                        .map_err(|e| BridgeError::MalformedResponse(e.to_string()))?;
                    let resp = OneStepResponse {
                        proof: o.proof.unwrap_or_else(|| "None".into()),
                        answer: o.answer,
                    };
                    validate_response(req, &resp)?;
                    return Ok(resp);
                }
                Err(e) => last = e,
            }
        }
        Err(BridgeError::RemoteUnavailable(last))
    }

    fn context_limit(&self) -> Option<usize> {
        self.max_context_tokens
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopLimits {
    pub max_iterations: usize,
    /// Overrides the generator's own context limit when set.
    pub max_context_tokens: Option<usize>,
}

impl Default for LoopLimits {
    fn default() -> Self {
        LoopLimits {
            max_iterations: 10_000,
            max_context_tokens: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub iteration: usize,
    pub context_tokens: usize,
    pub answer: String,
    pub proof: String,
    /// Id the implication was added under.
    pub id: Option<SentenceId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopOutcome {
    pub value: TruthValue,
    pub proof: Option<ProofDag>,
    pub implications: Vec<Literal>,
    pub trace: Vec<TraceStep>,
}

fn map_codec(e: CodecError) -> BridgeError {
    match e {
        CodecError::UnknownSentenceId(id) => BridgeError::UnknownIdInProof(id),
        other => BridgeError::MalformedResponse(other.to_string()),
    }
}

/// Accept one response: parse, decode against the current context and
/// check it is a verified single step concluding a new literal.
fn accept(cur: &Theory, resp: &OneStepResponse, id: SentenceId) -> Result<StepFragment, BridgeError> {
    let lit = parse_fact(resp.answer.trim())
        .map_err(|e| BridgeError::MalformedResponse(format!("answer: {e}")))?;
    let dag = decode_proof(&resp.proof, cur)
        .map_err(map_codec)?
        .ok_or_else(|| BridgeError::MalformedResponse("answer without proof".into()))?;
    if dag.depth() != 1 || dag.conclusion() != &lit {
        return Err(BridgeError::MalformedResponse(format!(
            "proof does not conclude `{}` in one step",
            resp.answer
        )));
    }
    if cur.fact_id_of(&lit).is_some() {
        return Err(BridgeError::MalformedResponse(format!("`{}` is already in the context", resp.answer)));
    }
    if verify_proof(&dag, cur).is_failed() {
        return Err(BridgeError::MalformedResponse(format!("step for `{}` does not verify", resp.answer)));
    }
    fragment_of(&dag, id).ok_or_else(|| BridgeError::MalformedResponse("not a single step".into()))
}

fn proof_from(t: &Theory, chain: &[StepFragment], lit: &Literal) -> Option<ProofDag> {
    if let Some(id) = t.fact_id_of(lit) {
        return Some(ProofDag::new(ProofNode::Fact {
            id,
            literal: lit.clone(),
        }));
    }
    chain
        .iter()
        .any(|f| &f.implication == lit)
        .then(|| assemble_iterative_proof(chain, lit, t).ok())
        .flatten()
}

/// A generator run to its fixpoint: the implications in emission order with
/// the one-step fragment recorded for each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Saturation {
    pub theory: Theory,
    pub chain: Vec<StepFragment>,
    pub trace: Vec<TraceStep>,
}

impl Saturation {
    pub fn implications(&self) -> impl Iterator<Item = &Literal> {
        self.chain.iter().map(|f| &f.implication)
    }

    /// Answer `q` from the saturated context: look for `q`, then for its
    /// negation, else fall back to the mode's default. The proof is spliced
    /// from the recorded fragments.
    pub fn resolve(&self, q: &Literal) -> (TruthValue, Option<ProofDag>) {
        let t = &self.theory;
        if let Some(p) = proof_from(t, &self.chain, q) {
            (TruthValue::True, Some(p))
        } else if let Some(p) = proof_from(t, &self.chain, &q.negated()) {
            (TruthValue::False, Some(p))
        } else {
            let v = match t.mode() {
                Mode::Cwa if q.is_positive() => TruthValue::False,
                Mode::Cwa => TruthValue::True,
                Mode::Owa => TruthValue::Unknown,
            };
            (v, None)
        }
    }
}

/// Run a generator to its fixpoint, adding each implication to the context
/// as the next `sentN`.
pub fn saturate(
    t: &Theory,
    gen: &mut dyn OneStepGenerator,
    limits: LoopLimits,
) -> Result<Saturation, BridgeError> {
    let token_limit = limits.max_context_tokens.or(gen.context_limit());
    let mut cur = t.clone();
    let mut chain: Vec<StepFragment> = Vec::new();
    let mut trace = Vec::new();
    for iteration in 0.. {
        if iteration >= limits.max_iterations {
            return Err(BridgeError::IterationLimit(limits.max_iterations));
        }
        let context = render_context(&cur).map_err(|e| BridgeError::MalformedRequest(e.to_string()))?;
        let req = OneStepRequest::new(context);
        let tokens = req.to_t5()?.split_whitespace().count();
        if let Some(limit) = token_limit {
            if tokens > limit {
                return Err(BridgeError::ContextLimit { tokens, limit });
            }
        }
        let resp = gen.next_implication(&req)?;
        let mut step = TraceStep {
            iteration,
            context_tokens: tokens,
            answer: resp.answer.clone(),
            proof: resp.proof.clone(),
            id: None,
        };
        if resp.is_none() {
            trace.push(step);
            break;
        }
        let id = cur.next_id(Namespace::Sent);
        let frag = accept(&cur, &resp, id)?;
        cur = cur
            .with_fact(id, frag.implication.clone())
            .map_err(|e| BridgeError::MalformedResponse(e.to_string()))?;
        step.id = Some(id);
        trace.push(step);
        chain.push(frag);
    }
    Ok(Saturation {
        theory: t.clone(),
        chain,
        trace,
    })
}

/// Saturate with `gen`, then answer `q` and assemble its full proof.
pub fn run_iterative_loop(
    t: &Theory,
    q: &Literal,
    gen: &mut dyn OneStepGenerator,
    limits: LoopLimits,
) -> Result<LoopOutcome, BridgeError> {
    let s = saturate(t, gen, limits)?;
    let (value, proof) = s.resolve(q);
    Ok(LoopOutcome {
        value,
        proof,
        implications: s.chain.into_iter().map(|f| f.implication).collect(),
        trace: s.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_question;
    use std::cell::RefCell;

    struct Canned(RefCell<Vec<Result<serde_json::Value, String>>>);

    impl Transport for Canned {
        fn post_json(&self, _: &str, _: &serde_json::Value, _: Duration) -> Result<serde_json::Value, String> {
            self.0.borrow_mut().remove(0)
        }
    }

    const CTX: &str = "sent1: Bob is big. sent2: If someone is big then they are red. sent3: If someone is red then they are kind.";

    #[test]
    fn symbolic_loop_reaches_fixpoint() {
        let t = parse_context(CTX, Mode::Cwa).unwrap();
        let q = parse_question("Bob is kind?").unwrap();
        let out = run_iterative_loop(&t, &q, &mut SymbolicGenerator::new(Mode::Cwa), LoopLimits::default()).unwrap();
        assert_eq!(out.value, TruthValue::True);
        assert_eq!(out.proof.unwrap().depth(), 2);
        assert_eq!(out.implications.len(), 2);
        assert_eq!(out.trace.last().unwrap().answer, "None");
    }

    #[test]
    fn remote_responses_are_validated() {
        let req = OneStepRequest::new(CTX);
        let ok = serde_json::json!({"output": "$answer$ = Bob is red. ; $proof$ = # sent2 sent1"});
        let mut g = RemoteGenerator::with_transport("http://x", Canned(RefCell::new(vec![Err("down".into()), Ok(ok)])));
        assert_eq!(g.next_implication(&req).unwrap().answer, "Bob is red.");

        let deep = serde_json::json!({"output": "$answer$ = Bob is kind. ; $proof$ = # sent3 # sent2 sent1"});
        let mut g = RemoteGenerator::with_transport("http://x", Canned(RefCell::new(vec![Ok(deep)])));
        assert!(matches!(g.next_implication(&req), Err(BridgeError::MalformedResponse(_))));

        let unknown = serde_json::json!({"output": "$answer$ = Bob is red. ; $proof$ = # sent2 sent9"});
        let mut g = RemoteGenerator::with_transport("http://x", Canned(RefCell::new(vec![Ok(unknown)])));
        assert!(matches!(g.next_implication(&req), Err(BridgeError::UnknownIdInProof(_))));

        let mut g = RemoteGenerator::with_transport("http://x", Canned(RefCell::new(vec![Err("a".into()), Err("b".into()), Err("c".into())])));
        assert!(matches!(g.next_implication(&req), Err(BridgeError::RemoteUnavailable(_))));
    }

    #[test]
    fn context_limit_is_enforced() {
        let t = parse_context(CTX, Mode::Cwa).unwrap();
        let q = parse_question("Bob is kind?").unwrap();
        let limits = LoopLimits {
            max_iterations: 10,
            max_context_tokens: Some(5),
        };
        let r = run_iterative_loop(&t, &q, &mut SymbolicGenerator::new(Mode::Cwa), limits);
        assert!(matches!(r, Err(BridgeError::ContextLimit { limit: 5, .. })));
    }
}
