//! Proof trees, enumeration, the linear codec, step verification and
//! assembly of iterative proofs.

mod assemble;
mod codec;
mod dag;
mod enumerate;
mod verify;

pub use assemble::{
    assemble_iterative_proof, fragment_of, step_proof, AssembleError, StepCondition, StepFragment,
};
pub use codec::{
    decode_encoded, decode_proof, decode_step, encode_optional, encode_proof, encode_step,
    encode_step_proof,
    CodecError, Dialect, EncodedProof,
};
pub use dag::{canonicalize, CanonicalProof, NodeKind, ProofDag, ProofGraph, ProofNode};
pub use enumerate::{all_proofs, all_proofs_with, shortest_proofs, ProofSet, DEFAULT_PROOF_CAP};
pub use verify::{verify_proof, verify_proof_with, FailedStep, VerifiedReport, VerifyOptions};
