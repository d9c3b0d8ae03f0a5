use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::input::Source;

/// Outcome classes, mapped to exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    Counterexample,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Counterexample => 1,
            Status::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub verdict: String,
    pub result: Value,
    pub witness: Value,
    pub seed: u64,
    pub elapsed_ms: Option<u64>,
    #[serde(skip)]
    pub status: Status,
}

/// SHA-256 over the length-prefixed input texts.
pub fn digest(sources: &[&Source]) -> String {
    let mut h = Sha256::new();
    for s in sources {
        h.update((s.text.len() as u64).to_le_bytes());
        h.update(s.text.as_bytes());
    }
    hex::encode(h.finalize())
}
