use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::agents::{Budget, LearningCurve};
use crate::env::PerturbationLog;

/// Outcome of one training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Hash of everything that defines the run except its seed.
    pub fingerprint: String,
    /// Hash of the env, agent, budget and evaluation settings; shared by a
    /// baseline and the noisy runs compared against it.
    pub context: String,
    pub experiment: String,
    pub env: String,
    pub agent: String,
    /// Wrapper label, or `baseline`.
    pub wrapper: String,
    pub rate: Option<f64>,
    pub seed: u64,
    pub budget: Budget,
    pub curve: LearningCurve,
    pub final_return: f64,
    pub train_log: PerturbationLog,
    pub eval_log: PerturbationLog,
}

impl RunRecord {
    pub const BASELINE: &'static str = "baseline";

    pub fn is_baseline(&self) -> bool {
        self.rate.is_none()
    }

    pub fn file_name(&self) -> String {
        format!("run_{}_{}.json", self.fingerprint, self.seed)
    }
}

/// Compact JSON with object keys in sorted order.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json's default map is ordered by key
    let v = serde_json::to_value(value).expect("config values serialize to JSON");
    serde_json::to_string(&v).expect("JSON values serialize")
}

/// First 16 hex digits of the SHA-256 of the canonical JSON form of `value`.
pub fn fingerprint<T: Serialize>(value: &T) -> String {
    let digest = Sha256::digest(canonical_json(value).as_bytes());
    hex::encode(digest)[..16].to_owned()
}
