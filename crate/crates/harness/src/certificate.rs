//! Certificates: a kind, the hash of the instance they answer, a payload
//! and the exact quantities it achieves, sealed by a digest of all four.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::HarnessError;
use crate::json::{BodyJson, EllipsoidJson, SegmentJson, WitnessJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CertKind {
    John,
    Tverberg,
    ColorfulTverberg,
    DiameterTverberg,
    Selection,
    Epsnet,
    Sametype,
    Homogeneous,
}

pub type Bounds = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Certificate {
    pub kind: CertKind,
    pub instance_hash: String,
    pub payload: serde_json::Value,
    pub achieved_bounds: Bounds,
    pub seal: String,
}

impl Certificate {
    pub fn new(kind: CertKind, instance_hash: String, payload: &impl Serialize, bounds: Bounds) -> Self {
        let payload = serde_json::to_value(payload).expect("payloads serialize");
        let mut cert = Certificate { kind, instance_hash, payload, achieved_bounds: bounds, seal: String::new() };
        cert.seal = cert.digest();
        cert
    }

    /// SHA-256 over kind, instance hash, payload and bounds.
    pub fn digest(&self) -> String {
        let body = serde_json::json!([self.kind, self.instance_hash, self.payload, self.achieved_bounds]);
        hex::encode(Sha256::digest(body.to_string().as_bytes()))
    }

    pub fn reseal(&mut self) {
        self.seal = self.digest();
    }

    pub fn payload_as<T: DeserializeOwned>(&self) -> Result<T, HarnessError> {
        serde_json::from_value(self.payload.clone()).map_err(|e| HarnessError::Verify(format!("payload: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize") + "\n"
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        serde_json::from_str(&std::fs::read_to_string(path)?).map_err(HarnessError::Parse)
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        crate::io::write_atomic(path, self.to_json().as_bytes())?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct JohnPayload {
    /// One inscribed ellipsoid per body, family by family.
    pub ellipsoids: Vec<Vec<EllipsoidJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TverbergPayload {
    pub r: usize,
    /// Inscribed ellipsoid of each body of the single family.
    pub ellipsoids: Vec<EllipsoidJson>,
    pub parts: Vec<Vec<usize>>,
    pub witness: EllipsoidJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ColorfulPayload {
    pub r: usize,
    /// Families used, in the order of transversal entries.
    pub family_subset: Vec<usize>,
    pub transversals: Vec<Vec<usize>>,
    pub witness: EllipsoidJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DiameterPayload {
    pub r: usize,
    pub transversals: Vec<Vec<usize>>,
    pub witness: SegmentJson,
    pub direction: Vec<String>,
    pub threshold: String,
    /// Per family, the segments whose width along `direction` reaches the threshold.
    pub covered: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SelectionPayload {
    /// quadratic, steinitz or simplex.
    pub variant: String,
    /// volume or diameter.
    pub mode: String,
    pub family: usize,
    pub tuple_size: usize,
    pub witness: WitnessJson,
    pub hit_tuples: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EpsNetPayload {
    pub variant: String,
    pub epsilon: String,
    pub family: usize,
    pub subfamily_size: usize,
    pub pieces: Vec<EllipsoidJson>,
    pub sources: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SeparatorJson {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct OrientationJson {
    pub subset: Vec<usize>,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SameTypePayload {
    pub alpha: String,
    pub rho: String,
    pub volume: String,
    pub steps: usize,
    pub trimmed: Vec<Vec<BodyJson>>,
    pub parent_map: Vec<Vec<usize>>,
    pub separators: Vec<SeparatorJson>,
    pub order_type: Vec<OrientationJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct HomogeneousPayload {
    pub target: String,
    pub subfamilies: Vec<Vec<usize>>,
    pub witness: EllipsoidJson,
}
