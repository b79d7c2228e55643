use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::HarnessError;
use crate::json::BodyJson;
use quantsel::geom::ConvexBody;
use quantsel::tverberg::Segment;
use quantsel::GeomError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum InstanceKind {
    Bodies,
    Segments,
    ColorFamilies,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub dimension: usize,
    pub kind: InstanceKind,
    pub families: Vec<Vec<BodyJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl Instance {
    pub fn from_bodies(kind: InstanceKind, families: &[Vec<ConvexBody>], seed: Option<u64>) -> Self {
        let dimension = families.iter().flatten().next().map_or(0, ConvexBody::dim);
        Instance {
            dimension,
            kind,
            families: families.iter().map(|f| f.iter().map(BodyJson::from_body).collect()).collect(),
            seed,
            metadata: BTreeMap::new(),
        }
    }

    pub fn from_segments(families: &[Vec<Segment>], seed: Option<u64>) -> Self {
        let dimension = families.iter().flatten().next().map_or(0, Segment::dim);
        Instance {
            dimension,
            kind: InstanceKind::Segments,
            families: families.iter().map(|f| f.iter().map(BodyJson::from_segment).collect()).collect(),
            seed,
            metadata: BTreeMap::new(),
        }
    }

    /// Coordinates parse, dimensions agree and no family is empty.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.dimension == 0 || self.families.is_empty() || self.families.iter().any(Vec::is_empty) {
            return Err(invalid("instance needs a positive dimension and nonempty families"));
        }
        for body in self.families.iter().flatten() {
            let pts = body.points()?;
            if pts.is_empty() || pts.iter().any(|p| p.dim() != self.dimension) {
                return Err(invalid("vertex dimension does not match the instance dimension"));
            }
            if self.kind == InstanceKind::Segments && pts.len() != 2 {
                return Err(invalid("segments need exactly two endpoints"));
            }
        }
        Ok(())
    }

    pub fn bodies(&self) -> Result<Vec<Vec<ConvexBody>>, HarnessError> {
        self.validate()?;
        if self.kind == InstanceKind::Segments {
            return Err(invalid("expected a body instance, got segments"));
        }
        let fams = self
            .families
            .iter()
            .map(|f| f.iter().map(BodyJson::to_body).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if fams.iter().flatten().any(|b| !b.is_full_dimensional()) {
            return Err(invalid("bodies must be full-dimensional"));
        }
        Ok(fams)
    }

    pub fn segments(&self) -> Result<Vec<Vec<Segment>>, HarnessError> {
        self.validate()?;
        if self.kind != InstanceKind::Segments {
            return Err(invalid("expected a segment instance"));
        }
        Ok(self
            .families
            .iter()
            .map(|f| {
                f.iter()
                    .map(|b| {
                        let p = b.points()?;
                        Segment::new(p[0].clone(), p[1].clone())
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?)
    }

    /// Hex SHA-256 of the compact JSON serialization.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("instances serialize");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances serialize") + "\n"
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        let inst: Instance = serde_json::from_str(&text).map_err(HarnessError::Parse)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn save(&self, path: &Path) -> Result<(), HarnessError> {
        crate::io::write_atomic(path, self.to_json().as_bytes())?;
        Ok(())
    }
}

fn invalid(msg: &str) -> HarnessError {
    HarnessError::Geom(GeomError::InvalidInput(msg.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use quantsel::num::int;

    #[test]
    fn hash_ignores_whitespace_but_not_content() {
        let sq = ConvexBody::cuboid(&[int(0), int(0)], &[int(1), int(1)]);
        let inst = Instance::from_bodies(InstanceKind::Bodies, &[vec![sq]], Some(3));
        let again: Instance = serde_json::from_str(&inst.to_json()).unwrap();
        assert_eq!(inst.hash(), again.hash());
        let mut other = inst.clone();
        other.families[0][0].vertices[0][0] = "1/2".into();
        assert_ne!(inst.hash(), other.hash());
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let text = r#"{"dimension":2,"kind":"bodies","families":[[{"vertices":[["0","0"],["1"]]}]]}"#;
        let inst: Instance = serde_json::from_str(text).unwrap();
        assert!(inst.validate().is_err());
    }
}
