//! JSON instance files: anchors, one or two frames, named operators and
//! named vectors over a common ambient dimension.
//!
//! Numbers are written in shortest round-trip form and parsed with exact
//! rounding, so a written instance reads back bit for bit.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::FrameSystem;
use crate::nspace::{AmbientSpace, AmbientVector, AnchorSet, InducedSpace};
use crate::optheory::LinearMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dimension: usize,
    pub anchors: Vec<Vec<f64>>,
    pub frame: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_frame: Option<Vec<Vec<f64>>>,
    /// Named `k × k` matrices, row major.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vectors: BTreeMap<String, Vec<f64>>,
}

/// A validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub space: Arc<InducedSpace>,
    pub frame: FrameSystem,
    pub second_frame: Option<FrameSystem>,
    pub operators: BTreeMap<String, LinearMap>,
    pub vectors: BTreeMap<String, AmbientVector>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed instance: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Serializes an existing system; operators and vectors are copied as is.
    pub fn from_parts(
        frame: &FrameSystem,
        second_frame: Option<&FrameSystem>,
        operators: &BTreeMap<String, LinearMap>,
        vectors: &BTreeMap<String, AmbientVector>,
    ) -> Self {
        let space = frame.space();
        let rows = |fs: &FrameSystem| fs.vectors().iter().map(AmbientVector::to_vec).collect();
        Self {
            dimension: space.dim(),
            anchors: space
                .anchors()
                .anchors()
                .iter()
                .map(AmbientVector::to_vec)
                .collect(),
            frame: rows(frame),
            second_frame: second_frame.map(rows),
            operators: operators
                .iter()
                .map(|(name, op)| {
                    let m = op.matrix();
                    let rows = m.row_iter().map(|r| r.iter().copied().collect()).collect();
                    (name.clone(), rows)
                })
                .collect(),
            vectors: vectors
                .iter()
                .map(|(name, v)| (name.clone(), v.to_vec()))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Instance> {
        let d = self.dimension;
        let vector = |what: &str, coords: &[f64]| -> Result<AmbientVector> {
            if coords.len() != d {
                return Err(Error::Input(format!(
                    "{what} has length {}, expected dimension {d}",
                    coords.len()
                )));
            }
            AmbientVector::new(coords.to_vec())
        };
        let list = |what: &str, rows: &[Vec<f64>]| -> Result<Vec<AmbientVector>> {
            rows.iter()
                .enumerate()
                .map(|(i, r)| vector(&format!("{what}[{i}]"), r))
                .collect()
        };

        if self.anchors.is_empty() {
            return Err(Error::Input("at least one anchor is required".into()));
        }
        let space = AmbientSpace::new(d, self.anchors.len() + 1)?;
        let anchors = AnchorSet::new(list("anchors", &self.anchors)?)?;
        let space = Arc::new(crate::nspace::build_induced_space(anchors, space)?);
        let frame = FrameSystem::new(space.clone(), list("frame", &self.frame)?)?;
        let second_frame = match &self.second_frame {
            Some(rows) => {
                let gs = FrameSystem::new(space.clone(), list("second_frame", rows)?)?;
                if gs.len() != frame.len() {
                    return Err(Error::Input(format!(
                        "second_frame has {} vectors, frame has {}",
                        gs.len(),
                        frame.len()
                    )));
                }
                Some(gs)
            }
            None => None,
        };

        let k = space.k();
        let mut operators = BTreeMap::new();
        for (name, rows) in &self.operators {
            if rows.len() != k || rows.iter().any(|r| r.len() != k) {
                return Err(Error::Input(format!("operator {name} must be {k}x{k}")));
            }
            let m = DMatrix::from_fn(k, k, |i, j| rows[i][j]);
            operators.insert(name.clone(), LinearMap::new(m)?);
        }
        let vectors = self
            .vectors
            .iter()
            .map(|(name, c)| Ok((name.clone(), vector(&format!("vector {name}"), c)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;

        Ok(Instance {
            space,
            frame,
            second_frame,
            operators,
            vectors,
        })
    }
}

impl Instance {
    pub fn to_file(&self) -> InstanceFile {
        InstanceFile::from_parts(
            &self.frame,
            self.second_frame.as_ref(),
            &self.operators,
            &self.vectors,
        )
    }

    pub fn operator(&self, name: &str) -> Result<&LinearMap> {
        self.operators
            .get(name)
            .ok_or_else(|| Error::Input(format!("instance has no operator named {name:?}")))
    }

    pub fn vector(&self, name: &str) -> Result<&AmbientVector> {
        self.vectors
            .get(name)
            .ok_or_else(|| Error::Input(format!("instance has no vector named {name:?}")))
    }
}
