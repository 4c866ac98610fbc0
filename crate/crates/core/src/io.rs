//! JSON problem files.
//!
//! ```json
//! {
//!   "mesh": { "num_vertices": 1, "faces": [[0,0,0],[0,0,0]], "twins": [4,5,3,2,0,1], "genus": 1 },
//!   "packing": { "coords": "euclidean", "inv_dist": [2.0, 2.0, 2.0], "radii": [1.0] },
//!   "target": { "curvature": [0.0] },
//!   "config": { "method": "newton", "tol": 1e-10 }
//! }
//! ```
//!
//! `packing.coords` is `"euclidean"` (with `inv_dist`) or `"hyperbolic"`
//! (with `lengths`, read as `I = cosh x`). Per-edge arrays follow the
//! canonical edge order of [`Triangulation::build`]. `genus`, `target` and
//! `config` are optional. Numbers are written in shortest round-trip form.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::delaunay::FlipRecord;
use crate::flow::{validate_target, FlowConfig, Method};
use crate::hyperbolic::HyperbolicCoords;
use crate::mesh::Triangulation;
use crate::packing::Packing;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    pub num_vertices: usize,
    pub faces: Vec<[usize; 3]>,
    pub twins: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "coords", rename_all = "lowercase", deny_unknown_fields)]
pub enum PackingSection {
    Euclidean { inv_dist: Vec<f64>, radii: Vec<f64> },
    Hyperbolic { lengths: Vec<f64>, radii: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub curvature: Vec<f64>,
}

/// Optional solver settings; absent fields keep their defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flip_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flip_budget: Option<usize>,
}

impl ConfigOverrides {
    pub fn apply(&self, cfg: &mut FlowConfig) {
        if let Some(m) = self.method {
            cfg.method = m;
        }
        if let Some(s) = self.step {
            cfg.step = s;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(n) = self.max_iters {
            cfg.max_iters = n;
        }
        if let Some(t) = self.flip_tol {
            cfg.flips.tol = t;
        }
        if let Some(b) = self.flip_budget {
            cfg.flips.budget = Some(b);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub mesh: MeshSection,
    pub packing: PackingSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigOverrides>,
}

impl ProblemFile {
    pub fn from_json(s: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn read(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), FileError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Validated triangulation, checked against the declared genus.
    pub fn triangulation(&self) -> crate::Result<Triangulation> {
        let m = &self.mesh;
        let tri = Triangulation::build(m.num_vertices, m.faces.clone(), m.twins.clone())?;
        if let Some(g) = m.genus {
            tri.check_genus(g)?;
        }
        Ok(tri)
    }

    /// The packing described by the file. Hyperbolic data is converted by
    /// `I = cosh x` without requiring it to be Delaunay.
    pub fn to_packing(&self) -> crate::Result<Packing> {
        let tri = self.triangulation()?;
        match &self.packing {
            PackingSection::Euclidean { inv_dist, radii } => {
                Packing::new(tri, inv_dist.clone(), radii.clone())
            }
            PackingSection::Hyperbolic { lengths, radii } => {
                HyperbolicCoords::new(tri, lengths.clone(), radii.clone())?.to_packing_unchecked()
            }
        }
    }

    /// The target curvature, if present, validated against the mesh.
    pub fn target(&self, tri: &Triangulation) -> crate::Result<Option<Vec<f64>>> {
        match &self.target {
            None => Ok(None),
            Some(t) => {
                validate_target(tri, &t.curvature)?;
                Ok(Some(t.curvature.clone()))
            }
        }
    }

    /// Solver configuration with the file's overrides applied.
    pub fn flow_config(&self) -> FlowConfig {
        let mut cfg = FlowConfig::default();
        if let Some(o) = &self.config {
            o.apply(&mut cfg);
        }
        cfg
    }

    /// Euclidean file for `pk`, with edge ids renumbered canonically.
    pub fn from_packing(pk: &Packing) -> Self {
        let pk = pk.canonicalized();
        let tri = pk.tri();
        ProblemFile {
            mesh: MeshSection {
                num_vertices: tri.num_vertices(),
                faces: tri.faces().to_vec(),
                twins: tri.twins().to_vec(),
                genus: Some(tri.genus()),
            },
            packing: PackingSection::Euclidean {
                inv_dist: pk.inv_dist().to_vec(),
                radii: pk.radii().to_vec(),
            },
            target: None,
            config: None,
        }
    }

    /// Hyperbolic file for `hc` (edge ids as in `hc`).
    pub fn from_hyperbolic(hc: &HyperbolicCoords) -> Self {
        let tri = hc.tri();
        ProblemFile {
            mesh: MeshSection {
                num_vertices: tri.num_vertices(),
                faces: tri.faces().to_vec(),
                twins: tri.twins().to_vec(),
                genus: Some(tri.genus()),
            },
            packing: PackingSection::Hyperbolic {
                lengths: hc.lengths().to_vec(),
                radii: hc.radii().to_vec(),
            },
            target: None,
            config: None,
        }
    }

    pub fn with_target(mut self, curvature: Vec<f64>) -> Self {
        self.target = Some(TargetSection { curvature });
        self
    }
}

/// Flip log as a JSON array of `{edge, old, new}` records. Edge ids refer to
/// the numbering in effect during the run.
pub fn flip_log_json(log: &[FlipRecord]) -> String {
    serde_json::to_string_pretty(log).expect("flip logs serialize")
}
