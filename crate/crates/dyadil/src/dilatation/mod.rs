//! The dilatation-structure interface over boundary words, the derived
//! finite-stage operations, exact stabilized tangent limits, and the
//! verification engine for the axioms and theorem statements.
//!
//! Scale convention: stage `p ≥ 0` applies the group element `2^p`, which
//! contracts distances by `ν(2^p) = 2^{-p}` (to the power of the structure's
//! scale weight); negative stages are the inverse maps on their cylinder
//! domains.

pub mod checks;
pub mod derivative;
pub mod equivalence;
pub mod induced;
pub mod tangent;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::DilError;
use crate::words::EvWord;

pub use checks::{check_axioms, cone_property, find_p0, AxiomReport};
pub use derivative::{derivative, DerivativeEval, PointMap};
pub use equivalence::{equivalence_probe, EquivalenceReport, EquivalenceVerdict};
pub use induced::{induced_structure, InducedReport, InducedStructure};
pub use tangent::{stabilize_tangent, Stabilized, TangentEval};

/// A dilatation structure: a family of base-point-indexed contractions of
/// the boundary, evaluated exactly on eventually periodic words.
pub trait DilStructure: Send + Sync {
    fn name(&self) -> String;

    /// `δ^x_{ε^p} y` for the structure's scale generator ε: contraction at
    /// stages `p ≥ 0`, the inverse map (on its cylinder domain) at `p < 0`.
    fn dilate(&self, x: &EvWord, stage: i64, y: &EvWord) -> Result<EvWord, DilError>;

    /// `-log₂ ν(ε)` for one stage: how many letters one contraction step
    /// pins. 1 for the dyadic structures, the valuation of ε for valued
    /// fields (0 flags a non-contracting family).
    fn scale_weight(&self) -> u32 {
        1
    }
}

/// Shared handle to a structure; verification campaigns and codecs capture
/// these in closures.
pub type DynDil = Arc<dyn DilStructure>;

impl DilStructure for DynDil {
    fn name(&self) -> String {
        (**self).name()
    }
    fn dilate(&self, x: &EvWord, stage: i64, y: &EvWord) -> Result<EvWord, DilError> {
        (**self).dilate(x, stage, y)
    }
    fn scale_weight(&self) -> u32 {
        (**self).scale_weight()
    }
}

/// `Δ^x_ε(u,v) = δ^{δ^x_ε u}_{ε^{-1}} δ^x_ε v` at stage `p`.
pub fn delta_stage(
    s: &dyn DilStructure,
    x: &EvWord,
    p: i64,
    u: &EvWord,
    v: &EvWord,
) -> Result<EvWord, DilError> {
    let du = s.dilate(x, p, u)?;
    let dv = s.dilate(x, p, v)?;
    s.dilate(&du, -p, &dv)
}

/// `Σ^x_ε(u,v) = δ^x_{ε^{-1}} δ^{δ^x_ε u}_ε v` at stage `p`.
pub fn sigma_stage(
    s: &dyn DilStructure,
    x: &EvWord,
    p: i64,
    u: &EvWord,
    v: &EvWord,
) -> Result<EvWord, DilError> {
    let du = s.dilate(x, p, u)?;
    let inner = s.dilate(&du, p, v)?;
    s.dilate(x, -p, &inner)
}

/// `inv^x_ε(u) = Δ^x_ε(u, x)` at stage `p`.
pub fn inv_stage(
    s: &dyn DilStructure,
    x: &EvWord,
    p: i64,
    u: &EvWord,
) -> Result<EvWord, DilError> {
    delta_stage(s, x, p, u, x)
}

/// A concrete, replayable violation record. Every failing verdict carries
/// one; the CLI `replay` command re-checks it in isolation.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Witness {
    /// Machine id of the violated check, e.g. `a2_composition`.
    pub check: String,
    /// Structure selector(s) involved.
    pub structures: Vec<String>,
    /// Named word operands.
    pub points: BTreeMap<String, EvWord>,
    /// Named integer operands (stages, levels).
    pub stages: BTreeMap<String, i64>,
    /// Auxiliary operands (finite words and the like).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, String>,
    pub expected: String,
    pub got: String,
}

impl Witness {
    pub fn new(check: &str, structure: &str) -> Self {
        Witness {
            check: check.to_string(),
            structures: vec![structure.to_string()],
            points: BTreeMap::new(),
            stages: BTreeMap::new(),
            expected: String::new(),
            got: String::new(),
        }
    }

    pub fn point(mut self, name: &str, w: &EvWord) -> Self {
        self.points.insert(name.to_string(), w.clone());
        self
    }

    pub fn stage(mut self, name: &str, p: i64) -> Self {
        self.stages.insert(name.to_string(), p);
        self
    }

    pub fn outcome(mut self, expected: impl ToString, got: impl ToString) -> Self {
        self.expected = expected.to_string();
        self.got = got.to_string();
        self
    }
}

/// Outcome of one named check over a sample campaign.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            pass: true,
            witness: None,
        }
    }

    pub fn fail(witness: Witness) -> Self {
        Verdict {
            pass: false,
            witness: Some(witness),
        }
    }

    /// Fold another verdict in, keeping the first witness.
    pub fn and(&mut self, other: Verdict) {
        if self.pass && !other.pass {
            self.pass = false;
            self.witness = other.witness;
        }
    }
}
