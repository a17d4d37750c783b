//! Derivatives of maps between dilatation structures: the stabilized limit
//! `Df(x)(u) = lim δ̄^{f(x)}_{ε^{-1}} f(δ^x_ε u)` together with the conical
//! group morphism checks.

use std::sync::Arc;

use serde::Serialize;

use crate::error::DilError;
use crate::words::{concat, EvWord, FiniteWord};

use super::tangent::{stabilize_limit, Stabilized};
use super::{sigma_stage, DilStructure, Verdict, Witness};

/// A total map of boundary points, used as a differentiation subject.
pub trait PointMap: Send + Sync {
    fn name(&self) -> String;
    fn apply(&self, x: &EvWord) -> Result<EvWord, DilError>;
}

/// The identity map.
pub struct IdentityMap;

impl PointMap for IdentityMap {
    fn name(&self) -> String {
        "identity".into()
    }
    fn apply(&self, x: &EvWord) -> Result<EvWord, DilError> {
        Ok(x.clone())
    }
}

/// `y ↦ q·y`, the affine contraction onto the cylinder `qX^ω`.
pub struct PrefixMap(pub FiniteWord);

impl PointMap for PrefixMap {
    fn name(&self) -> String {
        format!("prefix:{}", self.0)
    }
    fn apply(&self, x: &EvWord) -> Result<EvWord, DilError> {
        Ok(concat(&self.0, x))
    }
}

/// Letterwise XOR translation.
pub struct XorMap(pub EvWord);

impl PointMap for XorMap {
    fn name(&self) -> String {
        format!("xor:{}", self.0)
    }
    fn apply(&self, x: &EvWord) -> Result<EvWord, DilError> {
        Ok(crate::words::xor(x, &self.0))
    }
}

/// Composition, applied right to left (`Compose([g, f])` is `g∘f`).
pub struct ComposeMap(pub Vec<Arc<dyn PointMap>>);

impl PointMap for ComposeMap {
    fn name(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|m| m.name()).collect();
        parts.join("∘")
    }
    fn apply(&self, x: &EvWord) -> Result<EvWord, DilError> {
        let mut cur = x.clone();
        for m in self.0.iter().rev() {
            cur = m.apply(&cur)?;
        }
        Ok(cur)
    }
}

/// The derivative value at one point together with the morphism verdicts.
#[derive(Debug, Serialize)]
pub struct DerivativeEval {
    pub at: EvWord,
    pub direction: EvWord,
    pub value: Stabilized,
    pub morphism: Verdict,
    pub scale_equivariant: Verdict,
}

/// Stabilized derivative of `f` at `x` in direction `u`, with the conical
/// morphism property and scale equivariance checked on the provided probe
/// directions.
pub fn derivative(
    src: &dyn DilStructure,
    dst: &dyn DilStructure,
    f: &dyn PointMap,
    x: &EvWord,
    u: &EvWord,
    probes: &[(EvWord, EvWord)],
    max_p: u32,
) -> Result<DerivativeEval, DilError> {
    let fx = f.apply(x)?;
    let df = |w: &EvWord| -> Result<Stabilized, DilError> {
        let fx = fx.clone();
        stabilize_limit(
            |p| {
                let pushed = f.apply(&src.dilate(x, p, w)?)?;
                dst.dilate(&fx, -p, &pushed)
            },
            max_p,
        )
    };
    let value = df(u)?;

    // Df(x)(Σ^x(u,v)) = Σ^{f(x)}(Df(x)u, Df(x)v) on the probe pairs.
    let mut morphism = Verdict::pass();
    let mut equivariant = Verdict::pass();
    for (a, b) in probes {
        let sig_src = stabilize_limit(|p| sigma_stage(src, x, p, a, b), max_p)?.value;
        let lhs = df(&sig_src)?.value;
        let da = df(a)?.value;
        let db = df(b)?.value;
        let rhs = stabilize_limit(|p| sigma_stage(dst, &fx, p, &da, &db), max_p)?.value;
        if lhs != rhs {
            morphism.and(Verdict::fail(
                Witness::new("derivative_morphism", &f.name())
                    .point("x", x)
                    .point("u", a)
                    .point("v", b)
                    .outcome(rhs, lhs),
            ));
        }
        // Df(x)(δ^x_ε a) = δ̄^{f(x)}_ε Df(x)(a)
        for e in [1i64, 2] {
            let lhs = df(&src.dilate(x, e, a)?)?.value;
            let rhs = dst.dilate(&fx, e, &da)?;
            if lhs != rhs {
                equivariant.and(Verdict::fail(
                    Witness::new("derivative_scale_equivariance", &f.name())
                        .point("x", x)
                        .point("u", a)
                        .stage("e", e)
                        .outcome(rhs, lhs),
                ));
            }
        }
    }
    Ok(DerivativeEval {
        at: x.clone(),
        direction: u.clone(),
        value,
        morphism,
        scale_equivariant: equivariant,
    })
}
