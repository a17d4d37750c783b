//! Induced (shifted) dilatation structures
//! `δ̂^u_ε v = δ^x_{μ^{-1}} δ^{δ^x_μ u}_ε δ^x_μ v` and their verdicts: the
//! axioms of the induced structure, the shift identity
//! `Σ^x_μ(u, δ^x_μ u) = u`, and the relative-distance isometry of
//! `Σ^x_μ(u, ·)`.

use serde::Serialize;

use crate::error::DilError;
use crate::sample::WordSampler;
use crate::words::{distance, EvWord, UDistance};

use super::checks::{check_axioms, AxiomReport, Campaign};
use super::{sigma_stage, DilStructure, DynDil, Verdict, Witness};

/// The structure `(U(x), δ̂, (δ^x, μ))` built from a base structure, a base
/// point and a shift stage `m ≥ 1` (`μ = ν(ε^m)`).
pub struct InducedStructure {
    base: DynDil,
    x: EvWord,
    m: i64,
}

impl InducedStructure {
    pub fn new(base: DynDil, x: EvWord, m: u32) -> Self {
        assert!(m >= 1);
        InducedStructure {
            base,
            x,
            m: m as i64,
        }
    }
}

impl DilStructure for InducedStructure {
    fn name(&self) -> String {
        format!("induced({},x={},m={})", self.base.name(), self.x, self.m)
    }

    fn scale_weight(&self) -> u32 {
        self.base.scale_weight()
    }

    fn dilate(&self, u: &EvWord, stage: i64, v: &EvWord) -> Result<EvWord, DilError> {
        let du = self.base.dilate(&self.x, self.m, u)?;
        let dv = self.base.dilate(&self.x, self.m, v)?;
        let inner = self.base.dilate(&du, stage, &dv)?;
        self.base.dilate(&self.x, -self.m, &inner)
    }
}

#[derive(Debug, Serialize)]
pub struct InducedReport {
    pub axioms: AxiomReport,
    pub isoshift: Verdict,
    pub relative_isometry: Verdict,
    pub stage_zero_identity: Verdict,
}

impl InducedReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.all_pass()
            && self.isoshift.pass
            && self.relative_isometry.pass
            && self.stage_zero_identity.pass
    }
}

/// Relative distance `(δ^x, μ)(a, b) = ν(ε^m)^{-1}·d(δ^x_m a, δ^x_m b)`.
fn relative_distance(
    s: &dyn DilStructure,
    x: &EvWord,
    m: i64,
    a: &EvWord,
    b: &EvWord,
) -> Result<UDistance, DilError> {
    let da = s.dilate(x, m, a)?;
    let db = s.dilate(x, m, b)?;
    Ok(distance(&da, &db).scale(s.scale_weight() as i64 * m))
}

/// Build the induced structure and verify it.
pub fn induced_structure(
    base: DynDil,
    x: &EvWord,
    m: u32,
    c: &Campaign,
) -> Result<(DynDil, InducedReport), DilError> {
    let induced: DynDil = std::sync::Arc::new(InducedStructure::new(base.clone(), x.clone(), m));
    let axioms = check_axioms(&induced, c);

    let mut sampler = WordSampler::new(c.seed ^ 0x51f7, c.depth as usize, 4);
    let mi = m as i64;
    let mut isoshift = Verdict::pass();
    let mut relative = Verdict::pass();
    let mut stage_zero = Verdict::pass();
    for _ in 0..c.samples {
        let u = sampler.word();
        let a = sampler.word();
        let b = sampler.word();

        // Σ^x_μ(u, δ^x_μ u) = u, exact at the finite stage.
        let shifted = base.dilate(x, mi, &u)?;
        let back = sigma_stage(&base, x, mi, &u, &shifted)?;
        if back != u {
            isoshift.and(Verdict::fail(
                Witness::new("isoshift", &base.name())
                    .point("x", x)
                    .point("u", &u)
                    .stage("m", mi)
                    .outcome(&u, back),
            ));
            break;
        }

        // Σ^x_μ(u, ·) is an isometry from (δ^{δ^x_μ u}, μ) to (δ^x, μ).
        let su_a = sigma_stage(&base, x, mi, &u, &a)?;
        let su_b = sigma_stage(&base, x, mi, &u, &b)?;
        let lhs = relative_distance(&base, x, mi, &su_a, &su_b)?;
        let rhs = relative_distance(&base, &shifted, mi, &a, &b)?;
        if lhs != rhs {
            relative.and(Verdict::fail(
                Witness::new("relative_isometry", &base.name())
                    .point("x", x)
                    .point("u", &u)
                    .point("a", &a)
                    .point("b", &b)
                    .stage("m", mi)
                    .outcome(rhs, lhs),
            ));
            break;
        }

        // Stage 0 of the induced structure is the identity.
        let same = induced.dilate(&u, 0, &a)?;
        if same != a {
            stage_zero.and(Verdict::fail(
                Witness::new("induced_stage_zero", &induced.name())
                    .point("u", &u)
                    .point("v", &a)
                    .outcome(&a, same),
            ));
            break;
        }
    }

    Ok((
        induced,
        InducedReport {
            axioms,
            isoshift,
            relative_isometry: relative,
            stage_zero_identity: stage_zero,
        },
    ))
}
