//! Equivalence probes between two structures: stabilized `P^x`/`Q^x`
//! transition maps, the first-disagreement witness search, and the 2-torsion
//! tangent invariant that separates the additive and dihedral structures.

use serde::Serialize;

use crate::error::DilError;
use crate::sample::{enumerate_words, WordSampler};

use super::checks::Campaign;
use super::tangent::{default_horizon, stabilize_limit};
use super::{sigma_stage, DilStructure, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceVerdict {
    /// No disagreement found at the probed depth; P and Q stabilized to the
    /// identity on all samples.
    EquivalentToDepth,
    /// The structures differ as maps; the transition maps still stabilized
    /// wherever probed.
    DistinctWithWitness,
    /// The 2-torsion tangent invariant separates the tangent groups, so no
    /// equivalence can exist.
    NonEquivalentTorsion,
}

/// `Σ^x(u,u) = x` for every sampled `u` (2-torsion tangent), or only at
/// `u = x` (torsion-free tangent).
#[derive(Clone, Debug, Serialize)]
pub struct TorsionInvariant {
    pub structure: String,
    /// True iff `Σ^x(u,u) = x` held for all sampled `(x,u)` with `u ≠ x`.
    pub all_torsion: bool,
    /// True iff `Σ^x(u,u) = x` held only when `u = x`.
    pub only_trivial: bool,
}

pub fn torsion_invariant(
    s: &dyn DilStructure,
    c: &Campaign,
) -> Result<TorsionInvariant, DilError> {
    let mut sampler = WordSampler::new(c.seed ^ 0x7041, c.depth as usize, 4);
    let horizon = default_horizon(c.depth);
    let mut all = true;
    let mut only_trivial = true;
    for _ in 0..c.samples.min(60) {
        let x = sampler.word();
        let u = sampler.word();
        if x == u {
            continue;
        }
        let doubled = stabilize_limit(|p| sigma_stage(s, &x, p, &u, &u), horizon)?.value;
        if doubled == x {
            only_trivial = false;
        } else {
            all = false;
        }
    }
    Ok(TorsionInvariant {
        structure: s.name(),
        all_torsion: all,
        only_trivial,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub a: String,
    pub b: String,
    pub verdict: EquivalenceVerdict,
    pub torsion_a: TorsionInvariant,
    pub torsion_b: TorsionInvariant,
    /// First pointwise disagreement of the two structures, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Whether the stabilized transition maps `P^x`, `Q^x` settled on all
    /// probe points.
    pub transition_maps_stabilized: bool,
    /// True when every stabilized `P^x(u)` and `Q^x(u)` equalled `u`.
    pub transition_maps_identity: bool,
}

/// Search the deterministic enumeration of small words for the first
/// `(x, stage, y)` where the two structures disagree.
pub fn first_disagreement(
    a: &dyn DilStructure,
    b: &dyn DilStructure,
    max_complexity: usize,
    max_stage: i64,
) -> Result<Option<Witness>, DilError> {
    let words = enumerate_words(max_complexity);
    for x in &words {
        for y in &words {
            for p in 1..=max_stage {
                let va = a.dilate(x, p, y)?;
                let vb = b.dilate(x, p, y)?;
                if va != vb {
                    let mut w = Witness::new("structure_disagreement", &a.name())
                        .point("x", x)
                        .point("y", y)
                        .stage("p", p)
                        .outcome(
                            format!("{} (value under {})", va, a.name()),
                            format!("{} (value under {})", vb, b.name()),
                        );
                    w.structures.push(b.name());
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// Full equivalence probe per the three-way verdict.
pub fn equivalence_probe(
    a: &dyn DilStructure,
    b: &dyn DilStructure,
    c: &Campaign,
) -> Result<EquivalenceReport, DilError> {
    let torsion_a = torsion_invariant(a, c)?;
    let torsion_b = torsion_invariant(b, c)?;
    let mut witness = first_disagreement(a, b, 4.min(c.depth as usize + 1), 2)?;

    // Stabilized transition maps P^x(u) = lim (δ^x_ε)^{-1} δ̄^x_ε u and the
    // mirror Q^x.
    let mut sampler = WordSampler::new(c.seed ^ 0x7042, c.depth as usize, 4);
    let horizon = default_horizon(c.depth);
    let mut stabilized = true;
    let mut identity = true;
    for _ in 0..c.samples.min(40) {
        let x = sampler.word();
        let u = sampler.word();
        let p_map = stabilize_limit(
            |p| {
                let pushed = b.dilate(&x, p, &u)?;
                a.dilate(&x, -p, &pushed)
            },
            horizon,
        );
        let q_map = stabilize_limit(
            |p| {
                let pushed = a.dilate(&x, p, &u)?;
                b.dilate(&x, -p, &pushed)
            },
            horizon,
        );
        match (p_map, q_map) {
            (Ok(p), Ok(q)) => {
                if p.value != u || q.value != u {
                    identity = false;
                }
            }
            _ => {
                stabilized = false;
                identity = false;
            }
        }
    }

    let torsion_differs = torsion_a.all_torsion != torsion_b.all_torsion;
    let verdict = if torsion_differs {
        EquivalenceVerdict::NonEquivalentTorsion
    } else if witness.is_some() {
        EquivalenceVerdict::DistinctWithWitness
    } else {
        EquivalenceVerdict::EquivalentToDepth
    };
    if verdict == EquivalenceVerdict::NonEquivalentTorsion && witness.is_none() {
        witness = first_disagreement(a, b, 6, 3)?;
    }
    Ok(EquivalenceReport {
        a: a.name(),
        b: b.name(),
        verdict,
        torsion_a,
        torsion_b,
        witness,
        transition_maps_stabilized: stabilized,
        transition_maps_identity: identity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::TreeIsometry;
    use crate::structures::{Additive, Conjugated, Dihedral};
    use std::sync::Arc;

    fn campaign() -> Campaign {
        Campaign::new(8, 40, 5)
    }

    #[test]
    fn structure_is_equivalent_to_itself() {
        let report = equivalence_probe(&Additive, &Additive, &campaign()).unwrap();
        assert_eq!(report.verdict, EquivalenceVerdict::EquivalentToDepth);
        assert!(report.transition_maps_stabilized);
        assert!(report.transition_maps_identity);
        assert!(report.witness.is_none());
    }

    #[test]
    fn additive_and_dihedral_differ_by_torsion() {
        let report = equivalence_probe(&Additive, &Dihedral, &campaign()).unwrap();
        assert_eq!(report.verdict, EquivalenceVerdict::NonEquivalentTorsion);
        assert!(!report.torsion_a.all_torsion);
        assert!(report.torsion_a.only_trivial);
        assert!(report.torsion_b.all_torsion);
        assert!(report.witness.is_some());
    }

    #[test]
    fn conjugation_by_complement_is_an_equivalence() {
        // The complement isometry commutes with the additive closed form,
        // so the conjugated structure coincides with it and the transition
        // maps settle to the identity.
        let conj = Conjugated::new(
            Arc::new(Additive),
            TreeIsometry::complement(),
            "complement",
        );
        let report = equivalence_probe(&Additive, &conj, &campaign()).unwrap();
        assert_eq!(report.verdict, EquivalenceVerdict::EquivalentToDepth);
        assert!(report.transition_maps_stabilized);
        assert!(report.transition_maps_identity);
    }
}
