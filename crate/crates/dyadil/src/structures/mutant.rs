//! Deliberately broken structures. Every checker in the crate has at least
//! one bundled fixture that it must catch; a verifier untested on failures
//! is untrustworthy.

use std::sync::Arc;

use crate::dilatation::{DilStructure, DynDil};
use crate::error::DilError;
use crate::isometry::TreeIsometry;
use crate::padic::PadicInt;
use crate::structures::wcodec::{w_encode_unchecked, WFunction};
use crate::words::{self, EvWord};

/// `skew`: misroutes the cylinder `1X^ω` — bases starting with 1 dilate two
/// letters per stage instead of one. Exact rescaled distances keep shrinking
/// there, so no `p₀` exists; the cylinder surjectivity of Lemma-5.2 type
/// also fails.
pub struct Skew;

impl DilStructure for Skew {
    fn name(&self) -> String {
        "mutant:skew".into()
    }

    fn dilate(&self, x: &EvWord, stage: i64, y: &EvWord) -> Result<EvWord, DilError> {
        let shift = if x.letter(0) == 1 { 2 * stage } else { stage };
        let t = words::xor(x, y);
        if shift >= 0 {
            let mut prefix = vec![0u8; shift as usize];
            prefix.extend_from_slice(t.prefix());
            Ok(words::xor(x, &EvWord::new(prefix, t.period().to_vec())))
        } else {
            let k = (-shift) as usize;
            if (0..k).any(|i| t.letter(i) == 1) {
                return Err(DilError::OutsideDomain {
                    base: x.to_string(),
                    point: y.to_string(),
                    depth: k as u32,
                });
            }
            Ok(words::xor(x, &t.shift(k)))
        }
    }
}

/// `drift`: the additive structure plus a parasitic `2^{p+1}` offset at
/// stages `p ≥ 3` whenever `y - x` is odd. Stage-1 behaviour and exact
/// distance scaling survive, but stage composition (and with it the
/// finite-stage operation laws) breaks.
pub struct Drift;

impl DilStructure for Drift {
    fn name(&self) -> String {
        "mutant:drift".into()
    }

    fn dilate(&self, x: &EvWord, stage: i64, y: &EvWord) -> Result<EvWord, DilError> {
        let xp = PadicInt::from_word(x.clone());
        let yp = PadicInt::from_word(y.clone());
        let diff = yp.sub_ref(&xp);
        if stage >= 0 {
            let mut out = xp.add_ref(&diff.shl(stage as usize));
            if stage >= 3 && diff.word().letter(0) == 1 {
                out = out.add_ref(&PadicInt::one().shl(stage as usize + 1));
            }
            Ok(out.into_word())
        } else {
            let k = (-stage) as usize;
            let shifted = diff.shr_exact(k).ok_or_else(|| DilError::OutsideDomain {
                base: x.to_string(),
                point: y.to_string(),
                depth: k as u32,
            })?;
            Ok(xp.add_ref(&shifted).into_word())
        }
    }
}

/// `lag`: a W family alternating between the identity and the full
/// complement by level. Constant in the base point, hence smooth, hence a
/// valid weak structure; the difference maps oscillate between two cluster
/// points and the A4 limits never settle.
pub fn lag() -> DynDil {
    let w = WFunction::from_fn(
        |level, _| {
            Ok(if level % 2 == 1 {
                TreeIsometry::complement()
            } else {
                TreeIsometry::Identity
            })
        },
        "alternating-levels",
    );
    Arc::new(w_encode_unchecked(w, "mutant:lag"))
}

/// `warp`: a W family keyed to the second letter of the base point. Locally
/// constant (smooth), a valid weak structure, but the base dependence is not
/// equivariant, so linearity fails.
pub fn warp() -> DynDil {
    let w = WFunction::reduced(
        |base| {
            if base.letter(1) == 1 {
                TreeIsometry::complement()
            } else {
                TreeIsometry::Identity
            }
        },
        "second-letter",
    );
    Arc::new(w_encode_unchecked(w, "mutant:warp"))
}

/// `tail`: a W family sensitive to the infinite tail of the base —
/// complement iff the base has infinitely many ones. Discontinuous at every
/// eventually-zero point; the encoded structure fails the A1 continuity
/// clause.
pub fn tail() -> DynDil {
    let w = WFunction::reduced(
        |base| {
            if base.period() == [0] {
                TreeIsometry::Identity
            } else {
                TreeIsometry::complement()
            }
        },
        "tail-sensitive",
    );
    Arc::new(w_encode_unchecked(w, "mutant:tail"))
}

pub fn names() -> &'static [&'static str] {
    &["skew", "drift", "lag", "warp", "tail"]
}

pub fn by_name(name: &str) -> Option<DynDil> {
    match name {
        "skew" => Some(Arc::new(Skew)),
        "drift" => Some(Arc::new(Drift)),
        "lag" => Some(lag()),
        "warp" => Some(warp()),
        "tail" => Some(tail()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Dihedral;
    use crate::dilatation::checks::{check_axioms, check_linear, find_p0, Campaign};
    use crate::dilatation::tangent::stabilize_tangent;

    fn w(s: &str) -> EvWord {
        s.parse().unwrap()
    }

    fn campaign() -> Campaign {
        Campaign::new(10, 120, 7)
    }

    #[test]
    fn skew_fails_p0_with_witness() {
        let c = campaign();
        let err = find_p0(&Skew, &c).unwrap_err();
        assert_eq!(err.check, "a3_rescaled_distance");
        // The witness base lies in the misrouted cylinder.
        assert_eq!(err.points["x"].letter(0), 1);
    }

    #[test]
    fn skew_matches_dihedral_on_good_cylinder() {
        let mut sampler = crate::sample::WordSampler::new(2, 8, 4);
        for _ in 0..50 {
            let x = words::cons(0, &sampler.word());
            let y = sampler.word();
            assert_eq!(
                Skew.dilate(&x, 1, &y).unwrap(),
                Dihedral.dilate(&x, 1, &y).unwrap()
            );
        }
    }

    #[test]
    fn drift_fails_opcollection_but_scales_exactly() {
        let c = campaign();
        assert_eq!(find_p0(&Drift, &c).unwrap(), 0, "distance scaling survives");
        let ops = crate::dilatation::checks::check_opcollection(&Drift, &c);
        assert!(!ops.all_pass());
        assert!(!ops.witnesses.is_empty());
        // The witness replays against the closed forms.
        let witness = &ops.witnesses[0];
        assert!(witness.check.starts_with("op_"));
    }

    #[test]
    fn lag_fails_a4_stabilization() {
        let err = stabilize_tangent(&*lag(), &w("(0)"), &w("1(0)"), &w("01(0)"), 24);
        assert!(matches!(err, Err(DilError::NoStabilization { .. })));
    }

    #[test]
    fn warp_fails_linearity() {
        let c = campaign();
        let v = check_linear(&*warp(), &c);
        assert!(!v.pass);
        assert!(v.witness.is_some());
    }

    #[test]
    fn tail_fails_a1_continuity() {
        let c = campaign();
        let report = check_axioms(&*tail(), &c);
        assert!(!report.axioms.a1);
        assert!(report
            .witnesses
            .iter()
            .any(|w| w.check == "a1_continuity"));
    }

    #[test]
    fn every_mutant_fails_verification() {
        let c = Campaign::new(8, 80, 7);
        for name in names() {
            let s = by_name(name).unwrap();
            let report = check_axioms(&s, &c);
            assert!(!report.all_pass(), "mutant {name} slipped through");
            assert!(
                !report.witnesses.is_empty(),
                "mutant {name} failed without witness"
            );
        }
    }
}
