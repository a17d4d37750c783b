//! An exact-arithmetic laboratory for dilatation structures on the boundary
//! of the dyadic tree (the middle-thirds Cantor set).
//!
//! The crate provides:
//! - exact eventually periodic words, the boundary ultrametric and the
//!   Cantor embedding ([`words`]);
//! - exact 2-adic integer arithmetic on digit streams ([`padic`]);
//! - dyadic tree automorphisms with portraits and a smoothness modulus
//!   ([`isometry`]);
//! - the dilatation-structure interface, stabilized tangent operations and
//!   the axiom/theorem verification engine ([`dilatation`]);
//! - the concrete additive, dihedral and valued-field structures, the
//!   W codec, restriction/pasting, the orbit/agreement suite and broken
//!   mutant fixtures ([`structures`]);
//! - floating-point plane examples with convergence/divergence probes
//!   ([`realdil`]);
//! - exact-rational iterated function systems ([`ifs`]).
//!
//! Every checker is exact on words and every failing verdict carries a
//! witness that replays in isolation.

pub mod dilatation;
pub mod error;
pub mod ifs;
pub mod isometry;
pub mod padic;
pub mod realdil;
pub mod sample;
pub mod structures;
pub mod words;

use dilatation::{delta_stage, inv_stage, sigma_stage, Witness};
use error::DilError;
use words::{concat, cons, distance, EvWord};

/// Re-run a recorded witness in isolation. Returns `true` when the witness
/// still demonstrates a violation.
pub fn replay_witness(witness: &Witness) -> Result<bool, String> {
    let s = structures::parse_selector(
        witness
            .structures
            .first()
            .ok_or_else(|| "witness lists no structure".to_string())?,
    )?;
    let point = |name: &str| -> Result<EvWord, String> {
        witness
            .points
            .get(name)
            .cloned()
            .ok_or_else(|| format!("witness is missing point {name:?}"))
    };
    let stage = |name: &str| -> Result<i64, String> {
        let p = witness
            .stages
            .get(name)
            .copied()
            .ok_or_else(|| format!("witness is missing stage {name:?}"))?;
        // Stages drive loop counts and allocation sizes; reject junk.
        if p.unsigned_abs() > 4096 {
            return Err(format!("stage {name} = {p} is out of range"));
        }
        Ok(p)
    };
    let check = witness.check.as_str();
    let violated = match check {
        "a1_identity" => s.dilate(&point("x")?, 0, &point("y")?).map_err(str_of)? != point("y")?,
        "a1_fixed_point" => {
            let x = point("x")?;
            s.dilate(&x, stage("p")?, &x).map_err(str_of)? != x
        }
        "a1_continuity" => {
            let x = point("x")?;
            let x2 = point("x2")?;
            let y = point("y")?;
            let m = x.lcp_len(&x2).ok_or("witness points x, x2 coincide")? as i64;
            let a = s.dilate(&x, 1, &y).map_err(str_of)?;
            let b = s.dilate(&x2, 1, &y).map_err(str_of)?;
            distance(&a, &b) > words::UDistance::pow2(-m + 1)
        }
        "a2_composition" => {
            let (x, y) = (point("x")?, point("y")?);
            let (a, b) = (stage("a")?, stage("b")?);
            let inner = s.dilate(&x, b, &y).map_err(str_of)?;
            let lhs = s.dilate(&x, a, &inner).map_err(str_of)?;
            let rhs = s.dilate(&x, a + b, &y).map_err(str_of)?;
            lhs != rhs
        }
        "a2_inverse_stage" => {
            let (x, y) = (point("x")?, point("y")?);
            let (a, b) = (stage("a")?, stage("b")?);
            let big = s.dilate(&x, a + b, &y).map_err(str_of)?;
            let down = s.dilate(&x, -a, &big).map_err(str_of)?;
            down != s.dilate(&x, b, &y).map_err(str_of)?
        }
        "a2_roundtrip" => {
            let (x, y) = (point("x")?, point("y")?);
            let a = stage("a")?;
            let up = s.dilate(&x, a, &y).map_err(str_of)?;
            s.dilate(&x, -a, &up).map_err(str_of)? != y
        }
        "a3_rescaled_distance" => {
            let (x, u, v) = (point("x")?, point("u")?, point("v")?);
            let depth = stage("depth")?;
            let w = s.scale_weight() as i64;
            let mut vals = Vec::new();
            for p in 0..=depth {
                let du = s.dilate(&x, p, &u).map_err(str_of)?;
                let dv = s.dilate(&x, p, &v).map_err(str_of)?;
                vals.push(distance(&du, &dv).scale(w * p));
            }
            let last = *vals.last().unwrap();
            match vals.iter().rposition(|d| *d != last) {
                None => false,
                Some(i) => (i + 1) as i64 >= depth,
            }
        }
        "a3_exact_scaling" | "cone_property" => {
            let (x, u, v) = (point("x")?, point("u")?, point("v")?);
            let p = stage("p")?;
            let du = s.dilate(&x, p, &u).map_err(str_of)?;
            let dv = s.dilate(&x, p, &v).map_err(str_of)?;
            distance(&du, &dv).scale(s.scale_weight() as i64 * p) != distance(&u, &v)
        }
        "a3_cylinder_containment" => {
            let (x, u) = (point("x")?, point("u")?);
            let p = stage("p")?;
            let k = s.scale_weight() as i64 * p;
            let du = s.dilate(&x, p, &u).map_err(str_of)?;
            distance(&x, &du) > words::UDistance::pow2(-k) && x != du
        }
        "a3_cylinder_surjective" => {
            let (x, target) = (point("x")?, point("target")?);
            let p = stage("p")?;
            match s.dilate(&x, -p, &target) {
                Err(_) => true,
                Ok(back) => s.dilate(&x, p, &back).map_err(str_of)? != target,
            }
        }
        "a4_stabilization" => {
            let (x, u, v) = (point("x")?, point("u")?, point("v")?);
            let max_p = stage("max_p")? as u32;
            dilatation::stabilize_tangent(&s, &x, &u, &v, max_p).is_err()
        }
        "linear_commutation" => {
            let (x, u, v) = (point("x")?, point("u")?, point("v")?);
            let e = stage("e")?;
            let inner = s.dilate(&u, e, &v).map_err(str_of)?;
            let lhs = s.dilate(&x, e, &inner).map_err(str_of)?;
            let xu = s.dilate(&x, e, &u).map_err(str_of)?;
            let xv = s.dilate(&x, e, &v).map_err(str_of)?;
            lhs != s.dilate(&xu, e, &xv).map_err(str_of)?
        }
        "linear_delta_translation" => {
            let (x, u, v, y) = (point("x")?, point("u")?, point("v")?, point("y")?);
            let (e, mu) = (stage("e")?, stage("mu")?);
            let dyv = s.dilate(&y, mu, &v).map_err(str_of)?;
            let lhs = delta_stage(&s, &x, e, &u, &dyv).map_err(str_of)?;
            let base = delta_stage(&s, &x, e, &u, &y).map_err(str_of)?;
            let dv = delta_stage(&s, &x, e, &u, &v).map_err(str_of)?;
            lhs != s.dilate(&base, mu, &dv).map_err(str_of)?
        }
        "self_similar" => {
            let (x, y) = (point("x")?, point("y")?);
            let alpha = stage("alpha")? as u8;
            let lhs = s
                .dilate(&cons(alpha, &x), 1, &cons(alpha, &y))
                .map_err(str_of)?;
            lhs != cons(alpha, &s.dilate(&x, 1, &y).map_err(str_of)?)
        }
        "op_a_sigma_neutral" => {
            let (x, u) = (point("x")?, point("u")?);
            let e = stage("e")?;
            sigma_stage(&s, &x, e, &x, &u).map_err(str_of)? != u
        }
        "op_b_sigma_delta_inverse" | "op_b_delta_sigma_inverse" => {
            let (x, u, v) = (point("x")?, point("u")?, point("v")?);
            let e = stage("e")?;
            let d = delta_stage(&s, &x, e, &u, &v).map_err(str_of)?;
            let g = sigma_stage(&s, &x, e, &u, &v).map_err(str_of)?;
            sigma_stage(&s, &x, e, &u, &d).map_err(str_of)? != v
                || delta_stage(&s, &x, e, &u, &g).map_err(str_of)? != v
        }
        "op_c_shifted_involutive" => {
            let (x, u) = (point("x")?, point("u")?);
            let e = stage("e")?;
            let du = s.dilate(&x, e, &u).map_err(str_of)?;
            let j = inv_stage(&s, &x, e, &u).map_err(str_of)?;
            inv_stage(&s, &du, e, &j).map_err(str_of)? != u
        }
        "op_d_shifted_associative" => {
            let (x, u, v, t) = (point("x")?, point("u")?, point("v")?, point("w")?);
            let e = stage("e")?;
            let du = s.dilate(&x, e, &u).map_err(str_of)?;
            let inner = sigma_stage(&s, &du, e, &v, &t).map_err(str_of)?;
            let lhs = sigma_stage(&s, &x, e, &u, &inner).map_err(str_of)?;
            let sv = sigma_stage(&s, &x, e, &u, &v).map_err(str_of)?;
            lhs != sigma_stage(&s, &x, e, &sv, &t).map_err(str_of)?
        }
        "op_e_delta_from_sigma" => {
            let (x, u, v) = (point("x")?, point("u")?, point("v")?);
            let e = stage("e")?;
            let lhs = delta_stage(&s, &x, e, &u, &v).map_err(str_of)?;
            let du = s.dilate(&x, e, &u).map_err(str_of)?;
            let j = inv_stage(&s, &x, e, &u).map_err(str_of)?;
            lhs != sigma_stage(&s, &du, e, &j, &v).map_err(str_of)?
        }
        "op_f_delta_dilated" => {
            let (x, u, v) = (point("x")?, point("u")?, point("v")?);
            let (e, mu) = (stage("e")?, stage("mu")?);
            let du = s.dilate(&x, mu, &u).map_err(str_of)?;
            let dv = s.dilate(&x, mu, &v).map_err(str_of)?;
            let lhs = delta_stage(&s, &x, e, &du, &dv).map_err(str_of)?;
            let base = s.dilate(&x, e + mu, &u).map_err(str_of)?;
            let inner = delta_stage(&s, &x, e + mu, &u, &v).map_err(str_of)?;
            lhs != s.dilate(&base, mu, &inner).map_err(str_of)?
        }
        "eqned_composite_contraction" => {
            let (base, x) = (point("base")?, point("x")?);
            let n = stage("n")?;
            let got = s.dilate(&base, n, &x).map_err(str_of)?;
            let q = base.truncate(n as usize);
            got != concat(&q, &x)
        }
        "structure_disagreement" => {
            let other = structures::parse_selector(
                witness
                    .structures
                    .get(1)
                    .ok_or_else(|| "disagreement witness needs two structures".to_string())?,
            )?;
            let (x, y) = (point("x")?, point("y")?);
            let p = stage("p")?;
            s.dilate(&x, p, &y).map_err(str_of)? != other.dilate(&x, p, &y).map_err(str_of)?
        }
        other => return Err(format!("unknown check id {other:?}")),
    };
    Ok(violated)
}

fn str_of(e: DilError) -> String {
    e.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use dilatation::checks::{check_axioms, Campaign};

    #[test]
    fn mutant_witnesses_replay() {
        let c = Campaign::new(8, 80, 7);
        for sel in structures::bundled_mutant_selectors() {
            let s = structures::parse_selector(&sel).unwrap();
            let report = check_axioms(&s, &c);
            assert!(!report.all_pass(), "{sel}");
            let mut replayed = 0;
            for w in &report.witnesses {
                match replay_witness(w) {
                    Ok(true) => replayed += 1,
                    Ok(false) => panic!("{sel}: witness {w:?} did not reproduce"),
                    Err(e) => panic!("{sel}: replay error {e} for {w:?}"),
                }
            }
            assert!(replayed > 0, "{sel} produced no replayable witness");
        }
    }

    #[test]
    fn passing_structures_verify() {
        let c = Campaign::new(10, 60, 7);
        for sel in structures::bundled_passing_selectors() {
            let s = structures::parse_selector(sel).unwrap();
            let report = check_axioms(&s, &c);
            assert!(
                report.all_pass(),
                "{sel}: {:?}",
                report.witnesses.first()
            );
            assert_eq!(report.p0, Some(0), "{sel}");
        }
    }
}
