//! Exact stabilized tangent limits.
//!
//! In the ultrametric setting rescaled distances are constant from `p₀` on,
//! but the stage-`p` difference and sum *points* carry a correction of
//! 2-adic size `ν(ε^p)·d(x,u)` that vanishes only in the limit (for the
//! affine structure the stage value is `x + v - u + ε^p(u - x)`), so
//! consecutive stages are literally equal only in degenerate cases. The
//! stabilizer therefore has two paths:
//!
//! - an exact path, taken when consecutive stages do coincide and stay
//!   coincident through a guard window;
//! - a certified extrapolation path: the exact stage-to-stage ultrametric
//!   distances `r_p = d(t_p, t_{p+1})` must become strictly decreasing, which
//!   by the isosceles property pins the limit to exactly `-log₂ r_p` letters
//!   at stage `p`; the pinned letters are completed to an eventually periodic
//!   word and the completion is cross-validated against `d(·, t_p) = r_p` at
//!   every computed stage. A wrong tail would break the equality as soon as
//!   `r_p` drops below the disagreement, so the horizon is pushed far past
//!   the completion's own period.
//!
//! Sequences whose stage distances never settle into strict decrease by the
//! requested horizon are reported as `NoStabilization` — the A4 failure
//! signal.

use serde::Serialize;

use crate::error::DilError;
use crate::words::{distance, EvWord, UDistance};

use super::{delta_stage, inv_stage, sigma_stage, DilStructure};

/// A stabilized limit value with its certification data.
#[derive(Clone, Debug, Serialize)]
pub struct Stabilized {
    pub value: EvWord,
    /// Stage from which the settling pattern (exact equality or strict
    /// Cauchy decrease) was observed to hold.
    pub stab_exponent: u32,
    /// Number of leading letters of `value` pinned by exact stage distances
    /// (`u32::MAX` when consecutive stages became literally equal).
    pub certified_prefix: u32,
    /// True when the sequence became exactly constant.
    pub exact: bool,
}

/// Guard window: how many extra stages an exact plateau must persist, and
/// how many extra stages are computed past the certification target.
const GUARD: u32 = 4;
/// Hard extension cap past the requested horizon, used only to resolve the
/// periodic tail of an already-settling sequence.
const TAIL_SLACK: u32 = 240;
/// Certified letters required beyond two repetitions of a candidate period
/// before the completion is accepted. A wrong completion would need the true
/// limit to sustain a fake shorter periodicity through this whole margin,
/// which bounded-complexity limits cannot do.
const TAIL_MARGIN: usize = 32;

/// Stabilize the sequence `p ↦ seq(p)`; `max_p` bounds the stage by which
/// settling must begin.
pub fn stabilize_limit<F>(seq: F, max_p: u32) -> Result<Stabilized, DilError>
where
    F: Fn(i64) -> Result<EvWord, DilError>,
{
    let mut terms: Vec<EvWord> = Vec::new();
    let mut dists: Vec<UDistance> = Vec::new();
    let extend_to = |terms: &mut Vec<EvWord>, dists: &mut Vec<UDistance>, n: u32| -> Result<(), DilError> {
        while terms.len() <= n as usize {
            let t = seq(terms.len() as i64)?;
            if let Some(prev) = terms.last() {
                dists.push(distance(prev, &t));
            }
            terms.push(t);
        }
        Ok(())
    };

    extend_to(&mut terms, &mut dists, max_p + GUARD)?;

    // Exact path: a plateau of GUARD consecutive equal terms.
    for p in 0..=max_p as usize {
        if dists[p..].len() >= GUARD as usize
            && dists[p..p + GUARD as usize].iter().all(|d| d.is_zero())
        {
            return Ok(Stabilized {
                value: terms[p].clone(),
                stab_exponent: p as u32,
                certified_prefix: u32::MAX,
                exact: true,
            });
        }
    }

    // Cauchy path: find the onset of strict decrease.
    let onset = match settle_onset(&dists) {
        Some(p) if p <= max_p as usize => p,
        _ => {
            return Err(DilError::NoStabilization {
                max_p,
                reason: "stage differences do not settle into strict decrease".into(),
            })
        }
    };

    // Extend until the certified prefix pins two full repetitions of the
    // candidate period plus the safety margin, then cross-validate.
    let mut horizon = max_p + GUARD;
    loop {
        let last = terms.len() - 1;
        let r_prev = dists[last - 1];
        let certified = match r_prev {
            UDistance::Zero => unreachable!("zero distance would have taken the exact path"),
            UDistance::Pow2 { log2 } => (-log2 + 1).max(0) as usize,
        };
        if let Some(candidate) = periodic_completion(&terms[last], certified) {
            let needed = candidate.prefix().len() + 2 * candidate.period().len() + TAIL_MARGIN;
            if certified >= needed && cross_validate(&candidate, &terms, &dists, onset) {
                return Ok(Stabilized {
                    value: candidate,
                    stab_exponent: onset as u32,
                    certified_prefix: certified as u32,
                    exact: false,
                });
            }
        }
        if horizon >= max_p + TAIL_SLACK {
            return Err(DilError::NoStabilization {
                max_p,
                reason: "limit tail not resolved within the extended horizon".into(),
            });
        }
        horizon += 16;
        extend_to(&mut terms, &mut dists, horizon)?;
        if settle_onset(&dists).map_or(true, |p| p > max_p as usize) {
            return Err(DilError::NoStabilization {
                max_p,
                reason: "stage differences stopped decreasing".into(),
            });
        }
    }
}

/// Least index from which the distance sequence is strictly decreasing
/// (zeros are not allowed here; plateaus of zeros take the exact path).
fn settle_onset(dists: &[UDistance]) -> Option<usize> {
    if dists.len() < 2 {
        return None;
    }
    let mut onset = 0usize;
    for i in 0..dists.len() - 1 {
        let decreasing = match (dists[i], dists[i + 1]) {
            (UDistance::Pow2 { log2: a }, UDistance::Pow2 { log2: b }) => b < a,
            _ => false,
        };
        if !decreasing {
            onset = i + 1;
        }
    }
    if onset + 1 < dists.len() {
        Some(onset)
    } else {
        None
    }
}

/// Minimal eventually periodic completion of the first `known` letters of
/// `w`: the earliest-starting, shortest period observed at least twice
/// inside the certified prefix.
fn periodic_completion(w: &EvWord, known: usize) -> Option<EvWord> {
    let letters: Vec<u8> = (0..known).map(|i| w.letter(i)).collect();
    let mut best: Option<(usize, usize)> = None; // (start, period)
    for q in 1..=known / 2 {
        // Earliest start from which period q holds through the whole prefix.
        let mut start = known - q;
        while start > 0 && letters[start - 1] == letters[start - 1 + q] {
            start -= 1;
        }
        if start + 2 * q <= known {
            let better = match best {
                None => true,
                Some((bs, bq)) => (start + q, q) < (bs + bq, bq),
            };
            if better {
                best = Some((start, q));
            }
        }
    }
    best.map(|(start, q)| EvWord::new(letters[..start].to_vec(), letters[start..start + q].to_vec()))
}

/// The isosceles property forces `d(candidate, t_p) = r_p` at every settled
/// stage; any wrong tail breaks this as soon as `r_p` undercuts it.
fn cross_validate(
    candidate: &EvWord,
    terms: &[EvWord],
    dists: &[UDistance],
    onset: usize,
) -> bool {
    for p in onset..terms.len() - 1 {
        if distance(candidate, &terms[p]) != dists[p] {
            return false;
        }
    }
    // The final term must already be strictly closer than the last recorded
    // stage distance.
    let last = terms.len() - 1;
    distance(candidate, &terms[last]) < dists[last - 1]
}

/// Stabilized `Σ^x(u,v)`, `Δ^x(u,v)` and `inv^x(u)` for one point triple.
#[derive(Clone, Debug, Serialize)]
pub struct TangentEval {
    pub sigma: Stabilized,
    pub delta: Stabilized,
    pub inv_u: Stabilized,
}

/// Iterate the finite-stage tangent operations and stabilize each limit.
pub fn stabilize_tangent(
    s: &dyn DilStructure,
    x: &EvWord,
    u: &EvWord,
    v: &EvWord,
    max_p: u32,
) -> Result<TangentEval, DilError> {
    let sigma = stabilize_limit(|p| sigma_stage(s, x, p, u, v), max_p)?;
    let delta = stabilize_limit(|p| delta_stage(s, x, p, u, v), max_p)?;
    let inv_u = stabilize_limit(|p| inv_stage(s, x, p, u), max_p)?;
    Ok(TangentEval {
        sigma,
        delta,
        inv_u,
    })
}

/// Default stabilization horizon for a campaign depth.
pub fn default_horizon(depth: u32) -> u32 {
    2 * depth + 4
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicInt;

    fn w(s: &str) -> EvWord {
        s.parse().unwrap()
    }

    #[test]
    fn exact_plateau() {
        let constant = w("01(1)");
        let got = stabilize_limit(|_| Ok(constant.clone()), 8).unwrap();
        assert!(got.exact);
        assert_eq!(got.value, constant);
        assert_eq!(got.stab_exponent, 0);
    }

    #[test]
    fn geometric_correction_is_extrapolated() {
        // t_p = 3 + 2^p · 5: the affine-structure shape of a stage sequence.
        let limit = PadicInt::from_integer(3);
        let c = PadicInt::from_integer(5);
        let got = stabilize_limit(
            |p| Ok(limit.add_ref(&c.shl(p as usize)).into_word()),
            12,
        )
        .unwrap();
        assert!(!got.exact);
        assert_eq!(got.value, w("11(0)"));
        assert_eq!(got.stab_exponent, 0);
        assert!(got.certified_prefix >= 12);
    }

    #[test]
    fn periodic_limit_with_rational_tail() {
        // t_p = -1/3 + 2^p: limit has a genuinely periodic expansion.
        let limit = PadicInt::from_rational_checked(BigIntOf(-1), BigIntOf(3)).unwrap();
        let got = stabilize_limit(
            |p| Ok(limit.add_ref(&PadicInt::one().shl(p as usize)).into_word()),
            12,
        )
        .unwrap();
        assert_eq!(got.value, w("(10)"));
        #[allow(non_snake_case)]
        fn BigIntOf(n: i64) -> num_bigint::BigInt {
            n.into()
        }
    }

    #[test]
    fn oscillation_is_rejected() {
        // Alternates between two words; never settles.
        let a = w("(0)");
        let b = w("(1)");
        let err = stabilize_limit(
            |p| Ok(if p % 2 == 0 { a.clone() } else { b.clone() }),
            10,
        )
        .unwrap_err();
        assert!(matches!(err, DilError::NoStabilization { .. }));
    }

    #[test]
    fn stalling_rates_are_rejected() {
        // d(t_p, t_{p+1}) constant: Cauchy decrease never begins.
        let got = stabilize_limit(
            |p| {
                Ok(PadicInt::from_integer(if p % 2 == 0 { 1 } else { 3 }).into_word())
            },
            10,
        );
        assert!(got.is_err());
    }
}
