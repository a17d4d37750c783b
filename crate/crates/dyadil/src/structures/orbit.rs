//! The orbit suite of the density/uniqueness theorem: the orbit
//! `f(q) = δ_2^{x_{q_1}} … δ_2^{x_{q_n}}(x_0)` over words ending in 1, its
//! injectivity, distance law and density, the pointwise agreement radii of
//! two structures along the orbit, and the composite-contraction relations
//! `δ^{(q)}_{2^n} x = qx`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dilatation::checks::{check_linear, check_self_similar, Campaign};
use crate::dilatation::{DilStructure, Verdict, Witness};
use crate::error::DilError;
use crate::padic::PadicInt;
use crate::sample::WordSampler;
use crate::words::{concat, distance, EvWord, FiniteWord, UDistance};

/// All words of `F = {0} ∪ X*1` with length in `1..=max_len`, ordered by
/// length then lexicographically.
fn f_words(max_len: usize) -> Vec<FiniteWord> {
    let mut out = vec!["0".parse().unwrap(), "1".parse().unwrap()];
    for len in 2..=max_len {
        for mut head in FiniteWord::all_of_length(len - 1) {
            head.push(1);
            out.push(head);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitEntry {
    pub q: String,
    pub point: EvWord,
}

#[derive(Debug, Serialize)]
pub struct OrbitReport {
    pub structure: String,
    pub x0: EvWord,
    pub x1: EvWord,
    pub max_len: u32,
    pub entries: Vec<OrbitEntry>,
    pub injective: bool,
    pub distance_law: Verdict,
    /// Largest `k` such that every depth-`k` cylinder contains an orbit
    /// point.
    pub covered_depth: u32,
    pub pass: bool,
}

/// Evaluate `f(q)`: the innermost dilatation acts first.
pub fn orbit_point(
    s: &dyn DilStructure,
    x0: &EvWord,
    x1: &EvWord,
    q: &FiniteWord,
) -> Result<EvWord, DilError> {
    let mut point = x0.clone();
    for i in (0..q.len()).rev() {
        let base = if q.letter(i) == 0 { x0 } else { x1 };
        point = s.dilate(base, 1, &point)?;
    }
    Ok(point)
}

/// Enumerate the orbit and verify injectivity, the exact distance law on
/// diverging index pairs, and cylinder density.
pub fn le1_orbit(
    s: &dyn DilStructure,
    x0: &EvWord,
    x1: &EvWord,
    max_len: u32,
    precheck: Option<&Campaign>,
) -> Result<OrbitReport, DilError> {
    if distance(x0, x1) != UDistance::one() {
        return Err(DilError::Precondition(format!(
            "orbit base points must be at distance 1, got d({x0},{x1}) = {}",
            distance(x0, x1)
        )));
    }
    if let Some(c) = precheck {
        if !check_linear(s, c).pass {
            return Err(DilError::Precondition(format!(
                "{} is not linear at the probed depth",
                s.name()
            )));
        }
        if !check_self_similar(s, c).pass {
            return Err(DilError::Precondition(format!(
                "{} is not self-similar at the probed depth",
                s.name()
            )));
        }
    }

    let words = f_words(max_len as usize);
    let mut entries = Vec::with_capacity(words.len());
    for q in &words {
        entries.push(OrbitEntry {
            q: q.to_string(),
            point: orbit_point(s, x0, x1, q)?,
        });
    }

    // Injectivity.
    let mut seen: HashMap<&EvWord, &str> = HashMap::new();
    let mut injective = true;
    for e in &entries {
        if seen.insert(&e.point, &e.q).is_some() {
            injective = false;
            break;
        }
    }

    // Distance law on diverging pairs: d(f(q1), f(q2)) = 2^{-|z|} for the
    // common prefix z.
    let mut law = Verdict::pass();
    'law: for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate().skip(i + 1) {
            let lcp = (0..a.len().min(b.len()))
                .take_while(|&k| a.letter(k) == b.letter(k))
                .count();
            if lcp == a.len() || lcp == b.len() {
                continue; // prefix pairs follow a different exact law
            }
            let want = UDistance::pow2(-(lcp as i64));
            let got = distance(&entries[i].point, &entries[j].point);
            if got != want {
                law = Verdict::fail(
                    Witness::new("orbit_distance_law", &s.name())
                        .point("f_q1", &entries[i].point)
                        .stage("lcp", lcp as i64)
                        .outcome(want, got),
                );
                break 'law;
            }
        }
    }

    // Density: largest k with every depth-k cylinder hit.
    let mut covered_depth = 0u32;
    for k in 1..=max_len.saturating_sub(1) as usize {
        let mut hit = vec![false; 1 << k];
        for e in &entries {
            let mut idx = 0usize;
            for i in 0..k {
                idx = (idx << 1) | e.point.letter(i) as usize;
            }
            hit[idx] = true;
        }
        if hit.iter().all(|&h| h) {
            covered_depth = k as u32;
        } else {
            break;
        }
    }

    let pass = injective && law.pass && covered_depth >= max_len.saturating_sub(1);
    Ok(OrbitReport {
        structure: s.name(),
        x0: x0.clone(),
        x1: x1.clone(),
        max_len,
        entries,
        injective,
        distance_law: law,
        covered_depth,
        pass,
    })
}

#[derive(Debug, Serialize)]
pub struct AgreementPoint {
    pub q: String,
    pub point: EvWord,
    /// `log₂` of the largest verified agreement radius (0 means the whole
    /// space agreed), `None` when no radius up to the probe depth worked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_log2: Option<i64>,
}

#[derive(Debug, Serialize)]
pub struct AgreementReport {
    pub a: String,
    pub b: String,
    /// Both structures agree as full maps at the two base points.
    pub hypothesis_ok: bool,
    pub points: Vec<AgreementPoint>,
    pub pass: bool,
}

/// For each orbit point find the largest radius on which the two structures
/// agree as stage-1 maps, sampling tails inside shrinking cylinders.
pub fn check_agreement_dense(
    a: &dyn DilStructure,
    b: &dyn DilStructure,
    x0: &EvWord,
    x1: &EvWord,
    max_len: u32,
    depth: u32,
    seed: u64,
) -> Result<AgreementReport, DilError> {
    let mut sampler = WordSampler::new(seed ^ 0xa9ee, depth as usize, 4);
    // Hypothesis: agreement as full maps at the base points.
    let mut hypothesis_ok = true;
    for base in [x0, x1] {
        for _ in 0..48 {
            let y = sampler.word();
            if a.dilate(base, 1, &y)? != b.dilate(base, 1, &y)? {
                hypothesis_ok = false;
                break;
            }
        }
    }

    let orbit = le1_orbit(a, x0, x1, max_len, None)?;
    let per_radius_samples = 24;
    let mut points = Vec::with_capacity(orbit.entries.len());
    let mut pass = hypothesis_ok;
    for e in &orbit.entries {
        let mut found: Option<i64> = None;
        'radius: for r in 0..=depth as usize {
            for _ in 0..per_radius_samples {
                let y = concat(&e.point.truncate(r), &sampler.word());
                if a.dilate(&e.point, 1, &y)? != b.dilate(&e.point, 1, &y)? {
                    continue 'radius;
                }
            }
            found = Some(-(r as i64));
            break;
        }
        if found.is_none() {
            pass = false;
        }
        points.push(AgreementPoint {
            q: e.q.clone(),
            point: e.point.clone(),
            radius_log2: found,
        });
    }
    Ok(AgreementReport {
        a: a.name(),
        b: b.name(),
        hypothesis_ok,
        points,
        pass,
    })
}

/// The word `(q) = qqq…` as a 2-adic integer, by the geometric-series
/// identity `q / (1 - 2^n)`, cross-checked against the periodic word.
pub fn periodic_word_value(q: &FiniteWord) -> Result<EvWord, DilError> {
    assert!(!q.is_empty());
    let n = q.len();
    let mut qval = BigInt::zero();
    for i in 0..n {
        if q.letter(i) == 1 {
            qval += BigInt::one() << i;
        }
    }
    let denom = BigInt::one() - (BigInt::one() << n);
    let via_rational = PadicInt::from_rational_checked(qval, denom)
        .map_err(|e| DilError::Precondition(format!("(q) rational identity: {e}")))?;
    let via_period = EvWord::new(vec![], q.letters().to_vec());
    if *via_rational.word() != via_period {
        return Err(DilError::Precondition(format!(
            "(q) self-test failed for q={q}: rational route {} vs periodic route {}",
            via_rational.word(),
            via_period
        )));
    }
    Ok(via_period)
}

/// Verify `δ^{(q)}_{2^n} x = qx` on the given tails.
pub fn check_eqned_on(
    s: &dyn DilStructure,
    q: &FiniteWord,
    tails: &[EvWord],
) -> Result<Verdict, DilError> {
    let n = q.len();
    assert!(n >= 1);
    let base = periodic_word_value(q)?;
    for x in tails {
        let got = s.dilate(&base, n as i64, x)?;
        let want = concat(q, x);
        if got != want {
            return Ok(Verdict::fail(
                Witness::new("eqned_composite_contraction", &s.name())
                    .point("base", &base)
                    .point("x", x)
                    .stage("n", n as i64)
                    .outcome(want, got),
            ));
        }
    }
    Ok(Verdict::pass())
}

/// Verify `δ^{(q)}_{2^n} x = qx` on sampled tails.
pub fn check_eqned(
    s: &dyn DilStructure,
    q: &FiniteWord,
    samples: u32,
    seed: u64,
) -> Result<Verdict, DilError> {
    let mut sampler = WordSampler::new(seed ^ 0xe47d, 12, 4);
    let tails: Vec<EvWord> = (0..samples).map(|_| sampler.word()).collect();
    check_eqned_on(s, q, &tails)
}

/// Sweep every word `q` with `1 ≤ |q| ≤ max_len` against one shared
/// seeded sample set; first failure wins.
pub fn eqned_sweep(
    s: &dyn DilStructure,
    max_len: u32,
    samples: u32,
    seed: u64,
) -> Result<Verdict, DilError> {
    let mut sampler = WordSampler::new(seed ^ 0xe47d, 12, 4);
    let tails: Vec<EvWord> = (0..samples).map(|_| sampler.word()).collect();
    for len in 1..=max_len as usize {
        for q in FiniteWord::all_of_length(len) {
            let v = check_eqned_on(s, &q, &tails)?;
            if !v.pass {
                return Ok(v);
            }
        }
    }
    Ok(Verdict::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{Additive, Dihedral};

    fn w(s: &str) -> EvWord {
        s.parse().unwrap()
    }

    fn fw(s: &str) -> FiniteWord {
        s.parse().unwrap()
    }

    #[test]
    fn orbit_points_examples() {
        let x0 = w("(0)");
        let x1 = w("(1)");
        // f(0) is the fixed point x0.
        assert_eq!(orbit_point(&Additive, &x0, &x1, &fw("0")).unwrap(), x0);
        // f(1) = δ^{(1)}((0)) = 1.
        assert_eq!(orbit_point(&Additive, &x0, &x1, &fw("1")).unwrap(), w("1(0)"));
        // f(01) = δ^{(0)}(δ^{(1)}((0))) = 2.
        assert_eq!(
            orbit_point(&Additive, &x0, &x1, &fw("01")).unwrap(),
            w("01(0)")
        );
        // Both structures share the orbit (they agree at the base points).
        for q in ["0", "1", "01", "11", "101"] {
            assert_eq!(
                orbit_point(&Additive, &x0, &x1, &fw(q)).unwrap(),
                orbit_point(&Dihedral, &x0, &x1, &fw(q)).unwrap()
            );
        }
    }

    #[test]
    fn orbit_report_small() {
        let report = le1_orbit(&Additive, &w("(0)"), &w("(1)"), 6, None).unwrap();
        assert!(report.injective);
        assert!(report.distance_law.pass);
        assert!(report.covered_depth >= 5);
        assert!(report.pass);
    }

    #[test]
    fn orbit_rejects_close_base_points() {
        assert!(le1_orbit(&Additive, &w("(0)"), &w("01(0)"), 4, None).is_err());
    }

    #[test]
    fn agreement_radii_between_the_two_structures() {
        let report = check_agreement_dense(
            &Additive,
            &Dihedral,
            &w("(0)"),
            &w("(1)"),
            6,
            10,
            7,
        )
        .unwrap();
        assert!(report.hypothesis_ok);
        assert!(report.pass, "every orbit point has a positive radius");
        // At f(1) = 1(0) the structures disagree at distance 1 but agree on
        // the half cylinder: the radius is strictly between.
        let f1 = report.points.iter().find(|p| p.q == "1").unwrap();
        assert_eq!(f1.point, w("1(0)"));
        let r = f1.radius_log2.unwrap();
        assert!(r <= -1, "must shrink below the whole space, got 2^{r}");
    }

    #[test]
    fn self_agreement_has_radius_one() {
        let report =
            check_agreement_dense(&Additive, &Additive, &w("(0)"), &w("(1)"), 5, 8, 7).unwrap();
        assert!(report.pass);
        assert!(report.points.iter().all(|p| p.radius_log2 == Some(0)));
    }

    #[test]
    fn eqned_examples() {
        // (10) = -1/3 and δ^{-1/3}_4 x = 4x + 1 = concat("10", x).
        assert_eq!(periodic_word_value(&fw("10")).unwrap(), w("(10)"));
        assert!(check_eqned(&Additive, &fw("10"), 60, 3).unwrap().pass);
        assert!(check_eqned(&Dihedral, &fw("0"), 60, 3).unwrap().pass);
        assert!(check_eqned(&Additive, &fw("1"), 60, 3).unwrap().pass);
        // Spot value: δ^{(1)}_2 (0) = 1(0).
        assert_eq!(
            Additive.dilate(&w("(1)"), 1, &w("(0)")).unwrap(),
            w("1(0)")
        );
    }
}
