//! Axiom and theorem checkers. Every check is exact (word equality or exact
//! ultrametric distance equality); a failing verdict always carries a
//! witness tuple that `replay` can re-check in isolation.

use serde::{Deserialize, Serialize};

use crate::error::DilError;
use crate::sample::WordSampler;
use crate::words::{concat, cons, distance, EvWord, UDistance};

use super::tangent::{default_horizon, stabilize_tangent};
use super::{delta_stage, inv_stage, sigma_stage, DilStructure, Verdict, Witness};

/// Campaign parameters; identical parameters reproduce identical reports.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Campaign {
    pub depth: u32,
    pub samples: u32,
    pub seed: u64,
}

impl Campaign {
    pub fn new(depth: u32, samples: u32, seed: u64) -> Self {
        Campaign {
            depth,
            samples,
            seed,
        }
    }

    fn sampler(&self, salt: u64) -> WordSampler {
        WordSampler::new(
            self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt),
            self.depth as usize,
            4,
        )
    }
}

fn eval(
    s: &dyn DilStructure,
    check: &str,
    x: &EvWord,
    stage: i64,
    y: &EvWord,
) -> Result<EvWord, Box<Witness>> {
    s.dilate(x, stage, y).map_err(|e| {
        Box::new(
            Witness::new(check, &s.name())
                .point("x", x)
                .point("y", y)
                .stage("p", stage)
                .outcome("evaluation", format!("error: {e}")),
        )
    })
}

fn expect_eq(got: &EvWord, want: &EvWord, w: Witness) -> Verdict {
    if got == want {
        Verdict::pass()
    } else {
        Verdict::fail(w.outcome(want, got))
    }
}

/// A1: fixed point `δ^x_ε x = x` at every stage, identity at stage 0, and
/// the uniform-continuity clause measured directly on stage-1 maps.
pub fn check_a1(s: &dyn DilStructure, c: &Campaign) -> Verdict {
    let mut sampler = c.sampler(1);
    let mut verdict = Verdict::pass();
    for _ in 0..c.samples {
        let x = sampler.word();
        let y = sampler.word();
        // Identity at scale 1 (stage 0).
        match eval(s, "a1_identity", &x, 0, &y) {
            Ok(got) => verdict.and(expect_eq(
                &got,
                &y,
                Witness::new("a1_identity", &s.name())
                    .point("x", &x)
                    .point("y", &y)
                    .stage("p", 0),
            )),
            Err(w) => verdict.and(Verdict::fail(*w)),
        }
        // Fixed point at a sampled stage, both directions.
        for p in [sampler.stage(c.depth as i64), -sampler.stage(c.depth as i64)] {
            match eval(s, "a1_fixed_point", &x, p, &x) {
                Ok(got) => verdict.and(expect_eq(
                    &got,
                    &x,
                    Witness::new("a1_fixed_point", &s.name())
                        .point("x", &x)
                        .stage("p", p),
                )),
                Err(w) => verdict.and(Verdict::fail(*w)),
            }
        }
        if !verdict.pass {
            return verdict;
        }
    }
    verdict.and(check_a1_continuity(s, c));
    verdict
}

/// Continuity clause of A1: `δ^{x'}_2 y` must approach `δ^x_2 y` at the
/// ultrametric rate as `x' → x`. The measured bound is
/// `d(δ^x_2 y, δ^{x'}_2 y) ≤ 2 · d(x, x')`, which every smooth structure in
/// this crate satisfies; tail-discontinuous W families break it at deep
/// separations.
pub fn check_a1_continuity(s: &dyn DilStructure, c: &Campaign) -> Verdict {
    let mut sampler = c.sampler(2);
    let mut pairs: Vec<(EvWord, EvWord, EvWord)> = Vec::new();
    for m in 2..=c.depth.max(4) as usize {
        // Fixed probe at the all-zeros point against an all-ones tail: the
        // discontinuity locus of tail-sensitive families.
        let zero = EvWord::zero();
        let spiked = concat(&zero.truncate(m), &cons(1, &EvWord::constant(1)));
        pairs.push((zero, spiked, sampler.word()));
        // Probe around a sampled eventually-zero point.
        let base = concat(&sampler.finite(m.min(4)), &EvWord::zero());
        let perturbed = concat(&base.truncate(m), &cons(1 - base.letter(m), &sampler.word()));
        pairs.push((base, perturbed, sampler.word()));
        // Random pair at separation exactly m.
        let x = sampler.word();
        let x2 = concat(&x.truncate(m), &cons(1 - x.letter(m), &sampler.word()));
        pairs.push((x, x2, sampler.word()));
    }
    for (x, x2, y) in pairs {
        let m = match x.lcp_len(&x2) {
            None => continue,
            Some(m) => m as i64,
        };
        let a = match eval(s, "a1_continuity", &x, 1, &y) {
            Ok(v) => v,
            Err(w) => return Verdict::fail(*w),
        };
        let b = match eval(s, "a1_continuity", &x2, 1, &y) {
            Ok(v) => v,
            Err(w) => return Verdict::fail(*w),
        };
        let out = distance(&a, &b);
        let bound = UDistance::pow2(-m + 1);
        if out > bound {
            return Verdict::fail(
                Witness::new("a1_continuity", &s.name())
                    .point("x", &x)
                    .point("x2", &x2)
                    .point("y", &y)
                    .outcome(format!("d(δ^x y, δ^x' y) ≤ {bound}"), out),
            );
        }
    }
    Verdict::pass()
}

/// A2: stage composition `δ^x_a δ^x_b = δ^x_{a+b}`, including inverse stages
/// on their cylinder domains and the full inverse round trip.
pub fn check_a2(s: &dyn DilStructure, c: &Campaign) -> Verdict {
    let mut sampler = c.sampler(3);
    let max = (c.depth as i64).max(4);
    let mut verdict = Verdict::pass();
    for _ in 0..c.samples {
        let x = sampler.word();
        let y = sampler.word();
        let a = sampler.stage(max / 2);
        let b = sampler.stage(max / 2);
        let w = |check: &str| {
            Witness::new(check, &s.name())
                .point("x", &x)
                .point("y", &y)
                .stage("a", a)
                .stage("b", b)
        };
        let r = (|| -> Result<Verdict, Box<Witness>> {
            let inner = eval(s, "a2_composition", &x, b, &y)?;
            let lhs = eval(s, "a2_composition", &x, a, &inner)?;
            let rhs = eval(s, "a2_composition", &x, a + b, &y)?;
            let mut v = expect_eq(&lhs, &rhs, w("a2_composition"));
            // Inverse stage on the cylinder image: δ^x_{-a} δ^x_{a+b} = δ^x_b.
            let big = eval(s, "a2_inverse_stage", &x, a + b, &y)?;
            let down = eval(s, "a2_inverse_stage", &x, -a, &big)?;
            let direct = eval(s, "a2_inverse_stage", &x, b, &y)?;
            v.and(expect_eq(&down, &direct, w("a2_inverse_stage")));
            // Round trip.
            let up = eval(s, "a2_roundtrip", &x, a, &y)?;
            let back = eval(s, "a2_roundtrip", &x, -a, &up)?;
            v.and(expect_eq(&back, &y, w("a2_roundtrip")));
            Ok(v)
        })();
        match r {
            Ok(v) => verdict.and(v),
            Err(wit) => verdict.and(Verdict::fail(*wit)),
        }
        if !verdict.pass {
            return verdict;
        }
    }
    verdict
}

/// Least `p₀` with `ν(ε^p)^{-1}·d(δ^x_p u, δ^x_p v)` constant for `p ≥ p₀`
/// across all samples; an A3 failure witness otherwise.
pub fn find_p0(s: &dyn DilStructure, c: &Campaign) -> Result<u32, Box<Witness>> {
    let mut sampler = c.sampler(4);
    let weight = s.scale_weight() as i64;
    let mut worst = 0u32;
    for _ in 0..c.samples {
        let x = sampler.word();
        let u = sampler.word();
        let v = sampler.word();
        let mut values: Vec<UDistance> = Vec::new();
        for p in 0..=c.depth as i64 {
            let du = eval(s, "find_p0", &x, p, &u).map_err(|w| {
                Box::new(w.point("u", &u).point("v", &v))
            })?;
            let dv = eval(s, "find_p0", &x, p, &v).map_err(|w| {
                Box::new(w.point("u", &u).point("v", &v))
            })?;
            values.push(distance(&du, &dv).scale(weight * p));
        }
        let last = *values.last().unwrap();
        let p0 = match values.iter().rposition(|d| *d != last) {
            None => 0,
            Some(i) => (i + 1) as u32,
        };
        if p0 as i64 >= c.depth as i64 {
            return Err(Box::new(
                Witness::new("a3_rescaled_distance", &s.name())
                    .point("x", &x)
                    .point("u", &u)
                    .point("v", &v)
                    .stage("depth", c.depth as i64)
                    .outcome(
                        "rescaled distances constant from some p0 < depth",
                        format!(
                            "{}",
                            values
                                .iter()
                                .map(|d| d.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        ),
                    ),
            ));
        }
        worst = worst.max(p0);
    }
    Ok(worst)
}

/// A3 suite: `find_p0`, the Lemma-5.3 consequence `d^x = d` when `p₀ = 0`,
/// and the Lemma-5.2 cylinder equalities (containment plus surjectivity via
/// the inverse).
pub fn check_a3(s: &dyn DilStructure, c: &Campaign) -> (Option<u32>, Verdict) {
    let p0 = match find_p0(s, c) {
        Ok(p0) => p0,
        Err(w) => return (None, Verdict::fail(*w)),
    };
    let weight = s.scale_weight() as i64;
    let mut verdict = Verdict::pass();
    let mut sampler = c.sampler(5);
    for _ in 0..c.samples {
        let x = sampler.word();
        let u = sampler.word();
        let v = sampler.word();
        let p = sampler.stage(c.depth as i64);
        let r = (|| -> Result<(), Box<Witness>> {
            let du = eval(s, "a3_exact_scaling", &x, p, &u)?;
            let dv = eval(s, "a3_exact_scaling", &x, p, &v)?;
            if p0 == 0 {
                let scaled = distance(&du, &dv).scale(weight * p);
                let plain = distance(&u, &v);
                if scaled != plain {
                    return Err(Box::new(
                        Witness::new("a3_exact_scaling", &s.name())
                            .point("x", &x)
                            .point("u", &u)
                            .point("v", &v)
                            .stage("p", p)
                            .outcome(plain, scaled),
                    ));
                }
            }
            // Lemma 5.2 containment: the image lands in the cylinder [x]_{wp}.
            let k = (weight * p) as usize;
            if distance(&x, &du) > UDistance::pow2(-(k as i64)) && x != du {
                return Err(Box::new(
                    Witness::new("a3_cylinder_containment", &s.name())
                        .point("x", &x)
                        .point("u", &u)
                        .stage("p", p)
                        .outcome(format!("image in [x]_{k}"), du),
                ));
            }
            // Surjectivity onto the cylinder: any target with the right
            // prefix has a preimage (the inverse stage) that maps back.
            let target = concat(&x.truncate(k), &sampler.word());
            let back = eval(s, "a3_cylinder_surjective", &x, -p, &target)?;
            let fwd = eval(s, "a3_cylinder_surjective", &x, p, &back)?;
            if fwd != target {
                return Err(Box::new(
                    Witness::new("a3_cylinder_surjective", &s.name())
                        .point("x", &x)
                        .point("target", &target)
                        .stage("p", p)
                        .outcome(&target, fwd),
                ));
            }
            Ok(())
        })();
        if let Err(w) = r {
            verdict.and(Verdict::fail(*w));
            return (Some(p0), verdict);
        }
    }
    (Some(p0), verdict)
}

/// A4: the difference limits stabilize at every sampled triple.
pub fn check_a4(s: &dyn DilStructure, c: &Campaign) -> Verdict {
    let mut sampler = c.sampler(6);
    let n = c.samples.min(40);
    let horizon = default_horizon(c.depth);
    for _ in 0..n {
        let x = sampler.word();
        let u = sampler.word();
        let v = sampler.word();
        if let Err(e) = stabilize_tangent(s, &x, &u, &v, horizon) {
            return Verdict::fail(
                Witness::new("a4_stabilization", &s.name())
                    .point("x", &x)
                    .point("u", &u)
                    .point("v", &v)
                    .stage("max_p", horizon as i64)
                    .outcome("stabilized tangent operations", format!("error: {e}")),
            );
        }
    }
    Verdict::pass()
}

/// Cone property at one tuple: `d^x(u,v) = ν(ε^p)^{-1} d^x(δ^x_p u, δ^x_p v)`
/// exactly (with `d^x = d`, the `p₀ = 0` case).
pub fn cone_property(
    s: &dyn DilStructure,
    x: &EvWord,
    u: &EvWord,
    v: &EvWord,
    p: i64,
) -> Verdict {
    let w = Witness::new("cone_property", &s.name())
        .point("x", x)
        .point("u", u)
        .point("v", v)
        .stage("p", p);
    let du = match eval(s, "cone_property", x, p, u) {
        Ok(t) => t,
        Err(wit) => return Verdict::fail(*wit),
    };
    let dv = match eval(s, "cone_property", x, p, v) {
        Ok(t) => t,
        Err(wit) => return Verdict::fail(*wit),
    };
    let lhs = distance(u, v);
    let rhs = distance(&du, &dv).scale(s.scale_weight() as i64 * p);
    if lhs == rhs {
        Verdict::pass()
    } else {
        Verdict::fail(w.outcome(lhs, rhs))
    }
}

pub fn check_cone(s: &dyn DilStructure, c: &Campaign) -> Verdict {
    let mut sampler = c.sampler(7);
    let mut verdict = Verdict::pass();
    for _ in 0..c.samples {
        let x = sampler.word();
        let u = sampler.word();
        let v = sampler.word();
        let p = sampler.stage(c.depth as i64);
        verdict.and(cone_property(s, &x, &u, &v, p));
        if !verdict.pass {
            break;
        }
    }
    verdict
}

/// Linearity: `δ^x_ε δ^u_ε v = δ^{δ^x_ε u}_ε δ^x_ε v`, plus the Theorem-3.4(a)
/// consequence `Δ^x_ε(u, δ^y_μ v) = δ^{Δ^x_ε(u,y)}_μ Δ^x_ε(u,v)`.
pub fn check_linear(s: &dyn DilStructure, c: &Campaign) -> Verdict {
    let mut sampler = c.sampler(8);
    let mut verdict = Verdict::pass();
    for _ in 0..c.samples {
        let x = sampler.word();
        let u = sampler.word();
        let v = sampler.word();
        let e = 1 + sampler.stage(c.depth as i64 - 1);
        let r = (|| -> Result<Verdict, Box<Witness>> {
            let w = Witness::new("linear_commutation", &s.name())
                .point("x", &x)
                .point("u", &u)
                .point("v", &v)
                .stage("e", e);
            let inner = eval(s, "linear_commutation", &u, e, &v)?;
            let lhs = eval(s, "linear_commutation", &x, e, &inner)?;
            let xu = eval(s, "linear_commutation", &x, e, &u)?;
            let xv = eval(s, "linear_commutation", &x, e, &v)?;
            let rhs = eval(s, "linear_commutation", &xu, e, &xv)?;
            Ok(expect_eq(&lhs, &rhs, w))
        })();
        match r {
            Ok(v) => verdict.and(v),
            Err(w) => verdict.and(Verdict::fail(*w)),
        }
        if !verdict.pass {
            return verdict;
        }
        // Theorem 3.4(a) consequence, checked at small stages.
        let y = sampler.word();
        let mu = 1 + sampler.stage(3);
        let r = (|| -> Result<Verdict, Box<Witness>> {
            let w = Witness::new("linear_delta_translation", &s.name())
                .point("x", &x)
                .point("u", &u)
                .point("v", &v)
                .point("y", &y)
                .stage("e", e)
                .stage("mu", mu);
            let dyv = eval(s, "linear_delta_translation", &y, mu, &v)?;
            let lhs = delta_stage(s, &x, e, &u, &dyv).map_err(err_witness(s, "linear_delta_translation"))?;
            let base = delta_stage(s, &x, e, &u, &y).map_err(err_witness(s, "linear_delta_translation"))?;
            let dv = delta_stage(s, &x, e, &u, &v).map_err(err_witness(s, "linear_delta_translation"))?;
            let rhs = eval(s, "linear_delta_translation", &base, mu, &dv)?;
            Ok(expect_eq(&lhs, &rhs, w))
        })();
        match r {
            Ok(v) => verdict.and(v),
            Err(w) => verdict.and(Verdict::fail(*w)),
        }
        if !verdict.pass {
            return verdict;
        }
    }
    verdict
}

fn err_witness<'a>(
    s: &'a dyn DilStructure,
    check: &'a str,
) -> impl Fn(DilError) -> Box<Witness> + 'a {
    move |e| Box::new(Witness::new(check, &s.name()).outcome("evaluation", format!("error: {e}")))
}

/// Self-similarity: `δ^{αx}_2(αy) = α·δ^x_2(y)` for both letters.
pub fn check_self_similar(s: &dyn DilStructure, c: &Campaign) -> Verdict {
    let mut sampler = c.sampler(9);
    let mut verdict = Verdict::pass();
    for _ in 0..c.samples {
        let x = sampler.word();
        let y = sampler.word();
        for alpha in [0u8, 1u8] {
            let r = (|| -> Result<Verdict, Box<Witness>> {
                let w = Witness::new("self_similar", &s.name())
                    .point("x", &x)
                    .point("y", &y)
                    .stage("alpha", alpha as i64);
                let lhs = eval(s, "self_similar", &cons(alpha, &x), 1, &cons(alpha, &y))?;
                let rhs = cons(alpha, &eval(s, "self_similar", &x, 1, &y)?);
                Ok(expect_eq(&lhs, &rhs, w))
            })();
            match r {
                Ok(v) => verdict.and(v),
                Err(w) => verdict.and(Verdict::fail(*w)),
            }
            if !verdict.pass {
                return verdict;
            }
        }
    }
    verdict
}

/// Per-identity verdicts for the six finite-stage operation laws
/// (shifted involutive inverse, shifted associativity, and the rest).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OpcollectionReport {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
    pub e: bool,
    pub f: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witnesses: Vec<Witness>,
}

impl OpcollectionReport {
    pub fn all_pass(&self) -> bool {
        self.a && self.b && self.c && self.d && self.e && self.f
    }
}

pub fn check_opcollection(s: &dyn DilStructure, c: &Campaign) -> OpcollectionReport {
    let mut sampler = c.sampler(10);
    let mut report = OpcollectionReport {
        a: true,
        b: true,
        c: true,
        d: true,
        e: true,
        f: true,
        witnesses: Vec::new(),
    };
    for _ in 0..c.samples {
        let x = sampler.word();
        let u = sampler.word();
        let v = sampler.word();
        let t = sampler.word();
        let e = 1 + sampler.stage(c.depth as i64 - 1);
        let mu = 1 + sampler.stage(3);
        let base_witness = |check: &str| {
            Witness::new(check, &s.name())
                .point("x", &x)
                .point("u", &u)
                .point("v", &v)
                .point("w", &t)
                .stage("e", e)
                .stage("mu", mu)
        };
        let mut run = |flag: &mut bool,
                       check: &str,
                       f: &dyn Fn() -> Result<(EvWord, EvWord), DilError>| {
            if !*flag {
                return;
            }
            match f() {
                Ok((lhs, rhs)) => {
                    if lhs != rhs {
                        *flag = false;
                        report.witnesses.push(base_witness(check).outcome(rhs, lhs));
                    }
                }
                Err(err) => {
                    *flag = false;
                    report
                        .witnesses
                        .push(base_witness(check).outcome("evaluation", format!("error: {err}")));
                }
            }
        };

        // (a) Σ^x_ε(x, u) = u
        let mut a = report.a;
        run(&mut a, "op_a_sigma_neutral", &|| {
            Ok((sigma_stage(s, &x, e, &x, &u)?, u.clone()))
        });
        report.a = a;

        // (b) Σ^x_ε(u, ·) and Δ^x_ε(u, ·) are mutually inverse.
        let mut b = report.b;
        run(&mut b, "op_b_sigma_delta_inverse", &|| {
            let d = delta_stage(s, &x, e, &u, &v)?;
            Ok((sigma_stage(s, &x, e, &u, &d)?, v.clone()))
        });
        run(&mut b, "op_b_delta_sigma_inverse", &|| {
            let g = sigma_stage(s, &x, e, &u, &v)?;
            Ok((delta_stage(s, &x, e, &u, &g)?, v.clone()))
        });
        report.b = b;

        // (c) inv^{δ^x_ε u}_ε inv^x_ε(u) = u
        let mut cc = report.c;
        run(&mut cc, "op_c_shifted_involutive", &|| {
            let du = s.dilate(&x, e, &u)?;
            let j = inv_stage(s, &x, e, &u)?;
            Ok((inv_stage(s, &du, e, &j)?, u.clone()))
        });
        report.c = cc;

        // (d) Σ^x_ε(u, Σ^{δ^x_ε u}_ε(v, w)) = Σ^x_ε(Σ^x_ε(u,v), w)
        let mut dd = report.d;
        run(&mut dd, "op_d_shifted_associative", &|| {
            let du = s.dilate(&x, e, &u)?;
            let inner = sigma_stage(s, &du, e, &v, &t)?;
            let lhs = sigma_stage(s, &x, e, &u, &inner)?;
            let sv = sigma_stage(s, &x, e, &u, &v)?;
            let rhs = sigma_stage(s, &x, e, &sv, &t)?;
            Ok((lhs, rhs))
        });
        report.d = dd;

        // (e) Δ^x_ε(u,v) = Σ^{δ^x_ε u}_ε(inv^x_ε(u), v)
        let mut ee = report.e;
        run(&mut ee, "op_e_delta_from_sigma", &|| {
            let lhs = delta_stage(s, &x, e, &u, &v)?;
            let du = s.dilate(&x, e, &u)?;
            let j = inv_stage(s, &x, e, &u)?;
            Ok((lhs, sigma_stage(s, &du, e, &j, &v)?))
        });
        report.e = ee;

        // (f) Δ^x_ε(δ^x_μ u, δ^x_μ v) = δ^{δ^x_{εμ} u}_μ Δ^x_{εμ}(u,v)
        let mut ff = report.f;
        run(&mut ff, "op_f_delta_dilated", &|| {
            let du = s.dilate(&x, mu, &u)?;
            let dv = s.dilate(&x, mu, &v)?;
            let lhs = delta_stage(s, &x, e, &du, &dv)?;
            let base = s.dilate(&x, e + mu, &u)?;
            let inner = delta_stage(s, &x, e + mu, &u, &v)?;
            Ok((lhs, s.dilate(&base, mu, &inner)?))
        });
        report.f = ff;
    }
    report
}

/// Conical tangent group at `x`: group laws for the stabilized `Σ^x` with
/// neutral `x` and inverse `inv^x`, the morphism property of `δ^x_ε`, and
/// left translations being exact `d^x`-isometries.
pub fn tangent_conical_check(
    s: &dyn DilStructure,
    x: &EvWord,
    c: &Campaign,
) -> Result<Verdict, DilError> {
    let mut sampler = c.sampler(11);
    let horizon = default_horizon(c.depth);
    let n = c.samples.min(60);
    let sig = |a: &EvWord, b: &EvWord| -> Result<EvWord, DilError> {
        Ok(super::tangent::stabilize_limit(|p| sigma_stage(s, x, p, a, b), horizon)?.value)
    };
    let inv = |a: &EvWord| -> Result<EvWord, DilError> {
        Ok(super::tangent::stabilize_limit(|p| inv_stage(s, x, p, a), horizon)?.value)
    };
    for _ in 0..n {
        let u = sampler.word();
        let v = sampler.word();
        let t = sampler.word();
        let w = |check: &str| {
            Witness::new(check, &s.name())
                .point("x", x)
                .point("u", &u)
                .point("v", &v)
                .point("w", &t)
        };
        // Neutral element.
        let left = sig(x, &u)?;
        if left != u {
            return Ok(Verdict::fail(w("conical_neutral_left").outcome(&u, left)));
        }
        let right = sig(&u, x)?;
        if right != u {
            return Ok(Verdict::fail(w("conical_neutral_right").outcome(&u, right)));
        }
        // Inverse.
        let iu = inv(&u)?;
        let prod = sig(&u, &iu)?;
        if prod != *x {
            return Ok(Verdict::fail(w("conical_inverse").outcome(x, prod)));
        }
        let prod2 = sig(&iu, &u)?;
        if prod2 != *x {
            return Ok(Verdict::fail(w("conical_inverse_left").outcome(x, prod2)));
        }
        // Associativity.
        let lhs = sig(&u, &sig(&v, &t)?)?;
        let rhs = sig(&sig(&u, &v)?, &t)?;
        if lhs != rhs {
            return Ok(Verdict::fail(w("conical_associative").outcome(rhs, lhs)));
        }
        // δ^x_ε is a group morphism of Σ^x.
        let e = 1 + sampler.stage(4);
        let lhs = s.dilate(x, e, &sig(&u, &v)?)?;
        let rhs = sig(&s.dilate(x, e, &u)?, &s.dilate(x, e, &v)?)?;
        if lhs != rhs {
            return Ok(Verdict::fail(
                w("conical_dilation_morphism").stage("e", e).outcome(rhs, lhs),
            ));
        }
        // Left translations are d^x-isometries (d^x = d at p₀ = 0).
        let da = distance(&sig(&u, &v)?, &sig(&u, &t)?);
        let db = distance(&v, &t);
        if da != db {
            return Ok(Verdict::fail(
                w("conical_translation_isometry").outcome(db, da),
            ));
        }
    }
    Ok(Verdict::pass())
}

/// One machine-readable report covering the axioms and the derived law
/// suites for a structure.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomsSection {
    #[serde(rename = "A1")]
    pub a1: bool,
    #[serde(rename = "A2")]
    pub a2: bool,
    #[serde(rename = "A3")]
    pub a3: bool,
    #[serde(rename = "A4")]
    pub a4: bool,
    pub cone: bool,
    pub linear: bool,
    pub self_similar: bool,
    pub opcollection: OpcollectionFlags,
}

#[derive(Clone, Debug, Serialize)]
pub struct OpcollectionFlags {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
    pub e: bool,
    pub f: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub structure: String,
    pub depth: u32,
    pub samples: u32,
    pub seed: u64,
    pub p0: Option<u32>,
    pub non_contracting: bool,
    pub axioms: AxiomsSection,
    pub witnesses: Vec<Witness>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        let a = &self.axioms;
        a.a1 && a.a2
            && a.a3
            && a.a4
            && a.cone
            && a.linear
            && a.self_similar
            && a.opcollection.a
            && a.opcollection.b
            && a.opcollection.c
            && a.opcollection.d
            && a.opcollection.e
            && a.opcollection.f
    }
}

/// Run the full verification campaign on one structure.
pub fn check_axioms(s: &dyn DilStructure, c: &Campaign) -> AxiomReport {
    let mut witnesses = Vec::new();
    let mut take = |v: Verdict| -> bool {
        if let Some(w) = v.witness {
            witnesses.push(w);
        }
        v.pass
    };
    let a1 = take(check_a1(s, c));
    let a2 = take(check_a2(s, c));
    let (p0, a3v) = check_a3(s, c);
    let a3 = take(a3v);
    let a4 = take(check_a4(s, c));
    let cone = take(check_cone(s, c));
    let linear = take(check_linear(s, c));
    let self_similar = take(check_self_similar(s, c));
    let ops = check_opcollection(s, c);
    witnesses.extend(ops.witnesses.iter().cloned());
    AxiomReport {
        structure: s.name(),
        depth: c.depth,
        samples: c.samples,
        seed: c.seed,
        p0,
        non_contracting: s.scale_weight() == 0,
        axioms: AxiomsSection {
            a1,
            a2,
            a3,
            a4,
            cone,
            linear,
            self_similar,
            opcollection: OpcollectionFlags {
                a: ops.a,
                b: ops.b,
                c: ops.c,
                d: ops.d,
                e: ops.e,
                f: ops.f,
            },
        },
        witnesses,
    }
}
