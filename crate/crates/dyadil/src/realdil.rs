//! Floating-point plane examples and the numeric probes that witness
//! convergence or divergence of the A3/A4 limits.
//!
//! The `conjugated` family uses `δ_ε = diag(ε, ε³)` conjugated by the
//! lower shear `A(x) = [[1,0],[x₁,1]]`. One line shows the divergence: with
//! `u' = δ^x_ε u` the difference map contains
//! `δ_{ε^{-1}} A(u')^{-1} A(x) δ_ε`, and the lower-left entry of
//! `A(u')^{-1}A(x)` is `x₁ - u'₁ = -ε·(u-x)₁`, which the conjugation by
//! `diag(ε, ε³)` multiplies by `ε/ε³`; the product `-(u-x)₁/ε` blows up as
//! `ε → 0` whenever `(u-x)₁ ≠ 0`. The same family's A3 trace converges to a
//! degenerate limit (`diag(1, ε²) → diag(1, 0)` after rescaling).

use serde::Serialize;

pub type P2 = [f64; 2];

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn add(a: P2, b: P2) -> P2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn norm(a: P2) -> f64 {
    a[0].hypot(a[1])
}

/// The example families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "param")]
pub enum RealKind {
    Euclidean,
    /// Euclidean dilations measured in `d_φ(x,y) = ‖φ(x) - φ(y)‖` with
    /// `φ(x₁,x₂) = (x₁, x₂ + x₁²)` (on the unit ball, where φ is
    /// bi-Lipschitz).
    PhiDeformed,
    /// `d_a = d^a`, `δ(a)^x_ε = δ^x_{ε^{1/a}}`.
    Snowflake(f64),
    /// `δ_ε = ε^{1+iθ}` acting on ℝ² ≅ ℂ.
    ComplexRotation(f64),
    /// `δ_ε(x₁,x₂) = (ε x₁ + ε ln(ε) x₂, ε x₂)`: all axioms except A3.
    LogShear,
    /// The divergent conjugated family described in the module docs.
    Conjugated,
}

#[derive(Clone, Copy, Debug)]
pub struct RealStructure {
    pub kind: RealKind,
}

impl RealStructure {
    pub fn make_example(kind: RealKind) -> Result<Self, String> {
        match kind {
            RealKind::Snowflake(a) => {
                if !(a > 0.0 && a <= 1.0) {
                    return Err(format!("snowflake exponent must be in (0,1], got {a}"));
                }
            }
            RealKind::ComplexRotation(theta) => {
                if !theta.is_finite() {
                    return Err("rotation angle must be finite".into());
                }
            }
            _ => {}
        }
        Ok(RealStructure { kind })
    }

    /// `δ^x_ε y`; `ε > 1` gives the inverse maps (every family here is a
    /// one-parameter group in ε).
    pub fn dilate(&self, x: P2, eps: f64, y: P2) -> P2 {
        let d = sub(y, x);
        let moved = match self.kind {
            RealKind::Euclidean | RealKind::PhiDeformed => [eps * d[0], eps * d[1]],
            RealKind::Snowflake(a) => {
                let s = eps.powf(1.0 / a);
                [s * d[0], s * d[1]]
            }
            RealKind::ComplexRotation(theta) => {
                let r = eps;
                let phi = theta * eps.ln();
                let (sin, cos) = phi.sin_cos();
                [r * (cos * d[0] - sin * d[1]), r * (sin * d[0] + cos * d[1])]
            }
            RealKind::LogShear => {
                let l = eps.ln();
                [eps * (d[0] + l * d[1]), eps * d[1]]
            }
            RealKind::Conjugated => {
                // A(x) δ_ε A(x)^{-1} with A(x) = [[1,0],[x₁,1]], δ = diag(ε, ε³).
                let w2 = d[1] - x[0] * d[0];
                let e3 = eps * eps * eps;
                [eps * d[0], x[0] * eps * d[0] + e3 * w2]
            }
        };
        add(x, moved)
    }

    /// The family's reference distance.
    pub fn dist(&self, a: P2, b: P2) -> f64 {
        match self.kind {
            RealKind::PhiDeformed => {
                let phi = |p: P2| [p[0], p[1] + p[0] * p[0]];
                norm(sub(phi(a), phi(b)))
            }
            RealKind::Snowflake(s) => norm(sub(a, b)).powf(s),
            _ => norm(sub(a, b)),
        }
    }

    /// `Δ^x_ε(u,v) = δ^{δ^x_ε u}_{ε^{-1}} δ^x_ε v`.
    pub fn delta_diff(&self, x: P2, eps: f64, u: P2, v: P2) -> P2 {
        let du = self.dilate(x, eps, u);
        let dv = self.dilate(x, eps, v);
        self.dilate(du, 1.0 / eps, dv)
    }
}

/// Verdict thresholds: converging when the last three successive deltas are
/// below 1e-6, diverging when the last three values increase and the final
/// value exceeds 10× the first.
pub const CONVERGENCE_TOL: f64 = 1e-6;
pub const DIVERGENCE_FACTOR: f64 = 10.0;
/// A converging A3 trace whose limit is below this is a degenerate `d^x`.
pub const DEGENERACY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum TraceVerdict {
    Converging { limit: f64 },
    Degenerate { limit: f64 },
    Diverging { growth: f64 },
    Inconclusive,
}

/// A recorded probe: grid, scalar values, optional point data, verdict.
/// Everything needed to re-derive the verdict is in the trace.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceTrace {
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<P2>>,
    pub verdict: TraceVerdict,
}

impl ConvergenceTrace {
    pub fn csv(&self) -> String {
        let mut out = String::from("eps,value\n");
        for (e, v) in self.eps.iter().zip(&self.values) {
            out.push_str(&format!("{e},{v}\n"));
        }
        out
    }
}

fn classify_scalar(values: &[f64], deltas: &[f64], degenerate_probe: bool) -> TraceVerdict {
    let n = values.len();
    if n >= 4 {
        let increasing = values[n - 3..].windows(2).all(|w| w[1] > w[0]);
        if increasing && values[n - 1] > DIVERGENCE_FACTOR * values[0] {
            return TraceVerdict::Diverging {
                growth: values[n - 1] / values[0],
            };
        }
    }
    let m = deltas.len();
    if m >= 3 && deltas[m - 3..].iter().all(|d| d.abs() < CONVERGENCE_TOL) {
        let limit = values[n - 1];
        if degenerate_probe && limit.abs() < DEGENERACY_TOL {
            return TraceVerdict::Degenerate { limit };
        }
        return TraceVerdict::Converging { limit };
    }
    TraceVerdict::Inconclusive
}

/// A3 probe: record `(1/ε)·d(δ^x_ε u, δ^x_ε v)` over the grid.
pub fn probe_a3(s: &RealStructure, x: P2, u: P2, v: P2, grid: &[f64]) -> ConvergenceTrace {
    assert!(grid.len() >= 8, "grid must have at least 8 points");
    let values: Vec<f64> = grid
        .iter()
        .map(|&e| s.dist(s.dilate(x, e, u), s.dilate(x, e, v)) / e)
        .collect();
    let deltas: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let verdict = classify_scalar(&values, &deltas, true);
    ConvergenceTrace {
        eps: grid.to_vec(),
        values,
        points: None,
        verdict,
    }
}

/// A4 probe: record `Δ^x_ε(u,v)` over the grid; the scalar column is the
/// point norm, the verdict uses point-to-point deltas.
pub fn probe_a4(s: &RealStructure, x: P2, u: P2, v: P2, grid: &[f64]) -> ConvergenceTrace {
    assert!(grid.len() >= 8, "grid must have at least 8 points");
    let points: Vec<P2> = grid.iter().map(|&e| s.delta_diff(x, e, u, v)).collect();
    let values: Vec<f64> = points.iter().map(|&p| norm(p)).collect();
    let deltas: Vec<f64> = points.windows(2).map(|w| norm(sub(w[1], w[0]))).collect();
    let verdict = classify_scalar(&values, &deltas, false);
    ConvergenceTrace {
        eps: grid.to_vec(),
        values,
        points: Some(points),
        verdict,
    }
}

/// Numeric A1 probe: `δ^x_ε x = x` and `δ^x_1 y = y` to machine precision.
pub fn probe_a1(s: &RealStructure, x: P2, y: P2, grid: &[f64]) -> f64 {
    let mut worst: f64 = norm(sub(s.dilate(x, 1.0, y), y));
    for &e in grid {
        worst = worst.max(norm(sub(s.dilate(x, e, x), x)));
    }
    worst
}

/// Numeric A2 probe: worst composition defect
/// `‖δ^x_ε δ^x_μ y − δ^x_{εμ} y‖` over grid pairs.
pub fn probe_a2(s: &RealStructure, x: P2, y: P2, grid: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, &e) in grid.iter().enumerate() {
        let mu = grid[(i * 7 + 3) % grid.len()];
        let two_step = s.dilate(x, e, s.dilate(x, mu, y));
        let one_step = s.dilate(x, e * mu, y);
        worst = worst.max(norm(sub(two_step, one_step)));
    }
    worst
}

/// Parse grids of the form `2^-1..2^-24`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let (lo, hi) = spec
        .split_once("..")
        .ok_or_else(|| format!("grid must look like 2^-1..2^-24, got {spec:?}"))?;
    let parse_exp = |s: &str| -> Result<i32, String> {
        s.trim()
            .strip_prefix("2^")
            .ok_or_else(|| format!("grid bound must look like 2^-8, got {s:?}"))?
            .parse::<i32>()
            .map_err(|e| format!("grid exponent in {s:?}: {e}"))
    };
    let a = parse_exp(lo)?;
    let b = parse_exp(hi)?;
    if a <= b || a > 0 || b > 0 {
        return Err(format!(
            "grid exponents must be negative and decreasing, got {a} and {b}"
        ));
    }
    Ok((-a..=-b).map(|j| (-(j) as f64).exp2()).collect())
}

pub fn default_grid() -> Vec<f64> {
    parse_grid("2^-1..2^-24").expect("default grid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid24() -> Vec<f64> {
        default_grid()
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("2^-1..2^-4").unwrap();
        assert_eq!(g, vec![0.5, 0.25, 0.125, 0.0625]);
        assert!(parse_grid("2^-4..2^-1").is_err());
        assert!(parse_grid("junk").is_err());
        assert!(parse_grid("2^1..2^-4").is_err());
    }

    #[test]
    fn euclidean_probes() {
        let s = RealStructure::make_example(RealKind::Euclidean).unwrap();
        assert_eq!(s.dilate([0.0, 0.0], 0.5, [1.0, 0.0]), [0.5, 0.0]);
        let t = probe_a3(&s, [0.0, 0.0], [1.0, 0.0], [0.0, 0.0], &grid24());
        assert!(t.values.iter().all(|&v| (v - 1.0).abs() < 1e-12));
        match t.verdict {
            TraceVerdict::Converging { limit } => assert!((limit - 1.0).abs() < 1e-12),
            other => panic!("expected convergence, got {other:?}"),
        }

        // Δ^x_ε(u,v) = x + ε(u−x) + v − u, exactly.
        let t4 = probe_a4(&s, [0.0, 0.0], [1.0, 0.0], [0.0, 1.0], &grid24());
        for (&e, &p) in t4.eps.iter().zip(t4.points.as_ref().unwrap()) {
            let want = [e - 1.0, 1.0];
            assert!(norm(sub(p, want)) < 1e-12, "eps={e}");
        }
        // Spot value from the affine expansion at ε = 0.1.
        let p = s.delta_diff([0.0, 0.0], 0.1, [1.0, 0.0], [0.0, 1.0]);
        assert!(norm(sub(p, [-0.9, 1.0])) < 1e-12);
    }

    #[test]
    fn rotation_preserves_radii() {
        let s = RealStructure::make_example(RealKind::ComplexRotation(0.7)).unwrap();
        for &e in &grid24() {
            let moved = s.dilate([0.2, -0.1], e, [1.0, 0.4]);
            let want = e * norm(sub([1.0, 0.4], [0.2, -0.1]));
            assert!((norm(sub(moved, [0.2, -0.1])) - want).abs() < 1e-12);
        }
        // A4 converges to x + v − u with first-order error.
        let t = probe_a4(&s, [0.0, 0.0], [0.3, 0.0], [0.0, 0.2], &grid24());
        assert!(matches!(t.verdict, TraceVerdict::Converging { .. }));
        let last = t.points.unwrap()[23];
        assert!(norm(sub(last, [-0.3, 0.2])) < 1e-6);
    }

    #[test]
    fn snowflake_scaling() {
        let a = 0.5;
        let s = RealStructure::make_example(RealKind::Snowflake(a)).unwrap();
        let x = [0.1, 0.2];
        let y = [0.7, -0.3];
        for &e in &grid24()[..12] {
            let moved = s.dilate(x, e, y);
            assert!((s.dist(x, moved) - e * s.dist(x, y)).abs() < 1e-12);
        }
        // A3 value is d(u,v)^a at every ε. The probe stays above 2^-12:
        // deeper grids square ε past the double-precision cancellation
        // threshold for this family.
        let t = probe_a3(&s, x, [0.5, 0.2], [0.1, -0.1], &parse_grid("2^-1..2^-12").unwrap());
        match t.verdict {
            TraceVerdict::Converging { limit } => {
                let want = norm(sub([0.5, 0.2], [0.1, -0.1])).powf(a);
                assert!((limit - want).abs() < 1e-9);
            }
            other => panic!("expected convergence, got {other:?}"),
        }
        assert!(RealStructure::make_example(RealKind::Snowflake(0.0)).is_err());
        assert!(RealStructure::make_example(RealKind::Snowflake(1.5)).is_err());
    }

    #[test]
    fn phi_deformed_limit_is_derivative_norm() {
        let s = RealStructure::make_example(RealKind::PhiDeformed).unwrap();
        // x = (1,0), u − v = (1,0): limit ‖Dφ(x)(u−v)‖ = ‖(1,2)‖ = √5.
        let t = probe_a3(&s, [1.0, 0.0], [2.0, 0.0], [1.0, 0.0], &grid24());
        match t.verdict {
            TraceVerdict::Converging { limit } => {
                assert!((limit - 5f64.sqrt()).abs() < 1e-5);
            }
            other => panic!("expected convergence, got {other:?}"),
        }
    }

    #[test]
    fn log_shear_a3_diverges_like_log() {
        let s = RealStructure::make_example(RealKind::LogShear).unwrap();
        let t = probe_a3(&s, [0.0, 0.0], [0.0, 1.0], [0.0, 0.0], &grid24());
        // Closed form √(1 + ln²ε).
        for (&e, &v) in t.eps.iter().zip(&t.values) {
            let want = (1.0 + e.ln() * e.ln()).sqrt();
            assert!((v - want).abs() < 1e-9, "eps={e}");
        }
        assert!(matches!(t.verdict, TraceVerdict::Diverging { .. }));
        assert!(t.values[23] > 16.0);
        assert!((t.values[23] - 16.6658).abs() < 0.1);
    }

    #[test]
    fn log_shear_a4_converges() {
        let s = RealStructure::make_example(RealKind::LogShear).unwrap();
        let grid = parse_grid("2^-1..2^-30").unwrap();
        let t = probe_a4(&s, [0.0, 0.0], [0.0, 1.0], [0.3, 0.1], &grid);
        assert!(
            matches!(t.verdict, TraceVerdict::Converging { .. }),
            "{:?}",
            t.verdict
        );
        let last = t.points.unwrap().last().copied().unwrap();
        // Limit x + v − u.
        assert!(norm(sub(last, [0.3, -0.9])) < 1e-4);
    }

    #[test]
    fn conjugated_a4_diverges_and_a3_degenerates() {
        let s = RealStructure::make_example(RealKind::Conjugated).unwrap();
        let t = probe_a4(&s, [0.0, 0.0], [1.0, 0.0], [0.0, 1.0], &grid24());
        match t.verdict {
            TraceVerdict::Diverging { growth } => assert!(growth >= DIVERGENCE_FACTOR),
            other => panic!("expected divergence, got {other:?}"),
        }
        // A3 limit vanishes along the sheared direction: degenerate d^x.
        let t3 = probe_a3(&s, [0.0, 0.0], [0.0, 1.0], [0.0, 0.0], &grid24());
        assert!(
            matches!(t3.verdict, TraceVerdict::Degenerate { .. }),
            "{:?}",
            t3.verdict
        );
        // A1/A2 hold to machine precision.
        assert!(probe_a1(&s, [0.1, 0.2], [0.4, -0.2], &grid24()) < 1e-12);
        assert!(probe_a2(&s, [0.1, 0.2], [0.4, -0.2], &grid24()[..12]) < 1e-9);
    }

    #[test]
    fn a1_a2_probes_pass_everywhere() {
        for kind in [
            RealKind::Euclidean,
            RealKind::PhiDeformed,
            RealKind::Snowflake(0.5),
            RealKind::ComplexRotation(1.3),
            RealKind::LogShear,
            RealKind::Conjugated,
        ] {
            let s = RealStructure::make_example(kind).unwrap();
            let g = &grid24()[..12];
            assert!(probe_a1(&s, [0.3, -0.4], [0.2, 0.9], g) < 1e-12, "{kind:?}");
            assert!(probe_a2(&s, [0.3, -0.4], [0.2, 0.9], g) < 1e-9, "{kind:?}");
        }
    }
}
