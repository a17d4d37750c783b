//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them). Every tolerance and threshold is
//! pinned here, in code.

use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use dyadil::dilatation::checks::{
    check_cone, check_opcollection, find_p0, tangent_conical_check, Campaign,
};
use dyadil::dilatation::{equivalence_probe, DilStructure, DynDil, EquivalenceVerdict};
use dyadil::ifs::{self, IntervalUnion};
use dyadil::realdil::{self, RealKind, RealStructure};
use dyadil::sample::WordSampler;
use dyadil::structures::{
    check_agreement_dense, eqned_sweep, le1_orbit, parse_selector, w_decode, w_encode, Additive,
    Dihedral,
};
use dyadil::words::{distance, EvWord, FiniteWord};

fn w(s: &str) -> EvWord {
    s.parse().unwrap()
}

fn fw(s: &str) -> FiniteWord {
    s.parse().unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dyadil"))
}

/// Proposition 6.3 family: both structures satisfy the composite-contraction
/// relations exactly for every |q| ≤ 12 on 200 seeded samples, and the
/// distinguish probe separates them via the torsion invariant, inside 10 s.
#[test]
fn criterion_01_two_structures_on_the_same_ifs() {
    let start = Instant::now();
    for s in [Arc::new(Additive) as DynDil, Arc::new(Dihedral) as DynDil] {
        let verdict = eqned_sweep(&s, 12, 200, 0).unwrap();
        assert!(verdict.pass, "{}: {:?}", s.name(), verdict.witness);
    }
    let c = Campaign::new(12, 200, 0);
    let probe = equivalence_probe(&Additive, &Dihedral, &c).unwrap();
    assert_eq!(probe.verdict, EquivalenceVerdict::NonEquivalentTorsion);
    assert!(!probe.torsion_a.all_torsion && probe.torsion_a.only_trivial);
    assert!(probe.torsion_b.all_torsion);
    let witness = probe.witness.expect("disagreement witness");
    assert!(dyadil::replay_witness(&witness).unwrap());
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 1: PASS — both structures satisfy the relations for |q| ≤ 12, \
         distinguish separates them by torsion ({elapsed:?})"
    );
}

/// Exact stabilization of rescaled distances: p₀ = 0 for the three bundled
/// contracting structures and the rescaled distance equals d(u,v) at every
/// stage p ≤ 16.
#[test]
fn criterion_02_exact_distance_stabilization() {
    for sel in ["additive", "dihedral", "valued:2"] {
        let s = parse_selector(sel).unwrap();
        let c = Campaign::new(16, 200, 0);
        assert_eq!(find_p0(&s, &c).unwrap(), 0, "{sel}");
        let mut sampler = WordSampler::new(41, 16, 4);
        for _ in 0..200 {
            let x = sampler.word();
            let u = sampler.word();
            let v = sampler.word();
            let d = distance(&u, &v);
            for p in 0..=16i64 {
                let du = s.dilate(&x, p, &u).unwrap();
                let dv = s.dilate(&x, p, &v).unwrap();
                assert_eq!(
                    distance(&du, &dv).scale(p),
                    d,
                    "{sel} at x={x} u={u} v={v} p={p}"
                );
            }
        }
    }
    println!("ACCEPTANCE 2: PASS — p0 = 0 and exact 2^p rescaling for all p ≤ 16");
}

/// W-codec round trip: decode-then-encode agrees with the source structure
/// on 1000 sampled (x, stage, y) triples with words up to depth 64, exactly;
/// the decoded dihedral family matches its closed form on all samples.
#[test]
fn criterion_03_w_codec_roundtrip() {
    let c = Campaign::new(16, 80, 0);
    for (s, name) in [
        (Arc::new(Additive) as DynDil, "additive"),
        (Arc::new(Dihedral) as DynDil, "dihedral"),
    ] {
        let decoded = w_decode(s.clone(), 8, &c).unwrap();
        let rebuilt = w_encode(decoded, format!("reenc:{name}")).unwrap();
        let mut sampler = WordSampler::new(43, 64, 4);
        for i in 0..1000 {
            let x = sampler.word();
            let y = sampler.word();
            let p = sampler.stage(8);
            assert_eq!(
                rebuilt.dilate(&x, p, &y).unwrap(),
                s.dilate(&x, p, &y).unwrap(),
                "{name} sample {i}: x={x} p={p} y={y}"
            );
        }
    }
    // Decoded dihedral W = XOR translation by the adjacent-difference stream.
    let dih: DynDil = Arc::new(Dihedral);
    let mut sampler = WordSampler::new(47, 24, 4);
    for _ in 0..1000 {
        let base = sampler.word();
        let level = 1 + sampler.stage(6).unsigned_abs() as u32;
        let y = sampler.word();
        let extracted = dyadil::structures::extract_w(dih.clone(), level, &base);
        let closed = dyadil::structures::wcodec::dihedral_w_closed_form(level, &base);
        assert_eq!(
            extracted.apply(&y).unwrap(),
            closed.apply(&y).unwrap(),
            "level {level} base {base}"
        );
    }
    println!("ACCEPTANCE 3: PASS — decode∘encode is the identity on 1000 samples, dihedral W matches its closed form");
}

/// The six finite-stage operation identities hold exactly for both
/// structures at stages ≤ 12 on 200 samples; the drift mutant fails at
/// least one of them with a replayable witness.
#[test]
fn criterion_04_operation_identities() {
    let c = Campaign::new(12, 200, 0);
    for sel in ["additive", "dihedral"] {
        let s = parse_selector(sel).unwrap();
        let report = check_opcollection(&s, &c);
        assert!(report.all_pass(), "{sel}: {:?}", report.witnesses.first());
    }
    let drift = parse_selector("mutant:drift").unwrap();
    let report = check_opcollection(&drift, &c);
    assert!(!report.all_pass(), "mutant must fail an identity");
    let witness = report.witnesses.first().expect("witness");
    assert!(dyadil::replay_witness(witness).unwrap(), "witness replays");
    println!("ACCEPTANCE 4: PASS — identities (a)–(f) exact for both structures, mutant fails with replayable witness");
}

/// Conical tangent groups: group laws for the stabilized Σ^x, the morphism
/// property of δ^x_ε, left-translation isometry, and the cone property, all
/// exact for both structures.
#[test]
fn criterion_05_conical_tangent_groups() {
    let c = Campaign::new(10, 200, 0);
    for sel in ["additive", "dihedral"] {
        let s = parse_selector(sel).unwrap();
        assert!(check_cone(&s, &c).pass, "{sel} cone property");
        for x in ["(0)", "(1)", "1(0)", "(10)", "011(01)"] {
            let v = tangent_conical_check(&s, &w(x), &Campaign::new(10, 40, 0)).unwrap();
            assert!(v.pass, "{sel} at {x}: {:?}", v.witness);
        }
    }
    println!("ACCEPTANCE 5: PASS — conical group laws and the cone property hold exactly");
}

/// Independence of A3 and A4, numerically: the log-shear family blows up
/// the A3 trace like √(1+ln²ε) while its A4 trace converges; the conjugated
/// family keeps A1/A2 but its A4 trace diverges. Under 5 s.
#[test]
fn criterion_06_a3_a4_independence() {
    let start = Instant::now();
    let grid24 = realdil::default_grid();

    let shear = RealStructure::make_example(RealKind::LogShear).unwrap();
    let a3 = realdil::probe_a3(&shear, [0.0, 0.0], [0.0, 1.0], [0.0, 0.0], &grid24);
    let last = *a3.values.last().unwrap();
    assert!(last > 16.0, "A3 trace at 2^-24 is {last}");
    let closed = (1.0 + (2f64.powi(-24)).ln().powi(2)).sqrt();
    assert!((last - closed).abs() <= 0.1, "got {last}, closed form {closed}");
    assert!(matches!(a3.verdict, realdil::TraceVerdict::Diverging { .. }));

    let grid30 = realdil::parse_grid("2^-1..2^-30").unwrap();
    let a4 = realdil::probe_a4(&shear, [0.0, 0.0], [0.0, 1.0], [0.3, 0.1], &grid30);
    let points = a4.points.as_ref().unwrap();
    let tail_deltas: Vec<f64> = points
        .windows(2)
        .rev()
        .take(3)
        .map(|p| ((p[1][0] - p[0][0]).powi(2) + (p[1][1] - p[0][1]).powi(2)).sqrt())
        .collect();
    assert!(
        tail_deltas.iter().all(|d| *d < 1e-6),
        "A4 tail deltas {tail_deltas:?}"
    );
    assert!(matches!(a4.verdict, realdil::TraceVerdict::Converging { .. }));

    let conj = RealStructure::make_example(RealKind::Conjugated).unwrap();
    let a4c = realdil::probe_a4(&conj, [0.0, 0.0], [1.0, 0.0], [0.0, 1.0], &grid24);
    let growth = a4c.values.last().unwrap() / a4c.values.first().unwrap();
    assert!(growth >= 10.0, "conjugated A4 growth {growth}");
    assert!(matches!(a4c.verdict, realdil::TraceVerdict::Diverging { .. }));
    assert!(realdil::probe_a1(&conj, [0.2, -0.1], [0.5, 0.3], &grid24) < 1e-12);
    assert!(realdil::probe_a2(&conj, [0.2, -0.1], [0.5, 0.3], &grid24[..12]) < 1e-9);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("ACCEPTANCE 6: PASS — log_shear fails only A3, conjugated fails A4 ({elapsed:?})");
}

/// Euclidean and deformed plane examples: the difference map matches its
/// closed form to 1e-12 on the grid; the deformed A3 limit extrapolates to
/// √5 within 1e-6.
#[test]
fn criterion_07_plane_closed_forms() {
    let grid = realdil::default_grid();
    let euclid = RealStructure::make_example(RealKind::Euclidean).unwrap();
    // Canonical probe (the ε = 0.1 spot value of this configuration is
    // (-0.9, 1.0)); on the power-of-two grid the composition is exact.
    let (x, u, v) = ([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]);
    for &e in &grid {
        let got = euclid.delta_diff(x, e, u, v);
        let want = [
            x[0] + e * (u[0] - x[0]) + v[0] - u[0],
            x[1] + e * (u[1] - x[1]) + v[1] - u[1],
        ];
        let err = ((got[0] - want[0]).powi(2) + (got[1] - want[1]).powi(2)).sqrt();
        assert!(err < 1e-12, "eps={e}: err={err}");
    }
    let spot = euclid.delta_diff(x, 0.1, u, v);
    assert!(((spot[0] + 0.9).powi(2) + (spot[1] - 1.0).powi(2)).sqrt() < 1e-12);

    let phi = RealStructure::make_example(RealKind::PhiDeformed).unwrap();
    let t = realdil::probe_a3(&phi, [1.0, 0.0], [2.0, 0.0], [1.0, 0.0], &grid);
    // Richardson step on the geometric grid: the error is linear in ε.
    let n = t.values.len();
    let extrapolated = 2.0 * t.values[n - 1] - t.values[n - 2];
    assert!(
        (extrapolated - 5f64.sqrt()).abs() < 1e-6,
        "extrapolated {extrapolated}"
    );
    println!("ACCEPTANCE 7: PASS — euclidean Δ matches closed form to 1e-12, deformed A3 limit is √5 ± 1e-6");
}

/// The exact Cantor IFS: 256 intervals at depth 8 with the 3^-8 bound,
/// cross-checked by exact union-to-union Hausdorff distances; the composite
/// fixed point and the open set condition verdicts.
#[test]
fn criterion_08_exact_cantor_ifs() {
    let sys = ifs::IFSSystem::cantor();
    let (it8, bound8) = ifs::invariant_approx(&sys, &IntervalUnion::unit(), 8);
    assert_eq!(it8.len(), 256);
    let want_bound = ifs::Rat::new(1.into(), 6561.into());
    assert_eq!(bound8, want_bound);
    // Direct Hausdorff cross-check: iterates approach each other at least as
    // fast as the slope-power bounds, with exact rational comparisons, and
    // the distances are strictly ordered along the nest.
    let mut unions = vec![IntervalUnion::unit()];
    for _ in 0..10 {
        let next = ifs::hutchinson_step(&sys, unions.last().unwrap());
        unions.push(next);
    }
    let mut prev_dist: Option<ifs::Rat> = None;
    let mut bound = ifs::Rat::new(1.into(), 1.into());
    for n in 0..=8usize {
        let d = unions[n].hausdorff(&unions[10]);
        assert!(d <= bound, "d_H(S^{n}, S^10) exceeds 3^-{n}");
        if let Some(p) = &prev_dist {
            assert!(d < *p, "Hausdorff distances must shrink along the nest");
        }
        prev_dist = Some(d);
        bound /= ifs::Rat::new(3.into(), 1.into());
    }
    assert_eq!(
        ifs::fixed_point(&sys, &fw("01")),
        ifs::Rat::new(1.into(), 4.into())
    );
    assert_eq!(
        ifs::open_set_check(&sys, &IntervalUnion::unit()),
        ifs::OpenSetVerdict::Pass
    );
    assert_eq!(
        ifs::open_set_check(&ifs::IFSSystem::overlapping(), &IntervalUnion::unit()),
        ifs::OpenSetVerdict::FailsDisjointness
    );
    println!("ACCEPTANCE 8: PASS — 256 exact intervals with the 3^-8 bound, Hausdorff cross-check, fixed point 1/4, open-set verdicts");
}

/// Orbit density and pointwise agreement: the length-10 orbit is injective
/// with the exact distance law, covers every depth-6 cylinder, and the two
/// structures agree on a positive radius at every orbit point.
#[test]
fn criterion_09_orbit_density_and_agreement() {
    let x0 = w("(0)");
    let x1 = w("(1)");
    let precheck = Campaign::new(8, 60, 0);
    let orbit = le1_orbit(&Additive, &x0, &x1, 10, Some(&precheck)).unwrap();
    assert!(orbit.injective);
    assert!(orbit.distance_law.pass, "{:?}", orbit.distance_law.witness);
    assert!(orbit.covered_depth >= 6, "covered {}", orbit.covered_depth);

    let agreement =
        check_agreement_dense(&Additive, &Dihedral, &x0, &x1, 10, 12, 0).unwrap();
    assert!(agreement.hypothesis_ok);
    assert!(agreement.pass, "some orbit point found no radius");
    assert!(agreement
        .points
        .iter()
        .all(|p| p.radius_log2.is_some()));
    // The two structures genuinely disagree at f(1) = 1(0) at the coarse
    // scale, so its verified radius is strictly smaller than the space.
    let f1 = agreement.points.iter().find(|p| p.q == "1").unwrap();
    assert_eq!(f1.point, w("1(0)"));
    assert!(f1.radius_log2.unwrap() <= -1);
    println!("ACCEPTANCE 9: PASS — length-10 orbit dense to depth 6 with exact distance law, positive agreement radius everywhere");
}

/// Headless property suites: `verify` exits 0 on the bundled structures,
/// every mutant exits 1 with a replayable witness, and reports are
/// byte-identical across runs with the same seed.
#[test]
fn criterion_10_headless_campaigns() {
    for sel in dyadil::structures::bundled_passing_selectors() {
        let out = bin()
            .args([
                "verify",
                "--structure",
                sel,
                "--depth",
                "10",
                "--samples",
                "80",
                "--seed",
                "7",
            ])
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{sel}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        // Byte-identical on the second run.
        let again = bin()
            .args([
                "verify",
                "--structure",
                sel,
                "--depth",
                "10",
                "--samples",
                "80",
                "--seed",
                "7",
            ])
            .output()
            .unwrap();
        assert_eq!(out.stdout, again.stdout, "{sel} report is not stable");
    }
    let dir = std::env::temp_dir().join("dyadil-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    for sel in dyadil::structures::bundled_mutant_selectors() {
        let report_path = dir.join(format!("{}.json", sel.replace(':', "_")));
        let out = bin()
            .args([
                "verify",
                "--structure",
                &sel,
                "--depth",
                "8",
                "--samples",
                "80",
                "--seed",
                "7",
                "--out",
                report_path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(1), "{sel} must exit 1");
        // The emitted report replays to the same failure.
        let replay = bin()
            .args(["replay", "--file", report_path.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(replay.status.code(), Some(1), "{sel} witness must reproduce");
    }
    println!("ACCEPTANCE 10: PASS — bundled structures verify green, mutants exit 1 with replayable witnesses, reports byte-stable");
}
