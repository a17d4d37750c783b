//! Batch front-end: verification campaigns, distinguish probes, orbits,
//! IFS renders and plane-example probes, emitting deterministic JSON/CSV
//! reports.
//!
//! Exit codes: 0 = all checks pass, 1 = a counterexample was found (the
//! witness is in the report), 2 = invalid input or configuration.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dyadil::dilatation::checks::Campaign;
use dyadil::dilatation::{
    check_axioms, equivalence_probe, stabilize_tangent, DilStructure, EquivalenceVerdict, Witness,
};
use dyadil::ifs;
use dyadil::realdil::{self, RealKind, RealStructure};
use dyadil::sample::WordSampler;
use dyadil::structures::{self, check_agreement_dense, le1_orbit, w_decode, w_encode};
use dyadil::words::EvWord;

#[derive(Parser)]
#[command(name = "dyadil", version, about = "Exact dilatation-structure laboratory on the dyadic tree boundary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CampaignArgs {
    /// Verification depth: word-sampling prefix bound and maximal stage.
    #[arg(long, default_value_t = 16)]
    depth: u32,
    /// Sample count per check.
    #[arg(long, default_value_t = 200)]
    samples: u32,
    /// PRNG seed recorded in every report.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl CampaignArgs {
    fn campaign(&self) -> Campaign {
        Campaign::new(self.depth, self.samples, self.seed)
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Report destination; `-` is standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run the axiom and law campaign on one structure.
    Verify {
        #[arg(long)]
        structure: String,
        #[command(flatten)]
        campaign: CampaignArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Probe two structures for disagreement and (non-)equivalence.
    Distinguish {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        campaign: CampaignArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// First orbit base point for the agreement radii.
        #[arg(long, default_value = "(0)")]
        x0: String,
        /// Second orbit base point.
        #[arg(long, default_value = "(1)")]
        x1: String,
    },
    /// Stabilized tangent operation table at a point.
    Tangent {
        #[arg(long)]
        structure: String,
        /// Base point of the tangent space.
        #[arg(long, default_value = "(0)")]
        point: String,
        /// Optional explicit pair; sampled tuples otherwise.
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[command(flatten)]
        campaign: CampaignArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Enumerate the two-generator orbit and its density data.
    Orbit {
        #[arg(long)]
        structure: String,
        #[arg(long, default_value_t = 8)]
        len: u32,
        #[arg(long, default_value = "(0)")]
        x0: String,
        #[arg(long, default_value = "(1)")]
        x1: String,
        /// `json` (full report) or `csv` (`q,point` rows).
        #[arg(long, default_value = "json")]
        format: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Iterate an interval IFS and emit the exact interval rows.
    Ifs {
        /// `cantor`, `overlap` or `half`.
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 1)]
        iterations: u32,
        /// CSV destination; `-` is standard output.
        #[arg(long, default_value = "-")]
        emit: String,
    },
    /// Run a convergence probe on one of the plane examples.
    Real {
        /// `euclidean`, `phi`, `snowflake:A`, `rotation:THETA`,
        /// `log_shear`, `conjugated`.
        #[arg(long)]
        example: String,
        /// `a3` or `a4`.
        #[arg(long)]
        probe: String,
        #[arg(long, default_value = "2^-1..2^-24")]
        eps_grid: String,
        /// CSV trace destination; `-` is standard output.
        #[arg(long, default_value = "-")]
        emit: String,
        /// Verdict JSON destination.
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_delimiter = ',', num_args = 2, default_value = "0.0,0.0")]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 2, default_value = "0.0,1.0")]
        u: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 2, default_value = "0.0,0.0")]
        v: Vec<f64>,
    },
    /// Decode the W family of a structure: portrait dump plus the
    /// encode-decode round trip.
    Wcodec {
        #[arg(long)]
        structure: String,
        #[arg(long, default_value_t = 4)]
        decode_depth: u32,
        #[command(flatten)]
        campaign: CampaignArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Re-check a recorded witness in isolation.
    Replay {
        /// A witness JSON object, or any report containing a `witnesses`
        /// array.
        #[arg(long)]
        file: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn write_out(dest: &str, contents: &str) -> anyhow::Result<()> {
    if dest == "-" {
        std::io::stdout().write_all(contents.as_bytes())?;
    } else {
        std::fs::write(dest, contents)?;
    }
    Ok(())
}

fn emit_json<T: Serialize>(dest: &str, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_out(dest, &text)
}

/// Points are written either as word literals `01(0)` or as rationals with
/// odd denominator `1/-3`.
fn parse_word(s: &str) -> anyhow::Result<EvWord> {
    dyadil::padic::parse_point(s)
        .map(|p| p.into_word())
        .map_err(|e| anyhow::anyhow!("point literal {s:?}: {e}"))
}

fn parse_real_example(spec: &str) -> anyhow::Result<RealStructure> {
    let kind = if let Some(param) = spec.strip_prefix("snowflake:") {
        RealKind::Snowflake(param.parse()?)
    } else if let Some(param) = spec.strip_prefix("rotation:") {
        RealKind::ComplexRotation(param.parse()?)
    } else {
        match spec {
            "euclidean" => RealKind::Euclidean,
            "phi" => RealKind::PhiDeformed,
            "log_shear" => RealKind::LogShear,
            "conjugated" => RealKind::Conjugated,
            other => anyhow::bail!("unknown example {other:?}"),
        }
    };
    RealStructure::make_example(kind).map_err(|e| anyhow::anyhow!(e))
}

fn p2(v: &[f64]) -> [f64; 2] {
    [v[0], v[1]]
}

/// Outcome of a command: pass/fail plus the report already emitted.
enum Outcome {
    Pass,
    CounterexampleFound,
}

fn run() -> anyhow::Result<Outcome> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            structure,
            campaign,
            output,
        } => {
            let s = structures::parse_selector(&structure).map_err(|e| anyhow::anyhow!(e))?;
            let report = check_axioms(&s, &campaign.campaign());
            emit_json(&output.out, &report)?;
            Ok(if report.all_pass() {
                Outcome::Pass
            } else {
                Outcome::CounterexampleFound
            })
        }
        Command::Distinguish {
            a,
            b,
            campaign,
            output,
            x0,
            x1,
        } => {
            let sa = structures::parse_selector(&a).map_err(|e| anyhow::anyhow!(e))?;
            let sb = structures::parse_selector(&b).map_err(|e| anyhow::anyhow!(e))?;
            let c = campaign.campaign();
            let equivalence = equivalence_probe(&sa, &sb, &c)?;
            let x0 = parse_word(&x0)?;
            let x1 = parse_word(&x1)?;
            let agreement = check_agreement_dense(
                &sa,
                &sb,
                &x0,
                &x1,
                c.depth.min(8).max(3),
                c.depth,
                c.seed,
            )
            .ok();
            #[derive(Serialize)]
            struct DistinguishReport<A: Serialize, B: Serialize> {
                equivalence: A,
                #[serde(skip_serializing_if = "Option::is_none")]
                agreement: Option<B>,
            }
            let distinct = equivalence.verdict != EquivalenceVerdict::EquivalentToDepth;
            emit_json(
                &output.out,
                &DistinguishReport {
                    equivalence,
                    agreement,
                },
            )?;
            Ok(if distinct {
                Outcome::CounterexampleFound
            } else {
                Outcome::Pass
            })
        }
        Command::Tangent {
            structure,
            point,
            u,
            v,
            campaign,
            output,
        } => {
            let s = structures::parse_selector(&structure).map_err(|e| anyhow::anyhow!(e))?;
            let c = campaign.campaign();
            let x = parse_word(&point)?;
            let horizon = dyadil::dilatation::tangent::default_horizon(c.depth);
            let pairs: Vec<(EvWord, EvWord)> = match (u, v) {
                (Some(u), Some(v)) => vec![(parse_word(&u)?, parse_word(&v)?)],
                _ => {
                    let mut sampler = WordSampler::new(c.seed, c.depth as usize, 4);
                    (0..c.samples.min(24))
                        .map(|_| (sampler.word(), sampler.word()))
                        .collect()
                }
            };
            #[derive(Serialize)]
            struct TangentRow {
                u: EvWord,
                v: EvWord,
                #[serde(skip_serializing_if = "Option::is_none")]
                ops: Option<dyadil::dilatation::TangentEval>,
                #[serde(skip_serializing_if = "Option::is_none")]
                error: Option<String>,
            }
            #[derive(Serialize)]
            struct TangentReport {
                structure: String,
                point: EvWord,
                depth: u32,
                seed: u64,
                rows: Vec<TangentRow>,
            }
            let mut failed = false;
            let rows: Vec<TangentRow> = pairs
                .into_iter()
                .map(|(u, v)| match stabilize_tangent(&s, &x, &u, &v, horizon) {
                    Ok(ops) => TangentRow {
                        u,
                        v,
                        ops: Some(ops),
                        error: None,
                    },
                    Err(e) => {
                        failed = true;
                        TangentRow {
                            u,
                            v,
                            ops: None,
                            error: Some(e.to_string()),
                        }
                    }
                })
                .collect();
            emit_json(
                &output.out,
                &TangentReport {
                    structure: s.name(),
                    point: x,
                    depth: c.depth,
                    seed: c.seed,
                    rows,
                },
            )?;
            Ok(if failed {
                Outcome::CounterexampleFound
            } else {
                Outcome::Pass
            })
        }
        Command::Orbit {
            structure,
            len,
            x0,
            x1,
            format,
            output,
        } => {
            let s = structures::parse_selector(&structure).map_err(|e| anyhow::anyhow!(e))?;
            let report = le1_orbit(&s, &parse_word(&x0)?, &parse_word(&x1)?, len, None)?;
            let pass = report.pass;
            match format.as_str() {
                "json" => emit_json(&output.out, &report)?,
                "csv" => {
                    let mut text = String::from("q,point\n");
                    for e in &report.entries {
                        text.push_str(&format!("{},{}\n", e.q, e.point));
                    }
                    write_out(&output.out, &text)?;
                }
                other => anyhow::bail!("unknown format {other:?} (use json or csv)"),
            }
            Ok(if pass {
                Outcome::Pass
            } else {
                Outcome::CounterexampleFound
            })
        }
        Command::Ifs {
            system,
            iterations,
            emit,
        } => {
            let sys = match system.as_str() {
                "cantor" => ifs::IFSSystem::cantor(),
                "overlap" => ifs::IFSSystem::overlapping(),
                "half" => ifs::IFSSystem::halving(),
                other => anyhow::bail!("unknown IFS system {other:?}"),
            };
            let (union, _) = ifs::invariant_approx(&sys, &ifs::IntervalUnion::unit(), iterations);
            write_out(&emit, &ifs::emit_csv(iterations, &union))?;
            Ok(Outcome::Pass)
        }
        Command::Real {
            example,
            probe,
            eps_grid,
            emit,
            output,
            x,
            u,
            v,
        } => {
            let s = parse_real_example(&example)?;
            let grid = realdil::parse_grid(&eps_grid).map_err(|e| anyhow::anyhow!(e))?;
            let trace = match probe.as_str() {
                "a3" => realdil::probe_a3(&s, p2(&x), p2(&u), p2(&v), &grid),
                "a4" => realdil::probe_a4(&s, p2(&x), p2(&u), p2(&v), &grid),
                other => anyhow::bail!("unknown probe {other:?} (use a3 or a4)"),
            };
            write_out(&emit, &trace.csv())?;
            #[derive(Serialize)]
            struct RealReport<'a> {
                example: &'a str,
                probe: &'a str,
                verdict: realdil::TraceVerdict,
            }
            emit_json(
                &output.out,
                &RealReport {
                    example: &example,
                    probe: &probe,
                    verdict: trace.verdict,
                },
            )?;
            Ok(Outcome::Pass)
        }
        Command::Wcodec {
            structure,
            decode_depth,
            campaign,
            output,
        } => {
            let s = structures::parse_selector(&structure).map_err(|e| anyhow::anyhow!(e))?;
            let c = campaign.campaign();
            let wf = w_decode(s.clone(), decode_depth.max(1), &c)?;
            #[derive(Serialize)]
            struct PortraitRow {
                level: u32,
                base: EvWord,
                portrait: dyadil::isometry::Portrait,
            }
            #[derive(Serialize)]
            struct WcodecReport {
                structure: String,
                decode_depth: u32,
                portraits: Vec<PortraitRow>,
                roundtrip_samples: u32,
                roundtrip_pass: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                witness: Option<Witness>,
            }
            let bases: Vec<EvWord> = ["(0)", "(1)", "1(0)", "(10)"]
                .iter()
                .map(|t| t.parse().unwrap())
                .collect();
            let mut portraits = Vec::new();
            for level in 1..=decode_depth.max(1).min(3) {
                for base in &bases {
                    let iso = dyadil::structures::extract_w(s.clone(), level, base);
                    portraits.push(PortraitRow {
                        level,
                        base: base.clone(),
                        portrait: iso.portrait(decode_depth.max(1))?,
                    });
                }
            }
            // Round trip: re-encode and compare on sampled evaluations.
            let rebuilt = w_encode(wf, format!("reenc:{}", s.name()))?;
            let mut sampler = WordSampler::new(c.seed ^ 0x9c0d, c.depth as usize, 4);
            let mut witness = None;
            let n = c.samples;
            for _ in 0..n {
                let x = sampler.word();
                let y = sampler.word();
                let p = sampler.stage(6);
                let a = rebuilt.dilate(&x, p, &y)?;
                let b = s.dilate(&x, p, &y)?;
                if a != b {
                    witness = Some(
                        Witness::new("wcodec_roundtrip", &s.name())
                            .point("x", &x)
                            .point("y", &y)
                            .stage("p", p)
                            .outcome(b, a),
                    );
                    break;
                }
            }
            let pass = witness.is_none();
            emit_json(
                &output.out,
                &WcodecReport {
                    structure: s.name(),
                    decode_depth,
                    portraits,
                    roundtrip_samples: n,
                    roundtrip_pass: pass,
                    witness,
                },
            )?;
            Ok(if pass {
                Outcome::Pass
            } else {
                Outcome::CounterexampleFound
            })
        }
        Command::Replay { file, output } => {
            let text = std::fs::read_to_string(&file)?;
            let witnesses: Vec<Witness> = match serde_json::from_str::<Witness>(&text) {
                Ok(w) => vec![w],
                Err(_) => {
                    #[derive(serde::Deserialize)]
                    struct HasWitnesses {
                        witnesses: Vec<Witness>,
                    }
                    serde_json::from_str::<HasWitnesses>(&text)
                        .map_err(|e| {
                            anyhow::anyhow!("{file}: neither a witness nor a report with witnesses: {e}")
                        })?
                        .witnesses
                }
            };
            if witnesses.is_empty() {
                anyhow::bail!("{file}: no witnesses to replay");
            }
            #[derive(Serialize)]
            struct ReplayRow {
                check: String,
                reproduced: bool,
            }
            let mut any = false;
            let mut rows = Vec::new();
            for w in &witnesses {
                let reproduced = dyadil::replay_witness(w).map_err(|e| anyhow::anyhow!(e))?;
                any |= reproduced;
                rows.push(ReplayRow {
                    check: w.check.clone(),
                    reproduced,
                });
            }
            emit_json(&output.out, &rows)?;
            Ok(if any {
                Outcome::CounterexampleFound
            } else {
                Outcome::Pass
            })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CounterexampleFound) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
