//! The W codec: every weak dilatation structure with `p₀ = 0` is equivalent
//! to a smooth leveled family of boundary isometries, via
//! `δ₂^{qαx̃}(q ᾱ y) = q α x̃₁̄ W^{qαx̃}_{|q|+1}(y)`. `w_decode` extracts the
//! family by evaluating the structure on the cylinder opposite the base at
//! each level; `w_encode` rebuilds the structure from a family, extending to
//! all stages by composition.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::dilatation::checks::Campaign;
use crate::dilatation::{DilStructure, DynDil};
use crate::error::DilError;
use crate::isometry::{smoothness_defect, Portrait, TailRule, TreeIsometry, WMap};
use crate::sample::WordSampler;
use crate::words::{concat, cons, conjugate, distance, EvWord, FiniteWord};

type WEval = Arc<dyn Fn(u32, &EvWord) -> Result<TreeIsometry, DilError> + Send + Sync>;

/// A leveled family of boundary isometries `(n, x) ↦ W^x_n`.
#[derive(Clone)]
pub struct WFunction {
    eval: WEval,
    label: String,
}

impl WFunction {
    pub fn from_fn(
        f: impl Fn(u32, &EvWord) -> Result<TreeIsometry, DilError> + Send + Sync + 'static,
        label: impl Into<String>,
    ) -> Self {
        WFunction {
            eval: Arc::new(f),
            label: label.into(),
        }
    }

    /// A level-independent family (the reduced form of self-similar
    /// structures).
    pub fn reduced(
        f: impl Fn(&EvWord) -> TreeIsometry + Send + Sync + 'static,
        label: impl Into<String>,
    ) -> Self {
        WFunction::from_fn(move |_, x| Ok(f(x)), label)
    }

    pub fn constant(iso: TreeIsometry, label: impl Into<String>) -> Self {
        WFunction::from_fn(move |_, _| Ok(iso.clone()), label)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Parse the `wfile` JSON format: a default isometry plus entries keyed
    /// by level (optional) and base prefix.
    pub fn from_wfile_json(text: &str) -> Result<Self, String> {
        let spec: WFileSpec = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let default = spec.default.build()?;
        let mut entries = Vec::new();
        for e in &spec.entries {
            let prefix: FiniteWord = e
                .base_prefix
                .parse()
                .map_err(|err| format!("base_prefix {:?}: {err}", e.base_prefix))?;
            entries.push((e.level, prefix, e.isometry.build()?));
        }
        Ok(WFunction::from_fn(
            move |level, base| {
                for (lvl, prefix, iso) in &entries {
                    let level_ok = lvl.map_or(true, |l| l == level);
                    let prefix_ok =
                        (0..prefix.len()).all(|i| base.letter(i) == prefix.letter(i));
                    if level_ok && prefix_ok {
                        return Ok(iso.clone());
                    }
                }
                Ok(default.clone())
            },
            "wfile",
        ))
    }
}

impl WMap for WFunction {
    fn isometry(&self, level: u32, base: &EvWord) -> Result<TreeIsometry, DilError> {
        (self.eval)(level, base)
    }
}

#[derive(Deserialize)]
struct WFileSpec {
    default: IsoSpec,
    #[serde(default)]
    entries: Vec<WFileEntry>,
}

#[derive(Deserialize)]
struct WFileEntry {
    #[serde(default)]
    level: Option<u32>,
    base_prefix: String,
    isometry: IsoSpec,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum IsoSpec {
    Identity,
    Complement,
    Xor { word: String },
    Portrait { depth: u32, bits: BTreeMap<String, u8> },
}

impl IsoSpec {
    fn build(&self) -> Result<TreeIsometry, String> {
        match self {
            IsoSpec::Identity => Ok(TreeIsometry::Identity),
            IsoSpec::Complement => Ok(TreeIsometry::complement()),
            IsoSpec::Xor { word } => {
                let w: EvWord = word.parse().map_err(|e| format!("xor word: {e}"))?;
                Ok(TreeIsometry::xor_translate(w))
            }
            IsoSpec::Portrait { depth, bits } => {
                if *depth == 0 {
                    return Err("portrait depth must be ≥ 1".into());
                }
                for (node, bit) in bits {
                    if node.len() >= *depth as usize {
                        return Err(format!("portrait node {node:?} deeper than {depth}"));
                    }
                    if !node.chars().all(|c| c == '0' || c == '1') {
                        return Err(format!("portrait node {node:?} is not binary"));
                    }
                    if *bit > 1 {
                        return Err(format!("portrait bit at {node:?} must be 0 or 1"));
                    }
                }
                Ok(TreeIsometry::Table {
                    portrait: Portrait {
                        depth: *depth,
                        bits: bits.clone(),
                    },
                    tail: TailRule::Identity,
                })
            }
        }
    }
}

/// Extract `W^{base}_n` from a structure as an applicable isometry: graft a
/// tail onto the cylinder opposite the base at level `n`, dilate once, check
/// the predicted head letters and strip them.
pub fn extract_w(s: DynDil, level: u32, base: &EvWord) -> TreeIsometry {
    assert!(level >= 1);
    let n = level as usize;
    let q = base.truncate(n - 1);
    let alpha = base.letter(n - 1);
    let flipped_next = conjugate(base.letter(n));
    let mut head = q.clone();
    head.push(alpha);
    head.push(flipped_next);

    let fwd = {
        let s = s.clone();
        let base = base.clone();
        let q = q.clone();
        let head = head.clone();
        move |y: &EvWord| -> Result<EvWord, DilError> {
            let graft = concat(&q, &cons(conjugate(alpha), y));
            let img = s.dilate(&base, 1, &graft)?;
            if img.truncate(n + 1) != head {
                return Err(DilError::WExtraction(format!(
                    "image head {} does not match predicted {} at level {} base {}",
                    img.truncate(n + 1),
                    head,
                    level,
                    base
                )));
            }
            Ok(img.shift(n + 1))
        }
    };
    let bwd = {
        let s = s.clone();
        let base = base.clone();
        let q = q.clone();
        let head = head.clone();
        move |y: &EvWord| -> Result<EvWord, DilError> {
            let z = concat(&head, y);
            let back = s.dilate(&base, -1, &z)?;
            let expect = concat(&q, &cons(conjugate(alpha), &EvWord::zero())).truncate(n);
            if back.truncate(n) != expect {
                return Err(DilError::WExtraction(format!(
                    "preimage head {} does not match predicted {} at level {} base {}",
                    back.truncate(n),
                    expect,
                    level,
                    base
                )));
            }
            Ok(back.shift(n))
        }
    };
    TreeIsometry::from_fns(fwd, bwd, format!("W[{}@{}]", level, base))
}

/// Decode the W family of a weak structure, verifying the head-letter
/// predictions and the isometry property on samples.
pub fn w_decode(s: DynDil, max_level: u32, c: &Campaign) -> Result<WFunction, DilError> {
    let mut sampler = WordSampler::new(c.seed ^ 0x77de, c.depth as usize, 4);
    for _ in 0..c.samples.min(80) {
        let base = sampler.word();
        let level = 1 + (sampler.stage(max_level as i64 - 1).unsigned_abs() as u32);
        let iso = extract_w(s.clone(), level, &base);
        let y1 = sampler.word();
        let y2 = sampler.word();
        let a = iso.apply(&y1)?;
        let b = iso.apply(&y2)?;
        if distance(&a, &b) != distance(&y1, &y2) {
            return Err(DilError::WExtraction(format!(
                "extracted W at level {level} base {base} is not an isometry: \
                 d({y1},{y2}) = {} but d(W y1, W y2) = {}",
                distance(&y1, &y2),
                distance(&a, &b)
            )));
        }
        // Round trip through the inverse direction.
        let back = iso.inverse_apply(&a)?;
        if back != y1 {
            return Err(DilError::WExtraction(format!(
                "extracted W at level {level} base {base} failed inversion at {y1}"
            )));
        }
    }
    let label = format!("decoded:{}", s.name());
    Ok(WFunction::from_fn(
        move |level, base| Ok(extract_w(s.clone(), level, base)),
        label,
    ))
}

/// A structure rebuilt from a W family. Stage 1 applies the structure
/// relation, higher stages compose it, negative stages invert it.
pub struct WEncoded {
    w: WFunction,
    name: String,
    certificate: Option<crate::isometry::SmoothnessReport>,
}

impl WEncoded {
    /// The measured smoothness modulus recorded at construction, when the
    /// precheck ran.
    pub fn smoothness_certificate(&self) -> Option<&crate::isometry::SmoothnessReport> {
        self.certificate.as_ref()
    }
}

impl WEncoded {
    fn dilate_once(&self, x: &EvWord, y: &EvWord) -> Result<EvWord, DilError> {
        let m = match x.lcp_len(y) {
            None => return Ok(x.clone()), // δ^x x = x
            Some(m) => m,
        };
        let level = (m + 1) as u32;
        let iso = self.w.isometry(level, x)?;
        let moved = iso.apply(&y.shift(m + 1))?;
        let mut head = x.truncate(m + 1);
        head.push(conjugate(x.letter(m + 1)));
        Ok(concat(&head, &moved))
    }

    fn undilate_once(&self, x: &EvWord, z: &EvWord) -> Result<EvWord, DilError> {
        let l = match x.lcp_len(z) {
            None => return Ok(x.clone()),
            Some(l) => l,
        };
        if l == 0 {
            return Err(DilError::OutsideDomain {
                base: x.to_string(),
                point: z.to_string(),
                depth: 1,
            });
        }
        // The stage-1 image at separation m has head x₁..x_{m+1} x̄_{m+2};
        // the preimage flips letter m+1 of the base and undoes W.
        let m = l - 1;
        let level = (m + 1) as u32;
        let iso = self.w.isometry(level, x)?;
        let moved = iso.inverse_apply(&z.shift(m + 2))?;
        let mut head = x.truncate(m);
        head.push(conjugate(x.letter(m)));
        Ok(concat(&head, &moved))
    }
}

impl DilStructure for WEncoded {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn dilate(&self, x: &EvWord, stage: i64, y: &EvWord) -> Result<EvWord, DilError> {
        let mut cur = y.clone();
        if stage >= 0 {
            for _ in 0..stage {
                cur = self.dilate_once(x, &cur)?;
            }
        } else {
            for _ in 0..(-stage) {
                cur = self.undilate_once(x, &cur)?;
            }
        }
        Ok(cur)
    }
}

/// Rebuild a structure from a W family after a sampled smoothness check
/// (letterwise modulus `defect ≤ 2·d(x,x')` below separation 1).
pub fn w_encode(w: WFunction, name: impl Into<String>) -> Result<WEncoded, DilError> {
    let mut sampler = WordSampler::new(0x5e_c0de, 10, 4);
    let mut triples = Vec::new();
    for _ in 0..160 {
        let x = sampler.word();
        let x2 = sampler.word();
        let y = sampler.word();
        triples.push((x, x2, y));
    }
    // Deterministic probes around eventually-zero bases, the usual
    // discontinuity locus of bad families.
    for m in 2..10usize {
        let base = concat(&sampler.finite(2), &EvWord::zero());
        let tail = sampler.word();
        let perturbed = concat(&base.truncate(m), &cons(1 - base.letter(m), &tail));
        triples.push((base, perturbed, sampler.word()));
    }
    let report = smoothness_defect(&w, &triples)?;
    if let Some(c) = report.lipschitz_log2 {
        if c > 1 {
            return Err(DilError::Precondition(format!(
                "W family {} failed the smoothness check: defect reaches 2^{c}·d(x,x')",
                w.label()
            )));
        }
    }
    let mut encoded = w_encode_unchecked(w, name);
    encoded.certificate = Some(report);
    Ok(encoded)
}

/// Rebuild without the smoothness precheck (used for deliberately broken
/// fixtures).
pub fn w_encode_unchecked(w: WFunction, name: impl Into<String>) -> WEncoded {
    WEncoded {
        w,
        name: name.into(),
        certificate: None,
    }
}

/// Closed form of the dihedral structure's W family: writing the base as
/// `qαx̃` with `|q| = level - 1`, the isometry is the XOR translation by the
/// adjacent-letter difference stream `(x̃₁⊕x̃₂, x̃₂⊕x̃₃, …)` of the tail.
/// In particular it depends only on the tail, the self-similar reduction.
pub fn dihedral_w_closed_form(level: u32, base: &EvWord) -> TreeIsometry {
    let tail = base.shift(level as usize);
    TreeIsometry::xor_translate(crate::words::xor(&tail, &tail.shift(1)))
}
