//! Concrete dilatation structures on the boundary: the additive 2-adic
//! structure, the infinite-dihedral XOR structure, valued-field structures,
//! the W codec, restriction/pasting, the orbit/agreement suite of the
//! uniqueness theorem, and the deliberately broken mutant fixtures.

pub mod mutant;
pub mod orbit;
pub mod paste;
pub mod wcodec;

use std::sync::Arc;

use crate::dilatation::{DilStructure, DynDil};
use crate::error::DilError;
use crate::padic::{parse_rational, PadicInt};
use crate::words::{self, EvWord};

pub use orbit::{
    check_agreement_dense, check_eqned, eqned_sweep, le1_orbit, AgreementReport, OrbitReport,
};
pub use paste::{paste, restrict_half};
pub use wcodec::{extract_w, w_decode, w_encode, w_encode_unchecked, WFunction};

/// The conical-group structure of the dyadic integers:
/// `δ^x_{2^p} y = x + 2^p (y - x)` in exact 2-adic arithmetic.
pub struct Additive;

impl DilStructure for Additive {
    fn name(&self) -> String {
        "additive".into()
    }

    fn dilate(&self, x: &EvWord, stage: i64, y: &EvWord) -> Result<EvWord, DilError> {
        let xp = PadicInt::from_word(x.clone());
        let yp = PadicInt::from_word(y.clone());
        let diff = yp.sub_ref(&xp);
        if stage >= 0 {
            Ok(xp.add_ref(&diff.shl(stage as usize)).into_word())
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

/// The infinite dihedral structure: letterwise XOR group with the
/// prepend-zero morphism, `δ^x_{2^p} y = x ⊕ 0^p(x ⊕ y)`.
pub struct Dihedral;

impl DilStructure for Dihedral {
    fn name(&self) -> String {
        "dihedral".into()
    }

    fn dilate(&self, x: &EvWord, stage: i64, y: &EvWord) -> Result<EvWord, DilError> {
        let t = words::xor(x, y);
        if stage >= 0 {
            let mut prefix = vec![0u8; stage as usize];
            prefix.extend_from_slice(t.prefix());
            let shifted = EvWord::new(prefix, t.period().to_vec());
            Ok(words::xor(x, &shifted))
        } else {
            let k = (-stage) as usize;
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

/// Valued-field structure `δ^x_{ε^p} y = x + ε^p (y - x)` for a fixed
/// 2-adic ε ≠ 0 with |ε| ≤ 1. Units (|ε| = 1) make every stage an isometry;
/// the structure is then flagged non-contracting via `scale_weight() = 0`.
pub struct Valued {
    eps: PadicInt,
    repr: String,
    weight: u32,
}

impl Valued {
    pub fn new(eps: PadicInt, repr: impl Into<String>) -> Result<Self, DilError> {
        if eps.is_zero() {
            return Err(DilError::BadScale("ε = 0".into()));
        }
        let weight = eps.valuation().unwrap() as u32;
        Ok(Valued {
            eps,
            repr: repr.into(),
            weight,
        })
    }
}

impl DilStructure for Valued {
    fn name(&self) -> String {
        format!("valued:{}", self.repr)
    }

    fn scale_weight(&self) -> u32 {
        self.weight
    }

    fn dilate(&self, x: &EvWord, stage: i64, y: &EvWord) -> Result<EvWord, DilError> {
        let xp = PadicInt::from_word(x.clone());
        let yp = PadicInt::from_word(y.clone());
        let diff = yp.sub_ref(&xp);
        if stage >= 0 {
            let factor = self.eps.pow(stage as u32);
            Ok(xp.add_ref(&diff.mul_ref(&factor)).into_word())
        } else {
            let factor = self.eps.pow((-stage) as u32);
            let quotient = diff.div_exact(&factor).ok_or_else(|| DilError::OutsideDomain {
                base: x.to_string(),
                point: y.to_string(),
                depth: (self.weight as i64 * -stage) as u32,
            })?;
            Ok(xp.add_ref(&quotient).into_word())
        }
    }
}

/// A structure conjugated by a boundary isometry:
/// `δ'^x_ε y = ι(δ^{ι x}_ε (ι y))`.
pub struct Conjugated {
    base: DynDil,
    iso: crate::isometry::TreeIsometry,
    label: String,
}

impl Conjugated {
    pub fn new(base: DynDil, iso: crate::isometry::TreeIsometry, label: impl Into<String>) -> Self {
        Conjugated {
            base,
            iso,
            label: label.into(),
        }
    }
}

impl DilStructure for Conjugated {
    fn name(&self) -> String {
        format!("conjugated:{}:{}", self.label, self.base.name())
    }

    fn scale_weight(&self) -> u32 {
        self.base.scale_weight()
    }

    fn dilate(&self, x: &EvWord, stage: i64, y: &EvWord) -> Result<EvWord, DilError> {
        let ix = self.iso.apply(x)?;
        let iy = self.iso.apply(y)?;
        let moved = self.base.dilate(&ix, stage, &iy)?;
        self.iso.inverse_apply(&moved)
    }
}

/// Resolve a CLI structure selector: `additive`, `dihedral`,
/// `valued:EPSILON` (rational or word literal), `wfile:PATH`, `mutant:NAME`,
/// `paste:A,B`.
pub fn parse_selector(sel: &str) -> Result<DynDil, String> {
    match sel {
        "additive" => return Ok(Arc::new(Additive)),
        "dihedral" => return Ok(Arc::new(Dihedral)),
        _ => {}
    }
    if let Some(eps_str) = sel.strip_prefix("valued:") {
        let eps = if eps_str.contains('(') {
            PadicInt::from_word(eps_str.parse().map_err(|e| format!("{e}"))?)
        } else {
            parse_rational(eps_str).map_err(|e| format!("{e}"))?
        };
        let v = Valued::new(eps, eps_str).map_err(|e| format!("{e}"))?;
        return Ok(Arc::new(v));
    }
    if let Some(name) = sel.strip_prefix("mutant:") {
        return mutant::by_name(name).ok_or_else(|| format!("unknown mutant {name:?}"));
    }
    if let Some(path) = sel.strip_prefix("wfile:") {
        let text = std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?;
        let w = wcodec::WFunction::from_wfile_json(&text).map_err(|e| format!("{path}: {e}"))?;
        let s = w_encode(w, format!("wfile:{path}")).map_err(|e| format!("{path}: {e}"))?;
        return Ok(Arc::new(s));
    }
    if let Some(rest) = sel.strip_prefix("paste:") {
        let (a, b) = rest
            .split_once(',')
            .ok_or_else(|| "paste selector needs two structures: paste:A,B".to_string())?;
        let s0 = parse_selector(a)?;
        let s1 = parse_selector(b)?;
        return Ok(paste(s0, s1));
    }
    Err(format!("unknown structure selector {sel:?}"))
}

/// The structures expected to pass the full verification campaign.
pub fn bundled_passing_selectors() -> Vec<&'static str> {
    vec!["additive", "dihedral", "valued:2", "valued:6"]
}

/// All bundled mutant selectors; each must fail at least one check.
pub fn bundled_mutant_selectors() -> Vec<String> {
    mutant::names().iter().map(|n| format!("mutant:{n}")).collect()
}
