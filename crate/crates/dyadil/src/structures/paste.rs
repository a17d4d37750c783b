//! Restriction of a structure to a half-cylinder and the paste of two
//! structures into one.
//!
//! The paste fills same-half values from the matching half-structure on
//! tails and cross-half values from the matching half-structure at the full
//! base. For a self-similar structure restriction leaves it fixed and
//! restrict-then-paste reproduces it exactly.

use std::sync::Arc;

use crate::dilatation::{DilStructure, DynDil};
use crate::error::DilError;
use crate::words::{cons, EvWord};

/// The induced structure `δ^α` on a half-cylinder:
/// `δ_2^{αx}(αy) = α·δ_2^{α,x}(y)`.
pub struct HalfRestriction {
    base: DynDil,
    alpha: u8,
}

impl DilStructure for HalfRestriction {
    fn name(&self) -> String {
        format!("restrict:{}:{}", self.alpha, self.base.name())
    }

    fn scale_weight(&self) -> u32 {
        self.base.scale_weight()
    }

    fn dilate(&self, x: &EvWord, stage: i64, y: &EvWord) -> Result<EvWord, DilError> {
        let img = self
            .base
            .dilate(&cons(self.alpha, x), stage, &cons(self.alpha, y))?;
        if img.letter(0) != self.alpha {
            return Err(DilError::WExtraction(format!(
                "restriction escaped the half-cylinder: δ^{{{}{}}}({}{}) = {}",
                self.alpha, x, self.alpha, y, img
            )));
        }
        Ok(img.shift(1))
    }
}

pub fn restrict_half(base: DynDil, alpha: u8) -> DynDil {
    assert!(alpha <= 1);
    Arc::new(HalfRestriction { base, alpha })
}

/// The paste of two structures along the two half-cylinders.
pub struct Pasted {
    halves: [DynDil; 2],
}

impl Pasted {
    fn half(&self, x: &EvWord) -> &DynDil {
        &self.halves[x.letter(0) as usize]
    }

    fn dilate_once(&self, x: &EvWord, y: &EvWord) -> Result<EvWord, DilError> {
        let s = self.half(x);
        match x.lcp_len(y) {
            None => Ok(x.clone()),
            Some(0) => s.dilate(x, 1, y),
            Some(_) => Ok(cons(
                x.letter(0),
                &s.dilate(&x.shift(1), 1, &y.shift(1))?,
            )),
        }
    }

    fn undilate_once(&self, x: &EvWord, z: &EvWord) -> Result<EvWord, DilError> {
        let s = self.half(x);
        match x.lcp_len(z) {
            None => Ok(x.clone()),
            Some(0) => Err(DilError::OutsideDomain {
                base: x.to_string(),
                point: z.to_string(),
                depth: 1,
            }),
            // Stage-1 images of cross-half points sit at separation exactly 1.
            Some(1) => s.dilate(x, -1, z),
            Some(_) => Ok(cons(
                x.letter(0),
                &s.dilate(&x.shift(1), -1, &z.shift(1))?,
            )),
        }
    }
}

impl DilStructure for Pasted {
    fn name(&self) -> String {
        format!("paste:{},{}", self.halves[0].name(), self.halves[1].name())
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

pub fn paste(s0: DynDil, s1: DynDil) -> DynDil {
    Arc::new(Pasted { halves: [s0, s1] })
}
