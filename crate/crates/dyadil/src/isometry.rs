//! Automorphisms of the dyadic tree, applied lazily to eventually periodic
//! boundary words.
//!
//! Isometries of the boundary ultrametric are exactly tree automorphisms. A
//! `TreeIsometry` carries a closed-form tag where one exists (identity, XOR
//! translation, finite portrait table) so that the concrete structures stay
//! exact; generic isometries extracted from a structure evaluation are kept
//! as function pairs (forward and inverse).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::DilError;
use crate::words::{self, distance, EvWord, FiniteWord, UDistance};

type IsoFn = Arc<dyn Fn(&EvWord) -> Result<EvWord, DilError> + Send + Sync>;

/// What a portrait table does below its recorded depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailRule {
    /// Act as the identity below the table depth.
    Identity,
    /// Refuse to act below the table depth.
    Strict,
}

/// A depth-`D` portrait: swap bits for every node of length `< D`.
/// Missing nodes default to 0 (no swap).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Portrait {
    pub depth: u32,
    pub bits: BTreeMap<String, u8>,
}

impl Portrait {
    pub fn bit(&self, node: &str) -> u8 {
        self.bits.get(node).copied().unwrap_or(0)
    }
}

#[derive(Clone)]
pub enum TreeIsometry {
    Identity,
    /// Letterwise XOR with a fixed word; self-inverse.
    XorTranslate(EvWord),
    /// Finite portrait table with a tail rule.
    Table { portrait: Portrait, tail: TailRule },
    /// Composition, applied left to right.
    Composite(Vec<TreeIsometry>),
    /// An opaque isometry given by forward and inverse evaluation.
    Func { fwd: IsoFn, bwd: IsoFn, label: String },
}

impl fmt::Debug for TreeIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeIsometry::Identity => write!(f, "Identity"),
            TreeIsometry::XorTranslate(t) => write!(f, "XorTranslate({t})"),
            TreeIsometry::Table { portrait, tail } => {
                write!(f, "Table(depth={}, tail={:?})", portrait.depth, tail)
            }
            TreeIsometry::Composite(parts) => write!(f, "Composite({} parts)", parts.len()),
            TreeIsometry::Func { label, .. } => write!(f, "Func({label})"),
        }
    }
}

impl TreeIsometry {
    pub fn xor_translate(t: EvWord) -> Self {
        if t == EvWord::zero() {
            TreeIsometry::Identity
        } else {
            TreeIsometry::XorTranslate(t)
        }
    }

    pub fn complement() -> Self {
        TreeIsometry::XorTranslate(EvWord::constant(1))
    }

    pub fn from_fns(
        fwd: impl Fn(&EvWord) -> Result<EvWord, DilError> + Send + Sync + 'static,
        bwd: impl Fn(&EvWord) -> Result<EvWord, DilError> + Send + Sync + 'static,
        label: impl Into<String>,
    ) -> Self {
        TreeIsometry::Func {
            fwd: Arc::new(fwd),
            bwd: Arc::new(bwd),
            label: label.into(),
        }
    }

    /// Apply the automorphism to a boundary word.
    pub fn apply(&self, x: &EvWord) -> Result<EvWord, DilError> {
        match self {
            TreeIsometry::Identity => Ok(x.clone()),
            TreeIsometry::XorTranslate(t) => Ok(words::xor(x, t)),
            TreeIsometry::Table { portrait, tail } => {
                if *tail == TailRule::Strict {
                    return Err(DilError::TableDepthExceeded {
                        depth: portrait.depth,
                        wanted: portrait.depth + 1,
                    });
                }
                Ok(apply_portrait(portrait, x))
            }
            TreeIsometry::Composite(parts) => {
                let mut cur = x.clone();
                for part in parts {
                    cur = part.apply(&cur)?;
                }
                Ok(cur)
            }
            TreeIsometry::Func { fwd, .. } => fwd(x),
        }
    }

    /// Apply the inverse automorphism.
    pub fn inverse_apply(&self, x: &EvWord) -> Result<EvWord, DilError> {
        match self {
            TreeIsometry::Identity => Ok(x.clone()),
            TreeIsometry::XorTranslate(t) => Ok(words::xor(x, t)),
            TreeIsometry::Table { portrait, tail } => {
                if *tail == TailRule::Strict {
                    return Err(DilError::TableDepthExceeded {
                        depth: portrait.depth,
                        wanted: portrait.depth + 1,
                    });
                }
                Ok(apply_portrait(&invert_portrait(portrait), x))
            }
            TreeIsometry::Composite(parts) => {
                let mut cur = x.clone();
                for part in parts.iter().rev() {
                    cur = part.inverse_apply(&cur)?;
                }
                Ok(cur)
            }
            TreeIsometry::Func { bwd, .. } => bwd(x),
        }
    }

    /// The restriction `A_q`, the unique isometry with
    /// `A(q·w) = A(q)·A_q(w)`.
    pub fn restrict(&self, q: &FiniteWord) -> TreeIsometry {
        if q.is_empty() {
            return self.clone();
        }
        match self {
            TreeIsometry::Identity => TreeIsometry::Identity,
            // XOR acts letterwise, so the restriction shifts the translation.
            TreeIsometry::XorTranslate(t) => TreeIsometry::xor_translate(t.shift(q.len())),
            other => {
                let a = other.clone();
                let b = other.clone();
                let qf = q.clone();
                let qb = q.clone();
                let label = format!("{:?}|{}", other, q);
                TreeIsometry::from_fns(
                    move |w| {
                        let img = a.apply(&words::concat(&qf, w))?;
                        Ok(img.shift(qf.len()))
                    },
                    move |w| {
                        // A_q^{-1}(w) = tail of A^{-1}(A(q)·w).
                        let img_prefix = b.apply(&words::concat(&qb, &EvWord::zero()))?;
                        let aq = img_prefix.truncate(qb.len());
                        let back = b.inverse_apply(&words::concat(&aq, w))?;
                        Ok(back.shift(qb.len()))
                    },
                    label,
                )
            }
        }
    }

    /// Depth-`D` portrait: the swap bit at node `q` is 1 iff the restriction
    /// `A_q` exchanges the two child subtrees.
    pub fn portrait(&self, depth: u32) -> Result<Portrait, DilError> {
        assert!(depth >= 1);
        let mut bits = BTreeMap::new();
        for len in 0..depth as usize {
            for node in FiniteWord::all_of_length(len) {
                let probe = words::concat(&node, &EvWord::zero());
                let image = self.apply(&probe)?;
                let bit = image.letter(len);
                if bit != 0 {
                    bits.insert(node.to_string(), bit);
                }
            }
        }
        Ok(Portrait { depth, bits })
    }

    /// Check the isometry law on sample pairs; returns the first violation.
    pub fn check_isometry(
        &self,
        samples: &[(EvWord, EvWord)],
    ) -> Result<Option<(EvWord, EvWord)>, DilError> {
        for (x, y) in samples {
            let dxy = distance(x, y);
            let dimg = distance(&self.apply(x)?, &self.apply(y)?);
            if dxy != dimg {
                return Ok(Some((x.clone(), y.clone())));
            }
        }
        Ok(None)
    }
}

fn apply_portrait(portrait: &Portrait, x: &EvWord) -> EvWord {
    let d = portrait.depth as usize;
    let mut node = String::new();
    let mut head: Vec<u8> = Vec::with_capacity(d);
    for i in 0..d {
        let letter = x.letter(i);
        head.push(letter ^ portrait.bit(&node));
        node.push(if letter == 1 { '1' } else { '0' });
    }
    words::concat(&FiniteWord::new(head), &x.shift(d))
}

fn invert_portrait(portrait: &Portrait) -> Portrait {
    // The inverse automorphism carries bit b(q) at the image node A(q).
    let mut bits = BTreeMap::new();
    for len in 0..portrait.depth as usize {
        for node in FiniteWord::all_of_length(len) {
            let key = node.to_string();
            let b = portrait.bit(&key);
            if b == 0 {
                continue;
            }
            // Image of the node path under the portrait.
            let mut image = String::new();
            let mut cur = String::new();
            for i in 0..len {
                let letter = node.letter(i);
                let mapped = letter ^ portrait.bit(&cur);
                image.push(if mapped == 1 { '1' } else { '0' });
                cur.push(if letter == 1 { '1' } else { '0' });
            }
            bits.insert(image, b);
        }
    }
    Portrait {
        depth: portrait.depth,
        bits,
    }
}

/// A leveled family of boundary isometries `(n, x) ↦ W^x_n`, the shape of
/// data extracted from (and feeding) the W codec.
pub trait WMap {
    fn isometry(&self, level: u32, base: &EvWord) -> Result<TreeIsometry, DilError>;
}

/// Measured modulus data for a `WMap` over sampled `(x, x', y)` triples with
/// `x ≠ x'`.
#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessReport {
    /// Per pair, only the level `k = lcp(x,x')` is measured (for pairs at
    /// distance 1 the smallest level 1 is used and reported as coarse).
    pub defect_tight: UDistance,
    /// Per pair, every level `1 ≤ k ≤ lcp(x,x')` is measured.
    pub defect_all: UDistance,
    /// Worst defect among pairs at distance 1 (unconstrained by the modulus
    /// definition, reported for visibility).
    pub defect_coarse: UDistance,
    /// Least `c` with `defect_all(pair) ≤ 2^c · d(x,x')` over all pairs at
    /// distance < 1; `None` when every measured defect is zero.
    pub lipschitz_log2: Option<i64>,
    /// Same ratio under the tight reading (level `k = lcp(x,x')` only).
    pub lipschitz_tight_log2: Option<i64>,
    /// Worst defect per separation scale: entry `m` covers pairs with
    /// `d(x,x') = 2^{-m}`.
    pub per_scale: BTreeMap<u32, UDistance>,
    pub samples: usize,
}

impl SmoothnessReport {
    /// Declared ε-smooth at scale μ = 2^{-mu_log2} under the all-levels
    /// reading: defect ≤ ε for every sampled pair with d(x,x') < μ.
    pub fn is_smooth(&self, eps_log2: i64, mu_log2: u32) -> bool {
        self.per_scale
            .iter()
            .filter(|(m, _)| **m > mu_log2)
            .all(|(_, d)| *d <= UDistance::pow2(eps_log2))
    }
}

/// Worst-case smoothness defect of a leveled isometry family over sample
/// triples `(x, x', y)`. Both readings of the modulus quantifier are
/// computed: the tight level `k = lcp(x,x')` and all levels up to it.
pub fn smoothness_defect(
    w: &dyn WMap,
    samples: &[(EvWord, EvWord, EvWord)],
) -> Result<SmoothnessReport, DilError> {
    let mut tight = UDistance::Zero;
    let mut all = UDistance::Zero;
    let mut coarse = UDistance::Zero;
    let mut lipschitz: Option<i64> = None;
    let mut lipschitz_tight: Option<i64> = None;
    let mut per_scale: BTreeMap<u32, UDistance> = BTreeMap::new();
    let mut count = 0usize;
    for (x, x2, y) in samples {
        let lcp = match x.lcp_len(x2) {
            None => continue, // equal bases contribute nothing
            Some(k) => k as u32,
        };
        count += 1;
        let lo = 1u32;
        let hi = lcp.max(1);
        let mut pair_worst = UDistance::Zero;
        for k in lo..=hi {
            let a = w.isometry(k, x)?.apply(y)?;
            let b = w.isometry(k, x2)?.apply(y)?;
            let term = distance(&a, &b).scale(-(k as i64));
            pair_worst = pair_worst.max(term);
            if k == lcp {
                tight = tight.max(term);
                if let UDistance::Pow2 { log2 } = term {
                    let c = log2 + lcp as i64;
                    lipschitz_tight = Some(lipschitz_tight.map_or(c, |old: i64| old.max(c)));
                }
            }
        }
        if lcp == 0 {
            coarse = coarse.max(pair_worst);
        } else {
            all = all.max(pair_worst);
            if let UDistance::Pow2 { log2 } = pair_worst {
                let c = log2 + lcp as i64; // defect = 2^c · d(x,x')
                lipschitz = Some(lipschitz.map_or(c, |old: i64| old.max(c)));
            }
            let entry = per_scale.entry(lcp).or_insert(UDistance::Zero);
            *entry = (*entry).max(pair_worst);
        }
    }
    Ok(SmoothnessReport {
        defect_tight: tight,
        defect_all: all,
        defect_coarse: coarse,
        lipschitz_log2: lipschitz,
        lipschitz_tight_log2: lipschitz_tight,
        per_scale,
        samples: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::WordSampler;

    fn w(s: &str) -> EvWord {
        s.parse().unwrap()
    }

    #[test]
    fn apply_examples() {
        let x = w("01(10)");
        assert_eq!(TreeIsometry::Identity.apply(&x).unwrap(), x);
        // Letterwise complement; common prefixes stay common.
        assert_eq!(
            TreeIsometry::complement().apply(&w("0(0)")).unwrap(),
            w("1(1)")
        );
        // Flipping only the first letter.
        let flip1 = TreeIsometry::xor_translate(w("1(0)"));
        assert_eq!(flip1.apply(&w("(1)")).unwrap(), w("0(1)"));
    }

    #[test]
    fn lcp_preservation_oracle() {
        let mut sampler = WordSampler::new(11, 8, 4);
        let t = w("110(10)");
        let iso = TreeIsometry::xor_translate(t);
        for _ in 0..200 {
            let x = sampler.word();
            let y = sampler.word();
            assert_eq!(
                distance(&x, &y),
                distance(&iso.apply(&x).unwrap(), &iso.apply(&y).unwrap())
            );
        }
    }

    #[test]
    fn restrict_examples() {
        let q: FiniteWord = "01".parse().unwrap();
        match TreeIsometry::Identity.restrict(&q) {
            TreeIsometry::Identity => {}
            other => panic!("expected identity, got {:?}", other),
        }
        // Restriction of an XOR translation shifts the translation word.
        let t = w("011(01)");
        let iso = TreeIsometry::xor_translate(t.clone());
        let restricted = iso.restrict(&q);
        let x = w("1(10)");
        assert_eq!(
            restricted.apply(&x).unwrap(),
            words::xor(&x, &t.shift(2))
        );
    }

    #[test]
    fn restrict_coherence() {
        let mut sampler = WordSampler::new(5, 6, 3);
        let iso = TreeIsometry::xor_translate(w("10(110)"));
        for _ in 0..100 {
            let q = sampler.finite(4);
            let x = sampler.word();
            let whole = iso.apply(&words::concat(&q, &x)).unwrap();
            let head = whole.truncate(q.len());
            let tail = iso.restrict(&q).apply(&x).unwrap();
            assert_eq!(whole, words::concat(&head, &tail));
        }
    }

    #[test]
    fn portrait_examples() {
        let id = TreeIsometry::Identity.portrait(3).unwrap();
        assert!(id.bits.is_empty());

        let flip1 = TreeIsometry::xor_translate(w("1(0)")).portrait(3).unwrap();
        assert_eq!(flip1.bit(""), 1);
        assert_eq!(flip1.bits.len(), 1, "only the root swaps");

        let comp = TreeIsometry::complement().portrait(2).unwrap();
        assert_eq!(comp.bit(""), 1);
        assert_eq!(comp.bit("0"), 1);
        assert_eq!(comp.bit("1"), 1);
    }

    #[test]
    fn portrait_determines_action_to_depth() {
        let a = TreeIsometry::xor_translate(w("101(0)"));
        let b = TreeIsometry::Table {
            portrait: a.portrait(4).unwrap(),
            tail: TailRule::Identity,
        };
        let mut sampler = WordSampler::new(3, 6, 3);
        for _ in 0..100 {
            let x = sampler.word();
            let ia = a.apply(&x).unwrap().truncate(4);
            let ib = b.apply(&x).unwrap().truncate(4);
            assert_eq!(ia, ib);
        }
    }

    #[test]
    fn table_inverse_roundtrip() {
        let mut bits = BTreeMap::new();
        bits.insert(String::new(), 1);
        bits.insert("1".to_string(), 1);
        bits.insert("10".to_string(), 1);
        let table = TreeIsometry::Table {
            portrait: Portrait { depth: 3, bits },
            tail: TailRule::Identity,
        };
        let mut sampler = WordSampler::new(9, 6, 3);
        for _ in 0..100 {
            let x = sampler.word();
            let y = table.apply(&x).unwrap();
            assert_eq!(table.inverse_apply(&y).unwrap(), x);
        }
    }

    #[test]
    fn strict_table_signals_beyond_depth() {
        let table = TreeIsometry::Table {
            portrait: Portrait {
                depth: 2,
                bits: BTreeMap::new(),
            },
            tail: TailRule::Strict,
        };
        assert!(matches!(
            table.apply(&w("(0)")),
            Err(DilError::TableDepthExceeded { .. })
        ));
    }

    struct ConstW(TreeIsometry);
    impl WMap for ConstW {
        fn isometry(&self, _level: u32, _base: &EvWord) -> Result<TreeIsometry, DilError> {
            Ok(self.0.clone())
        }
    }

    /// W^x = complement iff x₁ = 1: locally constant in x, hence zero defect
    /// at every separation finer than 1; the only nonzero defect is coarse.
    struct FirstLetterW;
    impl WMap for FirstLetterW {
        fn isometry(&self, _level: u32, base: &EvWord) -> Result<TreeIsometry, DilError> {
            Ok(if base.letter(0) == 1 {
                TreeIsometry::complement()
            } else {
                TreeIsometry::Identity
            })
        }
    }

    fn smoothness_samples() -> Vec<(EvWord, EvWord, EvWord)> {
        let mut sampler = WordSampler::new(23, 8, 4);
        let mut out = Vec::new();
        for _ in 0..300 {
            let x = sampler.word();
            let x2 = sampler.word();
            let y = sampler.word();
            out.push((x, x2, y));
        }
        out
    }

    #[test]
    fn identity_family_has_zero_defect() {
        let report = smoothness_defect(&ConstW(TreeIsometry::Identity), &smoothness_samples())
            .unwrap();
        assert_eq!(report.defect_tight, UDistance::Zero);
        assert_eq!(report.defect_all, UDistance::Zero);
        assert_eq!(report.defect_coarse, UDistance::Zero);
    }

    #[test]
    fn first_letter_family_defect_is_coarse_only() {
        let report = smoothness_defect(&FirstLetterW, &smoothness_samples()).unwrap();
        assert_eq!(report.defect_all, UDistance::Zero);
        // Pairs with different first letters witness a full swap at level 1.
        assert_eq!(report.defect_coarse, UDistance::pow2(-1));
        assert!(report.is_smooth(-40, 0), "smooth at every scale below 1");
    }
}
