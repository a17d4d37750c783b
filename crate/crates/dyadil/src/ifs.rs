//! Exact-rational iterated function systems of affine contractions on the
//! line: Hutchinson iteration on finite interval unions, the coding map,
//! fixed points, the open set condition, and fixed-point density. No
//! floating point anywhere in this module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::words::FiniteWord;

pub type Rat = BigRational;

fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An affine contraction `t ↦ a·t + b` with `|a| < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap1D {
    pub slope: Rat,
    pub offset: Rat,
}

impl AffineMap1D {
    pub fn new(slope: Rat, offset: Rat) -> Self {
        assert!(slope.abs() < Rat::one(), "|slope| must be < 1");
        AffineMap1D { slope, offset }
    }

    pub fn apply(&self, t: &Rat) -> Rat {
        &self.slope * t + &self.offset
    }

    /// Image of a closed interval (handles negative slopes).
    pub fn apply_interval(&self, iv: &Interval) -> Interval {
        let a = self.apply(&iv.lo);
        let b = self.apply(&iv.hi);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn compose(&self, inner: &AffineMap1D) -> AffineMap1D {
        AffineMap1D {
            slope: &self.slope * &inner.slope,
            offset: &self.slope * &inner.offset + &self.offset,
        }
    }

    /// The unique fixed point `t = a·t + b`.
    pub fn fixed_point(&self) -> Rat {
        &self.offset / (Rat::one() - &self.slope)
    }
}

/// A closed interval with rational endpoints, `lo ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn unit() -> Self {
        Interval::new(Rat::zero(), Rat::one())
    }

    pub fn diameter(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, t: &Rat) -> bool {
        *t >= self.lo && *t <= self.hi
    }

    /// Distance from a point to this interval.
    fn point_distance(&self, t: &Rat) -> Rat {
        if *t < self.lo {
            &self.lo - t
        } else if *t > self.hi {
            t - &self.hi
        } else {
            Rat::zero()
        }
    }
}

/// A finite union of disjoint closed intervals, kept sorted and merged.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalUnion(Vec<Interval>);

impl IntervalUnion {
    pub fn new(mut parts: Vec<Interval>) -> Self {
        parts.sort();
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for iv in parts {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        IntervalUnion(merged)
    }

    pub fn unit() -> Self {
        IntervalUnion(vec![Interval::unit()])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn diameter(&self) -> Rat {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => &b.hi - &a.lo,
            _ => Rat::zero(),
        }
    }

    pub fn contains(&self, t: &Rat) -> bool {
        self.0.iter().any(|iv| iv.contains(t))
    }

    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        // Disjoint closed intervals: each part must fit inside one part of
        // the other union.
        self.0.iter().all(|iv| {
            other
                .0
                .iter()
                .any(|o| o.lo <= iv.lo && iv.hi <= o.hi)
        })
    }

    fn point_distance(&self, t: &Rat) -> Rat {
        self.0
            .iter()
            .map(|iv| iv.point_distance(t))
            .min()
            .expect("nonempty union")
    }

    /// One-sided Hausdorff deviation `sup_{x∈self} d(x, other)`; for unions
    /// of closed intervals the supremum is attained at endpoints or at
    /// midpoints of gaps, all rational.
    fn deviation(&self, other: &IntervalUnion) -> Rat {
        let mut worst = Rat::zero();
        for iv in &self.0 {
            // Endpoint candidates.
            for t in [&iv.lo, &iv.hi] {
                let d = other.point_distance(t);
                if d > worst {
                    worst = d;
                }
            }
            // Interior candidates: midpoints between consecutive covering
            // intervals of `other` that overlap this interval.
            for pair in other.0.windows(2) {
                let mid = (&pair[0].hi + &pair[1].lo) / rat(2, 1);
                if iv.contains(&mid) {
                    let d = other.point_distance(&mid);
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
        worst
    }

    /// Exact Hausdorff distance between two unions.
    pub fn hausdorff(&self, other: &IntervalUnion) -> Rat {
        self.deviation(other).max(other.deviation(self))
    }
}

/// A finite system of affine contractions.
#[derive(Clone, Debug)]
pub struct IFSSystem {
    pub maps: Vec<AffineMap1D>,
}

impl IFSSystem {
    pub fn new(maps: Vec<AffineMap1D>) -> Self {
        assert!(!maps.is_empty());
        IFSSystem { maps }
    }

    /// The middle-thirds Cantor system `{t/3, (2+t)/3}`.
    pub fn cantor() -> Self {
        IFSSystem::new(vec![
            AffineMap1D::new(rat(1, 3), rat(0, 1)),
            AffineMap1D::new(rat(1, 3), rat(2, 3)),
        ])
    }

    /// Overlapping fixture `{t/2, t/2 + 1/4}`: fails the open set condition.
    pub fn overlapping() -> Self {
        IFSSystem::new(vec![
            AffineMap1D::new(rat(1, 2), rat(0, 1)),
            AffineMap1D::new(rat(1, 2), rat(1, 4)),
        ])
    }

    /// Single map `t/2`.
    pub fn halving() -> Self {
        IFSSystem::new(vec![AffineMap1D::new(rat(1, 2), rat(0, 1))])
    }

    pub fn max_slope(&self) -> Rat {
        self.maps
            .iter()
            .map(|m| m.slope.abs())
            .max()
            .expect("nonempty system")
    }

    /// Resolve a word over the map alphabet to the composite, outermost map
    /// first: `"01"` is `φ₀ ∘ φ₁`.
    pub fn composite(&self, q: &FiniteWord) -> AffineMap1D {
        assert!(!q.is_empty());
        let mut acc = self.maps[q.letter(q.len() - 1) as usize].clone();
        for i in (0..q.len() - 1).rev() {
            acc = self.maps[q.letter(i) as usize].compose(&acc);
        }
        acc
    }
}

/// One Hutchinson step `S(A) = ∪ φ(A)`, exact.
pub fn hutchinson_step(s: &IFSSystem, a: &IntervalUnion) -> IntervalUnion {
    let mut parts = Vec::with_capacity(s.maps.len() * a.len());
    for m in &s.maps {
        for iv in a.intervals() {
            parts.push(m.apply_interval(iv));
        }
    }
    IntervalUnion::new(parts)
}

/// `S^n(A0)` together with the attractor bound `(max slope)^n · diam(A0)`:
/// every point of the iterate is within the bound of the invariant set.
pub fn invariant_approx(s: &IFSSystem, a0: &IntervalUnion, n: u32) -> (IntervalUnion, Rat) {
    let mut cur = a0.clone();
    for _ in 0..n {
        cur = hutchinson_step(s, &cur);
    }
    let mut bound = a0.diameter();
    let slope = s.max_slope();
    for _ in 0..n {
        bound *= &slope;
    }
    (cur, bound)
}

/// The coding interval `φ_{q₁}∘…∘φ_{qₙ}([0,1])` containing the image of
/// every tail word.
pub fn coding_map(s: &IFSSystem, q: &FiniteWord) -> Interval {
    s.composite(q).apply_interval(&Interval::unit())
}

/// Exact fixed point of the composite contraction along `q`.
pub fn fixed_point(s: &IFSSystem, q: &FiniteWord) -> Rat {
    s.composite(q).fixed_point()
}

/// Open set condition on a candidate open set given by the interiors of an
/// interval union: images must stay inside and be pairwise disjoint.
/// Endpoint touching is allowed for disjointness of open images.
#[derive(Debug, Serialize, PartialEq, Eq)]
pub enum OpenSetVerdict {
    Pass,
    FailsContainment,
    FailsDisjointness,
}

pub fn open_set_check(s: &IFSSystem, u: &IntervalUnion) -> OpenSetVerdict {
    assert!(!u.is_empty());
    let images: Vec<IntervalUnion> = s
        .maps
        .iter()
        .map(|m| {
            IntervalUnion::new(
                u.intervals()
                    .iter()
                    .map(|iv| m.apply_interval(iv))
                    .collect(),
            )
        })
        .collect();
    for img in &images {
        if !img.is_subset_of(u) {
            return OpenSetVerdict::FailsContainment;
        }
    }
    // Pairwise disjoint as open sets: closed images may share endpoints
    // only.
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            for a in images[i].intervals() {
                for b in images[j].intervals() {
                    let lo = a.lo.clone().max(b.lo.clone());
                    let hi = a.hi.clone().min(b.hi.clone());
                    if lo < hi {
                        return OpenSetVerdict::FailsDisjointness;
                    }
                }
            }
        }
    }
    OpenSetVerdict::Pass
}

/// Fixed-point density: every interval of `S^resolution([0,1])` must contain
/// the fixed point of some composite word of length ≤ n.
pub fn density_check(s: &IFSSystem, n: u32, resolution: u32) -> bool {
    let (iterate, _) = invariant_approx(s, &IntervalUnion::unit(), resolution);
    let mut points = Vec::new();
    let letters = s.maps.len() as u64;
    for len in 1..=n as usize {
        // All words over the map alphabet of this length.
        let total = letters.pow(len as u32);
        for code in 0..total {
            let mut word = FiniteWord::empty();
            let mut c = code;
            for _ in 0..len {
                word.push((c % letters) as u8);
                c /= letters;
            }
            points.push(fixed_point(s, &word));
        }
    }
    iterate
        .intervals()
        .iter()
        .all(|iv| points.iter().any(|p| iv.contains(p)))
}

/// CSV rows `depth,left_num,left_den,right_num,right_den`.
pub fn emit_csv(depth: u32, union: &IntervalUnion) -> String {
    let mut out = String::new();
    for iv in union.intervals() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            depth,
            iv.lo.numer(),
            iv.lo.denom(),
            iv.hi.numer(),
            iv.hi.denom()
        ));
    }
    out
}
