//! Finite and eventually periodic infinite binary words, the ultrametric on
//! the boundary of the dyadic tree, and the real-line Cantor embedding.
//!
//! Points of the boundary are represented exactly as eventually periodic
//! words `prefix(period)`. This subset is dense, closed under every
//! operation the concrete structures in this crate use (affine 2-adic maps,
//! letterwise XOR, prefix surgery), and makes all limits computable exactly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseWordError;

/// A finite binary word; the node alphabet of the dyadic tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord(Vec<u8>);

impl FiniteWord {
    pub fn new(letters: impl Into<Vec<u8>>) -> Self {
        let letters = letters.into();
        assert!(letters.iter().all(|&b| b <= 1), "letters must be 0 or 1");
        FiniteWord(letters)
    }

    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn letter(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn push(&mut self, letter: u8) {
        assert!(letter <= 1);
        self.0.push(letter);
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FiniteWord(v)
    }

    /// All words of the given length, in lexicographic order (0 < 1).
    pub fn all_of_length(n: usize) -> Vec<FiniteWord> {
        let mut out = Vec::with_capacity(1 << n);
        for bits in 0..(1u64 << n) {
            let letters: Vec<u8> = (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect();
            out.push(FiniteWord(letters));
        }
        out
    }
}

/// The conjugate letter: `0̄ = 1`, `1̄ = 0`.
pub fn conjugate(letter: u8) -> u8 {
    debug_assert!(letter <= 1);
    1 - letter
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl FromStr for FiniteWord {
    type Err = ParseWordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => letters.push(0),
                '1' => letters.push(1),
                _ => return Err(ParseWordError::BadLetter(c)),
            }
        }
        Ok(FiniteWord(letters))
    }
}

/// An eventually periodic infinite binary word, kept in canonical form:
/// the period is primitive and the prefix never ends with a letter that a
/// rotation of the period could absorb. Two `EvWord`s are equal as infinite
/// sequences iff their canonical forms are componentwise equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvWord {
    prefix: Vec<u8>,
    period: Vec<u8>,
}

impl EvWord {
    pub fn new(prefix: impl Into<Vec<u8>>, period: impl Into<Vec<u8>>) -> Self {
        let prefix = prefix.into();
        let period = period.into();
        assert!(!period.is_empty(), "period must be non-empty");
        assert!(
            prefix.iter().chain(period.iter()).all(|&b| b <= 1),
            "letters must be 0 or 1"
        );
        let mut w = EvWord { prefix, period };
        w.canonicalize();
        w
    }

    /// The constant word `α α α …`.
    pub fn constant(letter: u8) -> Self {
        EvWord::new(vec![], vec![letter])
    }

    pub fn zero() -> Self {
        EvWord::constant(0)
    }

    fn canonicalize(&mut self) {
        // Primitive root of the period.
        let n = self.period.len();
        for d in 1..n {
            if n % d == 0 && (0..n).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        // Absorb prefix letters into rotations of the period.
        while let Some(&last) = self.prefix.last() {
            if last == *self.period.last().unwrap() {
                self.prefix.pop();
                self.period.rotate_right(1);
            } else {
                break;
            }
        }
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// Letter at 0-based position `i` (the paper indexes letters from 1).
    pub fn letter(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// The first `n` letters as a finite word.
    pub fn truncate(&self, n: usize) -> FiniteWord {
        FiniteWord((0..n).map(|i| self.letter(i)).collect())
    }

    /// Size of the canonical representation; a crude complexity measure.
    pub fn complexity(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// Length of the longest common prefix, or `None` when the words are
    /// equal as infinite sequences. The scan bound
    /// `max(|prefix|) + lcm(|period|)` suffices to decide equality.
    pub fn lcp_len(&self, other: &EvWord) -> Option<usize> {
        if self == other {
            return None;
        }
        let bound = self.prefix.len().max(other.prefix.len())
            + lcm(self.period.len(), other.period.len());
        for i in 0..bound {
            if self.letter(i) != other.letter(i) {
                return Some(i);
            }
        }
        unreachable!("non-equal canonical words must differ within the lcm bound");
    }

    /// `s^k(w)`: drop the first `k` letters.
    pub fn shift(&self, k: usize) -> EvWord {
        if k <= self.prefix.len() {
            EvWord::new(self.prefix[k..].to_vec(), self.period.clone())
        } else {
            let j = (k - self.prefix.len()) % self.period.len();
            let mut period = self.period.clone();
            period.rotate_left(j);
            EvWord::new(vec![], period)
        }
    }
}

impl fmt::Display for EvWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.prefix {
            write!(f, "{}", b)?;
        }
        write!(f, "(")?;
        for &b in &self.period {
            write!(f, "{}", b)?;
        }
        write!(f, ")")
    }
}

impl FromStr for EvWord {
    type Err = ParseWordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let open = s.find('(').ok_or(ParseWordError::MissingPeriod)?;
        if !s.ends_with(')') {
            return Err(ParseWordError::MissingPeriod);
        }
        let prefix_str = &s[..open];
        let period_str = &s[open + 1..s.len() - 1];
        if period_str.is_empty() {
            return Err(ParseWordError::EmptyPeriod);
        }
        if period_str.contains('(') || period_str.contains(')') {
            return Err(ParseWordError::MissingPeriod);
        }
        let prefix: FiniteWord = prefix_str.parse()?;
        let period: FiniteWord = period_str.parse()?;
        Ok(EvWord::new(prefix.0, period.0))
    }
}

impl Serialize for EvWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EvWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of the value set `{0} ∪ {2^e}` of the ultrametric and of its
/// rescalings. On the boundary itself distances satisfy `e = -k ≤ 0`;
/// rescaled quantities such as `2^p · d(·,·)` may have positive exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UDistance {
    Zero,
    /// The value `2^log2`.
    Pow2 { log2: i64 },
}

impl UDistance {
    pub fn pow2(log2: i64) -> Self {
        UDistance::Pow2 { log2 }
    }

    pub fn one() -> Self {
        UDistance::Pow2 { log2: 0 }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, UDistance::Zero)
    }

    /// Multiply by `2^j`.
    pub fn scale(self, j: i64) -> Self {
        match self {
            UDistance::Zero => UDistance::Zero,
            UDistance::Pow2 { log2 } => UDistance::Pow2 { log2: log2 + j },
        }
    }

    pub fn mul(self, other: Self) -> Self {
        match (self, other) {
            (UDistance::Zero, _) | (_, UDistance::Zero) => UDistance::Zero,
            (UDistance::Pow2 { log2: a }, UDistance::Pow2 { log2: b }) => {
                UDistance::Pow2 { log2: a + b }
            }
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            UDistance::Zero => 0.0,
            UDistance::Pow2 { log2 } => (*log2 as f64).exp2(),
        }
    }
}

impl PartialOrd for UDistance {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UDistance {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (UDistance::Zero, UDistance::Zero) => std::cmp::Ordering::Equal,
            (UDistance::Zero, _) => std::cmp::Ordering::Less,
            (_, UDistance::Zero) => std::cmp::Ordering::Greater,
            (UDistance::Pow2 { log2: a }, UDistance::Pow2 { log2: b }) => a.cmp(b),
        }
    }
}

impl fmt::Display for UDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UDistance::Zero => write!(f, "0"),
            UDistance::Pow2 { log2 } => write!(f, "2^{}", log2),
        }
    }
}

impl Serialize for UDistance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An element `2^k` of the scale group Γ, with `ν(2^k) = 2^{-k}`.
/// Nonnegative exponents are contractions, `Scale(0)` is the identity and
/// negative exponents denote the inverse maps on their cylinder domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scale(pub i64);

impl Scale {
    pub fn compose(self, other: Scale) -> Scale {
        Scale(self.0 + other.0)
    }

    pub fn inverse(self) -> Scale {
        Scale(-self.0)
    }

    /// `ν(2^k) = 2^{-k}` as a `UDistance` value.
    pub fn nu(self) -> UDistance {
        UDistance::Pow2 { log2: -self.0 }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Ultrametric distance on the boundary: `2^{-k}` for longest common prefix
/// of length `k`, `0` for equal words.
pub fn distance(x: &EvWord, y: &EvWord) -> UDistance {
    match x.lcp_len(y) {
        None => UDistance::Zero,
        Some(k) => UDistance::Pow2 { log2: -(k as i64) },
    }
}

/// `w = [w]_k {w}_k`: the length-`k` head and the shifted tail.
pub fn split(x: &EvWord, k: usize) -> (FiniteWord, EvWord) {
    (x.truncate(k), x.shift(k))
}

/// Concatenation `q·x` of a finite head and an infinite tail.
pub fn concat(q: &FiniteWord, x: &EvWord) -> EvWord {
    let mut prefix = q.0.clone();
    prefix.extend_from_slice(&x.prefix);
    EvWord::new(prefix, x.period.clone())
}

/// Prepend a single letter.
pub fn cons(letter: u8, x: &EvWord) -> EvWord {
    let mut prefix = vec![letter];
    prefix.extend_from_slice(&x.prefix);
    EvWord::new(prefix, x.period.clone())
}

/// The middle-thirds embedding `x ↦ Σ 2·x_i·3^{-i}` into `[0,1]`, exact.
///
/// Injective and order-compatible with the lexicographic order: digit `2·x_i`
/// in base 3 never uses the middle digit 1.
pub fn cantor_embed(x: &EvWord) -> BigRational {
    let three = BigInt::from(3);
    let mut sum = BigRational::zero();
    let mut scale = BigRational::one();
    for &b in &x.prefix {
        scale /= BigRational::from_integer(three.clone());
        sum += &scale * BigRational::from_integer(BigInt::from(2 * b));
    }
    // Periodic tail: Σ_{j≥0} 3^{-jn} · T where T is the one-period partial sum.
    let n = x.period.len() as u32;
    let mut t = BigRational::zero();
    let mut s = BigRational::one();
    for &b in &x.period {
        s /= BigRational::from_integer(three.clone());
        t += &s * BigRational::from_integer(BigInt::from(2 * b));
    }
    let pow = BigRational::from_integer(three.pow(n));
    let tail = t * &pow / (&pow - BigRational::one());
    sum + scale * tail
}

/// Letterwise XOR of two words; the infinite dihedral group operation.
pub fn xor(x: &EvWord, y: &EvWord) -> EvWord {
    let np = x.prefix.len().max(y.prefix.len());
    let nq = lcm(x.period.len(), y.period.len());
    let prefix: Vec<u8> = (0..np).map(|i| x.letter(i) ^ y.letter(i)).collect();
    let period: Vec<u8> = (np..np + nq).map(|i| x.letter(i) ^ y.letter(i)).collect();
    EvWord::new(prefix, period)
}
