//! Exact 2-adic integer arithmetic on eventually periodic digit streams.
//!
//! A word `x₁x₂x₃…` is identified with `Σ x_i 2^{i-1}`, the standard
//! homeomorphism between the boundary of the dyadic tree and ℤ₂. Eventually
//! periodic words correspond exactly to rationals `a/b` in lowest terms with
//! `b` odd; `from_rational`/`to_rational` realize the bijection. Addition is
//! done on the digit stream with carries, from left to right, with cycle
//! detection to recover the period; multiplication goes through the rational
//! bridge, which gives exactness and periodicity closure for free.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseRationalError;
use crate::words::{self, EvWord, UDistance};

/// A 2-adic integer with eventually periodic digits; digit `i` (0-based) has
/// weight `2^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PadicInt(EvWord);

impl PadicInt {
    pub fn from_word(w: EvWord) -> Self {
        PadicInt(w)
    }

    pub fn word(&self) -> &EvWord {
        &self.0
    }

    pub fn into_word(self) -> EvWord {
        self.0
    }

    pub fn zero() -> Self {
        PadicInt(EvWord::zero())
    }

    pub fn one() -> Self {
        PadicInt(EvWord::new(vec![1], vec![0]))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == EvWord::zero()
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_rational_checked(n.into(), BigInt::one()).expect("denominator 1 is odd")
    }

    /// The unique 2-adic integer whose truncation to `n` digits is congruent
    /// to `a·b^{-1} mod 2^n` for every `n`. Requires `b` odd and nonzero.
    pub fn from_rational_checked(a: BigInt, b: BigInt) -> Result<Self, ParseRationalError> {
        if b.is_zero() || b.is_even() {
            return Err(ParseRationalError::BadDenominator(b.to_string()));
        }
        // Digit recurrence: d = a mod 2, a ← (a - d·b) / 2. The numerator
        // stays bounded by max(|a|, |b|), so its values eventually cycle.
        let mut seen: HashMap<BigInt, usize> = HashMap::new();
        let mut digits: Vec<u8> = Vec::new();
        let mut num = a;
        let two = BigInt::from(2);
        loop {
            if let Some(&start) = seen.get(&num) {
                let prefix = digits[..start].to_vec();
                let period = digits[start..].to_vec();
                return Ok(PadicInt(EvWord::new(prefix, period)));
            }
            seen.insert(num.clone(), digits.len());
            let d = if num.is_odd() { 1u8 } else { 0u8 };
            digits.push(d);
            if d == 1 {
                num -= &b;
            }
            num /= &two;
        }
    }

    pub fn from_ratio(r: &BigRational) -> Result<Self, ParseRationalError> {
        Self::from_rational_checked(r.numer().clone(), r.denom().clone())
    }

    /// The rational `a/b` (odd `b`) this digit stream denotes.
    pub fn to_rational(&self) -> BigRational {
        let prefix = self.0.prefix();
        let period = self.0.period();
        let mut head = BigInt::zero();
        for (i, &d) in prefix.iter().enumerate() {
            if d == 1 {
                head += BigInt::one() << i;
            }
        }
        let mut cycle = BigInt::zero();
        for (i, &d) in period.iter().enumerate() {
            if d == 1 {
                cycle += BigInt::one() << i;
            }
        }
        let n = period.len();
        // Tail value: cycle / (1 - 2^n), shifted past the prefix.
        let denom = BigInt::one() - (BigInt::one() << n);
        let tail = BigRational::new(cycle, denom) * BigRational::from_integer(BigInt::one() << prefix.len());
        BigRational::from_integer(head) + tail
    }

    /// Digit-stream addition with carry, left to right.
    pub fn add_ref(&self, other: &PadicInt) -> PadicInt {
        let x = &self.0;
        let y = &other.0;
        let np = x.prefix().len().max(y.prefix().len());
        let l = lcm(x.period().len(), y.period().len());
        let mut digits: Vec<u8> = Vec::new();
        let mut carry = 0u8;
        // States (phase, carry) repeat within two sweeps of the joint period.
        let mut carry_at_phase0: Vec<(usize, u8)> = Vec::new();
        let mut i = 0usize;
        loop {
            if i >= np && (i - np) % l == 0 {
                if let Some(&(j, _)) = carry_at_phase0.iter().find(|&&(_, c)| c == carry) {
                    let prefix = digits[..j].to_vec();
                    let period = digits[j..].to_vec();
                    return PadicInt(EvWord::new(prefix, period));
                }
                carry_at_phase0.push((i, carry));
            }
            let s = x.letter(i) + y.letter(i) + carry;
            digits.push(s & 1);
            carry = s >> 1;
            i += 1;
        }
    }

    /// Two's-complement negation: complement every digit, add one.
    pub fn neg_ref(&self) -> PadicInt {
        let complemented = PadicInt(words::xor(&self.0, &EvWord::constant(1)));
        complemented.add_ref(&PadicInt::one())
    }

    pub fn sub_ref(&self, other: &PadicInt) -> PadicInt {
        self.add_ref(&other.neg_ref())
    }

    /// Multiplication by `2^k`: prepend `k` zero digits.
    pub fn shl(&self, k: usize) -> PadicInt {
        let mut prefix = vec![0u8; k];
        prefix.extend_from_slice(self.0.prefix());
        PadicInt(EvWord::new(prefix, self.0.period().to_vec()))
    }

    /// Exact division by `2^k`; `None` if some of the first `k` digits is 1.
    pub fn shr_exact(&self, k: usize) -> Option<PadicInt> {
        if (0..k).any(|i| self.0.letter(i) == 1) {
            return None;
        }
        Some(PadicInt(self.0.shift(k)))
    }

    /// Multiplication through the rational bridge.
    pub fn mul_ref(&self, other: &PadicInt) -> PadicInt {
        let r = self.to_rational() * other.to_rational();
        PadicInt::from_ratio(&r).expect("product of odd denominators is odd")
    }

    /// Exact division; `None` when the quotient is not a 2-adic integer.
    pub fn div_exact(&self, other: &PadicInt) -> Option<PadicInt> {
        if other.is_zero() {
            return None;
        }
        let r = self.to_rational() / other.to_rational();
        PadicInt::from_ratio(&r).ok()
    }

    pub fn pow(&self, e: u32) -> PadicInt {
        let mut acc = PadicInt::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// 2-adic valuation: the index of the first nonzero digit.
    pub fn valuation(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let bound = self.0.prefix().len() + self.0.period().len();
        (0..bound as u64).find(|&i| self.0.letter(i as usize) == 1)
    }

    /// The 2-adic norm `|x| = 2^{-v}` with `v` the valuation; `|0| = 0`.
    pub fn norm(&self) -> UDistance {
        match self.valuation() {
            None => UDistance::Zero,
            Some(v) => UDistance::pow2(-(v as i64)),
        }
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

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for &PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: &PadicInt) -> PadicInt {
        self.add_ref(rhs)
    }
}

impl Sub for &PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: &PadicInt) -> PadicInt {
        self.sub_ref(rhs)
    }
}

impl Mul for &PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: &PadicInt) -> PadicInt {
        self.mul_ref(rhs)
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        self.neg_ref()
    }
}

/// A literal that is either a word `01(10)` or a rational `a/b` with odd `b`
/// (plain integers allowed).
pub fn parse_point(s: &str) -> Result<PadicInt, String> {
    if s.contains('(') {
        return s
            .parse::<EvWord>()
            .map(PadicInt::from_word)
            .map_err(|e| e.to_string());
    }
    parse_rational(s).map_err(|e| e.to_string())
}

/// Parse `a` or `a/b` into a 2-adic integer; `b` must be odd.
pub fn parse_rational(s: &str) -> Result<PadicInt, ParseRationalError> {
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let a = BigInt::from_str(num_str.trim())
        .map_err(|_| ParseRationalError::BadInteger(num_str.to_string()))?;
    let b = BigInt::from_str(den_str.trim())
        .map_err(|_| ParseRationalError::BadInteger(den_str.to_string()))?;
    PadicInt::from_rational_checked(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> PadicInt {
        PadicInt::from_word(s.parse().unwrap())
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn from_rational_examples() {
        assert_eq!(PadicInt::from_integer(1), w("1(0)"));
        assert_eq!(PadicInt::from_integer(-1), w("(1)"));
        assert_eq!(
            PadicInt::from_rational_checked(1.into(), (-3).into()).unwrap(),
            w("(10)")
        );
        assert!(PadicInt::from_rational_checked(1.into(), 2.into()).is_err());
        assert!(PadicInt::from_rational_checked(1.into(), 0.into()).is_err());
    }

    #[test]
    fn truncation_congruence_oracle() {
        // Independent oracle: the first n digits of from_rational(a,b) read as
        // an integer must be ≡ a·b^{-1} mod 2^n.
        for (a, b) in [(1i64, 1i64), (-1, 1), (1, -3), (7, 5), (-22, 15), (5, 7)] {
            let x = PadicInt::from_rational_checked(a.into(), b.into()).unwrap();
            for n in 1u32..32 {
                let modulus = BigInt::one() << n;
                let mut trunc = BigInt::zero();
                for i in 0..n as usize {
                    if x.word().letter(i) == 1 {
                        trunc += BigInt::one() << i;
                    }
                }
                let binv = mod_inverse_pow2(&BigInt::from(b), n);
                let want = (BigInt::from(a) * binv).mod_floor(&modulus);
                assert_eq!(trunc.mod_floor(&modulus), want, "a={a} b={b} n={n}");
            }
        }
    }

    fn mod_inverse_pow2(b: &BigInt, n: u32) -> BigInt {
        // Hensel lifting of the inverse of an odd number mod 2^n.
        let modulus = BigInt::one() << n;
        let mut inv = BigInt::one(); // inverse mod 2
        let two = BigInt::from(2);
        let mut k = 1;
        while k < n {
            inv = (&inv * (&two - b * &inv)).mod_floor(&modulus);
            k *= 2;
        }
        inv.mod_floor(&modulus)
    }

    #[test]
    fn add_examples() {
        assert_eq!(w("1(0)").add_ref(&w("1(0)")), w("01(0)"));
        assert_eq!(w("01(1)").add_ref(&PadicInt::zero()), w("01(1)"));
        assert_eq!(w("(1)").add_ref(&w("1(0)")), PadicInt::zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(w("(10)").mul_ref(&w("11(0)")), w("(1)"));
        assert_eq!(w("011(01)").mul_ref(&PadicInt::one()), w("011(01)"));
        // Multiplication by 2 is a digit shift.
        let x = w("1(10)");
        assert_eq!(w("01(0)").mul_ref(&x), x.shl(1));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(PadicInt::zero().norm(), UDistance::Zero);
        assert_eq!(w("01(0)").norm(), UDistance::pow2(-1));
        assert_eq!(w("(1)").norm(), UDistance::pow2(0));
    }

    #[test]
    fn parse_literals() {
        assert_eq!(parse_point("1/-3").unwrap(), w("(10)"));
        assert_eq!(parse_point("(10)").unwrap(), w("(10)"));
        assert_eq!(parse_point("-2").unwrap(), w("0(1)"));
        assert!(parse_point("3/4").is_err());
        assert!(parse_point("abc").is_err());
    }

    fn arb_padic() -> impl Strategy<Value = PadicInt> {
        (
            proptest::collection::vec(0u8..2, 0..8),
            proptest::collection::vec(0u8..2, 1..5),
        )
            .prop_map(|(p, q)| PadicInt::from_word(EvWord::new(p, q)))
    }

    proptest! {
        #[test]
        fn add_matches_rational_oracle(x in arb_padic(), y in arb_padic()) {
            let sum = x.add_ref(&y);
            prop_assert_eq!(sum.to_rational(), x.to_rational() + y.to_rational());
        }

        #[test]
        fn neg_matches_rational_oracle(x in arb_padic()) {
            prop_assert_eq!(x.neg_ref().to_rational(), -x.to_rational());
        }

        #[test]
        fn rational_roundtrip(x in arb_padic()) {
            let r = x.to_rational();
            prop_assert_eq!(PadicInt::from_ratio(&r).unwrap(), x);
        }

        #[test]
        fn ring_laws(x in arb_padic(), y in arb_padic(), z in arb_padic()) {
            prop_assert_eq!(x.add_ref(&y), y.add_ref(&x));
            prop_assert_eq!(x.add_ref(&y).add_ref(&z), x.add_ref(&y.add_ref(&z)));
            prop_assert_eq!(x.mul_ref(&y), y.mul_ref(&x));
            prop_assert_eq!(x.mul_ref(&y).mul_ref(&z), x.mul_ref(&y.mul_ref(&z)));
            prop_assert_eq!(
                x.mul_ref(&y.add_ref(&z)),
                x.mul_ref(&y).add_ref(&x.mul_ref(&z))
            );
        }

        #[test]
        fn norm_multiplicative(x in arb_padic(), y in arb_padic()) {
            prop_assert_eq!(x.mul_ref(&y).norm(), x.norm().mul(y.norm()));
        }

        #[test]
        fn norm_ultrametric_triangle(x in arb_padic(), y in arb_padic()) {
            prop_assert!(x.add_ref(&y).norm() <= x.norm().max(y.norm()));
        }

        #[test]
        fn metric_compatibility(x in arb_padic(), y in arb_padic()) {
            // words.distance(x, y) = |x - y|₂
            let d = crate::words::distance(x.word(), y.word());
            prop_assert_eq!(d, x.sub_ref(&y).norm());
        }
    }
}
