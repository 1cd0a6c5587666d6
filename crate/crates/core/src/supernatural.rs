//! Supernatural numbers `n = ∏ p^{r_p}` with `r_p ∈ ℕ ∪ {∞}` and the additive
//! groups `ℚ(n)` of rationals whose reduced denominator divides `n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bases in the text syntax are factored by trial division up to this bound.
const MAX_BASE: u64 = 1 << 40;
/// Largest finite exponent a parsed prime may accumulate.
const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Supernatural {
    finite: BTreeMap<u64, u32>,
    infinite: BTreeSet<u64>,
    all_infinite: bool,
}

/// Outcome of a finite-equivalence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// `a·n = b·m` as formal products.
    Equivalent { a: BigInt, b: BigInt },
    /// The infinite parts differ; `prime` is infinite in exactly one of them.
    Distinct { prime: u64 },
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicates {
    pub is_field: bool,
    pub is_even: bool,
    pub is_pure: bool,
    pub scaling_primes: Vec<u64>,
    pub scaling_trivial: bool,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization `n = ∏ p^e` by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Supernatural {
    /// The trivial number `1`, so `ℚ(1) = ℤ`.
    pub fn one() -> Self {
        Self::default()
    }

    /// Every exponent infinite, so `ℚ(n) = ℚ`.
    pub fn rationals() -> Self {
        Supernatural {
            all_infinite: true,
            ..Self::default()
        }
    }

    pub fn from_integer(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("supernatural factor must be positive".into()));
        }
        let mut s = Self::one();
        for (p, e) in factorize(n) {
            s.insert_finite(p, e);
        }
        Ok(s)
    }

    /// `∏ p^∞` over the given primes.
    pub fn infinite_at(primes: &[u64]) -> Result<Self> {
        let mut s = Self::one();
        for &p in primes {
            if !is_prime(p) {
                return Err(Error::Parse(format!("{p} is not prime")));
            }
            s.insert_infinite(p);
        }
        Ok(s)
    }

    pub fn from_parts(finite: &[(u64, u32)], infinite: &[u64]) -> Result<Self> {
        let mut s = Self::infinite_at(infinite)?;
        for &(p, e) in finite {
            if !is_prime(p) {
                return Err(Error::Parse(format!("{p} is not prime")));
            }
            s.insert_finite(p, e);
        }
        Ok(s)
    }

    fn insert_finite(&mut self, p: u64, e: u32) {
        if e == 0 || self.all_infinite || self.infinite.contains(&p) {
            return;
        }
        *self.finite.entry(p).or_insert(0) += e;
    }

    fn insert_infinite(&mut self, p: u64) {
        if self.all_infinite {
            return;
        }
        self.finite.remove(&p);
        self.infinite.insert(p);
    }

    pub fn finite_exponents(&self) -> &BTreeMap<u64, u32> {
        &self.finite
    }

    pub fn infinite_primes(&self) -> &BTreeSet<u64> {
        &self.infinite
    }

    pub fn is_all_infinite(&self) -> bool {
        self.all_infinite
    }

    pub fn is_one(&self) -> bool {
        !self.all_infinite && self.finite.is_empty() && self.infinite.is_empty()
    }

    /// Exponent of `p`; `None` stands for `∞`.
    pub fn exponent(&self, p: u64) -> Option<u32> {
        if self.all_infinite || self.infinite.contains(&p) {
            None
        } else {
            Some(self.finite.get(&p).copied().unwrap_or(0))
        }
    }

    /// Formal product `k·n` for a positive integer `k`.
    pub fn times(&self, k: &BigInt) -> Result<Self> {
        let k = k
            .to_u64()
            .filter(|&k| k > 0)
            .ok_or_else(|| Error::Precondition("multiplier must be a positive machine integer".into()))?;
        let mut s = self.clone();
        for (p, e) in factorize(k) {
            s.insert_finite(p, e);
        }
        Ok(s)
    }

    /// Product of formal products.
    pub fn product(&self, other: &Supernatural) -> Supernatural {
        if self.all_infinite || other.all_infinite {
            return Self::rationals();
        }
        let mut s = self.clone();
        for &p in &other.infinite {
            s.insert_infinite(p);
        }
        for (&p, &e) in &other.finite {
            s.insert_finite(p, e);
        }
        s
    }

    /// Membership of a rational in `ℚ(n)`.
    pub fn contains(&self, q: &BigRational) -> bool {
        if self.all_infinite {
            return true;
        }
        let mut d = q.denom().abs();
        let primes = self.infinite.iter().map(|&p| (p, None)).chain(
            self.finite.iter().map(|(&p, &e)| (p, Some(e))),
        );
        for (p, cap) in primes {
            let bp = BigInt::from(p);
            let mut v = 0u32;
            while d.is_multiple_of(&bp) {
                d /= &bp;
                v += 1;
                if cap.is_some_and(|c| v > c) {
                    return false;
                }
            }
        }
        d.is_one()
    }

    pub fn contains_frac(&self, c: i64, d: i64) -> bool {
        d != 0 && self.contains(&BigRational::new(c.into(), d.into()))
    }

    pub fn finitely_equivalent(&self, other: &Supernatural) -> Equivalence {
        match (self.all_infinite, other.all_infinite) {
            (true, true) => {
                return Equivalence::Equivalent {
                    a: BigInt::one(),
                    b: BigInt::one(),
                }
            }
            (true, false) | (false, true) => {
                let finite_side = if self.all_infinite { other } else { self };
                let prime = (2u64..)
                    .filter(|&p| is_prime(p))
                    .find(|p| !finite_side.infinite.contains(p))
                    .expect("infinitely many primes");
                return Equivalence::Distinct { prime };
            }
            _ => {}
        }
        if let Some(&prime) = self.infinite.symmetric_difference(&other.infinite).next() {
            return Equivalence::Distinct { prime };
        }
        let mut a = BigInt::one();
        let mut b = BigInt::one();
        let primes: BTreeSet<u64> = self.finite.keys().chain(other.finite.keys()).copied().collect();
        for p in primes {
            if self.infinite.contains(&p) {
                continue;
            }
            let en = self.finite.get(&p).copied().unwrap_or(0);
            let em = other.finite.get(&p).copied().unwrap_or(0);
            if em > en {
                a *= BigInt::from(p).pow(em - en);
            } else if en > em {
                b *= BigInt::from(p).pow(en - em);
            }
        }
        Equivalence::Equivalent { a, b }
    }

    pub fn is_field(&self) -> bool {
        self.all_infinite
    }

    pub fn is_even(&self) -> bool {
        self.exponent(2).is_none()
    }

    pub fn is_pure(&self) -> bool {
        !self.all_infinite && self.infinite.len() == 1 && self.finite.is_empty()
    }

    /// Primes `p` with `p·ℚ(n) = ℚ(n)`; the scaling group of `ℚ(n)` is
    /// generated by these. Empty for `ℚ`, whose scaling group is all of `ℚ₊`.
    pub fn scaling_primes(&self) -> Vec<u64> {
        self.infinite.iter().copied().collect()
    }

    pub fn predicates(&self) -> Predicates {
        let scaling_primes = self.scaling_primes();
        Predicates {
            is_field: self.is_field(),
            is_even: self.is_even(),
            is_pure: self.is_pure(),
            scaling_trivial: scaling_primes.is_empty() && !self.all_infinite,
            scaling_primes,
        }
    }

    /// The `k`-th term of the canonical divisor chain: `∏ p^min(r_p, k)`,
    /// or `lcm(1, …, k+1)` for `ℚ`.
    pub fn chain_term(&self, k: u32) -> BigInt {
        if self.all_infinite {
            return (1..=(k as u64 + 1)).fold(BigInt::one(), |acc, j| acc.lcm(&BigInt::from(j)));
        }
        let mut n = BigInt::one();
        for &p in &self.infinite {
            n *= BigInt::from(p).pow(k);
        }
        for (&p, &e) in &self.finite {
            n *= BigInt::from(p).pow(e.min(k));
        }
        n
    }

    /// `{ j / n_depth : 0 ≤ j < n_depth }`, the depth-truncated part of
    /// `ℚ(n) ∩ [0, 1)`.
    pub fn truncate(&self, depth: u32) -> Result<Vec<BigRational>> {
        if depth == 0 {
            return Err(Error::Precondition("truncation depth must be at least 1".into()));
        }
        let n = self.chain_term(depth);
        let count = n
            .to_u64()
            .filter(|&c| c <= 1 << 24)
            .ok_or_else(|| Error::Precondition(format!("divisor chain term {n} too large")))?;
        Ok((0..count)
            .map(|j| BigRational::new(BigInt::from(j), n.clone()))
            .collect())
    }
}

impl fmt::Display for Supernatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.all_infinite {
            return write!(f, "Q");
        }
        let mut parts: Vec<(u64, String)> = self
            .infinite
            .iter()
            .map(|&p| (p, format!("{p}^inf")))
            .chain(self.finite.iter().map(|(&p, &e)| {
                (p, if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            }))
            .collect();
        if parts.is_empty() {
            return write!(f, "1");
        }
        parts.sort_by_key(|(p, _)| *p);
        let s: Vec<String> = parts.into_iter().map(|(_, s)| s).collect();
        write!(f, "{}", s.join("*"))
    }
}

impl fmt::Debug for Supernatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Supernatural({self})")
    }
}

impl FromStr for Supernatural {
    type Err = Error;

    /// Accepts `Q`, `1`, and products like `2^inf*3^2*5`; composite bases are
    /// factored, so `6^inf` means `2^inf*3^inf`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Self::rationals());
        }
        if s.is_empty() {
            return Err(Error::Parse("empty supernatural number".into()));
        }
        let mut out = Self::one();
        for factor in s.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b.trim(), Some(e.trim())),
                None => (factor, None),
            };
            let base: u64 = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad supernatural factor `{factor}`")))?;
            if base == 0 || base > MAX_BASE {
                return Err(Error::Parse(format!("factor base {base} out of range")));
            }
            let primes = factorize(base);
            match exp {
                Some("inf") | Some("∞") => {
                    for (p, _) in primes {
                        out.insert_infinite(p);
                    }
                }
                Some(e) => {
                    let e: u32 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                    for (p, m) in primes {
                        let total = m
                            .checked_mul(e)
                            .filter(|&t| t <= MAX_EXPONENT)
                            .ok_or_else(|| Error::Parse(format!("exponent too large in `{factor}`")))?;
                        out.insert_finite(p, total);
                    }
                }
                None => {
                    for (p, m) in primes {
                        out.insert_finite(p, m);
                    }
                }
            }
            if out.finite.values().any(|&e| e > MAX_EXPONENT) {
                return Err(Error::Parse(format!("exponent too large in `{s}`")));
            }
        }
        Ok(out)
    }
}

impl Serialize for Supernatural {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Supernatural {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Used by mesh code when an explicit finite generator list replaces a
/// supernatural number: the smallest `n` with every generator in `ℚ(n)`.
pub fn from_generators(gens: &[BigRational]) -> Result<Supernatural> {
    let mut out = Supernatural::one();
    for g in gens {
        let d = g
            .denom()
            .to_u64()
            .ok_or_else(|| Error::Precondition("generator denominator too large".into()))?;
        for (p, e) in factorize(d) {
            let cur = out.finite.get(&p).copied().unwrap_or(0);
            if e > cur {
                out.finite.insert(p, e);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use num_traits::Zero;

    fn sn(s: &str) -> Supernatural {
        s.parse().unwrap()
    }

    fn q(c: i64, d: i64) -> BigRational {
        BigRational::new(c.into(), d.into())
    }

    #[test]
    fn repeated_factors_respect_the_exponent_bound() {
        assert!("2^3020*2^3020".parse::<Supernatural>().is_err());
        let n = sn("2^2000*2^2000*3");
        assert_eq!(n.to_string().parse::<Supernatural>().unwrap(), n);
    }

    #[test]
    fn membership() {
        assert!(sn("2^inf").contains(&q(3, 16)));
        assert!(!sn("2^inf").contains(&q(1, 3)));
        assert!(sn("2^2*3").contains(&q(5, 12)));
        assert!(!sn("2^2*3").contains(&q(1, 8)));
        assert!(sn("1").contains(&q(-7, 1)));
        assert!(sn("Q").contains(&q(1, 97)));
    }

    #[test]
    fn equivalence_witnesses() {
        let e = sn("12").finitely_equivalent(&sn("18"));
        assert_eq!(e, Equivalence::Equivalent { a: 3.into(), b: 2.into() });
        let e = sn("2^inf").finitely_equivalent(&sn("3*2^inf"));
        assert_eq!(e, Equivalence::Equivalent { a: 3.into(), b: 1.into() });
        let e = sn("2^inf").finitely_equivalent(&sn("3^inf"));
        assert_eq!(e, Equivalence::Distinct { prime: 2 });
        assert!(!sn("Q").finitely_equivalent(&sn("2^inf")).holds());
    }

    #[test]
    fn predicate_examples() {
        let f = sn("Q").predicates();
        assert!(f.is_field && f.is_even && !f.scaling_trivial);
        let p = sn("3^inf").predicates();
        assert!(!p.is_even && p.is_pure && !p.is_field);
        assert_eq!(p.scaling_primes, vec![3]);
        assert!(sn("2^2*3").predicates().scaling_trivial);
        assert!(!sn("6^inf").is_pure());
        assert!(!sn("3*2^inf").is_pure());
    }

    #[test]
    fn scaling_trivial_matches_brute_force() {
        // r·ℚ(n) = ℚ(n) on a generating set of depth 6 means both r·g and g/r stay inside.
        let n = sn("2^2*3");
        let gens = n.truncate(6).unwrap();
        for r in [2i64, 3, 5] {
            let r = BigRational::from_integer(r.into());
            let ok = gens.iter().all(|g| n.contains(&(g * &r)) && n.contains(&(g / &r)));
            assert!(!ok);
        }
    }

    #[test]
    fn truncation_examples() {
        let t = sn("2^inf").truncate(3).unwrap();
        assert_eq!(t.len(), 8);
        assert_eq!(t[1], q(1, 8));
        let n = sn("12");
        assert_eq!(n.chain_term(1), 6.into());
        assert_eq!(n.chain_term(2), 12.into());
        assert_eq!(n.chain_term(3), 12.into());
        assert_eq!(sn("1").truncate(5).unwrap(), vec![q(0, 1)]);
        assert!(sn("1").truncate(0).is_err());
    }

    #[test]
    fn text_syntax() {
        assert_eq!(sn("3^2*2^inf*5").to_string(), "2^inf*3^2*5");
        assert_eq!(sn("6^inf").to_string(), "2^inf*3^inf");
        assert_eq!(sn("2^inf*2^3").to_string(), "2^inf");
        assert_eq!(sn("12").to_string(), "2^2*3");
        assert_eq!(sn("1").to_string(), "1");
        assert_eq!(sn("Q").to_string(), "Q");
        for bad in ["", "0", "2^", "x", "2^-1", "2**3"] {
            assert!(bad.parse::<Supernatural>().is_err(), "{bad}");
        }
    }

    fn arb_sn() -> impl Strategy<Value = Supernatural> {
        let primes = prop::sample::select(vec![2u64, 3, 5, 7]);
        (
            prop::collection::vec((primes.clone(), 1u32..4), 0..3),
            prop::collection::vec(primes, 0..2),
            prop::bool::weighted(0.1),
        )
            .prop_map(|(fin, inf, all)| {
                if all {
                    Supernatural::rationals()
                } else {
                    Supernatural::from_parts(&fin, &inf).unwrap()
                }
            })
    }

    /// Members of ℚ(n) built from the truncation plus integer shifts.
    fn arb_member(n: Supernatural) -> impl Strategy<Value = BigRational> {
        let t = n.truncate(3).unwrap();
        (0..t.len(), -5i64..5).prop_map(move |(i, k)| &t[i] + BigRational::from_integer(k.into()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn finite_equivalence_is_an_equivalence(a in arb_sn(), b in arb_sn(), c in arb_sn()) {
            prop_assert!(a.finitely_equivalent(&a).holds());
            prop_assert_eq!(a.finitely_equivalent(&b).holds(), b.finitely_equivalent(&a).holds());
            if a.finitely_equivalent(&b).holds() && b.finitely_equivalent(&c).holds() {
                prop_assert!(a.finitely_equivalent(&c).holds());
            }
            if let Equivalence::Equivalent { a: x, b: y } = a.finitely_equivalent(&b) {
                prop_assert_eq!(a.times(&x).unwrap(), b.times(&y).unwrap());
            }
        }

        #[test]
        fn group_closure((n, x, y) in arb_sn().prop_flat_map(|n| (Just(n.clone()), arb_member(n.clone()), arb_member(n)))) {
            prop_assert!(n.contains(&x) && n.contains(&y));
            prop_assert!(n.contains(&(&x + &y)));
            prop_assert!(n.contains(&(&x - &y)));
            if n.is_field() && !x.is_zero() {
                prop_assert!(n.contains(&x.recip()));
            }
            if n.is_even() {
                prop_assert!(n.contains(&(x / BigRational::from_integer(2.into()))));
            }
        }

        #[test]
        fn predicates_are_consistent(n in arb_sn()) {
            let p = n.predicates();
            prop_assert_eq!(p.is_field, n.is_all_infinite());
            prop_assert_eq!(p.is_even, n.contains(&q(1, 1 << 20)));
            if p.is_pure {
                prop_assert!(!p.is_field && p.scaling_primes.len() == 1);
            }
            prop_assert_eq!(n.to_string().parse::<Supernatural>().unwrap(), n);
        }

        #[test]
        fn truncation_is_monotone(n in arb_sn(), k in 1u32..6) {
            prop_assume!(n.chain_term(k + 1) <= BigInt::from(1 << 16));
            let small = n.truncate(k).unwrap();
            let big: BTreeSet<_> = n.truncate(k + 1).unwrap().into_iter().collect();
            prop_assert!(small.iter().all(|x| big.contains(x) && n.contains(x)));
        }
    }
}
