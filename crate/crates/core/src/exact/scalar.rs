//! Exact scalars in the quadratic field Q(√3).
//!
//! Every coordinate used by the net catalog lives in this field: the planar
//! nets need `√3/2` for their period vectors and every 3D net has rational
//! coordinates. Both components are arbitrary-precision rationals kept in
//! lowest terms, so equality and hashing are syntactic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `a + b·√3` with `a`, `b` rational.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    a: BigRational,
    b: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a non-negative rational, if it is rational.
pub(crate) fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl ExactScalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        ExactScalar { a, b }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(n: i64) -> Self {
        ExactScalar {
            a: BigRational::from_integer(BigInt::from(n)),
            b: BigRational::zero(),
        }
    }

    /// The rational `n/d`. Panics if `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        ExactScalar {
            a: rat(n, d),
            b: BigRational::zero(),
        }
    }

    pub fn rational(q: BigRational) -> Self {
        ExactScalar {
            a: q,
            b: BigRational::zero(),
        }
    }

    /// `(an/ad) + (bn/bd)·√3`.
    pub fn from_parts(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        ExactScalar {
            a: rat(an, ad),
            b: rat(bn, bd),
        }
    }

    pub fn sqrt3() -> Self {
        ExactScalar {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt3_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Returns the rational value when the √3 component vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        fn s(q: &BigRational) -> i32 {
            if q.is_positive() {
                1
            } else if q.is_negative() {
                -1
            } else {
                0
            }
        }
        let (sa, sb) = (s(&self.a), s(&self.b));
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 against 3 b^2
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * BigRational::from_integer(BigInt::from(3));
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `a - b√3`.
    pub fn conjugate(&self) -> Self {
        ExactScalar {
            a: self.a.clone(),
            b: -&self.b,
        }
    }

    /// Field norm `a² - 3b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(3)) * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conjugate();
        Ok(ExactScalar {
            a: &c.a / &n,
            b: &c.b / &n,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Square root inside the field, when one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self::rational(r));
            }
            // a = 3 q^2  =>  sqrt(a) = q √3
            let q = &self.a / BigRational::from_integer(BigInt::from(3));
            return rational_sqrt(&q).map(|r| ExactScalar {
                a: BigRational::zero(),
                b: r,
            });
        }
        // (x + y√3)^2 = x^2 + 3y^2 + 2xy√3
        let disc = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(BigInt::from(2));
        for x2 in [(&self.a + &disc) / &two, (&self.a - &disc) / &two] {
            if x2.is_zero() {
                continue;
            }
            if let Some(x) = rational_sqrt(&x2) {
                let y = &self.b / (&two * &x);
                let cand = ExactScalar { a: x, b: y };
                if cand.is_positive() && &cand * &cand == *self {
                    return Some(cand);
                }
                let neg = -&cand;
                if neg.is_positive() && &neg * &neg == *self {
                    return Some(neg);
                }
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 3f64.sqrt()
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        let approx = self.to_f64().floor();
        let mut k = BigInt::from(approx as i64);
        while ExactScalar::rational(BigRational::from_integer(k.clone())) > *self {
            k -= 1;
        }
        while ExactScalar::rational(BigRational::from_integer(&k + 1)) <= *self {
            k += 1;
        }
        k
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Least common denominator of both components (always positive).
    pub fn denominator_lcm(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::int(n)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(q: BigRational) -> Self {
        ExactScalar::rational(q)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &'a ExactScalar) -> ExactScalar {
                let f: fn(&ExactScalar, &ExactScalar) -> ExactScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &'a ExactScalar) -> ExactScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |x, y| ExactScalar {
    a: &x.a + &y.a,
    b: &x.b + &y.b
});
binop!(Sub, sub, |x, y| ExactScalar {
    a: &x.a - &y.a,
    b: &x.b - &y.b
});
binop!(Mul, mul, |x, y| {
    if x.b.is_zero() {
        if x.a.is_zero() {
            return ExactScalar::zero();
        }
        return ExactScalar {
            a: &x.a * &y.a,
            b: &x.a * &y.b,
        };
    }
    if y.b.is_zero() {
        return ExactScalar {
            a: &x.a * &y.a,
            b: &x.b * &y.a,
        };
    }
    let three = BigRational::from_integer(BigInt::from(3));
    ExactScalar {
        a: &x.a * &y.a + three * &x.b * &y.b,
        b: &x.a * &y.b + &x.b * &y.a,
    }
});

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text form: `a/b` when rational, `a/b+c/d r3` otherwise.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", fmt_rational(&self.a))
        } else {
            write!(f, "{}+{} r3", fmt_rational(&self.a), fmt_rational(&self.b))
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct Cursor<'s> {
    s: &'s [u8],
    i: usize,
}

impl<'s> Cursor<'s> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return None;
        }
        // digits are ASCII so this slice is valid UTF-8
        std::str::from_utf8(&self.s[start..self.i])
            .ok()?
            .parse()
            .ok()
    }

    fn rational(&mut self) -> Result<BigRational> {
        self.ws();
        let mut neg = false;
        while let Some(c @ (b'-' | b'+')) = self.peek() {
            if c == b'-' {
                neg = !neg;
            }
            self.i += 1;
            self.ws();
        }
        let n = self
            .digits()
            .ok_or_else(|| Error::Parse(format!("expected digits at byte {}", self.i)))?;
        let d = if self.peek() == Some(b'/') {
            self.i += 1;
            self.digits()
                .ok_or_else(|| Error::Parse("expected denominator".into()))?
        } else {
            BigInt::one()
        };
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        let q = BigRational::new(n, d);
        Ok(if neg { -q } else { q })
    }

    fn keyword_r3(&mut self) -> bool {
        self.ws();
        if self.s[self.i..].starts_with(b"r3") {
            self.i += 2;
            true
        } else {
            false
        }
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    /// Accepts `q`, `q r3`, `q+q r3` and `q-q r3` where `q` is an integer or
    /// a fraction `n/d`.
    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor {
            s: s.as_bytes(),
            i: 0,
        };
        let first = c.rational()?;
        c.ws();
        let out = if c.keyword_r3() {
            ExactScalar {
                a: BigRational::zero(),
                b: first,
            }
        } else if matches!(c.peek(), Some(b'+' | b'-')) {
            let second = c.rational()?;
            if !c.keyword_r3() {
                return Err(Error::Parse("expected `r3` after second component".into()));
            }
            ExactScalar {
                a: first,
                b: second,
            }
        } else {
            ExactScalar::rational(first)
        };
        c.ws();
        if c.i != c.s.len() {
            return Err(Error::Parse(format!("trailing input at byte {}", c.i)));
        }
        Ok(out)
    }
}

impl serde::Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ExactScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(a: (i64, i64), b: (i64, i64)) -> ExactScalar {
        ExactScalar::from_parts(a.0, a.1, b.0, b.1)
    }

    #[test]
    fn identity_times_sqrt3() {
        assert_eq!(ExactScalar::one() * ExactScalar::sqrt3(), ExactScalar::sqrt3());
    }

    #[test]
    fn sqrt3_below_seven_quarters() {
        // 3·16 = 48 < 49
        assert!(ExactScalar::sqrt3() < ExactScalar::frac(7, 4));
        assert!(ExactScalar::sqrt3() > ExactScalar::frac(173, 100));
    }

    #[test]
    fn conjugate_product() {
        let x = s((1, 1), (1, 1));
        let y = s((1, 1), (-1, 1));
        assert_eq!(x * y, ExactScalar::int(-2));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            ExactScalar::one().checked_div(&ExactScalar::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn sqrt_in_field() {
        assert_eq!(ExactScalar::int(3).sqrt(), Some(ExactScalar::sqrt3()));
        assert_eq!(ExactScalar::frac(9, 4).sqrt(), Some(ExactScalar::frac(3, 2)));
        assert_eq!(ExactScalar::int(2).sqrt(), None);
        // (1 + √3)^2 = 4 + 2√3
        assert_eq!(s((4, 1), (2, 1)).sqrt(), Some(s((1, 1), (1, 1))));
        // (√3 - 1)^2 = 4 - 2√3
        assert_eq!(s((4, 1), (-2, 1)).sqrt(), Some(s((-1, 1), (1, 1))));
    }

    #[test]
    fn text_round_trip_and_forms() {
        let x = s((1, 2), (-3, 4));
        assert_eq!(x.to_string(), "1/2+-3/4 r3");
        assert_eq!("1/2+-3/4 r3".parse::<ExactScalar>().unwrap(), x);
        assert_eq!("1/2 - 3/4 r3".parse::<ExactScalar>().unwrap(), x);
        assert_eq!("-5".parse::<ExactScalar>().unwrap(), ExactScalar::int(-5));
        assert_eq!("1/2 r3".parse::<ExactScalar>().unwrap(), s((0, 1), (1, 2)));
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("".parse::<ExactScalar>().is_err());
        assert!("1+2".parse::<ExactScalar>().is_err());
        assert!("1 r3 x".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(ExactScalar::sqrt3().floor(), BigInt::from(1));
        assert_eq!((-ExactScalar::sqrt3()).floor(), BigInt::from(-2));
        assert_eq!(ExactScalar::int(2).floor(), BigInt::from(2));
        assert_eq!(ExactScalar::frac(3, 2).ceil(), BigInt::from(2));
    }

    fn arb_scalar() -> impl Strategy<Value = ExactScalar> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
            .prop_map(|(an, ad, bn, bd)| ExactScalar::from_parts(an, ad, bn, bd))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn sign_agrees_with_float(x in arb_scalar()) {
            let v = x.to_f64();
            if v.abs() > 1e-12 {
                prop_assert_eq!(x.signum(), if v > 0.0 { 1 } else { -1 });
            }
        }
    }

    proptest! {
        #[test]
        fn field_laws(x in arb_scalar(), y in arb_scalar()) {
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(x.checked_div(&y).unwrap() * &y, x.clone());
            }
            prop_assert_eq!(&x * &y, &y * &x);
            let c = x.cmp(&y);
            let fc = x.to_f64().partial_cmp(&y.to_f64()).unwrap();
            if (x.to_f64() - y.to_f64()).abs() > 1e-9 {
                prop_assert_eq!(c, fc);
            }
        }

        #[test]
        fn text_round_trip(x in arb_scalar()) {
            prop_assert_eq!(x.to_string().parse::<ExactScalar>().unwrap(), x);
        }
    }
}
