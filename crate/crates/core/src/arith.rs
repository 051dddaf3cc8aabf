//! Exact scalars: rationals, elements of Q(sqrt p), the symbolic Gauss-sum
//! ring Q(g) with g^2 = (-1/p) p, Jacobi symbols and the Gaussian-binomial
//! family mu, delta, beta.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

/// `p^e` for any integer exponent.
pub fn pow_rat(p: u64, e: i64) -> Rational {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(base)
    } else {
        Rational::new(BigInt::one(), base)
    }
}

pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter writing rationals as `"num/den"` strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Reduce `a` into `[0, m)`.
pub fn modp(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let g = (a as i64).extended_gcd(&(p as i64));
    if g.gcd != 1 {
        return None;
    }
    Some(modp(g.x, p))
}

/// Jacobi symbol `(a/m)` for odd positive `m`.
pub fn jacobi_symbol(a: i64, m: i64) -> Result<i32> {
    if m <= 0 || m % 2 == 0 {
        return Err(Error::Invalid(format!(
            "Jacobi symbol modulus must be odd and positive, got {m}"
        )));
    }
    let mut a = a.rem_euclid(m);
    let mut m = m;
    let mut sign = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = m % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        a %= m;
    }
    Ok(if m == 1 { sign } else { 0 })
}

/// Legendre symbol for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i32 {
    jacobi_symbol(a, p as i64).expect("odd prime modulus")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// mu(m, r) = prod_{i<r} (p^{m-i} - 1); any integer m.
pub fn mu(m: i64, r: u32, p: u64) -> Rational {
    (0..r as i64).fold(Rational::one(), |acc, i| {
        acc * (pow_rat(p, m - i) - Rational::one())
    })
}

/// delta(m, r) = prod_{i<r} (p^{m-i} + 1); any integer m.
pub fn delta(m: i64, r: u32, p: u64) -> Rational {
    (0..r as i64).fold(Rational::one(), |acc, i| {
        acc * (pow_rat(p, m - i) + Rational::one())
    })
}

/// beta(m, r) = mu(m, r) / mu(r, r). For `m >= r >= 0` this is the number
/// of r-dimensional subspaces of F_p^m; other m give the rational value of
/// the same product.
pub fn beta(m: i64, r: u32, p: u64) -> Rational {
    mu(m, r, p) / mu(r as i64, r, p)
}

/// beta as an integer; only for `m >= 0`.
pub fn beta_int(m: i64, r: u32, p: u64) -> BigInt {
    assert!(m >= 0, "beta_int needs m >= 0");
    let b = beta(m, r, p);
    debug_assert!(b.is_integer());
    b.to_integer()
}

/// a + b sqrt(p) for a fixed prime context p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    pub p: u64,
    pub a: Rational,
    pub b: Rational,
}

impl ExactScalar {
    pub fn zero(p: u64) -> Self {
        Self {
            p,
            a: Rational::zero(),
            b: Rational::zero(),
        }
    }

    pub fn one(p: u64) -> Self {
        Self::from_rational(p, Rational::one())
    }

    pub fn from_rational(p: u64, a: Rational) -> Self {
        Self {
            p,
            a,
            b: Rational::zero(),
        }
    }

    pub fn sqrt_p(p: u64) -> Self {
        Self {
            p,
            a: Rational::zero(),
            b: Rational::one(),
        }
    }

    /// p^{e/2}.
    pub fn p_half_power(p: u64, e: i64) -> Self {
        let half = e.div_euclid(2);
        let c = pow_rat(p, half);
        if e.is_even() {
            Self::from_rational(p, c)
        } else {
            Self {
                p,
                a: Rational::zero(),
                b: c,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            p: self.p,
            a: &self.a * r,
            b: &self.b * r,
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        if self.p != o.p {
            return Err(Error::ContextMismatch(self.p, o.p));
        }
        Ok(Self {
            p: self.p,
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if self.p != o.p {
            return Err(Error::ContextMismatch(self.p, o.p));
        }
        let p = rat_int(self.p);
        Ok(Self {
            p: self.p,
            a: &self.a * &o.a + &self.b * &o.b * p,
            b: &self.a * &o.b + &self.b * &o.a,
        })
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: Self) -> Self {
        self.checked_add(&o).expect("mixed prime contexts")
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        self.checked_add(o).expect("mixed prime contexts")
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, o: &ExactScalar) {
        assert_eq!(self.p, o.p, "mixed prime contexts");
        self.a += &o.a;
        self.b += &o.b;
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> Self {
        Self {
            p: self.p,
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: Self) -> Self {
        self.checked_mul(&o).expect("mixed prime contexts")
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        self.checked_mul(o).expect("mixed prime contexts")
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.p)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.p)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    a: String,
    b: String,
    p: u64,
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScalarRepr {
            a: rational_to_string(&self.a),
            b: rational_to_string(&self.b),
            p: self.p,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ScalarRepr::deserialize(d)?;
        Ok(ExactScalar {
            p: r.p,
            a: parse_rational(&r.a).map_err(D::Error::custom)?,
            b: parse_rational(&r.b).map_err(D::Error::custom)?,
        })
    }
}

/// r0 + r1 g where g is the classical Gauss sum mod an odd prime p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussExpr {
    pub p: u64,
    pub r0: Rational,
    pub r1: Rational,
}

impl GaussExpr {
    pub fn rational(p: u64, r0: Rational) -> Self {
        Self {
            p,
            r0,
            r1: Rational::zero(),
        }
    }

    pub fn g(p: u64) -> Self {
        Self {
            p,
            r0: Rational::zero(),
            r1: Rational::one(),
        }
    }

    /// g^2 = (-1/p) p.
    pub fn g_squared(p: u64) -> Rational {
        rat_int(legendre(-1, p) as i64 * p as i64)
    }

    /// g^k = (g^2)^{k div 2} g^{k mod 2}.
    pub fn g_pow(p: u64, k: u32) -> Self {
        let c = num_traits::pow(Self::g_squared(p), (k / 2) as usize);
        if k.is_multiple_of(2) {
            Self::rational(p, c)
        } else {
            Self {
                p,
                r0: Rational::zero(),
                r1: c,
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            p: self.p,
            r0: &self.r0 * c,
            r1: &self.r1 * c,
        }
    }
}

impl Mul for GaussExpr {
    type Output = GaussExpr;
    fn mul(self, o: Self) -> Self {
        assert_eq!(self.p, o.p, "mixed prime contexts");
        let g2 = Self::g_squared(self.p);
        GaussExpr {
            p: self.p,
            r0: &self.r0 * &o.r0 + &self.r1 * &o.r1 * g2,
            r1: &self.r0 * &o.r1 + &self.r1 * &o.r0,
        }
    }
}

impl Add for GaussExpr {
    type Output = GaussExpr;
    fn add(self, o: Self) -> Self {
        assert_eq!(self.p, o.p, "mixed prime contexts");
        GaussExpr {
            p: self.p,
            r0: self.r0 + o.r0,
            r1: self.r1 + o.r1,
        }
    }
}

/// Real character data for a form of weight k + 1/2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharacterData {
    /// chi(d) = (2 det Q / d) for the theta series of an odd-rank lattice.
    Theta { k: i64, two_det_q: i64, level: u64 },
    /// Values of chi'(p) supplied directly.
    Explicit {
        k: i64,
        level: u64,
        values: BTreeMap<u64, i32>,
    },
}

impl CharacterData {
    pub fn k(&self) -> i64 {
        match self {
            CharacterData::Theta { k, .. } | CharacterData::Explicit { k, .. } => *k,
        }
    }

    pub fn level(&self) -> u64 {
        match self {
            CharacterData::Theta { level, .. } | CharacterData::Explicit { level, .. } => *level,
        }
    }

    /// chi'(p) = (2 det Q / p) ((-1)^{k+1} / p).
    pub fn chi_prime_at(&self, p: u64) -> Result<i32> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::Invalid(format!("chi' needs an odd prime, got {p}")));
        }
        if self.level().is_multiple_of(p) {
            return Err(Error::Precondition(format!(
                "p = {p} divides the level {}",
                self.level()
            )));
        }
        match self {
            CharacterData::Theta { k, two_det_q, .. } => {
                let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
                Ok(legendre(*two_det_q, p) * legendre(sign, p))
            }
            CharacterData::Explicit { values, .. } => values
                .get(&p)
                .copied()
                .filter(|v| *v == 1 || *v == -1)
                .ok_or_else(|| Error::Invalid(format!("no chi' value supplied at {p}"))),
        }
    }
}

pub fn abs_rat(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_symbol(1, 9).unwrap(), 1);
        assert_eq!(jacobi_symbol(2, 3).unwrap(), -1);
        assert_eq!(jacobi_symbol(-1, 5).unwrap(), 1);
        assert!(jacobi_symbol(3, 4).is_err());
        assert!(jacobi_symbol(3, -3).is_err());
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13] {
            for a in -20i64..20 {
                let e = num_traits::pow(BigInt::from(a), ((p - 1) / 2) as usize)
                    .mod_floor(&BigInt::from(p));
                let want = if a.rem_euclid(p as i64) == 0 {
                    0
                } else if e.is_one() {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(a, p), want, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn beta_delta_examples() {
        assert_eq!(beta(5, 0, 3), rat(1, 1));
        assert_eq!(beta(3, 1, 3), rat(13, 1));
        assert_eq!(delta(2, 2, 3), rat(40, 1));
        assert_eq!(beta(-1, 1, 3), rat(-1, 3));
        assert_eq!(beta(0, 1, 3), rat(0, 1));
    }

    #[test]
    fn scalar_ring() {
        let s = ExactScalar::sqrt_p(3);
        assert_eq!(&s * &s, ExactScalar::from_rational(3, rat(3, 1)));
        assert_eq!(
            ExactScalar::p_half_power(3, 3),
            ExactScalar {
                p: 3,
                a: rat(0, 1),
                b: rat(3, 1)
            }
        );
        assert_eq!(
            ExactScalar::p_half_power(3, -1),
            ExactScalar {
                p: 3,
                a: rat(0, 1),
                b: rat(1, 3)
            }
        );
        assert!(ExactScalar::one(3)
            .checked_add(&ExactScalar::one(5))
            .is_err());
    }

    #[test]
    fn scalar_json_shape() {
        let s = ExactScalar {
            p: 3,
            a: rat(4, 1),
            b: rat(-1, 2),
        };
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"a":"4/1","b":"-1/2","p":3}"#);
        let back: ExactScalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn gauss_expr_powers() {
        for p in [3u64, 5, 7, 11] {
            let g = GaussExpr::g(p);
            assert_eq!((g.clone() * g.clone()).r0, GaussExpr::g_squared(p));
            let mut acc = GaussExpr::rational(p, rat(1, 1));
            for k in 0..7u32 {
                assert_eq!(acc, GaussExpr::g_pow(p, k));
                acc = acc * g.clone();
            }
        }
    }

    #[test]
    fn chi_prime_examples() {
        let c = CharacterData::Theta {
            k: 1,
            two_det_q: 16,
            level: 4,
        };
        assert_eq!(c.chi_prime_at(3).unwrap(), 1);
        assert_eq!(c.chi_prime_at(5).unwrap(), 1);
        let c = CharacterData::Theta {
            k: 2,
            two_det_q: 4,
            level: 4,
        };
        assert_eq!(c.chi_prime_at(3).unwrap(), -1);
        let c = CharacterData::Theta {
            k: 1,
            two_det_q: 32,
            level: 12,
        };
        assert!(c.chi_prime_at(3).is_err());
    }
}
