//! Exact scalars over ℚ and 𝔽p, field-semantics modes, and square classes.
//!
//! Every computation in this crate is exact. A [`FieldMode`] decides which
//! arithmetic field the scalars live in ([`Field`]) and, separately, how
//! nonzero scalars collapse into square classes `k*/(k*)²`. The modes `R` and
//! `C` keep rational arithmetic and only change the square-class semantics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default ceiling for integers handed to trial division.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero has no square class")]
    ZeroElement,
    #[error("bad field mode: {0}")]
    BadMode(String),
    #[error("integer {0} exceeds the factorization bound")]
    FactorizationTooHard(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("scalar {0} is not an element of {1}")]
    NotInField(String, String),
}

/// The arithmetic field scalars are computed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// Field semantics: which field the algebra is considered over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldMode {
    Q,
    R,
    C,
    Fp(u64),
}

/// An exact field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { v: u64, p: u64 },
}

/// A class in `k*/(k*)²`, stored through its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareClass {
    pub representative: Scalar,
    pub mode: FieldMode,
}

/// Number of square classes of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassCount {
    Finite(usize),
    Infinite,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest quadratic nonresidue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a, p) == -1).expect("odd prime has a nonresidue")
}

fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // Tonelli–Shanks
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = least_nonresidue(p);
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

impl Field {
    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Mod {
                v: (n as i128).rem_euclid(p as i128) as u64,
                p,
            },
        }
    }

    pub fn from_rational(self, q: &BigRational) -> Result<Scalar, FieldError> {
        match self {
            Field::Rational => Ok(Scalar::Rat(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let num = q.numer().mod_floor(&pb).to_u64().unwrap();
                let den = q.denom().mod_floor(&pb).to_u64().unwrap();
                if den == 0 {
                    return Err(FieldError::NotInField(q.to_string(), format!("F{p}")));
                }
                Ok(Scalar::Mod {
                    v: mul_mod(num, pow_mod(den, p - 2, p), p),
                    p,
                })
            }
        }
    }

    /// Coerces a scalar of either kind into this field.
    pub fn coerce(self, x: &Scalar) -> Result<Scalar, FieldError> {
        match (self, x) {
            (_, Scalar::Rat(q)) => self.from_rational(q),
            (Field::Prime(p), Scalar::Mod { p: q, .. }) if p == *q => Ok(x.clone()),
            _ => Err(FieldError::NotInField(x.to_string(), self.to_string())),
        }
    }

    /// Exact square root, if one exists in the field.
    pub fn sqrt(self, x: &Scalar) -> Option<Scalar> {
        match x {
            Scalar::Rat(q) => {
                if q.is_negative() {
                    return None;
                }
                let n = q.numer().sqrt();
                let d = q.denom().sqrt();
                if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
                    Some(Scalar::Rat(BigRational::new(n, d)))
                } else {
                    None
                }
            }
            Scalar::Mod { v, p } => sqrt_mod(*v, *p).map(|r| Scalar::Mod { v: r, p: *p }),
        }
    }

    pub fn is_square(self, x: &Scalar) -> bool {
        self.sqrt(x).is_some()
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FieldMode {
    /// Prime-field mode; rejects 2 and composites.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::BadMode("characteristic 2 is not supported".into()));
        }
        if !is_prime(p) {
            return Err(FieldError::BadMode(format!("{p} is not an odd prime")));
        }
        Ok(FieldMode::Fp(p))
    }

    /// The field scalars are computed in.
    pub fn field(self) -> Field {
        match self {
            FieldMode::Fp(p) => Field::Prime(p),
            _ => Field::Rational,
        }
    }

    pub fn validate(self) -> Result<Self, FieldError> {
        match self {
            FieldMode::Fp(p) => FieldMode::prime(p),
            m => Ok(m),
        }
    }

    pub fn is_prime_field(self) -> bool {
        matches!(self, FieldMode::Fp(_))
    }
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::Q => write!(f, "Q"),
            FieldMode::R => write!(f, "R"),
            FieldMode::C => write!(f, "C"),
            FieldMode::Fp(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldMode {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Q" => Ok(FieldMode::Q),
            "R" => Ok(FieldMode::R),
            "C" => Ok(FieldMode::C),
            other => {
                let digits = other
                    .strip_prefix('F')
                    .ok_or_else(|| FieldError::BadMode(other.to_string()))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| FieldError::BadMode(other.to_string()))?;
                FieldMode::prime(p)
            }
        }
    }
}

impl Serialize for FieldMode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldMode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_one(),
            Scalar::Mod { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(q) => Scalar::Rat(q.recip()),
            Scalar::Mod { v, p } => Scalar::Mod {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(q) => Some(q),
            Scalar::Mod { .. } => None,
        }
    }

    /// Small integer value, when the scalar is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rat(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Rat(_) => None,
            Scalar::Mod { v, .. } => i64::try_from(*v).ok(),
        }
    }

    /// Parses `"p/q"`, `"n"` or `"k mod p"` into the given field.
    pub fn parse_in(s: &str, field: Field) -> Result<Scalar, FieldError> {
        let t = s.trim();
        if let Some((k, p)) = t.split_once("mod") {
            let p: u64 = p.trim().parse().map_err(|_| FieldError::Parse(s.into()))?;
            let k: i128 = k.trim().parse().map_err(|_| FieldError::Parse(s.into()))?;
            if field != Field::Prime(p) {
                return Err(FieldError::NotInField(s.into(), field.to_string()));
            }
            return Ok(Scalar::Mod {
                v: k.rem_euclid(p as i128) as u64,
                p,
            });
        }
        let q = parse_rational(t).ok_or_else(|| FieldError::Parse(s.into()))?;
        field.from_rational(&q)
    }

    fn check_same(&self, other: &Scalar) -> u64 {
        match (self, other) {
            (Scalar::Mod { p, .. }, Scalar::Mod { p: q, .. }) => {
                assert_eq!(p, q, "scalars from different prime fields");
                *p
            }
            _ => panic!("mixed rational and modular scalars"),
        }
    }
}

fn parse_rational(t: &str) -> Option<BigRational> {
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = t.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rat(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Mod { v, p } => write!(f, "{v} mod {p}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $rat:expr, $md:expr) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat($rat(a, b)),
                    (Scalar::Mod { v: a, .. }, Scalar::Mod { v: b, .. }) => {
                        let p = self.check_same(rhs);
                        Scalar::Mod { v: $md(*a, *b, p), p }
                    }
                    _ => panic!("mixed rational and modular scalars"),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, |a: &BigRational, b| a + b, |a: u64, b: u64, p: u64| ((a as u128 + b as u128) % p as u128) as u64);
binop!(Sub, sub, |a: &BigRational, b| a - b, |a: u64, b: u64, p: u64| ((a as u128 + p as u128 - b as u128) % p as u128) as u64);
binop!(Mul, mul, |a: &BigRational, b| a * b, mul_mod);
binop!(Div, div, |a: &BigRational, b: &BigRational| {
    assert!(!b.is_zero(), "division by zero");
    a / b
}, |a: u64, b: u64, p: u64| {
    assert!(b != 0, "division by zero");
    mul_mod(a, pow_mod(b, p - 2, p), p)
});

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(q) => Scalar::Rat(-q),
            Scalar::Mod { v, p } => Scalar::Mod {
                v: (p - v) % p,
                p: *p,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Signed squarefree kernel of a nonzero integer, by trial division.
fn squarefree_part(n: &BigInt, bound: u64) -> Result<BigInt, FieldError> {
    const SMALL: u64 = 1 << 16;
    let is_square = |m: &BigInt| {
        let r = m.sqrt();
        &r * &r == *m
    };
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut q = 2u64;
    // small primes first, on the big integer
    while q < SMALL && BigInt::from(q) * BigInt::from(q) <= m {
        let bq = BigInt::from(q);
        let mut e = 0;
        while (&m % &bq).is_zero() {
            m /= &bq;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &bq;
        }
        q += if q == 2 { 1 } else { 2 };
    }
    // a square or prime cofactor needs no further splitting
    if m.is_one() || is_square(&m) {
        return Ok(signed(n, out));
    }
    if BigInt::from(q) * BigInt::from(q) > m || m.to_u64().is_some_and(is_prime) {
        return Ok(signed(n, out * m));
    }
    if m > BigInt::from(bound) {
        return Err(FieldError::FactorizationTooHard(n.to_string()));
    }
    let mut r = m.to_u64().unwrap();
    let mut acc: u64 = 1;
    while q * q <= r {
        let mut e = 0;
        while r.is_multiple_of(q) {
            r /= q;
            e += 1;
        }
        if e % 2 == 1 {
            acc *= q;
        }
        q += 2;
    }
    Ok(signed(n, out * BigInt::from(acc) * BigInt::from(r)))
}

fn signed(n: &BigInt, v: BigInt) -> BigInt {
    if n.sign() == Sign::Minus {
        -v
    } else {
        v
    }
}

/// Square class of `x` with an explicit factorization bound.
pub fn square_class_bounded(
    x: &Scalar,
    mode: FieldMode,
    bound: u64,
) -> Result<SquareClass, FieldError> {
    let mode = mode.validate()?;
    if x.is_zero() {
        return Err(FieldError::ZeroElement);
    }
    let x = mode.field().coerce(x)?;
    let representative = match (mode, &x) {
        (FieldMode::Q, Scalar::Rat(q)) => {
            let n = squarefree_part(q.numer(), bound)?;
            let d = squarefree_part(q.denom(), bound)?;
            // n/d and n·d differ by the square d²; reduce the product once more.
            let nd = &n * &d;
            let g = n.abs().gcd(&d.abs());
            let reduced = &nd / (&g * &g);
            Scalar::Rat(BigRational::from_integer(reduced))
        }
        (FieldMode::R, Scalar::Rat(q)) => Field::Rational.from_i64(if q.is_negative() { -1 } else { 1 }),
        (FieldMode::C, _) => Field::Rational.one(),
        (FieldMode::Fp(p), Scalar::Mod { v, .. }) => {
            let r = if legendre(*v, p) == 1 { 1 } else { least_nonresidue(p) };
            Scalar::Mod { v: r, p }
        }
        _ => unreachable!("coerced into the mode's field"),
    };
    Ok(SquareClass { representative, mode })
}

/// Canonical square class of a nonzero scalar under the mode's semantics.
pub fn square_class(x: &Scalar, mode: FieldMode) -> Result<SquareClass, FieldError> {
    square_class_bounded(x, mode, DEFAULT_FACTOR_BOUND)
}

/// `|k*/(k*)²|` for the mode.
pub fn square_class_count(mode: FieldMode) -> ClassCount {
    match mode {
        FieldMode::C => ClassCount::Finite(1),
        FieldMode::R | FieldMode::Fp(_) => ClassCount::Finite(2),
        FieldMode::Q => ClassCount::Infinite,
    }
}

/// Class of a rational number in `ℚ*/((k*)² ∩ ℚ*)`.
pub fn rational_class_in_mode(a: &BigRational, mode: FieldMode) -> Result<SquareClass, FieldError> {
    if a.is_zero() {
        return Err(FieldError::ZeroElement);
    }
    let x = mode.validate()?.field().from_rational(a)?;
    square_class(&x, mode)
}

impl SquareClass {
    pub fn is_trivial(&self) -> bool {
        self.representative.is_one()
    }

    /// All classes of a mode with finitely many, trivial class first.
    pub fn all(mode: FieldMode) -> Option<Vec<SquareClass>> {
        let field = mode.field();
        let reps: Vec<Scalar> = match mode {
            FieldMode::C => vec![field.one()],
            FieldMode::R => vec![field.one(), field.from_i64(-1)],
            FieldMode::Fp(p) => vec![field.one(), field.from_i64(least_nonresidue(p) as i64)],
            FieldMode::Q => return None,
        };
        Some(
            reps.into_iter()
                .map(|representative| SquareClass { representative, mode })
                .collect(),
        )
    }

    /// True when `x` lies in this class.
    pub fn contains(&self, x: &Scalar) -> bool {
        square_class(x, self.mode).map(|c| &c == self).unwrap_or(false)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Some(a.cmp(b)),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => Some(a.cmp(b)),
            _ => None,
        }
    }
}
