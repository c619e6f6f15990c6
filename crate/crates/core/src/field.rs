//! Exact coefficient fields: arbitrary-precision rationals and prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Largest accepted prime modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("unknown field descriptor `{0}` (expected `rational` or `fp:P`)")]
    UnknownField(String),
    #[error("modulus {0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("cannot parse coefficient `{0}`")]
    BadCoefficient(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Field descriptor, fixed for a whole session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Default for Field {
    fn default() -> Self {
        Field::Rational
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp { v: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                v: n.rem_euclid(*p as i64) as u64,
                p: *p,
            },
        }
    }

    /// Parses `"n"`, `"n/d"` or a finite decimal such as `"-1.25"`.
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        let q = parse_rational(s)?;
        match self {
            Field::Rational => Ok(Scalar::Q(q)),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let num = residue(q.numer(), &pb);
                let den = residue(q.denom(), &pb);
                if den == 0 {
                    return Err(FieldError::ZeroDenominator(s.to_string()));
                }
                let v = (num as u128 * inv_mod(den, *p) as u128 % *p as u128) as u64;
                Ok(Scalar::Fp { v, p: *p })
            }
        }
    }
}

fn residue(n: &BigInt, p: &BigInt) -> u64 {
    let r = ((n % p) + p) % p;
    u64::try_from(r).expect("residue below modulus")
}

fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::BadCoefficient(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_int(n.trim()).ok_or_else(bad)?;
        let d = parse_int(d.trim()).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(FieldError::ZeroDenominator(s.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 64 {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let whole = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            parse_int(int_digits).ok_or_else(bad)?
        };
        let frac_n = parse_int(frac).ok_or_else(bad)?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mut num = whole * &scale + frac_n;
        if negative {
            num = -num;
        }
        return Ok(BigRational::new(num, scale));
    }
    Ok(BigRational::from_integer(parse_int(t).ok_or_else(bad)?))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

impl FromStr for Field {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("rational") || t == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = t.strip_prefix("fp:") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| FieldError::UnknownField(s.to_string()))?;
            return Field::prime(p);
        }
        Err(FieldError::UnknownField(s.to_string()))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("rational"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// A field element. Values of different fields never meet: arithmetic between
/// them is an internal invariant violation and panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: inv_mod(*v, *p),
                p: *p,
            },
        })
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between scalars of different fields")
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: (*a as u128 * *b as u128 % *p as u128) as u64,
                p: *p,
            },
            _ => mismatch(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rationals() {
        let f = Field::Rational;
        assert_eq!(f.parse("3/6").unwrap().to_string(), "1/2");
        assert_eq!(f.parse("-4").unwrap().to_string(), "-4");
        assert_eq!(f.parse("-1.25").unwrap().to_string(), "-5/4");
        assert_eq!(f.parse(".5").unwrap().to_string(), "1/2");
        assert!(matches!(f.parse("1/0"), Err(FieldError::ZeroDenominator(_))));
        for bad in ["", "x", "1/", "--1", "1.", "1e3", "+"] {
            assert!(f.parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn prime_field_arithmetic() {
        let f: Field = "fp:7".parse().unwrap();
        let a = f.parse("3").unwrap();
        let b = f.parse("1/2").unwrap();
        assert_eq!((&a * &b).to_string(), "5");
        assert_eq!((&a - &f.from_i64(5)).to_string(), "5");
        assert_eq!(a.inv().unwrap().to_string(), "5");
        assert!(f.parse("1/7").is_err());
        assert_eq!("fp:8".parse::<Field>(), Err(FieldError::NotPrime(8)));
        assert!("fp:2147483659".parse::<Field>().is_err());
        assert!("complex".parse::<Field>().is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let q = Field::Rational.parse("-7/3").unwrap();
        assert!((&q * &q.inv().unwrap()).is_one());
        assert!(Field::Rational.zero().inv().is_none());
    }
}
