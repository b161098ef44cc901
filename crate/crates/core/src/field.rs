//! Base fields: the rationals and prime fields of odd characteristic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest accepted prime; keeps residue products inside `u128` comfortably.
const MAX_PRIME: u64 = 1 << 31;

/// The base field `K`. Characteristic 2 is rejected at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    // 0 for the rationals, otherwise an odd prime
    characteristic: u64,
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if !(3..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        Ok(FieldSpec { characteristic: p })
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    /// Number of elements for a prime field, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        (!self.is_rational()).then_some(self.characteristic)
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Scalar {
        if self.is_rational() {
            Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
        } else {
            let p = self.characteristic as i64;
            Scalar::Residue {
                value: n.rem_euclid(p) as u64,
                modulus: self.characteristic,
            }
        }
    }

    pub fn fraction(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        let d = self.int(den);
        let inv = d.inv().ok_or_else(|| Error::Parse(format!("{den} is not invertible")))?;
        Ok(&self.int(num) * &inv)
    }

    /// Parses `"a"` or `"a/b"`; prime-field entries are reduced mod p.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad integer {num:?}")))?;
        let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad integer {den:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        if self.is_rational() {
            return Ok(Scalar::Rational(BigRational::new(num, den)));
        }
        let p = BigInt::from(self.characteristic);
        let reduce = |x: &BigInt| x.mod_floor(&p).to_u64().expect("residue fits");
        let d = Scalar::Residue {
            value: reduce(&den),
            modulus: self.characteristic,
        };
        let inv = d
            .inv()
            .ok_or_else(|| Error::Parse(format!("denominator of {s:?} vanishes mod {}", self.characteristic)))?;
        let n = Scalar::Residue {
            value: reduce(&num),
            modulus: self.characteristic,
        };
        Ok(&n * &inv)
    }

    /// All field elements, for prime fields only.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.order().map(|p| (0..p as i64).map(|v| self.int(v)).collect())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "q")
        } else {
            write!(f, "fp:{}", self.characteristic)
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Self::rationals());
        }
        let p = s
            .strip_prefix("fp:")
            .ok_or_else(|| Error::InvalidField(format!("expected \"q\" or \"fp:<p>\", got {s:?}")))?;
        let p: u64 = p
            .parse()
            .map_err(|_| Error::InvalidField(format!("bad prime {p:?}")))?;
        Self::prime(p)
    }
}

fn is_prime(n: u64) -> bool {
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

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// An exact field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::RATIONALS,
            Scalar::Residue { modulus, .. } => FieldSpec {
                characteristic: *modulus,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: mod_pow(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Residue value in `[0, p)`; `None` over the rationals.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    /// Whether the element is a nonzero square in its field.
    pub fn is_square(&self) -> bool {
        match self {
            Scalar::Rational(q) => {
                if q.is_negative() || q.is_zero() {
                    return false;
                }
                let is_sq = |n: &BigInt| {
                    let r = n.sqrt();
                    &r * &r == *n
                };
                is_sq(q.numer()) && is_sq(q.denom())
            }
            Scalar::Residue { value, modulus } => {
                *value != 0 && mod_pow(*value, (modulus - 1) / 2, *modulus) == 1
            }
        }
    }

    fn check(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "scalar field mismatch");
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: (a + b) % modulus,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: (a + modulus - b) % modulus,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
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
