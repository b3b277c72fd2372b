//! Exact scalars of the base field: arbitrary-precision rationals or residues mod a word-sized prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScalarField {
    Rationals,
    Prime(u64),
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Rationals => write!(f, "Q"),
            ScalarField::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl ScalarField {
    pub fn prime(p: u64) -> Result<Self> {
        if p >= (1u64 << 62) || !is_prime(p) {
            return Err(Error::Input(format!("{p} is not a supported prime")));
        }
        Ok(ScalarField::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ScalarField::Rationals => 0,
            ScalarField::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            ScalarField::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            ScalarField::Prime(p) => Scalar::Residue {
                value: (n as i128).rem_euclid(*p as i128) as u64,
                p: *p,
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            ScalarField::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            ScalarField::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Residue {
                    value: r.to_u64().expect("residue fits in u64"),
                    p: *p,
                }
            }
        }
    }

    /// The scalar `num/den`; over 𝔽_p this is `num·den⁻¹`.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            ScalarField::Rationals => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            ScalarField::Prime(_) => self.from_bigint(num).div(&self.from_bigint(den)),
        }
    }

    /// All elements, for prime fields.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            ScalarField::Rationals => None,
            ScalarField::Prime(p) => Some((0..*p).map(|v| Scalar::Residue { value: v, p: *p }).collect()),
        }
    }
}

/// An element of ℚ (reduced, positive denominator) or of 𝔽_p (residue in `[0, p)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, p: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn scalar_arith(op: ScalarOp, a: &Scalar, b: &Scalar) -> Result<Scalar> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field(), b.field()));
    }
    Ok(match op {
        ScalarOp::Add => a + b,
        ScalarOp::Sub => a - b,
        ScalarOp::Mul => a * b,
        ScalarOp::Div => return a.div(b),
    })
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(p as i128) as u64)
}

impl Scalar {
    pub fn field(&self) -> ScalarField {
        match self {
            Scalar::Rational(_) => ScalarField::Rationals,
            Scalar::Residue { p, .. } => ScalarField::Prime(*p),
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

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: mod_inverse(*value, *p).expect("p is prime"),
                p: *p,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field(), other.field()));
        }
        Ok(self * &other.inv()?)
    }

    /// True for rationals with a leading minus sign; residues are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.field().one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn check(a: &Scalar, b: &Scalar) {
    assert_eq!(a.field(), b.field(), "scalar field mismatch");
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        check(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => Scalar::Residue {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
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
        check(self, rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => Scalar::Residue {
                value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        ScalarField::Rationals.from_ratio(&n.into(), &d.into()).unwrap()
    }

    #[test]
    fn worked_values() {
        let one = q(1, 1);
        assert_eq!(scalar_arith(ScalarOp::Div, &one, &q(3, 1)).unwrap(), q(1, 3));
        let f5 = ScalarField::prime(5).unwrap();
        assert_eq!(
            scalar_arith(ScalarOp::Mul, &f5.from_i64(2), &f5.from_i64(3)).unwrap(),
            f5.one()
        );
        assert_eq!(scalar_arith(ScalarOp::Add, &q(1, 2), &q(1, 3)).unwrap(), q(5, 6));
    }

    #[test]
    fn errors() {
        let f5 = ScalarField::prime(5).unwrap();
        assert_eq!(
            scalar_arith(ScalarOp::Div, &f5.one(), &f5.zero()),
            Err(Error::DivisionByZero)
        );
        assert!(matches!(
            scalar_arith(ScalarOp::Add, &f5.one(), &q(1, 1)),
            Err(Error::FieldMismatch(..))
        ));
        assert!(ScalarField::prime(9).is_err());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(q(2, -4).to_string(), "-1/2");
        let f7 = ScalarField::prime(7).unwrap();
        assert_eq!(f7.from_i64(-1).to_string(), "6");
        assert_eq!(f7.from_ratio(&1.into(), &3.into()).unwrap().to_string(), "5");
    }
}
