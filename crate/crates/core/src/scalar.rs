//! Elements of ℚ, ℚ(√2) and ℚ(η) with η² + η + 1 = 0.
//!
//! Every value carries the field it lives in. Rational values combine freely
//! with values from either extension; combining the two extensions panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    /// minimal polynomial x
    Rational,
    /// x² − 2
    Sqrt2,
    /// x² + x + 1
    Eisenstein,
}

impl Field {
    pub fn min_poly(self) -> &'static str {
        match self {
            Field::Rational => "x",
            Field::Sqrt2 => "x^2-2",
            Field::Eisenstein => "x^2+x+1",
        }
    }

    /// The field generated by both, if it is one of the shipped fields.
    pub fn join(self, other: Field) -> Option<Field> {
        match (self, other) {
            (a, b) if a == b => Some(a),
            (Field::Rational, b) => Some(b),
            (a, Field::Rational) => Some(a),
            _ => None,
        }
    }
}

/// `c0 + c1·θ` where θ is the generator of `field` (θ = 0 for ℚ).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: Field,
    c0: Rat,
    c1: Rat,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::rat(Rat::one())
    }

    pub fn int(n: i64) -> Self {
        Self::rat(Rat::from_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::rat(Rat::new(n, d))
    }

    pub fn rat(r: Rat) -> Self {
        Scalar { field: Field::Rational, c0: r, c1: Rat::zero() }
    }

    /// `c0 + c1·θ` in `field`; collapses to a rational when `c1 = 0`.
    pub fn new(field: Field, c0: Rat, c1: Rat) -> Self {
        if c1.is_zero() || field == Field::Rational {
            assert!(c1.is_zero(), "nonzero θ-coefficient in ℚ");
            Self::rat(c0)
        } else {
            Scalar { field, c0, c1 }
        }
    }

    pub fn sqrt2() -> Self {
        Self::new(Field::Sqrt2, Rat::zero(), Rat::one())
    }

    /// Primitive cube root of unity η.
    pub fn eta() -> Self {
        Self::new(Field::Eisenstein, Rat::zero(), Rat::one())
    }

    /// A primitive m-th root of unity for m ∈ {1, 2, 3}.
    pub fn root_of_unity(m: usize) -> Self {
        match m {
            1 => Self::one(),
            2 => Self::int(-1),
            3 => Self::eta(),
            _ => panic!("no shipped primitive {m}-th root of unity"),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> (&Rat, &Rat) {
        (&self.c0, &self.c1)
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.c0.is_one() && self.c1.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.c1.is_zero()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.c0)
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.as_rat().and_then(Rat::to_i64)
    }

    fn joined(&self, other: &Scalar) -> Field {
        self.field.join(other.field).unwrap_or_else(|| panic!("mixing {:?} and {:?}", self.field, other.field))
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero");
        let (a, b) = (&self.c0, &self.c1);
        match self.field {
            Field::Rational => Self::rat(a.recip()),
            Field::Sqrt2 => {
                let n = &(a * a) - &(&(b * b) * &Rat::from_int(2));
                Self::new(self.field, a / &n, -(b / &n))
            }
            Field::Eisenstein => {
                // (a + bη)(a − b − bη) = a² − ab + b²
                let n = &(&(a * a) - &(a * b)) + &(b * b);
                Self::new(self.field, &(a - b) / &n, -(b / &n))
            }
        }
    }

    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Image under θ ↦ θ' (the nontrivial Galois conjugate).
    pub fn conj(&self) -> Scalar {
        match self.field {
            Field::Rational => self.clone(),
            Field::Sqrt2 => Self::new(self.field, self.c0.clone(), -&self.c1),
            // η ↦ η² = −1 − η
            Field::Eisenstein => Self::new(self.field, &self.c0 - &self.c1, -&self.c1),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::rat(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.c1.is_zero() && rhs.c1.is_zero() {
            return Scalar::rat(&self.c0 + &rhs.c0);
        }
        let f = self.joined(rhs);
        Scalar::new(f, &self.c0 + &rhs.c0, &self.c1 + &rhs.c1)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        if self.c1.is_zero() && rhs.c1.is_zero() {
            return Scalar::rat(&self.c0 - &rhs.c0);
        }
        let f = self.joined(rhs);
        Scalar::new(f, &self.c0 - &rhs.c0, &self.c1 - &rhs.c1)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.c1.is_zero() && rhs.c1.is_zero() {
            return Scalar::rat(&self.c0 * &rhs.c0);
        }
        let f = self.joined(rhs);
        let (a, b, c, d) = (&self.c0, &self.c1, &rhs.c0, &rhs.c1);
        let bd = b * d;
        match f {
            Field::Sqrt2 => Scalar::new(f, &(a * c) + &(&bd * &Rat::from_int(2)), &(a * d) + &(b * c)),
            Field::Eisenstein => {
                // θ² = −θ − 1
                Scalar::new(f, &(a * c) - &bd, &(&(a * d) + &(b * c)) - &bd)
            }
            Field::Rational => unreachable!(),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        if self.c1.is_zero() && rhs.c1.is_zero() {
            return Scalar::rat(&self.c0 / &rhs.c0);
        }
        self * &rhs.inv()
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { field: self.field, c0: -&self.c0, c1: -&self.c1 }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// Lexicographic on (c0, c1); used only for canonical orderings.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c0.cmp(&other.c0).then_with(|| self.c1.cmp(&other.c1))
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1.is_zero() {
            write!(f, "{}", self.c0)
        } else {
            write!(f, "[{}, {}]", self.c0, self.c1)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseScalarError {
    #[error("invalid scalar literal `{0}`")]
    Syntax(String),
    #[error("scalar `{0}` has an irrational part but the field is ℚ")]
    NotRational(String),
}

impl Scalar {
    /// Parses `"p"`, `"p/q"` or `"[c0, c1]"`; the pair form lives in `field`.
    pub fn parse_in(s: &str, field: Field) -> Result<Scalar, ParseScalarError> {
        let t = s.trim();
        let syntax = || ParseScalarError::Syntax(s.to_string());
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (a, b) = inner.split_once(',').ok_or_else(syntax)?;
            let c0: Rat = a.parse().map_err(|_| syntax())?;
            let c1: Rat = b.parse().map_err(|_| syntax())?;
            if field == Field::Rational && !c1.is_zero() {
                return Err(ParseScalarError::NotRational(s.to_string()));
            }
            return Ok(Scalar::new(field, c0, c1));
        }
        t.parse::<Rat>().map(Scalar::rat).map_err(|_| syntax())
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scalar::parse_in(s, Field::Rational)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
