use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, int, parse_rational, Rational};
use crate::error::{check_dim, Error, Result};

/// A point or direction in rational d-space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "vectors have positive dimension");
        RationalVector(coords)
    }

    pub fn try_new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyInput("vector coordinates"));
        }
        Ok(RationalVector(coords))
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn from_bigints(coords: &[BigInt]) -> Self {
        Self::new(coords.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = int(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Inner product; panics on a dimension mismatch (callers check dims first).
    pub fn dot(&self, other: &RationalVector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dot of mismatched dimensions");
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn checked_dot(&self, other: &RationalVector) -> Result<Rational> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.dot(other))
    }

    pub fn scale(&self, factor: &Rational) -> RationalVector {
        RationalVector(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn norm_squared(&self) -> Rational {
        self.dot(self)
    }

    pub fn max_abs(&self) -> Rational {
        self.0
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn sum_abs(&self) -> Rational {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates, if every coordinate is an integer.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(super::rational::to_f64).collect()
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &RationalVector) -> RationalVector {
        let mut coords = self.0.clone();
        coords.extend(other.0.iter().cloned());
        RationalVector(coords)
    }

    /// Coordinates `start..start+len` as a vector.
    pub fn block(&self, start: usize, len: usize) -> RationalVector {
        RationalVector::new(self.0[start..start + len].to_vec())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }

    pub fn parse(texts: &[impl AsRef<str>]) -> Result<Self> {
        let coords = texts
            .iter()
            .map(|t| parse_rational(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::try_new(coords)
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl<'a> Add<&'a RationalVector> for &'a RationalVector {
    type Output = RationalVector;

    fn add(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim());
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a RationalVector> for &'a RationalVector {
    type Output = RationalVector;

    fn sub(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim());
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;

    fn neg(self) -> RationalVector {
        RationalVector(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        RationalVector::parse(&texts).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::ratio;

    #[test]
    fn arithmetic() {
        let a = RationalVector::from_ints(&[1, 2]);
        let b = RationalVector::new(vec![ratio(1, 2), int(-1)]);
        assert_eq!(a.dot(&b), ratio(-3, 2));
        assert_eq!(&a - &b, RationalVector::new(vec![ratio(1, 2), int(3)]));
        assert_eq!(-&a, RationalVector::from_ints(&[-1, -2]));
        assert_eq!(a.max_abs(), int(2));
        assert_eq!(b.sum_abs(), ratio(3, 2));
        assert!(a.checked_dot(&RationalVector::zeros(3)).is_err());
    }

    #[test]
    fn json_is_list_of_strings() {
        let v = RationalVector::new(vec![ratio(1, 3), int(-2)]);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"["1/3","-2"]"#);
        let back: RationalVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}
