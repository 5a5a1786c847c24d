//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Coefficients are stored in ascending degree order with no trailing zeros;
//! the zero polynomial is the empty coefficient vector.  All degrees in this
//! crate are desk-scale, so multiplication is schoolbook convolution.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A polynomial in ℤ[x], coefficients ascending by degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// The monomial x.
    pub fn x() -> Self {
        IntPoly::new(vec![BigInt::zero(), BigInt::one()])
    }

    /// The linear polynomial x − a.
    pub fn x_minus(a: &BigInt) -> Self {
        IntPoly::new(vec![-a.clone(), BigInt::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree of a nonzero polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the stored degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().map_or(false, |c| c.is_one())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        IntPoly::new(out)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    /// Schoolbook convolution product.
    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// k-th power by binary exponentiation; `pow(f, 0) = 1`.
    pub fn pow(&self, k: u32) -> IntPoly {
        let mut result = IntPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact Horner evaluation at an integer point.
    pub fn eval(&self, a: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c;
        }
        acc
    }

    /// Positive gcd of all coefficients.  Rejects the zero polynomial.
    pub fn content(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        Ok(g.abs())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

// JSON encoding used repo-wide: {"coeffs": [<decimal strings, ascending degree>]}.
#[derive(Serialize, Deserialize)]
struct PolyWire {
    coeffs: Vec<String>,
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = PolyWire {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = PolyWire::deserialize(d)?;
        let mut coeffs = Vec::with_capacity(wire.coeffs.len());
        for s in &wire.coeffs {
            let c = BigInt::from_str(s)
                .map_err(|e| D::Error::custom(format!("bad coefficient {:?}: {}", s, e)))?;
            coeffs.push(c);
        }
        Ok(IntPoly::new(coeffs))
    }
}
