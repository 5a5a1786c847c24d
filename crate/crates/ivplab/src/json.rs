//! JSON wire formats.
//!
//! All integers serialize as decimal strings so downstream consumers never
//! hit 53-bit precision loss.  Polynomials use the repo-wide encoding
//! `{"coeffs": ["c0", "c1", …]}` with coefficients in ascending degree order.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::construct::{ConstructionParams, ConstructionWitness};
use crate::engine::IvpElement;
use crate::ffpoly;
use crate::poly::IntPoly;
use crate::{Error, Result};

/// Serde adapter: one BigInt as a decimal string.
pub mod big_dec {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        BigInt::from_str(&s).map_err(|e| D::Error::custom(format!("bad integer {:?}: {}", s, e)))
    }
}

/// Serde adapter: a vector of BigInts as decimal strings.
pub mod big_dec_vec {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &[BigInt],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| {
                BigInt::from_str(s)
                    .map_err(|e| D::Error::custom(format!("bad integer {:?}: {}", s, e)))
            })
            .collect()
    }
}

/// Witness file schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFile {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(with = "big_dec")]
    pub p: BigInt,
    #[serde(with = "big_dec_vec")]
    pub residues: Vec<BigInt>,
    pub g: Vec<IntPoly>,
    pub f: Vec<IntPoly>,
    #[serde(with = "big_dec_vec")]
    pub aux_primes: Vec<BigInt>,
    #[serde(with = "big_dec")]
    pub modulus: BigInt,
    pub denominator_exponent: u32,
}

impl WitnessFile {
    pub fn from_witness(w: &ConstructionWitness) -> Self {
        WitnessFile {
            n: w.params.n,
            p: w.params.p.clone(),
            residues: w.residues.clone(),
            g: w.g.clone(),
            f: w.f.clone(),
            aux_primes: w.aux_primes.clone(),
            modulus: w.modulus.clone(),
            denominator_exponent: w.denominator_exponent,
        }
    }

    /// Rebuilds a witness from untrusted file contents.  Certificates are
    /// recomputed, and every construction invariant is re-validated.
    pub fn into_witness(self) -> Result<ConstructionWitness> {
        let params = ConstructionParams::new(self.n, self.p)?;
        let mut certificates = Vec::with_capacity(self.f.len());
        if self.f.len() != self.aux_primes.len() {
            return Err(Error::InvalidInput(
                "f and aux_primes lengths disagree".into(),
            ));
        }
        for (fi, r) in self.f.iter().zip(&self.aux_primes) {
            certificates.push(ffpoly::certify_irreducible_over_q(
                fi,
                std::slice::from_ref(r),
                ffpoly::DEFAULT_MOD_P_SCAN_BOUND,
            )?);
        }
        let witness = ConstructionWitness {
            params,
            residues: self.residues,
            g: self.g,
            f: self.f,
            aux_primes: self.aux_primes,
            modulus: self.modulus,
            denominator_exponent: self.denominator_exponent,
            certificates,
        };
        crate::construct::validate_witness(&witness)?;
        Ok(witness)
    }
}

/// Element file schema for the `analyze` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementFile {
    pub basis: Vec<IntPoly>,
    pub expo: Vec<u32>,
    #[serde(with = "big_dec")]
    pub denominator: BigInt,
}

impl ElementFile {
    pub fn from_element(e: &IvpElement) -> Self {
        ElementFile {
            basis: e.basis.clone(),
            expo: e.expo.clone(),
            denominator: e.denom.clone(),
        }
    }

    pub fn into_element(self) -> Result<IvpElement> {
        if self.basis.len() != self.expo.len() {
            return Err(Error::InvalidInput(
                "basis and expo lengths disagree".into(),
            ));
        }
        if self.denominator <= BigInt::from(0) {
            return Err(Error::InvalidInput("denominator must be positive".into()));
        }
        for f in &self.basis {
            match f.degree() {
                Some(d) if d >= 1 => {}
                _ => {
                    return Err(Error::InvalidInput(
                        "basis polynomials must be non-constant".into(),
                    ))
                }
            }
            if !f.is_monic() {
                return Err(Error::InvalidInput("basis polynomials must be monic".into()));
            }
        }
        Ok(IvpElement::new(self.basis, self.expo, self.denominator).canonicalize())
    }
}

/// Parses a witness file from raw bytes (fuzz and CLI entry point).
pub fn parse_witness(bytes: &[u8]) -> Result<ConstructionWitness> {
    let file: WitnessFile = serde_json::from_slice(bytes)
        .map_err(|e| Error::InvalidInput(format!("malformed witness file: {}", e)))?;
    file.into_witness()
}

/// Parses an element file from raw bytes (fuzz and CLI entry point).
pub fn parse_element(bytes: &[u8]) -> Result<IvpElement> {
    let file: ElementFile = serde_json::from_slice(bytes)
        .map_err(|e| Error::InvalidInput(format!("malformed element file: {}", e)))?;
    file.into_element()
}

/// Parses a bare polynomial in the repo-wide JSON encoding.
pub fn parse_poly(bytes: &[u8]) -> Result<IntPoly> {
    serde_json::from_slice(bytes)
        .map_err(|e| Error::InvalidInput(format!("malformed polynomial: {}", e)))
}
