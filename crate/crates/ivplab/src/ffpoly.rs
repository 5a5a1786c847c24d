//! Polynomial arithmetic over 𝔽_p and irreducibility certificates over ℚ.
//!
//! Irreducibility over ℚ is certified, never assumed: by degree one, by the
//! Eisenstein criterion at a named prime, or by irreducibility mod p (Rabin's
//! test).  Full factorization over 𝔽_p or ℚ is out of scope; only yes/no
//! verdicts are produced.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::padic::{self, Valuation};
use crate::poly::IntPoly;
use crate::{Error, Result};

/// A polynomial over 𝔽_p, coefficients reduced to [0, p−1], ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    p: BigInt,
    coeffs: Vec<BigInt>,
}

impl FpPoly {
    pub fn new(p: BigInt, mut coeffs: Vec<BigInt>) -> Result<Self> {
        if !padic::is_prime(&p)? {
            return Err(Error::NotPrime(p));
        }
        for c in &mut coeffs {
            *c = c.mod_floor(&p);
        }
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(FpPoly { p, coeffs })
    }

    pub fn zero(p: BigInt) -> Result<Self> {
        FpPoly::new(p, Vec::new())
    }

    pub fn one(p: BigInt) -> Result<Self> {
        FpPoly::new(p, vec![BigInt::one()])
    }

    pub fn x(p: BigInt) -> Result<Self> {
        FpPoly::new(p, vec![BigInt::zero(), BigInt::one()])
    }

    pub fn modulus(&self) -> &BigInt {
        &self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    fn check_same_modulus(&self, other: &FpPoly) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn add(&self, other: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        FpPoly::new(self.p.clone(), coeffs)
    }

    pub fn sub(&self, other: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        FpPoly::new(self.p.clone(), coeffs)
    }

    pub fn mul(&self, other: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(other)?;
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p.clone());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        FpPoly::new(self.p.clone(), out)
    }

    /// Division with remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &FpPoly) -> Result<(FpPoly, FpPoly)> {
        self.check_same_modulus(divisor)?;
        if divisor.is_zero() {
            return Err(Error::InvalidInput("division by the zero polynomial".into()));
        }
        let d = divisor.degree().unwrap();
        let lead_inv = padic::mod_inverse(divisor.coeffs.last().unwrap(), &self.p)
            .ok_or(Error::ModulusMismatch)?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(d)];
        while rem.len() > d && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = (rem[k].clone() * &lead_inv).mod_floor(&self.p);
            if !c.is_zero() {
                quot[k - d] = c.clone();
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k - d + j] = (&rem[k - d + j] - &c * dc).mod_floor(&self.p);
                }
            }
            rem.pop();
        }
        Ok((
            FpPoly::new(self.p.clone(), quot)?,
            FpPoly::new(self.p.clone(), rem)?,
        ))
    }

    /// Scales to leading coefficient 1.
    pub fn monic(&self) -> Result<FpPoly> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let inv = padic::mod_inverse(self.coeffs.last().unwrap(), &self.p)
            .ok_or(Error::ModulusMismatch)?;
        let coeffs = self.coeffs.iter().map(|c| c * &inv).collect();
        FpPoly::new(self.p.clone(), coeffs)
    }

    /// Monic gcd in 𝔽_p[x]; gcd(a, 0) = monic(a).
    pub fn gcd(&self, other: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// x^e mod self, for a possibly huge exponent.
    fn x_pow_mod(&self, e: &BigInt) -> Result<FpPoly> {
        let mut result = FpPoly::one(self.p.clone())?;
        let mut base = FpPoly::x(self.p.clone())?.div_rem(self)?.1;
        let mut e = e.clone();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                result = result.mul(&base)?.div_rem(self)?.1;
            }
            e = e / &two;
            if !e.is_zero() {
                base = base.mul(&base)?.div_rem(self)?.1;
            }
        }
        Ok(result)
    }
}

/// Coefficientwise reduction of an integer polynomial mod p.
pub fn reduce_mod(f: &IntPoly, p: &BigInt) -> Result<FpPoly> {
    FpPoly::new(p.clone(), f.coeffs().to_vec())
}

/// Rabin's irreducibility test for a monic f over 𝔽_p.
///
/// f of degree n is irreducible iff x^{p^n} ≡ x (mod f) and, for each prime
/// r | n, gcd(x^{p^{n/r}} − x, f) = 1.
pub fn is_irreducible_mod_p(f: &FpPoly) -> Result<bool> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::InvalidInput("degree ≥ 1 required".into())),
    };
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    if n == 1 {
        return Ok(true);
    }
    let p = f.modulus().clone();
    let x = FpPoly::x(p.clone())?;
    for r in padic::primes_up_to(n as u64) {
        if n as u64 % r != 0 {
            continue;
        }
        let e = p.pow((n as u64 / r) as u32);
        let h = f.x_pow_mod(&e)?.sub(&x)?;
        if !f.gcd(&h)?.is_one_poly() {
            return Ok(false);
        }
    }
    let e = p.pow(n as u32);
    Ok(f.x_pow_mod(&e)? == x.div_rem(f)?.1)
}

impl FpPoly {
    fn is_one_poly(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

/// How an irreducibility verdict was reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertMethod {
    DegreeOne,
    ModP { prime: String },
    Eisenstein { prime: String, shift: i64 },
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Irreducible,
    Reducible,
    Unverified,
}

/// Certificate for irreducibility of a monic polynomial over ℚ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityCertificate {
    pub verdict: Verdict,
    pub method: CertMethod,
}

impl IrreducibilityCertificate {
    fn irreducible(method: CertMethod) -> Self {
        assert!(method != CertMethod::None);
        IrreducibilityCertificate {
            verdict: Verdict::Irreducible,
            method,
        }
    }
}

/// Checks the Eisenstein criterion for monic f at prime r (no shift):
/// r divides every non-leading coefficient and r² does not divide f(0).
pub fn eisenstein_at(f: &IntPoly, r: &BigInt) -> Result<bool> {
    let Some(deg) = f.degree() else {
        return Ok(false);
    };
    if deg == 0 || !f.is_monic() {
        return Ok(false);
    }
    for i in 0..deg {
        if !f.coeff(i).is_multiple_of(r) {
            return Ok(false);
        }
    }
    // Exactness of v_r(c_0) = 1 is what the criterion needs.
    Ok(padic::vp(&f.coeff(0), r)? == Valuation::Finite(1))
}

/// Default bound for the small-prime scan in [`certify_irreducible_over_q`].
pub const DEFAULT_MOD_P_SCAN_BOUND: u64 = 50;

/// Certifies irreducibility of a monic polynomial over ℚ.
///
/// Tries, in order: degree one; Eisenstein at each hint prime; Rabin's test
/// mod each hint prime and then mod every prime up to `scan_bound`.  Returns
/// `Reducible` only with an exhibited integer root (degree ≤ 3, monic), and
/// `Unverified` otherwise.  `Unverified` is a value, not an error.
pub fn certify_irreducible_over_q(
    f: &IntPoly,
    hint_primes: &[BigInt],
    scan_bound: u64,
) -> Result<IrreducibilityCertificate> {
    let deg = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidInput("degree ≥ 1 required".into())),
    };
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    if deg == 1 {
        return Ok(IrreducibilityCertificate::irreducible(CertMethod::DegreeOne));
    }
    for r in hint_primes {
        if eisenstein_at(f, r)? {
            return Ok(IrreducibilityCertificate::irreducible(
                CertMethod::Eisenstein {
                    prime: r.to_string(),
                    shift: 0,
                },
            ));
        }
    }
    let mut mod_p_candidates: Vec<BigInt> = hint_primes.to_vec();
    mod_p_candidates.extend(padic::primes_up_to(scan_bound).into_iter().map(BigInt::from));
    for p in &mod_p_candidates {
        // A monic polynomial has content 1 and keeps its degree mod p; both
        // are preconditions for lifting the mod-p verdict to ℚ.
        debug_assert!(f.content()? .is_one());
        let fp = reduce_mod(f, p)?;
        if fp.degree() != Some(deg) {
            continue;
        }
        if is_irreducible_mod_p(&fp)? {
            return Ok(IrreducibilityCertificate::irreducible(CertMethod::ModP {
                prime: p.to_string(),
            }));
        }
    }
    if deg <= 3 {
        if let Some(root) = integer_root(f)? {
            let _ = root;
            return Ok(IrreducibilityCertificate {
                verdict: Verdict::Reducible,
                method: CertMethod::None,
            });
        }
        // Monic of degree ≤ 3 without an integer root is irreducible over ℚ,
        // but without a mod-p or Eisenstein witness we do not certify it.
    }
    Ok(IrreducibilityCertificate {
        verdict: Verdict::Unverified,
        method: CertMethod::None,
    })
}

/// Searches for an integer root of a monic polynomial among the divisors of
/// the constant term.  Gives up (None) when the constant term is too large to
/// factor by trial division.
fn integer_root(f: &IntPoly) -> Result<Option<BigInt>> {
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Ok(Some(BigInt::zero()));
    }
    let bound = BigInt::from(1_000_000_000_000u64);
    if c0.abs() > bound {
        return Ok(None);
    }
    let c0u = c0.abs().to_u64().unwrap();
    let mut d = 1u64;
    while d * d <= c0u {
        if c0u % d == 0 {
            for cand in [d, c0u / d] {
                for sign in [1i64, -1] {
                    let r = BigInt::from(cand) * BigInt::from(sign);
                    if f.eval(&r).is_zero() {
                        return Ok(Some(r));
                    }
                }
            }
        }
        d += 1;
    }
    Ok(None)
}
