//! Construction of the witness element `F = (f_1 ⋯ f_q) / p^{N−1}`.
//!
//! Given `N ≥ 2` and a prime `p` (so `q = p` residue classes), the steps are:
//!
//! 1. a complete residue system `a_1, …, a_q` mod p with every `a_i ≡ 0`
//!    modulo each prime `r < p`, taken as smallest non-negative CRT lifts;
//! 2. `g_i = (x − a_i)^{N−1}` for `i < q` and `g_q = (x − a_q)^N`;
//! 3. monic irreducible replacements `f_i ≡ g_i mod M`, where
//!    `M = ∏_{r prime ≤ d} r^{N+1}` and `d = Σ deg g_i`, realized by
//!    per-coefficient CRT against a fresh auxiliary prime `r_i > d` so that
//!    each `f_i` is Eisenstein at `r_i`;
//! 4. the exact check `𝔡(∏ g_i) = 𝔡(∏ f_i) = p^{N−1}`.
//!
//! Every property the construction relies on is re-verified on the produced
//! data, and again when a witness file is loaded.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::engine::IvpElement;
use crate::ffpoly::{self, IrreducibilityCertificate, Verdict};
use crate::padic::{self, Valuation};
use crate::poly::IntPoly;
use crate::{Error, Result};

/// Construction is impractical for larger primes (q = p basis polynomials);
/// the guard keeps error messages honest instead of hanging.
const MAX_PRIME: u64 = 100;

/// Parameters of one witness instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub n: u32,
    pub p: BigInt,
}

impl ConstructionParams {
    pub fn new(n: u32, p: BigInt) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("N must be ≥ 2, got {}", n)));
        }
        if !padic::is_prime(&p)? {
            return Err(Error::NotPrime(p));
        }
        if p.to_u64().map_or(true, |p| p > MAX_PRIME) {
            return Err(Error::InvalidInput(format!(
                "p = {} is too large for an explicit construction (max {})",
                p, MAX_PRIME
            )));
        }
        Ok(ConstructionParams { n, p })
    }

    /// Number of residue classes; for ℤ the residue field size is p itself.
    pub fn q(&self) -> usize {
        self.p.to_u64().unwrap() as usize
    }
}

/// Full record of one constructed instance.
#[derive(Debug, Clone)]
pub struct ConstructionWitness {
    pub params: ConstructionParams,
    pub residues: Vec<BigInt>,
    pub g: Vec<IntPoly>,
    pub f: Vec<IntPoly>,
    pub aux_primes: Vec<BigInt>,
    pub modulus: BigInt,
    /// Denominator exponent e = N − 1.
    pub denominator_exponent: u32,
    pub certificates: Vec<IrreducibilityCertificate>,
}

impl ConstructionWitness {
    /// The witness element F = ∏ f_i / p^{N−1}.
    pub fn element(&self) -> IvpElement {
        IvpElement::new(
            self.f.clone(),
            vec![1; self.f.len()],
            self.params.p.pow(self.denominator_exponent),
        )
    }

    pub fn denominator(&self) -> BigInt {
        self.params.p.pow(self.denominator_exponent)
    }
}

/// The residues a_1, …, a_q: a_i is the smallest non-negative solution of
/// a_i ≡ i−1 (mod p) and a_i ≡ 0 (mod r) for every prime r < p.
pub fn residue_system(p: &BigInt) -> Result<Vec<BigInt>> {
    if !padic::is_prime(p)? {
        return Err(Error::NotPrime(p.clone()));
    }
    let pu = p.to_u64().ok_or_else(|| Error::PrimeTooLarge(p.clone()))?;
    let small: Vec<BigInt> = padic::primes_up_to(pu.saturating_sub(1))
        .into_iter()
        .map(BigInt::from)
        .collect();
    let mut residues = Vec::with_capacity(pu as usize);
    for i in 0..pu {
        let mut congruences = vec![(BigInt::from(i), p.clone())];
        for r in &small {
            congruences.push((BigInt::zero(), r.clone()));
        }
        residues.push(padic::crt(&congruences)?);
    }
    Ok(residues)
}

/// g_i = (x − a_i)^{N−1} for i < q and g_q = (x − a_q)^N.
pub fn build_g(params: &ConstructionParams, residues: &[BigInt]) -> Vec<IntPoly> {
    let q = residues.len();
    residues
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let e = if i + 1 < q { params.n - 1 } else { params.n };
            IntPoly::x_minus(a).pow(e)
        })
        .collect()
}

/// M = ∏_{r prime ≤ d} r^{N+1}; the congruence modulus of the replacement.
pub fn replacement_modulus(n: u32, d: usize) -> BigInt {
    let mut m = BigInt::one();
    for r in padic::primes_up_to(d as u64) {
        m *= BigInt::from(r).pow(n + 1);
    }
    m
}

/// Replaces each g_i by a monic irreducible f_i of the same degree with
/// f_i ≡ g_i mod M.  Non-leading coefficients are CRT-lifted to be ≡ 0 mod
/// r_i², except the constant term which is ≡ r_i mod r_i², making f_i
/// Eisenstein at the auxiliary prime r_i.
pub fn irreducible_replacement(
    g: &[IntPoly],
    n: u32,
    aux_override: Option<&[BigInt]>,
) -> Result<(Vec<IntPoly>, Vec<BigInt>, Vec<IrreducibilityCertificate>)> {
    let d: usize = g
        .iter()
        .map(|gi| gi.degree().unwrap_or(0))
        .sum();
    for gi in g {
        if !gi.is_monic() || gi.degree() == Some(0) {
            return Err(Error::InvalidInput(
                "replacement requires monic non-constant polynomials".into(),
            ));
        }
    }
    let m = replacement_modulus(n, d);
    let aux_primes: Vec<BigInt> = match aux_override {
        Some(primes) => {
            if primes.len() != g.len() {
                return Err(Error::InvalidInput(format!(
                    "expected {} auxiliary primes, got {}",
                    g.len(),
                    primes.len()
                )));
            }
            for r in primes {
                if !padic::is_prime(r)? {
                    return Err(Error::NotPrime(r.clone()));
                }
                if r.to_u64().map_or(true, |r| r <= d as u64) {
                    return Err(Error::InvalidInput(format!(
                        "auxiliary prime {} must exceed the total degree {}",
                        r, d
                    )));
                }
            }
            let mut sorted = primes.to_vec();
            sorted.dedup();
            if sorted.len() != primes.len() {
                return Err(Error::InvalidInput("auxiliary primes must be distinct".into()));
            }
            primes.to_vec()
        }
        None => {
            let mut primes = Vec::with_capacity(g.len());
            let mut r = d as u64;
            for _ in 0..g.len() {
                r = padic::next_prime(r);
                primes.push(BigInt::from(r));
            }
            primes
        }
    };

    let mut f_list = Vec::with_capacity(g.len());
    let mut certificates = Vec::with_capacity(g.len());
    for (gi, r) in g.iter().zip(&aux_primes) {
        let deg = gi.degree().unwrap();
        let r2 = r * r;
        let mut coeffs = Vec::with_capacity(deg + 1);
        for j in 0..deg {
            let target = if j == 0 { r.clone() } else { BigInt::zero() };
            let c = padic::crt(&[(gi.coeff(j).mod_floor(&m), m.clone()), (target, r2.clone())])?;
            coeffs.push(c);
        }
        coeffs.push(BigInt::one());
        let fi = IntPoly::new(coeffs);
        if !ffpoly::eisenstein_at(&fi, r)? {
            return Err(Error::Invariant(format!(
                "replacement for {} is not Eisenstein at {}",
                gi, r
            )));
        }
        let cert = ffpoly::certify_irreducible_over_q(
            &fi,
            std::slice::from_ref(r),
            ffpoly::DEFAULT_MOD_P_SCAN_BOUND,
        )?;
        if cert.verdict != Verdict::Irreducible {
            return Err(Error::Invariant(format!(
                "no irreducibility certificate for replacement {}",
                fi
            )));
        }
        f_list.push(fi);
        certificates.push(cert);
    }
    for i in 0..f_list.len() {
        for j in i + 1..f_list.len() {
            if f_list[i] == f_list[j] {
                return Err(Error::Invariant(format!(
                    "replacements {} and {} coincide",
                    i, j
                )));
            }
        }
    }
    Ok((f_list, aux_primes, certificates))
}

/// Which side of the valuation pattern to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternMode {
    /// v_p(c − a_i) ≥ 1 implies v_p(poly_i(c)) ≥ N−1 (resp. N for i = q).
    Ge,
    /// Equality at v_p(c − a_i) = 1, and v_p(poly_i(c)) = 0 at v_p(c − a_i) = 0.
    Eq,
}

/// Spot-checks the valuation pattern of the g_i (or f_i) at sampled points:
/// structured samples c = a_i + p·t (t ∈ [1, p²]) and c = a_i + u
/// (u ∈ [1, p−1]), plus 64 seeded random probes.
pub fn check_valuation_pattern(
    polys: &[IntPoly],
    residues: &[BigInt],
    p: &BigInt,
    n: u32,
    mode: PatternMode,
) -> Result<()> {
    if polys.len() != residues.len() {
        return Err(Error::InvalidInput("polynomial/residue count mismatch".into()));
    }
    let q = polys.len();
    let pu = p
        .to_u64()
        .ok_or_else(|| Error::PrimeTooLarge(p.clone()))?;
    let mut rng = StdRng::seed_from_u64(0x1f9a_77c3);
    for (i, (poly, a)) in polys.iter().zip(residues).enumerate() {
        let target = if i + 1 < q { n as u64 - 1 } else { n as u64 };
        let check_point = |c: &BigInt| -> Result<()> {
            let k = padic::vp(&(c - a), p)?;
            let v = padic::vp(&poly.eval(c), p)?;
            let violation = |expected: &str| {
                Err(Error::Invariant(format!(
                    "valuation pattern violated: i={}, c={}, v_p(c−a_i)={:?}, \
                     v_p(poly_i(c))={:?}, expected {}",
                    i + 1,
                    c,
                    k,
                    v,
                    expected
                )))
            };
            match mode {
                PatternMode::Ge => {
                    if k >= Valuation::Finite(1) && v < Valuation::Finite(target) {
                        return violation(&format!("≥ {}", target));
                    }
                }
                PatternMode::Eq => {
                    if k == Valuation::Finite(1) && v != Valuation::Finite(target) {
                        return violation(&format!("= {}", target));
                    }
                    if k == Valuation::Finite(0) && v != Valuation::Finite(0) {
                        return violation("= 0");
                    }
                }
            }
            Ok(())
        };
        for t in 1..=pu * pu {
            let c = a + p * BigInt::from(t);
            check_point(&c)?;
        }
        for u in 1..pu {
            let c = a + BigInt::from(u);
            check_point(&c)?;
        }
        for _ in 0..64 {
            let t: i64 = rng.gen_range(-1_000_000..=1_000_000);
            check_point(&(a + BigInt::from(t)))?;
        }
    }
    Ok(())
}

/// Finds z with v_Q(∏ f_i(z)) = 0 for a prime Q ≠ p, by scanning z = 0, 1, ….
pub fn other_prime_witness(f: &[IntPoly], q_prime: &BigInt) -> Result<BigInt> {
    if !padic::is_prime(q_prime)? {
        return Err(Error::NotPrime(q_prime.clone()));
    }
    let total_deg: usize = f.iter().map(|fi| fi.degree().unwrap_or(0)).sum();
    let bound = q_prime
        .to_u64()
        .map(|q| q * (total_deg as u64 + 2) + 16)
        .unwrap_or(u64::MAX);
    for z in 0..bound {
        let z = BigInt::from(z);
        let ok = f.iter().all(|fi| !fi.eval(&z).is_multiple_of(q_prime));
        if ok {
            return Ok(z);
        }
    }
    Err(Error::ScanExhausted(format!(
        "no point with v_{}(∏ f_i) = 0 within {} candidates",
        q_prime, bound
    )))
}

/// Valuation transfer between the g_i and f_i at sampled points, capped at N:
/// min(v_r(f_i(a)), N) = min(v_r(g_i(a)), N) for every prime r ≤ d.
pub fn check_valuation_transfer(w: &ConstructionWitness, sample_radius: i64) -> Result<()> {
    let d: usize = w.g.iter().map(|gi| gi.degree().unwrap_or(0)).sum();
    let cap = w.params.n as u64;
    for r in padic::primes_up_to(d as u64) {
        let r = BigInt::from(r);
        for a in -sample_radius..=sample_radius {
            let a = BigInt::from(a);
            for (gi, fi) in w.g.iter().zip(&w.f) {
                let vg = padic::vp(&gi.eval(&a), &r)?.capped(cap);
                let vf = padic::vp(&fi.eval(&a), &r)?.capped(cap);
                if vg != vf {
                    return Err(Error::Invariant(format!(
                        "valuation transfer failed at a={}, r={}: g has {}, f has {}",
                        a, r, vg, vf
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Builds and fully checks one witness instance.
pub fn construct_witness(
    params: &ConstructionParams,
    aux_override: Option<&[BigInt]>,
) -> Result<ConstructionWitness> {
    let residues = residue_system(&params.p)?;
    let g = build_g(params, &residues);
    check_valuation_pattern(&g, &residues, &params.p, params.n, PatternMode::Ge)?;
    check_valuation_pattern(&g, &residues, &params.p, params.n, PatternMode::Eq)?;

    let d: usize = g.iter().map(|gi| gi.degree().unwrap()).sum();
    let modulus = replacement_modulus(params.n, d);
    let (f, aux_primes, certificates) = irreducible_replacement(&g, params.n, aux_override)?;
    check_valuation_pattern(&f, &residues, &params.p, params.n, PatternMode::Ge)?;
    check_valuation_pattern(&f, &residues, &params.p, params.n, PatternMode::Eq)?;

    let expected_fd = params.p.pow(params.n - 1);
    for (label, polys) in [("g", &g), ("f", &f)] {
        let prod = polys.iter().fold(IntPoly::one(), |acc, q| acc.mul(q));
        let fd = padic::fixed_divisor(&prod);
        if fd != expected_fd {
            return Err(Error::Invariant(format!(
                "fixed divisor of ∏ {}_i is {}, expected p^(N−1) = {}",
                label, fd, expected_fd
            )));
        }
    }

    let witness = ConstructionWitness {
        params: params.clone(),
        residues,
        g,
        f,
        aux_primes,
        modulus,
        denominator_exponent: params.n - 1,
        certificates,
    };
    Ok(witness)
}

/// Re-validates a witness from untrusted data (e.g. a loaded file): residues,
/// g-shape, congruences f ≡ g mod M, certificates, and the fixed divisor.
pub fn validate_witness(w: &ConstructionWitness) -> Result<()> {
    let params = &w.params;
    if params.n < 2 {
        return Err(Error::InvalidInput("N must be ≥ 2".into()));
    }
    let expected_residues = residue_system(&params.p)?;
    if w.residues != expected_residues {
        return Err(Error::Invariant("residue system does not match construction".into()));
    }
    let expected_g = build_g(params, &w.residues);
    if w.g != expected_g {
        return Err(Error::Invariant("g polynomials do not match construction".into()));
    }
    if w.f.len() != w.g.len() || w.aux_primes.len() != w.g.len() {
        return Err(Error::Invariant("witness component counts disagree".into()));
    }
    if w.denominator_exponent != params.n - 1 {
        return Err(Error::Invariant("denominator exponent must be N−1".into()));
    }
    let d: usize = w.g.iter().map(|gi| gi.degree().unwrap()).sum();
    if w.modulus != replacement_modulus(params.n, d) {
        return Err(Error::Invariant("congruence modulus does not match formula".into()));
    }
    for (i, ((fi, gi), r)) in w.f.iter().zip(&w.g).zip(&w.aux_primes).enumerate() {
        if !fi.is_monic() || fi.degree() != gi.degree() {
            return Err(Error::Invariant(format!("f_{} has wrong shape", i + 1)));
        }
        let diff = fi.sub(gi);
        if !diff.is_zero() && !diff.content()?.is_multiple_of(&w.modulus) {
            return Err(Error::Invariant(format!(
                "f_{} is not congruent to g_{} mod M",
                i + 1,
                i + 1
            )));
        }
        if !padic::is_prime(r)? || r.to_u64().map_or(true, |r| r <= d as u64) {
            return Err(Error::Invariant(format!(
                "auxiliary prime {} invalid for total degree {}",
                r, d
            )));
        }
        let cert = ffpoly::certify_irreducible_over_q(
            fi,
            std::slice::from_ref(r),
            ffpoly::DEFAULT_MOD_P_SCAN_BOUND,
        )?;
        if cert.verdict != Verdict::Irreducible {
            return Err(Error::Invariant(format!(
                "f_{} lacks an irreducibility certificate",
                i + 1
            )));
        }
    }
    for i in 0..w.f.len() {
        for j in i + 1..w.f.len() {
            if w.f[i] == w.f[j] {
                return Err(Error::Invariant("replacement polynomials are not distinct".into()));
            }
        }
    }
    let prod = w.f.iter().fold(IntPoly::one(), |acc, q| acc.mul(q));
    if padic::fixed_divisor(&prod) != w.denominator() {
        return Err(Error::Invariant(
            "fixed divisor of ∏ f_i is not p^(N−1)".into(),
        ));
    }
    check_valuation_pattern(&w.f, &w.residues, &params.p, params.n, PatternMode::Ge)?;
    check_valuation_pattern(&w.f, &w.residues, &params.p, params.n, PatternMode::Eq)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn residue_system_small_primes() {
        assert_eq!(residue_system(&b(2)).unwrap(), vec![b(0), b(1)]);
        assert_eq!(residue_system(&b(3)).unwrap(), vec![b(0), b(4), b(2)]);
        let rs5 = residue_system(&b(5)).unwrap();
        for (i, a) in rs5.iter().enumerate() {
            assert_eq!(a.mod_floor(&b(5)), b(i as i64));
            assert!(a.mod_floor(&b(2)).is_zero() || i == 0 && a.is_zero());
            assert!(a.is_multiple_of(&b(2)));
            assert!(a.is_multiple_of(&b(3)));
        }
        // Smallest non-negative lifts of (i mod 5, 0 mod 6).
        assert_eq!(rs5, vec![b(0), b(6), b(12), b(18), b(24)]);
    }

    #[test]
    fn build_g_shapes() {
        let params = ConstructionParams::new(2, b(2)).unwrap();
        let g = build_g(&params, &residue_system(&b(2)).unwrap());
        assert_eq!(g, vec![IntPoly::x(), IntPoly::from_i64(&[1, -2, 1])]);

        let params = ConstructionParams::new(3, b(2)).unwrap();
        let g = build_g(&params, &residue_system(&b(2)).unwrap());
        assert_eq!(
            g,
            vec![
                IntPoly::from_i64(&[0, 0, 1]),
                IntPoly::from_i64(&[-1, 3, -3, 1])
            ]
        );

        let params = ConstructionParams::new(2, b(3)).unwrap();
        let g = build_g(&params, &residue_system(&b(3)).unwrap());
        assert_eq!(
            g,
            vec![
                IntPoly::x(),
                IntPoly::from_i64(&[-4, 1]),
                IntPoly::from_i64(&[4, -4, 1])
            ]
        );
    }

    #[test]
    fn replacement_modulus_values() {
        assert_eq!(replacement_modulus(2, 3), b(216));
        assert_eq!(replacement_modulus(3, 5), b(810_000));
        assert_eq!(replacement_modulus(2, 1), b(1));
    }

    #[test]
    fn replacement_example_x() {
        // g = [x] alone has d = 1, so M = 1; reproduce the documented case
        // M = 216, r = 5 by overriding both.
        let g = vec![IntPoly::x(), IntPoly::from_i64(&[1, -2, 1])];
        let (f, aux, certs) = irreducible_replacement(&g, 2, None).unwrap();
        // d = 3, so M = 216 and the auxiliary primes are 5 and 7.
        assert_eq!(aux, vec![b(5), b(7)]);
        assert_eq!(f[0], IntPoly::from_i64(&[1080, 1]));
        assert!(f[1].is_monic() && f[1].degree() == Some(2));
        // f₂ ≡ (x−1)² mod 216, middle coefficient ≡ 0 mod 49, constant term
        // of 7-adic valuation exactly 1.
        assert!(f[1].sub(&g[1]).content().unwrap().is_multiple_of(&b(216)));
        assert!(f[1].coeff(1).is_multiple_of(&b(49)));
        assert_eq!(
            padic::vp(&f[1].coeff(0), &b(7)).unwrap(),
            Valuation::Finite(1)
        );
        for c in &certs {
            assert_eq!(c.verdict, Verdict::Irreducible);
        }
    }

    #[test]
    fn valuation_pattern_detects_perturbation() {
        let params = ConstructionParams::new(2, b(2)).unwrap();
        let residues = residue_system(&b(2)).unwrap();
        let g = build_g(&params, &residues);
        assert!(check_valuation_pattern(&g, &residues, &b(2), 2, PatternMode::Ge).is_ok());
        assert!(check_valuation_pattern(&g, &residues, &b(2), 2, PatternMode::Eq).is_ok());

        let mut bad = g.clone();
        bad[0] = IntPoly::from_i64(&[1, 1]); // x + 1: v₂ at c = 2 is 0, not 1
        assert!(check_valuation_pattern(&bad, &residues, &b(2), 2, PatternMode::Eq).is_err());
    }

    #[test]
    fn other_prime_witness_examples() {
        let g = vec![IntPoly::x(), IntPoly::from_i64(&[1, -2, 1])];
        let z = other_prime_witness(&g, &b(5)).unwrap();
        assert!(!g[0].eval(&z).is_multiple_of(&b(5)));
        assert!(!g[1].eval(&z).is_multiple_of(&b(5)));
        assert_eq!(z, b(2));

        let w = construct_witness(&ConstructionParams::new(2, b(2)).unwrap(), None).unwrap();
        let z = other_prime_witness(&w.f, &b(3)).unwrap();
        for fi in &w.f {
            assert!(!fi.eval(&z).is_multiple_of(&b(3)));
        }
    }

    #[test]
    fn construct_small_instances() {
        for (n, p, fd) in [(2u32, 2i64, 2i64), (3, 2, 4), (2, 3, 3)] {
            let w = construct_witness(&ConstructionParams::new(n, b(p)).unwrap(), None).unwrap();
            let prod = w.f.iter().fold(IntPoly::one(), |acc, q| acc.mul(q));
            assert_eq!(padic::fixed_divisor(&prod), b(fd));
            validate_witness(&w).unwrap();
        }
    }

    #[test]
    fn validation_catches_tampering() {
        let mut w = construct_witness(&ConstructionParams::new(2, b(2)).unwrap(), None).unwrap();
        let mut coeffs = w.f[0].coeffs().to_vec();
        coeffs[0] += 1;
        w.f[0] = IntPoly::new(coeffs);
        assert!(validate_witness(&w).is_err());
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ConstructionParams::new(1, b(2)).is_err());
        assert!(ConstructionParams::new(2, b(4)).is_err());
    }
}
