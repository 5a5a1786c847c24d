//! Canonical elements of Int(ℤ) and exhaustive factorization enumeration.
//!
//! Elements live in the monadic submonoid generated by a fixed basis of
//! distinct monic irreducible polynomials: every element is
//! `± ∏ basis_i^{expo_i} / denom` with `denom | 𝔡(numerator)`.
//!
//! Factorizations of an image-primitive element are enumerated exactly.  The
//! justification chain, asserted at runtime on every instance: units of
//! Int(ℤ) are ±1; 𝔡(G)·𝔡(H) divides 𝔡(GH), so every factor of an
//! image-primitive element is image-primitive; by Gauss's lemma each factor's
//! numerator is a sub-product of the basis times a constant, and canonicity
//! kills the constant.  A factorization is therefore a multiset partition
//! {v_j} of the exponent vector with ∏_j 𝔡(∏ f^{v_j}) = denom^n, each part
//! irreducible.  Parts are generated in non-increasing lexicographic order so
//! that each essential class is emitted exactly once.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::construct::ConstructionWitness;
use crate::padic::{self, Valuation};
use crate::poly::IntPoly;
use crate::{Error, Result};

/// Multiplicities of the basis polynomials inside a numerator product.
pub type ExponentVector = Vec<u32>;

/// Default cap on partition nodes explored in one enumeration run.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// An element of Int(ℤ) in reduced form: sign · ∏ basis_i^{expo_i} / denom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IvpElement {
    pub basis: Vec<IntPoly>,
    pub expo: ExponentVector,
    pub denom: BigInt,
    pub sign: i8,
}

impl IvpElement {
    /// A new element with positive sign.  Panics if lengths disagree or the
    /// denominator is not positive; membership is the caller's invariant and
    /// is checked by [`is_integer_valued`].
    pub fn new(basis: Vec<IntPoly>, expo: ExponentVector, denom: BigInt) -> Self {
        assert_eq!(basis.len(), expo.len());
        assert!(denom > BigInt::from(0));
        IvpElement {
            basis,
            expo,
            denom,
            sign: 1,
        }
    }

    /// The expanded numerator, sign included.
    pub fn numerator(&self) -> IntPoly {
        let mut num = IntPoly::one();
        for (f, &e) in self.basis.iter().zip(&self.expo) {
            num = num.mul(&f.pow(e));
        }
        if self.sign < 0 {
            num.neg()
        } else {
            num
        }
    }

    pub fn is_unit(&self) -> bool {
        self.expo.iter().all(|&e| e == 0) && self.denom.is_one()
    }

    /// Canonical form: sign +1 (units of Int(ℤ) are ±1 and the basis is
    /// monic), basis sorted by (degree, coefficients), duplicates merged,
    /// zero exponents dropped.  Idempotent.
    pub fn canonicalize(&self) -> IvpElement {
        let mut paired: Vec<(IntPoly, u32)> = Vec::new();
        for (f, &e) in self.basis.iter().zip(&self.expo) {
            if e == 0 {
                continue;
            }
            if let Some(slot) = paired.iter_mut().find(|(g, _)| g == f) {
                slot.1 += e;
            } else {
                paired.push((f.clone(), e));
            }
        }
        paired.sort_by(|(a, _), (b, _)| {
            a.degree()
                .cmp(&b.degree())
                .then_with(|| a.coeffs().cmp(b.coeffs()))
        });
        let (basis, expo) = paired.into_iter().unzip();
        IvpElement {
            basis,
            expo,
            denom: self.denom.clone(),
            sign: 1,
        }
    }
}

/// Membership criterion: num/denom ∈ Int(ℤ) iff denom | 𝔡(num).
pub fn is_integer_valued(num: &IntPoly, denom: &BigInt) -> bool {
    padic::fixed_divisor(num).is_multiple_of(denom)
}

/// True iff 𝔡(numerator) equals the denominator exactly.
pub fn is_image_primitive(e: &IvpElement) -> bool {
    padic::fixed_divisor(&e.numerator()) == e.denom
}

/// Shared basis plus a fixed-divisor memo keyed by exponent vector.
pub struct MonadicContext {
    basis: Vec<IntPoly>,
    fd_cache: HashMap<ExponentVector, BigInt>,
}

impl MonadicContext {
    pub fn new(basis: Vec<IntPoly>) -> Self {
        MonadicContext {
            basis,
            fd_cache: HashMap::new(),
        }
    }

    pub fn basis(&self) -> &[IntPoly] {
        &self.basis
    }

    pub fn numerator(&self, expo: &[u32]) -> IntPoly {
        let mut num = IntPoly::one();
        for (f, &e) in self.basis.iter().zip(expo) {
            num = num.mul(&f.pow(e));
        }
        num
    }

    pub fn element(&self, expo: &[u32], denom: BigInt) -> IvpElement {
        IvpElement::new(self.basis.clone(), expo.to_vec(), denom)
    }

    /// 𝔡(∏ basis^expo), memoized.
    pub fn fixed_divisor(&mut self, expo: &[u32]) -> BigInt {
        if let Some(d) = self.fd_cache.get(expo) {
            return d.clone();
        }
        let d = padic::fixed_divisor(&self.numerator(expo));
        self.fd_cache.insert(expo.to_vec(), d.clone());
        d
    }

    /// Irreducibility of the image-primitive element ∏ basis^expo / 𝔡.
    /// Reducible iff some proper bipartition expo = v₁ + v₂ attains
    /// 𝔡(v₁)·𝔡(v₂) = 𝔡(expo).
    pub fn is_irreducible_expo(&mut self, expo: &[u32]) -> bool {
        if expo.iter().all(|&e| e == 0) {
            return false;
        }
        let total = self.fixed_divisor(expo);
        let mut v1 = vec![0u32; expo.len()];
        loop {
            // next subvector in mixed radix
            let mut i = 0;
            loop {
                if i == expo.len() {
                    return true;
                }
                v1[i] += 1;
                if v1[i] <= expo[i] {
                    break;
                }
                v1[i] = 0;
                i += 1;
            }
            if v1 == expo {
                continue;
            }
            let v2: Vec<u32> = expo.iter().zip(&v1).map(|(&t, &a)| t - a).collect();
            if self.fixed_divisor(&v1) * self.fixed_divisor(&v2) == total {
                return false;
            }
        }
    }
}

/// Decides irreducibility of a canonical element.  Non-image-primitive
/// non-constant inputs are reducible (e = 𝔡/denom · image-primitive part);
/// units are not irreducible.
pub fn is_irreducible_ivp(e: &IvpElement) -> bool {
    let e = e.canonicalize();
    if e.is_unit() {
        return false;
    }
    if !is_image_primitive(&e) {
        return false;
    }
    let mut ctx = MonadicContext::new(e.basis.clone());
    ctx.is_irreducible_expo(&e.expo)
}

/// One irreducible factor: exponent vector plus its denominator (= its fixed
/// divisor).  Basis polynomials are referenced by index into the context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactorPart {
    pub expo: ExponentVector,
    #[serde(with = "crate::json::big_dec")]
    pub denominator: BigInt,
}

/// One factorization into irreducibles, parts in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factorization {
    pub factors: Vec<FactorPart>,
    pub length: usize,
}

/// All essentially different factorizations of e^n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub n: u32,
    pub count: usize,
    pub factorizations: Vec<Factorization>,
}

struct Enumerator<'a> {
    ctx: &'a mut MonadicContext,
    budget: u64,
    nodes: u64,
    target_fd: BigInt,
    out: Vec<Factorization>,
}

impl Enumerator<'_> {
    fn run(&mut self, target: &[u32]) -> Result<()> {
        let max_part = target.to_vec();
        self.descend(target.to_vec(), max_part, BigInt::one(), &mut Vec::new())
    }

    fn descend(
        &mut self,
        remaining: Vec<u32>,
        max_part: Vec<u32>,
        fd_acc: BigInt,
        parts: &mut Vec<FactorPart>,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        if remaining.iter().all(|&e| e == 0) {
            if fd_acc == self.target_fd {
                self.out.push(Factorization {
                    factors: parts.clone(),
                    length: parts.len(),
                });
            }
            return Ok(());
        }
        // ∏ 𝔡 over any split of the remainder divides 𝔡(remainder), so the
        // still-needed quotient must divide it too.
        let (needed, rem) = self.target_fd.div_rem(&fd_acc);
        if !rem.eq(&BigInt::from(0)) {
            return Ok(());
        }
        if !self.ctx.fixed_divisor(&remaining).is_multiple_of(&needed) {
            return Ok(());
        }
        for part in subvectors_descending(&remaining) {
            if part > max_part {
                continue;
            }
            if !self.ctx.is_irreducible_expo(&part) {
                continue;
            }
            let part_fd = self.ctx.fixed_divisor(&part);
            let next_acc = &fd_acc * &part_fd;
            if !self.target_fd.is_multiple_of(&next_acc) {
                continue;
            }
            let next_remaining: Vec<u32> = remaining
                .iter()
                .zip(&part)
                .map(|(&r, &v)| r - v)
                .collect();
            parts.push(FactorPart {
                expo: part.clone(),
                denominator: part_fd,
            });
            self.descend(next_remaining, part.clone(), next_acc, parts)?;
            parts.pop();
        }
        Ok(())
    }
}

/// All nonzero v with 0 ≤ v ≤ bound componentwise, in descending lex order.
fn subvectors_descending(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut v = vec![0u32; bound.len()];
    loop {
        // mixed-radix increment
        let mut j = 0;
        loop {
            if j == bound.len() {
                out.sort_by(|a: &Vec<u32>, b: &Vec<u32>| b.cmp(a));
                return out;
            }
            v[j] += 1;
            if v[j] <= bound[j] {
                break;
            }
            v[j] = 0;
            j += 1;
        }
        out.push(v.clone());
    }
}

/// Enumerates all essentially different factorizations of e^n into
/// irreducibles.  `e` must be canonical and image-primitive.
pub fn count_essential_factorizations(
    e: &IvpElement,
    n: u32,
    budget: u64,
) -> Result<FactorizationReport> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let e = e.canonicalize();
    if !is_image_primitive(&e) {
        return Err(Error::InvalidInput(
            "factorization enumeration requires an image-primitive element".into(),
        ));
    }
    let target: Vec<u32> = e.expo.iter().map(|&v| v * n).collect();
    let target_fd = e.denom.pow(n);
    let mut ctx = MonadicContext::new(e.basis.clone());
    let mut enumerator = Enumerator {
        ctx: &mut ctx,
        budget,
        nodes: 0,
        target_fd: target_fd.clone(),
        out: Vec::new(),
    };
    enumerator.run(&target)?;
    let mut factorizations = enumerator.out;
    factorizations.sort();
    // Product reconstruction: every emitted factorization reproduces e^n
    // coefficientwise, and no constant prime factor can appear.
    let expected_num = ctx.numerator(&target);
    for fac in &factorizations {
        let mut num = IntPoly::one();
        let mut den = BigInt::one();
        for part in &fac.factors {
            num = num.mul(&ctx.numerator(&part.expo));
            den *= &part.denominator;
            if part.expo.iter().all(|&v| v == 0) {
                return Err(Error::Invariant(
                    "constant factor emitted for an image-primitive target".into(),
                ));
            }
        }
        if num != expected_num || den != target_fd {
            return Err(Error::Invariant(
                "emitted factorization does not reproduce the target".into(),
            ));
        }
    }
    Ok(FactorizationReport {
        n,
        count: factorizations.len(),
        factorizations,
    })
}

/// The length-2 factorization predicted for F^N:
/// `[(∏_{i<q} f_i^N) · f_q^{N−1} / p^{N(N−1)}] · f_q`.
pub fn expected_length_two_factorization(w: &ConstructionWitness) -> Result<Factorization> {
    let q = w.f.len();
    let n = w.params.n;
    let mut big_expo = vec![n; q];
    big_expo[q - 1] = n - 1;
    let big_denom = w.params.p.pow(n * (n - 1));
    let mut last_expo = vec![0u32; q];
    last_expo[q - 1] = 1;

    let mut ctx = MonadicContext::new(w.f.clone());
    for (expo, denom, label) in [
        (&big_expo, big_denom.clone(), "length-2 cofactor"),
        (&last_expo, BigInt::one(), "f_q"),
    ] {
        let num = ctx.numerator(expo);
        if !is_integer_valued(&num, &denom) {
            return Err(Error::Invariant(format!("{} is not integer-valued", label)));
        }
        if ctx.fixed_divisor(expo) != denom {
            return Err(Error::Invariant(format!("{} is not image-primitive", label)));
        }
        if !ctx.is_irreducible_expo(expo) {
            return Err(Error::Invariant(format!("{} is not irreducible", label)));
        }
    }
    // Product check against F^N.
    let f_pow = ctx.numerator(&vec![n; q]);
    let prod = ctx.numerator(&big_expo).mul(&ctx.numerator(&last_expo));
    if prod != f_pow || &big_denom * BigInt::one() != w.denominator().pow(n) {
        return Err(Error::Invariant(
            "predicted length-2 factorization does not multiply to F^N".into(),
        ));
    }
    let mut factors = vec![
        FactorPart {
            expo: big_expo,
            denominator: big_denom,
        },
        FactorPart {
            expo: last_expo,
            denominator: BigInt::one(),
        },
    ];
    // Parts in non-increasing order, matching the enumerator's emission.
    factors.sort_by(|a, b| b.cmp(a));
    Ok(Factorization {
        length: factors.len(),
        factors,
    })
}

/// The quintessential witnesses w_1, …, w_{q−1}: points where f_j absorbs the
/// full p-valuation e = N−1 and every other f_i has valuation 0.  Tries
/// w_j = a_j + p first, then scans a_j + p·t with p ∤ t.
pub fn quintessential_witnesses(w: &ConstructionWitness) -> Result<Vec<BigInt>> {
    let q = w.f.len();
    let p = &w.params.p;
    let e = w.params.n as u64 - 1;
    let verify = |j: usize, c: &BigInt| -> Result<bool> {
        for (i, fi) in w.f.iter().enumerate() {
            let expected = if i == j { e } else { 0 };
            if padic::vp(&fi.eval(c), p)? != Valuation::Finite(expected) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut out = Vec::with_capacity(q - 1);
    for j in 0..q - 1 {
        let a = &w.residues[j];
        let first = a + p;
        if verify(j, &first)? {
            out.push(first);
            continue;
        }
        let mut found = None;
        for t in 1..=1024u64 {
            if BigInt::from(t).is_multiple_of(p) {
                continue;
            }
            let c = a + p * BigInt::from(t);
            if verify(j, &c)? {
                found = Some(c);
                break;
            }
        }
        match found {
            Some(c) => out.push(c),
            None => {
                return Err(Error::ScanExhausted(format!(
                    "no quintessential witness for f_{} within 1024 candidates",
                    j + 1
                )))
            }
        }
    }
    Ok(out)
}

/// Verdict of the square-free-denominator criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SquareFreeVerdict {
    AbsolutelyIrreducible,
    NotAbsolutelyIrreducible,
    Inapplicable,
}

/// For an irreducible element with square-free denominator, unique
/// factorization of the square and cube already decides absolute
/// irreducibility.  Non-square-free denominators are out of the criterion's
/// reach.
pub fn verify_square_free_criterion(
    e: &IvpElement,
    reports: &[FactorizationReport],
) -> Result<SquareFreeVerdict> {
    if !padic::is_square_free(&e.denom)? {
        return Ok(SquareFreeVerdict::Inapplicable);
    }
    let count_at = |n: u32| -> Result<usize> {
        reports
            .iter()
            .find(|r| r.n == n)
            .map(|r| r.count)
            .ok_or_else(|| Error::InvalidInput(format!("missing report for n = {}", n)))
    };
    let c2 = count_at(2)?;
    let c3 = count_at(3)?;
    if c2 > 1 || c3 > 1 {
        Ok(SquareFreeVerdict::NotAbsolutelyIrreducible)
    } else {
        Ok(SquareFreeVerdict::AbsolutelyIrreducible)
    }
}

/// Tries to split a factorization of F^n into two blocks whose exponent sums
/// have the shape (a·1, …, a·1, b) on the first q−1 coordinates, with
/// a₁ + a₂ = b₁ + b₂ = n and block denominators p^{e·a_i}.
pub fn two_block_refinement(
    fac: &Factorization,
    q: usize,
    n: u32,
    p: &BigInt,
    e: u32,
) -> Option<((u32, u32), (u32, u32))> {
    let k = fac.factors.len();
    let block_shape = |idxs: &[usize]| -> Option<(u32, u32)> {
        let mut sum = vec![0u32; q];
        let mut denom = BigInt::one();
        for &i in idxs {
            for (s, v) in sum.iter_mut().zip(&fac.factors[i].expo) {
                *s += v;
            }
            denom *= &fac.factors[i].denominator;
        }
        let a = sum[0..q - 1].iter().copied().max().unwrap_or(0);
        if sum[0..q - 1].iter().any(|&s| s != a) {
            return None;
        }
        let b = sum[q - 1];
        if denom != p.pow(e * a) {
            return None;
        }
        Some((a, b))
    };
    for mask in 0..(1u32 << k) {
        let block1: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let block2: Vec<usize> = (0..k).filter(|i| mask & (1 << i) == 0).collect();
        let (Some((a1, b1)), Some((a2, b2))) = (block_shape(&block1), block_shape(&block2))
        else {
            continue;
        };
        if a1 + a2 == n && b1 + b2 == n {
            return Some(((a1, b1), (a2, b2)));
        }
    }
    None
}

/// Outcome of the full theorem verification for one instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremVerification {
    pub n_param: u32,
    #[serde(with = "crate::json::big_dec")]
    pub p: BigInt,
    pub irreducible: bool,
    /// (n, essential class count) for n = 1..=n_max.
    pub counts: Vec<(u32, usize)>,
    pub reports: Vec<FactorizationReport>,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Runs the whole verification pipeline on a constructed witness:
/// irreducibility of F, unique factorization of F^n for n < N, exactly two
/// classes at n = N (lengths {2, N}, one matching the predicted form), the
/// two-block refinement for n ≤ N, and exploratory counts up to n_max.
pub fn verify_theorem(
    w: &ConstructionWitness,
    n_max: u32,
    budget: u64,
) -> Result<TheoremVerification> {
    let n_param = w.params.n;
    if n_max < n_param {
        return Err(Error::InvalidInput(format!(
            "n_max = {} must be at least N = {}",
            n_max, n_param
        )));
    }
    let f_elem = w.element().canonicalize();
    let q = w.f.len();
    let e = w.denominator_exponent;
    let mut failures = Vec::new();

    let irreducible = is_irreducible_ivp(&f_elem);
    if !irreducible {
        failures.push("F is not irreducible".into());
    }

    let mut counts = Vec::new();
    let mut reports = Vec::new();
    for n in 1..=n_max {
        let report = count_essential_factorizations(&f_elem, n, budget)?;
        counts.push((n, report.count));

        if n <= n_param {
            // Fact 2.3 structure: every factorization refines to two blocks.
            for fac in &report.factorizations {
                if two_block_refinement(fac, q, n, &w.params.p, e).is_none() {
                    failures.push(format!(
                        "factorization of F^{} does not refine to the two-block form: {:?}",
                        n, fac.factors
                    ));
                }
                // Denominators multiply to p^{n(N−1)} in every factorization.
                let mut prod = BigInt::one();
                for part in &fac.factors {
                    prod *= &part.denominator;
                }
                if prod != w.params.p.pow(n * e) {
                    failures.push(format!("denominator product wrong for F^{}", n));
                }
            }
        }

        if n < n_param {
            if report.count != 1 {
                failures.push(format!(
                    "F^{} has {} essential factorizations, expected 1",
                    n, report.count
                ));
            } else {
                let trivial: Vec<FactorPart> = (0..n)
                    .map(|_| FactorPart {
                        expo: f_elem.expo.clone(),
                        denominator: f_elem.denom.clone(),
                    })
                    .collect();
                if report.factorizations[0].factors != trivial {
                    failures.push(format!("the unique factorization of F^{} is not F···F", n));
                }
            }
        } else if n == n_param {
            if report.count != 2 {
                failures.push(format!(
                    "F^{} has {} essential factorizations, expected 2",
                    n, report.count
                ));
            }
            let mut lengths: Vec<usize> =
                report.factorizations.iter().map(|f| f.length).collect();
            lengths.sort();
            let mut expected_lengths = vec![2usize, n_param as usize];
            expected_lengths.sort();
            if lengths != expected_lengths {
                failures.push(format!(
                    "length multiset at n = N is {:?}, expected {:?}",
                    lengths, expected_lengths
                ));
            }
            let predicted = expected_length_two_factorization(w)?;
            if !report.factorizations.contains(&predicted) {
                failures.push("predicted length-2 factorization not among the classes".into());
            }
        }
        reports.push(report);
    }

    Ok(TheoremVerification {
        n_param,
        p: w.params.p.clone(),
        irreducible,
        counts,
        reports,
        pass: failures.is_empty(),
        failures,
    })
}
