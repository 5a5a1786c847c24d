//! Independent brute-force cross-checks for the factorization engine.
//!
//! The oracle deliberately shares no logic with [`crate::engine`] beyond raw
//! polynomial arithmetic: fixed divisors come from wide value sampling rather
//! than the gcd-of-consecutive-values formula, irreducibility is decided by
//! searching divisor pairs instead of the fixed-divisor product criterion,
//! and factorizations are enumerated as unrestricted ordered tuples which are
//! only grouped into essential classes at the end.  It is the slow path by
//! design and is used as ground truth in tests.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::engine::{FactorPart, Factorization, FactorizationReport, IvpElement};
use crate::poly::IntPoly;
use crate::{Error, Result};

/// Tuning for the sampling window and the enumeration cap.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Evaluation range for value-based checks; raised automatically to the
    /// degree of the largest polynomial tested.
    pub sample_radius: i64,
    /// Cap on descent nodes; exceeding it is an error, never truncation.
    pub max_nodes: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            sample_radius: 64,
            max_nodes: 50_000_000,
        }
    }
}

/// denom | num(a) for every a in the sample window.  Equivalent to true
/// membership in Int(ℤ) once the radius reaches deg(num).
pub fn sampled_integer_valuedness(num: &IntPoly, denom: &BigInt, cfg: &OracleConfig) -> bool {
    let radius = effective_radius(num, cfg);
    (-radius..=radius).all(|a| num.eval(&BigInt::from(a)).is_multiple_of(denom))
}

/// Fixed divisor as a wide gcd over the sample window.
pub fn sampled_fixed_divisor(num: &IntPoly, cfg: &OracleConfig) -> BigInt {
    let radius = effective_radius(num, cfg);
    let mut g = BigInt::zero();
    for a in -radius..=radius {
        g = g.gcd(&num.eval(&BigInt::from(a)));
        if g.is_one() {
            break;
        }
    }
    g
}

fn effective_radius(num: &IntPoly, cfg: &OracleConfig) -> i64 {
    cfg.sample_radius.max(num.degree().unwrap_or(0) as i64)
}

/// All positive divisors of n > 0, by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Per-call tables over all subvectors of the target exponent vector.
struct Tables {
    bounds: Vec<u32>,
    fd: Vec<BigInt>,
    irreducible: Vec<bool>,
}

impl Tables {
    fn rank(&self, v: &[u32]) -> usize {
        let mut r = 0usize;
        for (x, b) in v.iter().zip(&self.bounds) {
            r = r * (*b as usize + 1) + *x as usize;
        }
        r
    }

    fn build(basis: &[IntPoly], bounds: &[u32], cfg: &OracleConfig) -> Self {
        let size: usize = bounds.iter().map(|&b| b as usize + 1).product();
        let mut tables = Tables {
            bounds: bounds.to_vec(),
            fd: vec![BigInt::zero(); size],
            irreducible: vec![false; size],
        };
        for v in all_subvectors(bounds) {
            let mut num = IntPoly::one();
            for (f, &e) in basis.iter().zip(&v) {
                num = num.mul(&f.pow(e));
            }
            let r = tables.rank(&v);
            tables.fd[r] = sampled_fixed_divisor(&num, cfg);
        }
        for v in all_subvectors(bounds) {
            let r = tables.rank(&v);
            tables.irreducible[r] = tables.irreducible_by_split_search(&v);
        }
        tables
    }

    /// The element ∏ f^v / 𝔡(v) is reducible iff some proper split
    /// v = v₁ + v₂ admits denominators b₁ | 𝔡(v₁), b₂ | 𝔡(v₂) with
    /// b₁·b₂ = 𝔡(v).
    fn irreducible_by_split_search(&self, v: &[u32]) -> bool {
        if v.iter().all(|&e| e == 0) {
            return false;
        }
        let total = &self.fd[self.rank(v)];
        for v1 in all_subvectors(v) {
            if v1.iter().all(|&e| e == 0) || v1 == v {
                continue;
            }
            let v2: Vec<u32> = v.iter().zip(&v1).map(|(&t, &a)| t - a).collect();
            let fd1 = &self.fd[self.rank(&v1)];
            let fd2 = &self.fd[self.rank(&v2)];
            for b1 in divisors(fd1) {
                if !total.is_multiple_of(&b1) {
                    continue;
                }
                let b2 = total / &b1;
                if fd2.is_multiple_of(&b2) {
                    return false;
                }
            }
        }
        true
    }
}

/// All v with 0 ≤ v ≤ bound componentwise (the zero vector included).
fn all_subvectors(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; bound.len()]];
    let mut v = vec![0u32; bound.len()];
    loop {
        let mut j = 0;
        loop {
            if j == bound.len() {
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

/// Enumerates all factorizations of e^n into irreducibles by unrestricted
/// recursive descent over ordered factor tuples, then groups them into
/// essential classes by sorting.  Must agree with the engine.
pub fn brute_force_factorizations(
    e: &IvpElement,
    n: u32,
    cfg: &OracleConfig,
) -> Result<FactorizationReport> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let e = e.canonicalize();
    let target: Vec<u32> = e.expo.iter().map(|&v| v * n).collect();
    let target_denom = e.denom.pow(n);
    let tables = Tables::build(&e.basis, &target, cfg);

    let mut classes: BTreeSet<Vec<FactorPart>> = BTreeSet::new();
    let mut nodes = 0u64;
    let mut stack: Vec<FactorPart> = Vec::new();
    descend(
        &tables,
        &target,
        &BigInt::one(),
        &target_denom,
        &mut stack,
        &mut classes,
        &mut nodes,
        cfg.max_nodes,
    )?;

    let mut factorizations: Vec<Factorization> = classes
        .into_iter()
        .map(|factors| Factorization {
            length: factors.len(),
            factors,
        })
        .collect();
    factorizations.sort();
    Ok(FactorizationReport {
        n,
        count: factorizations.len(),
        factorizations,
    })
}

#[allow(clippy::too_many_arguments)]
fn descend(
    tables: &Tables,
    remaining: &[u32],
    denom_acc: &BigInt,
    target_denom: &BigInt,
    stack: &mut Vec<FactorPart>,
    classes: &mut BTreeSet<Vec<FactorPart>>,
    nodes: &mut u64,
    max_nodes: u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > max_nodes {
        return Err(Error::BudgetExceeded { budget: max_nodes });
    }
    if remaining.iter().all(|&e| e == 0) {
        if denom_acc == target_denom {
            let mut canonical = stack.clone();
            canonical.sort_by(|a, b| b.cmp(a));
            classes.insert(canonical);
        }
        return Ok(());
    }
    for v in all_subvectors(remaining) {
        if v.iter().all(|&e| e == 0) {
            continue;
        }
        let fd = &tables.fd[tables.rank(&v)];
        for b in divisors(fd) {
            // A candidate with b < 𝔡(v) splits off the constant 𝔡(v)/b and
            // is never irreducible; only b = 𝔡(v) survives, and only if the
            // split search found nothing.
            if &b != fd || !tables.irreducible[tables.rank(&v)] {
                continue;
            }
            let next: Vec<u32> = remaining.iter().zip(&v).map(|(&r, &x)| r - x).collect();
            stack.push(FactorPart {
                expo: v.clone(),
                denominator: b.clone(),
            });
            descend(
                tables,
                &next,
                &(denom_acc * &b),
                target_denom,
                stack,
                classes,
                nodes,
                max_nodes,
            )?;
            stack.pop();
        }
    }
    Ok(())
}
