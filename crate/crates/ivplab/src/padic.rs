//! p-adic valuations of integers and exact fixed divisors of polynomials.
//!
//! The fixed divisor 𝔡(f) is the positive generator of the ideal generated by
//! all values f(a), a ∈ ℤ.  It equals gcd(f(0), …, f(deg f)) because every
//! value f(a) is an integer linear combination of deg f + 1 consecutive
//! values via the finite-difference (binomial) expansion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::IntPoly;
use crate::{Error, Result};

/// A p-adic valuation: a non-negative integer, or infinity for the value 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinity,
}

impl Valuation {
    /// min(v, cap) as a plain integer; infinity caps to `cap`.
    pub fn capped(self, cap: u64) -> u64 {
        match self {
            Valuation::Finite(v) => v.min(cap),
            Valuation::Infinity => cap,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

/// Deterministic primality test.  Complete for 64-bit candidates; larger
/// inputs are rejected because every prime in this artifact is small.
pub fn is_prime(n: &BigInt) -> Result<bool> {
    if n.is_negative() {
        return Ok(false);
    }
    let n = n.to_u64().ok_or_else(|| Error::PrimeTooLarge(n.clone()))?;
    Ok(is_prime_u64(n))
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // Miller-Rabin with a base set that is deterministic for all u64.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'base: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    r
}

fn ensure_prime(p: &BigInt) -> Result<()> {
    if is_prime(p)? {
        Ok(())
    } else {
        Err(Error::NotPrime(p.clone()))
    }
}

/// Largest k with p^k | n; infinity for n = 0.  The sign of n is ignored.
pub fn vp(n: &BigInt, p: &BigInt) -> Result<Valuation> {
    ensure_prime(p)?;
    if n.is_zero() {
        return Ok(Valuation::Infinity);
    }
    let mut n = n.abs();
    let mut k = 0u64;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Ok(Valuation::Finite(k));
        }
        n = q;
        k += 1;
    }
}

/// Positive generator of the ideal (f(a) | a ∈ ℤ); 0 for the zero polynomial.
pub fn fixed_divisor(f: &IntPoly) -> BigInt {
    let Some(deg) = f.degree() else {
        return BigInt::zero();
    };
    let mut g = BigInt::zero();
    for a in 0..=deg {
        g = g.gcd(&f.eval(&BigInt::from(a)));
        if g.is_one() {
            break;
        }
    }
    g
}

/// v_p(𝔡(f)); equals the minimum of v_p(f(a)) over a ∈ ℤ.
pub fn vp_fixed_divisor(f: &IntPoly, p: &BigInt) -> Result<Valuation> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    vp(&fixed_divisor(f), p)
}

/// Prime support of 𝔡(f), exactly.
///
/// Primes not dividing content(f) are bounded by deg f, so trial division by
/// primes up to deg f followed by factoring the remaining content part is
/// complete.  Each returned prime is re-checked against that bound.
pub fn primes_dividing_fixed_divisor(f: &IntPoly) -> Result<Vec<BigInt>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let deg = f.degree().unwrap();
    let content = f.content()?;
    let mut d = fixed_divisor(f);
    let mut primes = Vec::new();
    for q in primes_up_to(deg.max(1) as u64) {
        let q = BigInt::from(q);
        if d.is_multiple_of(&q) {
            primes.push(q.clone());
            while d.is_multiple_of(&q) {
                d = d / &q;
            }
        }
    }
    // Whatever remains divides the content.
    for q in factor_small(&d)? {
        if !primes.contains(&q) {
            primes.push(q);
        }
    }
    for q in &primes {
        let in_content = content.is_multiple_of(q);
        let small = q.to_u64().map_or(false, |q| q <= deg as u64);
        if !in_content && !small {
            return Err(Error::Invariant(format!(
                "prime {} divides the fixed divisor of a polynomial of degree {} \
                 without dividing its content",
                q, deg
            )));
        }
    }
    primes.sort();
    Ok(primes)
}

/// Distinct prime factors of |n| (n ≠ 0), by trial division up to 10^6
/// followed by a deterministic primality check on the cofactor.
pub fn factor_small(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut primes = Vec::new();
    let mut q = 2u64;
    while q <= 1_000_000 {
        let qb = BigInt::from(q);
        if (&qb * &qb) > n {
            break;
        }
        if n.is_multiple_of(&qb) {
            primes.push(qb.clone());
            while n.is_multiple_of(&qb) {
                n = n / &qb;
            }
        }
        q = if q == 2 { 3 } else { q + 2 };
    }
    if !n.is_one() {
        if !is_prime(&n)? {
            return Err(Error::InvalidInput(format!(
                "cofactor {} is composite and beyond the trial-division bound",
                n
            )));
        }
        primes.push(n);
    }
    Ok(primes)
}

/// True iff |n| has no repeated prime factor.
pub fn is_square_free(n: &BigInt) -> Result<bool> {
    let n = n.abs();
    if n.is_zero() {
        return Ok(false);
    }
    let mut prod = BigInt::one();
    for p in factor_small(&n)? {
        prod *= p;
    }
    Ok(prod == n)
}

/// All primes ≤ n (sieve; n is always desk-scale here).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// Smallest prime strictly greater than n.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    loop {
        if is_prime_u64(c) {
            return c;
        }
        c += 1;
    }
}

/// Smallest non-negative solution of x ≡ r_i (mod m_i) for pairwise coprime
/// moduli.
pub fn crt(congruences: &[(BigInt, BigInt)]) -> Result<BigInt> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, mi) in congruences {
        if mi <= &BigInt::one() {
            if mi.is_one() {
                continue;
            }
            return Err(Error::InvalidInput(format!("bad modulus {}", mi)));
        }
        let g = m.gcd(mi);
        if !g.is_one() {
            return Err(Error::InvalidInput("CRT moduli are not coprime".into()));
        }
        // x + m*t ≡ r (mod mi)  =>  t ≡ (r − x) * m^{-1} (mod mi)
        let inv = mod_inverse(&m, mi).ok_or_else(|| {
            Error::Invariant(format!("{} has no inverse mod {}", m, mi))
        })?;
        let t = ((r - &x) * inv).mod_floor(mi);
        x += &m * t;
        m *= mi;
        x = x.mod_floor(&m);
    }
    Ok(x)
}

/// Inverse of a modulo m, if gcd(a, m) = 1.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}
