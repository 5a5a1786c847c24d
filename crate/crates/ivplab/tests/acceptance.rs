//! Acceptance suite: one test per criterion, exact checks, zero tolerance.
//!
//! Grid instances: (N, p) ∈ {(2,2), (3,2), (4,2), (2,3), (3,3)}.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ivplab::construct::{self, ConstructionParams, ConstructionWitness};
use ivplab::engine::{self, IvpElement, SquareFreeVerdict};
use ivplab::ffpoly::{self, Verdict};
use ivplab::oracle::{self, OracleConfig};
use ivplab::padic;
use ivplab::poly::IntPoly;

const GRID: [(u32, i64); 5] = [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)];

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

fn witness(n: u32, p: i64) -> ConstructionWitness {
    construct::construct_witness(&ConstructionParams::new(n, b(p)).unwrap(), None).unwrap()
}

fn product(polys: &[IntPoly]) -> IntPoly {
    polys.iter().fold(IntPoly::one(), |acc, f| acc.mul(f))
}

#[test]
fn criterion_1_theorem_grid() {
    for (n, p) in GRID {
        let w = witness(n, p);
        let v = engine::verify_theorem(&w, n, engine::DEFAULT_BUDGET).unwrap();
        assert!(
            v.pass && v.irreducible,
            "({}, {}) failed: {:?}",
            n,
            p,
            v.failures
        );
        for (k, count) in &v.counts {
            let expected = if *k < n { 1 } else { 2 };
            assert_eq!(*count, expected, "count at n = {} for ({}, {})", k, n, p);
        }
        // Length multiset {2, N} at n = N, and the explicit form is present.
        let final_report = v.reports.last().unwrap();
        let mut lengths: Vec<usize> =
            final_report.factorizations.iter().map(|f| f.length).collect();
        lengths.sort();
        let mut expected = vec![2usize, n as usize];
        expected.sort();
        assert_eq!(lengths, expected);
        let predicted = engine::expected_length_two_factorization(&w).unwrap();
        assert!(final_report.factorizations.contains(&predicted));
        println!("criterion 1 ({}, {}): PASS", n, p);
    }
    println!("criterion 1 (theorem grid): PASS");
}

#[test]
fn criterion_2_fixed_divisor_identity() {
    for (n, p) in GRID {
        let w = witness(n, p);
        let expected = b(p).pow(n - 1);
        assert_eq!(padic::fixed_divisor(&product(&w.g)), expected);
        assert_eq!(padic::fixed_divisor(&product(&w.f)), expected);
    }
    println!("criterion 2 (fixed divisor p^(N-1)): PASS");
}

#[test]
fn criterion_3_replacement_conditions() {
    for (n, p) in GRID {
        let w = witness(n, p);
        for cert in &w.certificates {
            assert_eq!(cert.verdict, Verdict::Irreducible);
        }
        for i in 0..w.f.len() {
            assert!(w.f[i].is_monic());
            assert_eq!(w.f[i].degree(), w.g[i].degree());
            for j in i + 1..w.f.len() {
                assert_ne!(w.f[i], w.f[j]);
            }
            // f_i ≡ g_i mod M, coefficientwise
            let diff = w.f[i].sub(&w.g[i]);
            if !diff.is_zero() {
                assert!(diff.content().unwrap().is_multiple_of(&w.modulus));
            }
        }
        // Valuation-transfer spot checks, min-capped at N, on 201 sampled
        // points per prime r ≤ d (≥ 64 required).
        construct::check_valuation_transfer(&w, 100).unwrap();
    }
    println!("criterion 3 (replacement conditions): PASS");
}

#[test]
fn criterion_4_quintessential_and_two_block() {
    for (n, p) in GRID {
        let w = witness(n, p);
        let q = w.f.len();
        let pp = b(p);
        let e = n - 1;
        let ws = engine::quintessential_witnesses(&w).unwrap();
        assert_eq!(ws.len(), q - 1);
        for (j, wj) in ws.iter().enumerate() {
            for (i, fi) in w.f.iter().enumerate() {
                let expected = if i == j { e as u64 } else { 0 };
                assert_eq!(
                    padic::vp(&fi.eval(wj), &pp).unwrap(),
                    padic::Valuation::Finite(expected),
                    "v_p(f_{}({})) for ({}, {})",
                    i + 1,
                    wj,
                    n,
                    p
                );
            }
        }
        // Every enumerated factorization of F^k (k ≤ N) refines to the
        // two-block form with a₁+a₂ = b₁+b₂ = k.
        let elem = w.element().canonicalize();
        for k in 1..=n {
            let report =
                engine::count_essential_factorizations(&elem, k, engine::DEFAULT_BUDGET).unwrap();
            for fac in &report.factorizations {
                let refinement = engine::two_block_refinement(fac, q, k, &pp, e);
                let Some(((a1, b1), (a2, b2))) = refinement else {
                    panic!("no two-block refinement for F^{} of ({}, {})", k, n, p);
                };
                assert_eq!(a1 + a2, k);
                assert_eq!(b1 + b2, k);
            }
        }
    }
    println!("criterion 4 (quintessential witnesses + two-block form): PASS");
}

#[test]
fn criterion_5_oracle_equivalence_grid() {
    let cfg = OracleConfig::default();
    for (n, p) in GRID {
        let w = witness(n, p);
        let elem = w.element().canonicalize();
        for k in 1..=n {
            let eng =
                engine::count_essential_factorizations(&elem, k, engine::DEFAULT_BUDGET).unwrap();
            let ora = oracle::brute_force_factorizations(&elem, k, &cfg).unwrap();
            assert_eq!(eng, ora, "engine/oracle disagree at ({}, {}), n = {}", n, p, k);
        }
    }
    println!("criterion 5a (oracle equivalence on the grid): PASS");
}

/// Pool of small distinct monic irreducible polynomials for random elements.
fn basis_pool() -> Vec<IntPoly> {
    vec![
        IntPoly::x(),
        IntPoly::from_i64(&[-1, 1]),
        IntPoly::from_i64(&[1, 1]),
        IntPoly::from_i64(&[-2, 1]),
        IntPoly::from_i64(&[2, 1]),
        IntPoly::from_i64(&[-3, 1]),
        IntPoly::from_i64(&[1, 0, 1]),
        IntPoly::from_i64(&[1, 1, 1]),
        IntPoly::from_i64(&[1, -1, 1]),
        IntPoly::from_i64(&[-2, 0, 1]),
    ]
}

#[test]
fn criterion_5_oracle_equivalence_random() {
    let cfg = OracleConfig::default();
    let pool = basis_pool();
    let mut rng = StdRng::seed_from_u64(0x5eed_cafe);
    let mut accepted = 0;
    while accepted < 100 {
        let q = rng.gen_range(1..=3usize);
        let mut indices: Vec<usize> = (0..pool.len()).collect();
        for i in 0..q {
            let j = rng.gen_range(i..pool.len());
            indices.swap(i, j);
        }
        let basis: Vec<IntPoly> = indices[..q].iter().map(|&i| pool[i].clone()).collect();
        // exponents ≤ 3, small total so the oracle's ordered descent stays
        // within reach
        let mut expo: Vec<u32> = Vec::new();
        let mut total = 0u32;
        for _ in 0..q {
            let e = rng.gen_range(0..=3u32.min(4 - total.min(4)));
            total += e;
            expo.push(e);
        }
        if expo.iter().all(|&e| e == 0) {
            continue;
        }
        let mut num = IntPoly::one();
        for (f, &e) in basis.iter().zip(&expo) {
            num = num.mul(&f.pow(e));
        }
        // Image-primitive by construction; denominators ≤ 36 as required.
        let denom = padic::fixed_divisor(&num);
        if denom > b(36) {
            continue;
        }
        let elem = IvpElement::new(basis, expo, denom).canonicalize();
        for n in 1..=2u32 {
            let eng =
                engine::count_essential_factorizations(&elem, n, engine::DEFAULT_BUDGET).unwrap();
            let ora = oracle::brute_force_factorizations(&elem, n, &cfg).unwrap();
            assert_eq!(eng, ora, "disagreement on random element {:?}", elem);
        }
        accepted += 1;
    }
    println!("criterion 5b (oracle equivalence on 100 random elements): PASS");
}

#[test]
fn criterion_6_property_suites() {
    let mut rng = StdRng::seed_from_u64(0x9b1d_0557);
    let random_poly = |rng: &mut StdRng, max_deg: usize, bound: i64| -> IntPoly {
        loop {
            let deg = rng.gen_range(0..=max_deg);
            let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-bound..=bound)).collect();
            let f = IntPoly::from_i64(&coeffs);
            if !f.is_zero() {
                return f;
            }
        }
    };

    // Fixed-divisor gcd formula vs wide sampling.
    for _ in 0..500 {
        let f = random_poly(&mut rng, 8, 50);
        let mut g = BigInt::from(0);
        for a in -100i64..=100 {
            g = g.gcd(&f.eval(&b(a)));
        }
        assert_eq!(g, padic::fixed_divisor(&f));
    }

    // Submultiplicativity 𝔡(g)·𝔡(h) | 𝔡(gh).
    for _ in 0..500 {
        let g = random_poly(&mut rng, 6, 30);
        let h = random_poly(&mut rng, 6, 30);
        let prod = padic::fixed_divisor(&g.mul(&h));
        assert!(prod.is_multiple_of(&(padic::fixed_divisor(&g) * padic::fixed_divisor(&h))));
    }

    // Rabin vs exhaustive factor search for every monic f over 𝔽₂, 𝔽₃,
    // deg ≤ 4.
    for p in [2u64, 3] {
        for deg in 1usize..=4 {
            let total = p.pow(deg as u32);
            for mask in 0..total {
                let mut coeffs = Vec::with_capacity(deg + 1);
                let mut m = mask;
                for _ in 0..deg {
                    coeffs.push(b((m % p) as i64));
                    m /= p;
                }
                coeffs.push(b(1));
                let fint = IntPoly::new(coeffs);
                let f = ffpoly::reduce_mod(&fint, &b(p as i64)).unwrap();
                assert_eq!(
                    ffpoly::is_irreducible_mod_p(&f).unwrap(),
                    !has_proper_factor(&fint, p, deg),
                    "Rabin disagrees for {} mod {}",
                    fint,
                    p
                );
            }
        }
    }

    // Canonicalization idempotence on random elements.
    let pool = basis_pool();
    for _ in 0..500 {
        let q = rng.gen_range(1..=4usize);
        let basis: Vec<IntPoly> = (0..q)
            .map(|_| pool[rng.gen_range(0..pool.len())].clone())
            .collect();
        let expo: Vec<u32> = (0..q).map(|_| rng.gen_range(0..=3)).collect();
        let e = IvpElement {
            basis,
            expo,
            denom: b(rng.gen_range(1..=12)),
            sign: if rng.gen_bool(0.5) { 1 } else { -1 },
        };
        let once = e.canonicalize();
        assert_eq!(once, once.canonicalize());
    }

    // Product reconstruction of every emitted factorization on the grid.
    for (n, p) in GRID {
        let w = witness(n, p);
        let elem = w.element().canonicalize();
        for k in 1..=n {
            let report =
                engine::count_essential_factorizations(&elem, k, engine::DEFAULT_BUDGET).unwrap();
            let expected_num = elem.numerator().pow(k);
            let expected_denom = elem.denom.pow(k);
            for fac in &report.factorizations {
                let mut num = IntPoly::one();
                let mut denom = BigInt::from(1);
                for part in &fac.factors {
                    let mut part_num = IntPoly::one();
                    for (f, &e) in elem.basis.iter().zip(&part.expo) {
                        part_num = part_num.mul(&f.pow(e));
                    }
                    // Every factor is image-primitive: 𝔡(numerator) = denom.
                    assert_eq!(padic::fixed_divisor(&part_num), part.denominator);
                    num = num.mul(&part_num);
                    denom *= &part.denominator;
                }
                assert_eq!(num, expected_num);
                assert_eq!(denom, expected_denom);
            }
        }
    }

    println!("criterion 6 (500-case property suites): PASS");
}

/// Exhaustive search for a monic factor of degree in [1, deg/2] over 𝔽_p.
fn has_proper_factor(f: &IntPoly, p: u64, deg: usize) -> bool {
    let fp = ffpoly::reduce_mod(f, &b(p as i64)).unwrap();
    for d in 1..=deg / 2 {
        let total = p.pow(d as u32);
        for mask in 0..total {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut m = mask;
            for _ in 0..d {
                coeffs.push(b((m % p) as i64));
                m /= p;
            }
            coeffs.push(b(1));
            let g = ffpoly::reduce_mod(&IntPoly::new(coeffs), &b(p as i64)).unwrap();
            if fp.div_rem(&g).unwrap().1.is_zero() {
                return true;
            }
        }
    }
    false
}

#[test]
fn criterion_7_square_free_criterion() {
    // N=2 witnesses: square-free denominator p, two classes at n = 2.
    for p in [2i64, 3] {
        let w = witness(2, p);
        let elem = w.element().canonicalize();
        let reports: Vec<_> = (1..=3)
            .map(|n| {
                engine::count_essential_factorizations(&elem, n, engine::DEFAULT_BUDGET).unwrap()
            })
            .collect();
        assert_eq!(
            engine::verify_square_free_criterion(&elem, &reports).unwrap(),
            SquareFreeVerdict::NotAbsolutelyIrreducible
        );
    }

    // Binomial x(x−1)/2: the oracle is ground truth for the counts, and the
    // criterion verdict must match them.
    let elem = IvpElement::new(
        vec![IntPoly::x(), IntPoly::from_i64(&[-1, 1])],
        vec![1, 1],
        b(2),
    );
    let cfg = OracleConfig::default();
    let oracle_reports: Vec<_> = (1..=3)
        .map(|n| oracle::brute_force_factorizations(&elem, n, &cfg).unwrap())
        .collect();
    let expected = if oracle_reports.iter().any(|r| r.count > 1) {
        SquareFreeVerdict::NotAbsolutelyIrreducible
    } else {
        SquareFreeVerdict::AbsolutelyIrreducible
    };
    let engine_reports: Vec<_> = (1..=3)
        .map(|n| engine::count_essential_factorizations(&elem, n, engine::DEFAULT_BUDGET).unwrap())
        .collect();
    assert_eq!(engine_reports, oracle_reports);
    assert_eq!(
        engine::verify_square_free_criterion(&elem, &engine_reports).unwrap(),
        expected
    );
    println!("criterion 7 (square-free denominator criterion): PASS");
}
