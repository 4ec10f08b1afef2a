//! Property tests for the invariants that cut across modules.

use num_bigint::BigUint;
use proptest::prelude::*;

use crate::algebra::{factor_trial, LaurentSeries, Poly, RatFunc};
use crate::coeff::CoeffField;
use crate::field::{FieldCtx, FieldElem};
use crate::identity::{multinomial_mod_p, thm2_sides, thm5_sides, Reading, Thm2Instance, Thm5Instance};
use crate::linear::{a_table, alpha_table, comp_inverse, compose, from_root_space, h_table, H_table, LinearSeries};

fn field(q: u64) -> FieldCtx {
    FieldCtx::of_order(q).unwrap()
}

fn poly_from(k: &FieldCtx, raw: &[u32]) -> Poly {
    let c: Vec<FieldElem> = raw.iter().map(|&v| k.elem(v % k.q())).collect();
    Poly::from_coeffs(k, &c)
}

/// `(q, m)` with `F_{q^m}` small enough to enumerate.
fn small_ext() -> impl Strategy<Value = (u64, u32)> {
    prop_oneof![Just((2u64, 3u32)), Just((2, 4)), Just((3, 2)), Just((3, 3)), Just((4, 2)), Just((3, 4))]
}

fn multinomial_exact(top: u64, parts: &[u64]) -> BigUint {
    let fact = |n: u64| (1..=n).fold(BigUint::from(1u32), |acc, i| acc * i);
    parts.iter().fold(fact(top), |acc, &p| acc / fact(p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(a in any::<u32>(), b in any::<u32>(), c in any::<u32>(), q in prop::sample::select(vec![8u64, 25, 81, 243, 256])) {
        let k = field(q);
        let (x, y, z) = (k.elem(a % k.q()), k.elem(b % k.q()), k.elem(c % k.q()));
        prop_assert_eq!(k.mul(x, k.add(y, z)), k.add(k.mul(x, y), k.mul(x, z)));
        prop_assert_eq!(k.mul(k.mul(x, y), z), k.mul(x, k.mul(y, z)));
        prop_assert_eq!(k.add(x, y), k.add(y, x));
        prop_assert_eq!(k.mul(x, y), k.mul(y, x));
    }

    #[test]
    fn laurent_reciprocal(num in prop::collection::vec(any::<u32>(), 1..8), den in prop::collection::vec(any::<u32>(), 1..8), prec in 5i64..60) {
        let k = field(3);
        let (n, d) = (poly_from(&k, &num), poly_from(&k, &den));
        prop_assume!(!n.is_zero() && !d.is_zero());
        let r = RatFunc::new(n, d).unwrap();
        let prod = LaurentSeries::expand(&r, prec).mul(&LaurentSeries::expand(&r.inv().unwrap(), prec));
        let one = LaurentSeries::one(&k, prod.prec());
        prop_assert!(prod.agrees_with(&one).is_ok());
    }

    #[test]
    fn factor_multiplies_back(raw in prop::collection::vec(any::<u32>(), 2..10), q in prop::sample::select(vec![2u64, 3])) {
        let k = field(q);
        let p = poly_from(&k, &raw);
        prop_assume!(p.deg() >= 1);
        let f = factor_trial(&p, 8).unwrap();
        prop_assert!(f.is_complete());
        prop_assert_eq!(f.expand(&k), p);
    }

    #[test]
    fn table_vanishing((q, m) in small_ext(), deg in 1usize..3, seed in any::<u64>()) {
        let k = field(q.pow(m));
        let f = LinearSeries::random(&k, q, deg, seed).unwrap();
        let n = 60;
        let (h, hh, al) = (h_table(&f, n).unwrap(), H_table(&f, n).unwrap(), alpha_table(&f, n).unwrap());
        let qd = (q as usize).pow(deg as u32);
        for i in 0..=n {
            if i % (q as usize - 1) != 0 {
                prop_assert!(k.is_zero(h.get(i).unwrap()), "h_{}", i);
                prop_assert!(k.is_zero(hh.get(i).unwrap()), "H_{}", i);
            }
            if i + 1 < qd {
                prop_assert!(k.is_zero(hh.get(i).unwrap()), "H_{}", i);
                prop_assert!(k.is_zero(al.get(i).unwrap()), "α_{}", i);
            }
        }
    }

    #[test]
    fn defining_products((q, m) in small_ext(), deg in 1usize..4, seed in any::<u64>()) {
        let k = field(q.pow(m));
        let f = LinearSeries::random(&k, q, deg, seed).unwrap();
        let n = 50;
        let (h, a) = (h_table(&f, n).unwrap(), a_table(&f, n).unwrap());
        let f0 = *f.f0();
        for big_n in 0..=n {
            // [z^{N+1}] of h·f and of a·(1 - f), h indexed from z^0, a from z^1
            let mut hf = k.zero();
            let mut af = *a.get(big_n).unwrap();
            for (i, fi) in f.coeffs().iter().enumerate() {
                let qi = (q as usize).pow(i as u32);
                if qi <= big_n + 1 {
                    hf = k.add(hf, k.mul(*fi, *h.get(big_n + 1 - qi).unwrap()));
                }
                if qi < big_n {
                    af = k.sub(af, k.mul(*fi, *a.get(big_n - qi).unwrap()));
                }
            }
            let expect_h = if big_n == 0 { f0 } else { k.zero() };
            let expect_a = if big_n == 1 { f0 } else { k.zero() };
            prop_assert_eq!(hf, expect_h, "h·f at z^{}", big_n + 1);
            prop_assert_eq!(af, expect_a, "a·(1-f) at z^{}", big_n);
        }
    }

    #[test]
    fn inverse_link((q, m) in small_ext(), seed in any::<u64>()) {
        let k = field(q.pow(m));
        let g0 = LinearSeries::random(&k, q, 4, seed).unwrap();
        let mut c = g0.coeffs().to_vec();
        c[0] = k.one();
        let f = LinearSeries::truncated(&k, q, c).unwrap();
        let g = comp_inverse(&f, 4).unwrap();
        let h = h_table(&f, (q as usize).pow(4) - 1).unwrap();
        for kk in 0..=4usize {
            prop_assert_eq!(h.get((q as usize).pow(kk as u32) - 1).unwrap(), &g.coeffs()[kk]);
        }
    }

    #[test]
    fn compose_round_trip(seed in any::<u64>(), deg in 1usize..5) {
        let k = field(9);
        let f = LinearSeries::random(&k, 3, deg, seed).unwrap().truncate(4).unwrap();
        let g = comp_inverse(&f, 4).unwrap();
        let z = LinearSeries::identity(&k, 3).unwrap().truncate(4).unwrap();
        prop_assert_eq!(compose(&f, &g, 4).unwrap(), z.clone());
        prop_assert_eq!(compose(&g, &f, 4).unwrap(), z);
    }

    #[test]
    fn root_space_power_sums((q, m) in small_ext(), d in 1usize..3, seed in any::<u64>()) {
        prop_assume!(d as u32 <= m);
        use rand::SeedableRng;
        let k = field(q.pow(m));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let basis: Vec<FieldElem> = (0..d).map(|_| k.random_nonzero(&mut rng)).collect();
        let mu = k.random(&mut rng);
        let Ok(r) = from_root_space(&k, q, &basis, Some(mu)) else { return Ok(()); };
        let roots = crate::linear::span(&k, q, &basis).unwrap();
        let hh = H_table(&r.series, 30).unwrap();
        let al = alpha_table(r.affine_series().unwrap(), 30).unwrap();
        for i in 0..=30i64 {
            let w: FieldElem = roots.iter().fold(k.zero(), |acc, &w| k.add(acc, k.pow(w, i).unwrap()));
            let v: FieldElem = roots.iter().fold(k.zero(), |acc, &w| k.add(acc, k.pow(k.add(mu, w), i).unwrap()));
            prop_assert_eq!(*hh.get(i as usize).unwrap(), k.neg(w), "H_{}", i);
            prop_assert_eq!(*al.get(i as usize).unwrap(), v, "α_{}", i);
        }
    }

    #[test]
    fn thm2_specializes_to_h_products(q in prop::sample::select(vec![2u64, 3]), d in 1usize..3, kj in prop::collection::vec(1u32..4, 1..4), seed in any::<u64>()) {
        prop_assume!(kj.len() as u64 <= q);
        use rand::SeedableRng;
        let k = field(q.pow(4));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let basis: Vec<FieldElem> = (0..d).map(|_| k.random_nonzero(&mut rng)).collect();
        let Ok(r) = from_root_space(&k, q, &basis, None) else { return Ok(()); };
        let big_b: Vec<Vec<FieldElem>> = basis.iter().map(|&b| kj.iter().map(|&e| CoeffField::frobenius(&k, &b, q, e)).collect()).collect();
        let inst = Thm2Instance { field: k.clone(), q, b: basis.clone(), big_b };
        let (lhs, rhs) = thm2_sides(&inst).unwrap();
        let n: usize = kj.iter().map(|&e| (q as usize).pow(e) - 1).sum();
        let hh = H_table(&r.series, n).unwrap();
        let prod = kj.iter().fold(k.one(), |acc, &e| k.mul(acc, *hh.get((q as usize).pow(e) - 1).unwrap()));
        let sign = if kj.len() % 2 == 1 { k.neg(k.one()) } else { k.one() };
        prop_assert_eq!(lhs, k.mul(sign, prod));
        prop_assert_eq!(rhs, k.mul(sign, *hh.get(n).unwrap()));
    }

    #[test]
    fn sides_symmetric_in_j(seed in any::<u64>(), d in 1usize..4, s in 2usize..4) {
        use rand::SeedableRng;
        let k = field(3u64.pow(6));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<FieldElem> = (0..d).map(|_| k.random(&mut rng)).collect();
        let big_b: Vec<Vec<FieldElem>> = (0..d).map(|_| (0..s).map(|_| k.random(&mut rng)).collect()).collect();
        let rev: Vec<Vec<FieldElem>> = big_b.iter().map(|r| r.iter().rev().copied().collect()).collect();
        let a = Thm2Instance { field: k.clone(), q: 3, b: b.clone(), big_b: big_b.clone() };
        let a_rev = Thm2Instance { big_b: rev.clone(), ..a.clone() };
        if let (Ok(x), Ok(y)) = (thm2_sides(&a), thm2_sides(&a_rev)) {
            prop_assert_eq!(x, y);
        }
        let mu = k.random(&mut rng);
        let m: Vec<FieldElem> = (0..s).map(|_| k.random(&mut rng)).collect();
        let c = Thm5Instance { field: k.clone(), q: 3, mu, m: m.clone(), b, big_b };
        let c_rev = Thm5Instance { m: m.iter().rev().copied().collect(), big_b: rev, ..c.clone() };
        if let (Ok(x), Ok(y)) = (thm5_sides(&c, Reading::Affine), thm5_sides(&c_rev, Reading::Affine)) {
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn multinomial_matches_bigint(p in prop::sample::select(vec![2u64, 3, 5, 7]), parts in prop::collection::vec(0u64..1000, 1..4)) {
        let top: u64 = parts.iter().sum();
        prop_assume!(top <= 3000);
        let exact = multinomial_exact(top, &parts) % BigUint::from(p);
        prop_assert_eq!(BigUint::from(multinomial_mod_p(p, top, &parts).unwrap()), exact);
    }
}

#[test]
fn thm5_specializes_to_alpha_products() {
    use rand::SeedableRng;
    let q = 3u64;
    let k = field(81);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let basis = vec![k.random_nonzero(&mut rng)];
        let mu = k.random(&mut rng);
        let Ok(r) = from_root_space(&k, q, &basis, Some(mu)) else { continue };
        let f = r.affine_series().unwrap();
        for kj in [vec![1u32, 2], vec![2, 2], vec![0, 3]] {
            let big_b = vec![kj.iter().map(|&e| CoeffField::frobenius(&k, &basis[0], q, e)).collect()];
            let m = kj.iter().map(|&e| CoeffField::frobenius(&k, &mu, q, e)).collect();
            let inst = Thm5Instance { field: k.clone(), q, mu, m, b: basis.clone(), big_b };
            let (lhs, rhs) = thm5_sides(&inst, Reading::Affine).unwrap();
            let n: usize = kj.iter().map(|&e| (q as usize).pow(e)).sum::<usize>() - 1;
            let al = alpha_table(f, n).unwrap();
            let prod = kj.iter().fold(k.one(), |acc, &e| k.mul(acc, *al.get((q as usize).pow(e) - 1).unwrap()));
            assert_eq!(lhs, prod);
            assert_eq!(lhs, rhs);
        }
    }
}
