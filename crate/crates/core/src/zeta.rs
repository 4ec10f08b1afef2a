//! Carlitz–Goss zeta values and depth-two multizeta values as Laurent series
//! in `u = 1/t`.
//!
//! Degree cutoffs for positive weights come from the valuation bound
//! `v(S_d(s)) ≥ max(s·d, q(q^d - 1)/(q - 1))`: the first term is the degree of
//! `a^s`, the second is `deg ℓ_d = v(S_d(1))`, and `S_d(s)` has denominator
//! dividing `ℓ_d^s` with `v(S_d(s)) ≥ v(S_d(1))`. Terms whose bound reaches the
//! precision are dropped, so every reported coefficient is exact.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{enumerate_monic, LaurentSeries, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::report::{Status, VerifyReport};
use crate::tower::CarlitzCtx;

/// Lower bound for the `u`-valuation of `S_d(s)`, `s ≥ 1`.
pub fn valuation_bound(q: u64, d: usize, s: u64) -> i64 {
    if d == 0 {
        return 0;
    }
    let deg_ell = (1..=d as u32).map(|i| q.pow(i)).sum::<u64>();
    (s * d as u64).max(deg_ell) as i64
}

/// Largest `d` whose `S_d(s)` can contribute below `prec`.
pub fn auto_cutoff(q: u64, s: u64, prec: i64) -> usize {
    let mut d = 0;
    while valuation_bound(q, d + 1, s) < prec {
        d += 1;
    }
    d
}

/// `S_d(s)` expanded at infinity to precision `prec`, summed term by term.
/// Negative `s` gives the polynomial `Σ a^{|s|}`.
pub fn powersum_series(ctx: &CarlitzCtx, d: usize, s: i64, prec: i64) -> LaurentSeries {
    let base = ctx.base();
    let mut acc = LaurentSeries::zero(base, prec);
    if s > 0 && (s as i64) * d as i64 >= prec {
        // every term, hence the sum, vanishes below prec
        return acc;
    }
    for a in enumerate_monic(base, d) {
        let term = if s >= 0 {
            RatFunc::new(Poly::one(base), a.pow(s as u64)).expect("monic polynomials are nonzero")
        } else {
            RatFunc::from_poly(a.pow(s.unsigned_abs()))
        };
        acc = acc.add(&LaurentSeries::expand(&term, prec));
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaQuery {
    pub s: i64,
    pub prec: i64,
    /// Degree cutoff; derived for positive `s`, required for negative `s`.
    pub d_max: Option<usize>,
}

impl ZetaQuery {
    pub fn new(s: i64, prec: i64) -> Self {
        ZetaQuery { s, prec, d_max: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaValue {
    pub weights: Vec<i64>,
    pub series: LaurentSeries,
    pub d_max: usize,
    /// True when the sum was cut off without a tail bound.
    pub partial: bool,
}

impl ZetaValue {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": crate::report::SCHEMA,
            "weights": self.weights,
            "d_max": self.d_max,
            "partial": self.partial,
            "series": self.series.to_json(),
        })
    }
}

/// `ζ_c(s) = Σ_d S_d(s)` to the requested precision.
pub fn zeta(ctx: &CarlitzCtx, query: &ZetaQuery) -> Result<ZetaValue> {
    let (s, prec) = (query.s, query.prec);
    if s == 0 {
        return Err(Error::InvalidArgument("ζ is evaluated at s ≠ 0".into()));
    }
    if prec < 1 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    let (d_max, partial) = match (query.d_max, s > 0) {
        (Some(d), true) => (d, d < auto_cutoff(ctx.q(), s as u64, prec)),
        (None, true) => (auto_cutoff(ctx.q(), s as u64, prec), false),
        (Some(d), false) => (d, true),
        (None, false) => {
            return Err(Error::InvalidArgument("negative weights need an explicit degree cutoff d_max".into()))
        }
    };
    let parts: Vec<LaurentSeries> = (0..=d_max).into_par_iter().map(|d| powersum_series(ctx, d, s, prec)).collect();
    let series = parts.iter().fold(LaurentSeries::zero(ctx.base(), prec), |acc, p| acc.add(p));
    Ok(ZetaValue { weights: vec![s], series, d_max, partial })
}

/// `ζ(s₁, s₂) = Σ_{d₁ > d₂ ≥ 0} S_{d₁}(s₁) S_{d₂}(s₂)` to precision `prec`.
pub fn multizeta(ctx: &CarlitzCtx, s1: i64, s2: i64, prec: i64) -> Result<ZetaValue> {
    if s1 < 1 || s2 < 1 {
        return Err(Error::InvalidArgument("multizeta weights must be positive".into()));
    }
    if prec < 1 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    let q = ctx.q();
    let (w1, w2) = (s1 as u64, s2 as u64);
    let d1_max = auto_cutoff(q, w1, prec);
    let pairs: Vec<(usize, usize)> = (1..=d1_max)
        .flat_map(|d1| (0..d1).map(move |d2| (d1, d2)))
        .filter(|&(d1, d2)| valuation_bound(q, d1, w1) + valuation_bound(q, d2, w2) < prec)
        .collect();
    let d2_max = pairs.iter().map(|p| p.1).max().unwrap_or(0);
    let first: Vec<LaurentSeries> = (0..=d1_max).into_par_iter().map(|d| powersum_series(ctx, d, s1, prec)).collect();
    let second: Vec<LaurentSeries> = (0..=d2_max).into_par_iter().map(|d| powersum_series(ctx, d, s2, prec)).collect();
    // second[d] accumulates S_0(s2) + ... + S_d(s2)
    let mut below = Vec::with_capacity(second.len());
    let mut run = LaurentSeries::zero(ctx.base(), prec);
    for s in &second {
        run = run.add(s);
        below.push(run.clone());
    }
    let mut series = LaurentSeries::zero(ctx.base(), prec);
    for d1 in 1..=d1_max {
        let top = pairs.iter().filter(|p| p.0 == d1).map(|p| p.1).max();
        if let Some(d2) = top {
            series = series.add(&first[d1].mul(&below[d2]).truncate(prec));
        }
    }
    Ok(ZetaValue { weights: vec![s1, s2], series, d_max: d1_max, partial: false })
}

/// Admissible `(n, k_list)` for the §2.6 identity: `n ≥ 1`, `1 ≤ s < q`,
/// `0 ≤ k_i < n`, as nondecreasing tuples.
pub fn multizeta_instances(q: u64, n_max: usize) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for s in 1..q as usize {
            for ks in crate::powersum::multisets(0, n - 1, s) {
                out.push((n, ks));
            }
        }
    }
    out
}

/// §2.6: `ζ(q^n - Σ q^{k_i}, (q-1) q^n) =
/// (-1)^s / ℓ_1^{q^n} · Π [n - k_i]^{q^{k_i}} · ζ(q^{n+1} - Σ q^{k_i})`.
pub fn verify_multizeta_identity(ctx: &CarlitzCtx, n: usize, ks: &[usize], prec: i64) -> Result<VerifyReport> {
    let q = ctx.q();
    let s = ks.len();
    if n == 0 || s == 0 || s as u64 >= q || ks.iter().any(|&k| k >= n) {
        return Err(Error::Precondition(format!("need n > 0, 1 ≤ s < q and 0 ≤ k_i < n (n={n}, k={ks:?})")));
    }
    let qn = q.pow(n as u32) as i64;
    let sum: i64 = ks.iter().map(|&k| q.pow(k as u32) as i64).sum();
    let (s1, s2, w) = (qn - sum, (q as i64 - 1) * qn, q as i64 * qn - sum);
    let lhs = multizeta(ctx, s1, s2, prec)?;

    let mut num = Poly::one(ctx.base());
    for &k in ks {
        num = num.mul(&ctx.bracket(n - k).pow(q.pow(k as u32)));
    }
    if s % 2 == 1 {
        num = num.neg();
    }
    let factor = RatFunc::new(num, ctx.ell(1).pow(qn as u64))?;
    let z = zeta(ctx, &ZetaQuery::new(w, prec))?;
    let rhs = z.series.mul_exact(&factor).truncate(prec);

    let agreement = lhs.series.agrees_with(&rhs);
    let params = json!({ "q": q, "n": n, "k": ks, "s": s, "weights": [s1, s2], "rhs_weight": w, "prec": prec });
    let mut r = VerifyReport::compare("multizeta", params, lhs.series.to_json(), rhs.to_json(), agreement.is_ok(), false);
    r.extra.insert("factor".into(), factor.to_json());
    match agreement {
        Ok(count) => {
            r.extra.insert("agreeing_coefficients".into(), json!(count));
        }
        Err(k) => {
            r.witness = Some(json!({ "first_difference_at": k, "lhs": lhs.series.coeff(k).map(|c| ctx.base().to_json(c)), "rhs": rhs.coeff(k).map(|c| ctx.base().to_json(c)) }));
        }
    }
    r.extra.insert("common_precision".into(), json!(lhs.series.prec().min(rhs.prec())));
    Ok(r)
}

/// `ζ(n) n!_c / B_n`, which is `π̃^n` for 'even' `n`.
fn euler_ratio(ctx: &CarlitzCtx, n: usize, prec: i64) -> Result<LaurentSeries> {
    let b = ctx.bernoulli(n, n)?.value;
    if b.is_zero() {
        return Err(Error::Precondition(format!("B_{n} = 0")));
    }
    let factor = RatFunc::from_poly(ctx.factorial(n as u64)).div(&b)?;
    Ok(zeta(ctx, &ZetaQuery::new(n as i64, prec))?.series.mul_exact(&factor))
}

/// Euler–Carlitz consistency without `π̃`: with `x_n = ζ(n) n!_c / B_n`,
/// checks `x_n^m = x_m^n`.
pub fn euler_carlitz_crosscheck(ctx: &CarlitzCtx, n: usize, m: usize, prec: i64) -> Result<VerifyReport> {
    let q = ctx.q() as usize;
    if n == 0 || m == 0 || n % (q - 1) != 0 || m % (q - 1) != 0 {
        return Err(Error::Precondition(format!("n and m must be positive and divisible by q - 1 (n={n}, m={m})")));
    }
    let lhs = euler_ratio(ctx, n, prec)?.pow(m as i64)?;
    let rhs = euler_ratio(ctx, m, prec)?.pow(n as i64)?;
    let agreement = lhs.agrees_with(&rhs);
    let params = json!({ "q": q, "n": n, "m": m, "prec": prec });
    let mut r = VerifyReport::compare("euler-carlitz", params, lhs.to_json(), rhs.to_json(), agreement.is_ok(), false);
    match agreement {
        Ok(count) => {
            r.extra.insert("agreeing_coefficients".into(), json!(count));
        }
        Err(k) => {
            r.witness = Some(json!({ "first_difference_at": k }));
        }
    }
    Ok(r)
}

/// Recomputes `ζ(s)` with `extra` more degrees and reports whether any
/// coefficient below the precision moved.
pub fn truncation_soundness(ctx: &CarlitzCtx, s: i64, prec: i64, extra: usize) -> Result<VerifyReport> {
    let auto = zeta(ctx, &ZetaQuery::new(s, prec))?;
    let deeper = zeta(ctx, &ZetaQuery { s, prec, d_max: Some(auto.d_max + extra) })?;
    let params = json!({ "q": ctx.q(), "s": s, "prec": prec, "d_max": auto.d_max, "extra": extra });
    let equal = auto.series == deeper.series;
    let mut r = VerifyReport::compare("zeta-truncation", params, auto.series.to_json(), deeper.series.to_json(), equal, false);
    r.status = if equal { Status::Pass } else { Status::Fail };
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powersum::{powersum_brute, PowerSumQuery};

    fn c(q: u64) -> CarlitzCtx {
        CarlitzCtx::of_order(q).unwrap()
    }

    #[test]
    fn cutoffs() {
        assert_eq!(auto_cutoff(3, 2, 40), 3);
        assert_eq!(auto_cutoff(5, 2, 40), 2);
        assert_eq!(valuation_bound(3, 1, 1), 3);
        assert_eq!(valuation_bound(3, 0, 9), 0);
    }

    #[test]
    fn valuation_bound_holds() {
        for q in [2u64, 3] {
            let ctx = c(q);
            for d in 1..=3 {
                for s in 1..=20i64 {
                    let exact = powersum_brute(&ctx, PowerSumQuery::exact(d, s)).unwrap();
                    let v = exact.den().deg() - exact.num().deg();
                    if !exact.is_zero() {
                        assert!(v >= valuation_bound(q, d, s as u64), "q={q} d={d} s={s} v={v}");
                    }
                }
            }
        }
    }

    #[test]
    fn series_matches_exact_sum() {
        let ctx = c(3);
        for (d, s) in [(1, 2), (2, 2), (2, 5), (1, -4)] {
            let exact = powersum_brute(&ctx, PowerSumQuery::exact(d, s)).unwrap();
            assert_eq!(powersum_series(&ctx, d, s, 40), LaurentSeries::expand(&exact, 40), "d={d} s={s}");
        }
    }

    #[test]
    fn zeta_basics() {
        let ctx = c(3);
        for s in [1, 2, 4, 8] {
            let z = zeta(&ctx, &ZetaQuery::new(s, 30)).unwrap();
            assert_eq!(z.series.valuation(), 0);
            assert_eq!(z.series.coeff(0), Some(ctx.base().one()));
            assert!(!z.partial);
        }
        let z2 = zeta(&ctx, &ZetaQuery::new(2, 40)).unwrap().series;
        assert_eq!(z2.coeff(6), Some(ctx.base().one()));
        let short = zeta(&ctx, &ZetaQuery::new(2, 20)).unwrap().series;
        assert!(short.agrees_with(&z2).is_ok());
        assert!(zeta(&ctx, &ZetaQuery::new(-2, 10)).is_err());
        let neg = zeta(&ctx, &ZetaQuery { s: -2, prec: 10, d_max: Some(2) }).unwrap();
        assert!(neg.partial);
    }

    #[test]
    fn zeta_2_against_brute() {
        let ctx = c(3);
        let mut expected = LaurentSeries::zero(ctx.base(), 40);
        for d in 0..=4 {
            let exact = powersum_brute(&ctx, PowerSumQuery::exact(d, 2)).unwrap();
            expected = expected.add(&LaurentSeries::expand(&exact, 40));
        }
        assert_eq!(zeta(&ctx, &ZetaQuery::new(2, 40)).unwrap().series, expected);
    }

    #[test]
    fn multizeta_basics() {
        let ctx = c(3);
        let z = multizeta(&ctx, 2, 6, 40).unwrap();
        assert!(z.series.valuation() >= 2);
        let swapped = multizeta(&ctx, 6, 2, 40).unwrap();
        assert_ne!(z.series, swapped.series);
    }

    #[test]
    fn multizeta_identity_small() {
        let ctx = c(3);
        let r = verify_multizeta_identity(&ctx, 1, &[0], 40).unwrap();
        assert_eq!(r.status, Status::Pass, "{:?}", r.witness);
        assert!(r.extra["agreeing_coefficients"].as_u64().unwrap() >= 30);
        let expected = RatFunc::new(Poly::one(ctx.base()), ctx.bracket(1).pow(2)).unwrap();
        assert_eq!(r.extra["factor"], expected.to_json());
        assert!(verify_multizeta_identity(&ctx, 1, &[1], 40).is_err());
    }

    #[test]
    fn euler_carlitz() {
        let ctx = c(3);
        let r = euler_carlitz_crosscheck(&ctx, 2, 4, 40).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!(r.extra["agreeing_coefficients"].as_u64().unwrap() >= 20);
        assert!(euler_carlitz_crosscheck(&ctx, 3, 4, 40).is_err());
        assert_eq!(euler_carlitz_crosscheck(&c(2), 1, 2, 30).unwrap().status, Status::Pass);
    }

    #[test]
    fn truncation_is_sound() {
        let ctx = c(3);
        for s in [2, 4, 8] {
            assert_eq!(truncation_soundness(&ctx, s, 40, 5).unwrap().status, Status::Pass, "s={s}");
        }
    }
}
