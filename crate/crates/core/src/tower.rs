//! Carlitz constants over `F_q(t)`: `[n]`, `D_m`, `L_n`, the exponential and
//! logarithm, factorials, binomial series and Bernoulli–Carlitz fractions.

use std::sync::{Arc, RwLock};

use serde_json::json;

use crate::algebra::{enumerate_monic, factor_trial, FactorMap, Poly, RatField, RatFunc};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::linear::LinearSeries;
use crate::report::VerifyReport;

#[derive(Default)]
struct Cache {
    bracket: Vec<Poly>,
    big_d: Vec<Poly>,
    big_l: Vec<Poly>,
}

/// The tower over a fixed `F_q`, with memoized constants shared by clones.
#[derive(Clone)]
pub struct CarlitzCtx {
    base: FieldCtx,
    field: RatField,
    cache: Arc<RwLock<Cache>>,
}

impl std::fmt::Debug for CarlitzCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CarlitzCtx(F_{})", self.base.q())
    }
}

impl CarlitzCtx {
    pub fn new(base: &FieldCtx) -> Self {
        CarlitzCtx { base: base.clone(), field: RatField::new(base), cache: Arc::new(RwLock::new(Cache::default())) }
    }

    pub fn of_order(q: u64) -> Result<Self> {
        Ok(Self::new(&FieldCtx::of_order(q)?))
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn field(&self) -> &RatField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.base.q() as u64
    }

    fn qpow(&self, n: usize) -> usize {
        (self.q() as usize).pow(n as u32)
    }

    fn cached(&self, pick: fn(&Cache) -> &Vec<Poly>, n: usize) -> Option<Poly> {
        pick(&self.cache.read().expect("cache lock")).get(n).cloned()
    }

    /// `[n] = t^{q^n} - t`.
    pub fn bracket(&self, n: usize) -> Poly {
        if let Some(p) = self.cached(|c| &c.bracket, n) {
            return p;
        }
        let mut cache = self.cache.write().expect("cache lock");
        while cache.bracket.len() <= n {
            let k = cache.bracket.len();
            let p = Poly::monomial(&self.base, self.base.one(), self.qpow(k)).sub(&Poly::t(&self.base));
            cache.bracket.push(p);
        }
        cache.bracket[n].clone()
    }

    /// `D_m = Π_{i<m} [m-i]^{q^i}`, built as `D_m = [m] D_{m-1}^q`.
    #[allow(non_snake_case)]
    pub fn big_D(&self, m: usize) -> Poly {
        if let Some(p) = self.cached(|c| &c.big_d, m) {
            return p;
        }
        let brackets: Vec<Poly> = (0..=m).map(|i| self.bracket(i)).collect();
        let mut cache = self.cache.write().expect("cache lock");
        if cache.big_d.is_empty() {
            cache.big_d.push(Poly::one(&self.base));
        }
        while cache.big_d.len() <= m {
            let k = cache.big_d.len();
            let next = brackets[k].mul(&cache.big_d[k - 1].frobenius(self.q(), 1));
            cache.big_d.push(next);
        }
        cache.big_d[m].clone()
    }

    /// `L_n = Π_{i=1}^n [i]`.
    #[allow(non_snake_case)]
    pub fn big_L(&self, n: usize) -> Poly {
        if let Some(p) = self.cached(|c| &c.big_l, n) {
            return p;
        }
        let brackets: Vec<Poly> = (0..=n).map(|i| self.bracket(i)).collect();
        let mut cache = self.cache.write().expect("cache lock");
        if cache.big_l.is_empty() {
            cache.big_l.push(Poly::one(&self.base));
        }
        while cache.big_l.len() <= n {
            let k = cache.big_l.len();
            let next = cache.big_l[k - 1].mul(&brackets[k]);
            cache.big_l.push(next);
        }
        cache.big_l[n].clone()
    }

    /// `ℓ_n = (-1)^n L_n`.
    pub fn ell(&self, n: usize) -> Poly {
        let l = self.big_L(n);
        if n % 2 == 1 {
            l.neg()
        } else {
            l
        }
    }

    /// `d_n = D_n`.
    pub fn d(&self, n: usize) -> Poly {
        self.big_D(n)
    }

    fn rat(&self, p: Poly) -> RatFunc {
        RatFunc::from_poly(p)
    }

    fn recip(&self, p: Poly) -> RatFunc {
        RatFunc::new(Poly::one(&self.base), p).expect("tower constants are nonzero")
    }

    /// `e(z) = Σ_{i≤order} z^{q^i}/d_i`.
    pub fn carlitz_exp(&self, order: usize) -> LinearSeries<RatField> {
        let c = (0..=order).map(|i| self.recip(self.d(i))).collect();
        LinearSeries::truncated(&self.field, self.q(), c).expect("F_q(t) contains F_q")
    }

    /// `log(z) = Σ_{i≤order} z^{q^i}/ℓ_i`.
    pub fn carlitz_log(&self, order: usize) -> LinearSeries<RatField> {
        let c = (0..=order).map(|i| self.recip(self.ell(i))).collect();
        LinearSeries::truncated(&self.field, self.q(), c).expect("F_q(t) contains F_q")
    }

    /// `n!_c = Π d_i^{n_i}` over the base-`q` digits of `n`.
    pub fn factorial(&self, n: u64) -> Poly {
        let q = self.q();
        let mut acc = Poly::one(&self.base);
        let mut rest = n;
        let mut i = 0;
        while rest > 0 {
            let digit = rest % q;
            if digit > 0 {
                acc = acc.mul(&self.d(i).pow(digit));
            }
            rest /= q;
            i += 1;
        }
        acc
    }

    /// Coefficients `1/(d_i ℓ_{d-i}^{q^i})` of `binom(z, q^d)_c`.
    fn binomial_coeffs(&self, d: usize) -> Vec<RatFunc> {
        (0..=d)
            .map(|i| self.recip(self.d(i).mul(&self.ell(d - i).frobenius(self.q(), i as u32))))
            .collect()
    }

    /// `binom(z, q^d)_c` as a polynomial of degree `q^d`. For `d ≤ 2`,
    /// `q ≤ 3` the sum form is checked against `(1/D_d) Π_{deg a<d} (z-a)`.
    pub fn carlitz_binomial(&self, d: usize) -> Result<LinearSeries<RatField>> {
        let coeffs = self.binomial_coeffs(d);
        if d <= 2 && self.q() <= 3 && !self.binomial_matches_product(d, &coeffs) {
            return Err(Error::Precondition(format!("binomial sum and product forms disagree at d={d}")));
        }
        LinearSeries::polynomial(&self.field, self.q(), coeffs)
    }

    /// `Π_{deg a<d} (z - a)` over all (not only monic) `a`, as coefficients
    /// in `F_q[t]` indexed by the power of `z`.
    pub fn binomial_product_form(&self, d: usize) -> Vec<Poly> {
        if d == 0 {
            // the single polynomial of degree < 0 is a = 0
            return vec![Poly::zero(&self.base), Poly::one(&self.base)];
        }
        let mut prod = vec![Poly::one(&self.base)];
        let elems: Vec<_> = self.base.elements().collect();
        for a in crate::field::Tuples::new(elems, d, false) {
            let a = Poly::from_coeffs(&self.base, &a);
            let mut next = vec![Poly::zero(&self.base); prod.len() + 1];
            for (k, c) in prod.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c);
                next[k] = next[k].sub(&c.mul(&a));
            }
            prod = next;
        }
        prod
    }

    fn binomial_matches_product(&self, d: usize, coeffs: &[RatFunc]) -> bool {
        let prod = self.binomial_product_form(d);
        let big_d = self.rat(self.big_D(d));
        let q = self.q() as usize;
        prod.iter().enumerate().all(|(k, c)| {
            let expected = match (0..=d).find(|&i| q.pow(i as u32) == k) {
                Some(i) => coeffs[i].mul(&big_d),
                None => RatFunc::zero(&self.base),
            };
            self.rat(c.clone()) == expected
        })
    }

    /// `B_n = n!_c · [z^n] (e(z)/z)^{-1}`, with the power series inverted to
    /// order `order ≥ n`.
    pub fn bernoulli(&self, n: usize, order: usize) -> Result<BernoulliEntry> {
        if order < n {
            return Err(Error::SeriesTooShort { order, need: n });
        }
        let series = self.z_over_exp(order);
        let value = series[n].mul(&self.rat(self.factorial(n as u64)));
        BernoulliEntry::new(self, n, value)
    }

    /// Coefficients `b_0..b_order` of `z/e(z)`.
    pub fn z_over_exp(&self, order: usize) -> Vec<RatFunc> {
        let q = self.q() as usize;
        // e(z)/z = Σ z^{q^i - 1}/d_i
        let mut terms: Vec<(usize, RatFunc)> = Vec::new();
        let mut i = 1;
        while q.pow(i as u32) - 1 <= order {
            terms.push((q.pow(i as u32) - 1, self.recip(self.d(i))));
            i += 1;
        }
        let mut b: Vec<RatFunc> = vec![RatFunc::one(&self.base)];
        for m in 1..=order {
            let mut acc = RatFunc::zero(&self.base);
            for (shift, c) in &terms {
                if *shift > m {
                    break;
                }
                if !b[m - shift].is_zero() {
                    acc = acc.add(&c.mul(&b[m - shift]));
                }
            }
            b.push(acc.neg());
        }
        b
    }

    /// `(-1)^k Π_{i=1}^{k-1} [k-i]^{q^i-2} / [k]`.
    pub fn bernoulli_qk_closed(&self, k: usize) -> Result<RatFunc> {
        if k == 0 {
            return Err(Error::InvalidArgument("the closed form needs k ≥ 1".into()));
        }
        let mut num = Poly::one(&self.base);
        for i in 1..k {
            num = num.mul(&self.bracket(k - i).pow(self.qpow(i) as u64 - 2));
        }
        if k % 2 == 1 {
            num = num.neg();
        }
        RatFunc::new(num, self.bracket(k))
    }

    /// Net exponent of each monic irreducible of degree `≤ k` in
    /// `B_{q^k-1}`, read off the closed form:
    /// `e(P) = Σ_{i=1}^{k-1} [deg P | k-i] (q^i - 2) - [deg P | k]`.
    pub fn bernoulli_qk_exponents(&self, k: usize) -> Vec<(Poly, i64)> {
        let mut out = Vec::new();
        for deg in 1..=k {
            let mut e = 0i64;
            for i in 1..k {
                if (k - i) % deg == 0 {
                    e += self.qpow(i) as i64 - 2;
                }
            }
            if k % deg == 0 {
                e -= 1;
            }
            for p in crate::algebra::irreducibles(&self.base, deg) {
                out.push((p, e));
            }
        }
        out
    }

    /// Checks that the factorization of the series-derived `B_{q^k-1}`
    /// carries exactly the exponents predicted by the closed form.
    pub fn verify_bernoulli_factors(&self, k: usize) -> Result<VerifyReport> {
        let n = self.qpow(k) - 1;
        let entry = self.bernoulli(n, n)?;
        let predicted = self.bernoulli_qk_exponents(k);
        let mut mismatches = Vec::new();
        for (p, e) in &predicted {
            let got = entry.num_factors.multiplicity(p) as i64 - entry.den_factors.multiplicity(p) as i64;
            if got != *e {
                mismatches.push(json!({ "factor": p.to_string(), "expected": e, "got": got }));
            }
        }
        let degree_ok = entry.num_factors.factors.iter().chain(&entry.den_factors.factors).all(|(p, _)| p.deg() as usize <= k);
        let complete = entry.num_factors.is_complete() && entry.den_factors.is_complete();
        let ok = mismatches.is_empty() && degree_ok && complete;
        let params = json!({ "q": self.q(), "k": k, "n": n });
        let lhs = json!({ "num_factors": entry.num_factors.to_json(&self.base), "den_factors": entry.den_factors.to_json(&self.base) });
        let rhs = json!(predicted.iter().filter(|(_, e)| *e != 0).map(|(p, e)| json!({ "factor": p.to_string(), "exponent": e })).collect::<Vec<_>>());
        let mut r = VerifyReport::compare("bernoulli-factors", params, lhs, rhs, ok, false);
        if !ok {
            r.witness = Some(json!({ "mismatches": mismatches, "degree_ok": degree_ok, "complete": complete }));
        }
        Ok(r)
    }
}

/// `B_n` with the factorizations of its reduced numerator and denominator.
#[derive(Clone, Debug)]
pub struct BernoulliEntry {
    pub n: usize,
    pub value: RatFunc,
    pub num_factors: FactorMap,
    pub den_factors: FactorMap,
}

impl BernoulliEntry {
    fn new(ctx: &CarlitzCtx, n: usize, value: RatFunc) -> Result<Self> {
        // irreducible factors of B_{q^k-1} have degree ≤ k; go one further
        let mut max_deg = 1;
        while ctx.qpow(max_deg) <= n + 1 {
            max_deg += 1;
        }
        let num_factors = if value.is_zero() {
            FactorMap { unit: ctx.base.zero(), factors: Vec::new(), residual: None }
        } else {
            factor_trial(value.num(), max_deg)?
        };
        let den_factors = factor_trial(value.den(), max_deg)?;
        Ok(BernoulliEntry { n, value, num_factors, den_factors })
    }

    pub fn to_json(&self, ctx: &FieldCtx) -> serde_json::Value {
        json!({
            "n": self.n,
            "value": self.value.to_json(),
            "num_factors": self.num_factors.to_json(ctx),
            "den_factors": self.den_factors.to_json(ctx),
        })
    }
}

/// Product of all monic polynomials of degree `m`, by enumeration.
pub fn product_of_monics(base: &FieldCtx, m: usize) -> Poly {
    enumerate_monic(base, m).fold(Poly::one(base), |acc, a| acc.mul(&a))
}

/// LCM of all monic polynomials of degree `n`, by enumeration.
pub fn lcm_of_monics(base: &FieldCtx, n: usize) -> Poly {
    enumerate_monic(base, n).fold(Poly::one(base), |acc, a| {
        let g = acc.gcd(&a);
        acc.mul(&a).divrem(&g).expect("nonzero gcd").0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{comp_inverse, compose, h_table};

    fn f3() -> CarlitzCtx {
        CarlitzCtx::of_order(3).unwrap()
    }

    fn p(c: &CarlitzCtx, s: &str) -> Poly {
        Poly::parse(c.base(), s).unwrap()
    }

    #[test]
    fn brackets_and_products() {
        let c = f3();
        assert_eq!(c.bracket(1), p(&c, "t^3-t"));
        assert_eq!(c.bracket(2), p(&c, "t^9-t"));
        assert_eq!(c.big_D(1), c.bracket(1));
        assert_eq!(c.big_D(2), c.bracket(2).mul(&c.bracket(1).pow(3)));
        assert_eq!(c.big_D(0), Poly::one(c.base()));
        assert_eq!(c.big_L(0), Poly::one(c.base()));
        assert_eq!(c.ell(1), c.bracket(1).neg());
        for m in 0..=4 {
            assert_eq!(c.big_D(m).deg(), (m * 3usize.pow(m as u32)) as i64);
        }
        assert_eq!(c.big_D(2), product_of_monics(c.base(), 2));
        for q in [2u64, 3] {
            let c = CarlitzCtx::of_order(q).unwrap();
            for n in 1..=3 {
                assert_eq!(c.big_D(n), product_of_monics(c.base(), n), "q={q} D_{n}");
                assert_eq!(c.big_L(n), lcm_of_monics(c.base(), n), "q={q} L_{n}");
            }
        }
    }

    #[test]
    fn exp_log_inverse_pair() {
        let c = f3();
        let e = c.carlitz_exp(3);
        let l = c.carlitz_log(3);
        assert_eq!(e.coeffs()[0], RatFunc::one(c.base()));
        assert_eq!(e.coeffs()[1], c.recip(c.bracket(1)));
        let z = LinearSeries::identity(c.field(), 3).unwrap().truncate(3).unwrap();
        assert_eq!(compose(&e, &l, 3).unwrap(), z);
        assert_eq!(compose(&l, &e, 3).unwrap(), z);
        assert_eq!(comp_inverse(&e, 3).unwrap(), l);
    }

    #[test]
    fn factorials() {
        let c = f3();
        assert!(c.factorial(2).is_one());
        assert_eq!(c.factorial(8), c.bracket(1).pow(2));
        assert_eq!(c.factorial(4), c.bracket(1));
        assert_eq!(c.factorial(9 + 3), c.d(2).mul(&c.d(1)));
    }

    #[test]
    fn binomials() {
        for q in [2u64, 3] {
            let c = CarlitzCtx::of_order(q).unwrap();
            for d in 0..=2 {
                let b = c.carlitz_binomial(d).unwrap();
                assert_eq!(b.degree_exp().unwrap(), d);
                assert_eq!(b.coeffs()[d], c.recip(c.big_D(d)));
            }
        }
        let c = f3();
        let b = c.carlitz_binomial(1).unwrap();
        assert_eq!(b.coeffs()[0], c.recip(c.bracket(1)).neg());
        assert_eq!(b.coeffs()[1], c.recip(c.bracket(1)));
        assert_eq!(c.carlitz_binomial(0).unwrap().coeffs(), &[RatFunc::one(c.base())]);
    }

    #[test]
    fn bernoulli_values() {
        let c = f3();
        let b2 = c.bernoulli(2, 2).unwrap();
        assert_eq!(b2.value, c.recip(c.bracket(1)).neg());
        let b8 = c.bernoulli(8, 8).unwrap();
        assert_eq!(b8.value, RatFunc::new(c.bracket(1), c.bracket(2)).unwrap());
        assert!(c.bernoulli(1, 1).unwrap().value.is_zero());
        assert!(c.bernoulli(4, 3).is_err());
        assert_eq!(c.bernoulli_qk_closed(1).unwrap(), b2.value);
        assert_eq!(c.bernoulli_qk_closed(2).unwrap(), b8.value);
        let c2 = CarlitzCtx::of_order(2).unwrap();
        assert_eq!(c2.bernoulli_qk_closed(2).unwrap(), c2.recip(c2.bracket(2)));
        for q in [2u64, 3] {
            let c = CarlitzCtx::of_order(q).unwrap();
            for k in 1..=3 {
                let n = (q as usize).pow(k as u32) - 1;
                assert_eq!(c.bernoulli(n, n).unwrap().value, c.bernoulli_qk_closed(k).unwrap(), "q={q} k={k}");
                assert!(c.verify_bernoulli_factors(k).unwrap().is_ok(), "q={q} k={k}");
            }
        }
    }

    #[test]
    fn z_over_exp_matches_h_engine() {
        for q in [2u64, 3] {
            let c = CarlitzCtx::of_order(q).unwrap();
            let series = c.z_over_exp(60);
            let order = if q == 2 { 5 } else { 3 };
            let h = h_table(&c.carlitz_exp(order), 60).unwrap();
            assert_eq!(h.values(), &series[..]);
        }
    }

    #[test]
    fn bernoulli_json() {
        let c = f3();
        let v = c.bernoulli(8, 8).unwrap().to_json(c.base());
        assert_eq!(v["n"], 8);
        // [1] divides [2], so the reduced form is 1/([2]/[1])
        assert_eq!(v["value"]["num"], "1");
        assert_eq!(v["value"]["den"], "t^6+t^4+t^2+1");
    }
}
