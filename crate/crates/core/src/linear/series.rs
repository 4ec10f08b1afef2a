use serde_json::json;

use crate::coeff::CoeffField;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    /// Exactly `Σ_{i≤d} f_i z^{q^i}` with `f_d ≠ 0`.
    Polynomial,
    /// Known through `f_order`; later coefficients are unknown.
    Truncated,
}

/// `f(z) = Σ f_i z^{q^i}` over a coefficient field containing `F_q`.
#[derive(Clone, Debug)]
pub struct LinearSeries<K: CoeffField> {
    field: K,
    q: u64,
    coeffs: Vec<K::Elem>,
    kind: SeriesKind,
}

impl<K: CoeffField> PartialEq for LinearSeries<K> {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.kind == other.kind && self.coeffs == other.coeffs
    }
}

impl<K: CoeffField> LinearSeries<K> {
    fn check_base(field: &K, q: u64) -> Result<()> {
        if !field.contains_fq(q) {
            return Err(Error::InvalidArgument(format!("{} does not contain F_{q}", field.descriptor())));
        }
        Ok(())
    }

    /// A polynomial; trailing zero coefficients are dropped.
    pub fn polynomial(field: &K, q: u64, mut coeffs: Vec<K::Elem>) -> Result<Self> {
        Self::check_base(field, q)?;
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("the zero polynomial has no degree q^d".into()));
        }
        Ok(LinearSeries { field: field.clone(), q, coeffs, kind: SeriesKind::Polynomial })
    }

    /// A series known through order `coeffs.len() - 1`.
    pub fn truncated(field: &K, q: u64, coeffs: Vec<K::Elem>) -> Result<Self> {
        Self::check_base(field, q)?;
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a truncated series needs at least f_0".into()));
        }
        Ok(LinearSeries { field: field.clone(), q, coeffs, kind: SeriesKind::Truncated })
    }

    /// The series `z`.
    pub fn identity(field: &K, q: u64) -> Result<Self> {
        Self::polynomial(field, q, vec![field.one()])
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn is_polynomial(&self) -> bool {
        self.kind == SeriesKind::Polynomial
    }

    pub fn coeffs(&self) -> &[K::Elem] {
        &self.coeffs
    }

    /// Index of the last stored coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `d` with `deg f = q^d`, for polynomials.
    pub fn degree_exp(&self) -> Result<usize> {
        match self.kind {
            SeriesKind::Polynomial => Ok(self.order()),
            SeriesKind::Truncated => Err(Error::NotPolynomial),
        }
    }

    /// Whether `f_i` is known (always true for polynomials).
    pub fn knows(&self, i: usize) -> bool {
        self.is_polynomial() || i < self.coeffs.len()
    }

    /// `f_i`, zero past the degree of a polynomial.
    pub fn coeff(&self, i: usize) -> Result<K::Elem> {
        match self.coeffs.get(i) {
            Some(c) => Ok(c.clone()),
            None if self.is_polynomial() => Ok(self.field.zero()),
            None => Err(Error::SeriesTooShort { order: self.order(), need: i }),
        }
    }

    pub fn f0(&self) -> &K::Elem {
        &self.coeffs[0]
    }

    /// Keeps `f_0..f_order` as a truncated series.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        let coeffs = (0..=order).map(|i| self.coeff(i)).collect::<Result<Vec<_>>>()?;
        Self::truncated(&self.field, self.q, coeffs)
    }

    /// `Σ f_i x^{q^i}`; for a truncated series only the stored terms are used.
    pub fn eval(&self, x: &K::Elem) -> K::Elem {
        let mut acc = self.field.zero();
        let mut xp = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xp = self.field.frobenius(&xp, self.q, 1);
            }
            if !self.field.is_zero(c) {
                acc = self.field.add(&acc, &self.field.mul(c, &xp));
            }
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self.coeffs.iter().map(|c| self.field.to_json(c)).collect();
        let kind = match self.kind {
            SeriesKind::Polynomial => "polynomial",
            SeriesKind::Truncated => "truncated",
        };
        json!({
            "q": self.q,
            "field": self.field.descriptor(),
            "coeffs": coeffs,
            "kind": kind,
            "order": self.order(),
        })
    }
}

impl LinearSeries<crate::field::FieldCtx> {
    /// A polynomial of degree `q^degree` with random coefficients, `f_0` and
    /// the leading coefficient nonzero, drawn from `seed`.
    pub fn random(field: &crate::field::FieldCtx, q: u64, degree: usize, seed: u64) -> Result<Self> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..=degree)
            .map(|i| if i == 0 || i == degree { field.random_nonzero(&mut rng) } else { field.random(&mut rng) })
            .collect();
        Self::polynomial(field, q, coeffs)
    }
}

/// `ls_eval`: evaluation of an `F_q`-linear polynomial.
pub fn ls_eval<K: CoeffField>(f: &LinearSeries<K>, x: &K::Elem) -> K::Elem {
    f.eval(x)
}

fn same_base<K: CoeffField>(f: &LinearSeries<K>, g: &LinearSeries<K>) -> Result<()> {
    if f.q != g.q {
        return Err(Error::InvalidArgument(format!("linearity bases differ: {} vs {}", f.q, g.q)));
    }
    Ok(())
}

/// Coefficients of `f∘g` through `order`: `(f∘g)_n = Σ_{i+j=n} f_i g_j^{q^i}`.
///
/// Two polynomials whose composite degree fits in `order` give a polynomial;
/// otherwise the result is truncated at `order`.
pub fn compose<K: CoeffField>(f: &LinearSeries<K>, g: &LinearSeries<K>, order: usize) -> Result<LinearSeries<K>> {
    same_base(f, g)?;
    let k = &f.field;
    let mut out = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut acc = k.zero();
        for i in 0..=n {
            let fi = f.coeff(i)?;
            if k.is_zero(&fi) {
                continue;
            }
            let gj = g.coeff(n - i)?;
            if k.is_zero(&gj) {
                continue;
            }
            acc = k.add(&acc, &k.mul(&fi, &k.frobenius(&gj, f.q, i as u32)));
        }
        out.push(acc);
    }
    let exact = f.is_polynomial() && g.is_polynomial() && f.order() + g.order() <= order;
    if exact {
        LinearSeries::polynomial(k, f.q, out)
    } else {
        LinearSeries::truncated(k, f.q, out)
    }
}

/// Compositional inverse through `order`:
/// `g_0 = f_0^{-1}`, `g_n = -f_0^{-1} Σ_{i=1..n} f_i g_{n-i}^{q^i}`.
pub fn comp_inverse<K: CoeffField>(f: &LinearSeries<K>, order: usize) -> Result<LinearSeries<K>> {
    let k = &f.field;
    let f0_inv = k.inv(f.f0()).ok_or_else(|| Error::Precondition("f_0 = 0 has no compositional inverse".into()))?;
    let mut g: Vec<K::Elem> = vec![f0_inv.clone()];
    for n in 1..=order {
        let mut acc = k.zero();
        for i in 1..=n {
            let fi = f.coeff(i)?;
            if k.is_zero(&fi) {
                continue;
            }
            acc = k.add(&acc, &k.mul(&fi, &k.frobenius(&g[n - i], f.q, i as u32)));
        }
        g.push(k.neg(&k.mul(&f0_inv, &acc)));
    }
    LinearSeries::truncated(k, f.q, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{RatField, RatFunc};
    use crate::field::FieldCtx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eval_examples() {
        let f9 = FieldCtx::of_order(9).unwrap();
        let f = LinearSeries::polynomial(&f9, 3, vec![f9.one(), f9.one()]).unwrap();
        for x in f9.subfield(3).unwrap() {
            assert_eq!(ls_eval(&f, &x), f9.mul(f9.from_int(2), x));
        }
        let z = LinearSeries::identity(&f9, 3).unwrap();
        for x in f9.elements() {
            assert_eq!(ls_eval(&z, &x), x);
        }
    }

    #[test]
    fn eval_is_additive() {
        let k = FieldCtx::of_order(81).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let coeffs = (0..4).map(|_| k.random(&mut rng)).collect::<Vec<_>>();
        let f = LinearSeries::polynomial(&k, 3, coeffs).unwrap();
        for _ in 0..100 {
            let x = k.random(&mut rng);
            let y = k.random(&mut rng);
            assert_eq!(f.eval(&k.add(x, y)), k.add(f.eval(&x), f.eval(&y)));
        }
    }

    #[test]
    fn compose_small() {
        // (z + z^3)∘(z - z^3) = z - z^9 over F_3
        let k = FieldCtx::of_order(3).unwrap();
        let f = LinearSeries::polynomial(&k, 3, vec![k.one(), k.one()]).unwrap();
        let g = LinearSeries::polynomial(&k, 3, vec![k.one(), k.from_int(-1)]).unwrap();
        let h = compose(&f, &g, 2).unwrap();
        assert_eq!(h.coeffs(), &[k.one(), k.zero(), k.from_int(-1)]);
        assert!(h.is_polynomial());
        let id = LinearSeries::identity(&k, 3).unwrap();
        assert_eq!(compose(&f, &id, 1).unwrap(), f);
    }

    #[test]
    fn inverse_of_identity_and_errors() {
        let k = FieldCtx::of_order(3).unwrap();
        let id = LinearSeries::identity(&k, 3).unwrap();
        let g = comp_inverse(&id, 3).unwrap();
        assert_eq!(g.coeffs(), &[k.one(), k.zero(), k.zero(), k.zero()]);
        let bad = LinearSeries::truncated(&k, 3, vec![k.zero(), k.one()]).unwrap();
        assert!(comp_inverse(&bad, 2).is_err());
        let short = LinearSeries::truncated(&k, 3, vec![k.one(), k.one()]).unwrap();
        assert!(matches!(comp_inverse(&short, 3), Err(Error::SeriesTooShort { .. })));
        assert!(LinearSeries::polynomial(&k, 9, vec![k.one()]).is_err());
    }

    #[test]
    fn round_trip_over_ratfunc() {
        let base = FieldCtx::of_order(3).unwrap();
        let k = RatField::new(&base);
        let coeffs = ["t", "1/(t+1)", "(t^2+2)/t", "t^3+t", "1"]
            .iter()
            .map(|s| RatFunc::parse(&base, s).unwrap())
            .collect();
        let f = LinearSeries::truncated(&k, 3, coeffs).unwrap();
        let g = comp_inverse(&f, 4).unwrap();
        let fg = compose(&f, &g, 4).unwrap();
        let gf = compose(&g, &f, 4).unwrap();
        let z = LinearSeries::identity(&k, 3).unwrap().truncate(4).unwrap();
        assert_eq!(fg, z);
        assert_eq!(gf, z);
    }

    #[test]
    fn random_is_seeded() {
        let k = FieldCtx::of_order(81).unwrap();
        let f = LinearSeries::random(&k, 3, 2, 5).unwrap();
        assert_eq!(f, LinearSeries::random(&k, 3, 2, 5).unwrap());
        assert_eq!(f.degree_exp().unwrap(), 2);
        assert!(!k.is_zero(f.f0()));
    }

    #[test]
    fn json_form() {
        let k = FieldCtx::of_order(4).unwrap();
        let f = LinearSeries::polynomial(&k, 2, vec![k.gen(), k.one()]).unwrap();
        let v = f.to_json();
        assert_eq!(v["q"], 2);
        assert_eq!(v["field"], "F_4");
        assert_eq!(v["kind"], "polynomial");
        assert_eq!(v["coeffs"].as_array().unwrap().len(), 2);
    }
}
