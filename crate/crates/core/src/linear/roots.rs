use super::series::LinearSeries;
use crate::coeff::CoeffField;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem, Tuples};

/// The `F_q`-linear polynomial vanishing exactly on an `F_q`-subspace of a
/// finite field, optionally with the affine normalization for a shift.
#[derive(Clone, Debug)]
pub struct RootSpace {
    /// Monic `P(z) = Π_{v ∈ V} (z - v)`.
    pub series: LinearSeries<FieldCtx>,
    pub basis: Vec<FieldElem>,
    /// `(μ, P/P(μ))`, whose solutions of `f(v) = 1` are `μ + V`.
    pub affine: Option<(FieldElem, LinearSeries<FieldCtx>)>,
}

impl RootSpace {
    /// The series to use for `α` tests: the affine one if present.
    pub fn affine_series(&self) -> Option<&LinearSeries<FieldCtx>> {
        self.affine.as_ref().map(|(_, f)| f)
    }

    pub fn q(&self) -> u64 {
        self.series.q()
    }
}

/// `{Σ θ_i b_i : θ ∈ F_q^d}` in enumeration order of the `θ`.
pub fn span(ctx: &FieldCtx, q: u64, basis: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let fq = ctx.subfield(q)?;
    if basis.is_empty() {
        return Ok(vec![ctx.zero()]);
    }
    Ok(Tuples::new(fq, basis.len(), false)
        .map(|theta| theta.iter().zip(basis).fold(ctx.zero(), |acc, (t, b)| ctx.add(acc, ctx.mul(*t, *b))))
        .collect())
}

/// Builds `P` through `P_0 = z`, `P_{i+1} = P_i^q - P_i(b_{i+1})^{q-1} P_i`,
/// whose roots are `V_i + F_q b_{i+1}`. A basis vector already in the span
/// shows up as `P_i(b_{i+1}) = 0`.
pub fn from_root_space(ctx: &FieldCtx, q: u64, basis: &[FieldElem], shift: Option<FieldElem>) -> Result<RootSpace> {
    if !ctx.contains_order(q) {
        return Err(Error::InvalidArgument(format!("F_{} does not contain F_{q}", ctx.q())));
    }
    let mut p = LinearSeries::identity(ctx, q)?;
    for &b in basis {
        let c = p.eval(&b);
        if c == ctx.zero() {
            return Err(Error::DependentBasis(q));
        }
        let scale = ctx.neg(CoeffField::pow(ctx, &c, q - 1));
        let mut next: Vec<FieldElem> = Vec::with_capacity(p.coeffs().len() + 1);
        next.push(ctx.mul(scale, p.coeffs()[0]));
        for i in 1..=p.coeffs().len() {
            let from_power = CoeffField::frobenius(ctx, &p.coeffs()[i - 1], q, 1);
            let from_scale = p.coeffs().get(i).map_or(ctx.zero(), |&x| ctx.mul(scale, x));
            next.push(ctx.add(from_power, from_scale));
        }
        p = LinearSeries::polynomial(ctx, q, next)?;
    }
    let affine = match shift {
        None => None,
        Some(mu) => {
            let pm = p.eval(&mu);
            let inv = ctx.inv(pm).ok_or_else(|| Error::Precondition("shift lies in the span; P(μ) = 0".into()))?;
            let coeffs = p.coeffs().iter().map(|&c| ctx.mul(c, inv)).collect();
            Some((mu, LinearSeries::polynomial(ctx, q, coeffs)?))
        }
    };
    Ok(RootSpace { series: p, basis: basis.to_vec(), affine })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `Π (z - v)` as a dense polynomial (variable printed as `t`).
    fn product_form(ctx: &FieldCtx, roots: &[FieldElem]) -> Poly {
        roots.iter().fold(Poly::one(ctx), |acc, &v| {
            acc.mul(&Poly::from_coeffs(ctx, &[ctx.neg(v), ctx.one()]))
        })
    }

    fn dense(f: &LinearSeries<FieldCtx>) -> Poly {
        let ctx = f.field();
        let q = f.q() as usize;
        let mut acc = Poly::zero(ctx);
        for (i, &c) in f.coeffs().iter().enumerate() {
            acc = acc.add(&Poly::monomial(ctx, c, q.pow(i as u32)));
        }
        acc
    }

    #[test]
    fn small_examples() {
        let f3 = FieldCtx::of_order(3).unwrap();
        let r = from_root_space(&f3, 3, &[f3.one()], None).unwrap();
        assert_eq!(r.series.coeffs(), &[f3.from_int(-1), f3.one()]);

        let f4 = FieldCtx::of_order(4).unwrap();
        let b = f4.gen();
        let r = from_root_space(&f4, 2, &[b], None).unwrap();
        assert_eq!(r.series.coeffs(), &[b, f4.one()]);
    }

    #[test]
    fn matches_product_over_span() {
        let f9 = FieldCtx::of_order(9).unwrap();
        let basis = [f9.one(), f9.gen()];
        let r = from_root_space(&f9, 3, &basis, None).unwrap();
        assert_eq!(r.series.degree_exp().unwrap(), 2);
        let roots = span(&f9, 3, &basis).unwrap();
        assert_eq!(roots.len(), 9);
        assert_eq!(dense(&r.series), product_form(&f9, &roots));

        let k = FieldCtx::of_order(64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let basis: Vec<FieldElem> = (0..3).map(|_| k.random_nonzero(&mut rng)).collect();
            match from_root_space(&k, 4, &basis, None) {
                Ok(r) => {
                    let roots = span(&k, 4, &basis).unwrap();
                    let mut sorted = roots.clone();
                    sorted.sort();
                    sorted.dedup();
                    assert_eq!(sorted.len(), 64);
                    assert_eq!(dense(&r.series), product_form(&k, &roots));
                }
                Err(e) => assert_eq!(e, Error::DependentBasis(4)),
            }
        }
    }

    #[test]
    fn dependent_basis_and_shift() {
        let f9 = FieldCtx::of_order(9).unwrap();
        let g = f9.gen();
        let dep = [g, f9.mul(f9.from_int(2), g)];
        assert_eq!(from_root_space(&f9, 3, &dep, None).unwrap_err(), Error::DependentBasis(3));
        assert!(from_root_space(&f9, 3, &[f9.one()], Some(f9.from_int(2))).is_err());

        let r = from_root_space(&f9, 3, &[f9.one()], Some(g)).unwrap();
        let f = r.affine_series().unwrap();
        let ones: Vec<FieldElem> = f9.elements().filter(|x| f.eval(x) == f9.one()).collect();
        let mut expected: Vec<FieldElem> = span(&f9, 3, &[f9.one()]).unwrap().iter().map(|&v| f9.add(g, v)).collect();
        expected.sort();
        assert_eq!(ones, expected);
    }
}
