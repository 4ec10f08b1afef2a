use serde_json::json;

use super::poly::{enumerate_monic, Poly};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// `base^e mod m`.
fn powmod(base: &Poly, mut e: u64, m: &Poly) -> Poly {
    let mut result = Poly::one(base.ctx()).rem(m).expect("nonzero modulus");
    let mut b = base.rem(m).expect("nonzero modulus");
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&b).rem(m).expect("nonzero modulus");
        }
        e >>= 1;
        if e > 0 {
            b = b.mul(&b).rem(m).expect("nonzero modulus");
        }
    }
    result
}

/// Ben-Or irreducibility test over the polynomial's own base field.
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let q = f.ctx().q() as u64;
    let t = Poly::t(f.ctx());
    let mut tq = t.clone();
    for _ in 0..n / 2 {
        tq = powmod(&tq, q, f);
        if !f.gcd(&tq.sub(&t)).is_one() {
            return false;
        }
    }
    true
}

/// Monic irreducible polynomials of degree exactly `d`, in enumeration order.
pub fn irreducibles(ctx: &FieldCtx, d: usize) -> Vec<Poly> {
    enumerate_monic(ctx, d).filter(is_irreducible).collect()
}

/// `unit * Π factor^mult`, with an optional unfactored residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorMap {
    pub unit: FieldElem,
    /// Monic irreducible factors in degree order with their multiplicities.
    pub factors: Vec<(Poly, u32)>,
    /// Cofactor left over when some irreducible factor exceeds the search bound.
    pub residual: Option<Poly>,
}

impl FactorMap {
    pub fn is_complete(&self) -> bool {
        self.residual.is_none()
    }

    pub fn multiplicity(&self, p: &Poly) -> u32 {
        self.factors.iter().find(|(f, _)| f == p).map_or(0, |(_, m)| *m)
    }

    /// Multiplies everything back together.
    pub fn expand(&self, ctx: &FieldCtx) -> Poly {
        let mut acc = Poly::constant(ctx, self.unit);
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m as u64));
        }
        if let Some(r) = &self.residual {
            acc = acc.mul(r);
        }
        acc
    }

    pub fn to_json(&self, ctx: &FieldCtx) -> serde_json::Value {
        let factors: Vec<serde_json::Value> =
            self.factors.iter().map(|(f, m)| json!({ "factor": f.to_string(), "mult": m })).collect();
        json!({
            "unit": ctx.to_json(self.unit),
            "factors": factors,
            "residual": self.residual.as_ref().map(|r| r.to_string()),
        })
    }
}

/// Factorization by trial division over the monic irreducibles of degree
/// `1..=max_deg`.
///
/// If a cofactor remains whose degree is at most `2 * max_deg`, it has no
/// factor of degree at most half its own and is recorded as irreducible;
/// anything larger is returned as `residual`, meaning the bound must grow.
pub fn factor_trial(f: &Poly, max_deg: usize) -> Result<FactorMap> {
    if f.is_zero() {
        return Err(Error::Precondition("cannot factor the zero polynomial".into()));
    }
    let ctx = f.ctx().clone();
    let unit = f.leading();
    let mut rest = f.monic();
    let mut factors = Vec::new();
    for d in 1..=max_deg {
        if rest.deg() < d as i64 {
            break;
        }
        for p in irreducibles(&ctx, d) {
            let mut mult = 0;
            loop {
                let (quot, r) = rest.divrem(&p)?;
                if !r.is_zero() {
                    break;
                }
                rest = quot;
                mult += 1;
            }
            if mult > 0 {
                factors.push((p, mult));
            }
            if rest.deg() < d as i64 {
                break;
            }
        }
    }
    let mut residual = None;
    if rest.deg() > 0 {
        if rest.deg() as usize <= 2 * max_deg + 1 {
            factors.push((rest, 1));
        } else {
            residual = Some(rest);
        }
    }
    Ok(FactorMap { unit, factors, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bracket_one_over_f3() {
        let k = FieldCtx::new(3, 1, None).unwrap();
        let b1 = Poly::parse(&k, "t^3-t").unwrap();
        let fm = factor_trial(&b1, 1).unwrap();
        let names: Vec<(String, u32)> = fm.factors.iter().map(|(p, m)| (p.to_string(), *m)).collect();
        assert_eq!(names, vec![("t".into(), 1), ("t+1".into(), 1), ("t+2".into(), 1)]);
        assert!(fm.is_complete());
    }

    #[test]
    fn bracket_n_is_product_of_irreducibles_of_dividing_degree() {
        for q in [2u64, 3] {
            let k = FieldCtx::of_order(q).unwrap();
            for n in 1..=3u32 {
                let bracket = Poly::monomial(&k, k.one(), q.pow(n) as usize).sub(&Poly::t(&k));
                let mut prod = Poly::one(&k);
                for d in (1..=n as usize).filter(|d| n as usize % d == 0) {
                    for p in irreducibles(&k, d) {
                        prod = prod.mul(&p);
                    }
                }
                assert_eq!(prod, bracket, "q={q} n={n}");
                let fm = factor_trial(&bracket, n as usize).unwrap();
                assert!(fm.factors.iter().all(|(_, m)| *m == 1));
                assert_eq!(fm.expand(&k), bracket);
            }
        }
    }

    #[test]
    fn powers_and_units() {
        let k = FieldCtx::new(3, 1, None).unwrap();
        let t6 = Poly::parse(&k, "t^6").unwrap();
        let fm = factor_trial(&t6, 1).unwrap();
        assert_eq!(fm.factors, vec![(Poly::t(&k), 6)]);
        let f = Poly::parse(&k, "2*t^2+2").unwrap();
        let fm = factor_trial(&f, 1).unwrap();
        assert_eq!(fm.unit, k.from_int(2));
        assert_eq!(fm.expand(&k), f);
        assert!(factor_trial(&Poly::zero(&k), 3).is_err());
    }

    #[test]
    fn residual_when_bound_too_small() {
        let k = FieldCtx::new(2, 1, None).unwrap();
        // product of two distinct irreducible quartics
        let quartics = irreducibles(&k, 4);
        let f = quartics[0].mul(&quartics[1]);
        let fm = factor_trial(&f, 1).unwrap();
        assert_eq!(fm.residual, Some(f.clone()));
        let fm = factor_trial(&f, 4).unwrap();
        assert!(fm.is_complete());
        assert_eq!(fm.factors.len(), 2);
    }

    #[test]
    fn random_polynomials_multiply_back() {
        for q in [2u64, 3] {
            let k = FieldCtx::of_order(q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(q * 31);
            for _ in 0..100 {
                let deg = rng.gen_range(0..=8);
                let mut c: Vec<FieldElem> = (0..deg).map(|_| k.random(&mut rng)).collect();
                c.push(k.random_nonzero(&mut rng));
                let f = Poly::from_coeffs(&k, &c);
                let fm = factor_trial(&f, 4).unwrap();
                assert!(fm.is_complete());
                assert_eq!(fm.expand(&k), f);
                assert!(fm.factors.iter().all(|(p, _)| is_irreducible(p) && p.is_monic()));
            }
        }
    }
}
