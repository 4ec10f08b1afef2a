//! Named series presets accepted by `--f`.
//!
//! - `carlitz-exp[:order]`, `carlitz-log[:order]` over `F_q(t)`; without an
//!   order the smallest one covering the requested indices is used.
//! - `carlitz-binomial:d` over `F_q(t)`.
//! - `coeffs:c0,c1,...` a polynomial with coefficients in `F_q(t)`.
//! - `random:seed[:deg[:m]]` a random polynomial over `F_{q^m}` (deg 2, m 4).
//! - `roots:m,d,seed[,affine]` the subspace polynomial of a random basis of
//!   `d` elements of `F_{q^m}`; with `affine`, normalized so `f(v) = 1` on a
//!   random coset.

use carlitz_core::algebra::{RatField, RatFunc};
use carlitz_core::linear::{from_root_space, LinearSeries};
use carlitz_core::tower::CarlitzCtx;
use carlitz_core::{Error, FieldCtx, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub enum Series {
    Rat(LinearSeries<RatField>),
    Fin(LinearSeries<FieldCtx>),
}

/// Runs `$body` with `$f` bound to the series whatever its field.
#[macro_export]
macro_rules! on_series {
    ($s:expr, $f:ident => $body:expr) => {
        match $s {
            $crate::presets::Series::Rat($f) => $body,
            $crate::presets::Series::Fin($f) => $body,
        }
    };
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("{what}: expected a number, got {s:?}")))
}

/// Smallest truncation order whose `h` table reaches `index`.
fn auto_order(q: u64, index: usize) -> usize {
    let mut n = 1;
    while (q as usize).pow(n as u32 + 1) - 2 < index {
        n += 1;
    }
    n
}

pub fn parse(ctx: &CarlitzCtx, spec: &str, max_index: usize) -> Result<Series> {
    let q = ctx.q();
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "carlitz-exp" | "carlitz-log" => {
            let order = if arg.is_empty() { auto_order(q, max_index) } else { num(arg, "order")? };
            let f = if name == "carlitz-exp" { ctx.carlitz_exp(order) } else { ctx.carlitz_log(order) };
            Ok(Series::Rat(f))
        }
        "carlitz-binomial" => Ok(Series::Rat(ctx.carlitz_binomial(num(arg, "d")?)?)),
        "coeffs" => {
            let coeffs = arg.split(',').map(|c| RatFunc::parse(ctx.base(), c.trim())).collect::<Result<Vec<_>>>()?;
            Ok(Series::Rat(LinearSeries::polynomial(ctx.field(), q, coeffs)?))
        }
        "random" => {
            let parts: Vec<&str> = arg.split(':').collect();
            let seed = num(parts[0], "seed")?;
            let deg = parts.get(1).map_or(Ok(2), |s| num(s, "degree"))?;
            let m: u32 = parts.get(2).map_or(Ok(4), |s| num(s, "extension degree"))?;
            let k = FieldCtx::of_order(q.pow(m))?;
            Ok(Series::Fin(LinearSeries::random(&k, q, deg, seed)?))
        }
        "roots" => {
            let parts: Vec<&str> = arg.split(',').collect();
            if parts.len() < 3 {
                return Err(Error::Parse("roots:m,d,seed[,affine]".into()));
            }
            let m: u32 = num(parts[0], "m")?;
            let d: usize = num(parts[1], "d")?;
            let seed: u64 = num(parts[2], "seed")?;
            let affine = parts.get(3).map(|s| s.trim()) == Some("affine");
            let k = FieldCtx::of_order(q.pow(m))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..1000 {
                let basis: Vec<_> = (0..d).map(|_| k.random_nonzero(&mut rng)).collect();
                let shift = affine.then(|| k.random(&mut rng));
                match from_root_space(&k, q, &basis, shift) {
                    Ok(r) => {
                        let f = if affine { r.affine_series().expect("shift given").clone() } else { r.series };
                        return Ok(Series::Fin(f));
                    }
                    Err(Error::DependentBasis(_) | Error::Precondition(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::InvalidArgument(format!("no independent basis of size {d} found in F_{}", k.q())))
        }
        _ => Err(Error::Parse(format!(
            "unknown series {spec:?}; expected carlitz-exp, carlitz-log, carlitz-binomial:d, coeffs:..., random:seed or roots:m,d,seed"
        ))),
    }
}
