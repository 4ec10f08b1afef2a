//! Randomized checks of Theorems 2 and 5 over `F_{q^m}`, and the multinomial
//! congruence of Remark 5 §1.2.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{is_prime, prime_power, FieldCtx, FieldElem, Tuples};
use crate::report::{Status, VerifyReport};

/// Draws that hit a zero denominator are redrawn at most this many times.
const MAX_RESAMPLES: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Thm2,
    Thm5,
}

impl Which {
    pub fn label(self) -> &'static str {
        match self {
            Which::Thm2 => "thm2",
            Which::Thm5 => "thm5",
        }
    }
}

/// How to read Theorem 5's `Σ_i (M_j + θ_i B_ij)` and `Σ_i (μ + θ_i b_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    /// `M_j + Σ_i θ_i B_ij` and `μ + Σ_i θ_i b_i`.
    Affine,
    /// The constants summed over `i` as well, i.e. multiplied by `d`.
    Literal,
}

impl Reading {
    pub fn label(self) -> &'static str {
        match self {
            Reading::Affine => "affine",
            Reading::Literal => "literal",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Thm2Instance {
    pub field: FieldCtx,
    pub q: u64,
    pub b: Vec<FieldElem>,
    /// `big_b[i][j]` is `B_{ij}`, `d` rows of `s` entries.
    pub big_b: Vec<Vec<FieldElem>>,
}

#[derive(Clone, Debug)]
pub struct Thm5Instance {
    pub field: FieldCtx,
    pub q: u64,
    pub mu: FieldElem,
    pub m: Vec<FieldElem>,
    pub b: Vec<FieldElem>,
    pub big_b: Vec<Vec<FieldElem>>,
}

fn shape(b: &[FieldElem], big_b: &[Vec<FieldElem>]) -> Result<usize> {
    if big_b.len() != b.len() {
        return Err(Error::InvalidArgument(format!("B has {} rows but d = {}", big_b.len(), b.len())));
    }
    let s = big_b.first().map_or(0, Vec::len);
    if s == 0 || big_b.iter().any(|row| row.len() != s) {
        return Err(Error::InvalidArgument("B must be a non-empty d×s array".into()));
    }
    Ok(s)
}

fn thetas(k: &FieldCtx, q: u64, d: usize, exclude_zero: bool) -> Result<Vec<Vec<FieldElem>>> {
    let fq = k.subfield(q)?;
    if d == 0 {
        return Ok(if exclude_zero { vec![] } else { vec![vec![]] });
    }
    Ok(Tuples::new(fq, d, exclude_zero).collect())
}

fn dot(k: &FieldCtx, theta: &[FieldElem], xs: impl Iterator<Item = FieldElem>) -> FieldElem {
    theta.iter().zip(xs).fold(k.zero(), |acc, (t, x)| k.add(acc, k.mul(*t, x)))
}

impl Thm2Instance {
    pub fn d(&self) -> usize {
        self.b.len()
    }

    pub fn s(&self) -> usize {
        self.big_b.first().map_or(0, Vec::len)
    }

    pub fn to_json(&self) -> Value {
        let k = &self.field;
        json!({
            "b": self.b.iter().map(|x| k.to_json(*x)).collect::<Vec<_>>(),
            "B": self.big_b.iter().map(|r| r.iter().map(|x| k.to_json(*x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

impl Thm5Instance {
    pub fn d(&self) -> usize {
        self.b.len()
    }

    pub fn s(&self) -> usize {
        self.m.len()
    }

    pub fn to_json(&self) -> Value {
        let k = &self.field;
        json!({
            "mu": k.to_json(self.mu),
            "M": self.m.iter().map(|x| k.to_json(*x)).collect::<Vec<_>>(),
            "b": self.b.iter().map(|x| k.to_json(*x)).collect::<Vec<_>>(),
            "B": self.big_b.iter().map(|r| r.iter().map(|x| k.to_json(*x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Both sides of Theorem 2. A zero `Σ θ_i b_i` is a `DivisionByZero` error.
pub fn thm2_sides(inst: &Thm2Instance) -> Result<(FieldElem, FieldElem)> {
    let k = &inst.field;
    let s = shape(&inst.b, &inst.big_b)?;
    let d = inst.d();
    let mut factors = vec![k.zero(); s];
    let mut rhs = k.zero();
    for theta in thetas(k, inst.q, d, true)? {
        let v = dot(k, &theta, inst.b.iter().copied());
        let vinv = k.inv(v).ok_or(Error::DivisionByZero)?;
        let mut prod = k.one();
        for (j, fj) in factors.iter_mut().enumerate() {
            let n = dot(k, &theta, inst.big_b.iter().map(|row| row[j]));
            *fj = k.add(*fj, k.mul(n, vinv));
            prod = k.mul(prod, k.mul(n, vinv));
        }
        rhs = k.add(rhs, prod);
    }
    let lhs = factors.iter().fold(k.one(), |acc, &x| k.mul(acc, x));
    if s % 2 == 0 {
        rhs = k.neg(rhs);
    }
    Ok((lhs, rhs))
}

/// Both sides of Theorem 5 under the chosen reading.
pub fn thm5_sides(inst: &Thm5Instance, reading: Reading) -> Result<(FieldElem, FieldElem)> {
    let k = &inst.field;
    let s = shape(&inst.b, &inst.big_b)?;
    if inst.m.len() != s {
        return Err(Error::InvalidArgument(format!("M has {} entries but s = {s}", inst.m.len())));
    }
    let d = inst.d();
    let scale = match reading {
        Reading::Affine => k.one(),
        Reading::Literal => k.from_int(d as i64),
    };
    let mu = k.mul(scale, inst.mu);
    let mut factors = vec![k.zero(); s];
    let mut inv_sum = k.zero();
    let mut tail = k.zero();
    for theta in thetas(k, inst.q, d, false)? {
        let v = k.add(mu, dot(k, &theta, inst.b.iter().copied()));
        let vinv = k.inv(v).ok_or(Error::DivisionByZero)?;
        inv_sum = k.add(inv_sum, vinv);
        let mut prod = k.one();
        for (j, fj) in factors.iter_mut().enumerate() {
            let n = k.add(k.mul(scale, inst.m[j]), dot(k, &theta, inst.big_b.iter().map(|row| row[j])));
            *fj = k.add(*fj, k.mul(n, vinv));
            prod = k.mul(prod, n);
        }
        tail = k.add(tail, k.mul(prod, vinv));
    }
    let lhs = factors.iter().fold(k.one(), |acc, &x| k.mul(acc, x));
    let rhs = k.mul(k.pow(inv_sum, s as i64 - 1).expect("non-negative power"), tail);
    Ok((lhs, rhs))
}

/// Total degree of the cleared-denominator identity, the numerator of the
/// Schwartz–Zippel bound.
pub fn sz_degree(which: Which, q: u64, d: usize, s: usize) -> u64 {
    let qd = q.pow(d as u32);
    match which {
        // the projective classes of θ ≠ 0 share denominators
        Which::Thm2 => s as u64 * ((qd - 1) / (q - 1)),
        Which::Thm5 => s as u64 * qd,
    }
}

#[derive(Clone, Debug)]
pub struct RandomizedConfig {
    pub which: Which,
    pub q: u64,
    pub d: usize,
    pub s: usize,
    /// Extension degree: instances live in `F_{q^m}`.
    pub m: u32,
    pub trials: u64,
    pub seed: u64,
    pub reading: Reading,
    /// Harness self-test: negate the right-hand side.
    pub corrupt_sign: bool,
}

impl RandomizedConfig {
    pub fn new(which: Which, q: u64, d: usize, s: usize, m: u32, trials: u64, seed: u64) -> Self {
        RandomizedConfig { which, q, d, s, m, trials, seed, reading: Reading::Affine, corrupt_sign: false }
    }
}

struct Trial {
    lhs: FieldElem,
    rhs: FieldElem,
    resamples: u64,
    instance: Value,
}

fn random_vec(k: &FieldCtx, rng: &mut ChaCha8Rng, n: usize) -> Vec<FieldElem> {
    (0..n).map(|_| k.random(rng)).collect()
}

fn run_trial(k: &FieldCtx, cfg: &RandomizedConfig, index: u64) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ index);
    let mut resamples = 0;
    loop {
        let b = random_vec(k, &mut rng, cfg.d);
        let big_b: Vec<Vec<FieldElem>> = (0..cfg.d).map(|_| random_vec(k, &mut rng, cfg.s)).collect();
        let (sides, instance) = match cfg.which {
            Which::Thm2 => {
                let inst = Thm2Instance { field: k.clone(), q: cfg.q, b, big_b };
                (thm2_sides(&inst), inst.to_json())
            }
            Which::Thm5 => {
                let mu = k.random(&mut rng);
                let m = random_vec(k, &mut rng, cfg.s);
                let inst = Thm5Instance { field: k.clone(), q: cfg.q, mu, m, b, big_b };
                (thm5_sides(&inst, cfg.reading), inst.to_json())
            }
        };
        match sides {
            Ok((lhs, mut rhs)) => {
                if cfg.corrupt_sign {
                    rhs = k.neg(rhs);
                }
                return Ok(Trial { lhs, rhs, resamples, instance });
            }
            Err(Error::DivisionByZero) if resamples < MAX_RESAMPLES => resamples += 1,
            Err(Error::DivisionByZero) => return Err(Error::GuardExceeded(resamples)),
            Err(e) => return Err(e),
        }
    }
}

/// Runs `trials` independent random instances; passes iff every one agrees.
/// Trial `i` draws from a generator seeded with `seed ^ i`, so results do not
/// depend on scheduling.
pub fn verify_randomized(cfg: &RandomizedConfig) -> Result<VerifyReport> {
    let (p, e) = prime_power(cfg.q).ok_or(Error::NotPrime(cfg.q))?;
    if cfg.trials == 0 || cfg.m == 0 || cfg.d == 0 || cfg.s == 0 {
        return Err(Error::InvalidArgument("d, s, m and trials must be positive".into()));
    }
    let bound_ok = match cfg.which {
        Which::Thm2 => cfg.s as u64 <= cfg.q,
        Which::Thm5 => (cfg.s as u64) < cfg.q,
    };
    if !bound_ok {
        return Err(Error::Precondition(format!("{} needs s {} q", cfg.which.label(), if cfg.which == Which::Thm2 { "≤" } else { "<" })));
    }
    if cfg.which == Which::Thm5 && cfg.reading == Reading::Literal && cfg.d as u64 % p == 0 {
        return Err(Error::Precondition(format!(
            "under the literal reading the θ = 0 denominator is d·μ = 0 when p | d (p = {p}, d = {})",
            cfg.d
        )));
    }
    if cfg.which == Which::Thm2 && (cfg.m as usize) < cfg.d {
        return Err(Error::Precondition(format!("F_{{q^{}}} has no {} independent elements over F_q", cfg.m, cfg.d)));
    }
    let k = FieldCtx::with_search(p as u32, e * cfg.m)?;
    let trials: Vec<Trial> =
        (0..cfg.trials).into_par_iter().map(|i| run_trial(&k, cfg, i)).collect::<Result<Vec<_>>>()?;

    let passed = trials.iter().filter(|t| t.lhs == t.rhs).count() as u64;
    let resamples: u64 = trials.iter().map(|t| t.resamples).sum();
    let first_bad = trials.iter().position(|t| t.lhs != t.rhs);
    let shown = &trials[first_bad.unwrap_or(trials.len() - 1)];
    let degree = sz_degree(cfg.which, cfg.q, cfg.d, cfg.s);
    let order = k.q() as f64;
    let params = json!({
        "q": cfg.q, "d": cfg.d, "s": cfg.s, "m": cfg.m, "field": format!("F_{}", k.q()),
        "trials": cfg.trials, "seed": cfg.seed, "reading": cfg.reading.label(),
    });
    let mut r = VerifyReport::compare(
        cfg.which.label(),
        params,
        k.to_json(shown.lhs),
        k.to_json(shown.rhs),
        first_bad.is_none(),
        false,
    );
    r.status = if first_bad.is_none() { Status::Pass } else { Status::Fail };
    if let Some(i) = first_bad {
        r.witness = Some(json!({
            "trial": i, "instance": shown.instance,
            "lhs": k.to_json(shown.lhs), "rhs": k.to_json(shown.rhs),
        }));
    }
    r.extra.insert("passed".into(), json!(passed));
    r.extra.insert("resamples".into(), json!(resamples));
    r.extra.insert("sz_degree".into(), json!(degree));
    r.extra.insert("sz_bound_per_trial".into(), json!(degree as f64 / order));
    if cfg.corrupt_sign {
        r.extra.insert("corrupted".into(), json!(true));
    }
    Ok(r)
}

/// Multinomial coefficient `top! / Π parts!` modulo a prime `p`, digit by
/// digit in base `p` (Lucas). Any carry makes it vanish.
pub fn multinomial_mod_p(p: u64, top: u64, parts: &[u64]) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let sum = parts.iter().try_fold(0u64, |acc, &x| acc.checked_add(x));
    if sum != Some(top) {
        return Err(Error::InvalidArgument(format!("parts sum to {sum:?}, not {top}")));
    }
    let mut top = top;
    let mut parts = parts.to_vec();
    let mut acc = 1u64;
    while top > 0 {
        let t = top % p;
        let digits: Vec<u64> = parts.iter().map(|x| x % p).collect();
        if digits.iter().sum::<u64>() != t {
            return Ok(0);
        }
        // t! / Π digit! with t < p, as a running product of binomials
        let mut left = t;
        for &dg in &digits {
            acc = acc * binom_small(left, dg, p) % p;
            left -= dg;
        }
        top /= p;
        for x in parts.iter_mut() {
            *x /= p;
        }
    }
    Ok(acc)
}

fn binom_small(n: u64, k: u64, p: u64) -> u64 {
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * modpow(den, p - 2, p) % p
}

fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Compositions of `total` into `d` positive parts divisible by `q - 1`.
pub fn even_compositions(q: u64, total: u64, d: usize) -> Vec<Vec<u64>> {
    let step = q - 1;
    if d == 0 || total % step != 0 {
        return vec![];
    }
    fn rec(units: u64, left: usize, step: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 1 {
            if units > 0 {
                cur.push(units * step);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for u in 1..units {
            cur.push(u * step);
            rec(units - u, left - 1, step, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total / step, d, step, &mut Vec::new(), &mut out);
    out
}

/// Remark 5 §1.2: for `s ≤ q` and `m_i > 0` 'even' with
/// `Σ m_i = Σ (q^{k_i} - 1)`,
/// `multinomial(Σ m_i; m) ≡ (-1)^{(d-1)(s-1)} Σ' Π_i multinomial(q^{k_i}-1; i_·)`
/// mod `p`, where `Σ'` runs over ways to write `m` as a sum of one tuple per
/// `i`, each with positive 'even' parts.
pub fn verify_remark5(q: u64, d: usize, k_list: &[u32], m_parts: &[u64]) -> Result<VerifyReport> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrime(q))?;
    let s = k_list.len();
    if s == 0 || s as u64 > q {
        return Err(Error::Precondition(format!("Remark 5 needs 1 ≤ s ≤ q, got s = {s}")));
    }
    if m_parts.len() != d || d == 0 {
        return Err(Error::InvalidArgument(format!("expected {d} parts m_i, got {}", m_parts.len())));
    }
    if m_parts.iter().any(|&m| m == 0 || m % (q - 1) != 0) {
        return Err(Error::Precondition("every m_i must be positive and 'even'".into()));
    }
    let tops: Vec<u64> = k_list.iter().map(|&k| q.pow(k) - 1).collect();
    let top: u64 = tops.iter().sum();
    if m_parts.iter().sum::<u64>() != top {
        return Err(Error::Precondition(format!("Σ m_i must equal Σ (q^k_i - 1) = {top}")));
    }
    let lhs = multinomial_mod_p(p, top, m_parts)?;

    // states: partial sums of chosen tuples, weighted by the product so far
    let mut states: HashMap<Vec<u64>, u64> = HashMap::from([(vec![0; d], 1)]);
    for &t in &tops {
        let comps = even_compositions(q, t, d);
        let weights: Vec<u64> = comps.iter().map(|c| multinomial_mod_p(p, t, c)).collect::<Result<_>>()?;
        let mut next: HashMap<Vec<u64>, u64> = HashMap::new();
        for (partial, w) in &states {
            for (c, cw) in comps.iter().zip(&weights) {
                let sum: Vec<u64> = partial.iter().zip(c).map(|(a, b)| a + b).collect();
                if sum.iter().zip(m_parts).any(|(a, m)| a > m) {
                    continue;
                }
                let e = next.entry(sum).or_insert(0);
                *e = (*e + w * cw) % p;
            }
        }
        states = next;
    }
    let sigma = states.get(m_parts).copied().unwrap_or(0);
    let rhs = if ((d - 1) * (s - 1)) % 2 == 1 { (p - sigma) % p } else { sigma };
    let params = json!({ "q": q, "p": p, "d": d, "s": s, "k": k_list, "m": m_parts, "top": top });
    Ok(VerifyReport::compare("remark5", params, json!(lhs), json!(rhs), lhs == rhs, false))
}

/// All admissible `m` for given `q`, `d`, `k_list`, each checked.
pub fn verify_remark5_all(q: u64, d: usize, k_list: &[u32]) -> Result<Vec<VerifyReport>> {
    let top: u64 = k_list.iter().map(|&k| q.pow(k) - 1).sum();
    even_compositions(q, top, d).iter().map(|m| verify_remark5(q, d, k_list, m)).collect()
}
