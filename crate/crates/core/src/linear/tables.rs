//! The coefficient families of `h = z f'/f` and `a = z f'/(1-f)`.
//!
//! `h` and `a` are expanded in `z`; for a polynomial `f` of degree `q^d`,
//! `-h = Σ H_m u^m` and `-a = Σ α_m u^m` are expanded in `u = 1/z`. Each
//! engine is the linear recursion obtained by comparing coefficients in
//! `h·f = f_0 z` or `a·(1-f) = f_0 z`.

use std::fmt;

use serde_json::{json, Map};

use super::series::LinearSeries;
use crate::coeff::CoeffField;
use crate::error::{Error, Result};
use crate::report::VerifyReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `h_m`, coefficients of `z f'/f` in `z`.
    SmallH,
    /// `a_m`, coefficients of `z f'/(1-f)` in `z`.
    SmallA,
    /// `H_m`, coefficients of `-h` in `1/z`.
    BigH,
    /// `α_m`, coefficients of `-a` in `1/z`.
    Alpha,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::SmallH => "h",
            Family::SmallA => "a",
            Family::BigH => "H",
            Family::Alpha => "alpha",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "h" => Ok(Family::SmallH),
            "a" => Ok(Family::SmallA),
            "H" => Ok(Family::BigH),
            "alpha" | "α" => Ok(Family::Alpha),
            other => Err(Error::Parse(format!("unknown family {other:?}; expected h, a, H or alpha"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Values of one family at every index `0..=N`.
#[derive(Clone, Debug)]
pub struct CoeffTable<K: CoeffField> {
    family: Family,
    values: Vec<K::Elem>,
    /// Set when `f_0 = 0`, where `h` and `a` vanish identically.
    degenerate: bool,
    source: LinearSeries<K>,
}

impl<K: CoeffField> CoeffTable<K> {
    pub fn family(&self) -> Family {
        self.family
    }

    /// Largest index held.
    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn source(&self) -> &LinearSeries<K> {
        &self.source
    }

    pub fn field(&self) -> &K {
        self.source.field()
    }

    pub fn values(&self) -> &[K::Elem] {
        &self.values
    }

    pub fn get(&self, m: usize) -> Result<&K::Elem> {
        self.values.get(m).ok_or(Error::TableTooShort { need: m, have: self.bound() })
    }

    /// A copy with index `m` overwritten; used by harness self-tests.
    pub fn corrupted(&self, m: usize, value: K::Elem) -> Self {
        let mut t = self.clone();
        t.values[m] = value;
        t
    }

    pub fn to_json(&self) -> serde_json::Value {
        let k = self.field();
        let mut values = Map::new();
        for (i, v) in self.values.iter().enumerate() {
            if !k.is_zero(v) {
                values.insert(i.to_string(), k.to_json(v));
            }
        }
        json!({
            "family": self.family.label(),
            "N": self.bound(),
            "degenerate": self.degenerate,
            "values": values,
        })
    }
}

/// Largest `N` for which the family can be tabulated from `f`, or `None`
/// when unbounded (polynomial input).
pub fn max_bound<K: CoeffField>(f: &LinearSeries<K>, family: Family) -> Option<usize> {
    if f.is_polynomial() {
        return None;
    }
    // h_{m-1} and a_m read f_i for q^i ≤ m
    let top = (f.q() as u128).checked_pow(f.order() as u32 + 1).unwrap_or(u128::MAX);
    let top = top.min(usize::MAX as u128) as usize;
    match family {
        Family::SmallH => Some(top.saturating_sub(2)),
        Family::SmallA => Some(top - 1),
        Family::BigH | Family::Alpha => Some(0),
    }
}

fn check_bound<K: CoeffField>(f: &LinearSeries<K>, family: Family, n: usize) -> Result<()> {
    match max_bound(f, family) {
        Some(max) if n > max => Err(Error::SeriesTooShort { order: f.order(), need: n }),
        _ => Ok(()),
    }
}

/// Powers `q^i ≤ limit` for `i ≥ 1`, with their indices.
fn q_powers(q: u64, limit: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut qi = q as usize;
    let mut i = 1;
    while qi <= limit {
        out.push((i, qi));
        i += 1;
        match qi.checked_mul(q as usize) {
            Some(next) => qi = next,
            None => break,
        }
    }
    out
}

/// `h_0 = 1`, `h_{m-1} = -f_0^{-1} Σ_{i≥1} f_i h_{m-q^i}` for `2 ≤ m ≤ N+1`.
pub fn h_table<K: CoeffField>(f: &LinearSeries<K>, n: usize) -> Result<CoeffTable<K>> {
    let k = f.field();
    if k.is_zero(f.f0()) {
        return Ok(CoeffTable { family: Family::SmallH, values: vec![k.zero(); n + 1], degenerate: true, source: f.clone() });
    }
    check_bound(f, Family::SmallH, n)?;
    let f0_inv = k.inv(f.f0()).expect("nonzero f_0");
    let powers = q_powers(f.q(), n + 1);
    let fs: Vec<K::Elem> = powers.iter().map(|&(i, _)| f.coeff(i)).collect::<Result<_>>()?;
    let mut h = Vec::with_capacity(n + 1);
    h.push(k.one());
    for m in 2..=n + 1 {
        let mut acc = k.zero();
        for (&(_, qi), fi) in powers.iter().zip(&fs) {
            if qi > m {
                break;
            }
            let prev = &h[m - qi];
            if k.is_zero(fi) || k.is_zero(prev) {
                continue;
            }
            acc = k.add(&acc, &k.mul(fi, prev));
        }
        h.push(k.neg(&k.mul(&f0_inv, &acc)));
    }
    Ok(CoeffTable { family: Family::SmallH, values: h, degenerate: false, source: f.clone() })
}

/// `a_0 = 0`, `a_m = f_0 δ_{m,1} + f_0 a_{m-1} + Σ_{i≥1} f_i a_{m-q^i}`.
pub fn a_table<K: CoeffField>(f: &LinearSeries<K>, n: usize) -> Result<CoeffTable<K>> {
    let k = f.field();
    let degenerate = k.is_zero(f.f0());
    if degenerate {
        return Ok(CoeffTable { family: Family::SmallA, values: vec![k.zero(); n + 1], degenerate, source: f.clone() });
    }
    check_bound(f, Family::SmallA, n)?;
    let f0 = f.f0().clone();
    let powers = q_powers(f.q(), n);
    let fs: Vec<K::Elem> = powers.iter().map(|&(i, _)| f.coeff(i)).collect::<Result<_>>()?;
    let mut a = Vec::with_capacity(n + 1);
    a.push(k.zero());
    for m in 1..=n {
        let mut acc = k.mul(&f0, &a[m - 1]);
        if m == 1 {
            acc = k.add(&acc, &f0);
        }
        for (&(_, qi), fi) in powers.iter().zip(&fs) {
            if qi > m {
                break;
            }
            let prev = &a[m - qi];
            if k.is_zero(fi) || k.is_zero(prev) {
                continue;
            }
            acc = k.add(&acc, &k.mul(fi, prev));
        }
        a.push(acc);
    }
    Ok(CoeffTable { family: Family::SmallA, values: a, degenerate: false, source: f.clone() })
}

fn polynomial_parts<K: CoeffField>(f: &LinearSeries<K>) -> Result<(usize, usize, K::Elem)> {
    let d = f.degree_exp()?;
    let qd = (f.q() as usize).checked_pow(d as u32).ok_or(Error::InvalidArgument("degree too large".into()))?;
    let fd_inv = f.field().inv(&f.coeffs()[d]).expect("leading coefficient is nonzero");
    Ok((d, qd, fd_inv))
}

/// `f_d H_m = -f_0 δ_{m,q^d-1} - Σ_{j<d} f_j H_{m-q^d+q^j}`.
#[allow(non_snake_case)]
pub fn H_table<K: CoeffField>(f: &LinearSeries<K>, n: usize) -> Result<CoeffTable<K>> {
    let (d, qd, fd_inv) = polynomial_parts(f)?;
    let k = f.field();
    let lower: Vec<(usize, K::Elem)> = (0..d)
        .map(|j| ((f.q() as usize).pow(j as u32), f.coeffs()[j].clone()))
        .filter(|(_, c)| !k.is_zero(c))
        .collect();
    let mut h: Vec<K::Elem> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m + 1 < qd {
            h.push(k.zero());
            continue;
        }
        let mut acc = if m + 1 == qd { f.f0().clone() } else { k.zero() };
        for (qj, fj) in &lower {
            let idx = m + qj - qd;
            if !k.is_zero(&h[idx]) {
                acc = k.add(&acc, &k.mul(fj, &h[idx]));
            }
        }
        h.push(k.neg(&k.mul(&fd_inv, &acc)));
    }
    Ok(CoeffTable { family: Family::BigH, values: h, degenerate: false, source: f.clone() })
}

/// `f_d α_m = f_0 δ_{m,q^d-1} + α_{m-q^d} - Σ_{j<d} f_j α_{m-q^d+q^j}`.
pub fn alpha_table<K: CoeffField>(f: &LinearSeries<K>, n: usize) -> Result<CoeffTable<K>> {
    let (d, qd, fd_inv) = polynomial_parts(f)?;
    let k = f.field();
    let lower: Vec<(usize, K::Elem)> = (0..d)
        .map(|j| ((f.q() as usize).pow(j as u32), f.coeffs()[j].clone()))
        .filter(|(_, c)| !k.is_zero(c))
        .collect();
    let mut al: Vec<K::Elem> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m + 1 < qd {
            al.push(k.zero());
            continue;
        }
        let mut acc = if m + 1 == qd { f.f0().clone() } else { k.zero() };
        if m >= qd {
            acc = k.add(&acc, &al[m - qd]);
        }
        for (qj, fj) in &lower {
            let idx = m + qj - qd;
            if !k.is_zero(&al[idx]) {
                acc = k.sub(&acc, &k.mul(fj, &al[idx]));
            }
        }
        al.push(k.mul(&fd_inv, &acc));
    }
    Ok(CoeffTable { family: Family::Alpha, values: al, degenerate: false, source: f.clone() })
}

/// Builds the requested family.
pub fn table<K: CoeffField>(f: &LinearSeries<K>, family: Family, n: usize) -> Result<CoeffTable<K>> {
    match family {
        Family::SmallH => h_table(f, n),
        Family::SmallA => a_table(f, n),
        Family::BigH => H_table(f, n),
        Family::Alpha => alpha_table(f, n),
    }
}

/// Checks `c_{pm} = c_m^p` for every `pm ≤ N`.
pub fn check_ppower<K: CoeffField>(tab: &CoeffTable<K>) -> VerifyReport {
    let k = tab.field();
    let p = k.characteristic() as usize;
    let n = tab.bound();
    let mut violations = Vec::new();
    let mut checked = 0usize;
    for m in 0..=n / p {
        checked += 1;
        if tab.values[p * m] != k.pow(&tab.values[m], p as u64) {
            violations.push(p * m);
        }
    }
    let params = json!({ "family": tab.family.label(), "N": n, "p": p, "q": tab.source.q() });
    match violations.first() {
        None => VerifyReport::compare("ppower", params, json!({ "checked": checked }), json!({ "checked": checked }), true, false),
        Some(&idx) => {
            let lhs = k.to_json(&tab.values[idx]);
            let rhs = k.to_json(&k.pow(&tab.values[idx / p], p as u64));
            let mut r = VerifyReport::compare("ppower", params, lhs, rhs, false, false);
            r.witness = Some(json!({ "index": idx, "violations": violations }));
            r
        }
    }
}
