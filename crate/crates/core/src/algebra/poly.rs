use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// A polynomial in `t` over a finite field, ascending coefficients with no
/// trailing zeros (the zero polynomial is empty).
#[derive(Clone)]
pub struct Poly {
    ctx: FieldCtx,
    c: Vec<u32>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.c == other.c
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.id().hash(state);
        self.c.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

fn trim(c: &mut Vec<u32>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

impl Poly {
    pub(crate) fn from_raw(ctx: &FieldCtx, mut c: Vec<u32>) -> Self {
        trim(&mut c);
        Poly { ctx: ctx.clone(), c }
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.c
    }

    pub fn from_coeffs(ctx: &FieldCtx, coeffs: &[FieldElem]) -> Self {
        let raw = coeffs
            .iter()
            .map(|x| {
                assert_eq!(x.ctx_id(), ctx.id(), "coefficient from another field");
                x.value()
            })
            .collect();
        Self::from_raw(ctx, raw)
    }

    /// Coefficients given as integers in the prime subfield.
    pub fn from_ints(ctx: &FieldCtx, coeffs: &[i64]) -> Self {
        let raw = coeffs.iter().map(|&n| ctx.from_int(n).value()).collect();
        Self::from_raw(ctx, raw)
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        Poly { ctx: ctx.clone(), c: Vec::new() }
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Self::constant(ctx, ctx.one())
    }

    pub fn constant(ctx: &FieldCtx, c: FieldElem) -> Self {
        Self::from_raw(ctx, vec![c.value()])
    }

    /// `t`.
    pub fn t(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, ctx.one(), 1)
    }

    pub fn monomial(ctx: &FieldCtx, c: FieldElem, k: usize) -> Self {
        let mut v = vec![0u32; k + 1];
        v[k] = c.value();
        Self::from_raw(ctx, v)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.ctx.elem(self.c.get(i).copied().unwrap_or(0))
    }

    pub fn coeffs(&self) -> Vec<FieldElem> {
        self.c.iter().map(|&v| self.ctx.elem(v)).collect()
    }

    pub fn leading(&self) -> FieldElem {
        self.ctx.elem(self.c.last().copied().unwrap_or(0))
    }

    pub fn is_monic(&self) -> bool {
        self.c.last() == Some(&1)
    }

    fn same_ctx(&self, other: &Poly) {
        assert!(self.ctx == other.ctx, "polynomials over different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_ctx(other);
        let (long, short) = if self.c.len() >= other.c.len() { (self, other) } else { (other, self) };
        let mut c = long.c.clone();
        for (i, &y) in short.c.iter().enumerate() {
            c[i] = self.ctx.add_raw(c[i], y);
        }
        Self::from_raw(&self.ctx, c)
    }

    pub fn neg(&self) -> Poly {
        let c = self.c.iter().map(|&x| self.ctx.neg_raw(x)).collect();
        Self::from_raw(&self.ctx, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: FieldElem) -> Poly {
        let k = k.value();
        let c = self.c.iter().map(|&x| self.ctx.mul_raw(x, k)).collect();
        Self::from_raw(&self.ctx, c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_ctx(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let n = self.c.len() + other.c.len() - 1;
        if self.ctx.e() == 1 {
            let p = self.ctx.p() as u64;
            // products are below p^2 <= 2^32; flush well before u64 overflow
            let mut acc = vec![0u64; n];
            let flush_every = (u64::MAX / ((p - 1) * (p - 1)).max(1)).min(1 << 20) as usize;
            let mut since = 0usize;
            for (i, &x) in self.c.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let x = x as u64;
                for (j, &y) in other.c.iter().enumerate() {
                    acc[i + j] += x * y as u64;
                }
                since += 1;
                if since >= flush_every {
                    for a in acc.iter_mut() {
                        *a %= p;
                    }
                    since = 0;
                }
            }
            let c = acc.into_iter().map(|a| (a % p) as u32).collect();
            return Self::from_raw(&self.ctx, c);
        }
        let mut c = vec![0u32; n];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.c.iter().enumerate() {
                c[i + j] = self.ctx.add_raw(c[i + j], self.ctx.mul_raw(x, y));
            }
        }
        Self::from_raw(&self.ctx, c)
    }

    pub fn pow(&self, mut k: u64) -> Poly {
        let mut result = Self::one(&self.ctx);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Replaces `a` by `a mod b` in place and returns the quotient when asked.
    fn divrem_raw(ctx: &FieldCtx, a: &mut Vec<u32>, b: &[u32], want_quot: bool) -> Vec<u32> {
        let db = b.len() - 1;
        let lead_inv = ctx.inv_raw(b[db]).expect("nonzero leading coefficient");
        let mut quot = if want_quot && a.len() > db { vec![0u32; a.len() - db] } else { Vec::new() };
        let prime = ctx.e() == 1;
        let p = ctx.p();
        while a.len() > db {
            let top = a.len() - 1;
            let coef = ctx.mul_raw(a[top], lead_inv);
            let shift = top - db;
            if want_quot {
                quot[shift] = coef;
            }
            if coef != 0 {
                if prime {
                    let negc = (p - coef) as u64;
                    for (i, &bi) in b.iter().enumerate() {
                        if bi != 0 {
                            let v = a[shift + i] as u64 + negc * bi as u64;
                            a[shift + i] = (v % p as u64) as u32;
                        }
                    }
                } else {
                    for (i, &bi) in b.iter().enumerate() {
                        let prod = ctx.mul_raw(coef, bi);
                        a[shift + i] = ctx.sub_raw(a[shift + i], prod);
                    }
                }
            }
            a[top] = 0;
            trim(a);
        }
        quot
    }

    /// Quotient and remainder with `self = q * divisor + r`, `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_ctx(divisor);
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = self.c.clone();
        let q = Self::divrem_raw(&self.ctx, &mut r, &divisor.c, true);
        Ok((Self::from_raw(&self.ctx, q), Self::from_raw(&self.ctx, r)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        self.same_ctx(divisor);
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = self.c.clone();
        Self::divrem_raw(&self.ctx, &mut r, &divisor.c, false);
        Ok(Self::from_raw(&self.ctx, r))
    }

    /// Exact quotient; panics when `divisor` does not divide `self`.
    pub(crate) fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem(divisor).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.same_ctx(other);
        let mut a = self.c.clone();
        let mut b = other.c.clone();
        while !b.is_empty() {
            Self::divrem_raw(&self.ctx, &mut a, &b, false);
            std::mem::swap(&mut a, &mut b);
        }
        Self::from_raw(&self.ctx, a).monic()
    }

    /// `self / leading coefficient`; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.c.last() {
            None | Some(1) => self.clone(),
            Some(&l) => {
                let inv = self.ctx.inv_raw(l).expect("nonzero");
                let c = self.c.iter().map(|&x| self.ctx.mul_raw(x, inv)).collect();
                Self::from_raw(&self.ctx, c)
            }
        }
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let xv = x.value();
        let v = self.c.iter().rev().fold(0u32, |acc, &c| self.ctx.add_raw(self.ctx.mul_raw(acc, xv), c));
        self.ctx.elem(v)
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| self.ctx.mul_raw(x, self.ctx.from_int(i as i64).value()))
            .collect();
        Self::from_raw(&self.ctx, c)
    }

    /// `self^{Q^n}` computed as `Σ c_k^{Q^n} t^{k Q^n}`; `Q` must be a power
    /// of the characteristic.
    pub fn frobenius(&self, big_q: u64, n: u32) -> Poly {
        let step = big_q.pow(n) as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0u32; (self.c.len() - 1) * step + 1];
        for (k, &x) in self.c.iter().enumerate() {
            c[k * step] = self.ctx.frobenius_raw(x, big_q, n);
        }
        Self::from_raw(&self.ctx, c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self.coeffs().into_iter().map(|x| self.ctx.to_json(x)).collect();
        json!({ "coeffs": coeffs })
    }

    /// Parses the text form written by `Display`, e.g. `2*t^3+t+1`,
    /// `t^9-t` or `[1,1]*t^2+[0,1]`.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<Poly> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        let mut depth = 0i32;
        for ch in s.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    cur.push(ch);
                }
                ']' => {
                    depth -= 1;
                    cur.push(ch);
                }
                '+' | '-' if depth == 0 => {
                    if !cur.is_empty() {
                        terms.push((negative, std::mem::take(&mut cur)));
                    } else if !terms.is_empty() || ch == '+' {
                        return Err(Error::Parse(format!("dangling sign in {text:?}")));
                    }
                    negative = ch == '-';
                }
                _ => cur.push(ch),
            }
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("trailing sign in {text:?}")));
        }
        terms.push((negative, cur));
        let mut acc = Poly::zero(ctx);
        for (neg, term) in terms {
            let (coef_txt, pow) = match term.find('t') {
                None => (term.as_str(), 0usize),
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let tail = &term[pos + 1..];
                    let pow = if tail.is_empty() {
                        1
                    } else if let Some(e) = tail.strip_prefix('^') {
                        e.parse::<usize>().map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?
                    } else {
                        return Err(Error::Parse(format!("bad term {term:?}")));
                    };
                    (head, pow)
                }
            };
            let coef = if coef_txt.is_empty() {
                ctx.one()
            } else if let Some(inner) = coef_txt.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
                let coords = inner
                    .split(',')
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse::<u32>().map_err(|_| Error::Parse(format!("bad coordinate {x:?}"))))
                    .collect::<Result<Vec<u32>>>()?;
                ctx.from_coords(&coords)?
            } else {
                let n = coef_txt
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {coef_txt:?}")))?;
                ctx.from_int(n)
            };
            let coef = if neg { ctx.neg(coef) } else { coef };
            acc = acc.add(&Poly::monomial(ctx, coef, pow));
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.c.len()).rev() {
            let v = self.c[k];
            if v == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let coef = self.ctx.format(self.ctx.elem(v));
            match (k, v == 1) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{coef}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{coef}*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// All monic polynomials of degree `d`, ordered by the lower coefficients
/// read as a base-`q` number (constant term varies fastest).
pub fn enumerate_monic(ctx: &FieldCtx, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = ctx.q() as u64;
    let count = q.checked_pow(d as u32).expect("enumeration size fits in u64");
    (0..count).map(move |mut code| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push((code % q) as u32);
            code /= q;
        }
        c.push(1);
        Poly::from_raw(ctx, c)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn f3() -> FieldCtx {
        FieldCtx::new(3, 1, None).unwrap()
    }

    #[test]
    fn product_of_linear_factors() {
        let k = f3();
        let t = Poly::t(&k);
        let lhs = t.pow(3).sub(&t);
        let rhs = t
            .mul(&t.add(&Poly::one(&k)))
            .mul(&t.add(&Poly::constant(&k, k.from_int(2))));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gcd_is_monic() {
        let k = f3();
        let a = Poly::parse(&k, "t^3-t").unwrap();
        let b = Poly::parse(&k, "t^2-1").unwrap();
        assert_eq!(a.gcd(&b), b);
        let c = Poly::parse(&k, "2*t^2+2").unwrap();
        assert_eq!(c.gcd(&Poly::zero(&k)), Poly::parse(&k, "t^2+1").unwrap());
        assert!(Poly::zero(&k).gcd(&Poly::zero(&k)).is_zero());
    }

    #[test]
    fn derivative_in_characteristic() {
        let k = f3();
        assert!(Poly::parse(&k, "t^9").unwrap().derivative().is_zero());
        assert_eq!(
            Poly::parse(&k, "t^4+t").unwrap().derivative(),
            Poly::parse(&k, "t^3+1").unwrap()
        );
    }

    #[test]
    fn divrem_reconstructs() {
        let k = FieldCtx::of_order(4).unwrap();
        let a = Poly::parse(&k, "[0,1]*t^7+t^3+[1,1]").unwrap();
        let b = Poly::parse(&k, "[1,1]*t^2+t").unwrap();
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg() < b.deg());
        assert!(matches!(a.divrem(&Poly::zero(&k)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn frobenius_matches_pow() {
        let k = FieldCtx::of_order(9).unwrap();
        let a = Poly::parse(&k, "[2,1]*t^2+t+[0,1]").unwrap();
        assert_eq!(a.frobenius(3, 1), a.pow(3));
        assert_eq!(a.frobenius(3, 2), a.pow(9));
    }

    #[test]
    fn text_round_trip() {
        let k = f3();
        for s in ["2*t^3+t", "t^9+2*t", "1", "0", "t"] {
            assert_eq!(Poly::parse(&k, s).unwrap().to_string(), s);
        }
        assert_eq!(Poly::parse(&k, "t^3-t").unwrap().to_string(), "t^3+2*t");
        let k9 = FieldCtx::of_order(9).unwrap();
        let p = Poly::parse(&k9, "[2,1]*t^2+[0,1]").unwrap();
        assert_eq!(p.to_string(), "[2,1]*t^2+[0,1]");
        assert_eq!(p.to_json(), json!({"coeffs": [[0,1],[0,0],[2,1]]}));
        assert!(Poly::parse(&k, "t^").is_err());
        assert!(Poly::parse(&k, "3*t+").is_err());
    }

    #[test]
    fn eval_horner() {
        let k = f3();
        let a = Poly::parse(&k, "t^3-t").unwrap();
        for x in k.elements() {
            assert_eq!(a.eval(x), k.zero());
        }
    }

    #[test]
    fn monic_enumeration() {
        let k = f3();
        let d1: Vec<String> = enumerate_monic(&k, 1).map(|p| p.to_string()).collect();
        assert_eq!(d1, vec!["t", "t+1", "t+2"]);
        let k2 = FieldCtx::of_order(2).unwrap();
        assert_eq!(enumerate_monic(&k2, 2).count(), 4);
        let set: HashSet<Poly> = enumerate_monic(&k, 3).collect();
        assert_eq!(set.len(), 27);
        assert!(set.iter().all(|p| p.is_monic() && p.degree() == Some(3)));
        assert_eq!(enumerate_monic(&k, 0).collect::<Vec<_>>(), vec![Poly::one(&k)]);
    }
}
