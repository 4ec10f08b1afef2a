//! Truncated Laurent series in `u = 1/t` with an explicit absolute precision.
//!
//! A series stores the coefficients of `u^v, u^{v+1}, ...` below its
//! precision `N`; anything at exponent `>= N` is unknown. Results of
//! arithmetic carry the precision that the inputs actually justify.

use std::fmt;

use serde_json::json;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

#[derive(Clone)]
pub struct LaurentSeries {
    ctx: FieldCtx,
    /// Exponent of the first stored coefficient; equals `prec` for a series
    /// that is zero to precision.
    val: i64,
    coeffs: Vec<u32>,
    prec: i64,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let k = self.val + i as i64;
            let cs = self.ctx.format(self.ctx.elem(c));
            if c == 1 {
                write!(f, "u^{k}")?;
            } else {
                write!(f, "{cs}*u^{k}")?;
            }
        }
        if first {
            write!(f, "O(u^{})", self.prec)
        } else {
            write!(f, " + O(u^{})", self.prec)
        }
    }
}

impl LaurentSeries {
    fn normalized(ctx: &FieldCtx, mut val: i64, mut coeffs: Vec<u32>, prec: i64) -> Self {
        let keep = (prec - val).max(0) as usize;
        coeffs.truncate(keep);
        let lead = coeffs.iter().position(|&c| c != 0);
        match lead {
            None => {
                coeffs.clear();
                val = prec;
            }
            Some(k) => {
                coeffs.drain(..k);
                val += k as i64;
            }
        }
        LaurentSeries { ctx: ctx.clone(), val, coeffs, prec }
    }

    /// The series known to be zero below `prec`.
    pub fn zero(ctx: &FieldCtx, prec: i64) -> Self {
        LaurentSeries { ctx: ctx.clone(), val: prec, coeffs: Vec::new(), prec }
    }

    pub fn one(ctx: &FieldCtx, prec: i64) -> Self {
        Self::normalized(ctx, 0, vec![1], prec)
    }

    /// Builds a series from explicit coefficients of `u^val, u^{val+1}, ...`.
    pub fn from_coeffs(ctx: &FieldCtx, val: i64, coeffs: &[FieldElem], prec: i64) -> Self {
        Self::normalized(ctx, val, coeffs.iter().map(|c| c.value()).collect(), prec)
    }

    /// Expansion of `r` at infinity to absolute precision `prec`; yields the
    /// zero-to-precision series when `r` has no terms below `prec`.
    pub fn expand(r: &RatFunc, prec: i64) -> Self {
        let ctx = r.ctx().clone();
        if r.is_zero() {
            return Self::zero(&ctx, prec);
        }
        let num = r.num().raw();
        let den = r.den().raw();
        let dn = num.len() - 1;
        let dd = den.len() - 1;
        let v = dd as i64 - dn as i64;
        let len = prec - v;
        if len <= 0 {
            return Self::zero(&ctx, prec);
        }
        let len = len as usize;
        // r = u^v * rev(num)(u) / rev(den)(u), rev(den)(0) = 1
        let mut out = vec![0u32; len];
        for n in 0..len {
            let mut c = if n <= dn { num[dn - n] } else { 0 };
            for i in 1..=n.min(dd) {
                let di = den[dd - i];
                if di != 0 {
                    c = ctx.sub_raw(c, ctx.mul_raw(di, out[n - i]));
                }
            }
            out[n] = c;
        }
        Self::normalized(&ctx, v, out, prec)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Valuation; equals the precision when the series is zero to precision.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `u^k`, or `None` when `k` is at or beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<FieldElem> {
        if k >= self.prec {
            return None;
        }
        let v = if k < self.val { 0 } else { self.coeffs.get((k - self.val) as usize).copied().unwrap_or(0) };
        Some(self.ctx.elem(v))
    }

    fn raw_at(&self, k: i64) -> u32 {
        if k < self.val {
            0
        } else {
            self.coeffs.get((k - self.val) as usize).copied().unwrap_or(0)
        }
    }

    /// Drops everything at exponent `>= prec` (no-op if already coarser).
    pub fn truncate(&self, prec: i64) -> Self {
        let p = prec.min(self.prec);
        Self::normalized(&self.ctx, self.val, self.coeffs.clone(), p)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.ctx == other.ctx, "series over different fields");
        let prec = self.prec.min(other.prec);
        let lo = self.val.min(other.val).min(prec);
        let n = (prec - lo).max(0) as usize;
        let coeffs = (0..n)
            .map(|i| {
                let k = lo + i as i64;
                self.ctx.add_raw(self.raw_at(k), other.raw_at(k))
            })
            .collect();
        Self::normalized(&self.ctx, lo, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| self.ctx.neg_raw(c)).collect();
        LaurentSeries { ctx: self.ctx.clone(), val: self.val, coeffs, prec: self.prec }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElem) -> Self {
        let coeffs = self.coeffs.iter().map(|&x| self.ctx.mul_raw(x, c.value())).collect();
        Self::normalized(&self.ctx, self.val, coeffs, self.prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.ctx == other.ctx, "series over different fields");
        let prec = (self.prec + other.val).min(other.prec + self.val);
        let val = self.val + other.val;
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx, prec);
        }
        let n = (prec - val).max(0) as usize;
        let mut out = vec![0u32; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = self.ctx.add_raw(out[i + j], self.ctx.mul_raw(a, b));
            }
        }
        Self::normalized(&self.ctx, val, out, prec)
    }

    /// Multiplicative inverse; the relative precision is preserved.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let rel = (self.prec - self.val) as usize;
        let a0_inv = self.ctx.inv_raw(self.coeffs[0]).expect("nonzero leading coefficient");
        let mut out = vec![0u32; rel];
        for n in 0..rel {
            let mut c = if n == 0 { 1 } else { 0 };
            for i in 1..=n.min(self.coeffs.len() - 1) {
                c = self.ctx.sub_raw(c, self.ctx.mul_raw(self.coeffs[i], out[n - i]));
            }
            out[n] = self.ctx.mul_raw(c, a0_inv);
        }
        let val = -self.val;
        Ok(Self::normalized(&self.ctx, val, out, val + rel as i64))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        if k == 0 {
            return Ok(Self::one(&self.ctx, self.prec - self.val));
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.expect("k > 0"))
    }

    /// Product with an exact rational function (treated as infinitely precise).
    pub fn mul_exact(&self, r: &RatFunc) -> Self {
        if r.is_zero() {
            return Self::zero(&self.ctx, i64::MAX / 4);
        }
        let vr = r.den().deg() - r.num().deg();
        // expand r just far enough that it does not limit the product
        let need = self.prec - self.val + vr;
        let expanded = Self::expand(r, need.max(vr + 1));
        self.mul(&expanded)
    }

    /// Compares two series on every exponent below the smaller precision.
    /// Returns the number of coefficient positions compared (from the lower
    /// valuation up to the common precision) when they agree.
    pub fn agrees_with(&self, other: &Self) -> std::result::Result<usize, i64> {
        let prec = self.prec.min(other.prec);
        let lo = self.val.min(other.val);
        for k in lo..prec {
            if self.raw_at(k) != other.raw_at(k) {
                return Err(k);
            }
        }
        Ok((prec - lo).max(0) as usize)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> =
            self.coeffs.iter().map(|&c| self.ctx.to_json(self.ctx.elem(c))).collect();
        json!({ "lead": self.val, "coeffs": coeffs, "prec": self.prec })
    }

    /// Truncation as a polynomial in `u` scaled by `u^val`: returns
    /// `(val, coefficients)`.
    pub fn coefficients(&self) -> (i64, Vec<FieldElem>) {
        (self.val, self.coeffs.iter().map(|&c| self.ctx.elem(c)).collect())
    }
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.val == other.val && self.coeffs == other.coeffs && self.prec == other.prec
    }
}

/// Expansion of a rational function at `u = 1/t`.
///
/// `prec` must exceed the valuation `deg den - deg num` so that at least one
/// coefficient is produced; the zero function yields the zero series.
pub fn laurent_expand(r: &RatFunc, prec: i64) -> Result<LaurentSeries> {
    if r.is_zero() {
        return Ok(LaurentSeries::zero(r.ctx(), prec));
    }
    let v = r.den().deg() - r.num().deg();
    if prec <= v {
        return Err(Error::Precondition(format!("precision {prec} does not exceed valuation {v}")));
    }
    Ok(LaurentSeries::expand(r, prec))
}

/// Expansion of a polynomial (valuation `-deg`), exact up to `prec`.
pub fn expand_poly(p: &Poly, prec: i64) -> LaurentSeries {
    LaurentSeries::expand(&RatFunc::from_poly(p.clone()), prec)
}
