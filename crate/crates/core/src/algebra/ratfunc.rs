use std::fmt;

use serde_json::json;

use super::poly::Poly;
use crate::coeff::CoeffField;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// A reduced fraction `num/den` in `F_q(t)` with monic denominator.
///
/// The canonical form makes structural equality coincide with equality of
/// rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        let ctx = num.ctx().clone();
        if num.is_zero() {
            return RatFunc { num, den: Poly::one(&ctx) };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        if !d.is_monic() {
            let inv = ctx.inv(d.leading()).expect("nonzero");
            n = n.scale(inv);
            d = d.scale(inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.ctx());
        RatFunc { num: p, den: one }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        Self::from_poly(Poly::zero(ctx))
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Self::from_poly(Poly::one(ctx))
    }

    pub fn constant(ctx: &FieldCtx, c: FieldElem) -> Self {
        Self::from_poly(Poly::constant(ctx, c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.num.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        // a/b + c/d over the lcm of the denominators
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            let den = self.den.mul(&other.den);
            return Self::reduce(num, den);
        }
        let b = self.den.exact_div(&g);
        let d = other.den.exact_div(&g);
        let num = self.num.mul(&d).add(&other.num.mul(&b));
        let den = b.mul(&other.den);
        Self::reduce(num, den)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ctx());
        }
        // cross-cancel before multiplying to keep degrees small
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() { (self.num.clone(), other.den.clone()) } else { (self.num.exact_div(&g1), other.den.exact_div(&g1)) };
        let (n2, d1) = if g2.is_one() { (other.num.clone(), self.den.clone()) } else { (other.num.exact_div(&g2), self.den.exact_div(&g2)) };
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        // already coprime; only normalize the unit
        let lead = den.leading();
        if lead.value() == 1 {
            RatFunc { num, den }
        } else {
            let inv = self.ctx().inv(lead).expect("nonzero");
            RatFunc { num: num.scale(inv), den: den.scale(inv) }
        }
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        let ctx = self.ctx().clone();
        let lead = ctx.inv(self.num.leading()).expect("nonzero");
        Some(RatFunc { num: self.den.scale(lead), den: self.num.scale(lead) })
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv().ok_or(Error::DivisionByZero)?))
    }

    pub fn pow(&self, k: i64) -> Option<RatFunc> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let k = k as u64;
        // coprime inputs stay coprime under powers
        Some(RatFunc { num: self.num.pow(k), den: self.den.pow(k) })
    }

    /// `self^{Q^n}` via the Frobenius on numerator and denominator.
    pub fn frobenius(&self, big_q: u64, n: u32) -> RatFunc {
        RatFunc { num: self.num.frobenius(big_q, n), den: self.den.frobenius(big_q, n) }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "num": self.num.to_string(), "den": self.den.to_string() })
    }

    /// Parses `p` or `(p)/(q)` in the polynomial text form.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<RatFunc> {
        let s = text.trim();
        if let Some((a, b)) = split_fraction(s) {
            let num = Poly::parse(ctx, strip_parens(a))?;
            let den = Poly::parse(ctx, strip_parens(b))?;
            RatFunc::new(num, den)
        } else {
            Ok(RatFunc::from_poly(Poly::parse(ctx, strip_parens(s))?))
        }
    }
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s)
}

fn split_fraction(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '/' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

/// The rational function field `F_q(t)` as a coefficient field.
#[derive(Clone, Debug)]
pub struct RatField {
    base: FieldCtx,
}

impl RatField {
    pub fn new(base: &FieldCtx) -> Self {
        RatField { base: base.clone() }
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    pub fn t(&self) -> RatFunc {
        RatFunc::from_poly(Poly::t(&self.base))
    }

    pub fn poly(&self, p: Poly) -> RatFunc {
        RatFunc::from_poly(p)
    }
}

impl CoeffField for RatField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::zero(&self.base)
    }

    fn one(&self) -> RatFunc {
        RatFunc::one(&self.base)
    }

    fn is_zero(&self, x: &RatFunc) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        x.add(y)
    }

    fn sub(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        x.sub(y)
    }

    fn neg(&self, x: &RatFunc) -> RatFunc {
        x.neg()
    }

    fn mul(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        x.mul(y)
    }

    fn inv(&self, x: &RatFunc) -> Option<RatFunc> {
        x.inv()
    }

    fn from_int(&self, n: i64) -> RatFunc {
        RatFunc::constant(&self.base, self.base.from_int(n))
    }

    fn characteristic(&self) -> u64 {
        self.base.p() as u64
    }

    fn contains_fq(&self, q: u64) -> bool {
        self.base.contains_order(q)
    }

    fn frobenius(&self, x: &RatFunc, q: u64, n: u32) -> RatFunc {
        x.frobenius(q, n)
    }

    fn pow(&self, x: &RatFunc, k: u64) -> RatFunc {
        x.pow(k as i64).expect("nonnegative power")
    }

    fn to_json(&self, x: &RatFunc) -> serde_json::Value {
        x.to_json()
    }

    fn format(&self, x: &RatFunc) -> String {
        x.to_string()
    }

    fn descriptor(&self) -> String {
        format!("F_{}(t)", self.base.q())
    }
}
