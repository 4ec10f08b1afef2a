//! The coefficient-field abstraction shared by the series engines.

use std::fmt::Debug;

use crate::field::{FieldCtx, FieldElem};

/// A field that can hold the coefficients of an `F_q`-linear series.
///
/// Elements are plain values; all arithmetic goes through the field object so
/// that runtime-configured fields (finite fields, `F_q(t)`) fit the same
/// engine code.
pub trait CoeffField: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem>;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn characteristic(&self) -> u64;

    /// Whether `F_q` embeds in this field.
    fn contains_fq(&self, q: u64) -> bool;

    /// `x^{q^n}`.
    fn frobenius(&self, x: &Self::Elem, q: u64, n: u32) -> Self::Elem;

    fn to_json(&self, x: &Self::Elem) -> serde_json::Value;
    fn format(&self, x: &Self::Elem) -> String;

    /// Short name such as `F_9` or `F_3(t)`.
    fn descriptor(&self) -> String;

    fn div(&self, x: &Self::Elem, y: &Self::Elem) -> Option<Self::Elem> {
        Some(self.mul(x, &self.inv(y)?))
    }

    fn pow(&self, x: &Self::Elem, mut k: u64) -> Self::Elem {
        let mut result = self.one();
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(&result, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// `x^k` for signed `k`; `None` for a negative power of zero.
    fn powi(&self, x: &Self::Elem, k: i64) -> Option<Self::Elem> {
        if k >= 0 {
            Some(self.pow(x, k as u64))
        } else {
            Some(self.pow(&self.inv(x)?, k.unsigned_abs()))
        }
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }
}

impl CoeffField for FieldCtx {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        FieldCtx::zero(self)
    }

    fn one(&self) -> FieldElem {
        FieldCtx::one(self)
    }

    fn is_zero(&self, x: &FieldElem) -> bool {
        x.value() == 0
    }

    fn add(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        FieldCtx::add(self, *x, *y)
    }

    fn sub(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        FieldCtx::sub(self, *x, *y)
    }

    fn neg(&self, x: &FieldElem) -> FieldElem {
        FieldCtx::neg(self, *x)
    }

    fn mul(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        FieldCtx::mul(self, *x, *y)
    }

    fn inv(&self, x: &FieldElem) -> Option<FieldElem> {
        FieldCtx::inv(self, *x)
    }

    fn from_int(&self, n: i64) -> FieldElem {
        FieldCtx::from_int(self, n)
    }

    fn characteristic(&self) -> u64 {
        self.p() as u64
    }

    fn contains_fq(&self, q: u64) -> bool {
        self.contains_order(q)
    }

    fn frobenius(&self, x: &FieldElem, q: u64, n: u32) -> FieldElem {
        self.elem(self.frobenius_raw(x.value(), q, n))
    }

    fn pow(&self, x: &FieldElem, k: u64) -> FieldElem {
        self.elem(self.pow_raw(x.value(), k))
    }

    fn to_json(&self, x: &FieldElem) -> serde_json::Value {
        FieldCtx::to_json(self, *x)
    }

    fn format(&self, x: &FieldElem) -> String {
        FieldCtx::format(self, *x)
    }

    fn descriptor(&self) -> String {
        format!("F_{}", self.q())
    }
}
