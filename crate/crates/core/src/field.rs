//! Finite fields `F_{p^e}` in a polynomial basis.
//!
//! A [`FieldCtx`] owns the defining modulus together with log/antilog tables
//! built from a primitive element. Elements are small `Copy` values that carry
//! the identifier of the context that created them; mixing elements of two
//! contexts is rejected by the checked API and panics in the fast path.

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order supported.
pub const MAX_ORDER: u64 = 1 << 16;

static NEXT_CTX_ID: AtomicU32 = AtomicU32::new(1);

/// Conway polynomials for the non-prime fields of order at most 64,
/// listed as ascending coefficients without the leading 1.
const MODULUS_TABLE: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 1, 1, 0]),
    (3, 2, &[2, 2]),
    (3, 3, &[1, 2, 0]),
    (5, 2, &[2, 4]),
    (7, 2, &[3, 6]),
];

/// An element of a finite field: the polynomial-basis coordinates packed in
/// base `p` (coordinate `i` is digit `i`), tagged with its context id.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    ctx: u32,
    value: u32,
}

impl FieldElem {
    /// Packed representation; `0` is the zero element and `1` the unit.
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn ctx_id(self) -> u32 {
        self.ctx
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F#{}({})", self.ctx, self.value)
    }
}

struct FieldInner {
    id: u32,
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, ascending, length `e + 1`. Empty for prime fields.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
    pow_p: Vec<u32>,
}

/// A finite field `F_q`, `q = p^e`, shareable across threads.
#[derive(Clone)]
pub struct FieldCtx(Arc<FieldInner>);

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)?;
        if self.0.e > 1 {
            write!(f, " mod {:?}", self.0.modulus)?;
        }
        Ok(())
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for FieldCtx {}

/// Serialized form of a context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over Z/p as ascending u32 vectors; only used while
// building a context, so clarity wins over speed.
mod zp {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut k = p - 2;
        while k > 0 {
            if k & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            k >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let li = inv(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] as u64 * li as u64 % p as u64;
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = c * mi as u64 % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut v: Vec<u32> = out.into_iter().map(|x| x as u32).collect();
        trim(&mut v);
        v
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut v: Vec<u32> = (0..n)
            .map(|i| {
                let x = *a.get(i).unwrap_or(&0);
                let y = *b.get(i).unwrap_or(&0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut v);
        v
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or: `m` of degree `e` is irreducible iff it shares no factor with
    /// `x^{p^i} - x` for `1 <= i <= e/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let e = m.len() - 1;
        if e == 0 || m[e] == 0 {
            return false;
        }
        if e == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 0..e / 2 {
            // xp <- xp^p mod m
            let mut acc = vec![1u32];
            for _ in 0..p {
                acc = mulmod(&acc, &xp, m, p);
            }
            xp = acc;
            let g = gcd(m, &sub(&xp, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

/// Checks that `modulus` (ascending, monic, degree `e`) is irreducible over `F_p`.
pub fn is_irreducible_mod_p(p: u32, modulus: &[u32]) -> bool {
    zp::is_irreducible(modulus, p)
}

/// Smallest monic irreducible of degree `e` over `F_p`, ordering candidates by
/// the base-`p` integer formed from their lower coefficients.
pub fn search_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for code in 0..count {
        let mut m: Vec<u32> = Vec::with_capacity(e as usize + 1);
        let mut c = code;
        for _ in 0..e {
            m.push((c % p as u64) as u32);
            c /= p as u64;
        }
        m.push(1);
        if m[0] != 0 && zp::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    /// Builds `F_{p^e}`. When `modulus` is `None` and `e > 1` the built-in
    /// table (orders up to 64) must cover `(p, e)`.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        let order = (p as u64).checked_pow(e).filter(|&q| q <= MAX_ORDER);
        let Some(_) = order else {
            return Err(Error::FieldTooLarge { p, e });
        };
        let modulus = if e == 1 {
            match modulus {
                Some(m) if !(m.is_empty() || m == [0, 1]) => {
                    return Err(Error::BadModulus("prime fields take no modulus".into()))
                }
                _ => Vec::new(),
            }
        } else {
            match modulus {
                Some(m) => m,
                None => MODULUS_TABLE
                    .iter()
                    .find(|(tp, te, _)| *tp == p && *te == e)
                    .map(|(_, _, low)| {
                        let mut m = low.to_vec();
                        m.push(1);
                        m
                    })
                    .ok_or(Error::NoTableModulus { p, e })?,
            }
        };
        if e > 1 {
            if modulus.len() != e as usize + 1 || modulus.iter().any(|&c| c >= p) {
                return Err(Error::BadModulus(format!(
                    "expected {} coefficients in [0, {p})",
                    e + 1
                )));
            }
            if modulus[e as usize] != 1 {
                return Err(Error::BadModulus("modulus must be monic".into()));
            }
            if !zp::is_irreducible(&modulus, p) {
                return Err(Error::BadModulus(format!("{modulus:?} is reducible over F_{p}")));
            }
        }
        Ok(Self::build(p, e, modulus))
    }

    /// `F_{p^e}` with the modulus from the table when available, otherwise the
    /// first irreducible found by [`search_irreducible`].
    pub fn with_search(p: u32, e: u32) -> Result<Self> {
        match Self::new(p, e, None) {
            Err(Error::NoTableModulus { .. }) => Self::new(p, e, Some(search_irreducible(p, e))),
            other => other,
        }
    }

    /// Prime or prime-power order `q`, constructed from the table.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        Self::with_search(p as u32, e)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Self::new(spec.p, spec.e, spec.modulus.clone())
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.0.p,
            e: self.0.e,
            modulus: (self.0.e > 1).then(|| self.0.modulus.clone()),
        }
    }

    fn build(p: u32, e: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(e);
        let id = NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed);
        let to_poly = |v: u32| -> Vec<u32> {
            let mut out = Vec::with_capacity(e as usize);
            let mut c = v;
            for _ in 0..e {
                out.push(c % p);
                c /= p;
            }
            zp::trim(&mut out);
            out
        };
        let from_poly = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        let slow_mul = |a: u32, b: u32| -> u32 {
            if e == 1 {
                return ((a as u64 * b as u64) % p as u64) as u32;
            }
            from_poly(&zp::mulmod(&to_poly(a), &to_poly(b), &modulus, p))
        };
        let slow_pow = |a: u32, mut k: u64| -> u32 {
            let mut r = 1u32;
            let mut b = a;
            while k > 0 {
                if k & 1 == 1 {
                    r = slow_mul(r, b);
                }
                b = slow_mul(b, b);
                k >>= 1;
            }
            r
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
            .expect("multiplicative group is cyclic");
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = slow_mul(x, generator);
        }
        if n == 1 {
            exp[0] = 1;
            exp[1] = 1;
        }
        let digit_add = |a: u32, b: u32| -> u32 {
            if p == 2 {
                return a ^ b;
            }
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut scale = 1u32;
            for _ in 0..e {
                out += ((a % p + b % p) % p) * scale;
                a /= p;
                b /= p;
                scale *= p;
            }
            out
        };
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let mut a = a;
                let mut out = 0u32;
                let mut scale = 1u32;
                for _ in 0..e {
                    out += ((p - a % p) % p) * scale;
                    a /= p;
                    scale *= p;
                }
                out
            })
            .collect();
        let add_table = (p != 2 && e > 1 && q <= 256).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b);
                }
            }
            t
        });
        let pow_p: Vec<u32> = (0..q).map(|a| slow_pow(a, p as u64)).collect();
        FieldCtx(Arc::new(FieldInner {
            id,
            p,
            e,
            q,
            modulus,
            exp,
            log,
            neg,
            add_table,
            pow_p,
        }))
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    /// Field order `q = p^e`.
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        (self.0.e > 1).then_some(self.0.modulus.as_slice())
    }

    /// Whether this field contains a subfield of order `q`.
    pub fn contains_order(&self, q: u64) -> bool {
        match prime_power(q) {
            Some((p, e)) => p == self.0.p as u64 && self.0.e % e == 0,
            None => false,
        }
    }

    #[inline]
    pub fn elem(&self, value: u32) -> FieldElem {
        assert!(value < self.0.q, "value {value} out of range for F_{}", self.0.q);
        FieldElem { ctx: self.0.id, value }
    }

    /// Element from ascending polynomial-basis coordinates.
    pub fn from_coords(&self, coords: &[u32]) -> Result<FieldElem> {
        if coords.len() > self.0.e as usize || coords.iter().any(|&c| c >= self.0.p) {
            return Err(Error::InvalidArgument(format!(
                "{coords:?} is not a coordinate vector of F_{}",
                self.0.q
            )));
        }
        let v = coords.iter().rev().fold(0u32, |acc, &c| acc * self.0.p + c);
        Ok(self.elem(v))
    }

    pub fn coords(&self, x: FieldElem) -> Vec<u32> {
        self.check(x);
        let mut v = x.value;
        (0..self.0.e)
            .map(|_| {
                let c = v % self.0.p;
                v /= self.0.p;
                c
            })
            .collect()
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    /// The polynomial-basis generator `x` (equal to `1` in a prime field).
    pub fn gen(&self) -> FieldElem {
        if self.0.e == 1 {
            self.one()
        } else {
            self.elem(self.0.p)
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        self.elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// All elements in increasing order of representation.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.0.q).map(move |v| self.elem(v))
    }

    /// Elements of the subfield of order `q_sub`, sorted by representation.
    pub fn subfield(&self, q_sub: u64) -> Result<Vec<FieldElem>> {
        if !self.contains_order(q_sub) {
            return Err(Error::InvalidArgument(format!(
                "F_{} has no subfield of order {q_sub}",
                self.0.q
            )));
        }
        let step = (self.0.q as u64 - 1) / (q_sub - 1);
        let mut out: Vec<FieldElem> = std::iter::once(self.zero())
            .chain((0..q_sub - 1).map(|k| self.elem(self.0.exp[(k * step) as usize])))
            .collect();
        out.sort();
        Ok(out)
    }

    #[inline]
    fn check(&self, x: FieldElem) {
        assert!(
            x.ctx == self.0.id,
            "field element from context {} used with context {}",
            x.ctx,
            self.0.id
        );
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.p == 2 {
            a ^ b
        } else if f.e == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if let Some(t) = &f.add_table {
            t[(a * f.q + b) as usize]
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut scale = 1u32;
            for _ in 0..f.e {
                out += ((a % f.p + b % f.p) % f.p) * scale;
                a /= f.p;
                b /= f.p;
                scale *= f.p;
            }
            out
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &*self.0;
        if f.e == 1 {
            return ((a as u64 * b as u64) % f.p as u64) as u32;
        }
        f.exp[(f.log[a as usize] + f.log[b as usize]) as usize]
    }

    #[inline]
    pub(crate) fn inv_raw(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let f = &*self.0;
        let n = f.q - 1;
        Some(f.exp[((n - f.log[a as usize]) % n) as usize])
    }

    pub(crate) fn pow_raw(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &*self.0;
        let n = (f.q - 1) as u64;
        let l = (f.log[a as usize] as u64 * (k % n)) % n;
        f.exp[l as usize]
    }

    /// `a^{Q^n}` for any `Q` a power of `p`.
    pub(crate) fn frobenius_raw(&self, a: u32, big_q: u64, n: u32) -> u32 {
        if a == 0 || a == 1 {
            return a;
        }
        let f = &*self.0;
        if big_q == f.p as u64 && n == 1 {
            return f.pow_p[a as usize];
        }
        let m = (f.q - 1) as u64;
        let mut k = 1u64;
        let qm = big_q % m;
        for _ in 0..n {
            k = k * qm % m;
        }
        self.pow_raw(a, k)
    }

    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.check(x);
        self.check(y);
        self.elem(self.add_raw(x.value, y.value))
    }

    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.check(x);
        self.check(y);
        self.elem(self.sub_raw(x.value, y.value))
    }

    pub fn neg(&self, x: FieldElem) -> FieldElem {
        self.check(x);
        self.elem(self.neg_raw(x.value))
    }

    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.check(x);
        self.check(y);
        self.elem(self.mul_raw(x.value, y.value))
    }

    pub fn inv(&self, x: FieldElem) -> Option<FieldElem> {
        self.check(x);
        self.inv_raw(x.value).map(|v| self.elem(v))
    }

    /// `x^k` for any integer `k`; negative exponents invert once.
    pub fn pow(&self, x: FieldElem, k: i64) -> Option<FieldElem> {
        self.check(x);
        if k >= 0 {
            Some(self.elem(self.pow_raw(x.value, k as u64)))
        } else {
            let inv = self.inv_raw(x.value)?;
            Some(self.elem(self.pow_raw(inv, k.unsigned_abs())))
        }
    }

    /// `x^{q^n}` where `q` is this field's order.
    pub fn frobenius(&self, x: FieldElem, n: u32) -> FieldElem {
        self.check(x);
        self.elem(self.frobenius_raw(x.value, self.0.q as u64, n))
    }

    /// Checked arithmetic used by the CLI and tests.
    pub fn arith(&self, op: FieldOp, x: FieldElem, y: Operand) -> Result<FieldElem> {
        let same = |e: FieldElem| -> Result<()> {
            if e.ctx != self.0.id {
                Err(Error::ContextMismatch { left: self.0.id, right: e.ctx })
            } else {
                Ok(())
            }
        };
        same(x)?;
        let other = |y: Operand| -> Result<FieldElem> {
            match y {
                Operand::Elem(e) => {
                    same(e)?;
                    Ok(e)
                }
                Operand::Int(_) => Err(Error::InvalidArgument(format!("{op:?} needs an element operand"))),
            }
        };
        match op {
            FieldOp::Add => Ok(self.add(x, other(y)?)),
            FieldOp::Sub => Ok(self.sub(x, other(y)?)),
            FieldOp::Mul => Ok(self.mul(x, other(y)?)),
            FieldOp::Neg => Ok(self.neg(x)),
            FieldOp::Inv => self.inv(x).ok_or(Error::DivisionByZero),
            FieldOp::Pow => match y {
                Operand::Int(k) => self.pow(x, k).ok_or(Error::DivisionByZero),
                Operand::Elem(_) => Err(Error::InvalidArgument("pow needs an integer exponent".into())),
            },
        }
    }

    /// Uniform element drawn from `rng`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        self.elem(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        self.elem(rng.gen_range(1..self.0.q))
    }

    pub fn to_json(&self, x: FieldElem) -> serde_json::Value {
        serde_json::json!(self.coords(x))
    }

    /// `[c0,c1,...]` for extension fields, the plain integer for prime fields.
    pub fn format(&self, x: FieldElem) -> String {
        if self.0.e == 1 {
            x.value.to_string()
        } else {
            let c = self.coords(x);
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }
}

/// Operations accepted by [`FieldCtx::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
    Pow,
}

#[derive(Clone, Copy, Debug)]
pub enum Operand {
    Elem(FieldElem),
    Int(i64),
}

/// `(p, e)` with `q = p^e`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut e = 0;
    let mut n = q;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    (n == 1).then_some((p, e))
}

/// Lexicographic enumeration of `d`-tuples drawn from `alphabet`; the first
/// coordinate varies slowest.
#[derive(Clone, Debug)]
pub struct Tuples {
    alphabet: Vec<FieldElem>,
    idx: Vec<usize>,
    done: bool,
}

impl Tuples {
    /// `alphabet[0]` is taken to be zero when `exclude_zero` is set.
    pub fn new(alphabet: Vec<FieldElem>, d: usize, exclude_zero: bool) -> Self {
        let done = alphabet.is_empty() || d == 0;
        let mut t = Tuples {
            alphabet,
            idx: vec![0; d],
            done,
        };
        if exclude_zero && !t.done {
            t.advance();
        }
        t
    }

    fn advance(&mut self) {
        let n = self.alphabet.len();
        for slot in self.idx.iter_mut().rev() {
            *slot += 1;
            if *slot < n {
                return;
            }
            *slot = 0;
        }
        self.done = true;
    }
}

impl Iterator for Tuples {
    type Item = Vec<FieldElem>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self.idx.iter().map(|&i| self.alphabet[i]).collect();
        self.advance();
        Some(out)
    }
}

/// All `q^d` tuples over `ctx` (or `q^d - 1` without the zero tuple).
pub fn enumerate_tuples(ctx: &FieldCtx, d: usize, exclude_zero: bool) -> Tuples {
    Tuples::new(ctx.elements().collect(), d, exclude_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn prime_field_inverse() {
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        assert_eq!(f3.q(), 3);
        assert_eq!(f3.inv(f3.elem(2)), Some(f3.elem(2)));
        assert_eq!(f3.inv(f3.zero()), None);
    }

    #[test]
    fn f4_generator_squares_to_g_plus_one() {
        let f4 = FieldCtx::new(2, 2, Some(vec![1, 1, 1])).unwrap();
        let g = f4.gen();
        let gg = f4.mul(g, g);
        assert_eq!(gg, f4.add(g, f4.one()));
        assert_eq!(f4.frobenius(g, 0), g);
        // q-power of g inside F_4 with q = 2 is g^2
        assert_eq!(f4.elem(f4.frobenius_raw(g.value(), 2, 1)), gg);
    }

    #[test]
    fn f9_from_x2_plus_1() {
        // x^2 + 1 has no root in F_3: 0 -> 1, 1 -> 2, 2 -> 2.
        for r in 0..3u32 {
            assert_ne!((r * r + 1) % 3, 0);
        }
        let f9 = FieldCtx::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        for x in f9.elements().skip(1) {
            assert_eq!(f9.pow(x, 8), Some(f9.one()));
        }
        for x in f9.elements() {
            assert_eq!(f9.frobenius(x, 2), x);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(FieldCtx::new(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(FieldCtx::new(3, 2, Some(vec![2, 0, 1])), Err(Error::BadModulus(_))));
        assert!(matches!(FieldCtx::new(3, 2, Some(vec![1, 1])), Err(Error::BadModulus(_))));
        assert!(matches!(FieldCtx::new(3, 5, None), Err(Error::NoTableModulus { .. })));
        assert!(FieldCtx::with_search(3, 5).is_ok());
    }

    #[test]
    fn table_moduli_are_irreducible() {
        for (p, e, low) in MODULUS_TABLE {
            let mut m = low.to_vec();
            m.push(1);
            assert!(is_irreducible_mod_p(*p, &m), "{p}^{e}");
            assert!(p.pow(*e) <= 64);
        }
    }

    #[test]
    fn context_mismatch_is_rejected() {
        let a = FieldCtx::new(3, 1, None).unwrap();
        let b = FieldCtx::new(3, 1, None).unwrap();
        let r = a.arith(FieldOp::Add, a.one(), Operand::Elem(b.one()));
        assert!(matches!(r, Err(Error::ContextMismatch { .. })));
        assert!(matches!(
            a.arith(FieldOp::Inv, a.zero(), Operand::Int(0)),
            Err(Error::DivisionByZero)
        ));
        assert_eq!(a.arith(FieldOp::Pow, a.elem(2), Operand::Int(-1)).unwrap(), a.elem(2));
    }

    #[test]
    fn algebra_laws_random_triples() {
        for (p, e) in [(2, 4), (3, 2), (5, 2), (3, 8), (2, 1), (7, 1)] {
            let f = FieldCtx::with_search(p, e).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..1000 {
                let (x, y, z) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                assert_eq!(f.mul(x, y), f.mul(y, x));
                assert_eq!(f.add(x, y), f.add(y, x));
                assert_eq!(f.add(x, f.neg(x)), f.zero());
                if let Some(ix) = f.inv(x) {
                    assert_eq!(f.mul(x, ix), f.one());
                }
            }
        }
    }

    #[test]
    fn frobenius_matches_pow_exhaustively() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64] {
            let f = FieldCtx::of_order(q).unwrap();
            for x in f.elements() {
                assert_eq!(f.frobenius(x, 1), f.pow(x, q as i64).unwrap());
                assert_eq!(f.frobenius(x, 1), x);
                if x.value() != 0 {
                    assert_eq!(f.pow(x, q as i64 - 1), Some(f.one()));
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let f = FieldCtx::with_search(3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..4 {
            for _ in 0..100 {
                let (x, y) = (f.random(&mut rng), f.random(&mut rng));
                let lhs = f.elem(f.frobenius_raw(f.add(x, y).value(), 3, n));
                let rhs = f.add(
                    f.elem(f.frobenius_raw(x.value(), 3, n)),
                    f.elem(f.frobenius_raw(y.value(), 3, n)),
                );
                assert_eq!(lhs, rhs);
            }
        }
        // F_3 is fixed by the 3-power map inside F_81
        for x in f.subfield(3).unwrap() {
            assert_eq!(f.elem(f.frobenius_raw(x.value(), 3, 1)), x);
        }
    }

    #[test]
    fn tuple_counts_exhaustive() {
        for q in [2u64, 3, 4, 5] {
            let f = FieldCtx::of_order(q).unwrap();
            for d in 1..=4usize {
                for exclude in [false, true] {
                    let all: Vec<_> = enumerate_tuples(&f, d, exclude).collect();
                    let expect = q.pow(d as u32) as usize - exclude as usize;
                    assert_eq!(all.len(), expect);
                    let set: HashSet<_> = all.iter().cloned().collect();
                    assert_eq!(set.len(), expect);
                    if exclude {
                        assert!(all.iter().all(|t| t.iter().any(|x| x.value() != 0)));
                    }
                }
            }
        }
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        let t: Vec<Vec<u32>> = enumerate_tuples(&f3, 1, false)
            .map(|t| t.iter().map(|x| x.value()).collect())
            .collect();
        assert_eq!(t, vec![vec![0], vec![1], vec![2]]);
        let f2 = FieldCtx::new(2, 1, None).unwrap();
        assert_eq!(enumerate_tuples(&f2, 2, true).count(), 3);
    }

    #[test]
    fn random_elements_are_reproducible_and_uniform() {
        let f9 = FieldCtx::of_order(9).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..16).map(|_| f9.random(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));

        let f3 = FieldCtx::of_order(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut counts = [0u32; 3];
        let n = 10_000;
        for _ in 0..n {
            counts[f3.random(&mut rng).value() as usize] += 1;
        }
        let mean = n as f64 / 3.0;
        let sigma = (n as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for c in counts {
            assert!((c as f64 - mean).abs() < 5.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn subfield_of_extension() {
        let f16 = FieldCtx::of_order(16).unwrap();
        let f4 = f16.subfield(4).unwrap();
        assert_eq!(f4.len(), 4);
        for &x in &f4 {
            assert_eq!(f16.elem(f16.frobenius_raw(x.value(), 4, 1)), x);
        }
        assert!(f16.subfield(8).is_err());
    }

    #[test]
    fn serialization_form() {
        let f9 = FieldCtx::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        let x = f9.from_coords(&[2, 1]).unwrap();
        assert_eq!(f9.to_json(x), serde_json::json!([2, 1]));
        assert_eq!(f9.coords(x), vec![2, 1]);
        let spec = f9.spec();
        assert_eq!(
            serde_json::to_value(&spec).unwrap(),
            serde_json::json!({"p": 3, "e": 2, "modulus": [1, 0, 1]})
        );
        let again = FieldCtx::from_spec(&spec).unwrap();
        assert_eq!(again.modulus(), f9.modulus());
    }
}
