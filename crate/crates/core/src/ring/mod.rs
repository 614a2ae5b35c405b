//! Truncated local rings `O/p^r`.
//!
//! Two families are supported: `Z/p^r` (mixed characteristic, `f = 1`) and
//! `F_q[t]/t^r` (equal characteristic). An element is a code in `0..q^prec`
//! together with its known precision `prec`. In both families the code is the
//! base-`q` expansion in the uniformizer, so truncation and shifts by `ϖ` are
//! uniform; only addition and multiplication depend on the kind.

pub mod fpoly;
pub mod fq;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use fq::{is_prime, Fq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Mixed,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    pub kind: RingKind,
    pub p: u64,
    pub f: u32,
    pub r_w: u32,
    /// Monic modulus over `F_p` defining `F_q`, constant term first.
    pub modulus: Vec<u64>,
}

/// A validated ring together with its residue field tables. Cheap to clone.
#[derive(Clone)]
pub struct Ring {
    inner: Arc<Inner>,
}

struct Inner {
    spec: RingSpec,
    fq: Fq,
    qpow: Vec<u64>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.label())
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}
impl Eq for Ring {}

/// Truncation-aware valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Val {
    Exact(i64),
    /// The element vanishes at the known precision; the true valuation is at least this.
    AtLeast(i64),
}

impl Val {
    pub fn exact(self) -> Option<i64> {
        match self {
            Val::Exact(v) => Some(v),
            Val::AtLeast(_) => None,
        }
    }

    pub fn bound(self) -> i64 {
        match self {
            Val::Exact(v) | Val::AtLeast(v) => v,
        }
    }

    pub fn shift(self, k: i64) -> Val {
        match self {
            Val::Exact(v) => Val::Exact(v + k),
            Val::AtLeast(v) => Val::AtLeast(v + k),
        }
    }

    /// Decides `self >= k`, or `None` when the truncation hides the answer.
    pub fn at_least(self, k: i64) -> Option<bool> {
        match self {
            Val::Exact(v) => Some(v >= k),
            Val::AtLeast(v) if v >= k => Some(true),
            Val::AtLeast(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    code: u64,
    prec: u32,
}

impl Elem {
    pub fn code(&self) -> u64 {
        self.code
    }
    pub fn prec(&self) -> u32 {
        self.prec
    }
    /// Zero at the known precision.
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }
}

/// `ϖ^{-s}·u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FracElem {
    pub s: u32,
    pub u: Elem,
}

/// `num / p^k` modulo 1, kept reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdditiveValue {
    p: u64,
    num: u64,
    k: u32,
}

impl AdditiveValue {
    pub fn zero(p: u64) -> Self {
        AdditiveValue { p, num: 0, k: 0 }
    }

    pub fn new(p: u64, num: u64, k: u32) -> Self {
        let mut v = AdditiveValue { p, num: num % p.pow(k), k };
        while v.k > 0 && v.num.is_multiple_of(p) {
            v.num /= p;
            v.k -= 1;
        }
        v
    }

    pub fn num(&self) -> u64 {
        self.num
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.k.max(other.k);
        let m = self.p.pow(k) as u128;
        let a = self.num as u128 * self.p.pow(k - self.k) as u128;
        let b = other.num as u128 * self.p.pow(k - other.k) as u128;
        AdditiveValue::new(self.p, ((a + b) % m) as u64, k)
    }

    pub fn neg(&self) -> Self {
        let m = self.p.pow(self.k);
        AdditiveValue::new(self.p, (m - self.num) % m, self.k)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl fmt::Display for AdditiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.p.pow(self.k))
        }
    }
}

impl Serialize for AdditiveValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Ring {
    pub fn new(kind: RingKind, p: u64, f: u32, r_w: u32) -> Result<Ring> {
        Ring::with_modulus(kind, p, f, r_w, None)
    }

    pub fn with_modulus(
        kind: RingKind,
        p: u64,
        f: u32,
        r_w: u32,
        modulus: Option<Vec<u64>>,
    ) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if kind == RingKind::Mixed && f > 1 {
            return Err(Error::MixedNeedsPrimeField);
        }
        if r_w == 0 {
            return Err(Error::Invalid("working precision must be at least 1".into()));
        }
        let fq = Fq::extension(p, f, modulus)?;
        let q = fq.q();
        let mut qpow = vec![1u64];
        for _ in 0..r_w {
            let next = qpow
                .last()
                .unwrap()
                .checked_mul(q)
                .filter(|&v| v < 1 << 62)
                .ok_or_else(|| Error::Unsupported(format!("q^{r_w} does not fit in 62 bits")))?;
            qpow.push(next);
        }
        let spec = RingSpec { kind, p, f, r_w, modulus: fq.modulus().to_vec() };
        Ok(Ring { inner: Arc::new(Inner { spec, fq, qpow }) })
    }

    /// `F_q[t]/t^r` with `q = p^f`.
    pub fn equal(p: u64, f: u32, r_w: u32) -> Result<Ring> {
        Ring::new(RingKind::Equal, p, f, r_w)
    }

    /// `Z/p^r`.
    pub fn mixed(p: u64, r_w: u32) -> Result<Ring> {
        Ring::new(RingKind::Mixed, p, 1, r_w)
    }

    /// Same ring family at a different working precision.
    pub fn with_precision(&self, r_w: u32) -> Result<Ring> {
        let s = self.spec();
        Ring::with_modulus(s.kind, s.p, s.f, r_w, Some(s.modulus.clone()))
    }

    pub fn spec(&self) -> &RingSpec {
        &self.inner.spec
    }
    pub fn kind(&self) -> RingKind {
        self.inner.spec.kind
    }
    pub fn p(&self) -> u64 {
        self.inner.spec.p
    }
    pub fn f(&self) -> u32 {
        self.inner.spec.f
    }
    pub fn q(&self) -> u64 {
        self.inner.fq.q()
    }
    pub fn r_w(&self) -> u32 {
        self.inner.spec.r_w
    }
    pub fn fq(&self) -> &Fq {
        &self.inner.fq
    }

    /// `q^k`, the size of `O/p^k`.
    pub fn qpow(&self, k: u32) -> u64 {
        self.inner.qpow[k as usize]
    }

    pub fn label(&self) -> String {
        let s = self.spec();
        match s.kind {
            RingKind::Mixed => format!("Z/{}^{}", s.p, s.r_w),
            RingKind::Equal => format!("F{}[t]/t^{}", self.q(), s.r_w),
        }
    }

    fn check_prec(&self, prec: u32) {
        assert!(prec <= self.r_w(), "precision {prec} exceeds working precision {}", self.r_w());
    }

    pub fn elem(&self, code: u64, prec: u32) -> Elem {
        self.check_prec(prec);
        Elem { code: code % self.qpow(prec), prec }
    }

    pub fn zero(&self) -> Elem {
        Elem { code: 0, prec: self.r_w() }
    }

    pub fn one(&self) -> Elem {
        self.elem(1, self.r_w())
    }

    /// The uniformizer `p` or `t` at full precision.
    pub fn pi(&self) -> Elem {
        self.elem(self.q(), self.r_w())
    }

    /// Image of an integer at full precision.
    pub fn int(&self, n: i64) -> Elem {
        match self.kind() {
            RingKind::Mixed => {
                let m = self.qpow(self.r_w()) as i128;
                self.elem((n as i128).rem_euclid(m) as u64, self.r_w())
            }
            RingKind::Equal => self.elem(self.fq().from_int(n), self.r_w()),
        }
    }

    /// The constant lift of a residue class, at precision `prec`.
    pub fn from_residue(&self, a: u64, prec: u32) -> Elem {
        self.elem(a, prec)
    }

    /// Element from its `ϖ`-adic digits (each digit a residue code).
    pub fn from_digits(&self, digits: &[u64], prec: u32) -> Elem {
        let q = self.q();
        let mut code = 0u64;
        for &d in digits.iter().take(prec as usize).rev() {
            code = code * q + d % q;
        }
        self.elem(code, prec)
    }

    pub fn digits(&self, x: &Elem) -> Vec<u64> {
        let q = self.q();
        let mut c = x.code;
        (0..x.prec)
            .map(|_| {
                let d = c % q;
                c /= q;
                d
            })
            .collect()
    }

    pub fn digit(&self, x: &Elem, i: u32) -> u64 {
        if i >= x.prec {
            return 0;
        }
        x.code / self.qpow(i) % self.q()
    }

    /// Residue class in `F_q` (the constant digit).
    pub fn residue(&self, x: &Elem) -> u64 {
        x.code % self.q()
    }

    pub fn reduce(&self, x: &Elem, prec: u32) -> Elem {
        let prec = prec.min(x.prec);
        Elem { code: x.code % self.qpow(prec), prec }
    }

    /// Claim precision `prec` for the canonical lift of `x` (higher digits zero).
    pub fn lift(&self, x: &Elem, prec: u32) -> Elem {
        self.check_prec(prec);
        Elem { code: x.code, prec: prec.max(x.prec) }
    }

    pub fn is_unit(&self, x: &Elem) -> Result<bool> {
        if x.prec == 0 {
            return Err(Error::InsufficientPrecision("unit test on an element with no digits".into()));
        }
        Ok(!x.code.is_multiple_of(self.q()))
    }

    pub fn elements(&self, prec: u32) -> impl Iterator<Item = Elem> {
        self.check_prec(prec);
        (0..self.qpow(prec)).map(move |code| Elem { code, prec })
    }

    pub fn units(&self, prec: u32) -> impl Iterator<Item = Elem> {
        let q = self.q();
        self.elements(prec).filter(move |x| x.code % q != 0)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let prec = a.prec.min(b.prec);
        let m = self.qpow(prec);
        let (x, y) = (a.code % m, b.code % m);
        let code = match self.kind() {
            RingKind::Mixed => (x + y) % m,
            RingKind::Equal if self.q() == 2 => x ^ y,
            RingKind::Equal => self.digitwise(x, y, prec, |fq, u, v| fq.add(u, v)),
        };
        Elem { code, prec }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        let m = self.qpow(a.prec);
        let code = match self.kind() {
            RingKind::Mixed => (m - a.code) % m,
            RingKind::Equal if self.q() == 2 => a.code,
            RingKind::Equal => self.digitwise(a.code, 0, a.prec, |fq, u, _| fq.neg(u)),
        };
        Elem { code, prec: a.prec }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let prec = a.prec.min(b.prec);
        let m = self.qpow(prec);
        let (x, y) = (a.code % m, b.code % m);
        let code = match self.kind() {
            RingKind::Mixed => ((x as u128 * y as u128) % m as u128) as u64,
            RingKind::Equal => self.series_mul(x, y, prec),
        };
        Elem { code, prec }
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut acc = self.elem(1, a.prec);
        let mut base = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if a.prec == 0 || a.code.is_multiple_of(self.q()) {
            return Err(Error::NonUnit);
        }
        let code = match self.kind() {
            RingKind::Mixed => mod_inverse(a.code, self.qpow(a.prec)),
            RingKind::Equal => {
                let fq = self.fq();
                let d = self.digits(a);
                let a0inv = fq.inv(d[0]).expect("unit");
                let mut y = vec![0u64; d.len()];
                y[0] = a0inv;
                for k in 1..d.len() {
                    let mut s = 0;
                    for i in 1..=k {
                        s = fq.add(s, fq.mul(d[i], y[k - i]));
                    }
                    y[k] = fq.neg(fq.mul(a0inv, s));
                }
                self.from_digits(&y, a.prec).code
            }
        };
        Ok(Elem { code, prec: a.prec })
    }

    pub fn val(&self, a: &Elem) -> Val {
        if a.code == 0 {
            return Val::AtLeast(a.prec as i64);
        }
        let q = self.q();
        let mut v = 0;
        let mut c = a.code;
        while c.is_multiple_of(q) {
            c /= q;
            v += 1;
        }
        Val::Exact(v)
    }

    /// Multiplication by `ϖ^k`; gains `k` digits of precision (capped at `r_w`).
    pub fn shift_up(&self, a: &Elem, k: u32) -> Elem {
        let prec = (a.prec + k).min(self.r_w());
        let code = ((a.code as u128 * self.qpow(k.min(prec)) as u128) % self.qpow(prec) as u128) as u64;
        Elem { code, prec }
    }

    /// Exact division by `ϖ^k`; consumes `k` digits of precision.
    pub fn shift_down(&self, a: &Elem, k: u32) -> Result<Elem> {
        if a.prec < k {
            return Err(Error::InsufficientPrecision(format!(
                "division by ϖ^{k} of an element known to precision {}",
                a.prec
            )));
        }
        let d = self.qpow(k);
        if !a.code.is_multiple_of(d) {
            return Err(Error::Invalid(format!("element not divisible by ϖ^{k}")));
        }
        Ok(Elem { code: a.code / d, prec: a.prec - k })
    }

    fn digitwise(&self, x: u64, y: u64, prec: u32, op: impl Fn(&Fq, u64, u64) -> u64) -> u64 {
        let fq = self.fq();
        let q = fq.q();
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..prec {
            out += op(fq, x % q, y % q) * scale;
            x /= q;
            y /= q;
            scale *= q;
        }
        out
    }

    fn series_mul(&self, x: u64, y: u64, prec: u32) -> u64 {
        let fq = self.fq();
        if fq.q() == 2 {
            let mut out = 0u64;
            let mut y = y;
            let mut shift = 0;
            while y != 0 && shift < prec {
                if y & 1 == 1 {
                    out ^= x << shift;
                }
                y >>= 1;
                shift += 1;
            }
            return out & ((1u64 << prec) - 1);
        }
        let q = fq.q();
        let n = prec as usize;
        let mut dx = [0u64; 64];
        let mut dy = [0u64; 64];
        let (mut a, mut b) = (x, y);
        for i in 0..n {
            dx[i] = a % q;
            dy[i] = b % q;
            a /= q;
            b /= q;
        }
        let mut out = 0u64;
        for k in (0..n).rev() {
            let mut s = 0;
            for i in 0..=k {
                if dx[i] != 0 && dy[k - i] != 0 {
                    s = fq.add(s, fq.mul(dx[i], dy[k - i]));
                }
            }
            out = out * q + s;
        }
        out
    }

    // Fractional elements.

    pub fn frac(&self, s: u32, u: Elem) -> FracElem {
        self.frac_normalize(FracElem { s, u })
    }

    pub fn frac_normalize(&self, x: FracElem) -> FracElem {
        let mut x = x;
        while x.s > 0 && x.u.code != 0 && x.u.code.is_multiple_of(self.q()) {
            x.u = Elem { code: x.u.code / self.q(), prec: x.u.prec - 1 };
            x.s -= 1;
        }
        x
    }

    pub fn frac_val(&self, x: &FracElem) -> Val {
        self.val(&x.u).shift(-(x.s as i64))
    }

    /// Bring `x` to denominator exponent `s >= x.s`.
    pub fn frac_to_denominator(&self, x: &FracElem, s: u32) -> FracElem {
        assert!(s >= x.s);
        FracElem { s, u: self.shift_up(&x.u, s - x.s) }
    }

    pub fn frac_add(&self, x: &FracElem, y: &FracElem) -> FracElem {
        let s = x.s.max(y.s);
        let a = self.frac_to_denominator(x, s);
        let b = self.frac_to_denominator(y, s);
        self.frac(s, self.add(&a.u, &b.u))
    }

    pub fn frac_mul(&self, x: &FracElem, y: &FracElem) -> FracElem {
        self.frac(x.s + y.s, self.mul(&x.u, &y.u))
    }

    /// The fixed additive character `ψ` of conductor `p_F`:
    /// equal kind `Tr(coefficient of t^0)/p`, mixed kind `x/p mod 1`.
    pub fn psi(&self, x: &FracElem) -> Result<AdditiveValue> {
        let p = self.p();
        if x.u.prec < x.s + 1 {
            return Err(Error::InsufficientPrecision(format!(
                "psi of ϖ^-{}·u needs u to precision {}, have {}",
                x.s,
                x.s + 1,
                x.u.prec
            )));
        }
        Ok(match self.kind() {
            RingKind::Mixed => AdditiveValue::new(p, x.u.code % self.qpow(x.s + 1), x.s + 1),
            RingKind::Equal => {
                let d = self.digit(&x.u, x.s);
                AdditiveValue::new(p, self.fq().trace(d), 1)
            }
        })
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quo = old_r / r;
        (old_r, r) = (r, old_r - quo * r);
        (old_s, s) = (s, old_s - quo * s);
    }
    old_s.rem_euclid(m as i128) as u64
}
