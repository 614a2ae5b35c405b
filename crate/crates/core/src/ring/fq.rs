//! The residue field `F_q`, `q = p^f`.
//!
//! Elements are integer codes in `0..q`. For `f > 1` the code is the base-`p`
//! digit string of a polynomial in `F_p[y]/(modulus)`, constant digit least
//! significant; arithmetic goes through precomputed tables.

use super::fpoly;
use crate::error::{Error, Result};

const MAX_EXT_Q: u64 = 256;

#[derive(Debug, Clone)]
pub struct Fq {
    p: u64,
    f: u32,
    q: u64,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

#[derive(Debug, Clone)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    trace: Vec<u16>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Fq {
    pub fn prime(p: u64) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(Error::Unsupported(format!("prime {p} too large")));
        }
        Ok(Fq { p, f: 1, q: p, modulus: vec![0, 1], tables: None })
    }

    /// Degree-`f` extension. `modulus` is monic over `F_p`, constant term first;
    /// `None` selects the least irreducible polynomial in code order.
    pub fn extension(p: u64, f: u32, modulus: Option<Vec<u64>>) -> Result<Fq> {
        if f == 0 {
            return Err(Error::Invalid("residue degree must be at least 1".into()));
        }
        let base = Fq::prime(p)?;
        if f == 1 {
            if let Some(m) = modulus {
                if m.len() != 2 || m[1] != 1 || m[0] >= p {
                    return Err(Error::BadModulus(format!("{m:?}")));
                }
            }
            return Ok(base);
        }
        let q = p.checked_pow(f).filter(|&q| q <= MAX_EXT_Q).ok_or_else(|| {
            Error::Unsupported(format!("residue field of size {p}^{f} exceeds {MAX_EXT_Q}"))
        })?;
        let modulus = match modulus {
            Some(m) => {
                let ok = m.len() == f as usize + 1
                    && m[f as usize] == 1
                    && m.iter().all(|&c| c < p)
                    && fpoly::is_irreducible(&base, &m);
                if !ok {
                    return Err(Error::BadModulus(format!("{m:?}")));
                }
                m
            }
            None => least_irreducible(&base, f),
        };
        let mut fq = Fq { p, f, q, modulus, tables: None };
        fq.tables = Some(fq.build_tables(&base));
        Ok(fq)
    }

    fn build_tables(&self, base: &Fq) -> Tables {
        let q = self.q as usize;
        let digits = |a: u64| -> Vec<u64> {
            let mut v = Vec::with_capacity(self.f as usize);
            let mut a = a;
            for _ in 0..self.f {
                v.push(a % self.p);
                a /= self.p;
            }
            v
        };
        let code = |v: &[u64]| -> u64 { v.iter().rev().fold(0, |acc, &d| acc * self.p + d) };
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            let da = digits(a as u64);
            for b in 0..q {
                let db = digits(b as u64);
                let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
                add[a * q + b] = code(&s) as u16;
                let prod = fpoly::mul(base, &fpoly::trim(da.clone()), &fpoly::trim(db));
                let (_, mut r) = fpoly::divrem(base, &prod, &self.modulus);
                r.resize(self.f as usize, 0);
                mul[a * q + b] = code(&r) as u16;
            }
        }
        let mut inv = vec![0u16; q];
        for a in 1..q {
            for b in 1..q {
                if mul[a * q + b] == 1 {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        let mut trace = vec![0u16; q];
        for (a, t) in trace.iter_mut().enumerate() {
            let mut acc = 0usize;
            let mut pw = a;
            for _ in 0..self.f {
                acc = add[acc * q + pw] as usize;
                let mut next = 1usize;
                for _ in 0..self.p {
                    next = mul[next * q + pw] as usize;
                }
                pw = next;
            }
            *t = acc as u16;
        }
        Tables { add, mul, inv, trace }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn f(&self) -> u32 {
        self.f
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            None => (a + b) % self.p,
            Some(t) => t.add[(a * self.q + b) as usize] as u64,
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        match &self.tables {
            None => (self.p - a) % self.p,
            Some(_) => {
                let mut out = 0;
                let mut a = a;
                let mut scale = 1;
                for _ in 0..self.f {
                    out += ((self.p - a % self.p) % self.p) * scale;
                    a /= self.p;
                    scale *= self.p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            None => a * b % self.p,
            Some(t) => t.mul[(a * self.q + b) as usize] as u64,
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            None => Some(self.pow(a, self.p - 2)),
            Some(t) => Some(t.inv[a as usize] as u64),
        }
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to `F_p`, returned as an integer in `0..p`.
    pub fn trace(&self, a: u64) -> u64 {
        match &self.tables {
            None => a,
            Some(t) => t.trace[a as usize] as u64,
        }
    }

    /// Image of an integer under `Z -> F_p ⊂ F_q`.
    pub fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }

    /// Additive generators over `F_p`: the codes `p^i`, `i < f`.
    pub fn additive_basis(&self) -> Vec<u64> {
        (0..self.f).map(|i| self.p.pow(i)).collect()
    }
}

fn least_irreducible(base: &Fq, f: u32) -> Vec<u64> {
    let p = base.p();
    for code in 0..p.pow(f) {
        let mut m: Vec<u64> = (0..f).map(|i| code / p.pow(i) % p).collect();
        m.push(1);
        if fpoly::is_irreducible(base, &m) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
