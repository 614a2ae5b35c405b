//! Dense polynomials over a residue field, constant term first.
//! The zero polynomial is the empty vector.

use super::fq::Fq;

pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(fq: &Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|i| fq.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(v)
}

pub fn sub(fq: &Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|i| fq.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(v)
}

pub fn mul(fq: &Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fq.add(out[i + j], fq.mul(x, y));
        }
    }
    trim(out)
}

/// Division with remainder; `b` must be nonzero.
pub fn divrem(fq: &Fq, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by the zero polynomial");
    let lead_inv = fq.inv(b[db]).expect("nonzero leading coefficient");
    let mut r = trim(a.to_vec());
    let mut quo = vec![0; r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = fq.mul(r[dr], lead_inv);
        let shift = dr - db;
        quo[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[i + shift] = fq.sub(r[i + shift], fq.mul(c, bi));
        }
        r = trim(r);
    }
    (trim(quo), r)
}

pub fn rem(fq: &Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    divrem(fq, a, b).1
}

/// Monic greatest common divisor (zero if both inputs vanish).
pub fn gcd(fq: &Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(fq, &a, &b);
        a = b;
        b = r;
    }
    monic(fq, a)
}

pub fn monic(fq: &Fq, a: Vec<u64>) -> Vec<u64> {
    match degree(&a) {
        None => a,
        Some(d) => {
            let inv = fq.inv(a[d]).expect("nonzero");
            a.iter().map(|&c| fq.mul(c, inv)).collect()
        }
    }
}

pub fn powmod(fq: &Fq, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = rem(fq, &[1], m);
    let mut b = rem(fq, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(fq, &mul(fq, &acc, &b), m);
        }
        b = rem(fq, &mul(fq, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// Ben-Or test: `f` of degree `d` is irreducible iff
/// `gcd(x^{q^i} - x, f) = 1` for every `1 <= i <= d/2`.
pub fn is_irreducible(fq: &Fq, f: &[u64]) -> bool {
    let f = trim(f.to_vec());
    let d = match degree(&f) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    let x = vec![0, 1];
    let mut h = rem(fq, &x, &f);
    for _ in 1..=d / 2 {
        h = powmod(fq, &h, fq.q(), &f);
        let g = gcd(fq, &sub(fq, &h, &x), &f);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}
