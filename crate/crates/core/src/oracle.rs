//! Brute-force reference implementations. They share only the ring and
//! matrix arithmetic with the main paths and are meant for tests.

use std::collections::{BTreeSet, HashSet};

use crate::error::{guard, Error, Result};
use crate::matlin::{FracMat, Mat};
use crate::ring::{Elem, Ring};
use crate::strata::{field_certificate, CertificateKind};

/// Guard for the double-loop oracles.
pub const ORACLE_GUARD: u64 = 1 << 20;

fn all_matrices(ring: &Ring, n: usize, k: u32) -> Result<Vec<Mat>> {
    let size = (ring.qpow(k) as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    guard(size, ORACLE_GUARD)?;
    Ok((0..size as u64).map(|c| ring.mat_from_code(n, k, c)).collect())
}

fn residue_det_nonzero(ring: &Ring, a: &Mat) -> bool {
    ring.residue(&leibniz_det(ring, a)) != 0
}

/// Determinant by the permutation expansion.
pub fn leibniz_det(ring: &Ring, a: &Mat) -> Elem {
    let n = a.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = ring.elem(0, a.prec());
    loop {
        let mut term = ring.elem(1, a.prec());
        for (i, &j) in perm.iter().enumerate() {
            term = ring.mul(&term, &a.get(i, j));
        }
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        total = if inversions % 2 == 0 { ring.add(&total, &term) } else { ring.sub(&total, &term) };
        if !next_permutation(&mut perm) {
            return total;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Partition of `M_n(O/p^lp)` into conjugacy classes, each block sorted by
/// code, blocks sorted by their least code. Every class is produced by
/// conjugating with every element of the full group.
pub fn brute_conjugacy_partition(ring: &Ring, n: usize, lp: u32) -> Result<Vec<Vec<u64>>> {
    let mats = all_matrices(ring, n, lp)?;
    let group: Vec<(Mat, Mat)> = mats
        .iter()
        .filter(|g| residue_det_nonzero(ring, g))
        .map(|g| (g.clone(), ring.mat_inv(g).expect("unit determinant")))
        .collect();
    let mut assigned = vec![false; mats.len()];
    let mut blocks = Vec::new();
    for (code, a) in mats.iter().enumerate() {
        if assigned[code] {
            continue;
        }
        let mut block = BTreeSet::new();
        for (g, h) in &group {
            let b = ring.mat_mul(&ring.mat_mul(g, a), h);
            block.insert(ring.mat_code(&b, lp));
        }
        for &c in &block {
            assigned[c as usize] = true;
        }
        blocks.push(block.into_iter().collect());
    }
    Ok(blocks)
}

/// `Π_ℑ` written out by hand: ones on the superdiagonal and `ϖ` in the
/// lower-left corner.
fn iwahori_prime(ring: &Ring, n: usize, k: u32) -> Mat {
    let mut m = ring.mat_zero(n, k);
    for i in 0..n - 1 {
        m.set(i, i + 1, ring.elem(1, k));
    }
    m.set(n - 1, 0, ring.reduce(&ring.pi(), k));
    m
}

fn in_iwahori_units(ring: &Ring, b: &Mat) -> bool {
    let n = b.n();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let r = ring.residue(&b.get(i, j));
            if i == j {
                r != 0
            } else if i > j {
                r == 0
            } else {
                true
            }
        })
    })
}

/// Whether the class meets `{Π_ℑ^j·B mod p^lp : B ∈ U_ℑ}`.
pub fn brute_coset_intersect(ring: &Ring, class: &[u64], n: usize, j: u32, lp: u32) -> Result<bool> {
    let pj = ring.mat_pow(&iwahori_prime(ring, n, lp), j);
    let members: HashSet<u64> = class.iter().copied().collect();
    for b in all_matrices(ring, n, lp)? {
        if in_iwahori_units(ring, &b) && members.contains(&ring.mat_code(&ring.mat_mul(&pj, &b), lp)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Minimality from the definition: `gcd(ν_E(β), e) = 1` with
/// `ν_E(β) = (e/d)·ν_F(det β)`, and residue generation measured by the size
/// of `k_F[Ā]` for `A = ϖ^{-ν_E(β)}β` when `e = 1`.
pub fn brute_minimality(ring: &Ring, beta: &FracMat) -> Result<bool> {
    let cert = field_certificate(ring, beta)?;
    if cert.kind == CertificateKind::Inconclusive {
        return Err(Error::InconclusiveFieldData);
    }
    let d = beta.m.n() as i64;
    let det = leibniz_det(ring, &beta.m);
    let v = ring
        .val(&det)
        .exact()
        .ok_or_else(|| Error::InsufficientPrecision("det β vanishes to working precision".into()))?;
    let nu_f = v - d * beta.s as i64;
    let nu_e = cert.e * nu_f / d;
    let (mut a, mut b) = (nu_e.abs(), cert.e);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    if a != 1 {
        return Ok(false);
    }
    if cert.e != 1 {
        return Ok(true);
    }
    let g = ring.frac_mat_integral(&ring.frac_mat_scale_pi(beta, -nu_e))?;
    let gbar = ring.mat_reduce(&g, 1);
    let powers: Vec<Mat> = (0..d as u32).map(|i| ring.mat_pow(&gbar, i)).collect();
    let q = ring.q();
    let mut span = HashSet::new();
    for code in 0..q.pow(d as u32) {
        let mut acc = ring.mat_zero(d as usize, 1);
        for (i, pw) in powers.iter().enumerate() {
            let c = ring.elem(code / q.pow(i as u32) % q, 1);
            acc = ring.mat_add(&acc, &ring.mat_scale(&c, pw));
        }
        span.insert(ring.mat_code(&acc, 1));
    }
    Ok(span.len() as u64 == q.pow(cert.f_res as u32))
}
