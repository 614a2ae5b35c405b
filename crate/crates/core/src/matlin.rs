//! Matrices over truncated rings and over the residue field.

use crate::error::{Error, Result};
use crate::ring::{fpoly, Elem, FracElem, Fq, Ring, Val};

/// Largest dimension accepted by the characteristic polynomial routine.
pub const MAX_DIM: usize = 6;

/// Square matrix, row-major. Entries may carry different precisions; the
/// matrix precision is their minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    n: usize,
    entries: Vec<Elem>,
}

impl Mat {
    pub fn from_entries(n: usize, entries: Vec<Elem>) -> Mat {
        assert_eq!(entries.len(), n * n, "entry count must be n^2");
        Mat { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Elem) {
        self.entries[i * self.n + j] = e;
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn prec(&self) -> u32 {
        self.entries.iter().map(|e| e.prec()).min().unwrap_or(0)
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

/// `ϖ^{-s}·m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FracMat {
    pub s: u32,
    pub m: Mat,
}

impl FracMat {
    pub fn integral(m: Mat) -> FracMat {
        FracMat { s: 0, m }
    }
}

/// Monic polynomial over `O/p^r`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OPoly {
    pub coeffs: Vec<Elem>,
}

impl OPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn reduce_mod_p(&self, ring: &Ring) -> KPoly {
        KPoly { coeffs: self.coeffs.iter().map(|c| ring.residue(c)).collect() }
    }

    /// Monic polynomial from full-precision integer coefficients (constant first, leading 1 implied).
    pub fn from_ints(ring: &Ring, lower: &[i64]) -> OPoly {
        let mut coeffs: Vec<Elem> = lower.iter().map(|&c| ring.int(c)).collect();
        coeffs.push(ring.one());
        OPoly { coeffs }
    }
}

/// Monic polynomial over `F_q`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KPoly {
    pub coeffs: Vec<u64>,
}

impl Ring {
    pub fn mat_zero(&self, n: usize, prec: u32) -> Mat {
        Mat::from_entries(n, vec![self.elem(0, prec); n * n])
    }

    pub fn mat_identity(&self, n: usize, prec: u32) -> Mat {
        self.mat_scalar(&self.elem(1, prec), n)
    }

    pub fn mat_scalar(&self, c: &Elem, n: usize) -> Mat {
        let mut m = self.mat_zero(n, c.prec());
        for i in 0..n {
            m.set(i, i, *c);
        }
        m
    }

    /// Matrix from integer entries at full precision.
    pub fn mat_ints(&self, n: usize, vals: &[i64]) -> Mat {
        Mat::from_entries(n, vals.iter().map(|&v| self.int(v)).collect())
    }

    pub fn mat_from_elems(&self, n: usize, vals: &[Elem]) -> Mat {
        Mat::from_entries(n, vals.to_vec())
    }

    pub fn mat_add(&self, a: &Mat, b: &Mat) -> Mat {
        let e = a.entries.iter().zip(&b.entries).map(|(x, y)| self.add(x, y)).collect();
        Mat::from_entries(a.n, e)
    }

    pub fn mat_sub(&self, a: &Mat, b: &Mat) -> Mat {
        let e = a.entries.iter().zip(&b.entries).map(|(x, y)| self.sub(x, y)).collect();
        Mat::from_entries(a.n, e)
    }

    pub fn mat_neg(&self, a: &Mat) -> Mat {
        Mat::from_entries(a.n, a.entries.iter().map(|x| self.neg(x)).collect())
    }

    pub fn mat_scale(&self, c: &Elem, a: &Mat) -> Mat {
        Mat::from_entries(a.n, a.entries.iter().map(|x| self.mul(c, x)).collect())
    }

    pub fn mat_mul(&self, a: &Mat, b: &Mat) -> Mat {
        let n = a.n;
        let prec = a.prec().min(b.prec());
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut s = self.elem(0, prec);
                for k in 0..n {
                    s = self.add(&s, &self.mul(&a.get(i, k), &b.get(k, j)));
                }
                out.push(s);
            }
        }
        Mat::from_entries(n, out)
    }

    pub fn mat_vec(&self, a: &Mat, v: &[Elem]) -> Vec<Elem> {
        (0..a.n)
            .map(|i| {
                let mut s = self.elem(0, a.prec().min(v.iter().map(|x| x.prec()).min().unwrap_or(0)));
                for (k, vk) in v.iter().enumerate() {
                    s = self.add(&s, &self.mul(&a.get(i, k), vk));
                }
                s
            })
            .collect()
    }

    pub fn mat_pow(&self, a: &Mat, e: u32) -> Mat {
        let mut acc = self.mat_identity(a.n, a.prec());
        for _ in 0..e {
            acc = self.mat_mul(&acc, a);
        }
        acc
    }

    pub fn mat_reduce(&self, a: &Mat, prec: u32) -> Mat {
        Mat::from_entries(a.n, a.entries.iter().map(|x| self.reduce(x, prec)).collect())
    }

    /// Canonical lift: every entry claims precision `prec`.
    pub fn mat_lift(&self, a: &Mat, prec: u32) -> Mat {
        Mat::from_entries(a.n, a.entries.iter().map(|x| self.lift(x, prec)).collect())
    }

    /// Residue matrix as `F_q` codes, row-major.
    pub fn mat_residue(&self, a: &Mat) -> Vec<u64> {
        a.entries.iter().map(|x| self.residue(x)).collect()
    }

    pub fn mat_from_residue(&self, n: usize, codes: &[u64], prec: u32) -> Mat {
        Mat::from_entries(n, codes.iter().map(|&c| self.from_residue(c, prec)).collect())
    }

    pub fn mat_shift_up(&self, a: &Mat, k: u32) -> Mat {
        Mat::from_entries(a.n, a.entries.iter().map(|x| self.shift_up(x, k)).collect())
    }

    pub fn mat_transpose(&self, a: &Mat) -> Mat {
        let n = a.n;
        Mat::from_entries(n, (0..n * n).map(|idx| a.get(idx % n, idx / n)).collect())
    }

    /// Integer code of a matrix with all entries read at precision `prec`,
    /// first entry most significant (so numeric order is lexicographic order).
    pub fn mat_code(&self, a: &Mat, prec: u32) -> u64 {
        let base = self.qpow(prec);
        a.entries.iter().fold(0u64, |acc, x| acc * base + x.code() % base)
    }

    pub fn mat_from_code(&self, n: usize, prec: u32, mut code: u64) -> Mat {
        let base = self.qpow(prec);
        let mut e = vec![self.elem(0, prec); n * n];
        for slot in e.iter_mut().rev() {
            *slot = self.elem(code % base, prec);
            code /= base;
        }
        Mat::from_entries(n, e)
    }

    /// Number of matrices in `M_n(O/p^prec)`, or `None` on overflow.
    pub fn mat_space_size(&self, n: usize, prec: u32) -> Option<u64> {
        self.qpow(prec).checked_pow((n * n) as u32)
    }

    pub fn mat_is_unit(&self, a: &Mat) -> Result<bool> {
        self.is_unit(&det(self, a)?)
    }

    /// Inverse by Gauss-Jordan elimination with unit pivots.
    pub fn mat_inv(&self, a: &Mat) -> Result<Mat> {
        let n = a.n;
        let prec = a.prec();
        if prec == 0 {
            return Err(Error::NonUnit);
        }
        let mut m: Vec<Vec<Elem>> =
            (0..n).map(|i| a.row(i).iter().map(|x| self.reduce(x, prec)).collect()).collect();
        let mut inv: Vec<Vec<Elem>> = (0..n)
            .map(|i| (0..n).map(|j| self.elem((i == j) as u64, prec)).collect())
            .collect();
        for c in 0..n {
            let piv = (c..n).find(|&r| self.residue(&m[r][c]) != 0).ok_or(Error::NonUnit)?;
            m.swap(c, piv);
            inv.swap(c, piv);
            let s = self.inv(&m[c][c])?;
            for j in 0..n {
                m[c][j] = self.mul(&m[c][j], &s);
                inv[c][j] = self.mul(&inv[c][j], &s);
            }
            for r in 0..n {
                if r == c || m[r][c].is_zero() {
                    continue;
                }
                let factor = m[r][c];
                for j in 0..n {
                    let t = self.mul(&factor, &m[c][j]);
                    m[r][j] = self.sub(&m[r][j], &t);
                    let t = self.mul(&factor, &inv[c][j]);
                    inv[r][j] = self.sub(&inv[r][j], &t);
                }
            }
        }
        Ok(Mat::from_entries(n, inv.into_iter().flatten().collect()))
    }

    /// `g·a·g^{-1}`.
    pub fn mat_conj(&self, g: &Mat, a: &Mat) -> Result<Mat> {
        Ok(self.mat_mul(&self.mat_mul(g, a), &self.mat_inv(g)?))
    }

    // Fractional matrices.

    pub fn frac_mat(&self, s: u32, m: Mat) -> FracMat {
        self.frac_mat_normalize(FracMat { s, m })
    }

    pub fn frac_mat_normalize(&self, x: FracMat) -> FracMat {
        let mut x = x;
        let q = self.q();
        while x.s > 0
            && x.m.entries.iter().any(|e| !e.is_zero())
            && x.m.entries.iter().all(|e| e.code() % q == 0 && e.prec() > 0)
        {
            let e = x.m.entries.iter().map(|e| self.shift_down(e, 1).expect("divisible")).collect();
            x.m = Mat::from_entries(x.m.n, e);
            x.s -= 1;
        }
        x
    }

    pub fn frac_mat_to_denominator(&self, x: &FracMat, s: u32) -> FracMat {
        assert!(s >= x.s);
        FracMat { s, m: self.mat_shift_up(&x.m, s - x.s) }
    }

    pub fn frac_mat_add(&self, a: &FracMat, b: &FracMat) -> FracMat {
        let s = a.s.max(b.s);
        let (x, y) = (self.frac_mat_to_denominator(a, s), self.frac_mat_to_denominator(b, s));
        self.frac_mat(s, self.mat_add(&x.m, &y.m))
    }

    pub fn frac_mat_sub(&self, a: &FracMat, b: &FracMat) -> FracMat {
        let s = a.s.max(b.s);
        let (x, y) = (self.frac_mat_to_denominator(a, s), self.frac_mat_to_denominator(b, s));
        self.frac_mat(s, self.mat_sub(&x.m, &y.m))
    }

    pub fn frac_mat_mul(&self, a: &FracMat, b: &FracMat) -> FracMat {
        self.frac_mat(a.s + b.s, self.mat_mul(&a.m, &b.m))
    }

    /// Multiplication by `ϖ^k`, `k` of either sign.
    pub fn frac_mat_scale_pi(&self, x: &FracMat, k: i64) -> FracMat {
        if k < 0 {
            return self.frac_mat(x.s + (-k) as u32, x.m.clone());
        }
        let k = k as u32;
        let cancel = k.min(x.s);
        let m = self.mat_shift_up(&x.m, k - cancel);
        self.frac_mat(x.s - cancel, m)
    }

    pub fn frac_mat_trace(&self, x: &FracMat) -> FracElem {
        self.frac(x.s, trace(self, &x.m))
    }

    /// The integral matrix represented by `x`, if its denominator clears.
    pub fn frac_mat_integral(&self, x: &FracMat) -> Result<Mat> {
        let x = self.frac_mat_normalize(x.clone());
        if x.s == 0 {
            return Ok(x.m);
        }
        let e = x
            .m
            .entries
            .iter()
            .map(|e| self.shift_down(e, x.s))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::Invalid("matrix is not integral".into()))?;
        Ok(Mat::from_entries(x.m.n, e))
    }
}

pub fn trace(ring: &Ring, a: &Mat) -> Elem {
    let mut s = ring.elem(0, a.prec());
    for i in 0..a.n() {
        s = ring.add(&s, &a.get(i, i));
    }
    s
}

/// Characteristic polynomial `det(x - A)` by the division-free
/// Samuelson-Berkowitz recursion on trailing principal submatrices.
pub fn charpoly(ring: &Ring, a: &Mat) -> Result<OPoly> {
    let n = a.n();
    if n > MAX_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let prec = a.prec();
    let one = ring.elem(1, prec);
    let zero = ring.elem(0, prec);
    // coefficient vector, highest degree first
    let mut v = vec![one];
    for k in (0..n).rev() {
        let s = n - k;
        let sub = |i: usize, j: usize| a.get(k + 1 + i, k + 1 + j);
        let r: Vec<Elem> = (0..s - 1).map(|j| a.get(k, k + 1 + j)).collect();
        let mut c: Vec<Elem> = (0..s - 1).map(|i| a.get(k + 1 + i, k)).collect();
        let mut t = vec![one, ring.neg(&a.get(k, k))];
        for _ in 0..s.saturating_sub(1) {
            let mut dot = zero;
            for (x, y) in r.iter().zip(&c) {
                dot = ring.add(&dot, &ring.mul(x, y));
            }
            t.push(ring.neg(&dot));
            c = (0..s - 1)
                .map(|i| {
                    let mut acc = zero;
                    for (j, cj) in c.iter().enumerate() {
                        acc = ring.add(&acc, &ring.mul(&sub(i, j), cj));
                    }
                    acc
                })
                .collect();
        }
        let mut next = vec![zero; s + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j {
                    *slot = ring.add(slot, &ring.mul(&t[i - j], vj));
                }
            }
        }
        v = next;
    }
    v.reverse();
    Ok(OPoly { coeffs: v })
}

pub fn det(ring: &Ring, a: &Mat) -> Result<Elem> {
    let cp = charpoly(ring, a)?;
    let c0 = cp.coeffs[0];
    Ok(if a.n().is_multiple_of(2) { c0 } else { ring.neg(&c0) })
}

/// Companion matrix with ones on the subdiagonal and last column `-a_i`,
/// so that `e_1` is a cyclic vector.
pub fn companion(ring: &Ring, f: &OPoly) -> Mat {
    let n = f.degree();
    let prec = f.coeffs.iter().map(|c| c.prec()).min().unwrap_or(ring.r_w());
    let mut m = ring.mat_zero(n, prec);
    for i in 0..n {
        if i + 1 < n {
            m.set(i + 1, i, ring.elem(1, prec));
        }
        m.set(i, n - 1, ring.neg(&ring.reduce(&f.coeffs[i], prec)));
    }
    m
}

pub fn kpoly_irreducible(fq: &Fq, f: &KPoly) -> bool {
    fpoly::is_irreducible(fq, &f.coeffs)
}

/// `val(a_i) >= 1` for `1 <= i < n` and `val(a_0) = 1` exactly.
pub fn eisenstein(ring: &Ring, f: &OPoly) -> Result<bool> {
    let n = f.degree();
    let a0 = f.coeffs[0];
    if a0.prec() < 2 {
        return Err(Error::PrecisionTooLow(format!(
            "constant coefficient known to precision {}, need 2",
            a0.prec()
        )));
    }
    for c in &f.coeffs[1..n] {
        if c.prec() < 1 {
            return Err(Error::PrecisionTooLow("coefficient with no digits".into()));
        }
        if ring.residue(c) != 0 {
            return Ok(false);
        }
    }
    Ok(ring.val(&a0) == Val::Exact(1))
}

/// Rank of a matrix over `F_q` given as rows of codes.
pub fn krank(fq: &Fq, rows: &[Vec<u64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = fq.inv(m[rank][c]).expect("nonzero pivot");
        for x in m[rank].iter_mut() {
            *x = fq.mul(*x, inv);
        }
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = fq.sub(*x, fq.mul(factor, y));
                }
            }
        }
        rank += 1;
    }
    rank
}

fn kmat_mul(fq: &Fq, n: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0;
            for k in 0..n {
                s = fq.add(s, fq.mul(a[i * n + k], b[k * n + j]));
            }
            out[i * n + j] = s;
        }
    }
    out
}

/// Dimension over `F_q` of the commutant of the reduction of `a` mod `p`,
/// by solving the `n^2 × n^2` system `XĀ − ĀX = 0`.
pub fn commutant_dim(ring: &Ring, a: &Mat) -> usize {
    let fq = ring.fq();
    let n = a.n();
    let abar = ring.mat_residue(a);
    let var = |i: usize, j: usize| i * n + j;
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![0u64; n * n];
            for k in 0..n {
                // (XĀ)_{ij} contributes X_{ik} Ā_{kj}; (ĀX)_{ij} contributes Ā_{ik} X_{kj}
                row[var(i, k)] = fq.add(row[var(i, k)], abar[k * n + j]);
                row[var(k, j)] = fq.sub(row[var(k, j)], abar[i * n + k]);
            }
            rows.push(row);
        }
    }
    n * n - krank(fq, &rows)
}

pub fn is_regular_modp(ring: &Ring, a: &Mat) -> bool {
    commutant_dim(ring, a) == a.n()
}

/// Degree of the minimal polynomial of the reduction mod `p`.
pub fn minpoly_degree_modp(ring: &Ring, a: &Mat) -> usize {
    let fq = ring.fq();
    let n = a.n();
    let abar = ring.mat_residue(a);
    let mut power: Vec<u64> = (0..n * n).map(|k| (k / n == k % n) as u64).collect();
    let mut rows = Vec::new();
    for _ in 0..n {
        rows.push(power.clone());
        power = kmat_mul(fq, n, &power, &abar);
    }
    krank(fq, &rows)
}

fn krylov_residue(fq: &Fq, n: usize, abar: &[u64], v: &[u64]) -> Vec<Vec<u64>> {
    let mut cols = Vec::with_capacity(n);
    let mut w = v.to_vec();
    for _ in 0..n {
        cols.push(w.clone());
        w = (0..n)
            .map(|i| (0..n).fold(0, |s, k| fq.add(s, fq.mul(abar[i * n + k], w[k]))))
            .collect();
    }
    cols
}

/// A vector `v` whose Krylov matrix `[v | Mv | … | M^{n-1}v]` is invertible,
/// searched over residue vectors in lexicographic order and lifted.
pub fn cyclic_vector(ring: &Ring, m: &Mat) -> Result<Vec<Elem>> {
    let prec = m.prec();
    if prec == 0 {
        return Err(Error::InsufficientPrecision("matrix with no digits".into()));
    }
    let fq = ring.fq();
    let n = m.n();
    let q = ring.q();
    let abar = ring.mat_residue(m);
    let total = q
        .checked_pow(n as u32)
        .ok_or_else(|| Error::Unsupported("residue vector space too large".into()))?;
    for code in 1..total {
        let v: Vec<u64> = (0..n).map(|i| code / q.pow((n - 1 - i) as u32) % q).collect();
        if krank(fq, &krylov_residue(fq, n, &abar, &v)) == n {
            return Ok(v.iter().map(|&c| ring.from_residue(c, prec)).collect());
        }
    }
    Err(Error::NotFound("no cyclic vector modulo p".into()))
}

/// Krylov matrix with columns `v, Mv, …, M^{n-1}v`.
pub fn krylov(ring: &Ring, m: &Mat, v: &[Elem]) -> Mat {
    let n = m.n();
    let mut cols = Vec::with_capacity(n);
    let mut w = v.to_vec();
    for _ in 0..n {
        cols.push(w.clone());
        w = ring.mat_vec(m, &w);
    }
    let entries = (0..n * n).map(|idx| cols[idx % n][idx / n]).collect();
    Mat::from_entries(n, entries)
}

/// `g` with `g^{-1}·m·g = companion(charpoly(m))`, for `m` with Eisenstein
/// characteristic polynomial.
pub fn reduce_to_companion(ring: &Ring, m: &Mat) -> Result<Mat> {
    let f = charpoly(ring, m)?;
    if !eisenstein(ring, &f)? {
        return Err(Error::Invalid("characteristic polynomial is not Eisenstein".into()));
    }
    let v = cyclic_vector(ring, m)?;
    let g = krylov(ring, m, &v);
    let check = ring.mat_mul(&ring.mat_inv(&g)?, &ring.mat_mul(m, &g));
    if check != companion(ring, &f) {
        return Err(Error::NotFound("Krylov basis did not produce the companion form".into()));
    }
    Ok(g)
}
