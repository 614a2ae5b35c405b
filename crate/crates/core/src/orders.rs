//! The principal orders `𝔐 = M_n(O)` and `ℑ` (upper triangular mod `p`),
//! with their radical powers and unit filtrations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matlin::{det, FracMat, Mat};
use crate::ring::{Ring, Val};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrderTag {
    M,
    I,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Order {
    pub tag: OrderTag,
    pub n: usize,
}

/// Minimum valuations defining `P^m`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValPattern {
    pub n: usize,
    pub req: Vec<i64>,
}

impl ValPattern {
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.req[i * self.n + j]
    }
}

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

impl Order {
    pub fn maximal(n: usize) -> Order {
        Order { tag: OrderTag::M, n }
    }

    pub fn iwahori(n: usize) -> Order {
        Order { tag: OrderTag::I, n }
    }

    /// Ramification index `e(𝔄)`: `P^{e} = ϖ·𝔄`.
    pub fn e(&self) -> i64 {
        match self.tag {
            OrderTag::M => 1,
            OrderTag::I => self.n as i64,
        }
    }

    /// Least valuation of entry `(i, j)` for elements of `P^m`.
    pub fn requirement(&self, m: i64, i: usize, j: usize) -> i64 {
        match self.tag {
            OrderTag::M => m,
            OrderTag::I => ceil_div(m + i as i64 - j as i64, self.n as i64),
        }
    }

    pub fn pattern(&self, m: i64) -> ValPattern {
        let n = self.n;
        ValPattern { n, req: (0..n * n).map(|k| self.requirement(m, k / n, k % n)).collect() }
    }

    /// `Π_𝔐 = ϖ·Id`; `Π_ℑ` has ones on the superdiagonal and `ϖ` in the corner.
    pub fn pi_element(&self, ring: &Ring) -> Mat {
        let n = self.n;
        match self.tag {
            OrderTag::M => ring.mat_scalar(&ring.pi(), n),
            OrderTag::I => {
                let mut m = ring.mat_zero(n, ring.r_w());
                for i in 0..n - 1 {
                    m.set(i, i + 1, ring.one());
                }
                m.set(n - 1, 0, ring.pi());
                m
            }
        }
    }

    fn entry_offset(&self, i: usize, j: usize) -> i64 {
        match self.tag {
            OrderTag::M => 0,
            OrderTag::I => j as i64 - i as i64,
        }
    }

    pub fn in_p(&self, ring: &Ring, m: i64, x: &FracMat) -> Result<bool> {
        let n = self.n;
        let mut undecided = false;
        for i in 0..n {
            for j in 0..n {
                let v = ring.val(&x.m.get(i, j)).shift(-(x.s as i64));
                match v.at_least(self.requirement(m, i, j)) {
                    Some(false) => return Ok(false),
                    Some(true) => {}
                    None => undecided = true,
                }
            }
        }
        if undecided {
            Err(Error::InsufficientPrecision(format!("membership in P^{m}")))
        } else {
            Ok(true)
        }
    }

    /// `x ∈ U^m = 1 + P^m`, `m >= 1`.
    pub fn in_u(&self, ring: &Ring, m: i64, x: &Mat) -> Result<bool> {
        assert!(m >= 1, "U^m is defined here for m >= 1");
        let y = ring.mat_sub(x, &ring.mat_identity(self.n, x.prec()));
        self.in_p(ring, m, &FracMat::integral(y))
    }

    /// `x ∈ U_𝔄 = 𝔄^×`.
    pub fn in_u0(&self, ring: &Ring, x: &Mat) -> Result<bool> {
        if !self.in_p(ring, 0, &FracMat::integral(x.clone()))? {
            return Ok(false);
        }
        ring.is_unit(&det(ring, x)?)
    }

    /// `ν_𝔄(x) = max{m : x ∈ P^m}`, truncation-aware.
    pub fn nu(&self, ring: &Ring, x: &FracMat) -> Val {
        let n = self.n;
        let e = self.e();
        let mut exact: Option<i64> = None;
        let mut hidden: Option<i64> = None;
        for i in 0..n {
            for j in 0..n {
                let off = self.entry_offset(i, j);
                match ring.val(&x.m.get(i, j)).shift(-(x.s as i64)) {
                    Val::Exact(v) => {
                        let c = e * v + off;
                        exact = Some(exact.map_or(c, |b| b.min(c)));
                    }
                    Val::AtLeast(b) => {
                        let c = e * b + off;
                        hidden = Some(hidden.map_or(c, |h| h.min(c)));
                    }
                }
            }
        }
        match (exact, hidden) {
            (Some(v), None) => Val::Exact(v),
            (Some(v), Some(h)) if v <= h => Val::Exact(v),
            (_, Some(h)) => Val::AtLeast(exact.map_or(h, |v| v.min(h))),
            (None, None) => Val::AtLeast(0),
        }
    }
}

/// `x = Π_ℑ^j·B` with `B ∈ U_ℑ`. Each left multiplication by `Π_ℑ^{-1}`
/// divides one row by `ϖ`, so `B` carries correspondingly fewer digits.
pub fn iwahori_decompose(ring: &Ring, x: &FracMat) -> Result<(i64, Mat)> {
    let x = ring.frac_mat_normalize(x.clone());
    let n = x.m.n();
    let order = Order::iwahori(n);
    let k = match order.nu(ring, &FracMat::integral(x.m.clone())) {
        Val::Exact(k) => k,
        Val::AtLeast(_) => {
            return Err(Error::InsufficientPrecision("ν_ℑ not determined".into()));
        }
    };
    if k < 0 {
        let b = iwahori_compose(ring, (-k) as u32, &x.m);
        if !order.in_u0(ring, &b)? {
            return Err(Error::NotInNormalizer);
        }
        return Ok((k - n as i64 * x.s as i64, b));
    }
    let mut rows: Vec<Vec<_>> = (0..n).map(|i| x.m.row(i).to_vec()).collect();
    for _ in 0..k {
        let last = rows.pop().expect("n >= 1");
        let divided = last
            .iter()
            .map(|e| ring.shift_down(e, 1))
            .collect::<Result<Vec<_>>>()?;
        rows.insert(0, divided);
    }
    let b = Mat::from_entries(n, rows.into_iter().flatten().collect());
    if !order.in_u0(ring, &b)? {
        return Err(Error::NotInNormalizer);
    }
    Ok((k - n as i64 * x.s as i64, b))
}

/// `Π_ℑ^j·B` for `j >= 0`, by row rotation.
pub fn iwahori_compose(ring: &Ring, j: u32, b: &Mat) -> Mat {
    let n = b.n();
    let mut rows: Vec<Vec<_>> = (0..n).map(|i| b.row(i).to_vec()).collect();
    for _ in 0..j {
        let first = rows.remove(0);
        rows.push(first.iter().map(|e| ring.shift_up(e, 1)).collect());
    }
    Mat::from_entries(n, rows.into_iter().flatten().collect())
}

/// All matrices at precision `prec` whose entry `(i, j)` has valuation at
/// least `req[i·n + j]` (negative requirements count as 0).
pub fn lattice_points(ring: &Ring, n: usize, req: &[i64], prec: u32, guard: u64) -> Result<Vec<Mat>> {
    let free: Vec<u32> = req.iter().map(|&r| prec.saturating_sub(r.max(0) as u32)).collect();
    let size = free.iter().fold(1u128, |acc, &k| acc.saturating_mul(ring.qpow(k) as u128));
    crate::error::guard(size, guard)?;
    let mut out = Vec::with_capacity(size as usize);
    let radices: Vec<u64> = free.iter().map(|&k| ring.qpow(k)).collect();
    let mut counter = vec![0u64; n * n];
    loop {
        let entries = counter
            .iter()
            .zip(&free)
            .map(|(&c, &k)| ring.elem(c * ring.qpow(prec - k), prec))
            .collect();
        out.push(Mat::from_entries(n, entries));
        let mut pos = n * n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            counter[pos] += 1;
            if counter[pos] < radices[pos] {
                break;
            }
            counter[pos] = 0;
        }
    }
}

impl Order {
    /// `P^m` modulo `p^prec`.
    pub fn radical_elements(&self, ring: &Ring, m: i64, prec: u32, guard: u64) -> Result<Vec<Mat>> {
        lattice_points(ring, self.n, &self.pattern(m).req, prec, guard)
    }

    /// `U^m = 1 + P^m` modulo `p^prec`, `m >= 1`.
    pub fn unit_elements(&self, ring: &Ring, m: i64, prec: u32, guard: u64) -> Result<Vec<Mat>> {
        assert!(m >= 1, "U^m is defined here for m >= 1");
        let id = ring.mat_identity(self.n, prec);
        Ok(self.radical_elements(ring, m, prec, guard)?.iter().map(|y| ring.mat_add(&id, y)).collect())
    }
}
