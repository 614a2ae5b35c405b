//! Conjugacy orbits in `M_n(O/p^{l'})`, scalar twists, and the orbit-level
//! classification of cuspidal types.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::matlin::{charpoly, eisenstein, is_regular_modp, krank, kpoly_irreducible, Mat};
use crate::orders::{iwahori_compose, Order};
use crate::ring::{Elem, Ring, Val};

/// Conductor data `r`, `l = ⌊(r+1)/2⌋`, `l' = r − l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelData {
    pub r: u32,
    pub l: u32,
    pub lp: u32,
}

impl LevelData {
    pub fn new(r: u32) -> Result<LevelData> {
        if r < 2 {
            return Err(Error::Invalid(format!("conductor {r}: orbits need r >= 2")));
        }
        let l = r.div_ceil(2);
        Ok(LevelData { r, l, lp: r - l })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub level: LevelData,
    /// Least member of the class in code order, at precision `lp`.
    pub rep: Mat,
    pub size: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    IrredModP,
    PiForm(u32),
    NoCriterion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    IsType,
    NotType,
    IndeterminateSmallConductor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub twist: Option<Elem>,
    pub label: Label,
    pub verdict: Verdict,
    pub regular: bool,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::IrredModP => write!(f, "IrredModP"),
            Label::PiForm(j) => write!(f, "PiForm({j})"),
            Label::NoCriterion => write!(f, "NoCriterion"),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::IsType => "IsType",
            Verdict::NotType => "NotType",
            Verdict::IndeterminateSmallConductor => "IndeterminateSmallConductor",
        };
        f.write_str(s)
    }
}

/// Generating set of `GL_n(O/p^k)` as pairs `(g, g^{-1})`: elementary
/// matrices `1 + a·e_ij` over additive generators `a`, and `diag(u, 1, …)`
/// over all units `u`.
pub fn gl_generators(ring: &Ring, n: usize, k: u32) -> Vec<(Mat, Mat)> {
    let mut gens = Vec::new();
    let q = ring.q();
    let id = ring.mat_identity(n, k);
    let mut additive = Vec::new();
    for d in 0..k {
        for b in ring.fq().additive_basis() {
            additive.push(ring.elem(b * q.pow(d), k));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for a in &additive {
                let mut g = id.clone();
                g.set(i, j, *a);
                let mut h = id.clone();
                h.set(i, j, ring.neg(a));
                gens.push((g, h));
            }
        }
    }
    for u in ring.units(k) {
        if u.code() == 1 {
            continue;
        }
        let mut g = id.clone();
        g.set(0, 0, u);
        let mut h = id.clone();
        h.set(0, 0, ring.inv(&u).expect("unit"));
        gens.push((g, h));
    }
    gens
}

fn check_space(ring: &Ring, n: usize, k: u32, limit: u64) -> Result<u64> {
    let size = (ring.qpow(k) as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    guard(size, limit)?;
    Ok(size as u64)
}

/// Codes of all members of the conjugacy class of `a` (read at precision `k`).
pub fn class_members(ring: &Ring, a: &Mat, k: u32, limit: u64) -> Result<HashSet<u64>> {
    let n = a.n();
    check_space(ring, n, k, limit)?;
    let gens = gl_generators(ring, n, k);
    Ok(bfs(ring, n, k, ring.mat_code(a, k), &gens, |_| {}))
}

fn bfs(
    ring: &Ring,
    n: usize,
    k: u32,
    start: u64,
    gens: &[(Mat, Mat)],
    mut on_visit: impl FnMut(u64),
) -> HashSet<u64> {
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    on_visit(start);
    while let Some(code) = queue.pop_front() {
        let x = ring.mat_from_code(n, k, code);
        for (g, h) in gens {
            let y = ring.mat_code(&ring.mat_mul(&ring.mat_mul(g, &x), h), k);
            if seen.insert(y) {
                on_visit(y);
                queue.push_back(y);
            }
        }
    }
    seen
}

fn require_prec(a: &Mat, k: u32) -> Result<()> {
    if a.prec() < k {
        return Err(Error::InsufficientPrecision(format!(
            "orbit at level {k} needs the matrix to precision {k}, have {}",
            a.prec()
        )));
    }
    Ok(())
}

pub fn orbit_of(ring: &Ring, a: &Mat, r: u32, limit: u64) -> Result<Orbit> {
    let level = LevelData::new(r)?;
    require_prec(a, level.lp)?;
    let members = class_members(ring, a, level.lp, limit)?;
    let min = *members.iter().min().expect("nonempty class");
    Ok(Orbit { level, rep: ring.mat_from_code(a.n(), level.lp, min), size: members.len() as u64 })
}

/// All classes of `M_n(O/p^{lp})` as `(least code, class size)`, in code
/// order. Workers claim unvisited start points through a shared bitset; a
/// class explored twice by racing workers is merged by its least code.
pub fn enumerate_classes(ring: &Ring, n: usize, lp: u32, jobs: usize, limit: u64) -> Result<Vec<(u64, u64)>> {
    let total = check_space(ring, n, lp, limit)?;
    let gens = gl_generators(ring, n, lp);
    let words = total.div_ceil(64) as usize;
    let visited: Vec<AtomicU64> = (0..words).map(|_| AtomicU64::new(0)).collect();
    let mark = |c: u64| visited[(c / 64) as usize].fetch_or(1 << (c % 64), Ordering::Relaxed);
    let is_set = |c: u64| visited[(c / 64) as usize].load(Ordering::Relaxed) & (1 << (c % 64)) != 0;
    let run = || {
        (0..total)
            .into_par_iter()
            .filter_map(|c| {
                if is_set(c) {
                    return None;
                }
                let members = bfs(ring, n, lp, c, &gens, |x| {
                    mark(x);
                });
                let min = *members.iter().min().expect("nonempty");
                Some((min, members.len() as u64))
            })
            .collect::<Vec<_>>()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let found = pool.install(run);
    let merged: BTreeMap<u64, u64> = found.into_iter().collect();
    Ok(merged.into_iter().collect())
}

/// The class of `rep + c·Id`.
pub fn twist(ring: &Ring, o: &Orbit, c: &Elem, limit: u64) -> Result<Orbit> {
    let lp = o.level.lp;
    if c.prec() < lp {
        return Err(Error::InsufficientPrecision(format!("twist scalar needs precision {lp}")));
    }
    let shifted = ring.mat_add(&o.rep, &ring.mat_scalar(&ring.reduce(c, lp), o.rep.n()));
    orbit_of(ring, &shifted, o.level.r, limit)
}

pub fn detect_irred(ring: &Ring, o: &Orbit) -> Result<bool> {
    matrix_irred(ring, &o.rep)
}

fn matrix_irred(ring: &Ring, a: &Mat) -> Result<bool> {
    let f = charpoly(ring, a)?;
    Ok(kpoly_irreducible(ring.fq(), &f.reduce_mod_p(ring)))
}

pub fn is_regular_orbit(ring: &Ring, o: &Orbit) -> bool {
    is_regular_modp(ring, &o.rep)
}

/// Necessary conditions for `Π_ℑ^j·B`: coefficient valuations
/// `val(a_{n−i}) >= ⌈ji/n⌉`, `val(a_0) = j` (as far as visible), and a
/// nilpotent reduction of rank `n − j`.
pub fn piform_prefilter(ring: &Ring, a: &Mat, j: u32) -> Result<bool> {
    let n = a.n();
    let k = a.prec() as i64;
    let f = charpoly(ring, a)?;
    for i in 1..=n {
        let need = ((j as usize * i).div_ceil(n) as i64).min(k);
        if ring.val(&f.coeffs[n - i]).at_least(need) == Some(false) {
            return Ok(false);
        }
    }
    let v0 = ring.val(&f.coeffs[0]);
    let ok0 = if (j as i64) < k { v0 == Val::Exact(j as i64) } else { v0.at_least(k) == Some(true) };
    if !ok0 {
        return Ok(false);
    }
    let res = ring.mat_residue(a);
    let rows: Vec<Vec<u64>> = res.chunks(n).map(|r| r.to_vec()).collect();
    if krank(ring.fq(), &rows) != n - j as usize {
        return Ok(false);
    }
    let f0 = f.reduce_mod_p(ring);
    Ok(f0.coeffs[..n].iter().all(|&c| c == 0))
}

/// Codes of `Π_ℑ^j·B mod p^k` for `B ∈ U_ℑ`.
pub fn piform_coset(ring: &Ring, n: usize, j: u32, k: u32, limit: u64) -> Result<HashSet<u64>> {
    let order = Order::iwahori(n);
    let lattice = order.radical_elements(ring, 0, k, limit)?;
    let mut out = HashSet::new();
    for b in lattice {
        if (0..n).all(|i| ring.residue(&b.get(i, i)) != 0) {
            let x = ring.mat_reduce(&iwahori_compose(ring, j, &b), k);
            out.insert(ring.mat_code(&x, k));
        }
    }
    Ok(out)
}

/// Whether the class of `a` mod `p^k` meets the Π-form coset, by direct
/// intersection.
pub fn detect_piform_exhaustive(ring: &Ring, a: &Mat, j: u32, k: u32, limit: u64) -> Result<bool> {
    let n = a.n();
    if j == 0 || j as usize >= n {
        return Err(Error::Invalid(format!("Π-form exponent {j} outside 0 < j < {n}")));
    }
    let coset = piform_coset(ring, n, j, k, limit)?;
    let members = class_members(ring, a, k, limit)?;
    Ok(members.iter().any(|c| coset.contains(c)))
}

fn matrix_piform(ring: &Ring, a: &Mat, j: u32, k: u32, limit: u64) -> Result<bool> {
    let n = a.n();
    if j == 0 || j as usize >= n {
        return Err(Error::Invalid(format!("Π-form exponent {j} outside 0 < j < {n}")));
    }
    let a = ring.mat_reduce(a, k);
    if !piform_prefilter(ring, &a, j)? {
        return Ok(false);
    }
    if j == 1 && k >= 2 {
        return eisenstein(ring, &charpoly(ring, &a)?);
    }
    detect_piform_exhaustive(ring, &a, j, k, limit)
}

pub fn detect_piform(ring: &Ring, o: &Orbit, j: u32, limit: u64) -> Result<bool> {
    matrix_piform(ring, &o.rep, j, o.level.lp, limit)
}

/// Search all twists `c ∈ O/p^{l'}`: irreducibility first, then Π-forms
/// `j = 1, …, n−1`.
pub fn classify(ring: &Ring, o: &Orbit, limit: u64) -> Result<ClassificationRecord> {
    let n = o.rep.n();
    let lp = o.level.lp;
    let twists: Vec<Elem> = ring.elements(lp).collect();
    let shifted = |c: &Elem| ring.mat_add(&o.rep, &ring.mat_scalar(c, n));
    let regular = is_regular_orbit(ring, o);
    for c in &twists {
        if matrix_irred(ring, &shifted(c))? {
            return Ok(ClassificationRecord {
                twist: Some(*c),
                label: Label::IrredModP,
                verdict: Verdict::IsType,
                regular,
            });
        }
    }
    for j in 1..n as u32 {
        for c in &twists {
            if matrix_piform(ring, &shifted(c), j, lp, limit)? {
                let verdict = if o.level.r >= 4 {
                    Verdict::IsType
                } else {
                    Verdict::IndeterminateSmallConductor
                };
                return Ok(ClassificationRecord { twist: Some(*c), label: Label::PiForm(j), verdict, regular });
            }
        }
    }
    Ok(ClassificationRecord { twist: None, label: Label::NoCriterion, verdict: Verdict::NotType, regular })
}

/// One atlas line; field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtlasRow {
    pub ring: String,
    pub n: usize,
    pub r: u32,
    pub l: u32,
    pub lp: u32,
    pub class_id: usize,
    pub canonical_rep: String,
    pub charpoly: String,
    pub label: String,
    pub j: Option<u32>,
    pub twist_c: Option<u64>,
    pub verdict: String,
    pub regular: bool,
    pub class_size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atlas {
    pub rows: Vec<AtlasRow>,
    pub records: Vec<(Orbit, ClassificationRecord)>,
}

/// Matrix as nested arrays of entry codes.
pub fn format_mat(a: &Mat) -> String {
    let n = a.n();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let r: Vec<String> = a.row(i).iter().map(|e| e.code().to_string()).collect();
            format!("[{}]", r.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

impl Atlas {
    /// Counts per `(label, verdict, regular)`.
    pub fn summary(&self) -> BTreeMap<(Label, Verdict, bool), usize> {
        let mut out = BTreeMap::new();
        for (_, rec) in &self.records {
            *out.entry((rec.label, rec.verdict, rec.regular)).or_insert(0) += 1;
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Invalid(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Invalid(format!("csv: {e}")))
    }
}

/// Every class of `M_n(O/p^{l'})` for conductor `r`, classified.
pub fn atlas(ring: &Ring, n: usize, r: u32, jobs: usize, limit: u64) -> Result<Atlas> {
    let level = LevelData::new(r)?;
    let lp = level.lp;
    if ring.r_w() < lp {
        return Err(Error::PrecisionTooLow(format!("working precision {} below l' = {lp}", ring.r_w())));
    }
    let classes = enumerate_classes(ring, n, lp, jobs, limit)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let records: Vec<(Orbit, ClassificationRecord)> = pool.install(|| {
        classes
            .par_iter()
            .map(|&(code, size)| {
                let o = Orbit { level, rep: ring.mat_from_code(n, lp, code), size };
                classify(ring, &o, limit).map(|rec| (o, rec))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let label = ring.with_precision(lp)?.label();
    let rows = records
        .iter()
        .enumerate()
        .map(|(id, (o, rec))| {
            let f = charpoly(ring, &o.rep).expect("dimension checked by enumeration");
            let coeffs: Vec<String> = f.coeffs.iter().map(|c| c.code().to_string()).collect();
            let (label_s, j) = match rec.label {
                Label::PiForm(j) => ("PiForm".to_string(), Some(j)),
                other => (other.to_string(), None),
            };
            AtlasRow {
                ring: label.clone(),
                n,
                r,
                l: level.l,
                lp,
                class_id: id,
                canonical_rep: format_mat(&o.rep),
                charpoly: format!("[{}]", coeffs.join(",")),
                label: label_s,
                j,
                twist_c: rec.twist.map(|c| c.code()),
                verdict: rec.verdict.to_string(),
                regular: rec.regular,
                class_size: o.size,
            }
        })
        .collect();
    Ok(Atlas { rows, records })
}
