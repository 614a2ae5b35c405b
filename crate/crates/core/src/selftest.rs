//! The acceptance suite: eleven criteria, each reported as one PASS/FAIL line.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grpfin::{
    char_trivial_on, conj_intersect, det_character_scalar_check, example4, g1, g2, gl2_small_conductor_check,
    stabilizer_bruteforce, stabilizer_formula, subgroup_elements, theta_build, theta_checks, verify_containment,
    Cell, SubgroupSpec,
};
use crate::matlin::{
    charpoly, commutant_dim, companion, cyclic_vector, eisenstein, is_regular_modp, reduce_to_companion, Mat,
    OPoly,
};
use crate::orbits::{atlas, class_members, classify, detect_piform, enumerate_classes, is_regular_orbit, orbit_of};
use crate::orbits::{Label, LevelData, Orbit};
use crate::oracle::{brute_conjugacy_partition, brute_coset_intersect};
use crate::orders::{iwahori_compose, Order};
use crate::ring::{Ring, RingKind};
use crate::strata::{is_simple, psi_beta, type_conductor, SimpleMethod, Stratum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Dimension-2 families only.
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy)]
pub struct SelftestConfig {
    pub level: Level,
    pub guard: u64,
    pub jobs: usize,
    pub seed: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { level: Level::Full, guard: crate::DEFAULT_GUARD, jobs: 4, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} [{:>2}] {}: {}", self.id, self.name, self.detail)
    }
}

pub const NAMES: [&str; 11] = [
    "atlas correctness",
    "simple-stratum equivalence",
    "companion reduction",
    "regularity split",
    "stabilizer formula",
    "counterexample reproduction",
    "containment and conductor",
    "GL2 conjugated intersections",
    "determinant characters",
    "twist conductor",
    "determinism",
];

/// Runs criterion `id` (1..=11).
pub fn run_one(id: u8, cfg: &SelftestConfig) -> Outcome {
    let res = match id {
        1 => c1_atlas(cfg),
        2 => c2_strata(cfg),
        3 => c3_companion(cfg),
        4 => c4_regularity(cfg),
        5 => c5_stabilizer(cfg),
        6 => c6_example(cfg),
        7 => c7_conductor(cfg),
        8 => c8_intersections(cfg),
        9 => c9_det_characters(cfg),
        10 => c10_twist(cfg),
        11 => c11_determinism(cfg),
        _ => Err(Error::Invalid(format!("no criterion {id}"))),
    };
    let name = NAMES.get(id.wrapping_sub(1) as usize).copied().unwrap_or("unknown");
    match res {
        Ok(Ok(detail)) => Outcome { id, name, pass: true, detail },
        Ok(Err(detail)) => Outcome { id, name, pass: false, detail },
        Err(e) => Outcome { id, name, pass: false, detail: format!("error: {e}") },
    }
}

pub fn run_all(cfg: &SelftestConfig) -> Vec<Outcome> {
    (1..=11).map(|id| run_one(id, cfg)).collect()
}

/// Inner `Ok` is a pass with its summary, inner `Err` a failure with a witness.
type Check = Result<std::result::Result<String, String>>;

fn verdict(ok: bool, pass: String, fail: impl FnOnce() -> String) -> std::result::Result<String, String> {
    if ok {
        Ok(pass)
    } else {
        Err(fail())
    }
}

fn c1_atlas(cfg: &SelftestConfig) -> Check {
    let ring = Ring::equal(2, 1, 2)?;
    let (n, lp) = (2, 1);
    let classes = enumerate_classes(&ring, n, lp, cfg.jobs, cfg.guard)?;
    let blocks = brute_conjugacy_partition(&ring, n, lp)?;
    if classes.len() != 6 {
        return Ok(Err(format!("{} classes, expected 6", classes.len())));
    }
    let from_blocks: Vec<(u64, u64)> = blocks.iter().map(|b| (b[0], b.len() as u64)).collect();
    if from_blocks != classes {
        return Ok(Err(format!("enumeration {classes:?} vs partition {from_blocks:?}")));
    }
    let level = LevelData::new(2 * lp)?;
    let (mut irred, mut piform) = (0, 0);
    for block in &blocks {
        let rep = ring.mat_from_code(n, lp, block[0]);
        let members: BTreeSet<u64> = class_members(&ring, &rep, lp, cfg.guard)?.into_iter().collect();
        if members != block.iter().copied().collect() {
            return Ok(Err(format!("class of {} differs from its partition block", block[0])));
        }
        let o = Orbit { level, rep, size: block.len() as u64 };
        irred += (classify(&ring, &o, cfg.guard)?.label == Label::IrredModP) as usize;
        let detected = detect_piform(&ring, &o, 1, cfg.guard)?;
        if detected != brute_coset_intersect(&ring, block, n, 1, lp)? {
            return Ok(Err(format!("Pi-form detector disagrees with coset search on class {}", block[0])));
        }
        piform += detected as usize;
    }
    Ok(verdict(
        irred == 1 && piform == 1,
        "6 classes match the brute partition; 1 IrredModP, 1 PiForm(1) agreeing with coset search".into(),
        || format!("IrredModP {irred}, PiForm(1) {piform}"),
    ))
}

fn c2_strata(cfg: &SelftestConfig) -> Check {
    let dims: &[usize] = if cfg.level == Level::Full { &[2, 3] } else { &[2] };
    let (mut compared, mut simple, mut skipped) = (0usize, 0usize, Vec::new());
    for &d in dims {
        for q in [2u64, 3] {
            let ring = Ring::equal(q, 1, 4)?;
            let Some(total) = ring.mat_space_size(d, 2).filter(|&t| t <= cfg.guard) else {
                skipped.push(format!("d={d} q={q}"));
                continue;
            };
            for order in [Order::maximal(d), Order::iwahori(d)] {
                for level in 1..=3i64 {
                    let s = ((level + order.e() - 1) / order.e()) as u32;
                    let found = (0..total)
                        .into_par_iter()
                        .map(|code| -> std::result::Result<(usize, usize), String> {
                            let m = ring.mat_lift(&ring.mat_from_code(d, 2, code), ring.r_w());
                            let Ok(st) = Stratum::new(&ring, order, level, ring.frac_mat(s, m)) else {
                                return Ok((0, 0));
                            };
                            let c = is_simple(&ring, &st, SimpleMethod::Criterion);
                            let f = is_simple(&ring, &st, SimpleMethod::Definition);
                            if c != f {
                                return Err(format!("{order:?} d={d} q={q} level {level} code {code}: {c:?} vs {f:?}"));
                            }
                            Ok((1, matches!(c, Ok(true)) as usize))
                        })
                        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)));
                    match found {
                        Ok((c, s)) => {
                            compared += c;
                            simple += s;
                        }
                        Err(w) => return Ok(Err(w)),
                    }
                }
            }
        }
    }
    let note = if skipped.is_empty() { String::new() } else { format!("; over guard: {}", skipped.join(", ")) };
    Ok(verdict(
        simple > 0,
        format!("{compared} strata, {simple} simple, 0 disagreements{note}"),
        || "no simple strata in the family".into(),
    ))
}

fn random_unit(ring: &Ring, rng: &mut ChaCha8Rng, n: usize, prec: u32) -> Mat {
    loop {
        let entries: Vec<_> = (0..n * n).map(|_| ring.elem(rng.gen_range(0..ring.qpow(prec)), prec)).collect();
        let m = ring.mat_from_elems(n, &entries);
        if ring.mat_is_unit(&m).unwrap_or(false) {
            return m;
        }
    }
}

fn c3_companion(cfg: &SelftestConfig) -> Check {
    let ring = Ring::equal(2, 1, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut polys = 0;
    // Eisenstein: val(a1) >= 1, val(a0) = 1.
    for a0 in ring.elements(3).filter(|x| ring.val(x).exact() == Some(1)) {
        for a1 in ring.elements(3).filter(|x| ring.residue(x) == 0) {
            let f = OPoly { coeffs: vec![a0, a1, ring.one()] };
            if !eisenstein(&ring, &f)? {
                return Ok(Err(format!("eisenstein rejects {:?}", f.coeffs)));
            }
            polys += 1;
            let c = companion(&ring, &f);
            for k in 0..50 {
                let h = random_unit(&ring, &mut rng, 2, 3);
                let m = ring.mat_conj(&h, &c)?;
                let g = reduce_to_companion(&ring, &m)?;
                if ring.mat_mul(&ring.mat_inv(&g)?, &ring.mat_mul(&m, &g)) != c {
                    return Ok(Err(format!("conjugate {k} of companion {:?} not reduced", f.coeffs)));
                }
            }
        }
    }
    Ok(verdict(polys == 8, format!("{polys} Eisenstein polynomials x 50 conjugates reduced exactly"), || {
        format!("{polys} Eisenstein polynomials, expected 8")
    }))
}

fn iwahori_units_mod_p(ring: &Ring, d: usize) -> Result<Vec<Mat>> {
    let order = Order::iwahori(d);
    let total = ring.mat_space_size(d, 1).ok_or(Error::DimensionTooLarge(d))?;
    let mut out = Vec::new();
    for code in 0..total {
        let b = ring.mat_from_code(d, 1, code);
        if order.in_u0(ring, &b)? {
            out.push(b);
        }
    }
    Ok(out)
}

fn c4_regularity(cfg: &SelftestConfig) -> Check {
    let ring = Ring::equal(2, 1, 1)?;
    let mut classes = 0;
    for b in iwahori_units_mod_p(&ring, 3)? {
        for j in 1..3 {
            let o = orbit_of(&ring, &iwahori_compose(&ring, j, &b), 2, cfg.guard)?;
            classes += 1;
            if is_regular_orbit(&ring, &o) != (j == 1) {
                return Ok(Err(format!("p=3 j={j} B={b:?}: regular = {}", j != 1)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples = if cfg.level == Level::Full { 200 } else { 40 };
    for _ in 0..samples {
        // upper triangular unit mod p
        let entries: Vec<_> = (0..25)
            .map(|k| {
                let (i, j) = (k / 5, k % 5);
                let v = if i == j { 1 } else if i < j { rng.gen_range(0..2) } else { 0 };
                ring.elem(v, 1)
            })
            .collect();
        let b = ring.mat_from_elems(5, &entries);
        for j in 1..5 {
            if is_regular_modp(&ring, &iwahori_compose(&ring, j, &b)) != (j == 1) {
                return Ok(Err(format!("p=5 j={j} B={b:?}")));
            }
        }
    }
    let mut matrices = 0;
    for (p, n) in [(2u64, 2usize), (3, 2), (2, 3)] {
        let r = Ring::equal(p, 1, 1)?;
        for code in 0..r.mat_space_size(n, 1).ok_or(Error::DimensionTooLarge(n))? {
            let a = r.mat_from_code(n, 1, code);
            matrices += 1;
            if (commutant_dim(&r, &a) == n) != cyclic_vector(&r, &a).is_ok() {
                return Ok(Err(format!("methods disagree on {a:?}")));
            }
        }
    }
    Ok(Ok(format!(
        "{classes} classes at p=3, {samples}x4 samples at p=5; methods agree on {matrices} matrices"
    )))
}

fn codes(ring: &Ring, v: &[Mat], r: u32) -> BTreeSet<u64> {
    v.iter().map(|m| ring.mat_code(m, r)).collect()
}

fn c5_stabilizer(cfg: &SelftestConfig) -> Check {
    let r = 2;
    let mut sizes = Vec::new();
    for ring in [Ring::mixed(2, 2)?, Ring::equal(2, 1, 2)?, Ring::equal(3, 1, 2)?] {
        let irr = if ring.q() == 2 { [1, 1] } else { [1, 0] };
        for beta in [ring.mat_ints(2, &[0, 1, 0, 0]), companion(&ring, &OPoly::from_ints(&ring, &irr))] {
            let formula = stabilizer_formula(&ring, &ring.mat_reduce(&beta, r), r, cfg.guard)?;
            let brute = stabilizer_bruteforce(&ring, &ring.mat_reduce(&beta, 1), r, cfg.guard)?;
            if codes(&ring, &formula, r) != codes(&ring, &brute, r) {
                return Ok(Err(format!("{}: formula {} vs brute {}", ring.label(), formula.len(), brute.len())));
            }
            sizes.push(format!("{}:{}", ring.label(), brute.len()));
            if ring.kind() == RingKind::Mixed {
                let want = if beta.get(1, 0).is_zero() { 32 } else { 48 };
                if brute.len() != want {
                    return Ok(Err(format!("order {} over Z/4, expected {want}", brute.len())));
                }
            }
        }
    }
    Ok(Ok(format!("formula = brute force; orders {}", sizes.join(" "))))
}

fn c6_example(cfg: &SelftestConfig) -> Check {
    let mut parts = Vec::new();
    for q in [2u64, 3] {
        let ring = Ring::equal(q, 1, 3)?;
        for which in [1, 2] {
            if let Some(bad) = theta_checks(&ring, which, cfg.guard)?.into_iter().find(|c| !c.pass) {
                return Ok(Err(bad.line()));
            }
        }
        let t1 = theta_build(&ring, 1)?;
        let t2 = theta_build(&ring, 2)?;
        let b1 = crate::grpfin::beta1(&ring);
        if !char_trivial_on(&ring, &t2, &SubgroupSpec::upper_pro_unipotent(), 2, cfg.guard)? {
            return Ok(Err(format!("q={q}: theta2 nontrivial on the upper pro-unipotent group")));
        }
        if gl2_small_conductor_check(&ring, &b1, &t2, 2, cfg.guard)? {
            return Ok(Err(format!("q={q}: theta2 passes the small-conductor test")));
        }
        if !gl2_small_conductor_check(&ring, &b1, &t1, 2, cfg.guard)? {
            return Ok(Err(format!("q={q}: theta1 fails the small-conductor test")));
        }
        let rep = example4(&ring, cfg.guard)?;
        if let Some(bad) = rep.checks.iter().find(|c| !c.pass) {
            return Ok(Err(bad.line()));
        }
        if (rep.rho1.as_str(), rep.rho2.as_str()) != ("IsType", "NotType") {
            return Ok(Err(format!("q={q}: rho1 {}, rho2 {}", rep.rho1, rep.rho2)));
        }
        parts.push(format!("q={q}: {} checks", rep.checks.len()));
    }
    Ok(Ok(format!("{}; rho1 IsType, rho2 NotType", parts.join(", "))))
}

/// `ψ_β` is nontrivial on `U_𝔐^{r−1}` and trivial on `U_𝔐^r`, `r` the conductor.
fn conductor_holds(ring: &Ring, st: &Stratum, guard: u64) -> Result<std::result::Result<(), String>> {
    let r = type_conductor(ring, st)?;
    let want = match st.order.e() {
        1 => st.level + 1,
        e => st.level / e + 2,
    };
    if r != want {
        return Ok(Err(format!("type_conductor {r}, formula {want}")));
    }
    let m0 = st.level / 2 + 1;
    let prec = st.beta.s + 2;
    let big = Order::maximal(st.dim());
    let value = |x: &Mat| psi_beta(ring, st, m0, x);
    let mut nontrivial = false;
    for x in big.unit_elements(ring, r - 1, prec, guard)? {
        if !value(&x)?.is_zero() {
            nontrivial = true;
            break;
        }
    }
    for x in big.unit_elements(ring, r, prec, guard)? {
        if !value(&x)?.is_zero() {
            return Ok(Err(format!("nontrivial at level {r}")));
        }
    }
    Ok(if nontrivial { Ok(()) } else { Err(format!("trivial at level {}", r - 1)) })
}

fn c7_conductor(cfg: &SelftestConfig) -> Check {
    for (p, m) in [(2u64, 0u32), (2, 1), (3, 0), (3, 1)] {
        if !verify_containment(&Ring::equal(p, 1, m + 3)?, m, cfg.guard)? {
            return Ok(Err(format!("containment fails at p={p} m={m}")));
        }
    }
    let dims: &[usize] = if cfg.level == Level::Full { &[2, 3] } else { &[2] };
    let ring = Ring::equal(2, 1, 6)?;
    let mut strata = 0;
    for &d in dims {
        let irr: &[i64] = if d == 2 { &[1, 1] } else { &[1, 1, 0] };
        let c = companion(&ring, &OPoly::from_ints(&ring, irr));
        for level in 1..=4i64 {
            let st = Stratum::new(&ring, Order::maximal(d), level, ring.frac_mat(level as u32, c.clone()))?;
            if let Err(w) = conductor_holds(&ring, &st, cfg.guard)? {
                return Ok(Err(format!("M d={d} n={level}: {w}")));
            }
            strata += 1;
            if level % d as i64 == 0 {
                continue;
            }
            let s = level / d as i64 + 1;
            let j = (d as i64 * s - level) as u32;
            for b in iwahori_units_mod_p(&ring.with_precision(1)?, d)? {
                let beta = iwahori_compose(&ring, j, &ring.mat_lift(&b, ring.r_w()));
                let st = Stratum::new(&ring, Order::iwahori(d), level, ring.frac_mat(s as u32, beta))?;
                let b = ring.mat_lift(&b, ring.r_w());
                if let Err(w) = conductor_holds(&ring, &st, cfg.guard)? {
                    return Ok(Err(format!("I d={d} n={level} B={b:?}: {w}")));
                }
                strata += 1;
            }
        }
    }
    Ok(Ok(format!("containment at p in {{2,3}}, m in {{0,1}}; conductor formulas on {strata} simple strata")))
}

/// `(1+p^{r−1}, p^upper; p^lower, 1+p^{r−1})`.
fn pattern(r: u32, upper: u32, lower: u32) -> SubgroupSpec {
    let one = Cell::Congruent { offset: 1, k: r - 1 };
    SubgroupSpec::from_cells(
        2,
        vec![one, Cell::Congruent { offset: 0, k: upper }, Cell::Congruent { offset: 0, k: lower }, one],
    )
}

fn c8_intersections(cfg: &SelftestConfig) -> Check {
    let ring = Ring::equal(2, 1, 4)?;
    let r = 3;
    let c = ring.one();
    let u = SubgroupSpec::congruence(2, r as i64 - 1);
    let s = SubgroupSpec::s_group();
    for n in 0..=1u32 {
        let first = pattern(r, r - 1 + n, (r - 1).saturating_sub(n).max(1));
        let second = pattern(r, (r - 1).saturating_sub(n), r - 1 + n);
        for (which, conj, want) in [(1, g1(&ring, n, &c)?, first), (2, g2(&ring, n, &c)?, second)] {
            let got = codes(&ring, &conj_intersect(&ring, &u, &conj, &s, r, cfg.guard)?, r);
            let want = codes(&ring, &subgroup_elements(&ring, &want, r, cfg.guard)?, r);
            if got != want {
                return Ok(Err(format!("g{which} n={n}: {} elements, pattern has {}", got.len(), want.len())));
            }
        }
    }
    Ok(Ok("g1 and g2 intersections equal the expected congruence patterns for n = 0, 1".into()))
}

fn c9_det_characters(cfg: &SelftestConfig) -> Check {
    let mut parts = Vec::new();
    for q in [2u64, 3] {
        let ring = Ring::equal(q, 1, 3)?;
        for order in [Order::maximal(2), Order::iwahori(2)] {
            let rep = det_character_scalar_check(&ring, order, 1, 2, cfg.guard)?;
            if !rep.pass {
                return Ok(Err(format!("q={q} {:?}: {rep:?}", order.tag)));
            }
            parts.push(format!("q={q} {:?}: {}/{}", order.tag, rep.matched, rep.characters));
        }
    }
    Ok(Ok(format!("characters matched by scalars: {}", parts.join(", "))))
}

fn c10_twist(cfg: &SelftestConfig) -> Check {
    let ring = Ring::equal(2, 1, 2)?;
    let lp = 2;
    let (mut classes, mut pairs) = (0, 0);
    for (code, _) in enumerate_classes(&ring, 2, lp, cfg.jobs, cfg.guard)? {
        let rep = ring.mat_from_code(2, lp, code);
        if !eisenstein(&ring, &charpoly(&ring, &rep)?)? {
            continue;
        }
        classes += 1;
        for c in ring.elements(lp) {
            let t = ring.mat_add(&rep, &ring.mat_scalar(&c, 2));
            pairs += 1;
            if t.entries().iter().all(|x| ring.residue(x) == 0) {
                return Ok(Err(format!("class {code} twisted by {} lies in pM2", c.code())));
            }
        }
    }
    Ok(verdict(classes > 0, format!("{classes} Eisenstein classes, {pairs} twists, none in pM2"), || {
        "no Eisenstein classes found".into()
    }))
}

fn c11_determinism(cfg: &SelftestConfig) -> Check {
    let ring = Ring::equal(2, 1, 2)?;
    let one = atlas(&ring, 2, 4, 1, cfg.guard)?.to_csv()?;
    let four = atlas(&ring, 2, 4, 4, cfg.guard)?.to_csv()?;
    let rows = one.lines().count().saturating_sub(1);
    Ok(verdict(one == four, format!("atlas(2,2,4): {rows} rows, identical at 1 and 4 workers"), || {
        "CSV differs between worker counts".into()
    }))
}
