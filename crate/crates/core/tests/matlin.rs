use cuspidal::matlin::{
    charpoly, commutant_dim, companion, cyclic_vector, det, eisenstein, is_regular_modp, krylov,
    kpoly_irreducible, minpoly_degree_modp, reduce_to_companion, trace, KPoly, Mat, OPoly,
};
use cuspidal::ring::{Elem, Fq, Ring};
use cuspidal::Error;
use proptest::prelude::*;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Leibniz expansion of det(x·I − A) with polynomial entries (constant first).
fn charpoly_leibniz(ring: &Ring, a: &Mat) -> Vec<Elem> {
    let n = a.n();
    let prec = a.prec();
    let zero = ring.elem(0, prec);
    let entry = |i: usize, j: usize| -> Vec<Elem> {
        let c = ring.neg(&a.get(i, j));
        if i == j {
            vec![c, ring.elem(1, prec)]
        } else {
            vec![c]
        }
    };
    let pmul = |x: &[Elem], y: &[Elem]| -> Vec<Elem> {
        let mut out = vec![zero; x.len() + y.len() - 1];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                out[i + j] = ring.add(&out[i + j], &ring.mul(xi, yj));
            }
        }
        out
    };
    let mut total = vec![zero; n + 1];
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut sign_neg = false;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    sign_neg = !sign_neg;
                }
            }
        }
        let mut term = vec![ring.elem(1, prec)];
        for (i, &pi) in perm.iter().enumerate() {
            term = pmul(&term, &entry(i, pi));
        }
        for (k, c) in term.iter().enumerate() {
            let c = if sign_neg { ring.neg(c) } else { *c };
            total[k] = ring.add(&total[k], &c);
        }
        // next permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    total
}

// Exhaustive factor search: f is reducible iff some monic g of degree
// 1..=deg/2 divides it.
fn irreducible_by_search(fq: &Fq, f: &[u64]) -> bool {
    use cuspidal::ring::fpoly;
    let d = f.len() - 1;
    let q = fq.q();
    for dg in 1..=d / 2 {
        for code in 0..q.pow(dg as u32) {
            let mut g: Vec<u64> = (0..dg).map(|i| code / q.pow(i as u32) % q).collect();
            g.push(1);
            if fpoly::rem(fq, f, &g).is_empty() {
                return false;
            }
        }
    }
    d >= 1
}

fn random_mat(ring: &Ring, rng: &mut ChaCha8Rng, n: usize, prec: u32) -> Mat {
    let e = (0..n * n).map(|_| ring.elem(rng.gen_range(0..ring.qpow(prec)), prec)).collect();
    Mat::from_entries(n, e)
}

fn random_unit_mat(ring: &Ring, rng: &mut ChaCha8Rng, n: usize, prec: u32) -> Mat {
    loop {
        let g = random_mat(ring, rng, n, prec);
        if ring.mat_is_unit(&g).unwrap() {
            return g;
        }
    }
}

#[test]
fn charpoly_examples() {
    let ring = Ring::equal(2, 1, 3).unwrap();
    let pi_i = ring.mat_from_elems(2, &[ring.zero(), ring.one(), ring.pi(), ring.zero()]);
    let cp = charpoly(&ring, &pi_i).unwrap();
    assert_eq!(cp.coeffs, vec![ring.neg(&ring.pi()), ring.zero(), ring.one()]);
    let id = ring.mat_identity(2, 3);
    assert_eq!(charpoly(&ring, &id).unwrap().reduce_mod_p(&ring), KPoly { coeffs: vec![1, 0, 1] });
    let big = ring.mat_identity(7, 3);
    assert_eq!(charpoly(&ring, &big).unwrap_err(), Error::DimensionTooLarge(7));
}

#[test]
fn charpoly_matches_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for ring in [Ring::equal(2, 1, 3).unwrap(), Ring::equal(3, 1, 2).unwrap(), Ring::mixed(5, 2).unwrap(), Ring::equal(2, 2, 2).unwrap()] {
        for n in 1..=5 {
            for _ in 0..20 {
                let a = random_mat(&ring, &mut rng, n, ring.r_w());
                assert_eq!(charpoly(&ring, &a).unwrap().coeffs, charpoly_leibniz(&ring, &a));
            }
        }
    }
}

#[test]
fn charpoly_conjugation_invariant_exhaustive() {
    let ring = Ring::equal(2, 1, 2).unwrap();
    let all: Vec<Mat> = (0..256).map(|c| ring.mat_from_code(2, 2, c)).collect();
    let units: Vec<&Mat> = all.iter().filter(|g| ring.mat_is_unit(g).unwrap()).collect();
    assert_eq!(units.len(), 96);
    for a in &all {
        let cp = charpoly(&ring, a).unwrap();
        for g in &units {
            assert_eq!(charpoly(&ring, &ring.mat_conj(g, a).unwrap()).unwrap(), cp);
        }
    }
}

#[test]
fn inverse_exhaustive_and_det_multiplicative() {
    let ring = Ring::mixed(3, 2).unwrap();
    let all: Vec<Mat> = (0..81u64.pow(2)).map(|c| ring.mat_from_code(2, 2, c)).collect();
    let id = ring.mat_identity(2, 2);
    for a in &all {
        let unit = ring.is_unit(&det(&ring, a).unwrap()).unwrap();
        match ring.mat_inv(a) {
            Ok(b) => {
                assert!(unit);
                assert_eq!(ring.mat_mul(a, &b), id);
                assert_eq!(ring.mat_mul(&b, a), id);
            }
            Err(e) => {
                assert_eq!(e, Error::NonUnit);
                assert!(!unit);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ring = Ring::equal(3, 1, 3).unwrap();
    for n in 1..=4 {
        for _ in 0..50 {
            let a = random_mat(&ring, &mut rng, n, 3);
            let b = random_mat(&ring, &mut rng, n, 3);
            let lhs = det(&ring, &ring.mat_mul(&a, &b)).unwrap();
            let rhs = ring.mul(&det(&ring, &a).unwrap(), &det(&ring, &b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn trace_is_sum_of_diagonal() {
    let ring = Ring::mixed(7, 1).unwrap();
    let a = ring.mat_ints(2, &[3, 1, 2, 6]);
    assert_eq!(trace(&ring, &a), ring.int(2));
}

#[test]
fn irreducibility_examples_and_oracle() {
    let f2 = Fq::prime(2).unwrap();
    assert!(kpoly_irreducible(&f2, &KPoly { coeffs: vec![1, 1, 1] }));
    assert!(!kpoly_irreducible(&f2, &KPoly { coeffs: vec![0, 0, 1] }));
    assert!(kpoly_irreducible(&f2, &KPoly { coeffs: vec![1, 1, 0, 1] }));
    for (fq, maxdeg) in [(Fq::prime(2).unwrap(), 6), (Fq::prime(3).unwrap(), 4), (Fq::extension(2, 2, None).unwrap(), 3)] {
        let q = fq.q();
        for d in 1..=maxdeg {
            let mut count = 0;
            for code in 0..q.pow(d) {
                let mut f: Vec<u64> = (0..d).map(|i| code / q.pow(i) % q).collect();
                f.push(1);
                let fast = kpoly_irreducible(&fq, &KPoly { coeffs: f.clone() });
                assert_eq!(fast, irreducible_by_search(&fq, &f), "{f:?} over F_{q}");
                count += fast as u64;
            }
            // Gauss's count of monic irreducibles for the degrees checked
            let expect = match (q, d) {
                (_, 1) => q,
                (2, 2) => 1,
                (2, 3) => 2,
                (2, 4) => 3,
                (2, 5) => 6,
                (2, 6) => 9,
                (3, 2) => 3,
                (3, 3) => 8,
                (3, 4) => 18,
                (4, 2) => 6,
                (4, 3) => 20,
                _ => unreachable!(),
            };
            assert_eq!(count, expect, "q={q} d={d}");
        }
    }
}

#[test]
fn eisenstein_examples() {
    let ring = Ring::equal(2, 1, 2).unwrap();
    let t = ring.pi();
    let f = OPoly { coeffs: vec![ring.neg(&t), ring.zero(), ring.one()] };
    assert!(eisenstein(&ring, &f).unwrap());
    let ring3 = Ring::equal(2, 1, 3).unwrap();
    let t2 = ring3.mul(&ring3.pi(), &ring3.pi());
    let g = OPoly { coeffs: vec![ring3.neg(&t2), ring3.zero(), ring3.one()] };
    assert!(!eisenstein(&ring3, &g).unwrap());
    let low = OPoly { coeffs: vec![ring.elem(0, 1), ring.zero(), ring.one()] };
    assert!(matches!(eisenstein(&ring, &low), Err(Error::PrecisionTooLow(_))));
}

#[test]
fn commutant_examples() {
    let f2 = Ring::equal(2, 1, 1).unwrap();
    let zero = f2.mat_zero(2, 1);
    assert_eq!(commutant_dim(&f2, &zero), 4);
    assert!(!is_regular_modp(&f2, &zero));
    let nil = f2.mat_ints(2, &[0, 1, 0, 0]);
    assert_eq!(commutant_dim(&f2, &nil), 2);
    assert!(is_regular_modp(&f2, &nil));
}

#[test]
fn regularity_methods_agree_exhaustively() {
    for (p, n) in [(2u64, 2usize), (3, 2), (2, 3)] {
        let ring = Ring::equal(p, 1, 1).unwrap();
        let total = ring.mat_space_size(n, 1).unwrap();
        for code in 0..total {
            let a = ring.mat_from_code(n, 1, code);
            let dim = commutant_dim(&ring, &a);
            assert!(dim >= n);
            let regular = dim == n;
            assert_eq!(regular, cyclic_vector(&ring, &a).is_ok(), "{a:?}");
            assert_eq!(regular, minpoly_degree_modp(&ring, &a) == n);
        }
    }
}

#[test]
fn cyclic_vector_examples() {
    let ring = Ring::equal(2, 1, 3).unwrap();
    let f = OPoly { coeffs: vec![ring.neg(&ring.pi()), ring.zero(), ring.one()] };
    let c = companion(&ring, &f);
    assert_eq!(cyclic_vector(&ring, &c).unwrap(), vec![ring.one(), ring.zero()]);
    assert!(matches!(cyclic_vector(&ring, &ring.mat_zero(2, 3)), Err(Error::NotFound(_))));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..30 {
        let h = random_unit_mat(&ring, &mut rng, 2, 3);
        let m = ring.mat_conj(&h, &c).unwrap();
        let v = cyclic_vector(&ring, &m).unwrap();
        assert!(ring.mat_is_unit(&krylov(&ring, &m, &v)).unwrap());
    }
}

#[test]
fn companion_reduction_examples() {
    let ring = Ring::equal(2, 1, 3).unwrap();
    let f = OPoly { coeffs: vec![ring.neg(&ring.pi()), ring.zero(), ring.one()] };
    let c = companion(&ring, &f);
    assert_eq!(reduce_to_companion(&ring, &c).unwrap(), ring.mat_identity(2, 3));
    let h = ring.mat_ints(2, &[1, 1, 0, 1]);
    let m = ring.mat_conj(&h, &c).unwrap();
    let g = reduce_to_companion(&ring, &m).unwrap();
    assert_eq!(ring.mat_mul(&ring.mat_inv(&g).unwrap(), &ring.mat_mul(&m, &g)), c);
    let pi_i = ring.mat_from_elems(2, &[ring.zero(), ring.one(), ring.pi(), ring.zero()]);
    let g = reduce_to_companion(&ring, &pi_i).unwrap();
    let target = companion(&ring, &charpoly(&ring, &pi_i).unwrap());
    assert_eq!(ring.mat_mul(&ring.mat_inv(&g).unwrap(), &ring.mat_mul(&pi_i, &g)), target);
    assert!(reduce_to_companion(&ring, &ring.mat_identity(2, 3)).is_err());
}

#[test]
fn companion_matrix_has_its_polynomial() {
    let ring = Ring::mixed(3, 3).unwrap();
    for lower in [[1i64, 2, 0], [3, 0, 9], [6, 3, 3]] {
        let f = OPoly::from_ints(&ring, &lower);
        assert_eq!(charpoly(&ring, &companion(&ring, &f)).unwrap(), f);
    }
}

proptest! {
    #[test]
    fn charpoly_similarity_invariant(seed in 0u64..10_000, n in 1usize..=4) {
        let ring = Ring::equal(3, 1, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_mat(&ring, &mut rng, n, 3);
        let g = random_unit_mat(&ring, &mut rng, n, 3);
        prop_assert_eq!(charpoly(&ring, &ring.mat_conj(&g, &a).unwrap()).unwrap(), charpoly(&ring, &a).unwrap());
    }

    #[test]
    fn mat_code_roundtrip(code in 0u64..(1 << 16)) {
        let ring = Ring::equal(2, 1, 4).unwrap();
        let m = ring.mat_from_code(2, 4, code);
        prop_assert_eq!(ring.mat_code(&m, 4), code);
    }
}
