use cuspidal::matlin::{companion, det, OPoly};
use cuspidal::orbits::{detect_piform, enumerate_classes, LevelData, Orbit};
use cuspidal::oracle::{brute_conjugacy_partition, brute_coset_intersect, brute_minimality, leibniz_det};
use cuspidal::orders::Order;
use cuspidal::ring::Ring;
use cuspidal::strata::{is_simple, SimpleMethod, Stratum};
use cuspidal::{Error, DEFAULT_GUARD};

#[test]
fn partition_examples() {
    let ring = Ring::equal(2, 1, 2).unwrap();
    let p = brute_conjugacy_partition(&ring, 2, 1).unwrap();
    assert_eq!(p.len(), 6);
    let mut sizes: Vec<usize> = p.iter().map(|b| b.len()).collect();
    sizes.sort();
    // two scalars, the split class, the irreducible class, two unipotent-type classes
    assert_eq!(sizes, vec![1, 1, 2, 3, 3, 6]);
    let p = brute_conjugacy_partition(&ring, 1, 2).unwrap();
    assert_eq!(p, vec![vec![0], vec![1], vec![2], vec![3]]);
    let r3 = Ring::equal(3, 1, 1).unwrap();
    assert_eq!(brute_conjugacy_partition(&r3, 2, 1).unwrap().len(), enumerate_classes(&r3, 2, 1, 1, DEFAULT_GUARD).unwrap().len());
    assert!(matches!(brute_conjugacy_partition(&Ring::equal(2, 1, 3).unwrap(), 3, 3), Err(Error::SizeGuard { .. })));
}

#[test]
fn coset_examples() {
    let ring = Ring::equal(2, 1, 1).unwrap();
    let p = brute_conjugacy_partition(&ring, 2, 1).unwrap();
    let class_of = |code: u64| p.iter().find(|b| b.contains(&code)).unwrap().clone();
    let nil = ring.mat_code(&ring.mat_ints(2, &[0, 1, 0, 0]), 1);
    assert!(brute_coset_intersect(&ring, &class_of(nil), 2, 1, 1).unwrap());
    assert!(!brute_coset_intersect(&ring, &class_of(0), 2, 1, 1).unwrap());
    let split = ring.mat_code(&ring.mat_ints(2, &[0, 0, 0, 1]), 1);
    assert!(!brute_coset_intersect(&ring, &class_of(split), 2, 1, 1).unwrap());
}

#[test]
fn coset_oracle_agrees_with_detector() {
    for (ring, n, lp) in [
        (Ring::equal(2, 1, 2).unwrap(), 2, 2),
        (Ring::equal(2, 1, 1).unwrap(), 3, 1),
        (Ring::equal(3, 1, 1).unwrap(), 2, 1),
    ] {
        let level = LevelData::new(2 * lp).unwrap();
        for block in brute_conjugacy_partition(&ring, n, lp).unwrap() {
            let o = Orbit { level, rep: ring.mat_from_code(n, lp, block[0]), size: block.len() as u64 };
            for j in 1..n as u32 {
                assert_eq!(
                    brute_coset_intersect(&ring, &block, n, j, lp).unwrap(),
                    detect_piform(&ring, &o, j, DEFAULT_GUARD).unwrap()
                );
            }
        }
    }
}

#[test]
fn leibniz_matches_berkowitz() {
    let ring = Ring::equal(2, 1, 2).unwrap();
    for code in (0..ring.mat_space_size(3, 1).unwrap()).step_by(3) {
        let a = ring.mat_lift(&ring.mat_from_code(3, 1, code), 2);
        assert_eq!(leibniz_det(&ring, &a), det(&ring, &a).unwrap());
    }
}

#[test]
fn minimality_examples() {
    let ring = Ring::equal(2, 1, 4).unwrap();
    let pi = Order::iwahori(2).pi_element(&ring);
    assert_eq!(brute_minimality(&ring, &ring.frac_mat(1, pi.clone())), Ok(true));
    // ϖ^{-1}Π² is the identity, which carries no field certificate.
    assert_eq!(
        brute_minimality(&ring, &ring.frac_mat(1, ring.mat_pow(&pi, 2))),
        Err(Error::InconclusiveFieldData)
    );
    let c = companion(&ring, &OPoly::from_ints(&ring, &[1, 1]));
    assert_eq!(brute_minimality(&ring, &ring.frac_mat(1, c)), Ok(true));
    // Π³ in dimension 2 is ϖΠ: e = 2 and ν_E = 3.
    assert_eq!(brute_minimality(&ring, &ring.frac_mat(0, ring.mat_pow(&pi, 3))), Ok(true));
    // ϖ^{-2}·companion: the gcd holds with e = 1, residue still generates.
    let c = companion(&ring, &OPoly::from_ints(&ring, &[1, 1]));
    assert_eq!(brute_minimality(&ring, &ring.frac_mat(2, c)), Ok(true));
}

#[test]
fn minimality_agrees_with_definition_path() {
    let ring = Ring::equal(2, 1, 4).unwrap();
    let mut compared = 0;
    for (order, level) in [(Order::maximal(2), 1), (Order::iwahori(2), 1), (Order::iwahori(2), 3)] {
        let s = (level / order.e() + 1) as u32;
        for code in 0..ring.mat_space_size(2, 2).unwrap() {
            let m = ring.mat_lift(&ring.mat_from_code(2, 2, code), 2);
            let Ok(st) = Stratum::new(&ring, order, level, ring.frac_mat(s, m)) else { continue };
            let Ok(def) = is_simple(&ring, &st, SimpleMethod::Definition) else { continue };
            if !def {
                continue;
            }
            assert_eq!(brute_minimality(&ring, &st.beta), Ok(true), "code {code}");
            compared += 1;
        }
    }
    assert!(compared > 10);
}
