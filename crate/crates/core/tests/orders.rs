use cuspidal::matlin::{charpoly, eisenstein, FracMat, Mat};
use cuspidal::orders::{iwahori_compose, iwahori_decompose, Order, OrderTag};
use cuspidal::ring::{Ring, Val};
use cuspidal::Error;

// Entry-wise equality on the digits both sides know.
fn agree(ring: &Ring, a: &Mat, b: &Mat) -> bool {
    a.entries().iter().zip(b.entries()).all(|(x, y)| {
        let k = x.prec().min(y.prec());
        ring.reduce(x, k) == ring.reduce(y, k)
    })
}

fn int_mat(ring: &Ring, n: usize, vals: &[i64]) -> Mat {
    ring.mat_ints(n, vals)
}

#[test]
fn prime_elements() {
    let ring = Ring::equal(2, 1, 4).unwrap();
    let pi_i = Order::iwahori(2).pi_element(&ring);
    assert_eq!(pi_i, ring.mat_from_elems(2, &[ring.zero(), ring.one(), ring.pi(), ring.zero()]));
    let pi_m = Order::maximal(3).pi_element(&ring);
    assert_eq!(pi_m, ring.mat_scalar(&ring.pi(), 3));
    for n in 2..=4 {
        let p = Order::iwahori(n).pi_element(&ring);
        assert_eq!(ring.mat_pow(&p, n as u32), ring.mat_scalar(&ring.pi(), n));
    }
}

#[test]
fn unit_filtration_examples() {
    let ring = Ring::equal(2, 1, 3).unwrap();
    let i2 = Order::iwahori(2);
    let lower = ring.mat_from_elems(2, &[ring.one(), ring.zero(), ring.pi(), ring.one()]);
    assert!(i2.in_u(&ring, 1, &lower).unwrap());
    let upper = int_mat(&ring, 2, &[1, 1, 0, 1]);
    assert!(i2.in_u(&ring, 1, &upper).unwrap());
    assert!(!i2.in_u(&ring, 2, &upper).unwrap());
    let m2 = Order::maximal(2);
    let id = ring.mat_identity(2, 3);
    for m in 1..=3 {
        assert!(m2.in_u(&ring, m, &id).unwrap());
    }
    assert!(matches!(m2.in_u(&ring, 4, &id), Err(Error::InsufficientPrecision(_))));
    assert!(!m2.in_u(&ring, 1, &upper).unwrap());
    assert!(i2.in_u0(&ring, &upper).unwrap());
    assert!(!i2.in_u0(&ring, &int_mat(&ring, 2, &[1, 0, 1, 1])).unwrap());
}

// P_ℑ^m = Π^m·ℑ. The entry (i, j) of Π^m·(ϖ^{[k>l]} E_kl) is nonzero only
// for l = j, so the least valuation is min_k val((Π^m)_{ik}) + [k > j].
fn pattern_oracle(ring: &Ring, n: usize, m: u32) -> Vec<i64> {
    let pm = ring.mat_pow(&Order::iwahori(n).pi_element(ring), m);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let best = (0..n)
                .filter_map(|k| ring.val(&pm.get(i, k)).exact().map(|v| v + (k > j) as i64))
                .min()
                .expect("Π^m has a nonzero entry in each row");
            out.push(best);
        }
    }
    out
}

#[test]
fn iwahori_pattern_matches_pi_powers() {
    let ring = Ring::equal(2, 1, 12).unwrap();
    for n in 2..=4usize {
        for m in 0..=(2 * n) as u32 {
            let pat = Order::iwahori(n).pattern(m as i64);
            assert_eq!(pat.req, pattern_oracle(&ring, n, m), "n={n} m={m}");
        }
    }
}

#[test]
fn radical_power_e_is_pi_times_order() {
    for order in [Order::maximal(3), Order::iwahori(2), Order::iwahori(3), Order::iwahori(5)] {
        let base = order.pattern(0);
        let shifted = order.pattern(order.e());
        assert_eq!(shifted.req, base.req.iter().map(|v| v + 1).collect::<Vec<_>>());
        // Negative powers are consistent as well.
        let neg = order.pattern(-order.e());
        assert_eq!(neg.req, base.req.iter().map(|v| v - 1).collect::<Vec<_>>());
    }
    assert_eq!(Order::maximal(2).e(), 1);
    assert_eq!(Order::iwahori(3).e(), 3);
    assert_eq!(Order::iwahori(3).tag, OrderTag::I);
}

#[test]
fn nu_examples() {
    let ring = Ring::equal(2, 1, 3).unwrap();
    let pi = Order::iwahori(2).pi_element(&ring);
    assert_eq!(Order::iwahori(2).nu(&ring, &FracMat::integral(pi.clone())), Val::Exact(1));
    let unit = int_mat(&ring, 2, &[1, 1, 0, 1]);
    let x = ring.frac_mat(1, unit);
    assert_eq!(Order::maximal(2).nu(&ring, &x), Val::Exact(-1));
    assert_eq!(Order::iwahori(2).nu(&ring, &x), Val::Exact(-2));
    assert_eq!(
        Order::iwahori(2).nu(&ring, &FracMat::integral(ring.mat_zero(2, 3))),
        Val::AtLeast(5)
    );
}

#[test]
fn decompose_examples() {
    let ring = Ring::equal(2, 1, 4).unwrap();
    let pi = Order::iwahori(2).pi_element(&ring);
    let (j, b) = iwahori_decompose(&ring, &FracMat::integral(pi.clone())).unwrap();
    assert_eq!(j, 1);
    assert!(agree(&ring, &b, &ring.mat_identity(2, 4)));
    assert_eq!(b.prec(), 3);

    let b0 = int_mat(&ring, 2, &[1, 1, 0, 1]);
    let x = ring.mat_mul(&ring.mat_pow(&pi, 2), &b0);
    let (j, b) = iwahori_decompose(&ring, &FracMat::integral(x.clone())).unwrap();
    assert_eq!(j, 2);
    assert!(agree(&ring, &b0, &b));
    assert!(agree(&ring, &iwahori_compose(&ring, 2, &b), &x));

    let d = ring.mat_from_elems(2, &[ring.one(), ring.zero(), ring.zero(), ring.pi()]);
    assert_eq!(iwahori_decompose(&ring, &FracMat::integral(d)), Err(Error::NotInNormalizer));

    // Fractional input: ϖ^{-1}·Π_ℑ = Π_ℑ^{-1}.
    let (j, b) = iwahori_decompose(&ring, &ring.frac_mat(1, pi)).unwrap();
    assert_eq!(j, -1);
    assert!(Order::iwahori(2).in_u0(&ring, &b).unwrap());
}

#[test]
fn decompose_round_trip_exhaustive() {
    let ring = Ring::equal(2, 1, 3).unwrap();
    let order = Order::iwahori(2);
    let total = ring.mat_space_size(2, 3).unwrap();
    let mut decomposed = 0;
    for code in 0..total {
        let x = ring.mat_from_code(2, 3, code);
        match iwahori_decompose(&ring, &FracMat::integral(x.clone())) {
            Ok((j, b)) => {
                decomposed += 1;
                assert!(order.in_u0(&ring, &b).unwrap());
                assert_eq!(Val::Exact(j), order.nu(&ring, &FracMat::integral(x.clone())));
                let back = iwahori_compose(&ring, j as u32, &b);
                assert!(agree(&ring, &back, &x), "code {code}");
            }
            Err(Error::NotInNormalizer) | Err(Error::InsufficientPrecision(_)) => {}
            Err(e) => panic!("unexpected {e:?}"),
        }
    }
    // Independent generation: every Π^j·B with B ∈ U_ℑ decomposes with exponent j.
    let mut generated = 0;
    for code in 0..total {
        let b = ring.mat_from_code(2, 3, code);
        if !order.in_u0(&ring, &b).unwrap() {
            continue;
        }
        for j in 0..=4u32 {
            let x = ring.mat_mul(&ring.mat_pow(&order.pi_element(&ring), j), &b);
            let (jj, bb) = iwahori_decompose(&ring, &FracMat::integral(x)).unwrap();
            assert_eq!(jj, j as i64);
            assert!(agree(&ring, &bb, &b));
            generated += 1;
        }
    }
    assert!(decomposed > 0 && generated > 0);
}

#[test]
fn nu_is_additive_on_normalizer() {
    let ring = Ring::equal(2, 1, 4).unwrap();
    let order = Order::iwahori(2);
    let pi = order.pi_element(&ring);
    let units: Vec<Mat> = (0..ring.mat_space_size(2, 1).unwrap())
        .map(|c| ring.mat_lift(&ring.mat_from_code(2, 1, c), 4))
        .filter(|b| order.in_u0(&ring, b).unwrap())
        .collect();
    let mut elems = Vec::new();
    for b in &units {
        for j in 0..=2 {
            elems.push((j as i64, ring.mat_mul(&ring.mat_pow(&pi, j), b)));
        }
    }
    for (jx, x) in &elems {
        for (jy, y) in &elems {
            let nx = order.nu(&ring, &FracMat::integral(x.clone()));
            let ny = order.nu(&ring, &FracMat::integral(y.clone()));
            assert_eq!((nx, ny), (Val::Exact(*jx), Val::Exact(*jy)));
            let nxy = order.nu(&ring, &FracMat::integral(ring.mat_mul(x, y)));
            assert_eq!(nxy, Val::Exact(jx + jy));
        }
    }
}

#[test]
fn pi_times_iwahori_unit_is_eisenstein() {
    let ring = Ring::equal(2, 1, 2).unwrap();
    let order = Order::iwahori(2);
    let pi = ring.mat_reduce(&order.pi_element(&ring), 2);
    let mut count = 0;
    for code in 0..ring.mat_space_size(2, 2).unwrap() {
        let b = ring.mat_from_code(2, 2, code);
        if !order.in_u0(&ring, &b).unwrap() {
            continue;
        }
        count += 1;
        let f = charpoly(&ring, &ring.mat_mul(&pi, &b)).unwrap();
        assert!(eisenstein(&ring, &f).unwrap());
    }
    // |U_ℑ mod p^2| = |B(F_2)| · 2^4 = 2 · 16
    assert_eq!(count, 32);
}
