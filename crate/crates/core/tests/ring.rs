use cuspidal::ring::{fpoly, AdditiveValue, Elem, FracElem, Fq, Ring, RingKind, Val};
use cuspidal::Error;
use proptest::prelude::*;

// Independent arithmetic on digit vectors. Residue field elements are pairs
// (a0, a1) for F_4 = F_2[y]/(y^2+y+1), plain integers mod p otherwise.
fn fq_mul_oracle(p: u64, f: u32, a: u64, b: u64) -> u64 {
    if f == 1 {
        return a * b % p;
    }
    assert_eq!((p, f), (2, 2));
    let (a0, a1) = (a & 1, a >> 1);
    let (b0, b1) = (b & 1, b >> 1);
    // (a0 + a1 y)(b0 + b1 y) with y^2 = y + 1
    let c0 = (a0 * b0 + a1 * b1) % 2;
    let c1 = (a0 * b1 + a1 * b0 + a1 * b1) % 2;
    c0 | (c1 << 1)
}

fn fq_add_oracle(p: u64, f: u32, a: u64, b: u64) -> u64 {
    if f == 1 {
        (a + b) % p
    } else {
        a ^ b
    }
}

fn digits(code: u64, q: u64, n: u32) -> Vec<u64> {
    (0..n).map(|i| code / q.pow(i) % q).collect()
}

fn undigits(d: &[u64], q: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &x| acc * q + x)
}

fn equal_mul_oracle(p: u64, f: u32, r: u32, a: u64, b: u64) -> u64 {
    let q = p.pow(f);
    let (da, db) = (digits(a, q, r), digits(b, q, r));
    let mut out = vec![0u64; r as usize];
    for i in 0..r as usize {
        for j in 0..r as usize - i {
            out[i + j] = fq_add_oracle(p, f, out[i + j], fq_mul_oracle(p, f, da[i], db[j]));
        }
    }
    undigits(&out, q)
}

fn equal_add_oracle(p: u64, f: u32, r: u32, a: u64, b: u64) -> u64 {
    let q = p.pow(f);
    let (da, db) = (digits(a, q, r), digits(b, q, r));
    let out: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| fq_add_oracle(p, f, x, y)).collect();
    undigits(&out, q)
}

fn rings() -> Vec<Ring> {
    vec![
        Ring::equal(2, 1, 3).unwrap(),
        Ring::equal(3, 1, 2).unwrap(),
        Ring::equal(2, 2, 2).unwrap(),
        Ring::equal(5, 1, 2).unwrap(),
        Ring::mixed(2, 3).unwrap(),
        Ring::mixed(3, 2).unwrap(),
        Ring::mixed(2, 6).unwrap(),
    ]
}

#[test]
fn construction_and_errors() {
    let r = Ring::new(RingKind::Equal, 2, 1, 3).unwrap();
    assert_eq!(r.q(), 2);
    assert_eq!(r.label(), "F2[t]/t^3");
    let z9 = Ring::new(RingKind::Mixed, 3, 1, 2).unwrap();
    assert_eq!(z9.qpow(2), 9);
    assert_eq!(Ring::new(RingKind::Mixed, 2, 2, 2).unwrap_err(), Error::MixedNeedsPrimeField);
    assert_eq!(Ring::new(RingKind::Equal, 4, 1, 2).unwrap_err(), Error::NotPrime(4));
    assert!(matches!(
        Ring::with_modulus(RingKind::Equal, 2, 2, 2, Some(vec![1, 0, 1])),
        Err(Error::BadModulus(_))
    ));
}

#[test]
fn default_modulus_is_least_irreducible() {
    assert_eq!(Fq::extension(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
    assert_eq!(Fq::extension(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
    assert_eq!(Fq::extension(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
}

#[test]
fn equal_arithmetic_matches_digit_oracle() {
    for (p, f, r) in [(2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 2), (2, 1, 6)] {
        let ring = Ring::equal(p, f, r).unwrap();
        let n = ring.qpow(r);
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (ring.elem(a, r), ring.elem(b, r));
                assert_eq!(ring.mul(&x, &y).code(), equal_mul_oracle(p, f, r, a, b), "{p} {f} {a}*{b}");
                assert_eq!(ring.add(&x, &y).code(), equal_add_oracle(p, f, r, a, b));
            }
        }
    }
}

#[test]
fn mixed_arithmetic_matches_integers() {
    for (p, r) in [(2, 3), (3, 2), (2, 6), (5, 2)] {
        let ring = Ring::mixed(p, r).unwrap();
        let m = ring.qpow(r);
        for a in 0..m {
            for b in 0..m {
                let (x, y) = (ring.elem(a, r), ring.elem(b, r));
                assert_eq!(ring.mul(&x, &y).code(), a * b % m);
                assert_eq!(ring.add(&x, &y).code(), (a + b) % m);
                assert_eq!(ring.sub(&x, &y).code(), (a + m - b) % m);
            }
        }
    }
}

#[test]
fn ring_axioms_exhaustive_small() {
    for ring in rings() {
        let r = ring.r_w();
        if ring.qpow(r) > 64 {
            continue;
        }
        let all: Vec<Elem> = ring.elements(r).collect();
        for a in &all {
            assert_eq!(ring.add(a, &ring.neg(a)), ring.zero());
            for b in &all {
                assert_eq!(ring.mul(a, b), ring.mul(b, a));
                for c in &all {
                    let lhs = ring.mul(a, &ring.add(b, c));
                    let rhs = ring.add(&ring.mul(a, b), &ring.mul(a, c));
                    assert_eq!(lhs, rhs);
                    assert_eq!(ring.mul(&ring.mul(a, b), c), ring.mul(a, &ring.mul(b, c)));
                }
            }
        }
    }
}

#[test]
fn inverses_exhaustive() {
    for ring in rings() {
        let r = ring.r_w();
        for x in ring.elements(r) {
            match ring.inv(&x) {
                Ok(y) => assert_eq!(ring.mul(&x, &y), ring.one()),
                Err(e) => {
                    assert_eq!(e, Error::NonUnit);
                    assert_eq!(x.code() % ring.q(), 0);
                }
            }
        }
    }
}

#[test]
fn inverse_examples() {
    let z8 = Ring::mixed(2, 3).unwrap();
    assert_eq!(z8.inv(&z8.int(3)).unwrap(), z8.int(3));
    assert_eq!(z8.inv(&z8.int(2)), Err(Error::NonUnit));
    let f2 = Ring::equal(2, 1, 2).unwrap();
    let one_plus_t = f2.from_digits(&[1, 1], 2);
    assert_eq!(f2.inv(&one_plus_t).unwrap(), one_plus_t);
    assert_eq!(f2.inv(&f2.elem(1, 0)), Err(Error::NonUnit));
}

#[test]
fn valuation_examples() {
    let f2 = Ring::equal(2, 1, 3).unwrap();
    assert_eq!(f2.val(&f2.from_digits(&[0, 1, 1], 3)), Val::Exact(1));
    assert_eq!(f2.val(&f2.zero()), Val::AtLeast(3));
    let x = f2.frac(1, f2.one());
    assert_eq!(f2.frac_val(&x), Val::Exact(-1));
    // normalization strips common factors of ϖ
    let y = f2.frac(2, f2.pi());
    assert_eq!(y.s, 1);
    assert_eq!(y.u.code(), 1);
    assert_eq!(y.u.prec(), 2);
}

#[test]
fn precision_is_min_and_shifts_account_digits() {
    let ring = Ring::equal(3, 1, 4).unwrap();
    let a = ring.elem(5, 2);
    let b = ring.elem(7, 4);
    assert_eq!(ring.mul(&a, &b).prec(), 2);
    assert_eq!(ring.add(&a, &b).prec(), 2);
    let s = ring.shift_up(&a, 1);
    assert_eq!((s.code(), s.prec()), (15, 3));
    assert_eq!(ring.shift_down(&s, 1).unwrap(), a);
    assert!(matches!(ring.shift_down(&ring.elem(0, 1), 2), Err(Error::InsufficientPrecision(_))));
}

#[test]
fn psi_examples() {
    let f2 = Ring::equal(2, 1, 3).unwrap();
    assert_eq!(f2.psi(&f2.frac(0, f2.one())).unwrap(), AdditiveValue::new(2, 1, 1));
    for u in f2.elements(3) {
        let tu = f2.mul(&f2.pi(), &u);
        assert!(f2.psi(&f2.frac(0, tu)).unwrap().is_zero());
    }
    let z9 = Ring::mixed(3, 3).unwrap();
    assert_eq!(z9.psi(&z9.frac(0, z9.one())).unwrap(), AdditiveValue::new(3, 1, 1));
    assert_eq!(z9.psi(&z9.frac(1, z9.one())).unwrap(), AdditiveValue::new(3, 1, 2));
    assert_eq!(z9.psi(&z9.frac(1, z9.one())).unwrap().to_string(), "1/9");
    assert!(matches!(z9.psi(&FracElem { s: 2, u: z9.elem(1, 2) }), Err(Error::InsufficientPrecision(_))));
}

#[test]
fn psi_is_additive_with_conductor_p() {
    for ring in [Ring::equal(2, 1, 4).unwrap(), Ring::equal(2, 2, 3).unwrap(), Ring::mixed(3, 3).unwrap()] {
        let r = ring.r_w();
        for s in 0..=2u32 {
            let vals: Vec<FracElem> = ring.elements(r).map(|u| FracElem { s, u }).collect();
            for x in &vals {
                for y in &vals {
                    let lhs = ring.psi(&ring.frac_add(x, y)).unwrap();
                    let rhs = ring.psi(x).unwrap().add(&ring.psi(y).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
        let mut nontrivial = false;
        for u in ring.elements(r) {
            let v = ring.psi(&FracElem { s: 0, u }).unwrap();
            if ring.val(&u).at_least(1) == Some(true) {
                assert!(v.is_zero());
            } else if !v.is_zero() {
                nontrivial = true;
            }
        }
        assert!(nontrivial);
    }
}

#[test]
fn additive_values_reduce() {
    let v = AdditiveValue::new(2, 2, 2);
    assert_eq!((v.num(), v.k()), (1, 1));
    assert_eq!(v.add(&v), AdditiveValue::zero(2));
    assert_eq!(AdditiveValue::new(3, 1, 2).neg().to_string(), "8/9");
}

#[test]
fn residue_field_polynomials() {
    let f2 = Fq::prime(2).unwrap();
    assert!(fpoly::is_irreducible(&f2, &[1, 1, 1]));
    assert!(!fpoly::is_irreducible(&f2, &[0, 0, 1]));
    assert!(fpoly::is_irreducible(&f2, &[1, 1, 0, 1]));
    assert!(!fpoly::is_irreducible(&f2, &[1, 0, 1]));
}

fn arb_ring_elem() -> impl Strategy<Value = (u64, u64, u32)> {
    (0u64..729, 0u64..729, 1u32..=6)
}

proptest! {
    #[test]
    fn valuation_is_additive((a, b, prec) in arb_ring_elem()) {
        let ring = Ring::equal(3, 1, 6).unwrap();
        let (x, y) = (ring.elem(a, prec), ring.elem(b, prec));
        if let (Val::Exact(u), Val::Exact(v)) = (ring.val(&x), ring.val(&y)) {
            if u + v < prec as i64 {
                prop_assert_eq!(ring.val(&ring.mul(&x, &y)), Val::Exact(u + v));
            }
        }
    }

    #[test]
    fn mixed_inverse_roundtrip(a in 1u64..(1 << 20)) {
        let ring = Ring::mixed(2, 20).unwrap();
        let x = ring.elem(a | 1, 20);
        prop_assert_eq!(ring.mul(&x, &ring.inv(&x).unwrap()), ring.one());
    }
}
