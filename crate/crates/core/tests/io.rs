use cuspidal::io::{elem_from_json, elem_to_json, mat_to_json, parse_matrix, stratum_to_json, ElemJson, RingJson, StratumJson};
use cuspidal::matlin::{companion, OPoly};
use cuspidal::orders::Order;
use cuspidal::ring::Ring;
use cuspidal::strata::Stratum;
use cuspidal::Error;

#[test]
fn ring_json_roundtrip() {
    for ring in [Ring::equal(2, 2, 3).unwrap(), Ring::mixed(5, 2).unwrap()] {
        let text = serde_json::to_string(&RingJson::of(&ring)).unwrap();
        let back: RingJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), ring);
    }
    let rj: RingJson = serde_json::from_str(r#"{"kind":"equal","p":3,"r":2}"#).unwrap();
    assert_eq!(rj.build().unwrap().label(), "F3[t]/t^2");
    let bad: RingJson = serde_json::from_str(r#"{"kind":"mixed","p":2,"f":2,"r":2}"#).unwrap();
    assert_eq!(bad.build(), Err(Error::MixedNeedsPrimeField));
}

#[test]
fn element_formats() {
    let eq = Ring::equal(3, 1, 3).unwrap();
    let x = eq.from_digits(&[2, 0, 1], 3);
    assert_eq!(elem_to_json(&eq, &x), ElemJson::Coeffs(vec![2, 0, 1]));
    assert_eq!(elem_from_json(&eq, &ElemJson::Coeffs(vec![2, 0, 1])).unwrap(), x);
    assert_eq!(elem_from_json(&eq, &ElemJson::Int(-1)).unwrap(), eq.int(2));
    assert!(elem_from_json(&eq, &ElemJson::Coeffs(vec![3])).is_err());
    assert!(matches!(elem_from_json(&eq, &ElemJson::Coeffs(vec![0, 0, 0, 1])), Err(Error::PrecisionTooLow(_))));
    let mx = Ring::mixed(2, 3).unwrap();
    assert_eq!(elem_to_json(&mx, &mx.int(-1)), ElemJson::Int(7));
    assert!(elem_from_json(&mx, &ElemJson::Coeffs(vec![1])).is_err());
}

#[test]
fn matrix_roundtrip() {
    let ring = Ring::equal(2, 1, 3).unwrap();
    let m = companion(&ring, &OPoly::from_ints(&ring, &[1, 1]));
    let text = serde_json::to_string(&mat_to_json(&ring, &m)).unwrap();
    let parsed = parse_matrix(&text).unwrap();
    let back_ring = parsed.ring.as_ref().unwrap().build().unwrap();
    assert_eq!(parsed.to_mat(&back_ring).unwrap(), m);
    assert!(parse_matrix(r#"{"n":2,"entries":[[1,2]]}"#).unwrap().to_mat(&ring).is_err());
    assert!(parse_matrix("[").is_err());
}

#[test]
fn stratum_roundtrip() {
    let ring = Ring::equal(2, 1, 3).unwrap();
    let pi = Order::iwahori(2).pi_element(&ring);
    let st = Stratum::new(&ring, Order::iwahori(2), 1, ring.frac_mat(1, pi)).unwrap();
    let text = serde_json::to_string(&stratum_to_json(&ring, &st)).unwrap();
    assert!(text.starts_with(r#"{"order":"I","n":1,"beta":{"s":1,"mat""#));
    let back: StratumJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_stratum(&ring).unwrap(), st);
}
