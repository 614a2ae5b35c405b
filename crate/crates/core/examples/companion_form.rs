//! Eisenstein characteristic polynomials and reduction to companion form.

use cuspidal::matlin::{charpoly, companion, eisenstein, reduce_to_companion};
use cuspidal::orders::Order;
use cuspidal::ring::Ring;

fn main() -> cuspidal::Result<()> {
    let ring = Ring::equal(2, 1, 3)?;
    let pi = Order::iwahori(2).pi_element(&ring);
    let h = ring.mat_ints(2, &[1, 1, 1, 0]);
    let m = ring.mat_conj(&h, &pi)?;
    let f = charpoly(&ring, &m)?;
    let coeffs: Vec<Vec<u64>> = f.coeffs.iter().map(|c| ring.digits(c)).collect();
    println!("charpoly coefficients (t-digits, constant first): {coeffs:?}");
    println!("Eisenstein: {}", eisenstein(&ring, &f)?);

    let g = reduce_to_companion(&ring, &m)?;
    let back = ring.mat_mul(&ring.mat_inv(&g)?, &ring.mat_mul(&m, &g));
    println!("g^-1 M g is the companion matrix: {}", back == companion(&ring, &f));
    Ok(())
}
