//! The maximal and Iwahori orders: valuation patterns and the Iwahori decomposition.

use cuspidal::matlin::FracMat;
use cuspidal::orders::{iwahori_compose, iwahori_decompose, Order};
use cuspidal::ring::Ring;

fn main() -> cuspidal::Result<()> {
    let ring = Ring::equal(3, 1, 4)?;
    let iw = Order::iwahori(3);
    for m in [-1, 0, 1, 2] {
        println!("P_I^{m} entry valuations: {:?}", iw.pattern(m).req);
    }
    let pi = iw.pi_element(&ring);
    println!("nu_I(Pi) = {:?}, nu_I(Pi^3) = {:?}", iw.nu(&ring, &FracMat::integral(pi.clone())), {
        iw.nu(&ring, &FracMat::integral(ring.mat_pow(&pi, 3)))
    });

    let b = ring.mat_ints(3, &[1, 2, 0, 3, 1, 1, 3, 6, 2]);
    let x = iwahori_compose(&ring, 2, &b);
    let (j, b2) = iwahori_decompose(&ring, &FracMat::integral(x))?;
    println!("Pi^2 B decomposes with j = {j}, B recovered: {}", ring.mat_reduce(&b2, 2) == ring.mat_reduce(&b, 2));

    let units = iw.unit_elements(&ring, 1, 1, cuspidal::DEFAULT_GUARD)?;
    println!("|U_I^1 mod p| = {}", units.len());
    Ok(())
}
