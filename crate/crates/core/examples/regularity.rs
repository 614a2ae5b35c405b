//! Regularity mod p: Π_ℑ·B is regular, Π_ℑ^j·B with 1 < j < p is not.

use cuspidal::matlin::{commutant_dim, cyclic_vector, is_regular_modp};
use cuspidal::orders::{iwahori_compose, Order};
use cuspidal::ring::Ring;

fn main() -> cuspidal::Result<()> {
    let ring = Ring::equal(2, 1, 1)?;
    for p in [3usize, 5] {
        let b = ring.mat_identity(p, 1);
        for j in 1..p as u32 {
            let a = iwahori_compose(&ring, j, &b);
            println!(
                "p={p} j={j}: commutant dim {}, regular {}, cyclic vector {}",
                commutant_dim(&ring, &a),
                is_regular_modp(&ring, &a),
                cyclic_vector(&ring, &a).is_ok()
            );
        }
    }
    let pi = Order::iwahori(3).pi_element(&ring);
    println!("Pi_I mod p in dimension 3 regular: {}", is_regular_modp(&ring, &pi));
    Ok(())
}
