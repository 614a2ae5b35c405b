//! Stabilizers of orbit characters in GL_2(O/p^r): brute force against the formula.

use cuspidal::grpfin::{gl_order, stabilizer_bruteforce, stabilizer_formula};
use cuspidal::matlin::{companion, OPoly};
use cuspidal::ring::Ring;

fn main() -> cuspidal::Result<()> {
    let g = cuspidal::DEFAULT_GUARD;
    let ring = Ring::mixed(2, 2)?;
    let nil = ring.mat_ints(2, &[0, 1, 0, 0]);
    let irr = companion(&ring, &OPoly::from_ints(&ring, &[1, 1]));
    println!("|GL_2(Z/4)| = {}", gl_order(2, 2, 2));
    for (name, beta) in [("rank-1 nilpotent", nil), ("companion of x^2+x+1", irr)] {
        let brute = stabilizer_bruteforce(&ring, &ring.mat_reduce(&beta, 1), 2, g)?;
        let formula = stabilizer_formula(&ring, &beta, 2, g)?;
        println!("{name}: brute force {}, formula {}", brute.len(), formula.len());
    }
    let id = ring.mat_identity(2, 2);
    println!("scalar: formula -> {:?}", stabilizer_formula(&ring, &id, 2, g).err());
    Ok(())
}
