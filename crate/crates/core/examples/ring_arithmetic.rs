//! Truncated local rings: arithmetic and the additive character.

use cuspidal::ring::Ring;

fn main() -> cuspidal::Result<()> {
    let z8 = Ring::mixed(2, 3)?;
    let three = z8.int(3);
    println!("{}: 3^-1 = {}", z8.label(), z8.inv(&three)?.code());
    println!("{}: val(4) = {:?}", z8.label(), z8.val(&z8.int(4)));

    let r = Ring::equal(2, 2, 3)?;
    let x = r.from_digits(&[1, 2, 3], 3);
    let y = r.mul(&x, &r.inv(&x)?);
    println!("{}: x = {:?}, x * x^-1 = {:?}", r.label(), r.digits(&x), r.digits(&y));
    println!("{}: units mod t^2 = {}", r.label(), r.units(2).count());

    // ψ has conductor p: zero on t·O, the trace of the residue on O.
    for a in 0..r.q() {
        print!("psi({a}) = {}  ", r.psi(&r.frac(0, r.elem(a, 2)))?);
    }
    println!("psi(t) = {}", r.psi(&r.frac(0, r.pi()))?);
    Ok(())
}
