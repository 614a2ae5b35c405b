//! Conjugacy classes of M_2(O/p^{l'}) classified as cuspidal-type orbits.

use cuspidal::orbits::atlas;
use cuspidal::ring::Ring;

fn main() -> cuspidal::Result<()> {
    for r in [2u32, 4] {
        let lp = r - r.div_ceil(2);
        let ring = Ring::equal(2, 1, lp)?;
        let a = atlas(&ring, 2, r, 2, cuspidal::DEFAULT_GUARD)?;
        println!("conductor {r}: {} classes", a.rows.len());
        for ((label, verdict, regular), count) in a.summary() {
            println!("  {count:>3}  {label:<12} {verdict:<28} regular={regular}");
        }
    }
    let ring = Ring::equal(2, 1, 1)?;
    print!("{}", atlas(&ring, 2, 2, 1, cuspidal::DEFAULT_GUARD)?.to_csv()?);
    Ok(())
}
