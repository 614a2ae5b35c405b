//! Two characters θ₁, θ₂ of S sharing an orbit: Ind θ₁ is a cuspidal type, Ind θ₂ is not.

use cuspidal::grpfin::example4;
use cuspidal::ring::Ring;

fn main() -> cuspidal::Result<()> {
    for q in [2, 3] {
        let ring = Ring::equal(q, 1, 3)?;
        let rep = example4(&ring, cuspidal::DEFAULT_GUARD)?;
        for c in &rep.checks {
            println!("{}", c.line());
        }
        println!("q={q}: rho1 {}, rho2 {}\n", rep.rho1, rep.rho2);
    }
    Ok(())
}
