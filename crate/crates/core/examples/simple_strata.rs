//! Simple strata: the two recognitions and type conductors.

use cuspidal::matlin::{companion, OPoly};
use cuspidal::orders::{iwahori_compose, Order};
use cuspidal::ring::Ring;
use cuspidal::strata::{field_certificate, is_simple, psi_beta, type_conductor, SimpleMethod, Stratum};

fn main() -> cuspidal::Result<()> {
    let ring = Ring::equal(2, 1, 5)?;
    let c = companion(&ring, &OPoly::from_ints(&ring, &[1, 1]));
    let m = Stratum::new(&ring, Order::maximal(2), 1, ring.frac_mat(1, c))?;

    let iw = Order::iwahori(2);
    let b = ring.mat_ints(2, &[1, 1, 0, 1]);
    let i3 = Stratum::new(&ring, iw, 3, ring.frac_mat(2, iwahori_compose(&ring, 1, &b)))?;

    for (name, st) in [("[M, 1, 0, c/t]", &m), ("[I, 3, 2, Pi B/t^2]", &i3)] {
        let crit = is_simple(&ring, st, SimpleMethod::Criterion)?;
        let def = is_simple(&ring, st, SimpleMethod::Definition)?;
        let cert = field_certificate(&ring, &st.beta)?;
        println!(
            "{name}: criterion {crit}, definition {def}, e = {}, f = {}, conductor {}",
            cert.e,
            cert.f_res,
            type_conductor(&ring, st)?
        );
    }

    // 1 + t·e_12 lies in U_M^1.
    let x = ring.mat_from_elems(2, &[ring.one(), ring.pi(), ring.zero(), ring.one()]);
    println!("psi_beta(1 + t e_12) for the M stratum: {}", psi_beta(&ring, &m, 1, &x)?);
    Ok(())
}
