//! Chevalley–Eilenberg cohomology of su(2) and su(3): Betti numbers, harmonic
//! cochains, and the Green operator that inverts `d*` on 2-cochains.

use adiabatic_forms::lie_algebra::{self, LieCochain};

fn main() -> adiabatic_forms::error::Result<()> {
    for (name, alg) in [("su(2)", lie_algebra::make_su2()), ("su(3)", lie_algebra::make_su3())] {
        println!("{name}: dim {}", alg.dim);
        println!("  Betti numbers      {:?}", lie_algebra::betti_numbers(&alg));
        let dims: Vec<usize> = (0..=alg.dim).map(|j| lie_algebra::harmonic_subspace(&alg, j).map(|h| h.len())).collect::<Result<_, _>>()?;
        println!("  harmonic cochains  {dims:?}");

        // the harmonic 3-cochain is the Cartan form, invariant under every ad*
        let cartan = &lie_algebra::harmonic_subspace(&alg, 3)?[0];
        let drift = (0..alg.dim)
            .map(|a| lie_algebra::cochain_norm(&alg, &lie_algebra::apply(&lie_algebra::coadjoint(&alg, a, 3), cartan, 3)))
            .fold(0.0, f64::max);
        println!("  max |ad*_a ψ| on the Cartan form: {drift:.2e}");

        let psi = LieCochain::basis(&alg, &[0]);
        let beta = lie_algebra::green_inverse(&alg, &psi)?;
        let back = lie_algebra::apply(&lie_algebra::ce_adjoint(&alg, 2)?, &beta, 1);
        println!("  |d* G e⁰ − e⁰| = {:.2e}", (&back.coefficients - &psi.coefficients).amax());
    }

    // u(1) has H¹ ≠ 0, so there is no Green inverse
    let u1 = lie_algebra::make_u1();
    match lie_algebra::green_inverse(&u1, &LieCochain::basis(&u1, &[0])) {
        Err(e) => println!("u(1): {e}"),
        Ok(_) => println!("u(1): unexpectedly invertible"),
    }
    Ok(())
}
