//! For a U(1) bundle with vanishing first Chern class, `φ(Θ) − δh` is harmonic
//! for the adiabatic metric at every δ; with nonzero class there is no `h`.

use adiabatic_forms::base_forms::{FourierForm, TorusGeometry};
use adiabatic_forms::bigraded::Connection;
use adiabatic_forms::chern_weil::{self, InvariantPolynomial};
use adiabatic_forms::harness::checks;
use adiabatic_forms::lie_algebra::make_u1;

fn main() -> adiabatic_forms::error::Result<()> {
    let geo = TorusGeometry::flat(2);
    let a = FourierForm::sin_term(2, &[1, 0], &[1], 0.7) + FourierForm::cos_term(2, &[0, 1], &[0], 0.3);
    let conn = Connection::new(geo.clone(), make_u1(), vec![a])?;
    let phi = InvariantPolynomial::first_chern_u1(conn.alg())?;

    let run = checks::cs1_run(&conn, &phi, &[1.0, 0.5, 0.1, 0.01])?;
    println!("residual orders of d_δ:  {:?}", run.d_orders);
    println!("residual orders of d*_δ: {:?}", run.dstar_orders);
    println!("{:>6}  {:>10}  {:>10}", "δ", "|dω|", "|d*ω|");
    for (delta, d, ds) in &run.unscaled {
        println!("{delta:>6}  {d:>10.2e}  {ds:>10.2e}");
    }

    // constant curvature: c₁ ≠ 0
    let f = FourierForm::constant(2, 2, &[(vec![0, 1], 1.3)]);
    let twisted = chern_weil::abelian_scenario(geo, make_u1(), vec![f])?;
    match checks::cs1_run(&twisted, &phi, &[0.5]) {
        Err(e) => println!("degree-one bundle: {e}"),
        Ok(_) => println!("degree-one bundle: unexpectedly exact"),
    }
    Ok(())
}
