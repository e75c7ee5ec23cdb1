//! Hodge decomposition of a trigonometric 2-form on a skewed 3-torus, and the
//! coexact primitive of an exact form.

use adiabatic_forms::base_forms::{FourierForm, TorusGeometry};
use nalgebra::DMatrix;

fn main() -> adiabatic_forms::error::Result<()> {
    let metric = DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.2, 1.4, 0.1, 0.0, 0.1, 0.9]);
    let geo = TorusGeometry::new(metric, 1)?;

    let w = FourierForm::constant(3, 2, &[(vec![0, 1], 0.5)])
        + FourierForm::cos_term(3, &[1, 0, 0], &[1, 2], 0.8)
        + FourierForm::sin_term(3, &[0, 1, 1], &[0, 1], -0.3);
    let parts = geo.hodge_decompose(&w);
    println!("|ω| = {:.6}", geo.norm(&w));
    println!("  exact    {:.6}", geo.norm(&parts.exact));
    println!("  coexact  {:.6}", geo.norm(&parts.coexact));
    println!("  harmonic {:.6}", geo.norm(&parts.harmonic));
    let rebuilt = &(&parts.exact + &parts.coexact) + &parts.harmonic;
    println!("  reassembly error {:.2e}", (&rebuilt - &w).max_abs());
    println!("  ⟨exact, coexact⟩ = {:.2e}", geo.inner(&parts.exact, &parts.coexact)?);

    let exact = parts.exact.clone();
    let h = geo.coexact_primitive(&exact)?;
    println!("coexact primitive: |dh − ω_exact| = {:.2e}, |d*h| = {:.2e}", (&h.d() - &exact).max_abs(), geo.codifferential(&h)?.max_abs());

    if let Err(e) = geo.coexact_primitive(&w) {
        println!("full ω has no primitive: {e}");
    }
    Ok(())
}
