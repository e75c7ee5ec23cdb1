//! Page dimensions `E_K` for a constant non-abelian connection on T³ and the
//! leading terms of the limiting harmonic forms.

use adiabatic_forms::adiabatic_ss::{compute_pages, harmonic_limit, zero_eigenvalue_count};
use adiabatic_forms::base_forms::{FourierForm, TorusGeometry};
use adiabatic_forms::bigraded::Connection;
use adiabatic_forms::lie_algebra::make_su2;

fn main() -> adiabatic_forms::error::Result<()> {
    let a = vec![
        FourierForm::constant(3, 1, &[(vec![0], 0.5)]),
        FourierForm::constant(3, 1, &[(vec![1], 0.4)]),
        FourierForm::constant(3, 1, &[(vec![2], 0.3)]),
    ];
    let conn = Connection::new(TorusGeometry::flat(3), make_su2(), a)?;
    let band = 1;
    for p in 0..=3 {
        let pages = compute_pages(&conn, p, 6, band)?;
        let inf = pages.infinity();
        let zeros = zero_eigenvalue_count(&conn, p, 0.5, band, 1e-8)?;
        println!("p = {p}: totals {:?}, E∞ slots {:?}, Galerkin kernel {zeros}", pages.totals(), inf.dims);
    }
    let limits = harmonic_limit(&conn, 3, band)?;
    for (i, w) in limits.iter().enumerate() {
        let slots: Vec<_> = w
            .components
            .keys()
            .map(|&(a, b)| ((a, b), conn.space.norm(&w.slot_part(a, b))))
            .filter(|x| x.1 > 1e-12)
            .map(|(s, v)| format!("{s:?}: {v:.4}"))
            .collect();
        println!("limit form {i}: {}", slots.join(", "));
    }
    Ok(())
}
