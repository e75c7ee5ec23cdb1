//! Small eigenvalues of the adiabatic Laplacian decay like δ^{2K}; the number
//! decaying at each rate matches the drop `dim E_K − dim E_{K+1}`.

use std::path::PathBuf;

use adiabatic_forms::adiabatic_ss::{compute_pages, spectrum_sweep};
use adiabatic_forms::harness::Scenario;

fn main() -> adiabatic_forms::error::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/t4_su2_cs3.toml");
    let s = Scenario::load(&path)?;
    let conn = s.connection()?;
    let p = s.spectrum_degree;
    let mut rep = spectrum_sweep(&conn, p, &s.spectrum_deltas, s.band)?;
    let pages = compute_pages(&conn, p, s.k_max, s.band)?;
    rep.compare_with_pages(&pages);
    println!("p = {p}, δ = {:?}, page totals {:?}", rep.deltas, pages.totals());
    println!("{:>4}  {:>6}  {:>8}  {:>10}", "2K", "count", "expected", "max error");
    for g in &rep.groups {
        let k = g.k.map_or("∞".to_string(), |k| (2 * k).to_string());
        println!("{k:>4}  {:>6}  {:>8}  {:>10.3}", g.count, g.expected.unwrap_or(0), g.max_slope_error);
    }
    Ok(())
}
