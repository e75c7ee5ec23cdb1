//! Invariant differential forms on a trivial principal `G`-bundle over a flat torus,
//! in the adiabatic limit where the base metric is scaled by `1/δ²`.
//!
//! Forms are stored in bigraded coordinates: a `(i, j)` component is an `i`-form on
//! the base (a truncated Fourier series) tensored with a `j`-cochain on the Lie
//! algebra. The modules build on each other:
//!
//! - [`lie_algebra`]: structure constants, Chevalley–Eilenberg complex, harmonic cochains, Green operator.
//! - [`base_forms`]: Fourier forms on `Tⁿ` with a constant metric, `d`, `*`, `d*` and the Hodge decomposition.
//! - [`bigraded`]: connections and the three pieces `d^{0,1}`, `d^{1,0}`, `d^{2,-1}` of `d`, with adjoints.
//! - [`chern_weil`]: curvature, Chern–Weil forms and the Chern–Simons series with its correction term.
//! - [`adiabatic_ss`]: formal δ-series harmonicity, spectral-sequence pages and eigenvalue decay.
//! - [`harness`]: TOML scenarios, the command runners behind the `adiabatic` binary, and reports.

pub mod adiabatic_ss;
pub mod base_forms;
pub mod bigraded;
pub mod chern_weil;
pub mod error;
pub mod harness;
pub mod lie_algebra;
pub mod linalg;
pub mod multi_index;
pub mod sampling;
