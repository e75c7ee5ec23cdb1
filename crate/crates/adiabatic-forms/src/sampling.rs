//! Seeded random real forms and connections, for property checks and scenario probes.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base_forms::{FourierForm, TorusGeometry};
use crate::bigraded::{BigradedForm, Connection};
use crate::error::Result;
use crate::lie_algebra::LieAlgebraData;
use crate::multi_index::binomial;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A real trigonometric polynomial form with coefficients uniform in the unit disc scaled by `amp`.
pub fn random_form<R: Rng>(rng: &mut R, n: usize, degree: usize, band: usize, amp: f64) -> FourierForm {
    let mut f = FourierForm::zero(n, degree, band);
    for c in f.coeffs_mut() {
        *c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp;
    }
    f.realified()
}

/// Random real bigraded form with every slot of total degree `p` populated.
pub fn random_bigraded<R: Rng>(rng: &mut R, n: usize, m: usize, p: usize, band: usize) -> BigradedForm {
    let mut out = BigradedForm::zero(n, m);
    for i in 0..=n.min(p) {
        let j = p - i;
        if j > m {
            continue;
        }
        let forms: Vec<FourierForm> = (0..binomial(m, j)).map(|_| random_form(rng, n, i, band, 1.0)).collect();
        out.set_component(i, j, &forms).expect("shapes agree");
    }
    out
}

/// Random real connection of the given band.
pub fn random_connection<R: Rng>(rng: &mut R, geometry: TorusGeometry, alg: LieAlgebraData, band: usize, amp: f64) -> Result<Connection> {
    let n = geometry.n;
    let a = (0..alg.dim).map(|_| random_form(rng, n, 1, band, amp)).collect();
    Connection::new(geometry, alg, a)
}
