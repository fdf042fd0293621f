//! Generalized rotating-wave approximation (GRWA) ground-state closed
//! forms, kept as the comparison baseline. Note the mean photon number
//! is independent of the atomic frequency here, which is exactly the
//! deficiency the variational route repairs.

use crate::model::ModelParams;

/// GRWA ground-state energy ω/2 − g²/ω − (Ω/2)·exp[−2(g/ω)²].
///
/// The adiabatic-approximation ground line coincides with this
/// expression, so no separate implementation is kept.
pub fn grwa_energy(params: &ModelParams) -> f64 {
    let (omega, omega_a, g) = (params.omega, params.omega_a, params.g);
    let r = g / omega;
    0.5 * omega - g * g / omega - 0.5 * omega_a * (-2.0 * r * r).exp()
}

/// GRWA mean photon number g²/ω², independent of Ω.
pub fn grwa_mean_photon(params: &ModelParams) -> f64 {
    let r = params.g / params.omega;
    r * r
}

/// Both GRWA observables at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrwaResult {
    pub energy: f64,
    pub mean_photon: f64,
}

pub fn evaluate(params: &ModelParams) -> GrwaResult {
    GrwaResult {
        energy: grwa_energy(params),
        mean_photon: grwa_mean_photon(params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gvm;
    use approx::assert_relative_eq;

    fn params(omega_a: f64, g: f64) -> ModelParams {
        ModelParams::new(1.0, omega_a, g).unwrap()
    }

    #[test]
    fn energy_values() {
        assert_relative_eq!(grwa_energy(&params(0.0, 0.5)), 0.25, epsilon = 1e-14);
        let expected = 0.5 - 0.04 - 0.5 * (-0.08f64).exp();
        assert_relative_eq!(grwa_energy(&params(1.0, 0.2)), expected, epsilon = 1e-14);
        assert!((expected - (-0.0015582)).abs() < 1e-7);
        // g = 0 recovers the exact uncoupled ground energy (ω−Ω)/2.
        assert_relative_eq!(grwa_energy(&params(1.5, 0.0)), -0.25, epsilon = 1e-14);
    }

    #[test]
    fn mean_photon_values() {
        assert_eq!(grwa_mean_photon(&params(0.7, 0.6)), 0.36);
        assert_eq!(grwa_mean_photon(&params(1.0, 0.0)), 0.0);
        assert_eq!(
            grwa_mean_photon(&ModelParams::new(2.0, 0.0, 0.6).unwrap()),
            0.09
        );
    }

    #[test]
    fn photon_number_is_bitwise_independent_of_atom_frequency() {
        let a = grwa_mean_photon(&params(0.3, 0.77));
        let b = grwa_mean_photon(&params(2.9, 0.77));
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn agrees_with_closed_gvm_energy_at_zero_atom() {
        for &g in &[0.1, 0.4, 0.9] {
            let p = params(0.0, g);
            assert_eq!(grwa_energy(&p), gvm::energy_closed_form(&p));
        }
    }
}
