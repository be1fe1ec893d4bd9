//! Husimi Q function and the radius-integrated angular Q distribution.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_grid, effective_grid, uniform_grid, PhaseDistribution};
use crate::error::{Error, Result};
use crate::fock::{number_moments, FockVector};
use crate::quadrature::GaussLegendre;
use crate::special::{ln_gamma_half, log_factorial};

/// Tail bound for the radial integral beyond the outer radius.
const RADIAL_TAIL_BOUND: f64 = 1e-12;

fn coherent_overlap(state: &FockVector, beta: Complex64) -> Complex64 {
    let mag = beta.norm();
    let c = state.amplitudes();
    if mag == 0.0 {
        return c[0];
    }
    let ln_mag = mag.ln();
    let phase = -beta.arg();
    c.iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() != 0.0)
        .map(|(k, a)| {
            let ln = k as f64 * ln_mag - 0.5 * log_factorial(k) - 0.5 * mag * mag;
            a * Complex64::from_polar(ln.exp(), phase * k as f64)
        })
        .sum()
}

/// `Q(β) = |⟨β|ψ⟩|²/π`, restricted to `|β|² + 8|β| ≤ dim`.
pub fn husimi_q(state: &FockVector, beta: Complex64) -> Result<f64> {
    let mag = beta.norm();
    if mag * mag + 8.0 * mag > state.dim() as f64 {
        return Err(Error::BetaOutOfRange {
            beta_mag: mag,
            dim: state.dim(),
        });
    }
    Ok(coherent_overlap(state, beta).norm_sqr() / PI)
}

/// Fourier coefficients of the angular Q distribution:
/// `Q(θ₁) = (1/2π) [B_0 + 2 Re Σ_{d≥1} B_d e^{idθ₁}]` with
/// `B_d = Σ_k c_k c*_{k+d} Γ((2k+d)/2 + 1) / √(k! (k+d)!)`.
#[derive(Clone, Debug)]
pub struct AngularQ {
    coeffs: Vec<Complex64>,
}

impl AngularQ {
    pub fn new(state: &FockVector) -> Self {
        let c = state.amplitudes();
        let dim = c.len();
        let coeffs = (0..dim)
            .map(|d| {
                (0..dim - d)
                    .map(|k| {
                        let l = k + d;
                        let g = (ln_gamma_half(k + l) - 0.5 * (log_factorial(k) + log_factorial(l))).exp();
                        c[k] * c[l].conj() * g
                    })
                    .sum()
            })
            .collect();
        Self { coeffs }
    }

    pub fn at(&self, theta1: f64) -> f64 {
        let rest: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, b)| (b * Complex64::from_polar(1.0, d as f64 * theta1)).re)
            .sum();
        (self.coeffs[0].re + 2.0 * rest) / (2.0 * PI)
    }
}

/// Angular Q distribution on `max(grid_size, 2·dim)` uniform points.
pub fn angular_q(state: &FockVector, grid_size: usize) -> Result<PhaseDistribution> {
    check_grid(grid_size)?;
    let q = AngularQ::new(state);
    let theta = uniform_grid(effective_grid(grid_size, state.dim()));
    let density = theta.iter().map(|&t| q.at(t)).collect();
    Ok(PhaseDistribution::new(theta, density))
}

/// `∫₀^R Q(r e^{iθ₁}) r dr` by adaptive Gauss–Legendre panels of order
/// `radial_points`, with `R = √⟨N⟩ + √dim + 6`.
pub fn angular_q_quadrature(state: &FockVector, theta1: f64, radial_points: usize) -> Result<f64> {
    if radial_points == 0 {
        return Err(Error::InvalidArgument("radial_points must be positive".into()));
    }
    let radius = number_moments(state).mean.sqrt() + (state.dim() as f64).sqrt() + 6.0;
    let integrand = |r: f64| r * coherent_overlap(state, Complex64::from_polar(r, theta1)).norm_sqr() / PI;

    // the integrand decays at least like a Gaussian past R
    let tail = integrand(radius);
    if tail > RADIAL_TAIL_BOUND {
        return Err(Error::QuadratureNotConverged {
            tail,
            bound: RADIAL_TAIL_BOUND,
        });
    }
    let rule = GaussLegendre::new(radial_points);
    let panels = radius.ceil() as usize;
    let width = radius / panels as f64;
    Ok((0..panels)
        .map(|i| {
            let a = i as f64 * width;
            rule.integrate_adaptive(&integrand, a, a + width, 1e-15, 12)
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{build, StateSpec};
    use approx::assert_abs_diff_eq;

    #[test]
    fn q_function_examples() {
        let vac = FockVector::number_state(0, 16).unwrap();
        assert_abs_diff_eq!(husimi_q(&vac, Complex64::new(0.0, 0.0)).unwrap(), 1.0 / PI, epsilon = 1e-15);
        let one = FockVector::number_state(1, 16).unwrap();
        assert_eq!(husimi_q(&one, Complex64::new(0.0, 0.0)).unwrap(), 0.0);
        let coh = build(&StateSpec::padfs(0, 0, 1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(husimi_q(&coh, Complex64::new(1.0, 0.0)).unwrap(), 1.0 / PI, epsilon = 1e-12);
        assert!(matches!(
            husimi_q(&vac, Complex64::new(3.0, 0.0)),
            Err(Error::BetaOutOfRange { .. })
        ));
    }

    #[test]
    fn number_states_are_isotropic() {
        for n in 0..4 {
            let s = FockVector::number_state(n, 10).unwrap();
            let q = angular_q(&s, 128).unwrap();
            for d in q.density() {
                assert_abs_diff_eq!(*d, 1.0 / (2.0 * PI), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn integrates_to_one() {
        let s = build(&StateSpec::psdfs(2, 2, 1.3, 0.6)).unwrap();
        let q = angular_q(&s, 1024).unwrap();
        assert_abs_diff_eq!(q.integral(), 1.0, epsilon = 1e-10);
        assert!(q.min_density() >= 0.0);
    }

    #[test]
    fn dfs_peaks_at_displacement_phase() {
        let s = build(&StateSpec::padfs(1, 1, 1.0, 0.0)).unwrap();
        let q = angular_q(&s, 1024).unwrap();
        assert_eq!(q.peak_theta(), 0.0);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let vac = FockVector::number_state(0, 24).unwrap();
        assert_abs_diff_eq!(angular_q_quadrature(&vac, 1.234, 16).unwrap(), 1.0 / (2.0 * PI), epsilon = 1e-6);

        let coh = build(&StateSpec::padfs(0, 0, 1.0, 0.0)).unwrap();
        let closed = AngularQ::new(&coh).at(0.0);
        assert_abs_diff_eq!(angular_q_quadrature(&coh, 0.0, 16).unwrap(), closed, epsilon = 1e-6);

        let ps = build(&StateSpec::psdfs(2, 1, 1.0, 0.0)).unwrap();
        let closed = AngularQ::new(&ps).at(PI / 4.0);
        assert_abs_diff_eq!(angular_q_quadrature(&ps, PI / 4.0, 16).unwrap(), closed, epsilon = 1e-6);
    }
}
