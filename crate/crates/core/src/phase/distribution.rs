use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_grid, effective_grid, uniform_grid};
use crate::fock::FockVector;
use crate::states::StateSpec;
use crate::Result;

/// A nonnegative density sampled on a uniform grid over `[-π, π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseDistribution {
    theta: Vec<f64>,
    density: Vec<f64>,
    spec: Option<StateSpec>,
}

impl PhaseDistribution {
    pub(crate) fn new(theta: Vec<f64>, density: Vec<f64>) -> Self {
        debug_assert_eq!(theta.len(), density.len());
        Self {
            theta,
            density,
            spec: None,
        }
    }

    pub fn with_spec(mut self, spec: StateSpec) -> Self {
        self.spec = Some(spec);
        self
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn spec(&self) -> Option<&StateSpec> {
        self.spec.as_ref()
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn step(&self) -> f64 {
        2.0 * PI / self.len() as f64
    }

    /// Periodic trapezoid rule over the full circle.
    pub fn integral(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.step()
    }

    pub fn min_density(&self) -> f64 {
        self.density.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_density(&self) -> f64 {
        self.density.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// θ of the largest sample (first one on ties).
    pub fn peak_theta(&self) -> f64 {
        let mut best = 0;
        for (i, &d) in self.density.iter().enumerate() {
            if d > self.density[best] {
                best = i;
            }
        }
        self.theta[best]
    }

    /// Index of the grid point closest to `theta` on the circle.
    pub fn nearest_index(&self, theta: f64) -> usize {
        let g = self.len() as f64;
        let pos = ((theta + PI) / self.step()).round().rem_euclid(g);
        pos as usize % self.len()
    }

    /// `true` when the grid point nearest `theta` is a strict local maximum.
    pub fn has_peak_at(&self, theta: f64) -> bool {
        let g = self.len();
        let i = self.nearest_index(theta);
        let d = self.density[i];
        let slack = 1e-12 * d.abs();
        d - self.density[(i + g - 1) % g] > slack && d - self.density[(i + 1) % g] > slack
    }

    /// Full width at half maximum: measure of `{θ : P(θ) ≥ max/2}` with linear
    /// interpolation of every crossing between neighbouring grid points.
    pub fn fwhm(&self) -> f64 {
        let half = 0.5 * self.max_density();
        let g = self.len();
        let step = self.step();
        (0..g)
            .map(|i| {
                let a = self.density[i];
                let b = self.density[(i + 1) % g];
                match (a >= half, b >= half) {
                    (true, true) => step,
                    (false, false) => 0.0,
                    (true, false) => step * (a - half) / (a - b),
                    (false, true) => step * (b - half) / (b - a),
                }
            })
            .sum()
    }

    /// `1 − |∫ e^{−iθ} P(θ) dθ|²` by the periodic trapezoid rule.
    pub fn dispersion(&self) -> f64 {
        let first: Complex64 = self
            .theta
            .iter()
            .zip(&self.density)
            .map(|(&t, &d)| Complex64::from_polar(d, -t))
            .sum::<Complex64>()
            * self.step();
        1.0 - first.norm_sqr()
    }

    /// `(θ, r)` pairs for a polar display.
    pub fn polar_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.theta.iter().copied().zip(self.density.iter().copied())
    }
}

/// `P(θ) = (1/2π) |Σ_k c_k e^{−ikθ}|²` by Horner evaluation.
pub fn phase_density_at(state: &FockVector, theta: f64) -> f64 {
    let z = Complex64::from_polar(1.0, -theta);
    let sum = state
        .amplitudes()
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    sum.norm_sqr() / (2.0 * PI)
}

/// Samples `P(θ)` on `max(grid_size, 2·dim)` uniform points.
pub fn phase_distribution(state: &FockVector, grid_size: usize) -> Result<PhaseDistribution> {
    check_grid(grid_size)?;
    let theta = uniform_grid(effective_grid(grid_size, state.dim()));
    let density = theta.iter().map(|&t| phase_density_at(state, t)).collect();
    Ok(PhaseDistribution::new(theta, density))
}

/// `D = 1 − |Σ_k c*_k c_{k+1}|²`, clamped to `[0, 1]`.
pub fn phase_dispersion(state: &FockVector) -> f64 {
    let c = state.amplitudes();
    let shift: Complex64 = c.windows(2).map(|w| w[0].conj() * w[1]).sum();
    (1.0 - shift.norm_sqr()).clamp(0.0, 1.0)
}
