//! Phase distributions, angular Q, Carruthers–Nieto fluctuation parameters
//! and phase dispersion.

mod closed_form;
mod distribution;
mod fluctuation;
mod husimi;

pub use closed_form::{closed_form_p_theta, closed_form_p_theta_at_cutoff};
pub use distribution::{phase_density_at, phase_dispersion, phase_distribution, PhaseDistribution};
pub use fluctuation::{fluctuation_report, FluctuationReport, Parameter, Undefined};
pub use husimi::{angular_q, angular_q_quadrature, husimi_q, AngularQ};

/// Default number of uniform θ samples on `[-π, π)`.
pub const DEFAULT_GRID: usize = 1024;

/// Smallest grid accepted by the sampling routines.
pub const MIN_GRID: usize = 64;

pub(crate) fn check_grid(grid_size: usize) -> crate::Result<()> {
    if grid_size < MIN_GRID {
        return Err(crate::Error::InvalidArgument(format!(
            "grid size {grid_size} below {MIN_GRID}"
        )));
    }
    Ok(())
}

/// Uniform grid `θ_i = -π + 2πi/G`.
pub fn uniform_grid(grid_size: usize) -> Vec<f64> {
    let step = 2.0 * std::f64::consts::PI / grid_size as f64;
    (0..grid_size)
        .map(|i| -std::f64::consts::PI + step * i as f64)
        .collect()
}

/// Grid size actually used for a state: at least `2·dim` so the periodic
/// trapezoid rule is exact on the trigonometric polynomial.
pub(crate) fn effective_grid(grid_size: usize, dim: usize) -> usize {
    grid_size.max(2 * dim)
}
