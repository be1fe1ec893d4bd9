//! Mach–Zehnder phase-estimation uncertainty for `|ψ⟩ ⊗ |0⟩` inputs.
//!
//! With the second port in vacuum the input moments reduce to
//! `⟨J_z⟩ = ⟨N⟩/2`, `(ΔJ_z)² = (ΔN)²/4`, `⟨J_x⟩ = 0`, `(ΔJ_x)² = ⟨N⟩/4` and
//! `cov(J_x, J_z) = 0`. The direct-moment path is normative; the series path
//! re-derives the same quantities from the double sums over `p, p', m`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{number_moments, FockVector, DEFAULT_TOLERANCE};
use crate::states::{diagonal_series, normalization_series, prepare, StateSpec};

/// φ values closer than this to 0 or π are rejected.
pub const SLOPE_GUARD: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputMoments {
    pub jz_mean: f64,
    pub jz_var: f64,
    pub jx_mean: f64,
    pub jx_var: f64,
    pub cov_xz: f64,
}

pub fn input_moments(state: &FockVector) -> InputMoments {
    let m = number_moments(state);
    // ⟨b⟩ = 0 and ⟨b† b⟩ = 0 for the vacuum port
    InputMoments {
        jz_mean: m.mean / 2.0,
        jz_var: m.variance / 4.0,
        jx_mean: 0.0,
        jx_var: m.mean / 4.0,
        cov_xz: 0.0,
    }
}

/// `(ΔJ_z)²` at the output for interferometer phase `phi`.
pub fn delta_jz_direct(state: &FockVector, phi: f64) -> f64 {
    let m = input_moments(state);
    let (s, c) = phi.sin_cos();
    c * c * m.jz_var + s * s * m.jx_var - 2.0 * s * c * m.cov_xz
}

/// `d⟨J_z⟩/dφ = −sin φ ⟨N⟩/2`.
pub fn slope_djz_dphi(state: &FockVector, phi: f64) -> f64 {
    -phi.sin() * number_moments(state).mean / 2.0
}

/// Readings of the `cos²φ` brace of the printed variance series.
///
/// Written with `⟨·⟩` for the normalized diagonal series, the brace is
/// `½ {⟨½N(N−1) + N⟩ − ½ X}` where `X` is the trailing `k²` sum. The variants
/// differ in whether `X` is read inside the `m` sum and whether it is `⟨N²⟩`
/// or `⟨N⟩²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AppendixGrouping {
    /// `X = ⟨N²⟩` folded into the bracket: `½{⟨½N(N−1) + N⟩ − ½⟨N²⟩} = ⟨N⟩/4`.
    MeanInsideBracket,
    /// `X = ⟨N⟩²`: `½{⟨½N(N−1) + N⟩ − ½⟨N⟩²} = (ΔN)²/4 + ⟨N⟩/4`.
    SquaredMean,
    /// `X = ⟨N⟩²` with the linear term halved: `½{⟨½N(N−1) + ½N⟩ − ½⟨N⟩²} = (ΔN)²/4`.
    SquaredMeanHalfLinear,
}

impl AppendixGrouping {
    pub const ALL: [AppendixGrouping; 3] = [
        AppendixGrouping::MeanInsideBracket,
        AppendixGrouping::SquaredMean,
        AppendixGrouping::SquaredMeanHalfLinear,
    ];
}

/// The grouping that reproduces `cos²φ (ΔN)²/4 + sin²φ ⟨N⟩/4`.
pub const RESOLVED_GROUPING: AppendixGrouping = AppendixGrouping::SquaredMeanHalfLinear;

/// Normalized diagonal sums needed by the variance and slope series.
#[derive(Clone, Copy, Debug)]
struct SeriesMoments {
    mean: f64,
    second: f64,
    pair_plus_linear: f64,
    pair_plus_half_linear: f64,
}

fn series_moments(spec: &StateSpec, cutoff: usize) -> Result<SeriesMoments> {
    let norm = normalization_series(spec, cutoff)?;
    let scale = norm * norm;
    let sum = |f: &dyn Fn(f64) -> f64| scale * diagonal_series(spec, cutoff, |k| f(k as f64));
    Ok(SeriesMoments {
        mean: sum(&|k| k),
        second: sum(&|k| k * k),
        pair_plus_linear: sum(&|k| 0.5 * k * (k - 1.0) + k),
        pair_plus_half_linear: sum(&|k| 0.5 * k * (k - 1.0) + 0.5 * k),
    })
}

fn certified_cutoff(spec: &StateSpec) -> Result<usize> {
    Ok(prepare(spec, DEFAULT_TOLERANCE)?.state.dim())
}

/// Variance series for one bracket reading at an explicit cutoff.
pub fn delta_jz_appendix_with(spec: &StateSpec, phi: f64, grouping: AppendixGrouping, cutoff: usize) -> Result<f64> {
    spec.validate()?;
    let m = series_moments(spec, cutoff)?;
    let brace = match grouping {
        AppendixGrouping::MeanInsideBracket => 0.5 * (m.pair_plus_linear - 0.5 * m.second),
        AppendixGrouping::SquaredMean => 0.5 * (m.pair_plus_linear - 0.5 * m.mean * m.mean),
        AppendixGrouping::SquaredMeanHalfLinear => 0.5 * (m.pair_plus_half_linear - 0.5 * m.mean * m.mean),
    };
    let (s, c) = phi.sin_cos();
    Ok(c * c * brace + s * s * 0.25 * m.mean)
}

/// `(ΔJ_z)²` from the series path with the resolved bracket grouping.
pub fn delta_jz_appendix(spec: &StateSpec, phi: f64) -> Result<f64> {
    delta_jz_appendix_with(spec, phi, RESOLVED_GROUPING, certified_cutoff(spec)?)
}

/// Signed `d⟨J_z⟩/dφ` from the slope series (which gives its magnitude `½⟨N⟩ sin φ`).
pub fn slope_appendix(spec: &StateSpec, phi: f64) -> Result<f64> {
    spec.validate()?;
    let m = series_moments(spec, certified_cutoff(spec)?)?;
    Ok(-0.5 * m.mean * phi.sin())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitivityMethod {
    DirectMoments,
    AppendixSeries,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSensitivity {
    pub phi: Vec<f64>,
    pub var_jz: Vec<f64>,
    pub slope: Vec<f64>,
    pub delta_phi: Vec<f64>,
    pub method: SensitivityMethod,
    pub spec: Option<StateSpec>,
}

/// 256 points spanning `[0.05, π − 0.05]`.
pub fn default_phi_grid() -> Vec<f64> {
    phi_grid(256, 0.05)
}

pub fn phi_grid(points: usize, margin: f64) -> Vec<f64> {
    let (lo, hi) = (margin, PI - margin);
    if points == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn check_phi(phi: f64) -> Result<()> {
    let r = phi.rem_euclid(PI);
    if r < SLOPE_GUARD || PI - r < SLOPE_GUARD {
        return Err(Error::SlopeSingular { phi });
    }
    Ok(())
}

fn assemble(
    phi_grid: &[f64],
    method: SensitivityMethod,
    mut eval: impl FnMut(f64) -> Result<(f64, f64)>,
) -> Result<PhaseSensitivity> {
    let mut out = PhaseSensitivity {
        phi: Vec::with_capacity(phi_grid.len()),
        var_jz: Vec::with_capacity(phi_grid.len()),
        slope: Vec::with_capacity(phi_grid.len()),
        delta_phi: Vec::with_capacity(phi_grid.len()),
        method,
        spec: None,
    };
    for &phi in phi_grid {
        check_phi(phi)?;
        let (var, slope) = eval(phi)?;
        if slope == 0.0 {
            return Err(Error::SlopeSingular { phi });
        }
        out.phi.push(phi);
        out.var_jz.push(var);
        out.slope.push(slope);
        out.delta_phi.push(var.max(0.0).sqrt() / slope.abs());
    }
    Ok(out)
}

/// `Δφ = ΔJ_z / |d⟨J_z⟩/dφ|` from direct moments of `state`.
pub fn phase_uncertainty(state: &FockVector, phi_grid: &[f64]) -> Result<PhaseSensitivity> {
    let m = input_moments(state);
    assemble(phi_grid, SensitivityMethod::DirectMoments, |phi| {
        let (s, c) = phi.sin_cos();
        let var = c * c * m.jz_var + s * s * m.jx_var - 2.0 * s * c * m.cov_xz;
        Ok((var, -s * m.jz_mean))
    })
}

/// Same as [`phase_uncertainty`] but through the double-series path.
pub fn phase_uncertainty_appendix(spec: &StateSpec, phi_grid: &[f64]) -> Result<PhaseSensitivity> {
    spec.validate()?;
    let m = series_moments(spec, certified_cutoff(spec)?)?;
    let brace = 0.5 * (m.pair_plus_half_linear - 0.5 * m.mean * m.mean);
    let mut out = assemble(phi_grid, SensitivityMethod::AppendixSeries, |phi| {
        let (s, c) = phi.sin_cos();
        Ok((c * c * brace + s * s * 0.25 * m.mean, -0.5 * m.mean * s))
    })?;
    out.spec = Some(*spec);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::build;
    use approx::assert_abs_diff_eq;

    #[test]
    fn input_moment_examples() {
        let vac = FockVector::number_state(0, 4).unwrap();
        assert_eq!(
            input_moments(&vac),
            InputMoments { jz_mean: 0.0, jz_var: 0.0, jx_mean: 0.0, jx_var: 0.0, cov_xz: 0.0 }
        );
        let one = input_moments(&FockVector::number_state(1, 4).unwrap());
        assert_eq!((one.jz_mean, one.jz_var, one.jx_var), (0.5, 0.0, 0.25));
        let coh = input_moments(&build(&StateSpec::padfs(0, 0, 1.0, 0.0)).unwrap());
        assert_abs_diff_eq!(coh.jz_mean, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(coh.jz_var, 0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(coh.jx_var, 0.25, epsilon = 1e-10);
    }

    #[test]
    fn direct_variance_and_slope() {
        let one = FockVector::number_state(1, 4).unwrap();
        assert_eq!(delta_jz_direct(&one, 0.0), 0.0);
        assert_abs_diff_eq!(delta_jz_direct(&one, PI / 2.0), 0.25, epsilon = 1e-16);
        assert_eq!(slope_djz_dphi(&one, 0.0), -0.0);
        assert_abs_diff_eq!(slope_djz_dphi(&one, PI / 2.0), -0.5, epsilon = 1e-16);
    }

    #[test]
    fn appendix_limits() {
        let coh = StateSpec::padfs(0, 0, 1.3, 0.0);
        assert_abs_diff_eq!(delta_jz_appendix(&coh, PI / 2.0).unwrap(), 1.69 / 4.0, epsilon = 1e-10);
        let vac = StateSpec::padfs(0, 0, 0.0, 0.0);
        for phi in [0.1, 1.0, 2.0] {
            assert_abs_diff_eq!(delta_jz_appendix(&vac, phi).unwrap(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn only_resolved_grouping_matches_direct_path() {
        for spec in [
            StateSpec::padfs(1, 1, 0.1, 0.0),
            StateSpec::psdfs(1, 1, 0.1, 0.0),
            StateSpec::padfs(2, 3, 1.4, 0.5),
        ] {
            let s = build(&spec).unwrap();
            let cutoff = s.dim();
            let phi = PI / 4.0;
            let direct = delta_jz_direct(&s, phi);
            for g in AppendixGrouping::ALL {
                let series = delta_jz_appendix_with(&spec, phi, g, cutoff).unwrap();
                if g == RESOLVED_GROUPING {
                    assert_abs_diff_eq!(series, direct, epsilon = 1e-8);
                } else {
                    assert!((series - direct).abs() > 1e-6, "{g:?} unexpectedly matches");
                }
            }
        }
    }

    #[test]
    fn slope_series_matches_direct() {
        let spec = StateSpec::padfs(2, 1, 0.1, 0.0);
        let s = build(&spec).unwrap();
        let phi = PI / 3.0;
        assert_abs_diff_eq!(slope_appendix(&spec, phi).unwrap(), slope_djz_dphi(&s, phi), epsilon = 1e-8);
    }

    #[test]
    fn shot_noise_for_coherent_input() {
        let s = build(&StateSpec::padfs(0, 0, 0.1, 0.0)).unwrap();
        let sens = phase_uncertainty(&s, &[PI / 2.0, 1.0]).unwrap();
        assert_abs_diff_eq!(sens.delta_phi[0], 10.0, epsilon = 1e-6);
        // √(cot²φ (ΔN)² + ⟨N⟩)/⟨N⟩ with ⟨N⟩ = (ΔN)² = |α|²
        let n = 0.01f64;
        let expected = ((1.0f64 / 1.0f64.tan()).powi(2) * n + n).sqrt() / n;
        assert_abs_diff_eq!(sens.delta_phi[1], expected, epsilon = 1e-6);
    }

    #[test]
    fn singular_phases_rejected() {
        let s = build(&StateSpec::padfs(1, 1, 0.1, 0.0)).unwrap();
        assert!(matches!(phase_uncertainty(&s, &[0.0005]), Err(Error::SlopeSingular { .. })));
        assert!(matches!(phase_uncertainty(&s, &[PI - 1e-4]), Err(Error::SlopeSingular { .. })));
        let vac = FockVector::number_state(0, 4).unwrap();
        assert!(matches!(phase_uncertainty(&vac, &[1.0]), Err(Error::SlopeSingular { .. })));
    }

    #[test]
    fn default_grid_shape() {
        let g = default_phi_grid();
        assert_eq!(g.len(), 256);
        assert_abs_diff_eq!(g[0], 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(g[255], PI - 0.05, epsilon = 1e-15);
    }

    #[test]
    fn series_and_direct_sensitivities_agree() {
        let spec = StateSpec::psdfs(2, 2, 0.1, 0.3);
        let grid = default_phi_grid();
        let direct = phase_uncertainty(&build(&spec).unwrap(), &grid).unwrap();
        let series = phase_uncertainty_appendix(&spec, &grid).unwrap();
        for (a, b) in direct.delta_phi.iter().zip(&series.delta_phi) {
            assert!((a - b).abs() <= 1e-8 * a.max(1.0));
        }
    }
}
