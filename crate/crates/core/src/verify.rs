//! Cross-checks of the series paths against the dense-matrix oracle.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fock::{ladder_moment, number_moments, DEFAULT_TOLERANCE};
use crate::interferometry::{
    delta_jz_appendix, delta_jz_direct, phase_uncertainty, phase_uncertainty_appendix, slope_appendix,
    slope_djz_dphi,
};
use crate::oracle::{
    ladder_power_matrix, number_matrix, oracle_dispersion, oracle_expectation, oracle_fluctuation,
    oracle_interferometer_sectors, oracle_norm_sq, oracle_phase_density, oracle_state, MAX_ORACLE_DIM,
};
use crate::phase::{
    angular_q_quadrature, closed_form_p_theta, fluctuation_report, phase_density_at, phase_dispersion,
    phase_distribution, AngularQ, Parameter, DEFAULT_GRID,
};
use crate::states::{normalization_series, prepare, OperationKind, StateSpec};

pub const DEFAULT_SEED: u64 = 0x5eed_f0c5;

pub const DISPLACEMENT_PHASES: [f64; 4] = [0.0, FRAC_PI_4, FRAC_PI_2, PI];

const THETA_SAMPLES: [f64; 6] = [-3.0, -1.7, -0.4, 0.0, 0.9, 2.6];
const PHI_SAMPLES: [f64; 4] = [FRAC_PI_4, PI / 3.0, FRAC_PI_2, 2.0 * PI / 3.0];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    #[default]
    Quick,
    Full,
}

impl Suite {
    pub fn spec_count(self) -> usize {
        match self {
            Suite::Quick => 16,
            Suite::Full => 64,
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Suite::Quick),
            "full" => Ok(Suite::Full),
            other => Err(crate::Error::InvalidArgument(format!("unknown suite {other:?}"))),
        }
    }
}

/// One compared quantity. The error is `|value − reference| / max(1, |reference|)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub spec: StateSpec,
    pub quantity: String,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn error(&self) -> f64 {
        let d = (self.value - self.reference).abs();
        if d.is_nan() {
            return f64::INFINITY;
        }
        d / self.reference.abs().max(1.0)
    }

    pub fn passed(&self) -> bool {
        self.error() <= self.tolerance
    }
}

/// Random specs with counts and `n` in `0..=3`, `|α| ≤ 2`, and `θ₂` cycling
/// through [`DISPLACEMENT_PHASES`]. Zero states are redrawn.
pub fn random_suite(seed: u64, count: usize) -> Vec<StateSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specs = Vec::with_capacity(count);
    while specs.len() < count {
        let kind = if rng.gen_bool(0.5) { OperationKind::Add } else { OperationKind::Subtract };
        let spec = StateSpec::new(
            kind,
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
            rng.gen_range(0.05..=2.0),
            DISPLACEMENT_PHASES[specs.len() % DISPLACEMENT_PHASES.len()],
        );
        specs.push(spec);
    }
    specs
}

struct Recorder {
    spec: StateSpec,
    checks: Vec<Check>,
}

impl Recorder {
    fn push(&mut self, quantity: impl Into<String>, value: f64, reference: f64, tolerance: f64) {
        self.checks.push(Check {
            spec: self.spec,
            quantity: quantity.into(),
            value,
            reference,
            tolerance,
        });
    }

    fn complex(&mut self, quantity: &str, value: Complex64, reference: Complex64, tolerance: f64) {
        self.push(format!("{quantity}.re"), value.re, reference.re, tolerance);
        self.push(format!("{quantity}.im"), value.im, reference.im, tolerance);
    }

    fn parameter(&mut self, quantity: &str, value: Parameter, reference: Parameter, tolerance: f64) {
        match (value.value(), reference.value()) {
            (Some(v), Some(r)) => self.push(quantity, v, r, tolerance),
            (None, None) => self.push(format!("{quantity}.undefined"), 0.0, 0.0, tolerance),
            (v, r) => self.push(
                format!("{quantity}.definedness"),
                v.map_or(0.0, |_| 1.0),
                r.map_or(0.0, |_| 1.0),
                0.0,
            ),
        }
    }
}

/// Every closed-form quantity for `spec` against its oracle counterpart.
pub fn cross_check(spec: &StateSpec, suite: Suite) -> Result<Vec<Check>> {
    let prepared = prepare(spec, DEFAULT_TOLERANCE)?;
    let state = &prepared.state;
    let dim = state.dim();
    let alpha = spec.alpha_mag;
    let required = (alpha * alpha + 8.0 * alpha + 8.0).ceil() as usize;
    let oracle_dim = (dim + 16).max(required).min(MAX_ORACLE_DIM);
    let mut r = Recorder {
        spec: *spec,
        checks: Vec::new(),
    };

    let oracle = oracle_state(spec, oracle_dim)?;
    r.push("fidelity", oracle.fidelity(state), 1.0, 1e-8);

    let norm_oracle = oracle_norm_sq(spec, oracle_dim)?.powf(-0.5);
    r.push("normalization", prepared.normalization, norm_oracle, 1e-8);
    r.push("normalization.series", normalization_series(spec, dim)?, prepared.normalization, 1e-8);

    let padded = state.padded(oracle_dim);
    let moments = number_moments(state);
    let n_op = number_matrix(oracle_dim)?;
    r.push("mean_n", moments.mean, oracle_expectation(&padded, &n_op)?.re, 1e-8);
    r.push("second_moment", moments.second_moment, oracle_expectation(&padded, &n_op.pow(2))?.re, 1e-8);
    for (j, k) in [(0, 1), (1, 1), (0, 2), (2, 1), (2, 2)] {
        let op = ladder_power_matrix(j, k, oracle_dim)?;
        r.complex(
            &format!("ladder_{j}_{k}"),
            ladder_moment(state, j, k),
            oracle_expectation(&padded, &op)?,
            1e-8,
        );
    }

    for &offset in &THETA_SAMPLES {
        let theta = spec.alpha_phase + offset;
        let amplitude = phase_density_at(state, theta);
        r.push(format!("p_theta({offset})"), amplitude, oracle_phase_density(&oracle, theta), 1e-8);
        r.push(format!("p_theta_closed({offset})"), closed_form_p_theta(spec, theta)?, amplitude, 1e-8);
    }

    let dispersion = phase_dispersion(state);
    r.push("dispersion", dispersion, oracle_dispersion(&oracle)?, 1e-8);
    r.push("dispersion.quadrature", phase_distribution(state, DEFAULT_GRID)?.dispersion(), dispersion, 1e-6);

    let series = fluctuation_report(state);
    let matrix = oracle_fluctuation(&oracle)?;
    r.push("sin_mean", series.sin_mean, matrix.sin_mean, 1e-8);
    r.push("cos_mean", series.cos_mean, matrix.cos_mean, 1e-8);
    r.push("sin_var", series.sin_var, matrix.sin_var, 1e-8);
    r.push("cos_var", series.cos_var, matrix.cos_var, 1e-8);
    r.parameter("U", series.u, matrix.u, 1e-8);
    r.parameter("S", series.s, matrix.s, 1e-8);
    r.parameter("Q", series.q, matrix.q, 1e-8);

    let direct = phase_uncertainty(state, &PHI_SAMPLES)?;
    let appendix = phase_uncertainty_appendix(spec, &PHI_SAMPLES)?;
    for (i, &phi) in PHI_SAMPLES.iter().enumerate() {
        let rot = oracle_interferometer_sectors(&oracle, phi)?;
        let var = delta_jz_direct(state, phi);
        let slope = slope_djz_dphi(state, phi);
        r.push(format!("var_jz({phi:.4})"), var, rot.jz_var, 1e-8);
        r.push(format!("slope({phi:.4})"), slope, rot.slope, 1e-8);
        let oracle_dphi = rot.jz_var.max(0.0).sqrt() / rot.slope.abs();
        r.push(format!("delta_phi({phi:.4})"), direct.delta_phi[i], oracle_dphi, 1e-8);
        r.push(format!("delta_phi.appendix({phi:.4})"), appendix.delta_phi[i], direct.delta_phi[i], 1e-8);
        if suite == Suite::Full {
            r.push(format!("var_jz.appendix({phi:.4})"), delta_jz_appendix(spec, phi)?, var, 1e-8);
            r.push(format!("slope.appendix({phi:.4})"), slope_appendix(spec, phi)?, slope, 1e-8);
        }
    }

    if suite == Suite::Full {
        let closed = AngularQ::new(state);
        for offset in [0.0, 1.1] {
            let theta = spec.alpha_phase + offset;
            r.push(
                format!("angular_q.quadrature({offset})"),
                angular_q_quadrature(state, theta, 24)?,
                closed.at(theta),
                1e-6,
            );
        }
    }
    Ok(r.checks)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub specs: Vec<StateSpec>,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let specs = random_suite(seed, suite.spec_count());
    let mut checks = Vec::new();
    for spec in &specs {
        checks.extend(cross_check(spec, suite)?);
    }
    Ok(SuiteReport {
        suite,
        seed,
        specs,
        checks,
    })
}
