//! Photon added and subtracted displaced Fock states and their limiting cases.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    apply_annihilation, apply_creation, default_dim, displaced_fock_amplitudes, normalize,
    FockVector, DEFAULT_TOLERANCE, MAX_DIM,
};
use crate::special::{ln_binomial, log_factorial};

pub const MAX_COUNT: usize = 16;
pub const MAX_FOCK_N: usize = 32;
pub const MAX_ALPHA: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperationKind {
    Add,
    Subtract,
}

impl fmt::Display for OperationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperationKind::Add => "add",
            OperationKind::Subtract => "subtract",
        })
    }
}

impl std::str::FromStr for OperationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add" | "padfs" | "+" => Ok(OperationKind::Add),
            "subtract" | "sub" | "psdfs" | "-" => Ok(OperationKind::Subtract),
            other => Err(Error::InvalidSpec(format!("unknown operation kind `{other}`"))),
        }
    }
}

/// Recipe for `N± â^{†u} D(α)|n⟩` or `N± â^{v} D(α)|n⟩` with `α = |α| e^{iθ₂}`.
///
/// Serializes as the flat record `{kind, count, n, alpha_mag, alpha_phase}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub kind: OperationKind,
    pub count: usize,
    #[serde(rename = "n")]
    pub fock_n: usize,
    pub alpha_mag: f64,
    pub alpha_phase: f64,
}

impl StateSpec {
    pub fn new(kind: OperationKind, count: usize, fock_n: usize, alpha_mag: f64, alpha_phase: f64) -> Self {
        Self {
            kind,
            count,
            fock_n,
            alpha_mag,
            alpha_phase,
        }
    }

    pub fn padfs(u: usize, n: usize, alpha_mag: f64, alpha_phase: f64) -> Self {
        Self::new(OperationKind::Add, u, n, alpha_mag, alpha_phase)
    }

    pub fn psdfs(v: usize, n: usize, alpha_mag: f64, alpha_phase: f64) -> Self {
        Self::new(OperationKind::Subtract, v, n, alpha_mag, alpha_phase)
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.alpha_mag, self.alpha_phase)
    }

    /// Photons added on top of `n` (zero for subtraction).
    pub fn added(&self) -> usize {
        match self.kind {
            OperationKind::Add => self.count,
            OperationKind::Subtract => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count > MAX_COUNT {
            return Err(Error::InvalidSpec(format!(
                "count {} exceeds {MAX_COUNT}",
                self.count
            )));
        }
        if self.fock_n > MAX_FOCK_N {
            return Err(Error::InvalidSpec(format!(
                "Fock parameter {} exceeds {MAX_FOCK_N}",
                self.fock_n
            )));
        }
        if !(self.alpha_mag >= 0.0 && self.alpha_mag <= MAX_ALPHA) {
            return Err(Error::InvalidSpec(format!(
                "|alpha| = {} outside [0, {MAX_ALPHA}]",
                self.alpha_mag
            )));
        }
        if !self.alpha_phase.is_finite() {
            return Err(Error::InvalidSpec("alpha phase must be finite".into()));
        }
        Ok(())
    }

    /// Starting truncation dimension before any doubling.
    pub fn default_dim(&self) -> usize {
        default_dim(self.fock_n, self.added(), self.alpha_mag)
    }
}

/// A built state together with its normalization constant `N±`.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedState {
    pub state: FockVector,
    pub normalization: f64,
}

/// Builds the state at exactly `dim` basis states, without the tail check.
pub fn build_state_at(spec: &StateSpec, dim: usize, tolerance: f64) -> Result<PreparedState> {
    spec.validate()?;
    let dfs = displaced_fock_amplitudes(spec.fock_n, spec.alpha(), dim)?;
    let raw = match spec.kind {
        OperationKind::Add => apply_creation(&dfs, spec.count, tolerance)?,
        OperationKind::Subtract => apply_annihilation(&dfs, spec.count)?,
    };
    let (state, normalization) = normalize(raw)?;
    Ok(PreparedState {
        state: state.with_canonical_phase(),
        normalization,
    })
}

/// Builds the state with a certified cutoff.
///
/// Starts from [`StateSpec::default_dim`] and doubles the dimension until the
/// tail mass drops below `tolerance` or [`MAX_DIM`] is exceeded.
pub fn prepare(spec: &StateSpec, tolerance: f64) -> Result<PreparedState> {
    if !(tolerance > 0.0 && tolerance <= 1e-6) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tolerance:e} outside (0, 1e-6]"
        )));
    }
    spec.validate()?;
    let mut dim = spec.default_dim();
    loop {
        match build_state_at(spec, dim, tolerance) {
            Ok(p) if p.state.tail_mass() < tolerance => return Ok(p),
            Ok(p) if dim * 2 > MAX_DIM => {
                return Err(Error::TruncationFailure {
                    dim,
                    tail_mass: p.state.tail_mass(),
                    tolerance,
                })
            }
            Err(Error::TruncationOverflow { lost_mass, .. }) if dim * 2 > MAX_DIM => {
                return Err(Error::TruncationFailure {
                    dim,
                    tail_mass: lost_mass,
                    tolerance,
                })
            }
            Ok(_) | Err(Error::TruncationOverflow { .. }) => dim *= 2,
            Err(e) => return Err(e),
        }
    }
}

pub fn build_state(spec: &StateSpec, tolerance: f64) -> Result<FockVector> {
    prepare(spec, tolerance).map(|p| p.state)
}

/// [`build_state`] at the default tolerance.
pub fn build(spec: &StateSpec) -> Result<FockVector> {
    build_state(spec, DEFAULT_TOLERANCE)
}

/// Named rows of the limiting-state table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitingCase {
    Dfs,
    Coherent,
    Fock,
    /// Photon added coherent state.
    Pacs,
    /// Photon subtracted coherent state.
    Pscs,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LimitingParams {
    pub n: Option<usize>,
    pub count: Option<usize>,
    pub alpha_mag: Option<f64>,
    pub alpha_phase: Option<f64>,
}

pub fn limiting_state(case: LimitingCase, params: &LimitingParams) -> Result<StateSpec> {
    let alpha = || params.alpha_mag.ok_or(Error::MissingParameter("alpha_mag"));
    let phase = params.alpha_phase.unwrap_or(0.0);
    let n = || params.n.ok_or(Error::MissingParameter("n"));
    let count = || params.count.ok_or(Error::MissingParameter("count"));
    Ok(match case {
        LimitingCase::Dfs => StateSpec::padfs(0, n()?, alpha()?, phase),
        LimitingCase::Coherent => StateSpec::padfs(0, 0, alpha()?, phase),
        LimitingCase::Fock => StateSpec::padfs(0, n()?, 0.0, 0.0),
        LimitingCase::Pacs => StateSpec::padfs(count()?, 0, alpha()?, phase),
        LimitingCase::Pscs => StateSpec::psdfs(count()?, 0, alpha()?, phase),
    })
}

/// Diagonal double series `Σ_{p,p'} Σ_m w(p, p', m) f(k)` over the photon
/// number `k` of the engineered state, scaled so that `f ≡ 1` gives `N±⁻²`.
///
/// Addition uses `w ∝ (m+p+u)! / (m! (m+p−p')!)` with `k = m+p+u`; subtraction
/// uses `w ∝ (m+p)!² / (m! (m+p−p')! (m+p−v)!)` with `k = m+p−v`. Terms are kept
/// while `k < cutoff`.
pub(crate) fn diagonal_series(spec: &StateSpec, cutoff: usize, f: impl Fn(usize) -> f64) -> f64 {
    let n = spec.fock_n;
    let mag = spec.alpha_mag;
    let ln_mag = (mag > 0.0).then(|| mag.ln());
    let mut total = 0.0;
    for p in 0..=n {
        for pp in 0..=n {
            let sign = if (p + pp) % 2 == 0 { 1.0 } else { -1.0 };
            let prefix = ln_binomial(n, p) + ln_binomial(n, pp) - log_factorial(n) - mag * mag;
            let m_start = pp.saturating_sub(p);
            for m in m_start.. {
                let j = m + p;
                let k = match spec.kind {
                    OperationKind::Add => j + spec.count,
                    OperationKind::Subtract => {
                        if j < spec.count {
                            continue;
                        }
                        j - spec.count
                    }
                };
                if k >= cutoff {
                    break;
                }
                // |α|^{2n-p-p'} |α|^{m} |α|^{m+p-p'}
                let exponent = 2 * n + 2 * m - 2 * pp;
                let ln_pow = match (exponent, ln_mag) {
                    (0, _) => 0.0,
                    (_, Some(l)) => exponent as f64 * l,
                    (_, None) => continue,
                };
                let ln_w = match spec.kind {
                    OperationKind::Add => log_factorial(k) - log_factorial(m) - log_factorial(j - pp),
                    OperationKind::Subtract => {
                        2.0 * log_factorial(j) - log_factorial(m) - log_factorial(j - pp) - log_factorial(k)
                    }
                };
                let fk = f(k);
                if fk != 0.0 {
                    total += sign * (prefix + ln_pow + ln_w).exp() * fk;
                }
            }
        }
    }
    total
}

/// `N±` from its closed-form double series, summed up to photon number `cutoff`.
pub fn normalization_series(spec: &StateSpec, cutoff: usize) -> Result<f64> {
    let inv_sq = diagonal_series(spec, cutoff, |_| 1.0);
    if inv_sq.is_nan() || inv_sq <= crate::fock::ZERO_NORM_THRESHOLD {
        return Err(Error::ZeroState { norm_sq: inv_sq });
    }
    Ok(inv_sq.powf(-0.5))
}

/// `⟨f(N)⟩` evaluated through the diagonal series rather than amplitudes.
pub fn number_expectation_series(spec: &StateSpec, cutoff: usize, f: impl Fn(usize) -> f64) -> Result<f64> {
    let norm = normalization_series(spec, cutoff)?;
    Ok(norm * norm * diagonal_series(spec, cutoff, f))
}
