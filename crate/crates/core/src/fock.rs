//! Truncated Fock-space amplitudes, ladder actions and number moments.
//!
//! Every factorial ratio is evaluated as `exp` of log-factorial differences so
//! that displacements up to `|α| = 8` combined with tens of added photons stay
//! finite. The displacement phase θ₂ is always attached as an explicit
//! `e^{i(k-n)θ₂}` factor and never mixed into magnitudes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{ln_binomial, ln_ladder, log_factorial};

/// Default bound on the mass allowed in the top 10% of a truncated basis.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Norms at or below this are treated as an analytic zero.
pub const ZERO_NORM_THRESHOLD: f64 = 1e-300;

/// Hard cap on the truncation dimension reached by automatic doubling.
pub const MAX_DIM: usize = 4096;

/// Unnormalized amplitudes `c_0 … c_{d-1}` together with their squared norm.
#[derive(Clone, Debug, PartialEq)]
pub struct RawFockVector {
    amplitudes: Vec<Complex64>,
    norm_sq: f64,
}

impl RawFockVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        let norm_sq = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        Self {
            amplitudes,
            norm_sq,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

/// A unit-norm pure state in the truncated number basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
    tail_mass: f64,
}

impl FockVector {
    fn from_unit(amplitudes: Vec<Complex64>) -> Self {
        let tail_mass = tail_mass(&amplitudes);
        Self {
            amplitudes,
            tail_mass,
        }
    }

    /// Number state `|n⟩` in a `dim`-dimensional basis.
    pub fn number_state(n: usize, dim: usize) -> Result<Self> {
        if dim <= n {
            return Err(Error::InvalidTruncation { dim, n });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self::from_unit(amplitudes))
    }

    /// Normalizes arbitrary amplitudes. Fails on a (numerically) zero vector.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        normalize(RawFockVector::new(amplitudes)).map(|(v, _)| v)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amplitudes.get(k).copied().unwrap_or_default()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Probability mass held by the top 10% of basis indices.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.amplitudes.iter().map(|c| c.norm_sqr())
    }

    /// `⟨self|other⟩`, zero-padding the shorter vector.
    pub fn overlap(&self, other: &FockVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &FockVector) -> f64 {
        self.overlap(other).norm_sqr()
    }

    /// Rotates the global phase so the first nonzero amplitude is real and positive.
    pub fn with_canonical_phase(mut self) -> Self {
        if let Some(first) = self.amplitudes.iter().find(|c| c.norm_sqr() > 0.0) {
            let rot = first.conj() / first.norm();
            for c in &mut self.amplitudes {
                *c *= rot;
            }
        }
        self
    }

    /// Same state in a larger basis, padded with zeros.
    pub fn padded(&self, dim: usize) -> FockVector {
        let mut amplitudes = self.amplitudes.clone();
        if dim > amplitudes.len() {
            amplitudes.resize(dim, Complex64::new(0.0, 0.0));
        }
        Self::from_unit(amplitudes)
    }
}

fn tail_mass(amplitudes: &[Complex64]) -> f64 {
    let dim = amplitudes.len();
    let top = dim.div_ceil(10).max(1).min(dim);
    amplitudes[dim - top..].iter().map(|c| c.norm_sqr()).sum()
}

/// Default truncation dimension for a state built from `D(α)|n⟩` with `extra`
/// photons added: `n + extra + ⌈|α|² + 8√(|α|² + 1)⌉ + 16`.
pub fn default_dim(n: usize, extra: usize, alpha_mag: f64) -> usize {
    let a2 = alpha_mag * alpha_mag;
    n + extra + (a2 + 8.0 * (a2 + 1.0).sqrt()).ceil() as usize + 16
}

/// Exponent-aware `ln(|α|^e)`; `None` when the power vanishes (0^e with e > 0).
fn ln_power(ln_mag: Option<f64>, exponent: usize) -> Option<f64> {
    match (exponent, ln_mag) {
        (0, _) => Some(0.0),
        (_, Some(l)) => Some(exponent as f64 * l),
        (_, None) => None,
    }
}

/// Fock amplitudes of the displaced number state `D(α)|n⟩` up to `dim - 1`.
///
/// Amplitude of `|k⟩` collects, over `k = m + p`,
/// `(n choose p) (−α*)^{n−p} e^{−|α|²/2} α^m √(k!) / (m! √(n!))`.
/// All terms at fixed `k` share the phase `e^{i(k−n)θ₂}` so the sum over `p`
/// is carried out on real magnitudes with alternating signs.
pub fn displaced_fock_amplitudes(n: usize, alpha: Complex64, dim: usize) -> Result<RawFockVector> {
    if dim <= n {
        return Err(Error::InvalidTruncation { dim, n });
    }
    let mag = alpha.norm();
    let theta2 = alpha.arg();
    let ln_mag = (mag > 0.0).then(|| mag.ln());
    let half_ln_nfact = 0.5 * log_factorial(n);
    let gauss = -0.5 * mag * mag;

    let amplitudes = (0..dim)
        .map(|k| {
            let half_ln_kfact = 0.5 * log_factorial(k);
            let mut sum = 0.0;
            for p in 0..=n.min(k) {
                let m = k - p;
                let Some(ln_pow) = ln_power(ln_mag, n - p + m) else {
                    continue;
                };
                let ln_term = ln_binomial(n, p) + ln_pow + gauss + half_ln_kfact
                    - log_factorial(m)
                    - half_ln_nfact;
                let sign = if (n - p).is_multiple_of(2) { 1.0 } else { -1.0 };
                sum += sign * ln_term.exp();
            }
            Complex64::from_polar(sum, theta2 * (k as f64 - n as f64))
        })
        .collect();
    Ok(RawFockVector::new(amplitudes))
}

/// `â^{†u}` on an unnormalized vector, keeping the dimension fixed.
///
/// Fails when more than `tolerance` of the resulting norm would be pushed past
/// the top of the basis.
pub fn apply_creation(state: &RawFockVector, u: usize, tolerance: f64) -> Result<RawFockVector> {
    if u == 0 {
        return Ok(state.clone());
    }
    let dim = state.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    let mut kept = 0.0;
    let mut lost = 0.0;
    for (k, c) in state.amplitudes.iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let scaled = c * ln_ladder(k, u).exp();
        if k + u < dim {
            kept += scaled.norm_sqr();
            out[k + u] = scaled;
        } else {
            lost += scaled.norm_sqr();
        }
    }
    if lost > 0.0 {
        let fraction = lost / (kept + lost);
        if fraction > tolerance {
            return Err(Error::TruncationOverflow {
                lost_mass: fraction,
                tolerance,
            });
        }
    }
    Ok(RawFockVector::new(out))
}

/// `â^{v}` on an unnormalized vector. Components below `|v⟩` are annihilated.
pub fn apply_annihilation(state: &RawFockVector, v: usize) -> Result<RawFockVector> {
    if v == 0 {
        return Ok(state.clone());
    }
    let dim = state.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for k in v..dim {
        let c = state.amplitudes[k];
        if c.norm_sqr() != 0.0 {
            out[k - v] = c * ln_ladder(k - v, v).exp();
        }
    }
    let raw = RawFockVector::new(out);
    if raw.norm_sq <= ZERO_NORM_THRESHOLD {
        return Err(Error::ZeroState {
            norm_sq: raw.norm_sq,
        });
    }
    Ok(raw)
}

/// Unit-norm vector and the normalization constant `1/√norm_sq`.
pub fn normalize(state: RawFockVector) -> Result<(FockVector, f64)> {
    if state.norm_sq.is_nan() || state.norm_sq <= ZERO_NORM_THRESHOLD {
        return Err(Error::ZeroState {
            norm_sq: state.norm_sq,
        });
    }
    let constant = 1.0 / state.norm_sq.sqrt();
    let amplitudes = state.amplitudes.into_iter().map(|c| c * constant).collect();
    Ok((FockVector::from_unit(amplitudes), constant))
}

/// `⟨ψ|â^{†j} â^{k}|ψ⟩`.
pub fn ladder_moment(state: &FockVector, j: usize, k: usize) -> Complex64 {
    let c = state.amplitudes();
    let reach = j.max(k);
    if reach >= c.len() {
        return Complex64::new(0.0, 0.0);
    }
    (0..c.len() - reach)
        .map(|l| {
            let weight = (ln_ladder(l, j) + ln_ladder(l, k)).exp();
            c[l + j].conj() * c[l + k] * weight
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumberMoments {
    pub mean: f64,
    pub variance: f64,
    pub second_moment: f64,
}

pub fn number_moments(state: &FockVector) -> NumberMoments {
    let mut mean = 0.0;
    let mut second_moment = 0.0;
    for (k, p) in state.probabilities().enumerate() {
        let k = k as f64;
        mean += k * p;
        second_moment += k * k * p;
    }
    let variance = state
        .probabilities()
        .enumerate()
        .map(|(k, p)| (k as f64 - mean).powi(2) * p)
        .sum();
    NumberMoments {
        mean,
        variance,
        second_moment,
    }
}
