//! Barnett–Pegg sine/cosine moments and the Carruthers–Nieto U, S, Q parameters.

use std::fmt;

use serde::Serialize;

use crate::fock::{ladder_moment, number_moments, FockVector};

/// Why a fluctuation parameter has no value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Undefined {
    /// `⟨S⟩² + ⟨C⟩² = 0`: the state carries no phase reference (e.g. Fock states).
    NoPhaseReference,
    /// `⟨C⟩ = 0`, so `Q = S/⟨C⟩²` diverges.
    VanishingCosine,
}

impl fmt::Display for Undefined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Undefined::NoPhaseReference => "no-phase-reference",
            Undefined::VanishingCosine => "vanishing-cosine",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Parameter {
    Defined(f64),
    Undefined(Undefined),
}

impl Parameter {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Parameter::Defined(v) => Some(v),
            Parameter::Undefined(_) => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Parameter::Defined(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FluctuationReport {
    pub mean_n: f64,
    pub var_n: f64,
    pub sin_mean: f64,
    pub cos_mean: f64,
    pub sin_var: f64,
    pub cos_var: f64,
    pub u: Parameter,
    pub s: Parameter,
    pub q: Parameter,
}

/// `⟨C⟩` below this fraction of `√(⟨S⟩² + ⟨C⟩²)` counts as zero.
const COSINE_ZERO: f64 = 1e-12;

pub fn fluctuation_report(state: &FockVector) -> FluctuationReport {
    let moments = number_moments(state);
    let a1 = ladder_moment(state, 0, 1);
    let a2 = ladder_moment(state, 0, 2);
    let denom = moments.mean + 0.5;

    let sin_mean = a1.im / denom.sqrt();
    let cos_mean = a1.re / denom.sqrt();
    let sin_sq = (2.0 * moments.mean + 1.0 - 2.0 * a2.re) / (4.0 * denom);
    let cos_sq = (2.0 * moments.mean + 1.0 + 2.0 * a2.re) / (4.0 * denom);
    let sin_var = sin_sq - sin_mean * sin_mean;
    let cos_var = cos_sq - cos_mean * cos_mean;

    let reference = sin_mean * sin_mean + cos_mean * cos_mean;
    let s_value = moments.variance * sin_var;
    let (u, q) = if reference <= f64::MIN_POSITIVE {
        (
            Parameter::Undefined(Undefined::NoPhaseReference),
            Parameter::Undefined(Undefined::NoPhaseReference),
        )
    } else {
        let u = Parameter::Defined(moments.variance * (sin_var + cos_var) / reference);
        let q = if cos_mean.abs() <= COSINE_ZERO * reference.sqrt() {
            Parameter::Undefined(Undefined::VanishingCosine)
        } else {
            Parameter::Defined(s_value / (cos_mean * cos_mean))
        };
        (u, q)
    };

    FluctuationReport {
        mean_n: moments.mean,
        var_n: moments.variance,
        sin_mean,
        cos_mean,
        sin_var,
        cos_var,
        u,
        s: Parameter::Defined(s_value),
        q,
    }
}
