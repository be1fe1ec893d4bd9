//! Closed-form phase distribution of PADFS and PSDFS as explicit double sums
//! over `p, p'` and `m, m'`, independent of the amplitude vector.

use std::f64::consts::PI;

use crate::fock::DEFAULT_TOLERANCE;
use crate::special::{ln_binomial, log_factorial};
use crate::states::{normalization_series, prepare, OperationKind, StateSpec};
use crate::Result;

/// One `(p, m)` term: signed magnitude and the photon index `m + p` that
/// carries the `e^{i(θ−θ₂)(m'+p'−m−p)}` phase.
struct Term {
    value: f64,
    index: usize,
}

fn terms(spec: &StateSpec, cutoff: usize) -> Vec<Term> {
    let n = spec.fock_n;
    let mag = spec.alpha_mag;
    let ln_mag = (mag > 0.0).then(|| mag.ln());
    let mut out = Vec::new();
    for p in 0..=n {
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        for m in 0.. {
            let j = m + p;
            let ln_fact = match spec.kind {
                OperationKind::Add => {
                    if j + spec.count >= cutoff {
                        break;
                    }
                    0.5 * log_factorial(j + spec.count)
                }
                OperationKind::Subtract => {
                    if j < spec.count {
                        continue;
                    }
                    if j - spec.count >= cutoff {
                        break;
                    }
                    log_factorial(j) - 0.5 * log_factorial(j - spec.count)
                }
            };
            let exponent = n - p + m;
            let ln_pow = match (exponent, ln_mag) {
                (0, _) => 0.0,
                (_, Some(l)) => exponent as f64 * l,
                (_, None) => continue,
            };
            let ln_term = ln_binomial(n, p) + ln_pow + ln_fact - log_factorial(m) - 0.5 * mag * mag;
            out.push(Term {
                value: sign * ln_term.exp(),
                index: j,
            });
        }
    }
    out
}

/// `P(θ)` from the quadruple series with `N±` from its own double series,
/// summing photon numbers below `cutoff`.
pub fn closed_form_p_theta_at_cutoff(spec: &StateSpec, theta: f64, cutoff: usize) -> Result<f64> {
    spec.validate()?;
    let norm = normalization_series(spec, cutoff)?;
    let delta = theta - spec.alpha_phase;
    let terms = terms(spec, cutoff);
    let mut total = 0.0;
    for a in &terms {
        for b in &terms {
            let shift = b.index as f64 - a.index as f64;
            total += a.value * b.value * (delta * shift).cos();
        }
    }
    Ok(norm * norm / log_factorial(spec.fock_n).exp() * total / (2.0 * PI))
}

/// [`closed_form_p_theta_at_cutoff`] at the certified truncation of `spec`.
pub fn closed_form_p_theta(spec: &StateSpec, theta: f64) -> Result<f64> {
    let cutoff = prepare(spec, DEFAULT_TOLERANCE)?.state.dim();
    closed_form_p_theta_at_cutoff(spec, theta, cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::phase_density_at;
    use crate::states::build;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_is_uniform() {
        let spec = StateSpec::padfs(0, 0, 0.0, 0.0);
        for theta in [-3.0, -1.0, 0.0, 0.5, 2.9] {
            assert_abs_diff_eq!(closed_form_p_theta(&spec, theta).unwrap(), 1.0 / (2.0 * PI), epsilon = 1e-15);
        }
    }

    #[test]
    fn depends_only_on_theta_minus_theta2() {
        let a = closed_form_p_theta(&StateSpec::padfs(1, 1, 1.0, PI / 2.0), PI / 2.0).unwrap();
        let b = closed_form_p_theta(&StateSpec::padfs(1, 1, 1.0, 0.0), 0.0).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-13);
    }

    #[test]
    fn matches_amplitude_route() {
        for spec in [
            StateSpec::padfs(2, 1, 1.0, 0.0),
            StateSpec::psdfs(1, 1, 1.0, 0.0),
            StateSpec::psdfs(3, 2, 1.5, 1.0),
            StateSpec::padfs(0, 3, 2.0, -0.4),
        ] {
            let s = build(&spec).unwrap();
            for theta in [0.0, 0.3, -1.2, 2.5] {
                let cf = closed_form_p_theta(&spec, theta).unwrap();
                let amp = phase_density_at(&s, theta);
                assert_abs_diff_eq!(cf, amp, epsilon = 1e-8);
            }
        }
    }
}
