//! Log-domain factorials, binomials and half-integer gamma values.

use std::sync::OnceLock;

const TABLE_LEN: usize = 1024;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        t.push(0.0);
        let mut acc = 0.0;
        for k in 1..TABLE_LEN {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(k!)`. Tabulated below 1024, Stirling series above.
pub fn log_factorial(k: usize) -> f64 {
    if k < TABLE_LEN {
        return table()[k];
    }
    let x = (k + 1) as f64;
    // ln Γ(x) for x ≥ 1025; truncation error of the series is below 1e-25
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

/// `ln Γ(j/2 + 1)` for nonnegative integer `j`.
///
/// Odd `j = 2m + 1` uses Γ(m + 3/2) = (2m + 2)! √π / (4^{m+1} (m + 1)!).
pub fn ln_gamma_half(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        log_factorial(j / 2)
    } else {
        let m1 = (j - 1) / 2 + 1;
        log_factorial(2 * m1) - (m1 as f64) * 4f64.ln() - log_factorial(m1)
            + 0.5 * std::f64::consts::PI.ln()
    }
}

/// `ln √((k + s)! / k!)`, the log of the ladder factor picked up by `â^{†s}` on `|k⟩`.
pub fn ln_ladder(k: usize, s: usize) -> f64 {
    0.5 * (log_factorial(k + s) - log_factorial(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorials() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        // 20! = 2432902008176640000 exactly
        let exact = 2_432_902_008_176_640_000f64.ln();
        assert!((log_factorial(20) - exact).abs() / exact < 1e-12);
        assert!((log_factorial(20) - 42.335_616_460_8).abs() < 1e-9);
    }

    #[test]
    fn stirling_branch_matches_table_continuation() {
        let mut acc = log_factorial(TABLE_LEN - 1);
        for k in TABLE_LEN..TABLE_LEN + 50 {
            acc += (k as f64).ln();
            let rel = (log_factorial(k) - acc).abs() / acc;
            assert!(rel < 1e-12, "k={k} rel={rel}");
        }
    }

    #[test]
    fn monotone() {
        for k in 1..2000 {
            assert!(log_factorial(k) >= log_factorial(k - 1));
        }
    }

    #[test]
    fn half_integer_gamma() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        // Γ(3/2) = √π/2, Γ(5/2) = 3√π/4, Γ(7/2) = 15√π/8
        assert!((ln_gamma_half(1) - (sqrt_pi / 2.0).ln()).abs() < 1e-14);
        assert!((ln_gamma_half(3) - (3.0 * sqrt_pi / 4.0).ln()).abs() < 1e-14);
        assert!((ln_gamma_half(5) - (15.0 * sqrt_pi / 8.0).ln()).abs() < 1e-14);
        assert!((ln_gamma_half(4) - 2f64.ln()).abs() < 1e-14);
        for j in 0..400 {
            // Γ(x + 1) = x Γ(x) with x = j/2 + 1
            let lhs = ln_gamma_half(j + 2);
            let rhs = ln_gamma_half(j) + (j as f64 / 2.0 + 1.0).ln();
            assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn binomial() {
        assert!((ln_binomial(5, 2) - 10f64.ln()).abs() < 1e-14);
        assert_eq!(ln_binomial(7, 0), 0.0);
    }
}
