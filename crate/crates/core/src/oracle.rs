//! Brute-force verification path built from dense operator matrices.
//!
//! Nothing here uses the closed-form series: states come from matrix
//! exponentials acting on basis vectors, and every expectation is a
//! matrix–vector product in the truncated space.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::phase::{FluctuationReport, Parameter, Undefined};
use crate::states::{OperationKind, StateSpec};

pub type Matrix = DMatrix<Complex64>;

pub const MAX_ORACLE_DIM: usize = 256;

/// Exponential residual accepted by [`exp_anti_hermitian`].
pub const EXP_RESIDUAL: f64 = 1e-10;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    entries: Matrix,
    label: String,
}

impl OperatorMatrix {
    pub fn new(entries: Matrix, label: impl Into<String>) -> Self {
        assert!(entries.is_square(), "operator matrices are square");
        Self {
            entries,
            label: label.into(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(Matrix::identity(dim, dim), "I")
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.entries.adjoint(), format!("({})^†", self.label))
    }

    pub fn product(&self, rhs: &OperatorMatrix) -> Self {
        Self::new(&self.entries * &rhs.entries, format!("{}·{}", self.label, rhs.label))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Matrix::identity(self.dim(), self.dim());
        for _ in 0..k {
            out = &out * &self.entries;
        }
        Self::new(out, format!("({})^{k}", self.label))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if !(2..=MAX_ORACLE_DIM).contains(&dim) {
        return Err(Error::InvalidArgument(format!(
            "oracle dimension {dim} outside [2, {MAX_ORACLE_DIM}]"
        )));
    }
    Ok(())
}

fn lowering(dim: usize) -> Matrix {
    let mut a = Matrix::zeros(dim, dim);
    for k in 1..dim {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

/// `â` with `√k` on the `(k−1, k)` superdiagonal, and `â†`.
pub fn ladder_matrices(dim: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    check_dim(dim)?;
    let a = lowering(dim);
    let ad = a.adjoint();
    Ok((OperatorMatrix::new(a, "a"), OperatorMatrix::new(ad, "a_dagger")))
}

pub fn number_matrix(dim: usize) -> Result<OperatorMatrix> {
    let (a, ad) = ladder_matrices(dim)?;
    Ok(OperatorMatrix::new(ad.entries * a.entries, "N"))
}

fn norm_fro(m: &Matrix) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Upper bound on the spectral norm: `‖M‖₂ ≤ √(‖M‖₁ ‖M‖_∞)`.
fn norm_bound(m: &Matrix) -> f64 {
    let col = m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let row = m.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    (col * row).sqrt()
}

/// `exp(G)` for anti-Hermitian `G` by scaling and squaring a Taylor series.
///
/// The a priori Taylor remainder (amplified by the squarings) and the
/// a posteriori unitarity defect must both stay below [`EXP_RESIDUAL`].
pub fn exp_anti_hermitian(generator: &Matrix) -> Result<Matrix> {
    let dim = generator.nrows();
    let norm = norm_bound(generator);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = 2f64.powi(squarings as i32);
    let scaled = generator / Complex64::new(scale, 0.0);
    let b = norm / scale;

    let mut sum = Matrix::identity(dim, dim);
    let mut term = Matrix::identity(dim, dim);
    let mut remainder = f64::INFINITY;
    for k in 1..=60 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
        // tail Σ_{j>k} b^j/j! ≤ b^{k+1}/(k+1)! · 1/(1 − b/(k+2))
        let next = norm_bound(&term) * b / (k as f64 + 1.0);
        remainder = next / (1.0 - b / (k as f64 + 2.0));
        if remainder < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    let bound = remainder * scale;
    let defect = norm_fro(&(sum.adjoint() * &sum - Matrix::identity(dim, dim)));
    if bound > EXP_RESIDUAL || defect > EXP_RESIDUAL {
        return Err(Error::ExponentialNotConverged {
            bound: bound.max(defect),
        });
    }
    Ok(sum)
}

/// `exp(G) v` for anti-Hermitian `G` without forming the exponential.
///
/// Splits into `m` steps with `‖G‖₂ / m ≤ 1` and sums each step's Taylor
/// series on the vector; the bound is `m` times the per-step remainder.
pub fn exp_anti_hermitian_apply(generator: &Matrix, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    let norm = norm_bound(generator);
    let steps = norm.ceil().max(1.0) as usize;
    let scaled = generator / Complex64::new(steps as f64, 0.0);
    let b = norm / steps as f64;
    let mut out = v.clone();
    let mut bound = 0.0f64;
    for _ in 0..steps {
        let mut term = out.clone();
        let mut sum = out.clone();
        let mut remainder = f64::INFINITY;
        for k in 1..=40 {
            term = &scaled * term / Complex64::new(k as f64, 0.0);
            sum += &term;
            let next = term.norm() * b / (k as f64 + 1.0);
            remainder = next / (1.0 - b / (k as f64 + 2.0));
            if remainder < 1e-18 * v.norm().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        bound += remainder;
        out = sum;
    }
    let defect = (out.norm() - v.norm()).abs();
    if bound > EXP_RESIDUAL || defect > EXP_RESIDUAL {
        return Err(Error::ExponentialNotConverged {
            bound: bound.max(defect),
        });
    }
    Ok(out)
}

/// `D(α) = exp(α â† − α* â)` in a `dim`-dimensional basis.
pub fn displacement_matrix(alpha: Complex64, dim: usize) -> Result<OperatorMatrix> {
    check_dim(dim)?;
    let mag = alpha.norm();
    if (dim as f64) < mag * mag + 8.0 * mag + 8.0 {
        return Err(Error::InvalidArgument(format!(
            "dimension {dim} too small for |alpha| = {mag}"
        )));
    }
    let (a, ad) = ladder_matrices(dim)?;
    let generator = ad.entries * alpha - a.entries * alpha.conj();
    Ok(OperatorMatrix::new(exp_anti_hermitian(&generator)?, "D(alpha)"))
}

fn to_fock(v: &DVector<Complex64>) -> Result<FockVector> {
    FockVector::from_amplitudes(v.iter().copied().collect()).map(FockVector::with_canonical_phase)
}

fn to_dvector(state: &FockVector, dim: usize) -> Result<DVector<Complex64>> {
    if dim < state.dim() {
        return Err(Error::DimensionMismatch {
            op_dim: dim,
            state_dim: state.dim(),
        });
    }
    Ok(DVector::from_iterator(dim, (0..dim).map(|k| state.amplitude(k))))
}

fn unnormalized(spec: &StateSpec, dim: usize) -> Result<DVector<Complex64>> {
    spec.validate()?;
    if spec.fock_n >= dim {
        return Err(Error::InvalidTruncation {
            dim,
            n: spec.fock_n,
        });
    }
    let d = displacement_matrix(spec.alpha(), dim)?;
    let (a, ad) = ladder_matrices(dim)?;
    let op = match spec.kind {
        OperationKind::Add => ad.pow(spec.count),
        OperationKind::Subtract => a.pow(spec.count),
    };
    Ok(op.entries * d.entries.column(spec.fock_n))
}

/// `‖â^{†u} D(α) e_n‖²` or `‖â^{v} D(α) e_n‖²`; the normalization constant
/// is its inverse square root.
pub fn oracle_norm_sq(spec: &StateSpec, dim: usize) -> Result<f64> {
    unnormalized(spec, dim).map(|v| v.norm_squared())
}

/// `â^{†u} D(α) e_n` or `â^{v} D(α) e_n`, normalized, from matrix products.
pub fn oracle_state(spec: &StateSpec, dim: usize) -> Result<FockVector> {
    let v = unnormalized(spec, dim)?;
    if v.norm_squared() <= crate::fock::ZERO_NORM_THRESHOLD {
        return Err(Error::ZeroState {
            norm_sq: v.norm_squared(),
        });
    }
    to_fock(&v)
}

/// `â^{†j} â^{k}` as a product of truncated matrices.
pub fn ladder_power_matrix(j: usize, k: usize, dim: usize) -> Result<OperatorMatrix> {
    let (a, ad) = ladder_matrices(dim)?;
    Ok(ad.pow(j).product(&a.pow(k)))
}

/// `⟨ψ|Op|ψ⟩` with the state zero-padded to the operator dimension.
pub fn oracle_expectation(state: &FockVector, op: &OperatorMatrix) -> Result<Complex64> {
    let v = to_dvector(state, op.dim())?;
    Ok(v.dotc(&(&op.entries * &v)))
}

/// Truncated phase state `Σ_{k<dim} e^{ikθ}|k⟩`.
pub fn phase_state(theta: f64, dim: usize) -> DVector<Complex64> {
    DVector::from_iterator(dim, (0..dim).map(|k| Complex64::from_polar(1.0, k as f64 * theta)))
}

/// `(1/2π)|⟨θ|ψ⟩|²` by projection on an explicit phase-state vector.
pub fn oracle_phase_density(state: &FockVector, theta: f64) -> f64 {
    let v = DVector::from_column_slice(state.amplitudes());
    phase_state(theta, state.dim()).dotc(&v).norm_sqr() / (2.0 * PI)
}

/// `1 − |⟨E⟩|²` with the shift `E = Σ_k |k⟩⟨k+1|`.
pub fn oracle_dispersion(state: &FockVector) -> Result<f64> {
    let dim = state.dim();
    let mut e = Matrix::zeros(dim, dim);
    for k in 0..dim - 1 {
        e[(k, k + 1)] = one();
    }
    let shift = oracle_expectation(state, &OperatorMatrix::new(e, "E"))?;
    Ok(1.0 - shift.norm_sqr())
}

/// Fluctuation parameters from explicit sine and cosine matrices.
pub fn oracle_fluctuation(state: &FockVector) -> Result<FluctuationReport> {
    let dim = state.dim();
    let n = number_matrix(dim)?;
    let mean = oracle_expectation(state, &n)?.re;
    let second = oracle_expectation(state, &n.pow(2))?.re;
    let var_n = second - mean * mean;

    let scale = Complex64::new(1.0 / (2.0 * (mean + 0.5).sqrt()), 0.0);
    let i = Complex64::new(0.0, 1.0);
    // the truncated a a† misses its last diagonal entry; pad by one so the
    // squared operators are exact on the state's support
    let (ap, adp) = ladder_matrices(dim + 1)?;
    let sin = OperatorMatrix::new((&ap.entries - &adp.entries) * (scale / i), "S");
    let cos = OperatorMatrix::new((&ap.entries + &adp.entries) * scale, "C");
    let padded = state.padded(dim + 1);
    let sin_mean = oracle_expectation(&padded, &sin)?.re;
    let cos_mean = oracle_expectation(&padded, &cos)?.re;
    let sin_var = oracle_expectation(&padded, &sin.pow(2))?.re - sin_mean * sin_mean;
    let cos_var = oracle_expectation(&padded, &cos.pow(2))?.re - cos_mean * cos_mean;

    let reference = sin_mean * sin_mean + cos_mean * cos_mean;
    let s = var_n * sin_var;
    let (u, q) = if reference <= f64::MIN_POSITIVE {
        let undefined = Parameter::Undefined(Undefined::NoPhaseReference);
        (undefined, undefined)
    } else {
        let q = if cos_mean.abs() <= 1e-12 * reference.sqrt() {
            Parameter::Undefined(Undefined::VanishingCosine)
        } else {
            Parameter::Defined(s / (cos_mean * cos_mean))
        };
        (Parameter::Defined(var_n * (sin_var + cos_var) / reference), q)
    };
    Ok(FluctuationReport {
        mean_n: mean,
        var_n,
        sin_mean,
        cos_mean,
        sin_var,
        cos_var,
        u,
        s: Parameter::Defined(s),
        q,
    })
}

/// Two-mode angular momentum operators on `C^dim ⊗ C^dim` (mode `a` major).
#[derive(Clone, Debug)]
pub struct TwoModeOperators {
    pub dim: usize,
    pub jx: OperatorMatrix,
    pub jy: OperatorMatrix,
    pub jz: OperatorMatrix,
}

pub fn two_mode_operators(dim: usize) -> Result<TwoModeOperators> {
    check_dim(dim)?;
    if dim * dim > MAX_ORACLE_DIM {
        return Err(Error::InvalidArgument(format!(
            "two-mode space {dim}² exceeds {MAX_ORACLE_DIM}"
        )));
    }
    let low = lowering(dim);
    let id = Matrix::identity(dim, dim);
    let a = low.kronecker(&id);
    let b = id.kronecker(&low);
    let (ad, bd) = (a.adjoint(), b.adjoint());
    let half = Complex64::new(0.5, 0.0);
    let jx = (&ad * &b + &bd * &a) * half;
    let jy = (&bd * &a - &ad * &b) * Complex64::new(0.0, 0.5);
    let jz = (&ad * &a - &bd * &b) * half;
    Ok(TwoModeOperators {
        dim,
        jx: OperatorMatrix::new(jx, "Jx"),
        jy: OperatorMatrix::new(jy, "Jy"),
        jz: OperatorMatrix::new(jz, "Jz"),
    })
}

/// Output moments of the interferometer for input `|ψ⟩ ⊗ |0⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleInterferometer {
    pub jz_mean: f64,
    pub jz_var: f64,
    /// `d⟨J_z⟩/dφ = −⟨J_x⟩_out`.
    pub slope: f64,
}

/// Evolves `|ψ⟩ ⊗ |0⟩` with `exp(−iφJ_y)` and measures `J_z` at the output.
pub fn oracle_interferometer(state: &FockVector, phi: f64, ops: &TwoModeOperators) -> Result<OracleInterferometer> {
    let dim = ops.dim;
    if state.dim() > dim {
        return Err(Error::DimensionMismatch {
            op_dim: dim,
            state_dim: state.dim(),
        });
    }
    let mut input = DVector::from_element(dim * dim, zero());
    for k in 0..state.dim() {
        input[k * dim] = state.amplitude(k);
    }
    let rotation = exp_anti_hermitian(&(ops.jy.entries() * Complex64::new(0.0, -phi)))?;
    let out = rotation * input;
    let expect = |m: &Matrix| out.dotc(&(m * &out)).re;
    let jz_mean = expect(ops.jz.entries());
    let jz2 = expect(&(ops.jz.entries() * ops.jz.entries()));
    Ok(OracleInterferometer {
        jz_mean,
        jz_var: jz2 - jz_mean * jz_mean,
        slope: -expect(ops.jx.entries()),
    })
}

/// Sectors lighter than this are skipped; their contribution to any
/// second moment is below `weight · dim²`.
pub const SECTOR_WEIGHT_FLOOR: f64 = 1e-24;

/// Sector-by-sector version of [`oracle_interferometer`].
///
/// `J_y` conserves the total photon number, so `|k⟩ ⊗ |0⟩` evolves inside
/// the `(k+1)`-dimensional block spanned by `|j, k−j⟩`. Each block is a dense
/// Schwinger representation exponentiated on its own, which keeps the
/// matrices small when the state has support far beyond what a full tensor
/// product could hold.
pub fn oracle_interferometer_sectors(state: &FockVector, phi: f64) -> Result<OracleInterferometer> {
    let mut jz_mean = 0.0;
    let mut jz2 = 0.0;
    let mut jx = 0.0;
    for total in 0..state.dim() {
        let weight = state.amplitude(total).norm_sqr();
        if total == 0 || weight < SECTOR_WEIGHT_FLOOR {
            continue;
        }
        let size = total + 1;
        if size > MAX_ORACLE_DIM {
            return Err(Error::InvalidArgument(format!("photon sector {total} exceeds oracle size")));
        }
        // basis index j = photons in mode a
        let mut raise = Matrix::zeros(size, size);
        for j in 0..total {
            raise[(j + 1, j)] = Complex64::new((((j + 1) * (total - j)) as f64).sqrt(), 0.0);
        }
        let lower = raise.adjoint();
        let jx_m = (&raise + &lower) * Complex64::new(0.5, 0.0);
        let jy_m = (&lower - &raise) * Complex64::new(0.0, 0.5);
        let jz_m = Matrix::from_diagonal(&DVector::from_iterator(
            size,
            (0..size).map(|j| Complex64::new(j as f64 - 0.5 * total as f64, 0.0)),
        ));
        let mut start = DVector::from_element(size, zero());
        start[total] = one();
        let out = exp_anti_hermitian_apply(&(jy_m * Complex64::new(0.0, -phi)), &start)?;
        let expect = |m: &Matrix| out.dotc(&(m * &out)).re;
        jz_mean += weight * expect(&jz_m);
        jz2 += weight * expect(&(&jz_m * &jz_m));
        jx += weight * expect(&jx_m);
    }
    Ok(OracleInterferometer {
        jz_mean,
        jz_var: jz2 - jz_mean * jz_mean,
        slope: -jx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{displaced_fock_amplitudes, normalize};
    use approx::assert_abs_diff_eq;

    #[test]
    fn ladder_structure() {
        let (a, ad) = ladder_matrices(2).unwrap();
        assert_eq!(a.entries()[(0, 1)], one());
        assert_eq!(a.entries()[(0, 0)], zero());
        assert_eq!(a.entries()[(1, 0)], zero());
        assert_eq!(ad.entries()[(1, 0)], one());
        let (a, _) = ladder_matrices(3).unwrap();
        assert_abs_diff_eq!(a.entries()[(1, 2)].re, 2f64.sqrt(), epsilon = 1e-16);
    }

    #[test]
    fn commutator_is_identity_below_top() {
        let dim = 12;
        let (a, ad) = ladder_matrices(dim).unwrap();
        let comm = a.entries() * ad.entries() - ad.entries() * a.entries();
        for i in 0..dim - 1 {
            for j in 0..dim - 1 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(comm[(i, j)].re, expected, epsilon = 1e-12);
                assert_abs_diff_eq!(comm[(i, j)].im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn displacement_examples() {
        let d = displacement_matrix(zero(), 8).unwrap();
        assert!(norm_fro(&(d.entries() - Matrix::identity(8, 8))) < 1e-15);

        let d = displacement_matrix(one(), 32).unwrap();
        assert_abs_diff_eq!(d.entries()[(0, 0)].re, (-0.5f64).exp(), epsilon = 1e-10);
        let series = displaced_fock_amplitudes(1, one(), 32).unwrap();
        for k in 0..20 {
            assert_abs_diff_eq!((d.entries()[(k, 1)] - series.amplitudes()[k]).norm(), 0.0, epsilon = 1e-8);
        }
        assert!(displacement_matrix(Complex64::new(3.0, 0.0), 16).is_err());
    }

    #[test]
    fn vector_exponential_matches_matrix() {
        let (a, ad) = ladder_matrices(24).unwrap();
        let alpha = Complex64::from_polar(1.2, -0.4);
        let g = ad.entries() * alpha - a.entries() * alpha.conj();
        let full = exp_anti_hermitian(&g).unwrap();
        let mut v = DVector::from_element(24, zero());
        v[2] = one();
        let applied = exp_anti_hermitian_apply(&g, &v).unwrap();
        assert!((full.column(2) - applied).norm() < 1e-12);
    }

    #[test]
    fn displacement_inverse() {
        let alpha = Complex64::from_polar(1.5, 0.7);
        let dim = 64;
        let dp = displacement_matrix(alpha, dim).unwrap();
        let dm = displacement_matrix(-alpha, dim).unwrap();
        let prod = dp.entries() * dm.entries();
        let low = dim - (4.0 * alpha.norm()).ceil() as usize;
        for i in 0..low {
            for j in 0..low {
                let expected = if i == j { one() } else { zero() };
                assert!((prod[(i, j)] - expected).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn oracle_states_and_expectations() {
        let coh = oracle_state(&StateSpec::padfs(0, 0, 1.0, 0.0), 40).unwrap();
        let (a, _) = ladder_matrices(40).unwrap();
        let mean_a = oracle_expectation(&coh, &a).unwrap();
        assert_abs_diff_eq!(mean_a.re, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(mean_a.im, 0.0, epsilon = 1e-10);

        let one_state = FockVector::number_state(1, 6).unwrap();
        let n = number_matrix(6).unwrap();
        assert_abs_diff_eq!(oracle_expectation(&one_state, &n).unwrap().re, 1.0, epsilon = 1e-15);

        let small = number_matrix(4).unwrap();
        assert!(matches!(oracle_expectation(&coh, &small), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn oracle_zero_state() {
        assert!(matches!(
            oracle_state(&StateSpec::psdfs(1, 0, 0.0, 0.0), 16),
            Err(Error::ZeroState { .. })
        ));
    }

    #[test]
    fn phase_density_projection_of_fock_state() {
        let s = FockVector::number_state(2, 8).unwrap();
        assert_abs_diff_eq!(oracle_phase_density(&s, 0.4), 1.0 / (2.0 * PI), epsilon = 1e-15);
    }

    #[test]
    fn interferometer_rotation_convention() {
        // |1⟩⊗|0⟩: ⟨Jz⟩_out = cos φ / 2, variance sin²φ / 4
        let ops = two_mode_operators(4).unwrap();
        let s = FockVector::number_state(1, 4).unwrap();
        let phi = 0.7;
        let out = oracle_interferometer(&s, phi, &ops).unwrap();
        assert_abs_diff_eq!(out.jz_mean, phi.cos() / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.jz_var, phi.sin().powi(2) / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.slope, -phi.sin() / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn series_state_matches_matrix_state() {
        let spec = StateSpec::padfs(1, 0, 1.0, 0.0);
        let oracle = oracle_state(&spec, 48).unwrap();
        let raw = displaced_fock_amplitudes(0, one(), 48).unwrap();
        let raw = crate::fock::apply_creation(&raw, 1, 1e-12).unwrap();
        let series = normalize(raw).unwrap().0;
        assert!(oracle.fidelity(&series) >= 1.0 - 1e-8);
    }

    #[test]
    fn sector_oracle_matches_tensor_product() {
        let spec = StateSpec::psdfs(1, 1, 0.4, 0.3);
        let full = oracle_state(&spec, 12).unwrap();
        let ops = two_mode_operators(12).unwrap();
        for phi in [0.3, 1.2, 2.5] {
            let a = oracle_interferometer(&full, phi, &ops).unwrap();
            let b = oracle_interferometer_sectors(&full, phi).unwrap();
            assert_abs_diff_eq!(a.jz_mean, b.jz_mean, epsilon = 1e-10);
            assert_abs_diff_eq!(a.jz_var, b.jz_var, epsilon = 1e-10);
            assert_abs_diff_eq!(a.slope, b.slope, epsilon = 1e-10);
        }
    }

    #[test]
    fn ladder_power_against_series() {
        let spec = StateSpec::psdfs(1, 1, 1.0, 0.0);
        let s = crate::states::build(&spec).unwrap();
        let m = ladder_power_matrix(1, 1, s.dim() + 1).unwrap();
        let oracle = oracle_expectation(&s.padded(s.dim() + 1), &m).unwrap();
        let direct = crate::fock::ladder_moment(&s, 1, 1);
        assert!((oracle - direct).norm() < 1e-8);
    }
}
