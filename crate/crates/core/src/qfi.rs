//! Classical and quantum Fisher information for one-parameter families of
//! density matrices, the symmetric logarithmic derivative (SLD), and the
//! locally optimal estimator built from it.
//!
//! For a family `xi -> rho_xi` with spectral decomposition
//! `rho = sum_j p_j |j><j|`, the quantum Fisher information splits into a
//! classical part `sum_i (dp_i)^2 / p_i` and a quantum part
//! `2 sum_{i<j} 2 (p_i - p_j)^2 / (p_i + p_j) |<i|d j>|^2`; the cross
//! elements are obtained from `<i|drho|j> / (p_j - p_i)` rather than by
//! differentiating eigenvectors, which avoids phase-continuity problems.
//!
//! The SLD `L` solves `drho = (L rho + rho L) / 2` and its eigenprojectors
//! form the Fisher-optimal measurement. The estimator `xi I + L / J` is
//! locally unbiased and saturates the Cramer-Rao bound `var >= 1/(n J)` per
//! shot. (The bound is occasionally misprinted in the literature as
//! `var <= 1/sqrt(J)`; this crate uses the standard form.)

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{central_diff, default_fd_step, eigh, ComplexMatrix, HermitianMatrix};

/// Eigenvalues at or below this value are treated as exactly zero: their
/// classical Fisher terms are dropped and the SLD is projected onto the
/// complement. Needed because rank-deficient states (the two-detector family)
/// carry an exact zero eigenvalue.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Eigenvalue gap below which a pair counts as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// Largest cross derivative element tolerated on a degenerate pair before the
/// spectral derivative is declared ill-defined.
pub const DEGENERATE_CROSS_TOL: f64 = 1e-8;

type MatrixFn = Arc<dyn Fn(f64) -> Result<HermitianMatrix> + Send + Sync>;

/// A one-parameter family of density matrices `xi -> rho_xi`, with an
/// optional analytic derivative. Without one, a symmetric finite difference
/// with step `1e-5 * max(1, |xi|)` (overridable) is used.
#[derive(Clone)]
pub struct StateFamily {
    dim: usize,
    state_at: MatrixFn,
    derivative_at: Option<MatrixFn>,
    fd_step: Option<f64>,
}

impl StateFamily {
    pub fn new(
        dim: usize,
        state_at: impl Fn(f64) -> Result<HermitianMatrix> + Send + Sync + 'static,
    ) -> Self {
        Self { dim, state_at: Arc::new(state_at), derivative_at: None, fd_step: None }
    }

    pub fn with_derivative(
        dim: usize,
        state_at: impl Fn(f64) -> Result<HermitianMatrix> + Send + Sync + 'static,
        derivative_at: impl Fn(f64) -> Result<HermitianMatrix> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            state_at: Arc::new(state_at),
            derivative_at: Some(Arc::new(derivative_at)),
            fd_step: None,
        }
    }

    /// Drop the analytic derivative, forcing the finite-difference path.
    pub fn without_derivative(mut self) -> Self {
        self.derivative_at = None;
        self
    }

    /// Override the finite-difference step.
    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = Some(h);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn state(&self, xi: f64) -> Result<HermitianMatrix> {
        let rho = (self.state_at)(xi)?;
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch(rho.dim(), self.dim));
        }
        Ok(rho)
    }

    pub fn derivative(&self, xi: f64) -> Result<HermitianMatrix> {
        match &self.derivative_at {
            Some(d) => {
                let m = d(xi)?;
                if m.dim() != self.dim {
                    return Err(Error::DimensionMismatch(m.dim(), self.dim));
                }
                Ok(m)
            }
            None => {
                let h = self.fd_step.unwrap_or_else(|| default_fd_step(xi));
                central_diff(|x| (self.state_at)(x), xi, h)
            }
        }
    }
}

/// Quantum Fisher information split into its classical (eigenvalue) and
/// quantum (eigenbasis rotation) parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiBreakdown {
    pub classical_part: f64,
    pub quantum_part: f64,
    pub total: f64,
}

impl QfiBreakdown {
    pub fn new(classical_part: f64, quantum_part: f64) -> Self {
        Self { classical_part, quantum_part, total: classical_part + quantum_part }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0)
    }
}

/// Symmetric logarithmic derivative evaluated at one parameter point.
#[derive(Debug, Clone)]
pub struct SldOperator {
    pub matrix: HermitianMatrix,
    pub parameter_value: f64,
}

/// A positive-operator valued measure: PSD elements summing to identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<HermitianMatrix>,
}

impl Povm {
    /// Validate PSD-ness of each element (min eigenvalue > -1e-10) and
    /// completeness (sum equals identity within 1e-10 per entry).
    pub fn new(elements: Vec<HermitianMatrix>) -> Result<Self> {
        let dim = match elements.first() {
            Some(e) => e.dim(),
            None => return Err(Error::InvalidPovm("no elements".into())),
        };
        let mut sum = ComplexMatrix::zero(dim)?;
        for (k, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch(e.dim(), dim));
            }
            let eig = eigh(e)?;
            let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
            if min <= -1e-10 {
                return Err(Error::InvalidPovm(format!(
                    "element {k} is not PSD (min eigenvalue {min:.3e})"
                )));
            }
            sum = sum.add(e.as_matrix());
        }
        let id = ComplexMatrix::identity(dim)?;
        let defect = crate::matrix::mat_distance(&sum, &id)?;
        if defect > 1e-10 {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {defect:.3e}"
            )));
        }
        Ok(Self { elements })
    }

    /// Rank-1 projectors onto the columns of an eigenvector matrix.
    pub fn from_eigenvectors(vectors: &ComplexMatrix) -> Result<Self> {
        let n = vectors.dim();
        let mut elements = Vec::with_capacity(n);
        for k in 0..n {
            let m = ComplexMatrix::from_fn(n, |i, j| {
                vectors.get(i, k) * vectors.get(j, k).conj()
            })?;
            elements.push(HermitianMatrix::symmetrized(&m)?);
        }
        Self::new(elements)
    }

    /// Projectors onto the computational basis.
    pub fn computational(dim: usize) -> Result<Self> {
        let id = ComplexMatrix::identity(dim)?;
        Self::from_eigenvectors(&id)
    }

    pub fn elements(&self) -> &[HermitianMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }
}

struct SpectralData {
    probs: Vec<f64>,
    /// derivative in the eigenbasis, `M = V† drho V`
    cross: ComplexMatrix,
    basis: ComplexMatrix,
}

fn spectral_data(family: &StateFamily, xi: f64) -> Result<SpectralData> {
    let rho = family.state(xi)?;
    let drho = family.derivative(xi)?;
    let eig = eigh(&rho)?;

    let trace = rho.trace();
    if (trace - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("trace {trace:.12} is not 1")));
    }
    if let Some(&min) = eig.eigenvalues.last() {
        if min <= -1e-10 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
    }

    let v = eig.eigenvectors;
    let m = v.adjoint().matmul(drho.as_matrix()).matmul(&v);
    Ok(SpectralData { probs: eig.eigenvalues, cross: m, basis: v })
}

/// Quantum Fisher information of `family` at `xi` via the spectral
/// decomposition, split into classical and quantum parts.
///
/// Degenerate eigenvalue pairs contribute zero unless the derivative couples
/// them (cross element above [`DEGENERATE_CROSS_TOL`]), which is an error.
pub fn qfi_spectral(family: &StateFamily, xi: f64) -> Result<QfiBreakdown> {
    let data = spectral_data(family, xi)?;
    let p = &data.probs;
    let m = &data.cross;
    let n = p.len();

    let mut classical = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        if pi > SUPPORT_CUTOFF {
            let dp = m.get(i, i).re;
            classical += dp * dp / pi;
        }
    }

    let mut quantum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            if p[i] + p[j] <= SUPPORT_CUTOFF {
                continue;
            }
            let gap = (p[i] - p[j]).abs();
            let cross = m.get(i, j).norm();
            if gap < DEGENERACY_GAP {
                if cross > DEGENERATE_CROSS_TOL {
                    return Err(Error::DegenerateDerivative { gap, cross });
                }
                continue;
            }
            // <i|d j> = <i|drho|j> / (p_j - p_i)
            let bracket = m.get(i, j) / (p[j] - p[i]);
            quantum += 2.0 * (2.0 * (p[i] - p[j]).powi(2) / (p[i] + p[j])) * bracket.norm_sqr();
        }
    }

    Ok(QfiBreakdown::new(classical, quantum))
}

/// Symmetric logarithmic derivative of `family` at `xi`, assembled in the
/// original matrix basis and projected onto the support of the state.
pub fn sld(family: &StateFamily, xi: f64) -> Result<SldOperator> {
    let data = spectral_data(family, xi)?;
    let p = &data.probs;
    let m = &data.cross;
    let n = p.len();

    let mut l_eig = ComplexMatrix::zero(n)?;
    for i in 0..n {
        if p[i] > SUPPORT_CUTOFF {
            l_eig.set(i, i, Complex64::new(m.get(i, i).re / p[i], 0.0));
        }
        for j in 0..n {
            if i == j || p[i] + p[j] <= SUPPORT_CUTOFF {
                continue;
            }
            let gap = (p[i] - p[j]).abs();
            let cross = m.get(j, i).norm();
            if gap < DEGENERACY_GAP {
                if cross > DEGENERATE_CROSS_TOL {
                    return Err(Error::DegenerateDerivative { gap, cross });
                }
                continue;
            }
            // 2 (p_i - p_j)/(p_i + p_j) <j|d i> |j><i| with
            // <j|d i> = <j|drho|i> / (p_i - p_j)
            let coeff = 2.0 / (p[i] + p[j]);
            l_eig.set(j, i, m.get(j, i) * coeff);
        }
    }

    let v = &data.basis;
    let l = v.matmul(&l_eig).matmul(&v.adjoint());
    Ok(SldOperator { matrix: HermitianMatrix::symmetrized(&l)?, parameter_value: xi })
}

/// Max-entry magnitude of the Lyapunov defect `drho - (L rho + rho L)/2`,
/// restricted to the support of `rho` (components through the zero-eigenvalue
/// subspace are excluded).
pub fn verify_lyapunov(
    l: &SldOperator,
    rho: &HermitianMatrix,
    drho: &HermitianMatrix,
) -> Result<f64> {
    if l.matrix.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(l.matrix.dim(), rho.dim()));
    }
    if drho.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(drho.dim(), rho.dim()));
    }
    let lm = l.matrix.as_matrix();
    let anticomm = lm.matmul(rho.as_matrix()).add(&rho.as_matrix().matmul(lm));
    let residual = drho.as_matrix().sub(&anticomm.scale(Complex64::new(0.5, 0.0)));

    let eig = eigh(rho)?;
    let v = &eig.eigenvectors;
    let r_eig = v.adjoint().matmul(&residual).matmul(v);
    let mut worst = 0.0f64;
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            if eig.eigenvalues[i] > SUPPORT_CUTOFF && eig.eigenvalues[j] > SUPPORT_CUTOFF {
                worst = worst.max(r_eig.get(i, j).norm());
            }
        }
    }
    Ok(worst)
}

/// Classical Fisher information of the outcome distribution of `povm` on the
/// family at `xi`: `sum_x (d p_x)^2 / p_x` with `p_x = Tr[Pi_x rho]`.
pub fn classical_fisher(family: &StateFamily, xi: f64, povm: &Povm) -> Result<f64> {
    if povm.dim() != family.dim() {
        return Err(Error::DimensionMismatch(povm.dim(), family.dim()));
    }
    let rho = family.state(xi)?;
    let drho = family.derivative(xi)?;
    let mut fisher = 0.0;
    for element in povm.elements() {
        let p = element.as_matrix().matmul(rho.as_matrix()).trace().re;
        let dp = element.as_matrix().matmul(drho.as_matrix()).trace().re;
        if p > SUPPORT_CUTOFF {
            fisher += dp * dp / p;
        } else if dp.abs() > 1e-8 {
            return Err(Error::DivergingOutcome { probability: p, derivative: dp });
        }
    }
    Ok(fisher)
}

/// The locally optimal estimator observable `xi I + L / J`.
///
/// Its expectation on `rho_xi` is `xi` and its variance equals `1/J`, so it
/// saturates the Cramer-Rao bound at the working point.
pub fn optimal_estimator(xi: f64, qfi: f64, l: &SldOperator) -> Result<HermitianMatrix> {
    if qfi <= 0.0 {
        return Err(Error::NonPositiveFisher(qfi));
    }
    let id = HermitianMatrix::identity(l.matrix.dim())?;
    Ok(id.scale_real(xi).add(&l.matrix.scale_real(1.0 / qfi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary_family(_: ()) -> StateFamily {
        // rho(xi) = diag(xi, 1 - xi)
        StateFamily::new(2, |xi| HermitianMatrix::diagonal(&[xi, 1.0 - xi]))
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn qfi_binary_family_at_half() {
        let fam = binary_family(());
        let bd = qfi_spectral(&fam, 0.5).unwrap();
        assert!(rel_err(bd.classical_part, 4.0) < 1e-9);
        assert!(bd.quantum_part.abs() < 1e-12);
        assert!(rel_err(bd.total, 4.0) < 1e-9);
    }

    #[test]
    fn qfi_thermal_qubit() {
        // rho(T) = diag(1 - p, p), p = e^{-1/T} / (1 + e^{-1/T})
        let fam = StateFamily::new(2, |t: f64| {
            let p = (-1.0 / t).exp() / (1.0 + (-1.0 / t).exp());
            HermitianMatrix::diagonal(&[1.0 - p, p])
        });
        let bd = qfi_spectral(&fam, 1.0).unwrap();
        // independent oracle: J = p(1-p)/T^4 from dp/dT = p(1-p)/T^2
        let p = 1.0 / (1.0 + 1.0f64.exp());
        let oracle = p * (1.0 - p);
        assert!(rel_err(bd.total, oracle) < 1e-5); // finite-difference path
        assert!(rel_err(bd.total, 0.19661193324148185) < 1e-5);
        assert!(bd.quantum_part.abs() < 1e-12);

        // with the analytic derivative the match is tight
        let fam = StateFamily::with_derivative(
            2,
            |t: f64| {
                let p = (-1.0 / t).exp() / (1.0 + (-1.0 / t).exp());
                HermitianMatrix::diagonal(&[1.0 - p, p])
            },
            |t: f64| {
                let p = (-1.0 / t).exp() / (1.0 + (-1.0 / t).exp());
                let dp = p * (1.0 - p) / (t * t);
                HermitianMatrix::diagonal(&[-dp, dp])
            },
        );
        let bd = qfi_spectral(&fam, 1.0).unwrap();
        assert!(rel_err(bd.total, 0.19661193324148185) < 1e-12);
    }

    #[test]
    fn qfi_constant_family_is_zero() {
        let fam = StateFamily::new(2, |_| HermitianMatrix::diagonal(&[0.25, 0.75]));
        let bd = qfi_spectral(&fam, 1.3).unwrap();
        assert!(bd.total.abs() < 1e-15);
    }

    #[test]
    fn fd_and_analytic_derivatives_agree() {
        let state = |xi: f64| {
            let c = xi.cos() * 0.25;
            HermitianMatrix::from_rows(&[
                vec![Complex64::new(0.5 + 0.3 * xi.sin(), 0.0), Complex64::new(c, 0.0)],
                vec![Complex64::new(c, 0.0), Complex64::new(0.5 - 0.3 * xi.sin(), 0.0)],
            ])
        };
        let deriv = |xi: f64| {
            let dc = -xi.sin() * 0.25;
            HermitianMatrix::from_rows(&[
                vec![Complex64::new(0.3 * xi.cos(), 0.0), Complex64::new(dc, 0.0)],
                vec![Complex64::new(dc, 0.0), Complex64::new(-0.3 * xi.cos(), 0.0)],
            ])
        };
        let analytic = StateFamily::with_derivative(2, state, deriv);
        let fd = StateFamily::new(2, state).with_fd_step(1e-5);
        let a = qfi_spectral(&analytic, 0.7).unwrap();
        let b = qfi_spectral(&fd, 0.7).unwrap();
        assert!(rel_err(a.total, b.total) < 1e-5);
    }

    #[test]
    fn sld_binary_family() {
        let fam = binary_family(());
        let l = sld(&fam, 0.25).unwrap();
        assert!((l.matrix.get(0, 0).re - 4.0).abs() < 1e-9);
        assert!((l.matrix.get(1, 1).re + 4.0 / 3.0).abs() < 1e-9);
        assert!(l.matrix.get(0, 1).norm() < 1e-12);
    }

    #[test]
    fn sld_constant_family_is_zero() {
        let fam = StateFamily::new(2, |_| HermitianMatrix::diagonal(&[0.25, 0.75]));
        let l = sld(&fam, 2.0).unwrap();
        assert!(l.matrix.as_matrix().max_abs_entry() < 1e-12);
    }

    #[test]
    fn lyapunov_residual_exact_and_perturbed() {
        let fam = binary_family(());
        let xi = 0.25;
        let rho = fam.state(xi).unwrap();
        let drho = fam.derivative(xi).unwrap();
        let l = sld(&fam, xi).unwrap();
        assert!(verify_lyapunov(&l, &rho, &drho).unwrap() < 1e-14);

        // add 0.1 to one diagonal entry: defect is 0.1 * rho_00 = 0.025
        let mut bad = l.matrix.as_matrix().clone();
        bad.set(0, 0, bad.get(0, 0) + Complex64::new(0.1, 0.0));
        let bad = SldOperator { matrix: HermitianMatrix::new(bad).unwrap(), parameter_value: xi };
        let res = verify_lyapunov(&bad, &rho, &drho).unwrap();
        assert!((res - 0.025).abs() < 1e-12);
        assert!(res > 1e-3);
    }

    #[test]
    fn lyapunov_zero_case() {
        let rho = HermitianMatrix::diagonal(&[0.5, 0.5]).unwrap();
        let zero = HermitianMatrix::zero(2).unwrap();
        let l = SldOperator { matrix: zero.clone(), parameter_value: 0.0 };
        assert_eq!(verify_lyapunov(&l, &rho, &zero).unwrap(), 0.0);
    }

    #[test]
    fn lyapunov_dimension_mismatch() {
        let rho = HermitianMatrix::diagonal(&[0.5, 0.25, 0.25]).unwrap();
        let zero2 = HermitianMatrix::zero(2).unwrap();
        let l = SldOperator { matrix: zero2.clone(), parameter_value: 0.0 };
        assert!(verify_lyapunov(&l, &rho, &zero2).is_err());
    }

    #[test]
    fn classical_fisher_computational_on_diagonal_family() {
        let fam = binary_family(());
        let povm = Povm::computational(2).unwrap();
        let cf = classical_fisher(&fam, 0.5, &povm).unwrap();
        assert!(rel_err(cf, 4.0) < 1e-9);
        let q = qfi_spectral(&fam, 0.5).unwrap();
        assert!(rel_err(cf, q.total) < 1e-9);
    }

    #[test]
    fn classical_fisher_trivial_povm_is_zero() {
        let fam = binary_family(());
        let povm = Povm::new(vec![HermitianMatrix::identity(2).unwrap()]).unwrap();
        assert!(classical_fisher(&fam, 0.3, &povm).unwrap().abs() < 1e-15);
    }

    #[test]
    fn povm_rejects_bad_sums_and_non_psd() {
        let half = HermitianMatrix::diagonal(&[0.5, 0.5]).unwrap();
        assert!(Povm::new(vec![half.clone()]).is_err());
        let neg = HermitianMatrix::diagonal(&[1.5, 1.0]).unwrap();
        let comp = HermitianMatrix::diagonal(&[-0.5, 0.0]).unwrap();
        assert!(Povm::new(vec![neg, comp]).is_err());
    }

    #[test]
    fn estimator_direct_substitution() {
        let l = SldOperator {
            matrix: HermitianMatrix::diagonal(&[4.0, -4.0 / 3.0]).unwrap(),
            parameter_value: 1.0,
        };
        let e = optimal_estimator(1.0, 4.0, &l).unwrap();
        assert!((e.get(0, 0).re - 2.0).abs() < 1e-15);
        assert!((e.get(1, 1).re - 2.0 / 3.0).abs() < 1e-15);
        assert!(optimal_estimator(1.0, 0.0, &l).is_err());
    }

    #[test]
    fn estimator_is_locally_unbiased_on_binary_family() {
        let fam = binary_family(());
        let xi = 0.25;
        let bd = qfi_spectral(&fam, xi).unwrap();
        let l = sld(&fam, xi).unwrap();
        let e = optimal_estimator(xi, bd.total, &l).unwrap();
        let rho = fam.state(xi).unwrap();
        let mean = rho.as_matrix().matmul(e.as_matrix()).trace().re;
        assert!((mean - xi).abs() < 1e-10);
        let e2 = e.as_matrix().matmul(e.as_matrix());
        let second = rho.as_matrix().matmul(&e2).trace().re;
        let var = second - mean * mean;
        assert!(rel_err(var, 1.0 / bd.total) < 1e-9);
    }

    #[test]
    fn degenerate_pair_with_coupling_derivative_errors() {
        // rho = I/2 for every xi, but the derivative couples the degenerate pair
        let fam = StateFamily::with_derivative(
            2,
            |_| HermitianMatrix::diagonal(&[0.5, 0.5]),
            |_| {
                HermitianMatrix::from_rows(&[
                    vec![Complex64::new(0.0, 0.0), Complex64::new(0.1, 0.0)],
                    vec![Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.0)],
                ])
            },
        );
        assert!(matches!(
            qfi_spectral(&fam, 1.0),
            Err(Error::DegenerateDerivative { .. })
        ));
    }
}
