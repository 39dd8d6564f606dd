//! Small complex linear algebra: dense matrices of dimension 2 to 4,
//! Hermitian eigendecomposition by cyclic Jacobi rotations, and
//! finite-difference derivatives of matrix-valued functions.
//!
//! Everything here is dimension-checked at construction and immutable
//! afterwards, so values can be shared freely across threads.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for the Hermiticity check on construction.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Off-diagonal Frobenius norm (of the max-entry-normalized matrix) at which
/// the Jacobi iteration is considered converged.
pub const EIGH_OFFDIAG_TOL: f64 = 1e-14;

/// Hard cap on the number of Jacobi sweeps.
pub const EIGH_MAX_SWEEPS: usize = 100;

/// Eigenvalue gap below which a cluster is treated as degenerate and its
/// eigenvectors re-orthonormalized.
pub const DEGENERATE_CLUSTER_GAP: f64 = 1e-10;

/// Dense square complex matrix, dimension 2 to 4, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    fn check_dim(dim: usize) -> Result<()> {
        if (2..=4).contains(&dim) {
            Ok(())
        } else {
            Err(Error::UnsupportedDimension(dim))
        }
    }

    /// Zero matrix of the given dimension.
    pub fn zero(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] })
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zero(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Build from a row-major grid of entries. Rejects ragged grids,
    /// unsupported dimensions and non-finite entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        Self::check_dim(dim)?;
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::BadShape);
            }
            for (j, &z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry(i, j));
                }
                data.push(z);
            }
        }
        Ok(Self { dim, data })
    }

    /// Build from a function of the index pair. Entries must be finite.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::check_dim(dim)?;
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = f(i, j);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry(i, j));
                }
                data.push(z);
            }
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.dim + j] = z;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self { dim: self.dim, data: vec![Complex64::new(0.0, 0.0); self.dim * self.dim] };
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    /// Entry-wise complex conjugate (no transpose).
    pub fn conjugate(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions must match");
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions must match");
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions must match");
        let n = self.dim;
        let mut out = Self { dim: n, data: vec![Complex64::new(0.0, 0.0); n * n] };
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Max-entry distance between two matrices of equal dimension.
///
/// Nonnegative, and zero exactly when the matrices are equal.
pub fn mat_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let mut d = 0.0f64;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            d = d.max((a.get(i, j) - b.get(i, j)).norm());
        }
    }
    Ok(d)
}

fn max_asymmetry(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        worst = worst.max(m.get(i, i).im.abs());
        for j in (i + 1)..n {
            worst = worst.max((m.get(i, j) - m.get(j, i).conj()).norm());
        }
    }
    worst
}

/// A complex matrix whose Hermiticity has been verified (or restored) on
/// construction: `entry(i, j) == conj(entry(j, i))` within [`HERMITICITY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: ComplexMatrix,
}

impl HermitianMatrix {
    /// Validate Hermiticity of `m` and wrap it.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let asym = max_asymmetry(&m);
        if asym > HERMITICITY_TOL {
            return Err(Error::NotHermitian { max_asymmetry: asym });
        }
        Ok(Self { m })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(ComplexMatrix::from_rows(rows)?)
    }

    /// Real diagonal matrix.
    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let dim = entries.len();
        let m = ComplexMatrix::from_fn(dim, |i, j| {
            if i == j { Complex64::new(entries[i], 0.0) } else { Complex64::new(0.0, 0.0) }
        })?;
        Ok(Self { m })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Ok(Self { m: ComplexMatrix::identity(dim)? })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Ok(Self { m: ComplexMatrix::zero(dim)? })
    }

    /// Replace `m` by its Hermitian part `(m + m†)/2` and wrap it.
    ///
    /// Used to clean up results of arithmetic that is Hermitian in exact
    /// arithmetic but carries rounding noise.
    pub fn symmetrized(m: &ComplexMatrix) -> Result<Self> {
        let h = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0));
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                let z = h.get(i, j);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFiniteEntry(i, j));
                }
            }
        }
        // exact by construction, no re-check needed
        Ok(Self { m: h })
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m.get(i, j)
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    /// Trace, which is real for a Hermitian matrix.
    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { m: self.m.add(&other.m) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { m: self.m.sub(&other.m) }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { m: self.m.scale(Complex64::new(s, 0.0)) }
    }

    /// Real expectation value `<v|H|v>`.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let n = self.dim();
        assert_eq!(v.len(), n);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += v[i].conj() * self.get(i, j) * v[j];
            }
        }
        acc.re
    }
}

/// Eigenvalues and orthonormal eigenvectors of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order; column `k` of `eigenvectors`
/// belongs to `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Column `k` as an owned vector.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.eigenvectors.get(i, k)).collect()
    }

    /// Rebuild `V diag(lambda) V†`; used by tests and validation code.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += v.get(i, k) * self.eigenvalues[k] * v.get(j, k).conj();
            }
            acc
        })
        .expect("reconstruction of a finite decomposition is finite")
    }
}

fn offdiag_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Each rotation annihilates one off-diagonal pair; the iteration stops when
/// the off-diagonal Frobenius norm of the max-entry-normalized matrix drops
/// below [`EIGH_OFFDIAG_TOL`], and fails after [`EIGH_MAX_SWEEPS`] sweeps.
/// Output is deterministic: ties in the descending eigenvalue sort are broken
/// by the complex argument of the first differing eigenvector component, and
/// each eigenvector is rephased so its largest-magnitude component is real
/// and positive.
pub fn eigh(h: &HermitianMatrix) -> Result<EigenDecomposition> {
    let asym = max_asymmetry(h.as_matrix());
    if asym > HERMITICITY_TOL {
        return Err(Error::NotHermitian { max_asymmetry: asym });
    }
    let n = h.dim();

    // Normalize by the largest entry so the convergence threshold is
    // scale-invariant; eigenvalues are rescaled on the way out.
    let scale = h.as_matrix().max_abs_entry();
    if scale == 0.0 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![0.0; n],
            eigenvectors: ComplexMatrix::identity(n)?,
        });
    }
    let mut a = h.as_matrix().scale(Complex64::new(1.0 / scale, 0.0));
    // force an exactly Hermitian working copy
    for i in 0..n {
        a.set(i, i, Complex64::new(a.get(i, i).re, 0.0));
        for j in (i + 1)..n {
            let z = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            a.set(i, j, z);
            a.set(j, i, z.conj());
        }
    }
    let mut v = ComplexMatrix::identity(n)?;

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < EIGH_MAX_SWEEPS {
        if offdiag_norm(&a) < EIGH_OFFDIAG_TOL {
            converged = true;
            break;
        }
        sweeps += 1;
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r; // e^{i phi}
                let theta = (a.get(q, q).re - a.get(p, p).re) / (2.0 * r);
                let sign = if theta < 0.0 { -1.0 } else { 1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // rows/columns outside the (p, q) plane
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    let new_ip = aip * (phase * c) - aiq * s;
                    let new_iq = aip * (phase * s) + aiq * c;
                    a.set(i, p, new_ip);
                    a.set(p, i, new_ip.conj());
                    a.set(i, q, new_iq);
                    a.set(q, i, new_iq.conj());
                }
                // the 2x2 block itself
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                a.set(p, p, Complex64::new(app - t * r, 0.0));
                a.set(q, q, Complex64::new(aqq + t * r, 0.0));
                a.set(p, q, Complex64::new(0.0, 0.0));
                a.set(q, p, Complex64::new(0.0, 0.0));
                // accumulate the rotation into the eigenvector matrix
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * (phase * c) - viq * s);
                    v.set(i, q, vip * (phase * s) + viq * c);
                }
            }
        }
    }
    if !converged && offdiag_norm(&a) >= EIGH_OFFDIAG_TOL {
        return Err(Error::NoConvergence { sweeps, off_diagonal_norm: offdiag_norm(&a) * scale });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let li = a.get(i, i).re;
        let lj = a.get(j, j).re;
        lj.partial_cmp(&li)
            .expect("eigenvalues are finite")
            .then_with(|| {
                // deterministic tie-break: first differing component's argument
                for k in 0..n {
                    let zi = v.get(k, i);
                    let zj = v.get(k, j);
                    if (zi - zj).norm() > 1e-12 {
                        return zi.arg().partial_cmp(&zj.arg()).expect("finite arguments");
                    }
                }
                std::cmp::Ordering::Equal
            })
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&k| a.get(k, k).re * scale).collect();
    let mut vecs: Vec<Vec<Complex64>> =
        order.iter().map(|&k| (0..n).map(|i| v.get(i, k)).collect()).collect();

    // Re-orthonormalize degenerate clusters by modified Gram-Schmidt. The
    // in-cluster basis is arbitrary; callers must not rely on it.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[end - 1] - eigenvalues[end]).abs() < DEGENERATE_CLUSTER_GAP {
            end += 1;
        }
        if end - start > 1 {
            for k in start..end {
                for m in start..k {
                    let proj: Complex64 =
                        (0..n).map(|i| vecs[m][i].conj() * vecs[k][i]).sum();
                    let reference = vecs[m].clone();
                    for (target, &r) in vecs[k].iter_mut().zip(&reference) {
                        *target -= proj * r;
                    }
                }
                let norm: f64 = vecs[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                for z in vecs[k].iter_mut() {
                    *z /= norm;
                }
            }
        }
        start = end;
    }

    // Canonical phase: largest-magnitude component real positive.
    for vec in vecs.iter_mut() {
        let mut k_best = 0;
        let mut best = 0.0;
        for (k, z) in vec.iter().enumerate() {
            if z.norm() > best {
                best = z.norm();
                k_best = k;
            }
        }
        if best > 0.0 {
            let phase = vec[k_best] / best;
            for z in vec.iter_mut() {
                *z *= phase.conj();
            }
        }
    }

    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| vecs[k][i])?;
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// Default finite-difference step for [`central_diff`] at abscissa `x`.
pub fn default_fd_step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

/// Symmetric difference quotient `(f(x+h) - f(x-h)) / (2h)`, re-symmetrized
/// to restore exact Hermiticity. Evaluation failures of `f` propagate.
pub fn central_diff(
    f: impl Fn(f64) -> Result<HermitianMatrix>,
    x: f64,
    h: f64,
) -> Result<HermitianMatrix> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let plus = f(x + h)?;
    let minus = f(x - h)?;
    let diff = plus
        .as_matrix()
        .sub(minus.as_matrix())
        .scale(Complex64::new(1.0 / (2.0 * h), 0.0));
    HermitianMatrix::symmetrized(&diff)
}
