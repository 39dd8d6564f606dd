//! Reduced states of uniformly accelerated two-level detectors coupled to a
//! massless scalar field, their closed-form eigensystems and Fisher
//! information in the Unruh temperature `T = a / 2 pi`, and the two-qubit
//! concurrence.
//!
//! Conventions: the detector gap `omega` sets the units (acceleration and
//! temperature in units of `omega`, Fisher information in `omega^{-2}`);
//! `f_omega = 1 - e^{-omega/T}` is the Planck factor; `mu` is the effective
//! coupling `eps^2 omega delta e^{-omega^2 kappa^2} / (2 pi)`. At `a = 0` the
//! thermal factors are taken in the `T -> 0` limit (`e^{-omega/T} -> 0`,
//! `f_omega -> 1`) and every Fisher quantity is 0 by that limit, which keeps
//! sweeps NaN-free.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{eigh, ComplexMatrix, HermitianMatrix};
use crate::qfi::{qfi_spectral, QfiBreakdown, StateFamily};

/// Above this coupling the first-order treatment behind the reduced states is
/// of doubtful validity; results carry a warning, not an error.
pub const MU_WARNING_THRESHOLD: f64 = 0.1;

/// Angles closer than this to 0 or pi/2 are routed to the diagonal edge-case
/// closed forms (the general-angle eigenvector formulas divide by sin 2 eta).
pub const ANGLE_EDGE_TOL: f64 = 1e-6;

/// Unruh temperature of a uniformly accelerated observer, `T = a / 2 pi`.
pub fn unruh_temperature(acceleration: f64) -> Result<f64> {
    if !acceleration.is_finite() || acceleration < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "acceleration must be finite and nonnegative, got {acceleration}"
        )));
    }
    Ok(acceleration / std::f64::consts::TAU)
}

/// Planck factor `f_omega = 1 - e^{-omega/T}`, with `f = 1` exactly at
/// `T = 0`. Uses `exp_m1` so the result stays accurate when `omega/T` is
/// small and `1 - f` stays accurate when it is large.
pub fn planck_factor(omega: f64, temperature: f64) -> f64 {
    debug_assert!(omega > 0.0 && temperature >= 0.0);
    if temperature == 0.0 {
        1.0
    } else {
        -(-omega / temperature).exp_m1()
    }
}

/// Boltzmann weight `e^{-omega/T}`, defined as 0 at `T = 0`.
pub fn boltzmann_factor(omega: f64, temperature: f64) -> f64 {
    debug_assert!(omega > 0.0 && temperature >= 0.0);
    if temperature == 0.0 {
        0.0
    } else {
        (-omega / temperature).exp()
    }
}

/// Physical coupling data behind the effective coupling `mu`: coupling
/// constant `epsilon`, interaction proper time `delta` and Gaussian detector
/// width `kappa_width`. (`kappa` also names the surface gravity elsewhere in
/// this workspace; the two are unrelated, hence the explicit field names.)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingProfile {
    pub epsilon: f64,
    pub delta: f64,
    pub kappa_width: f64,
}

impl CouplingProfile {
    pub fn new(epsilon: f64, delta: f64, kappa_width: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon must be > 0, got {epsilon}")));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidParameter(format!("delta must be > 0, got {delta}")));
        }
        if !(kappa_width.is_finite() && kappa_width >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "kappa_width must be >= 0, got {kappa_width}"
            )));
        }
        Ok(Self { epsilon, delta, kappa_width })
    }
}

/// Effective coupling `mu = eps^2 omega delta e^{-omega^2 kappa^2} / (2 pi)`.
///
/// Enforces the validity window of the underlying approximations:
/// `kappa_width < 0.1 / omega` (pointlike detector) and
/// `delta * omega > 10` (many oscillations within the interaction window).
pub fn mu_from_physical(profile: &CouplingProfile, omega: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidParameter(format!("omega must be > 0, got {omega}")));
    }
    if profile.kappa_width * omega >= 0.1 {
        return Err(Error::InvalidParameter(format!(
            "kappa_width = {} violates kappa_width < 0.1/omega (omega = {omega})",
            profile.kappa_width
        )));
    }
    if profile.delta * omega <= 10.0 {
        return Err(Error::InvalidParameter(format!(
            "delta = {} violates delta * omega > 10 (omega = {omega})",
            profile.delta
        )));
    }
    let gauss = (-(omega * profile.kappa_width).powi(2)).exp();
    Ok(profile.epsilon.powi(2) * omega * profile.delta / std::f64::consts::TAU * gauss)
}

fn check_common(omega: f64, acceleration: f64, mu: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidParameter(format!("omega must be > 0, got {omega}")));
    }
    if !acceleration.is_finite() || acceleration < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "acceleration must be >= 0, got {acceleration}"
        )));
    }
    // mu = 0 is accepted as the decoupled limit (the state then carries no
    // temperature information and every Fisher quantity is 0).
    if !mu.is_finite() || !(0.0..1.0).contains(&mu) {
        return Err(Error::InvalidParameter(format!("mu must lie in [0, 1), got {mu}")));
    }
    Ok(())
}

fn check_angle(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&value) {
        return Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, pi/2], got {value}"
        )));
    }
    Ok(())
}

/// Parameters of a single accelerated detector prepared in
/// `sin(eta)|0> + cos(eta)|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleDetectorParams {
    omega: f64,
    acceleration: f64,
    mu: f64,
    eta: f64,
}

impl SingleDetectorParams {
    pub fn new(omega: f64, acceleration: f64, mu: f64, eta: f64) -> Result<Self> {
        check_common(omega, acceleration, mu)?;
        check_angle("eta", eta)?;
        Ok(Self { omega, acceleration, mu, eta })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn acceleration(&self) -> f64 {
        self.acceleration
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Derived, never stored: `T = a / 2 pi`.
    pub fn temperature(&self) -> f64 {
        self.acceleration / std::f64::consts::TAU
    }

    /// True when `mu` exceeds the first-order validity threshold.
    pub fn perturbative_warning(&self) -> bool {
        self.mu > MU_WARNING_THRESHOLD
    }
}

/// Parameters of the inertial + accelerated detector pair prepared in
/// `sin(theta)|01> + cos(theta)|10>` (first slot inertial, second
/// accelerated).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDetectorParams {
    omega: f64,
    acceleration: f64,
    mu: f64,
    theta: f64,
}

impl TwoDetectorParams {
    pub fn new(omega: f64, acceleration: f64, mu: f64, theta: f64) -> Result<Self> {
        check_common(omega, acceleration, mu)?;
        check_angle("theta", theta)?;
        Ok(Self { omega, acceleration, mu, theta })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn acceleration(&self) -> f64 {
        self.acceleration
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn temperature(&self) -> f64 {
        self.acceleration / std::f64::consts::TAU
    }

    pub fn perturbative_warning(&self) -> bool {
        self.mu > MU_WARNING_THRESHOLD
    }
}

/// Either detector model, for code paths that treat them uniformly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorParams {
    Single(SingleDetectorParams),
    Two(TwoDetectorParams),
}

impl DetectorParams {
    pub fn omega(&self) -> f64 {
        match self {
            Self::Single(p) => p.omega(),
            Self::Two(p) => p.omega(),
        }
    }

    pub fn acceleration(&self) -> f64 {
        match self {
            Self::Single(p) => p.acceleration(),
            Self::Two(p) => p.acceleration(),
        }
    }

    pub fn temperature(&self) -> f64 {
        self.acceleration() / std::f64::consts::TAU
    }

    pub fn perturbative_warning(&self) -> bool {
        match self {
            Self::Single(p) => p.perturbative_warning(),
            Self::Two(p) => p.perturbative_warning(),
        }
    }

    pub fn family(&self) -> StateFamily {
        match self {
            Self::Single(p) => single_detector_family(p),
            Self::Two(p) => two_detector_family(p),
        }
    }

    pub fn qfi(&self) -> Result<QfiBreakdown> {
        match self {
            Self::Single(p) => qfi_single(p),
            Self::Two(p) => qfi_two(p),
        }
    }
}

/// Real 2x2 entries of the single-detector reduced state at temperature `t`.
fn rho_d_entries(omega: f64, mu: f64, eta: f64, t: f64) -> [[f64; 2]; 2] {
    let (c0, c1) = (eta.sin(), eta.cos());
    let q = boltzmann_factor(omega, t);
    let f = planck_factor(omega, t);
    let norm = 1.0 / (f + mu * q * c0 * c0 + mu * c1 * c1);
    let off = norm * f * c0 * c1;
    [
        [norm * (f * c0 * c0 + mu * c1 * c1), off],
        [off, norm * (mu * q * c0 * c0 + f * c1 * c1)],
    ]
}

/// Entry-wise temperature derivative of [`rho_d_entries`].
fn drho_d_entries(omega: f64, mu: f64, eta: f64, t: f64) -> [[f64; 2]; 2] {
    if t == 0.0 {
        // e^{-omega/T} vanishes faster than any power; the limit is zero
        return [[0.0; 2]; 2];
    }
    let (c0, c1) = (eta.sin(), eta.cos());
    let (c0s, c1s) = (c0 * c0, c1 * c1);
    let q = boltzmann_factor(omega, t);
    let f = planck_factor(omega, t);
    let qp = q * omega / (t * t); // dq/dT; df/dT = -qp
    let u = f + mu * q * c0s + mu * c1s;
    let du = qp * (mu * c0s - 1.0);
    let m = [[f * c0s + mu * c1s, f * c0 * c1], [f * c0 * c1, mu * q * c0s + f * c1s]];
    let dm = [
        [-qp * c0s, -qp * c0 * c1],
        [-qp * c0 * c1, qp * (mu * c0s - c1s)],
    ];
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = dm[i][j] / u - m[i][j] * du / (u * u);
        }
    }
    out
}

fn hermitian_from_real(entries: &[[f64; 2]; 2]) -> Result<HermitianMatrix> {
    HermitianMatrix::from_rows(&[
        vec![Complex64::new(entries[0][0], 0.0), Complex64::new(entries[0][1], 0.0)],
        vec![Complex64::new(entries[1][0], 0.0), Complex64::new(entries[1][1], 0.0)],
    ])
}

/// Reduced density matrix of the single accelerated detector.
pub fn single_detector_state(params: &SingleDetectorParams) -> HermitianMatrix {
    let entries = rho_d_entries(params.omega, params.mu, params.eta, params.temperature());
    hermitian_from_real(&entries).expect("detector state entries are finite")
}

/// The family `T -> rho_d(T)` at fixed `(omega, mu, eta)`, with the analytic
/// temperature derivative attached.
pub fn single_detector_family(params: &SingleDetectorParams) -> StateFamily {
    let (omega, mu, eta) = (params.omega, params.mu, params.eta);
    StateFamily::with_derivative(
        2,
        move |t| hermitian_from_real(&rho_d_entries(omega, mu, eta, t)),
        move |t| hermitian_from_real(&drho_d_entries(omega, mu, eta, t)),
    )
}

/// Closed-form eigensystem of the single-detector state for interior `eta`:
/// eigenvalues `1/2 -+ lambda` with the eigenvector pair `(V1, V2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleDetectorSpectrum {
    pub lambda_shift: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
    pub lambda5: f64,
    pub n1: f64,
    pub n2: f64,
    /// `(1/2 - lambda, 1/2 + lambda)`
    pub eigenvalues: [f64; 2],
    /// Normalized real eigenvectors, `eigenvectors[0]` for the smaller
    /// eigenvalue.
    pub eigenvectors: [[f64; 2]; 2],
}

/// Closed-form spectrum of the single-detector state.
///
/// Valid strictly inside `eta in (0, pi/2)`; the formulas divide by
/// `sin 2 eta`, so angles within [`ANGLE_EDGE_TOL`] of the edges are rejected
/// in favor of the diagonal edge-case paths.
pub fn single_detector_eigensystem(
    params: &SingleDetectorParams,
) -> Result<SingleDetectorSpectrum> {
    let eta = params.eta;
    if eta < ANGLE_EDGE_TOL || (std::f64::consts::FRAC_PI_2 - eta) < ANGLE_EDGE_TOL {
        return Err(Error::EtaAtEdge(eta));
    }
    let (omega, mu, t) = (params.omega, params.mu, params.temperature());
    let q = boltzmann_factor(omega, t);
    let q2 = q * q;
    let f = planck_factor(omega, t);
    let cos2 = (2.0 * eta).cos();
    let cos4 = (4.0 * eta).cos();
    let sin2 = (2.0 * eta).sin();

    let lambda1 = q2 * (8.0 + mu * (4.0 + 3.0 * mu)) - 2.0 * q * (8.0 + mu * mu)
        + (8.0 + mu * (-4.0 + 3.0 * mu));
    let lambda2 = 4.0 * mu * f * (-2.0 + mu + q * (2.0 + mu)) * cos2;
    let lambda3 = mu * (1.0 + q) * (-4.0 + mu + q * (4.0 + mu)) * cos4;
    let lambda4 = 2.0 * 2.0f64.sqrt() * ((q + 1.0) * mu + f * (2.0 + mu * cos2));
    let lambda5 = -2.0 * q * (mu - (2.0 + mu) * cos2) + 2.0 * (mu + (-2.0 + mu) * cos2);

    let radicand = lambda1 + lambda2 + lambda3;
    let root = 2.0f64.sqrt() * radicand.max(0.0).sqrt();
    let lambda_shift = radicand.max(0.0).sqrt() / lambda4;

    let denom = 4.0 * f * sin2;
    let v1x = (lambda5 - root) / denom;
    let v2x = (lambda5 + root) / denom;
    let n1 = (v1x * v1x + 1.0).sqrt();
    let n2 = (v2x * v2x + 1.0).sqrt();

    Ok(SingleDetectorSpectrum {
        lambda_shift,
        lambda1,
        lambda2,
        lambda3,
        lambda4,
        lambda5,
        n1,
        n2,
        eigenvalues: [0.5 - lambda_shift, 0.5 + lambda_shift],
        eigenvectors: [[v1x / n1, 1.0 / n1], [v2x / n2, 1.0 / n2]],
    })
}

/// `J_T(eta = pi/2) = e^{-w/T} mu w^2 / (T^4 f (f + e^{-w/T} mu)^2)`, also
/// the two-detector `theta = 0` value (the printed forms coincide).
fn qfi_closed_ground(omega: f64, temperature: f64, mu: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    let q = boltzmann_factor(omega, temperature);
    let f = planck_factor(omega, temperature);
    q * mu * omega * omega / (temperature.powi(4) * f * (f + q * mu).powi(2))
}

/// `J_T(eta = 0) = e^{-2w/T} mu w^2 / (T^4 f (f + mu)^2)`, also the
/// two-detector `theta = pi/2` value.
fn qfi_closed_excited(omega: f64, temperature: f64, mu: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    let q = boltzmann_factor(omega, temperature);
    let f = planck_factor(omega, temperature);
    q * q * mu * omega * omega / (temperature.powi(4) * f * (f + mu).powi(2))
}

/// Quantum Fisher information for the Unruh temperature carried by the
/// single-detector state.
///
/// Edge angles use the diagonal closed forms (purely classical); interior
/// angles go through the spectral decomposition of the state family, which
/// generally has a nonzero quantum part. `a = 0` yields 0 by the `T -> 0`
/// limit.
pub fn qfi_single(params: &SingleDetectorParams) -> Result<QfiBreakdown> {
    if params.acceleration == 0.0 || params.mu == 0.0 {
        return Ok(QfiBreakdown::zero());
    }
    let t = params.temperature();
    if (std::f64::consts::FRAC_PI_2 - params.eta) < ANGLE_EDGE_TOL {
        return Ok(QfiBreakdown::new(qfi_closed_ground(params.omega, t, params.mu), 0.0));
    }
    if params.eta < ANGLE_EDGE_TOL {
        return Ok(QfiBreakdown::new(qfi_closed_excited(params.omega, t, params.mu), 0.0));
    }
    qfi_spectral(&single_detector_family(params), t)
}

/// Real 4x4 entries of the two-detector reduced state in the computational
/// basis `{|00>, |01>, |10>, |11>}`.
fn rho_dd_entries(omega: f64, mu: f64, theta: f64, t: f64) -> [[f64; 4]; 4] {
    let (s, c) = (theta.sin(), theta.cos());
    let q = boltzmann_factor(omega, t);
    let f = planck_factor(omega, t);
    let d = f + mu * (s * s + q * c * c);
    let mut m = [[0.0; 4]; 4];
    m[0][0] = mu * s * s / d;
    m[1][1] = f * s * s / d;
    m[1][2] = f * s * c / d;
    m[2][1] = m[1][2];
    m[2][2] = f * c * c / d;
    m[3][3] = mu * q * c * c / d;
    m
}

fn drho_dd_entries(omega: f64, mu: f64, theta: f64, t: f64) -> [[f64; 4]; 4] {
    if t == 0.0 {
        return [[0.0; 4]; 4];
    }
    let (s, c) = (theta.sin(), theta.cos());
    let (ss, cc) = (s * s, c * c);
    let q = boltzmann_factor(omega, t);
    let f = planck_factor(omega, t);
    let qp = q * omega / (t * t);
    let d = f + mu * (ss + q * cc);
    let dd = qp * (mu * cc - 1.0);
    let d2 = d * d;
    let mut m = [[0.0; 4]; 4];
    m[0][0] = -mu * ss * dd / d2;
    m[1][1] = ss * (-qp * d - f * dd) / d2;
    m[1][2] = s * c * (-qp * d - f * dd) / d2;
    m[2][1] = m[1][2];
    m[2][2] = cc * (-qp * d - f * dd) / d2;
    m[3][3] = mu * cc * (qp * d - q * dd) / d2;
    m
}

fn hermitian_from_real4(entries: &[[f64; 4]; 4]) -> Result<HermitianMatrix> {
    let rows: Vec<Vec<Complex64>> = entries
        .iter()
        .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
        .collect();
    HermitianMatrix::from_rows(&rows)
}

/// Reduced density matrix of the inertial + accelerated detector pair,
/// rank at most 3.
pub fn two_detector_state(params: &TwoDetectorParams) -> HermitianMatrix {
    let entries = rho_dd_entries(params.omega, params.mu, params.theta, params.temperature());
    hermitian_from_real4(&entries).expect("detector state entries are finite")
}

/// The family `T -> rho_dd(T)` at fixed `(omega, mu, theta)`.
pub fn two_detector_family(params: &TwoDetectorParams) -> StateFamily {
    let (omega, mu, theta) = (params.omega, params.mu, params.theta);
    StateFamily::with_derivative(
        4,
        move |t| hermitian_from_real4(&rho_dd_entries(omega, mu, theta, t)),
        move |t| hermitian_from_real4(&drho_dd_entries(omega, mu, theta, t)),
    )
}

/// Temperature-independent eigenbasis of the two-detector state together
/// with its eigenvalues `(alpha, beta, gamma, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoDetectorSpectrum {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Rows are the eigenvectors for `alpha`, `beta`, `gamma` and the kernel,
    /// in the computational basis `{|00>, |01>, |10>, |11>}`. No entry
    /// depends on the temperature.
    pub basis: [[f64; 4]; 4],
}

/// Closed-form spectrum of the two-detector state:
/// `alpha = f/D`, `beta = mu sin^2(theta)/D`, `gamma = mu e^{-w/T} cos^2(theta)/D`
/// with `D = f + mu (sin^2 theta + e^{-w/T} cos^2 theta)`.
pub fn two_detector_spectrum(params: &TwoDetectorParams) -> TwoDetectorSpectrum {
    let (s, c) = (params.theta.sin(), params.theta.cos());
    let t = params.temperature();
    let q = boltzmann_factor(params.omega, t);
    let f = planck_factor(params.omega, t);
    let d = f + params.mu * (s * s + q * c * c);
    TwoDetectorSpectrum {
        alpha: f / d,
        beta: params.mu * s * s / d,
        gamma: params.mu * q * c * c / d,
        basis: [
            [0.0, s, c, 0.0],  // cos(theta)|10> + sin(theta)|01>
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, c, -s, 0.0], // -sin(theta)|10> + cos(theta)|01>
        ],
    }
}

/// Closed-form Fisher information of the two-detector state for interior
/// `theta`, obtained from `(d alpha)^2/alpha + (d beta)^2/beta +
/// (d gamma)^2/gamma` with the T-independent eigenbasis.
fn qfi_two_closed_interior(omega: f64, temperature: f64, mu: f64, theta: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    let q = boltzmann_factor(omega, temperature);
    let f = planck_factor(omega, temperature);
    let cos2 = (2.0 * theta).cos();
    let cos4 = (4.0 * theta).cos();
    let num = q
        * mu
        * omega
        * omega
        * (q * (4.0 * (1.0 - cos2) + mu * (-1.0 + cos4)) + 4.0 * (1.0 + cos2)
            + mu * (1.0 - cos4));
    let den = 2.0
        * temperature.powi(4)
        * f
        * (q * (-2.0 + mu * (1.0 + cos2)) + 2.0 + mu * (1.0 - cos2)).powi(2);
    num / den
}

/// Quantum Fisher information for the Unruh temperature carried by the
/// two-detector state. The eigenbasis does not rotate with `T`, so the
/// quantum part vanishes identically.
pub fn qfi_two(params: &TwoDetectorParams) -> Result<QfiBreakdown> {
    if params.acceleration == 0.0 || params.mu == 0.0 {
        return Ok(QfiBreakdown::zero());
    }
    let t = params.temperature();
    let total = if params.theta < ANGLE_EDGE_TOL {
        qfi_closed_ground(params.omega, t, params.mu)
    } else if (std::f64::consts::FRAC_PI_2 - params.theta) < ANGLE_EDGE_TOL {
        qfi_closed_excited(params.omega, t, params.mu)
    } else {
        qfi_two_closed_interior(params.omega, t, params.mu, params.theta)
    };
    Ok(QfiBreakdown::new(total, 0.0))
}

/// `sigma_y (x) sigma_y` in the computational basis (real antidiagonal).
fn sigma_yy() -> ComplexMatrix {
    let mut m = ComplexMatrix::zero(4).expect("dim 4 is supported");
    m.set(0, 3, Complex64::new(-1.0, 0.0));
    m.set(1, 2, Complex64::new(1.0, 0.0));
    m.set(2, 1, Complex64::new(1.0, 0.0));
    m.set(3, 0, Complex64::new(-1.0, 0.0));
    m
}

/// Two-qubit concurrence `max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)}`
/// from the descending eigenvalues `l_i` of
/// `rho (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)`, clamped to [0, 1].
///
/// The `l_i` are computed as the eigenvalues of the Hermitian matrix
/// `sqrt(rho) rho~ sqrt(rho)` (same spectrum as `rho rho~`, since `AB` and
/// `BA` share eigenvalues), so only the Hermitian solver is needed.
pub fn concurrence(rho: &HermitianMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(rho.dim(), 4));
    }
    let trace = rho.trace();
    if (trace - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidState(format!("trace {trace:.12} is not 1")));
    }
    let eig = eigh(rho)?;
    if let Some(&min) = eig.eigenvalues.last() {
        if min <= -1e-8 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
    }

    // sqrt(rho) from the spectral decomposition, clamping rounding negatives
    let v = &eig.eigenvectors;
    let sqrt_rho = ComplexMatrix::from_fn(4, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..4 {
            acc += v.get(i, k) * eig.eigenvalues[k].max(0.0).sqrt() * v.get(j, k).conj();
        }
        acc
    })?;

    let yy = sigma_yy();
    let rho_tilde = yy.matmul(&rho.as_matrix().conjugate()).matmul(&yy);
    let product = sqrt_rho.matmul(&rho_tilde).matmul(&sqrt_rho);
    let spectrum = eigh(&HermitianMatrix::symmetrized(&product)?)?;

    // eigenvalues below the rounding floor are exact zeros of the product;
    // taking their square roots would amplify noise by ~1e7
    let floor = spectrum.eigenvalues[0].max(0.0) * 1e-14;
    let roots: Vec<f64> =
        spectrum.eigenvalues.iter().map(|&l| if l > floor { l.sqrt() } else { 0.0 }).collect();
    let c = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(c.clamp(0.0, 1.0))
}
