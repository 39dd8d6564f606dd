//! Locate the acceleration that maximizes the Fisher information: a coarse
//! 256-point grid to bracket the peak, then golden-section refinement.

use anyhow::{bail, Result};
use serde::Serialize;

use unruh_metrology::detector::{
    qfi_single, qfi_two, DetectorParams, SingleDetectorParams, TwoDetectorParams,
};

use crate::sweep::{FixedParams, Model};

const COARSE_POINTS: usize = 256;
/// Rival peaks below this fraction of the global grid maximum are ignored.
const RIVAL_FRACTION: f64 = 0.01;

/// A located Fisher-information maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxResult {
    pub j_max: f64,
    pub a_max: f64,
    /// Full parameter bundle at the maximum.
    pub at_params: DetectorParams,
    /// Width of the final golden-section bracket.
    pub bracket_width: f64,
    /// Other strict local maxima above 1% of the global one, as
    /// `(acceleration, qfi)` pairs. Nonempty means the curve was not
    /// unimodal on the domain and the caller should report all of them.
    pub rival_peaks: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct MaxResultJson<'a> {
    j_max: f64,
    a_max: f64,
    bracket_width: f64,
    model: Model,
    omega: f64,
    mu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    rival_peaks: &'a [(f64, f64)],
    artifact_version: &'static str,
}

impl MaxResult {
    pub fn to_json(&self) -> serde_json::Value {
        let (model, omega, mu, eta, theta) = match &self.at_params {
            DetectorParams::Single(p) => {
                (Model::Single, p.omega(), p.mu(), Some(p.eta()), None)
            }
            DetectorParams::Two(p) => (Model::Two, p.omega(), p.mu(), None, Some(p.theta())),
        };
        serde_json::to_value(MaxResultJson {
            j_max: self.j_max,
            a_max: self.a_max,
            bracket_width: self.bracket_width,
            model,
            omega,
            mu,
            eta,
            theta,
            rival_peaks: &self.rival_peaks,
            artifact_version: env!("CARGO_PKG_VERSION"),
        })
        .expect("plain numeric struct serializes")
    }
}

fn params_at(model: Model, fixed: &FixedParams, a: f64) -> Result<DetectorParams> {
    Ok(match model {
        Model::Single => DetectorParams::Single(SingleDetectorParams::new(
            fixed.omega,
            a,
            fixed.mu,
            fixed.eta,
        )?),
        Model::Two => {
            DetectorParams::Two(TwoDetectorParams::new(fixed.omega, a, fixed.mu, fixed.theta)?)
        }
    })
}

fn qfi_total_at(model: Model, fixed: &FixedParams, a: f64) -> Result<f64> {
    Ok(match params_at(model, fixed, a)? {
        DetectorParams::Single(p) => qfi_single(&p)?.total,
        DetectorParams::Two(p) => qfi_two(&p)?.total,
    })
}

struct SearchOutcome {
    best: f64,
    at: f64,
    bracket_width: f64,
    rival_peaks: Vec<(f64, f64)>,
}

/// Grid-seeded golden-section maximization of `f` on `[lo, hi]`.
///
/// When the coarse grid shows more than one strict local maximum above 1% of
/// the global one, the global one is refined and the rest are reported as
/// rivals instead of being silently discarded.
fn search_max(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<SearchOutcome> {
    let n = COARSE_POINTS;
    let step = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> =
        (0..n).map(|i| if i + 1 == n { hi } else { lo + i as f64 * step }).collect();
    let mut js = Vec::with_capacity(n);
    for &x in &xs {
        js.push(f(x)?);
    }

    let (k_best, &j_best) = js
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite objective"))
        .expect("grid is nonempty");
    if j_best <= 0.0 {
        bail!("Fisher information vanishes on the whole domain (is mu zero?)");
    }

    let mut rival_peaks = Vec::new();
    for i in 1..n - 1 {
        if js[i] > js[i - 1] && js[i] > js[i + 1] && i != k_best && js[i] > RIVAL_FRACTION * j_best
        {
            rival_peaks.push((xs[i], js[i]));
        }
    }

    let mut lo = xs[k_best.saturating_sub(1)];
    let mut hi = xs[(k_best + 1).min(n - 1)];
    let invphi = (5.0f64.sqrt() - 1.0) / 2.0;
    while hi - lo > tol {
        let m1 = hi - invphi * (hi - lo);
        let m2 = lo + invphi * (hi - lo);
        if f(m1)? < f(m2)? {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let at = 0.5 * (lo + hi);
    Ok(SearchOutcome { best: f(at)?, at, bracket_width: hi - lo, rival_peaks })
}

/// Maximize the Fisher information over `a` in `[a_min, a_max]` at the fixed
/// parameters. The coarse 256-point grid seeds a golden-section refinement
/// down to a bracket width of `1e-6 * omega`.
pub fn find_max(model: Model, fixed: &FixedParams, a_min: f64, a_max: f64) -> Result<MaxResult> {
    if !(a_min.is_finite() && a_max.is_finite() && 0.0 <= a_min && a_min < a_max) {
        bail!("invalid acceleration domain [{a_min}, {a_max}]");
    }
    let outcome = search_max(
        &mut |a| qfi_total_at(model, fixed, a),
        a_min,
        a_max,
        1e-6 * fixed.omega,
    )?;
    Ok(MaxResult {
        j_max: outcome.best,
        a_max: outcome.at,
        at_params: params_at(model, fixed, outcome.at)?,
        bracket_width: outcome.bracket_width,
        rival_peaks: outcome.rival_peaks,
    })
}
