//! Conversion between the acceleration picture and black-hole quantities:
//! surface gravity `kappa = 1/(4 m)` for a Schwarzschild hole of mass `m`
//! (geometric units), Hawking temperature `T = kappa / 2 pi`, and the
//! redshift relation `T_{r1} / T_{r2} = chi_2 / chi_1` between static
//! observers at different radii.

use anyhow::{bail, Result};
use serde::Serialize;

/// Exactly one of the two ways to fix the horizon scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GravitySource {
    /// Schwarzschild mass in geometric units.
    Mass(f64),
    /// Surface gravity `kappa`.
    SurfaceGravity(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HawkingQuery {
    pub source: GravitySource,
    /// Killing-field norms `(chi_1, chi_2)` at two radii, if a temperature
    /// ratio is wanted.
    pub chi_ratio: Option<(f64, f64)>,
}

impl HawkingQuery {
    pub fn new(
        mass: Option<f64>,
        kappa_gravity: Option<f64>,
        chi_ratio: Option<(f64, f64)>,
    ) -> Result<Self> {
        let source = match (mass, kappa_gravity) {
            (Some(m), None) => {
                if !(m.is_finite() && m > 0.0) {
                    bail!("mass must be > 0, got {m}");
                }
                GravitySource::Mass(m)
            }
            (None, Some(k)) => {
                if !(k.is_finite() && k > 0.0) {
                    bail!("surface gravity must be > 0, got {k}");
                }
                GravitySource::SurfaceGravity(k)
            }
            _ => bail!("exactly one of mass and surface gravity must be supplied"),
        };
        if let Some((c1, c2)) = chi_ratio {
            if !(c1.is_finite() && c1 > 0.0 && c2.is_finite() && c2 > 0.0) {
                bail!("chi values must be > 0, got ({c1}, {c2})");
            }
        }
        Ok(Self { source, chi_ratio })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HawkingAnswer {
    /// Hawking temperature at infinity, `kappa / 2 pi` (`1 / 8 pi m` from a
    /// mass).
    pub temperature: f64,
    /// `T_{r1} / T_{r2} = chi_2 / chi_1`, when chi values were supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

pub fn hawking_temperature(query: &HawkingQuery) -> HawkingAnswer {
    let kappa = match query.source {
        GravitySource::Mass(m) => 1.0 / (4.0 * m),
        GravitySource::SurfaceGravity(k) => k,
    };
    HawkingAnswer {
        temperature: kappa / std::f64::consts::TAU,
        ratio: query.chi_ratio.map(|(c1, c2)| c2 / c1),
    }
}
