//! Parameter sweeps over the detector models and their CSV/JSON emission.
//!
//! CSV output uses 17 significant digits so that parsing a file reproduces
//! the in-memory table bit for bit.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use unruh_metrology::detector::{
    concurrence, qfi_single, qfi_two, two_detector_state, SingleDetectorParams, TwoDetectorParams,
};
use unruh_metrology::qfi::QfiBreakdown;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Single,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Acceleration,
    Eta,
    Theta,
    Mu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputScale {
    /// Fisher information in natural units of omega^{-2}.
    Natural,
    /// Fisher information multiplied by 100 (plotted units of 1e-2 omega^{-2}).
    Fig1,
}

/// Values held fixed while one axis varies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedParams {
    pub omega: f64,
    pub acceleration: f64,
    pub mu: f64,
    pub eta: f64,
    pub theta: f64,
}

impl Default for FixedParams {
    fn default() -> Self {
        Self { omega: 1.0, acceleration: 1.0, mu: 0.01, eta: FRAC_PI_2, theta: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub model: Model,
    pub axis: Axis,
    pub range: AxisRange,
    pub fixed: FixedParams,
    pub scale: OutputScale,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let r = &self.range;
        if !(r.min.is_finite() && r.max.is_finite() && r.min < r.max) {
            bail!("axis range must satisfy min < max, got [{}, {}]", r.min, r.max);
        }
        if r.points < 2 {
            bail!("a sweep needs at least 2 grid points, got {}", r.points);
        }
        match (self.model, self.axis) {
            (Model::Single, Axis::Theta) => bail!("axis 'theta' applies to the two-detector model"),
            (Model::Two, Axis::Eta) => bail!("axis 'eta' applies to the single-detector model"),
            _ => {}
        }
        let f = &self.fixed;
        if !(f.omega.is_finite() && f.omega > 0.0) {
            bail!("omega must be > 0, got {}", f.omega);
        }
        if self.axis != Axis::Acceleration && !(f.acceleration >= 0.0 && f.acceleration.is_finite())
        {
            bail!("acceleration must be >= 0, got {}", f.acceleration);
        }
        if self.axis != Axis::Mu && !(0.0..1.0).contains(&f.mu) {
            bail!("mu must lie in [0, 1), got {}", f.mu);
        }
        if self.model == Model::Single
            && self.axis != Axis::Eta
            && !(0.0..=FRAC_PI_2).contains(&f.eta)
        {
            bail!("eta must lie in [0, pi/2], got {}", f.eta);
        }
        if self.model == Model::Two
            && self.axis != Axis::Theta
            && !(0.0..=FRAC_PI_2).contains(&f.theta)
        {
            bail!("theta must lie in [0, pi/2], got {}", f.theta);
        }
        Ok(())
    }

    /// Flag worth surfacing in metadata: any grid point can leave the
    /// first-order validity region.
    pub fn perturbative_warning(&self) -> bool {
        match self.axis {
            Axis::Mu => self.range.max > 0.1,
            _ => self.fixed.mu > 0.1,
        }
    }
}

/// Numeric payload of one successfully evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowValues {
    pub qfi_total: f64,
    pub qfi_classical: f64,
    pub qfi_quantum: f64,
    pub concurrence: Option<f64>,
}

/// One grid point: either values or the failure that flagged it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub values: Option<RowValues>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub has_concurrence: bool,
    pub rows: Vec<SweepRow>,
}

fn eval_point(model: Model, axis: Axis, value: f64, fixed: &FixedParams) -> Result<RowValues> {
    let f = fixed;
    let (a, mu) = match axis {
        Axis::Acceleration => (value, f.mu),
        Axis::Mu => (f.acceleration, value),
        _ => (f.acceleration, f.mu),
    };
    match model {
        Model::Single => {
            let eta = if axis == Axis::Eta { value } else { f.eta };
            let params = SingleDetectorParams::new(f.omega, a, mu, eta)?;
            let bd = qfi_single(&params)?;
            Ok(row_from_breakdown(bd, None))
        }
        Model::Two => {
            let theta = if axis == Axis::Theta { value } else { f.theta };
            let params = TwoDetectorParams::new(f.omega, a, mu, theta)?;
            let bd = qfi_two(&params)?;
            let c = concurrence(&two_detector_state(&params))?;
            Ok(row_from_breakdown(bd, Some(c)))
        }
    }
}

fn row_from_breakdown(bd: QfiBreakdown, concurrence: Option<f64>) -> RowValues {
    RowValues {
        qfi_total: bd.total,
        qfi_classical: bd.classical_part,
        qfi_quantum: bd.quantum_part,
        concurrence,
    }
}

/// Evaluate a sweep on its grid. Grid points that fail model preconditions
/// are flagged in their row; the sweep continues.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let n = spec.range.points;
    let step = (spec.range.max - spec.range.min) / (n - 1) as f64;
    let scale = match spec.scale {
        OutputScale::Natural => 1.0,
        OutputScale::Fig1 => 100.0,
    };
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let x = if i + 1 == n { spec.range.max } else { spec.range.min + i as f64 * step };
        match eval_point(spec.model, spec.axis, x, &spec.fixed) {
            Ok(mut v) => {
                v.qfi_total *= scale;
                v.qfi_classical *= scale;
                v.qfi_quantum *= scale;
                rows.push(SweepRow { axis_value: x, values: Some(v), error: None });
            }
            Err(e) => rows.push(SweepRow {
                axis_value: x,
                values: None,
                error: Some(sanitize(&e.to_string())),
            }),
        }
    }
    Ok(SweepTable { has_concurrence: spec.model == Model::Two, rows })
}

fn sanitize(msg: &str) -> String {
    msg.replace(',', ";").replace('\n', " ")
}

/// 17 significant digits: enough for a lossless f64 round trip.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn axis_column_name(axis: Axis) -> &'static str {
    match axis {
        Axis::Acceleration => "acceleration",
        Axis::Eta => "eta",
        Axis::Theta => "theta",
        Axis::Mu => "mu",
    }
}

/// Render the table as CSV (header row, LF newlines, UTF-8).
pub fn to_csv(table: &SweepTable, axis: Axis) -> String {
    let mut out = String::new();
    let _ = write!(out, "{},qfi_total,qfi_classical,qfi_quantum", axis_column_name(axis));
    if table.has_concurrence {
        out.push_str(",concurrence");
    }
    out.push_str(",status\n");
    for row in &table.rows {
        out.push_str(&format_f64(row.axis_value));
        match &row.values {
            Some(v) => {
                let _ = write!(
                    out,
                    ",{},{},{}",
                    format_f64(v.qfi_total),
                    format_f64(v.qfi_classical),
                    format_f64(v.qfi_quantum)
                );
                if table.has_concurrence {
                    let _ = write!(
                        out,
                        ",{}",
                        v.concurrence.map(format_f64).unwrap_or_default()
                    );
                }
                out.push_str(",ok\n");
            }
            None => {
                out.push_str(",,,");
                if table.has_concurrence {
                    out.push(',');
                }
                let _ = writeln!(out, ",failed: {}", row.error.as_deref().unwrap_or("unknown"));
            }
        }
    }
    out
}

/// Parse CSV produced by [`to_csv`] back into a table.
pub fn parse_csv(text: &str) -> Result<SweepTable> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| anyhow!("empty CSV"))?;
    let columns: Vec<&str> = header.split(',').collect();
    let has_concurrence = columns.contains(&"concurrence");
    let expected = if has_concurrence { 6 } else { 5 };
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected {
            bail!("line {}: expected {} fields, got {}", k + 2, expected, fields.len());
        }
        let axis_value: f64 =
            fields[0].parse().with_context(|| format!("line {}: bad axis value", k + 2))?;
        let status = fields[expected - 1];
        if status == "ok" {
            let parse = |s: &str, what: &str| -> Result<f64> {
                s.parse().map_err(|_| anyhow!("line {}: bad {what}", k + 2))
            };
            let concurrence = if has_concurrence {
                let s = fields[4];
                if s.is_empty() { None } else { Some(parse(s, "concurrence")?) }
            } else {
                None
            };
            rows.push(SweepRow {
                axis_value,
                values: Some(RowValues {
                    qfi_total: parse(fields[1], "qfi_total")?,
                    qfi_classical: parse(fields[2], "qfi_classical")?,
                    qfi_quantum: parse(fields[3], "qfi_quantum")?,
                    concurrence,
                }),
                error: None,
            });
        } else {
            let msg = status.strip_prefix("failed: ").unwrap_or(status);
            rows.push(SweepRow { axis_value, values: None, error: Some(msg.to_string()) });
        }
    }
    Ok(SweepTable { has_concurrence, rows })
}

/// Sidecar metadata describing how a table was produced.
pub fn metadata_json(spec: &SweepSpec, seed: Option<u64>) -> serde_json::Value {
    serde_json::json!({
        "command": "sweep",
        "model": spec.model,
        "axis": spec.axis,
        "axis_range": spec.range,
        "fixed": spec.fixed,
        "scale": spec.scale,
        "seed": seed,
        "perturbative_warning": spec.perturbative_warning(),
        "artifact_version": env!("CARGO_PKG_VERSION"),
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // expected values frozen at 17 digits
mod tests {
    use super::*;

    fn basic_spec() -> SweepSpec {
        SweepSpec {
            model: Model::Single,
            axis: Axis::Acceleration,
            range: AxisRange { min: 0.5, max: 2.0, points: 4 },
            fixed: FixedParams::default(),
            scale: OutputScale::Natural,
        }
    }

    #[test]
    fn two_point_sweep_has_two_rows() {
        let mut spec = basic_spec();
        spec.range.points = 2;
        let t = sweep(&spec).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0].axis_value, 0.5);
        assert_eq!(t.rows[1].axis_value, 2.0);
    }

    #[test]
    fn rows_are_ordered_and_ok() {
        let t = sweep(&basic_spec()).unwrap();
        assert!(t.rows.windows(2).all(|w| w[0].axis_value < w[1].axis_value));
        assert!(t.rows.iter().all(|r| r.values.is_some()));
    }

    #[test]
    fn fig1_scale_multiplies_by_100() {
        let natural = sweep(&basic_spec()).unwrap();
        let mut spec = basic_spec();
        spec.scale = OutputScale::Fig1;
        let scaled = sweep(&spec).unwrap();
        for (a, b) in natural.rows.iter().zip(&scaled.rows) {
            let (a, b) = (a.values.unwrap(), b.values.unwrap());
            assert_eq!(b.qfi_total, a.qfi_total * 100.0);
            assert_eq!(b.qfi_classical, a.qfi_classical * 100.0);
            assert_eq!(b.qfi_quantum, a.qfi_quantum * 100.0);
        }
    }

    #[test]
    fn failing_grid_point_is_flagged_and_sweep_continues() {
        let mut spec = basic_spec();
        spec.axis = Axis::Mu;
        spec.range = AxisRange { min: 0.05, max: 1.05, points: 3 }; // last point has mu > 1
        let t = sweep(&spec).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert!(t.rows[0].values.is_some());
        assert!(t.rows[2].values.is_none());
        assert!(t.rows[2].error.as_deref().unwrap().contains("mu"));
    }

    #[test]
    fn spec_validation_rejects_bad_input() {
        let mut spec = basic_spec();
        spec.range = AxisRange { min: 2.0, max: 0.5, points: 4 };
        assert!(spec.validate().is_err());
        let mut spec = basic_spec();
        spec.range.points = 1;
        assert!(spec.validate().is_err());
        let mut spec = basic_spec();
        spec.axis = Axis::Theta;
        assert!(spec.validate().is_err());
        let mut spec = basic_spec();
        spec.fixed.mu = 1.5;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let mut spec = basic_spec();
        spec.model = Model::Two;
        spec.axis = Axis::Theta;
        spec.range = AxisRange { min: 0.0, max: FRAC_PI_2, points: 9 };
        let table = sweep(&spec).unwrap();
        let csv = to_csv(&table, spec.axis);
        let parsed = parse_csv(&csv).unwrap();
        assert_eq!(table, parsed);
        // and the rendering itself is stable
        assert_eq!(csv, to_csv(&parsed, spec.axis));
    }

    #[test]
    fn csv_round_trip_with_flagged_rows() {
        let mut spec = basic_spec();
        spec.axis = Axis::Mu;
        spec.range = AxisRange { min: 0.05, max: 1.05, points: 3 };
        let table = sweep(&spec).unwrap();
        let parsed = parse_csv(&to_csv(&table, spec.axis)).unwrap();
        assert_eq!(table, parsed);
    }

    #[test]
    fn theta_sweep_extremes_sit_at_the_expected_grid_points() {
        // 65 points over [0, pi/2] at a = 1, mu = 0.01: QFI is maximal on the
        // first row, concurrence at the pi/4 grid point (index 32)
        let spec = SweepSpec {
            model: Model::Two,
            axis: Axis::Theta,
            range: AxisRange { min: 0.0, max: FRAC_PI_2, points: 65 },
            fixed: FixedParams { acceleration: 1.0, mu: 0.01, ..FixedParams::default() },
            scale: OutputScale::Natural,
        };
        let t = sweep(&spec).unwrap();
        let rows: Vec<RowValues> = t.rows.iter().map(|r| r.values.unwrap()).collect();
        let j_argmax = rows
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.qfi_total.partial_cmp(&b.1.qfi_total).unwrap())
            .unwrap()
            .0;
        let c_argmax = rows
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.concurrence.partial_cmp(&b.1.concurrence).unwrap())
            .unwrap()
            .0;
        assert_eq!(j_argmax, 0);
        assert_eq!(c_argmax, 32);
    }

    #[test]
    fn format_is_17_significant_digits() {
        let x = 0.014396782352466790_f64;
        let s = format_f64(x);
        let back: f64 = s.parse().unwrap();
        assert_eq!(back.to_bits(), x.to_bits());
        assert_eq!(s, "1.4396782352466790e-2");
    }
}
