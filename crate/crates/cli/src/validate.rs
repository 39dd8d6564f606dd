//! The `validate` verb: re-derives every closed-form quantity through the
//! spectral machinery and reports one pass/fail line per check.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use unruh_metrology::detector::{
    qfi_single, qfi_two, single_detector_eigensystem, single_detector_family,
    single_detector_state, two_detector_family, SingleDetectorParams, TwoDetectorParams,
};
use unruh_metrology::matrix::eigh;
use unruh_metrology::qfi::{qfi_spectral, sld, verify_lyapunov};
use unruh_metrology::rng::CounterRng;

use crate::hawking::{hawking_temperature, HawkingQuery};

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

const A_GRID: [f64; 6] = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
const MU_GRID: [f64; 3] = [0.001, 0.01, 0.1];

fn check_closed_vs_spectral() -> CheckResult {
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for &a in &A_GRID {
        for &mu in &MU_GRID {
            for &eta in &[0.0, FRAC_PI_2] {
                let p = SingleDetectorParams::new(1.0, a, mu, eta).unwrap();
                match qfi_spectral(&single_detector_family(&p), p.temperature()) {
                    Ok(bd) => worst = worst.max(rel_err(qfi_single(&p).unwrap().total, bd.total)),
                    Err(e) => detail = e.to_string(),
                }
            }
            for k in 0..=4 {
                let theta = k as f64 * PI / 8.0;
                let p = TwoDetectorParams::new(1.0, a, mu, theta).unwrap();
                match qfi_spectral(&two_detector_family(&p), p.temperature()) {
                    Ok(bd) => worst = worst.max(rel_err(qfi_two(&p).unwrap().total, bd.total)),
                    Err(e) => detail = e.to_string(),
                }
            }
        }
    }
    let passed = detail.is_empty() && worst < 1e-8;
    if detail.is_empty() {
        detail = format!("worst relative deviation {worst:.3e} (tolerance 1e-8)");
    }
    CheckResult { name: "closed forms vs spectral decomposition", passed, detail }
}

fn check_eigensystem() -> CheckResult {
    let mut rng = CounterRng::new(0xA11CE);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = 0.5 + 19.5 * rng.next_f64();
        let mu = 0.001 + 0.099 * rng.next_f64();
        let eta = 0.05 + (FRAC_PI_2 - 0.1) * rng.next_f64();
        let p = SingleDetectorParams::new(1.0, a, mu, eta).unwrap();
        let spec = single_detector_eigensystem(&p).unwrap();
        let eig = eigh(&single_detector_state(&p)).unwrap();
        worst = worst.max((spec.eigenvalues[1] - eig.eigenvalues[0]).abs());
        worst = worst.max((spec.eigenvalues[0] - eig.eigenvalues[1]).abs());
    }
    CheckResult {
        name: "closed-form eigensystem vs eigensolver (100 random points)",
        passed: worst < 1e-9,
        detail: format!("worst eigenvalue deviation {worst:.3e} (tolerance 1e-9)"),
    }
}

fn check_sld() -> CheckResult {
    let mut rng = CounterRng::new(0x51D);
    let mut worst_res = 0.0f64;
    let mut worst_tr = 0.0f64;
    for k in 0..40 {
        let a = 0.5 + 19.5 * rng.next_f64();
        let mu = 0.001 + 0.099 * rng.next_f64();
        let angle = 0.05 + (FRAC_PI_2 - 0.1) * rng.next_f64();
        let (family, t) = if k % 2 == 0 {
            let p = SingleDetectorParams::new(1.0, a, mu, angle).unwrap();
            (single_detector_family(&p), p.temperature())
        } else {
            let p = TwoDetectorParams::new(1.0, a, mu, angle).unwrap();
            (two_detector_family(&p), p.temperature())
        };
        let rho = family.state(t).unwrap();
        let drho = family.derivative(t).unwrap();
        let l = sld(&family, t).unwrap();
        worst_res = worst_res.max(verify_lyapunov(&l, &rho, &drho).unwrap());
        let lm = l.matrix.as_matrix();
        let trace = rho.as_matrix().matmul(&lm.matmul(lm)).trace().re;
        worst_tr = worst_tr.max(rel_err(trace, qfi_spectral(&family, t).unwrap().total));
    }
    CheckResult {
        name: "SLD Lyapunov residual and Tr[rho L^2] identity",
        passed: worst_res < 1e-10 && worst_tr < 1e-9,
        detail: format!(
            "worst residual {worst_res:.3e} (tol 1e-10), worst trace deviation {worst_tr:.3e} (tol 1e-9)"
        ),
    }
}

fn check_quantum_part() -> CheckResult {
    let mut worst = 0.0f64;
    for &a in &A_GRID {
        for &mu in &MU_GRID {
            for k in 0..=4 {
                let theta = k as f64 * PI / 8.0;
                let p = TwoDetectorParams::new(1.0, a, mu, theta).unwrap();
                let bd = qfi_spectral(&two_detector_family(&p), p.temperature()).unwrap();
                worst = worst.max(bd.quantum_part.abs());
            }
        }
    }
    CheckResult {
        name: "two-detector quantum Fisher part vanishes",
        passed: worst < 1e-12,
        detail: format!("worst |quantum part| {worst:.3e} (tolerance 1e-12)"),
    }
}

fn check_model_identity() -> CheckResult {
    let mut worst = 0.0f64;
    for &a in &A_GRID {
        for &mu in &MU_GRID {
            let s = SingleDetectorParams::new(1.0, a, mu, FRAC_PI_2).unwrap();
            let t = TwoDetectorParams::new(1.0, a, mu, 0.0).unwrap();
            worst = worst.max(rel_err(qfi_single(&s).unwrap().total, qfi_two(&t).unwrap().total));
        }
    }
    CheckResult {
        name: "single (eta = pi/2) equals two-detector (theta = 0)",
        passed: worst < 1e-12,
        detail: format!("worst relative deviation {worst:.3e} (tolerance 1e-12)"),
    }
}

fn check_quantum_part_interior_single() -> CheckResult {
    // at eta = pi/4 the single-detector eigenbasis is T-independent
    let mut worst = 0.0f64;
    for &a in &A_GRID {
        let p = SingleDetectorParams::new(1.0, a, 0.01, FRAC_PI_4).unwrap();
        let bd = qfi_spectral(&single_detector_family(&p), p.temperature()).unwrap();
        worst = worst.max(bd.quantum_part.abs());
    }
    CheckResult {
        name: "fixed-eigenbasis single-detector family is classical",
        passed: worst < 1e-12,
        detail: format!("worst |quantum part| {worst:.3e} (tolerance 1e-12)"),
    }
}

fn check_hawking() -> CheckResult {
    let t = hawking_temperature(&HawkingQuery::new(Some(1.0), None, None).unwrap()).temperature;
    let expect = 1.0 / (8.0 * PI);
    let dev = rel_err(t, expect);
    let fwd = hawking_temperature(&HawkingQuery::new(Some(1.0), None, Some((0.3, 1.7))).unwrap())
        .ratio
        .unwrap();
    let bwd = hawking_temperature(&HawkingQuery::new(Some(1.0), None, Some((1.7, 0.3))).unwrap())
        .ratio
        .unwrap();
    let recip = (fwd * bwd - 1.0).abs();
    CheckResult {
        name: "Hawking conversion and chi-ratio reciprocity",
        passed: dev < 1e-15 && recip < 1e-15,
        detail: format!("T(m=1) deviation {dev:.3e}, reciprocity defect {recip:.3e}"),
    }
}

/// Run the whole suite; prints one line per check and returns the results.
pub fn run_validation() -> Vec<CheckResult> {
    let checks = vec![
        check_closed_vs_spectral(),
        check_eigensystem(),
        check_sld(),
        check_quantum_part(),
        check_quantum_part_interior_single(),
        check_model_identity(),
        check_hawking(),
    ];
    for c in &checks {
        println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        assert!(run_validation().iter().all(|c| c.passed));
    }
}
