//! Monte Carlo simulation of the optimal estimation protocol: prepare the
//! detector state at the true temperature, measure the eigenprojectors of
//! the symmetric logarithmic derivative, feed each outcome through the
//! locally optimal estimator, and compare the empirical variance against the
//! Cramer-Rao bound `var >= 1 / (n J)`.

use serde::{Deserialize, Serialize};

use crate::detector::DetectorParams;
use crate::error::{Error, Result};
use crate::matrix::{eigh, HermitianMatrix};
use crate::qfi::{classical_fisher, qfi_spectral, sld, Povm, SUPPORT_CUTOFF};
use crate::rng::CounterRng;

/// Outcome tally of a batch of identical measurements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    /// `outcome_counts[k]` is the number of shots that landed in outcome `k`.
    pub outcome_counts: Vec<u64>,
    pub n_shots: u64,
    pub seed: u64,
}

/// Summary of one estimation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub parameter_true: f64,
    /// Mean of the per-shot estimator values; the reported estimate.
    pub estimate_mean: f64,
    /// Sampling variance of `estimate_mean`: the per-shot sample variance
    /// (n - 1 denominator) divided by `n_shots`. Saturation means this
    /// approaches `1 / (n_shots * qfi_used)`.
    pub estimate_variance: f64,
    /// Quantum Fisher information at the true parameter (per shot).
    pub qfi_used: f64,
    /// Cramer-Rao bound on the per-shot variance, `1 / qfi_used`.
    pub crb_per_shot: f64,
    pub n_shots: u64,
    /// `sqrt(s^2 / n)`, the standard error of `estimate_mean`.
    pub standard_error: f64,
}

/// Draw `n_shots` i.i.d. outcomes of `povm` on `rho` by inverse-CDF sampling.
///
/// Born-rule probabilities are clamped to `[0, 1]` and renormalized; a total
/// off from 1 by more than `1e-8` is rejected. Deterministic for fixed seed.
pub fn sample_measurements(
    rho: &HermitianMatrix,
    povm: &Povm,
    n_shots: u64,
    seed: u64,
) -> Result<ShotRecord> {
    if povm.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(povm.dim(), rho.dim()));
    }
    let mut probs: Vec<f64> = povm
        .elements()
        .iter()
        .map(|e| e.as_matrix().matmul(rho.as_matrix()).trace().re.clamp(0.0, 1.0))
        .collect();
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidProbabilities { total });
    }
    for p in probs.iter_mut() {
        *p /= total;
    }
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in &probs {
        acc += p;
        cdf.push(acc);
    }
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }

    let mut rng = CounterRng::new(seed);
    let mut outcome_counts = vec![0u64; probs.len()];
    for _ in 0..n_shots {
        outcome_counts[rng.sample_cdf(&cdf)] += 1;
    }
    Ok(ShotRecord { outcome_counts, n_shots, seed })
}

fn report_from_counts(
    t_true: f64,
    qfi: f64,
    values: &[f64],
    record: &ShotRecord,
) -> EstimationReport {
    let n = record.n_shots as f64;
    let mean: f64 = record
        .outcome_counts
        .iter()
        .zip(values)
        .map(|(&c, &v)| c as f64 * v)
        .sum::<f64>()
        / n;
    // per-shot sample variance with the n - 1 denominator
    let ss: f64 = record
        .outcome_counts
        .iter()
        .zip(values)
        .map(|(&c, &v)| c as f64 * (v - mean) * (v - mean))
        .sum();
    let per_shot_variance = if record.n_shots > 1 { ss / (n - 1.0) } else { 0.0 };
    let estimate_variance = per_shot_variance / n;
    EstimationReport {
        parameter_true: t_true,
        estimate_mean: mean,
        estimate_variance,
        qfi_used: qfi,
        crb_per_shot: 1.0 / qfi,
        n_shots: record.n_shots,
        standard_error: estimate_variance.sqrt(),
    }
}

/// Run the three-step protocol with the optimal (SLD eigenprojector)
/// measurement: outcome `k` contributes the estimator eigenvalue
/// `T + l_k / J`, where `l_k` is the SLD eigenvalue of that projector.
pub fn run_estimation(
    params: &DetectorParams,
    n_shots: u64,
    seed: u64,
) -> Result<EstimationReport> {
    if params.acceleration() <= 0.0 {
        return Err(Error::InvalidParameter(
            "the protocol needs a > 0 (the state carries no temperature signal at a = 0)".into(),
        ));
    }
    let t_true = params.temperature();
    let family = params.family();
    let breakdown = qfi_spectral(&family, t_true)?;
    let qfi = breakdown.total;
    if qfi <= 0.0 {
        return Err(Error::NonPositiveFisher(qfi));
    }
    let l = sld(&family, t_true)?;
    let l_eig = eigh(&l.matrix)?;
    let povm = Povm::from_eigenvectors(&l_eig.eigenvectors)?;
    let values: Vec<f64> = l_eig.eigenvalues.iter().map(|&lk| t_true + lk / qfi).collect();

    let rho = family.state(t_true)?;
    let record = sample_measurements(&rho, &povm, n_shots, seed)?;
    Ok(report_from_counts(t_true, qfi, &values, &record))
}

/// Like [`run_estimation`] but with an arbitrary measurement.
///
/// The estimator is the score-based locally unbiased one for that
/// measurement: outcome `x` maps to `T + (dp_x / p_x) / F`, with `F` the
/// classical Fisher information of the outcome distribution. Its variance is
/// `1/F >= 1/J`, so `qfi_used` (still the quantum value) exposes the gap a
/// suboptimal measurement leaves open.
pub fn run_estimation_with_povm(
    params: &DetectorParams,
    povm: &Povm,
    n_shots: u64,
    seed: u64,
) -> Result<EstimationReport> {
    if params.acceleration() <= 0.0 {
        return Err(Error::InvalidParameter("the protocol needs a > 0".into()));
    }
    let t_true = params.temperature();
    let family = params.family();
    let qfi = qfi_spectral(&family, t_true)?.total;
    if qfi <= 0.0 {
        return Err(Error::NonPositiveFisher(qfi));
    }
    let fisher = classical_fisher(&family, t_true, povm)?;
    if fisher <= 0.0 {
        return Err(Error::NonPositiveFisher(fisher));
    }
    let rho = family.state(t_true)?;
    let drho = family.derivative(t_true)?;
    let values: Vec<f64> = povm
        .elements()
        .iter()
        .map(|e| {
            let p = e.as_matrix().matmul(rho.as_matrix()).trace().re;
            let dp = e.as_matrix().matmul(drho.as_matrix()).trace().re;
            if p > SUPPORT_CUTOFF {
                t_true + (dp / p) / fisher
            } else {
                t_true
            }
        })
        .collect();
    let record = sample_measurements(&rho, povm, n_shots, seed)?;
    Ok(report_from_counts(t_true, qfi, &values, &record))
}

/// Relative saturation defect `variance * n * J - 1`; approximately zero when
/// the run saturates the Cramer-Rao bound, positive when variance exceeds it.
pub fn cramer_rao_gap(report: &EstimationReport) -> f64 {
    report.estimate_variance * report.n_shots as f64 * report.qfi_used - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::{SingleDetectorParams, TwoDetectorParams};
    use std::f64::consts::{FRAC_PI_2, TAU};

    const DEFAULT_TEST_SEED: u64 = 0;

    fn single(a: f64, mu: f64, eta: f64) -> DetectorParams {
        DetectorParams::Single(SingleDetectorParams::new(1.0, a, mu, eta).unwrap())
    }

    #[test]
    fn zero_shots_gives_empty_counts() {
        let rho = HermitianMatrix::diagonal(&[0.5, 0.5]).unwrap();
        let povm = Povm::computational(2).unwrap();
        let rec = sample_measurements(&rho, &povm, 0, 1).unwrap();
        assert_eq!(rec.outcome_counts, vec![0, 0]);
        assert_eq!(rec.n_shots, 0);
    }

    #[test]
    fn certainty_case_lands_in_one_outcome() {
        let rho = HermitianMatrix::diagonal(&[0.0, 1.0]).unwrap();
        let povm = Povm::computational(2).unwrap();
        let rec = sample_measurements(&rho, &povm, 1000, 9).unwrap();
        assert_eq!(rec.outcome_counts, vec![0, 1000]);
    }

    #[test]
    fn binomial_counts_within_five_sigma() {
        let rho = HermitianMatrix::diagonal(&[0.5, 0.5]).unwrap();
        let povm = Povm::computational(2).unwrap();
        let n = 1_000_000u64;
        let rec = sample_measurements(&rho, &povm, n, 2024).unwrap();
        let sigma = (n as f64 * 0.25).sqrt();
        for &c in &rec.outcome_counts {
            assert!((c as f64 - 500_000.0).abs() < 5.0 * sigma, "count {c}");
        }
    }

    #[test]
    fn rejects_unnormalized_probabilities() {
        let rho = HermitianMatrix::diagonal(&[0.6, 0.6]).unwrap();
        let povm = Povm::computational(2).unwrap();
        assert!(matches!(
            sample_measurements(&rho, &povm, 10, 0),
            Err(Error::InvalidProbabilities { .. })
        ));
    }

    #[test]
    fn estimation_is_deterministic() {
        let p = single(TAU, 0.01, FRAC_PI_2);
        let a = run_estimation(&p, 2, 77).unwrap();
        let b = run_estimation(&p, 2, 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn estimation_mean_and_variance_consistent() {
        let p = single(TAU, 0.01, FRAC_PI_2);
        let rep = run_estimation(&p, 100_000, DEFAULT_TEST_SEED).unwrap();
        assert!((rep.estimate_mean - 1.0).abs() < 3.0 * rep.standard_error);
        let gap = cramer_rao_gap(&rep);
        assert!(gap.abs() < 0.05, "gap = {gap}");
        let expected = rep.crb_per_shot / rep.n_shots as f64;
        assert!((rep.estimate_variance - expected).abs() / expected < 0.05);
    }

    #[test]
    fn crb_identical_across_models_at_matching_angles() {
        let s = single(TAU, 0.01, FRAC_PI_2);
        let t = DetectorParams::Two(TwoDetectorParams::new(1.0, TAU, 0.01, 0.0).unwrap());
        let rs = run_estimation(&s, 100, 5).unwrap();
        let rt = run_estimation(&t, 100, 5).unwrap();
        let rel = (rs.crb_per_shot - rt.crb_per_shot).abs() / rs.crb_per_shot;
        assert!(rel < 1e-12, "rel = {rel}");
    }

    #[test]
    fn unbiased_over_many_seeds() {
        let p = single(TAU, 0.01, FRAC_PI_2);
        let n = 10_000u64;
        let mut means = Vec::new();
        for seed in 0..100u64 {
            means.push(run_estimation(&p, n, seed).unwrap().estimate_mean);
        }
        let grand_mean: f64 = means.iter().sum::<f64>() / means.len() as f64;
        let var: f64 = means.iter().map(|m| (m - grand_mean).powi(2)).sum::<f64>()
            / (means.len() - 1) as f64;
        let grand_se = (var / means.len() as f64).sqrt();
        assert!(
            (grand_mean - 1.0).abs() < 4.0 * grand_se,
            "grand mean {grand_mean}, se {grand_se}"
        );
    }

    #[test]
    fn suboptimal_measurement_inflates_variance() {
        let params =
            SingleDetectorParams::new(1.0, TAU, 0.01, std::f64::consts::FRAC_PI_4).unwrap();
        let p = DetectorParams::Single(params);
        let family = p.family();
        let t = p.temperature();
        let qfi = qfi_spectral(&family, t).unwrap().total;
        let comp = Povm::computational(2).unwrap();
        let fisher = classical_fisher(&family, t, &comp).unwrap();
        assert!(fisher < qfi);

        let rep = run_estimation_with_povm(&p, &comp, 200_000, 11).unwrap();
        let gap = cramer_rao_gap(&rep);
        // variance tracks 1/F, so the gap sits near J/F - 1 > 0
        let expected = qfi / fisher - 1.0;
        assert!(gap > 0.5 * expected, "gap = {gap}, expected about {expected}");
    }

    #[test]
    fn gap_examples() {
        let synthetic = EstimationReport {
            parameter_true: 1.0,
            estimate_mean: 1.0,
            estimate_variance: 1.0 / (100.0 * 4.0),
            qfi_used: 4.0,
            crb_per_shot: 0.25,
            n_shots: 100,
            standard_error: 0.05,
        };
        assert!(cramer_rao_gap(&synthetic).abs() < 1e-12);
        let doubled = EstimationReport {
            estimate_variance: 2.0 / (100.0 * 4.0),
            ..synthetic.clone()
        };
        assert!((cramer_rao_gap(&doubled) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_zero_signal_runs() {
        let p = single(0.0, 0.01, FRAC_PI_2);
        assert!(run_estimation(&p, 10, 0).is_err());
        let p = single(TAU, 0.0, FRAC_PI_2);
        assert!(run_estimation(&p, 10, 0).is_err());
    }

    #[test]
    fn split_batches_merge_to_plain_totals() {
        // counts merge associatively across per-batch child streams
        let rho = HermitianMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let povm = Povm::computational(2).unwrap();
        let parent = crate::rng::CounterRng::new(99);
        let mut merged = [0u64; 2];
        for k in 0..4u64 {
            let rec = sample_measurements(&rho, &povm, 2500, parent.split(k).seed()).unwrap();
            for (m, c) in merged.iter_mut().zip(&rec.outcome_counts) {
                *m += c;
            }
        }
        assert_eq!(merged.iter().sum::<u64>(), 10_000);
        assert!((merged[1] as f64 / 10_000.0 - 0.75).abs() < 0.05);
    }

    #[test]
    fn estimator_values_saturate_in_expectation() {
        // Tr[rho E] = T and Tr[rho E^2] - T^2 = 1/J, evaluated exactly from
        // the measurement distribution rather than from samples.
        let p = single(TAU, 0.01, FRAC_PI_2);
        let family = p.family();
        let t = p.temperature();
        let qfi = qfi_spectral(&family, t).unwrap().total;
        let l = sld(&family, t).unwrap();
        let l_eig = eigh(&l.matrix).unwrap();
        let rho = family.state(t).unwrap();
        let mut mean = 0.0;
        let mut second = 0.0;
        for k in 0..2 {
            let v = l_eig.eigenvector(k);
            let prob = rho.expectation(&v);
            let value = t + l_eig.eigenvalues[k] / qfi;
            mean += prob * value;
            second += prob * value * value;
        }
        assert!((mean - t).abs() < 1e-10);
        let var = second - mean * mean;
        assert!((var - 1.0 / qfi).abs() / (1.0 / qfi) < 1e-9);
    }
}

