use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::protocol::{
    enumerate_branches_with, shot_rng, success_probability, OutcomeRecord, ShotSampler,
};
use crate::{Channel64, Message64};

use super::config::{un_path_name, ExperimentConfig, Mode};
use super::report::{BranchRow, CheckResult, ConfigEcho, Report, ShotTally};

const EXACT_TOL: f64 = 1e-10;

fn echo(cfg: &ExperimentConfig, ch: &Channel64, msg: &Message64) -> ConfigEcho {
    ConfigEcho {
        n: cfg.n,
        mode: cfg.mode.to_string(),
        shots: (cfg.mode == Mode::Sample).then_some(cfg.shots),
        seed: cfg.seed,
        un_path: un_path_name(cfg.un_path).to_string(),
        channel_y: ch.y().to_vec(),
        message_re: msg.x().iter().map(|a| a.re).collect(),
        message_im: msg.x().iter().map(|a| a.im).collect(),
    }
}

fn mean_success_fidelity<'a, I: Iterator<Item = &'a OutcomeRecord<f64>>>(records: I, weighted: bool) -> Option<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for r in records.filter(|r| r.succeeded()) {
        let w = if weighted { r.probability } else { 1.0 };
        num += w * r.fidelity;
        den += w;
    }
    (den > 0.0).then(|| num / den)
}

/// Exact enumeration of all `2·4^N` branches.
pub fn run_exact(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    if cfg.mode != Mode::Exact {
        return Err(Error::Config {
            field: "mode".into(),
            msg: "run_exact needs mode = exact".into(),
        });
    }
    let ch = cfg.resolve_channel()?;
    let msg = cfg.resolve_message()?;
    let records = enumerate_branches_with(&msg, &ch, cfg.un_path)?;

    let theory = success_probability(&ch);
    let observed: f64 = records.iter().filter(|r| r.succeeded()).map(|r| r.probability).sum();
    let total: f64 = records.iter().map(|r| r.probability).sum();
    let worst_fidelity = records
        .iter()
        .filter(|r| r.succeeded())
        .map(|r| (1.0 - r.fidelity).abs())
        .fold(0.0, f64::max);

    let mut report = Report::new("teleport");
    report.config = Some(echo(cfg, &ch, &msg));
    report.success_probability_theoretical = Some(theory);
    report.success_probability_observed = Some(observed);
    report.mean_success_fidelity = mean_success_fidelity(records.iter(), true);
    report.branches = Some(records.iter().map(BranchRow::from_record).collect());
    report.push_check(CheckResult::residual("probabilities_sum_to_one", (total - 1.0).abs(), EXACT_TOL));
    report.push_check(CheckResult::residual(
        "success_probability_matches_closed_form",
        (observed - theory).abs(),
        EXACT_TOL,
    ));
    report.push_check(CheckResult::residual("success_branch_fidelity_is_one", worst_fidelity, EXACT_TOL));
    Ok(report)
}

/// Sampled runs; shot `i` draws from `shot_rng(seed, i)`.
pub fn run_sampled(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    if cfg.mode != Mode::Sample {
        return Err(Error::Config {
            field: "mode".into(),
            msg: "run_sampled needs mode = sample".into(),
        });
    }
    let ch = cfg.resolve_channel()?;
    let msg = cfg.resolve_message()?;
    let sampler = ShotSampler::new(&msg, &ch, cfg.un_path)?;
    let shots: Vec<OutcomeRecord<f64>> = (0..cfg.shots)
        .into_par_iter()
        .map(|i| sampler.shot(&mut shot_rng(cfg.seed, i)))
        .collect::<Result<_>>()?;

    let successes = shots.iter().filter(|r| r.succeeded()).count() as u64;
    let rate = successes as f64 / cfg.shots as f64;
    let theory = success_probability(&ch);
    let se_theory = (theory * (1.0 - theory) / cfg.shots as f64).max(0.0).sqrt();
    let se_observed = (rate * (1.0 - rate) / cfg.shots as f64).max(0.0).sqrt();
    let mut counts = BTreeMap::new();
    for r in &shots {
        let key = format!(
            "{}/{}/{}",
            r.outcome.m_string(),
            r.outcome.n_string(),
            u8::from(!r.succeeded())
        );
        *counts.entry(key).or_insert(0u64) += 1;
    }
    let worst_fidelity = shots
        .iter()
        .filter(|r| r.succeeded())
        .map(|r| (1.0 - r.fidelity).abs())
        .fold(0.0, f64::max);

    let mut report = Report::new("teleport");
    report.config = Some(echo(cfg, &ch, &msg));
    report.success_probability_theoretical = Some(theory);
    report.success_probability_observed = Some(rate);
    report.mean_success_fidelity = mean_success_fidelity(shots.iter(), false);
    report.tally = Some(ShotTally {
        shots: cfg.shots,
        successes,
        failures: cfg.shots - successes,
        standard_error: se_observed,
        outcome_counts: counts,
    });
    let tol = (3.0 * se_theory).max(1e-12);
    report.push_check(
        CheckResult::residual("success_rate_within_3_standard_errors", (rate - theory).abs(), tol)
            .with_detail(format!("binomial standard error {se_theory:e} at p = {theory}")),
    );
    report.push_check(CheckResult::residual("success_shot_fidelity_is_one", worst_fidelity, EXACT_TOL));
    Ok(report)
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report> {
    match cfg.mode {
        Mode::Exact => run_exact(cfg),
        Mode::Sample => run_sampled(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Source;
    use crate::protocol::UnPath;

    fn cfg(n: usize, channel: Channel64) -> ExperimentConfig {
        ExperimentConfig {
            n,
            channel: Source::Given(channel),
            message: Source::Random { seed: 11 },
            mode: Mode::Exact,
            shots: 1,
            seed: 5,
            un_path: UnPath::Matrix,
        }
    }

    #[test]
    fn exact_maximal_two_qubits() {
        let r = run_exact(&cfg(2, Channel64::maximal(2).unwrap())).unwrap();
        assert!((r.success_probability_observed.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.passed);
        assert_eq!(r.branches.as_ref().unwrap().len(), 32);
    }

    #[test]
    fn exact_three_qubits_quarter_amplitude() {
        // y0 = 0.25, the rest share the remaining weight equally.
        let rest = ((1.0 - 0.0625) / 7.0f64).sqrt();
        let mut y = vec![rest; 8];
        y[0] = 0.25;
        let r = run_exact(&cfg(3, Channel64::new(3, y).unwrap())).unwrap();
        assert!((r.success_probability_observed.unwrap() - 0.5).abs() < 1e-10);
        assert!(r.passed);
    }

    #[test]
    fn cnot_and_matrix_paths_agree() {
        let ch = Channel64::new(2, vec![0.3, 0.4, 0.5, 0.5f64.sqrt()]).unwrap();
        let mut c = cfg(2, ch);
        let a = run_exact(&c).unwrap();
        c.un_path = UnPath::Cnot;
        let b = run_exact(&c).unwrap();
        for (x, y) in a.branches.unwrap().iter().zip(b.branches.unwrap().iter()) {
            assert!((x.probability - y.probability).abs() < 1e-10);
            assert!((x.fidelity - y.fidelity).abs() < 1e-10);
        }
    }

    #[test]
    fn sampled_single_shot_maximal() {
        let mut c = cfg(1, Channel64::maximal(1).unwrap());
        c.mode = Mode::Sample;
        let r = run_sampled(&c).unwrap();
        assert_eq!(r.tally.as_ref().unwrap().successes, 1);
        assert!((r.mean_success_fidelity.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.passed);
    }

    #[test]
    fn sampled_report_is_reproducible() {
        let mut c = cfg(1, Channel64::new(1, vec![0.6, 0.8]).unwrap());
        c.mode = Mode::Sample;
        c.shots = 2000;
        let a = run_sampled(&c).unwrap().to_json().unwrap();
        let b = run_sampled(&c).unwrap().to_json().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wrong_mode_rejected() {
        let c = cfg(1, Channel64::maximal(1).unwrap());
        assert!(run_sampled(&c).is_err());
    }
}
