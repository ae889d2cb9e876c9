//! Property suites behind the `verify` command. Each suite reports its worst
//! residual against a fixed tolerance.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gates::{lambda_matrix, Gate2x2};
use crate::matrix::CMatrix;
use crate::netlist::{
    build_un_matrix, expand_u2_full, generic_layer_factors, printed_factors, printed_to_netlist,
    un_netlist, ReadOrder,
};
use crate::protocol::{
    coherent_branches, Ancilla, Outcome, Recoverer, enumerate_branches_with, prepare_channel_circuit, prepare_channel_direct,
    success_probability, OutcomeRecord, UnPath,
};
use crate::statevector::StateVector;
use crate::{Channel64, Message64};

use super::report::{CheckResult, Report};

const TIGHT: f64 = 1e-12;
const LOOSE: f64 = 1e-10;

/// Haar-ish random 2x2 unitary: random phases around a random rotation.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Gate2x2<f64> {
    use std::f64::consts::PI;
    let (a, b, c, d) = (
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..PI / 2.0),
    );
    let (s, co) = d.sin_cos();
    let e = |t: f64| Complex::from_polar(1.0, t);
    Gate2x2::new_unchecked([
        [e(a) * co, e(b) * s],
        [-e(c - b + a) * s, e(c) * co],
    ])
}

/// `Λ_n(u)` built column by column from the action on basis states.
pub fn lambda_by_action(n: usize, u: &Gate2x2<f64>) -> CMatrix<f64> {
    let dim = 1usize << (n + 1);
    let all_ones = (1usize << n) - 1;
    let mut m = CMatrix::zeros(dim);
    for col in 0..dim {
        let (controls, y) = (col >> 1, col & 1);
        if controls == all_ones {
            for out in 0..2 {
                m.set(controls << 1 | out, col, u.get(out, y));
            }
        } else {
            m.set(col, col, Complex::new(1.0, 0.0));
        }
    }
    m
}

fn record_diff(a: &[OutcomeRecord<f64>], b: &[OutcomeRecord<f64>]) -> Result<f64> {
    if a.len() != b.len() {
        return Ok(f64::INFINITY);
    }
    let mut worst: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        if x.outcome != y.outcome {
            return Ok(f64::INFINITY);
        }
        worst = worst.max((x.probability - y.probability).abs());
        match (&x.bob_state, &y.bob_state) {
            (Some(s), Some(t)) => worst = worst.max(s.max_abs_diff(t)?),
            (None, None) => {}
            // One side found amplitude where the other found none.
            (Some(_), None) | (None, Some(_)) => worst = worst.max(x.probability.max(y.probability)),
        }
    }
    Ok(worst)
}

/// Bob's unnormalized state for Alice outcome `(m, nbits)`, written down
/// from the encoded amplitudes instead of simulated.
pub fn branch_oracle(msg: &Message64, ch: &Channel64, m: usize, nbits: usize) -> Result<StateVector<f64>> {
    let n = ch.n();
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    let mut amps = vec![Complex::new(0.0, 0.0); dim];
    for k in 0..dim {
        let sign = if (m & k).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        amps[k ^ nbits] = msg.x()[k] * (ch.y()[k ^ nbits] * sign * scale);
    }
    StateVector::from_amplitudes(amps)
}

struct Suite {
    rng: ChaCha8Rng,
    max_n: usize,
    trials: usize,
}

impl Suite {
    fn channel(&mut self, n: usize) -> Result<Channel64> {
        Channel64::random(n, &mut self.rng)
    }

    fn message(&mut self, n: usize) -> Result<Message64> {
        Message64::random(n, &mut self.rng)
    }

    fn lambda_semantics(&mut self) -> Result<CheckResult> {
        let mut worst: f64 = 0.0;
        for _ in 0..self.trials {
            let u = random_unitary(&mut self.rng);
            for n in 0..=self.max_n {
                worst = worst.max(lambda_matrix(n, &u).max_abs_diff(&lambda_by_action(n, &u)).0);
            }
            worst = worst.max(lambda_matrix(0, &u).max_abs_diff(&CMatrix::from_gate(&u)).0);
        }
        let cnot = lambda_matrix(1, &Gate2x2::x());
        worst = worst.max(cnot.max_abs_diff(&lambda_by_action(1, &Gate2x2::x())).0);
        Ok(CheckResult::residual("lambda_semantics", worst, TIGHT))
    }

    fn un_decomposition(&mut self) -> Result<CheckResult> {
        let mut worst: f64 = 0.0;
        for n in 1..=self.max_n {
            for _ in 0..self.trials {
                let ch = self.channel(n)?;
                let m = build_un_matrix(&ch)?;
                worst = worst.max(un_netlist(&ch)?.matrix().max_abs_diff(&m).0);
                worst = worst.max(m.unitarity_residual());
                let generic = printed_to_netlist(&ch, &generic_layer_factors(n), ReadOrder::OperatorProduct)?;
                worst = worst.max(generic.matrix().max_abs_diff(&m).0);
                if let Some(f) = printed_factors(n) {
                    for order in [ReadOrder::OperatorProduct, ReadOrder::AsWritten] {
                        worst = worst.max(printed_to_netlist(&ch, &f, order)?.matrix().max_abs_diff(&m).0);
                    }
                }
            }
        }
        Ok(CheckResult::residual("un_netlist_matches_block_matrix", worst, TIGHT))
    }

    fn written_structure(&mut self) -> Result<Option<CheckResult>> {
        if self.max_n < 2 {
            return Ok(None);
        }
        let mut mismatches = Vec::new();
        for n in 2..=self.max_n {
            let ch = self.channel(n)?;
            let order = if n == 2 { ReadOrder::AsWritten } else { ReadOrder::OperatorProduct };
            let written = printed_to_netlist(&ch, &printed_factors(n).expect("n <= 4"), order)?;
            if written.ops() != un_netlist(&ch)?.ops() {
                mismatches.push(n);
            }
        }
        let worst = if mismatches.is_empty() { 0.0 } else { 1.0 };
        let check = CheckResult::residual("written_factor_sequence", worst, 0.0);
        Ok(Some(if mismatches.is_empty() {
            check
        } else {
            check.with_detail(format!("sequence differs for N in {mismatches:?}"))
        }))
    }

    fn cnot_expansion(&mut self) -> Result<Option<CheckResult>> {
        if self.max_n < 2 {
            return Ok(None);
        }
        let mut worst: f64 = 0.0;
        for _ in 0..self.trials {
            let ch = self.channel(2)?;
            match expand_u2_full(&ch) {
                Ok(nl) => worst = worst.max(nl.matrix().max_abs_diff(&build_un_matrix(&ch)?).0),
                Err(Error::VerificationFailed { max_diff, row, col, .. }) => {
                    return Ok(Some(CheckResult::failed(
                        "u2_cnot_expansion",
                        LOOSE,
                        format!("max |difference| {max_diff:e} at ({row}, {col})"),
                    )))
                }
                Err(e) => return Err(e),
            }
        }
        Ok(Some(CheckResult::residual("u2_cnot_expansion", worst, LOOSE)))
    }

    /// Success law, completeness and success-branch fidelity in one pass.
    fn protocol_laws(&mut self) -> Result<[CheckResult; 3]> {
        let (mut law, mut total, mut fidelity): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for n in 1..=self.max_n {
            for _ in 0..self.trials {
                let ch = self.channel(n)?;
                let theory = success_probability(&ch);
                for _ in 0..3 {
                    let msg = self.message(n)?;
                    let records = enumerate_branches_with(&msg, &ch, UnPath::Matrix)?;
                    let s: f64 = records.iter().filter(|r| r.succeeded()).map(|r| r.probability).sum();
                    let t: f64 = records.iter().map(|r| r.probability).sum();
                    law = law.max((s - theory).abs());
                    total = total.max((t - 1.0).abs());
                    for r in records.iter().filter(|r| r.succeeded()) {
                        fidelity = fidelity.max((1.0 - r.fidelity).abs());
                    }
                }
            }
        }
        Ok([
            CheckResult::residual("success_probability_law", law, LOOSE),
            CheckResult::residual("probability_completeness", total, LOOSE),
            CheckResult::residual("success_branch_fidelity", fidelity, LOOSE),
        ])
    }

    fn recovery_paths(&mut self) -> Result<CheckResult> {
        let mut worst: f64 = 0.0;
        for n in 1..=self.max_n {
            let ch = self.channel(n)?;
            let msg = self.message(n)?;
            let base = enumerate_branches_with(&msg, &ch, UnPath::Matrix)?;
            worst = worst.max(record_diff(&base, &enumerate_branches_with(&msg, &ch, UnPath::Netlist)?)?);
            if n == 2 {
                // CNOT path is held to the looser tolerance of its own verification.
                let d = record_diff(&base, &enumerate_branches_with(&msg, &ch, UnPath::Cnot)?)?;
                worst = worst.max(d * TIGHT / LOOSE);
            }
        }
        Ok(CheckResult::residual("matrix_vs_netlist_recovery", worst, TIGHT))
    }

    /// Every Alice outcome for `N <= 3`, 200 random ones at `N = 4`.
    fn correction_rule(&mut self) -> Result<CheckResult> {
        let mut worst: f64 = 0.0;
        let mut outcomes = 0usize;
        for n in 1..=self.max_n {
            let ch = self.channel(n)?;
            let msg = self.message(n)?;
            let rec = Recoverer::new(&ch, UnPath::Matrix)?;
            let message = msg.to_state();
            let all = 1usize << (2 * n);
            let picks: Vec<usize> = if n <= 3 {
                (0..all).collect()
            } else {
                (0..200).map(|_| self.rng.random_range(0..all)).collect()
            };
            for alice in picks {
                let (m, nb) = (alice >> n, alice & ((1 << n) - 1));
                let out = Outcome::new(n, m, nb, Ancilla::Unmeasured)?;
                let r = rec.recover(&branch_oracle(&msg, &ch, m, nb)?, &out)?;
                let f = match &r.success {
                    Some(s) => s.fidelity(&message)?,
                    None => 0.0,
                };
                worst = worst.max((1.0 - f).abs());
                outcomes += 1;
            }
        }
        Ok(CheckResult::residual("correction_rule_restores_message", worst, LOOSE)
            .with_detail(format!("{outcomes} outcomes")))
    }

    fn channel_preparation(&mut self) -> Result<CheckResult> {
        let mut worst: f64 = 0.0;
        for n in 1..=self.max_n {
            for _ in 0..self.trials {
                let ch = self.channel(n)?;
                let out = prepare_channel_circuit(&ch)?.apply(&StateVector::basis_state(2 * n, 0)?)?;
                worst = worst.max(out.max_abs_diff(&prepare_channel_direct(&ch))?);
            }
        }
        Ok(CheckResult::residual("channel_preparation_circuit", worst, LOOSE))
    }

    fn deferred_measurement(&mut self) -> Result<CheckResult> {
        let mut worst: f64 = 0.0;
        for n in 1..=self.max_n.min(3) {
            let ch = self.channel(n)?;
            let msg = self.message(n)?;
            let measured = enumerate_branches_with(&msg, &ch, UnPath::Matrix)?;
            worst = worst.max(record_diff(&measured, &coherent_branches(&msg, &ch)?)?);
        }
        Ok(CheckResult::residual("deferred_measurement_equivalence", worst, TIGHT))
    }
}

/// Runs every suite for `N = 1..=max_n` with `trials` random draws each.
pub fn run_verify(max_n: usize, trials: usize, seed: u64) -> Result<Report> {
    if !(1..=4).contains(&max_n) {
        return Err(Error::Config {
            field: "max_n".into(),
            msg: format!("must be in 1..=4, got {max_n}"),
        });
    }
    if trials == 0 {
        return Err(Error::Config {
            field: "trials".into(),
            msg: "must be at least 1".into(),
        });
    }
    let mut suite = Suite {
        rng: ChaCha8Rng::seed_from_u64(seed),
        max_n,
        trials,
    };
    let mut report = Report::new("verify");
    report.push_check(suite.lambda_semantics()?);
    report.push_check(suite.un_decomposition()?);
    if let Some(c) = suite.written_structure()? {
        report.push_check(c);
    }
    if let Some(c) = suite.cnot_expansion()? {
        report.push_check(c);
    }
    for c in suite.protocol_laws()? {
        report.push_check(c);
    }
    report.push_check(suite.correction_rule()?);
    report.push_check(suite.recovery_paths()?);
    report.push_check(suite.channel_preparation()?);
    report.push_check(suite.deferred_measurement()?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(random_unitary(&mut rng).is_unitary(1e-12));
        }
    }

    #[test]
    fn verify_small_passes() {
        let r = run_verify(2, 3, 1).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(r.checks.iter().any(|c| c.name == "u2_cnot_expansion"));
    }

    #[test]
    fn verify_rejects_bad_args() {
        assert!(run_verify(5, 1, 0).is_err());
        assert!(run_verify(2, 0, 0).is_err());
    }
}
