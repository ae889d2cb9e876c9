//! Bob's recovery step, exact branch enumeration, sampled shots and the
//! coherently controlled variant.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{ChannelSpec, MessageSpec};
use crate::error::{Error, Result};
use crate::gates::Gate2x2;
use crate::matrix::CMatrix;
use crate::netlist::{build_un_matrix, expand_u2_full, un_netlist, GateOp, Netlist};
use crate::scalar::Real;
use crate::statevector::{q, StateVector};

use super::{alice_encode, initial_state, Ancilla, CorrectionPlan, Outcome};

/// How `U_N` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnPath {
    /// Block-diagonal matrix times vector.
    Matrix,
    /// X layers and `Λ_N(u_i)` ops.
    Netlist,
    /// Rotations and CNOTs only; `N = 2`.
    Cnot,
}

/// One branch of the protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeRecord<T> {
    pub outcome: Outcome,
    /// Joint probability of Alice's bits and the ancilla bit.
    pub probability: T,
    /// Bob's normalized state after the Pauli corrections; `None` when the
    /// branch has zero probability.
    pub bob_state: Option<StateVector<T>>,
    /// Fidelity of `bob_state` with the message (0 for empty branches).
    pub fidelity: T,
}

impl<T: Real> OutcomeRecord<T> {
    pub fn succeeded(&self) -> bool {
        self.outcome.ancilla() == Ancilla::Zero
    }
}

/// Result of Bob's ancilla-assisted recovery on one Alice branch.
#[derive(Clone, Debug, PartialEq)]
pub struct Recovery<T> {
    /// `P(ancilla = 0 | branch)`.
    pub p_success: T,
    /// `P(ancilla = 1 | branch)`.
    pub p_failure: T,
    /// Normalized, corrected state on ancilla = 0.
    pub success: Option<StateVector<T>>,
    /// Normalized state on ancilla = 1 with the same corrections applied.
    pub failure: Option<StateVector<T>>,
}

enum UnOperator<T> {
    Matrix(CMatrix<T>),
    Program(Netlist<T>),
}

/// Bob's recovery with `U_N` built once for a channel.
pub struct Recoverer<T> {
    n: usize,
    op: UnOperator<T>,
}

impl<T: Real> Recoverer<T> {
    pub fn new(ch: &ChannelSpec<T>, path: UnPath) -> Result<Self> {
        let op = match path {
            UnPath::Matrix => UnOperator::Matrix(build_un_matrix(ch)?),
            UnPath::Netlist => UnOperator::Program(un_netlist(ch)?),
            UnPath::Cnot => UnOperator::Program(expand_u2_full(ch)?),
        };
        Ok(Self { n: ch.n(), op })
    }

    /// Applies `U_N` to `branch ⊗ |0⟩_a` and returns the unnormalized
    /// ancilla-0 and ancilla-1 parts of Bob's state.
    pub fn apply_un(&self, branch: &StateVector<T>) -> Result<(StateVector<T>, StateVector<T>)> {
        if branch.n_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: branch.n_qubits(),
            });
        }
        let ancilla = StateVector::basis_state(1, 0)?;
        let extended = branch.tensor(&ancilla);
        let evolved = match &self.op {
            UnOperator::Matrix(m) => StateVector::from_amplitudes(m.mul_vec(extended.amplitudes()))?,
            UnOperator::Program(nl) => nl.apply(&extended)?,
        };
        let amps = evolved.amplitudes();
        let zero: Vec<Complex<T>> = amps.iter().step_by(2).copied().collect();
        let one: Vec<Complex<T>> = amps.iter().skip(1).step_by(2).copied().collect();
        Ok((StateVector::from_amplitudes(zero)?, StateVector::from_amplitudes(one)?))
    }

    pub fn recover(&self, branch: &StateVector<T>, out: &Outcome) -> Result<Recovery<T>> {
        let total = branch.norm_sqr();
        if total <= T::zero() {
            return Err(Error::ZeroNorm);
        }
        let (zero, one) = self.apply_un(branch)?;
        let plan = CorrectionPlan::from_outcome(out);
        let finish = |part: StateVector<T>| -> Result<Option<StateVector<T>>> {
            if part.norm_sqr() <= T::zero() {
                Ok(None)
            } else {
                plan.apply(&part.normalized()?).map(Some)
            }
        };
        Ok(Recovery {
            p_success: zero.norm_sqr() / total,
            p_failure: one.norm_sqr() / total,
            success: finish(zero)?,
            failure: finish(one)?,
        })
    }
}

/// Bob's recovery for a single Alice branch (unnormalized `N`-qubit state).
pub fn bob_recover<T: Real>(
    branch: &StateVector<T>,
    ch: &ChannelSpec<T>,
    out: &Outcome,
    path: UnPath,
) -> Result<Recovery<T>> {
    Recoverer::new(ch, path)?.recover(branch, out)
}

fn fidelity_or_zero<T: Real>(state: &Option<StateVector<T>>, message: &StateVector<T>) -> Result<T> {
    match state {
        Some(s) => s.fidelity(message),
        None => Ok(T::zero()),
    }
}

fn records_for_branch<T: Real>(
    recoverer: &Recoverer<T>,
    message: &StateVector<T>,
    bob: &StateVector<T>,
    out: Outcome,
) -> Result<[OutcomeRecord<T>; 2]> {
    let p = bob.norm_sqr();
    if p <= T::zero() {
        let empty = |a| OutcomeRecord {
            outcome: out.with_ancilla(a),
            probability: T::zero(),
            bob_state: None,
            fidelity: T::zero(),
        };
        return Ok([empty(Ancilla::Zero), empty(Ancilla::One)]);
    }
    let r = recoverer.recover(bob, &out)?;
    Ok([
        OutcomeRecord {
            outcome: out.with_ancilla(Ancilla::Zero),
            probability: p * r.p_success,
            fidelity: fidelity_or_zero(&r.success, message)?,
            bob_state: r.success,
        },
        OutcomeRecord {
            outcome: out.with_ancilla(Ancilla::One),
            probability: p * r.p_failure,
            fidelity: fidelity_or_zero(&r.failure, message)?,
            bob_state: r.failure,
        },
    ])
}

/// Every `(m, n, ancilla)` branch with its exact probability, using the
/// matrix form of `U_N`.
pub fn enumerate_branches<T: Real>(msg: &MessageSpec<T>, ch: &ChannelSpec<T>) -> Result<Vec<OutcomeRecord<T>>> {
    enumerate_branches_with(msg, ch, UnPath::Matrix)
}

/// Records are ordered by `m`, then `n`, then ancilla (0 before 1).
pub fn enumerate_branches_with<T: Real>(
    msg: &MessageSpec<T>,
    ch: &ChannelSpec<T>,
    path: UnPath,
) -> Result<Vec<OutcomeRecord<T>>> {
    let n = ch.n();
    let encoded = alice_encode(&initial_state(msg, ch)?, n)?;
    let message = msg.to_state();
    let recoverer = Recoverer::new(ch, path)?;
    let mut records = Vec::with_capacity(2 << (2 * n));
    for alice in 0..1usize << (2 * n) {
        let out = Outcome::new(n, alice >> n, alice & ((1 << n) - 1), Ancilla::Unmeasured)?;
        let bob = encoded.slice_leading(2 * n, alice)?;
        records.extend(records_for_branch(&recoverer, &message, &bob, out)?);
    }
    Ok(records)
}

/// Per-shot generator: ChaCha8 seeded with `seed`, stream `index`.
pub fn shot_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sampled protocol runs for a fixed message and channel.
///
/// Alice's `2N` qubits are measured first; Bob then applies `U_N`, reads the
/// ancilla and applies the Pauli corrections as classically controlled gates.
pub struct ShotSampler<T> {
    n: usize,
    encoded: StateVector<T>,
    message: StateVector<T>,
    recoverer: Recoverer<T>,
}

impl<T: Real> ShotSampler<T> {
    pub fn new(msg: &MessageSpec<T>, ch: &ChannelSpec<T>, path: UnPath) -> Result<Self> {
        let n = ch.n();
        Ok(Self {
            n,
            encoded: alice_encode(&initial_state(msg, ch)?, n)?,
            message: msg.to_state(),
            recoverer: Recoverer::new(ch, path)?,
        })
    }

    pub fn shot<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<OutcomeRecord<T>> {
        let n = self.n;
        let mut state = self.encoded.clone();
        let mut probability = T::one();
        let mut alice = 0usize;
        for k in 1..=2 * n {
            let draw = T::lit(rng.random::<f64>());
            let (bit, post, p) = state.measure_qubit(q(k), draw)?;
            alice = alice << 1 | bit as usize;
            probability = probability * p;
            state = post;
        }
        let out = Outcome::new(n, alice >> n, alice & ((1 << n) - 1), Ancilla::Unmeasured)?;
        let bob = state.slice_leading(2 * n, alice)?;
        let r = self.recoverer.recover(&bob, &out)?;
        let draw = T::lit(rng.random::<f64>());
        let (ancilla, p, bob_state) = if draw < r.p_success {
            (Ancilla::Zero, r.p_success, r.success)
        } else {
            (Ancilla::One, r.p_failure, r.failure)
        };
        Ok(OutcomeRecord {
            outcome: out.with_ancilla(ancilla),
            probability: probability * p,
            fidelity: fidelity_or_zero(&bob_state, &self.message)?,
            bob_state,
        })
    }
}

/// One full sampled run.
pub fn sample_shot<T: Real, R: Rng + ?Sized>(
    msg: &MessageSpec<T>,
    ch: &ChannelSpec<T>,
    rng: &mut R,
) -> Result<OutcomeRecord<T>> {
    ShotSampler::new(msg, ch, UnPath::Matrix)?.shot(rng)
}

/// The protocol with every classically controlled step replaced by its
/// quantum-controlled counterpart and all measurements moved to the end.
///
/// Runs on `3N + 1` qubits: `U_N` on Bob's qubits and the ancilla, then
/// CNOT `N+j → 2N+j` and CZ `j → 2N+j`. Returns the same record layout as
/// [`enumerate_branches`].
pub fn coherent_branches<T: Real>(msg: &MessageSpec<T>, ch: &ChannelSpec<T>) -> Result<Vec<OutcomeRecord<T>>> {
    let n = ch.n();
    let total = 3 * n + 1;
    let encoded = alice_encode(&initial_state(msg, ch)?, n)?;
    let mut state = encoded.tensor(&StateVector::basis_state(1, 0)?);

    let placement: Vec<_> = (2 * n + 1..=total).map(q).collect();
    let mut program = un_netlist(ch)?.embed(total, &placement)?;
    for j in 1..=n {
        program.push(GateOp::Cnot {
            control: q(n + j),
            target: q(2 * n + j),
        })?;
        program.push(GateOp::MultiControlled {
            controls: vec![q(j)],
            gate: Gate2x2::z(),
            target: q(2 * n + j),
        })?;
    }
    state = program.apply(&state)?;

    let message = msg.to_state();
    let mut records = Vec::with_capacity(2 << (2 * n));
    for alice in 0..1usize << (2 * n) {
        let out = Outcome::new(n, alice >> n, alice & ((1 << n) - 1), Ancilla::Unmeasured)?;
        let bob_and_ancilla = state.slice_leading(2 * n, alice)?;
        let amps = bob_and_ancilla.amplitudes();
        for (bit, ancilla) in [(0usize, Ancilla::Zero), (1, Ancilla::One)] {
            let part = StateVector::from_amplitudes(amps.iter().skip(bit).step_by(2).copied().collect())?;
            let p = part.norm_sqr();
            let bob_state = if p > T::zero() { Some(part.normalized()?) } else { None };
            records.push(OutcomeRecord {
                outcome: out.with_ancilla(ancilla),
                probability: p,
                fidelity: fidelity_or_zero(&bob_state, &message)?,
                bob_state,
            });
        }
    }
    Ok(records)
}
