//! The teleportation protocol.
//!
//! Register layout for message size `N`: qubits `1..=N` hold the message,
//! `N+1..=2N` Alice's half of the channel, `2N+1..=3N` Bob's half. Bob's
//! ancilla is appended after his qubits as the least significant bit.

mod branches;

pub use branches::{
    bob_recover, coherent_branches, enumerate_branches, enumerate_branches_with, sample_shot,
    shot_rng, OutcomeRecord, Recoverer, Recovery, ShotSampler, UnPath,
};

use std::fmt;

use crate::channel::{ChannelSpec, MessageSpec};
use crate::error::{Error, Result};
use crate::gates::{ry, Gate2x2, RotationAngle, StandardGate};
use crate::netlist::{mask_qubits, GateOp, Netlist, SingleGate};
use crate::scalar::Real;
use crate::statevector::{q, StateVector};

/// `Σ_i y_i |i⟩|i⟩` over `2N` qubits.
pub fn prepare_channel_direct<T: Real>(ch: &ChannelSpec<T>) -> StateVector<T> {
    let n = ch.n();
    let mut amps = StateVector::<T>::zero(2 * n).into_amplitudes();
    for (i, y) in ch.y().iter().enumerate() {
        amps[(i << n) | i] = num_complex::Complex::new(*y, T::zero());
    }
    StateVector::from_amplitudes(amps).expect("power-of-two length")
}

/// Circuit preparing the channel from `|0…0⟩`.
///
/// A binary tree of `R_y` rotations loads `Σ y_i |i⟩` into the first `N`
/// qubits (qubit `k` is rotated conditioned on the pattern of qubits
/// `1..k-1`, with X layers selecting zero-valued controls), then CNOTs
/// `j → N+j` copy the pattern into the second half.
pub fn prepare_channel_circuit<T: Real>(ch: &ChannelSpec<T>) -> Result<Netlist<T>> {
    let n = ch.n();
    let weights: Vec<T> = ch.y().iter().map(|v| *v * *v).collect();
    let weight_of = |level: usize, prefix: usize| {
        // Sum of y_i² over indices whose leading `level` bits equal `prefix`.
        let shift = n - level;
        weights[prefix << shift..(prefix + 1) << shift]
            .iter()
            .fold(T::zero(), |a, b| a + *b)
    };
    let mut nl = Netlist::with_labels((n + 1..=3 * n).map(|k| k.to_string()).collect());
    for k in 1..=n {
        let width = k - 1;
        let mut mask = 0usize;
        for prefix in 0..1usize << width {
            let total = weight_of(width, prefix);
            let left = weight_of(k, prefix << 1);
            let ratio = if total > T::zero() { left / total } else { T::one() };
            let theta = T::two() * ratio.min(T::one()).max(T::zero()).sqrt().acos();
            if k == 1 {
                nl.push(GateOp::single(SingleGate::Ry(RotationAngle(theta)), q(1)))?;
                continue;
            }
            let want = !prefix & ((1usize << width) - 1);
            if want != mask {
                nl.push(GateOp::x_layer(mask_qubits(want ^ mask, width)))?;
                mask = want;
            }
            nl.push(GateOp::MultiControlled {
                controls: (1..=width).map(q).collect(),
                gate: ry(RotationAngle(theta)),
                target: q(k),
            })?;
        }
        if mask != 0 {
            nl.push(GateOp::x_layer(mask_qubits(mask, width)))?;
        }
    }
    for j in 1..=n {
        nl.push(GateOp::Cnot {
            control: q(j),
            target: q(n + j),
        })?;
    }
    Ok(nl)
}

/// Message ⊗ channel over `3N` qubits.
pub fn initial_state<T: Real>(msg: &MessageSpec<T>, ch: &ChannelSpec<T>) -> Result<StateVector<T>> {
    if msg.n() != ch.n() {
        return Err(Error::DimensionMismatch {
            left: msg.n(),
            right: ch.n(),
        });
    }
    Ok(msg.to_state().tensor(&prepare_channel_direct(ch)))
}

/// Alice's local operations: CNOT `j → N+j` for every `j`, then H on `1..=N`.
pub fn alice_encode<T: Real>(total: &StateVector<T>, n: usize) -> Result<StateVector<T>> {
    if n == 0 || total.n_qubits() != 3 * n {
        return Err(Error::DimensionMismatch {
            left: total.n_qubits(),
            right: 3 * n,
        });
    }
    let mut sv = total.clone();
    for j in 1..=n {
        sv = sv.apply_cnot(q(j), q(n + j))?;
    }
    let h = Gate2x2::h();
    for j in 1..=n {
        sv = sv.apply_single(&h, q(j))?;
    }
    Ok(sv)
}

/// `2^N · y_0²`.
pub fn success_probability<T: Real>(ch: &ChannelSpec<T>) -> T {
    T::lit((1u64 << ch.n()) as f64) * ch.y0() * ch.y0()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ancilla {
    Unmeasured,
    Zero,
    One,
}

/// Alice's measurement results plus Bob's ancilla result.
///
/// `m` holds the bits read on qubits `1..=N`, `nbits` those on `N+1..=2N`;
/// in both, qubit order maps to most-significant-first bit order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Outcome {
    n: usize,
    m: usize,
    nbits: usize,
    ancilla: Ancilla,
}

impl Outcome {
    pub fn new(n: usize, m: usize, nbits: usize, ancilla: Ancilla) -> Result<Self> {
        let limit = 1usize << n;
        if n == 0 || m >= limit || nbits >= limit {
            return Err(Error::BasisIndexOutOfRange {
                index: m.max(nbits),
                n_qubits: n,
            });
        }
        Ok(Self {
            n,
            m,
            nbits,
            ancilla,
        })
    }

    /// Parses bit strings such as `("100", "100")`.
    pub fn from_bits(m: &str, nbits: &str, ancilla: Ancilla) -> Result<Self> {
        let parse = |s: &str| {
            usize::from_str_radix(s, 2).map_err(|_| Error::InvalidMessage(format!("bad bit string {s:?}")))
        };
        if m.len() != nbits.len() {
            return Err(Error::DimensionMismatch {
                left: m.len(),
                right: nbits.len(),
            });
        }
        Self::new(m.len(), parse(m)?, parse(nbits)?, ancilla)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }
    #[inline]
    pub fn nbits(&self) -> usize {
        self.nbits
    }
    #[inline]
    pub fn ancilla(&self) -> Ancilla {
        self.ancilla
    }

    pub fn with_ancilla(self, ancilla: Ancilla) -> Self {
        Self { ancilla, ..self }
    }

    /// Result on message qubit `j` (1-based).
    pub fn m_bit(&self, j: usize) -> bool {
        self.m >> (self.n - j) & 1 == 1
    }

    /// Result on channel qubit `N + j`.
    pub fn n_bit(&self, j: usize) -> bool {
        self.nbits >> (self.n - j) & 1 == 1
    }

    /// Index of Alice's joint result over qubits `1..=2N`.
    pub fn alice_index(&self) -> usize {
        self.m << self.n | self.nbits
    }

    pub fn m_string(&self) -> String {
        format!("{:0w$b}", self.m, w = self.n)
    }

    pub fn n_string(&self) -> String {
        format!("{:0w$b}", self.nbits, w = self.n)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.ancilla {
            Ancilla::Unmeasured => "-",
            Ancilla::Zero => "0",
            Ancilla::One => "1",
        };
        write!(f, "m={} n={} a={a}", self.m_string(), self.n_string())
    }
}

/// Per-qubit Pauli corrections on Bob's side; X is applied before Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionPlan {
    pub apply_x: Vec<bool>,
    pub apply_z: Vec<bool>,
}

impl CorrectionPlan {
    /// X on Bob's qubit `j` iff `n_j = 1`, then Z iff `m_j = 1`.
    pub(crate) fn from_outcome(out: &Outcome) -> Self {
        Self {
            apply_x: (1..=out.n()).map(|j| out.n_bit(j)).collect(),
            apply_z: (1..=out.n()).map(|j| out.m_bit(j)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.apply_x.iter().chain(&self.apply_z).any(|b| *b)
    }

    /// Applies the plan to Bob's `N`-qubit state.
    pub fn apply<T: Real>(&self, bob: &StateVector<T>) -> Result<StateVector<T>> {
        let x = Gate2x2::x();
        let z = crate::gates::standard_gate(StandardGate::Z);
        let mut sv = bob.clone();
        for (j, (&fx, &fz)) in self.apply_x.iter().zip(&self.apply_z).enumerate() {
            if fx {
                sv = sv.apply_single(&x, q(j + 1))?;
            }
            if fz {
                sv = sv.apply_single(&z, q(j + 1))?;
            }
        }
        Ok(sv)
    }
}

/// Corrections for a success branch. Unmeasured ancilla is treated as the
/// pre-announcement plan; an ancilla of 1 is rejected.
pub fn correction_plan(out: &Outcome) -> Result<CorrectionPlan> {
    if out.ancilla() == Ancilla::One {
        return Err(Error::FailureBranch);
    }
    Ok(CorrectionPlan::from_outcome(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use std::f64::consts::FRAC_1_SQRT_2;

    type Sv = StateVector<f64>;

    fn real_sv(v: &[f64]) -> Sv {
        Sv::from_amplitudes(v.iter().map(|r| Complex::new(*r, 0.0)).collect()).unwrap()
    }

    #[test]
    fn direct_channel_examples() {
        let bell = prepare_channel_direct(&ChannelSpec::<f64>::new(1, vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap());
        assert_eq!(bell, real_sv(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]));

        let s = prepare_channel_direct(&ChannelSpec::<f64>::new(2, vec![0.5; 4]).unwrap());
        for i in 0..16 {
            let want = if [0b0000, 0b0101, 0b1010, 0b1111].contains(&i) { 0.5 } else { 0.0 };
            assert_eq!(s.amp(i).re, want);
        }

        let s = prepare_channel_direct(&ChannelSpec::<f64>::new(1, vec![0.6, 0.8]).unwrap());
        assert_eq!(s, real_sv(&[0.6, 0.0, 0.0, 0.8]));
    }

    #[test]
    fn channel_circuit_small_cases() {
        let bell = ChannelSpec::<f64>::new(1, vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let nl = prepare_channel_circuit(&bell).unwrap();
        assert_eq!(nl.len(), 2);
        match &nl.ops()[0] {
            GateOp::Single { gate: SingleGate::Ry(a), .. } => {
                assert!((a.0 - std::f64::consts::FRAC_PI_2).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(nl.ops()[1], GateOp::Cnot { control: q(1), target: q(2) });

        let ch = ChannelSpec::<f64>::new(1, vec![0.6, 0.8]).unwrap();
        let nl = prepare_channel_circuit(&ch).unwrap();
        match &nl.ops()[0] {
            GateOp::Single { gate: SingleGate::Ry(a), .. } => assert!(((a.0 / 2.0).cos() - 0.6).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        let out = nl.apply(&Sv::basis_state(2, 0).unwrap()).unwrap();
        assert!(out.max_abs_diff(&prepare_channel_direct(&ch)).unwrap() < 1e-15);
    }

    #[test]
    fn channel_circuit_rotation_count() {
        // 2^N - 1 rotations in the tree.
        let ch = ChannelSpec::<f64>::maximal(3).unwrap();
        let nl = prepare_channel_circuit(&ch).unwrap();
        let c = nl.census();
        assert_eq!(c.rotations + c.multi_controlled, 7);
        assert_eq!(c.cnots, 3);
        assert_eq!(nl.labels()[0], "4");
    }

    #[test]
    fn encode_single_qubit_basis_message() {
        // x = |0⟩, Bell channel: ½(|000⟩ + |011⟩ + |100⟩ + |111⟩).
        let msg = MessageSpec::<f64>::from_real(1, &[1.0, 0.0]).unwrap();
        let ch = ChannelSpec::<f64>::maximal(1).unwrap();
        let enc = alice_encode(&initial_state(&msg, &ch).unwrap(), 1).unwrap();
        let want = real_sv(&[0.5, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0, 0.5]);
        assert!(enc.max_abs_diff(&want).unwrap() < 1e-15);
        assert!((enc.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn encode_leaves_weighted_message_with_bob() {
        // Branch (m, n) = (0, 0) leaves (x0 y0 |0⟩ + x1 y1 |1⟩)/√2.
        let (x0, x1) = (0.28, 0.96);
        let msg = MessageSpec::<f64>::from_real(1, &[x0, x1]).unwrap();
        let ch = ChannelSpec::<f64>::new(1, vec![0.6, 0.8]).unwrap();
        let enc = alice_encode(&initial_state(&msg, &ch).unwrap(), 1).unwrap();
        let bob = enc.slice_leading(2, 0).unwrap();
        let want = real_sv(&[x0 * 0.6 * FRAC_1_SQRT_2, x1 * 0.8 * FRAC_1_SQRT_2]);
        assert!(bob.max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn encode_rejects_wrong_width() {
        assert!(alice_encode(&Sv::basis_state(4, 0).unwrap(), 1).is_err());
    }

    #[test]
    fn success_probability_examples() {
        assert!((success_probability(&ChannelSpec::<f64>::maximal(3).unwrap()) - 1.0).abs() < 1e-12);
        assert!((success_probability(&ChannelSpec::<f64>::new(1, vec![0.6, 0.8]).unwrap()) - 0.72).abs() < 1e-15);
        let ch = ChannelSpec::<f64>::new(2, vec![0.3, 0.3, 0.3, 0.73f64.sqrt()]).unwrap();
        assert!((success_probability(&ch) - 0.36).abs() < 1e-15);
    }

    #[test]
    fn correction_plans() {
        let id = correction_plan(&Outcome::from_bits("000", "000", Ancilla::Zero).unwrap()).unwrap();
        assert!(id.is_identity());
        let plan = correction_plan(&Outcome::from_bits("100", "100", Ancilla::Zero).unwrap()).unwrap();
        assert_eq!(plan.apply_x, vec![true, false, false]);
        assert_eq!(plan.apply_z, vec![true, false, false]);
        assert!(matches!(
            correction_plan(&Outcome::from_bits("1", "0", Ancilla::One).unwrap()),
            Err(Error::FailureBranch)
        ));
    }

    #[test]
    fn x_precedes_z() {
        // ZX|0⟩ = |1⟩ while XZ|0⟩ = |1⟩ too, so use |1⟩: ZX|1⟩ = |0⟩, XZ|1⟩ = -|0⟩.
        let plan = CorrectionPlan {
            apply_x: vec![true],
            apply_z: vec![true],
        };
        let out = plan.apply(&Sv::basis_state(1, 1).unwrap()).unwrap();
        assert_eq!(out, Sv::basis_state(1, 0).unwrap());
    }

    #[test]
    fn outcome_bits() {
        let o = Outcome::from_bits("10", "01", Ancilla::Unmeasured).unwrap();
        assert!(o.m_bit(1) && !o.m_bit(2));
        assert!(!o.n_bit(1) && o.n_bit(2));
        assert_eq!(o.alice_index(), 0b1001);
        assert_eq!(o.to_string(), "m=10 n=01 a=-");
        assert!(Outcome::new(2, 4, 0, Ancilla::Zero).is_err());
    }
}
