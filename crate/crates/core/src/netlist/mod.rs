//! Gate programs and their matrix evaluation.
//!
//! A [`Netlist`] lists operations in the order they act on the state. Printed
//! operator products read the other way round (rightmost factor first).

mod expand;
mod tables;
mod text;
mod un;

pub use expand::{expand_u2_full, lambda2_cnot_expansion, two_control_reference, verify_matrix};
pub use tables::{
    generic_layer_factors, printed_factors, printed_to_netlist, PrintedFactor, ReadOrder,
    U2_CNOT_EXPANSION,
};
pub use text::{parse_netlist, print_netlist};
pub use un::{build_un_matrix, un_netlist};
pub(crate) use un::mask_qubits;

use crate::error::{Error, Result};
use crate::gates::{ry, Gate2x2, RotationAngle, StandardGate};
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::statevector::{check_distinct, QubitIndex, StateVector};

/// Payload of a single-qubit operation. Rotations keep their angle so that
/// the text form can print `RY θ` instead of a raw matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum SingleGate<T> {
    Standard(StandardGate),
    Ry(RotationAngle<T>),
    Matrix(Gate2x2<T>),
}

impl<T: Real> SingleGate<T> {
    pub fn matrix(&self) -> Gate2x2<T> {
        match self {
            Self::Standard(s) => crate::gates::standard_gate(*s),
            Self::Ry(a) => ry(*a),
            Self::Matrix(g) => *g,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateOp<T> {
    Single {
        gate: SingleGate<T>,
        target: QubitIndex,
    },
    Cnot {
        control: QubitIndex,
        target: QubitIndex,
    },
    /// Parallel X on every listed qubit.
    XLayer { targets: Vec<QubitIndex> },
    /// `gate` on `target` when every control reads 1.
    MultiControlled {
        controls: Vec<QubitIndex>,
        gate: Gate2x2<T>,
        target: QubitIndex,
    },
}

impl<T: Real> GateOp<T> {
    pub fn single(gate: SingleGate<T>, target: QubitIndex) -> Self {
        Self::Single { gate, target }
    }

    pub fn x_layer<I: IntoIterator<Item = QubitIndex>>(targets: I) -> Self {
        let mut targets: Vec<_> = targets.into_iter().collect();
        targets.sort();
        Self::XLayer { targets }
    }

    fn qubits(&self) -> Vec<QubitIndex> {
        match self {
            Self::Single { target, .. } => vec![*target],
            Self::Cnot { control, target } => vec![*control, *target],
            Self::XLayer { targets } => targets.clone(),
            Self::MultiControlled {
                controls, target, ..
            } => {
                let mut v = controls.clone();
                v.push(*target);
                v
            }
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        check_distinct(&self.qubits(), n_qubits)?;
        if let Self::XLayer { targets } = self {
            if targets.is_empty() {
                return Err(Error::Parse {
                    line: 0,
                    msg: "empty X layer".into(),
                });
            }
        }
        let gate = match self {
            Self::Single { gate, .. } => Some(gate.matrix()),
            Self::MultiControlled { gate, .. } => Some(*gate),
            _ => None,
        };
        if let Some(g) = gate {
            let residual = g.unitarity_residual();
            if residual > T::unitary_tol() {
                return Err(Error::NotUnitary {
                    residual: residual.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn apply_in_place(&self, sv: &mut StateVector<T>) {
        match self {
            Self::Single { gate, target } => sv.single_in_place(&gate.matrix(), *target),
            Self::Cnot { control, target } => sv.cnot_in_place(*control, *target),
            Self::XLayer { targets } => sv.x_layer_in_place(targets),
            Self::MultiControlled {
                controls,
                gate,
                target,
            } => sv.controlled_in_place(controls, gate, *target),
        }
    }

    /// Full-space matrix assembled from Kronecker products of 2x2 factors.
    ///
    /// Controlled operations use `I + P1 ⊗ … ⊗ P1 ⊗ (u - I)` on the involved
    /// qubits, so this path shares no code with the state-vector kernels.
    pub fn full_matrix(&self, n_qubits: usize) -> CMatrix<T> {
        let id = Gate2x2::<T>::identity();
        let kron_all = |factor: &dyn Fn(usize) -> CMatrix<T>| {
            (2..=n_qubits).fold(factor(1), |acc, k| acc.kron(&factor(k)))
        };
        let local = |target: QubitIndex, g: Gate2x2<T>| {
            kron_all(&|k| {
                if k == target.get() {
                    CMatrix::from_gate(&g)
                } else {
                    CMatrix::from_gate(&id)
                }
            })
        };
        let controlled = |controls: &[QubitIndex], g: Gate2x2<T>, target: QubitIndex| {
            let p1 = Gate2x2::from_real(T::zero(), T::zero(), T::zero(), T::one());
            let diff = CMatrix::from_gate(&g).add(&CMatrix::from_gate(&Gate2x2::from_real(
                -T::one(),
                T::zero(),
                T::zero(),
                -T::one(),
            )));
            let term = kron_all(&|k| {
                if k == target.get() {
                    diff.clone()
                } else if controls.iter().any(|c| c.get() == k) {
                    CMatrix::from_gate(&p1)
                } else {
                    CMatrix::from_gate(&id)
                }
            });
            CMatrix::identity(1usize << n_qubits).add(&term)
        };
        match self {
            Self::Single { gate, target } => local(*target, gate.matrix()),
            Self::XLayer { targets } => kron_all(&|k| {
                if targets.iter().any(|t| t.get() == k) {
                    CMatrix::from_gate(&Gate2x2::x())
                } else {
                    CMatrix::from_gate(&id)
                }
            }),
            Self::Cnot { control, target } => controlled(&[*control], Gate2x2::x(), *target),
            Self::MultiControlled {
                controls,
                gate,
                target,
            } => controlled(controls, *gate, *target),
        }
    }
}

/// Operation counts, used to compare a netlist with a printed gate array.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCensus {
    pub single_x: usize,
    pub rotations: usize,
    pub other_singles: usize,
    pub cnots: usize,
    pub x_layers: usize,
    pub multi_controlled: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Netlist<T> {
    n_qubits: usize,
    labels: Vec<String>,
    ops: Vec<GateOp<T>>,
}

impl<T: Real> Netlist<T> {
    /// Empty netlist with labels `1..=n_qubits`.
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            labels: (1..=n_qubits).map(|k| k.to_string()).collect(),
            ops: Vec::new(),
        }
    }

    /// Empty netlist whose qubits print under the given particle labels.
    pub fn with_labels<S: Into<String>>(labels: Vec<S>) -> Self {
        Self {
            n_qubits: labels.len(),
            labels: labels.into_iter().map(Into::into).collect(),
            ops: Vec::new(),
        }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ops(&self) -> &[GateOp<T>] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp<T>) -> Result<()> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    /// Appends all ops of `other`, which must act on the same number of qubits.
    pub fn extend_from(&mut self, other: &Self) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(())
    }

    /// Copy of this netlist acting on a larger register, with local qubit `k`
    /// mapped to `placement[k - 1]`.
    pub fn embed(&self, n_total: usize, placement: &[QubitIndex]) -> Result<Self> {
        if placement.len() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: placement.len(),
            });
        }
        check_distinct(placement, n_total)?;
        let map = |x: &QubitIndex| placement[x.get() - 1];
        let mut out = Self::new(n_total);
        for op in &self.ops {
            let moved = match op {
                GateOp::Single { gate, target } => GateOp::Single {
                    gate: gate.clone(),
                    target: map(target),
                },
                GateOp::Cnot { control, target } => GateOp::Cnot {
                    control: map(control),
                    target: map(target),
                },
                GateOp::XLayer { targets } => GateOp::x_layer(targets.iter().map(map)),
                GateOp::MultiControlled {
                    controls,
                    gate,
                    target,
                } => GateOp::MultiControlled {
                    controls: controls.iter().map(map).collect(),
                    gate: *gate,
                    target: map(target),
                },
            };
            out.push(moved)?;
        }
        Ok(out)
    }

    /// Runs the program on `sv`.
    pub fn apply(&self, sv: &StateVector<T>) -> Result<StateVector<T>> {
        if sv.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: sv.n_qubits(),
            });
        }
        let mut out = sv.clone();
        for op in &self.ops {
            op.apply_in_place(&mut out);
        }
        Ok(out)
    }

    /// Product of the ops' full-space matrices, latest op leftmost.
    pub fn matrix(&self) -> CMatrix<T> {
        self.ops
            .iter()
            .fold(CMatrix::identity(1usize << self.n_qubits), |acc, op| {
                &op.full_matrix(self.n_qubits) * &acc
            })
    }

    pub fn census(&self) -> OpCensus {
        let mut c = OpCensus::default();
        for op in &self.ops {
            match op {
                GateOp::Single {
                    gate: SingleGate::Standard(StandardGate::X),
                    ..
                } => c.single_x += 1,
                GateOp::Single {
                    gate: SingleGate::Ry(_),
                    ..
                } => c.rotations += 1,
                GateOp::Single { .. } => c.other_singles += 1,
                GateOp::Cnot { .. } => c.cnots += 1,
                GateOp::XLayer { .. } => c.x_layers += 1,
                GateOp::MultiControlled { .. } => c.multi_controlled += 1,
            }
        }
        c
    }
}

/// Matrix of a netlist (brute-force evaluator).
pub fn netlist_matrix<T: Real>(nl: &Netlist<T>) -> CMatrix<T> {
    nl.matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::lambda_matrix;
    use crate::statevector::q;

    #[test]
    fn empty_netlist_is_identity() {
        assert_eq!(netlist_matrix(&Netlist::<f64>::new(3)), CMatrix::identity(8));
    }

    #[test]
    fn single_cnot_matrix() {
        let mut nl = Netlist::<f64>::new(2);
        nl.push(GateOp::Cnot {
            control: q(1),
            target: q(2),
        })
        .unwrap();
        assert_eq!(nl.matrix(), lambda_matrix(1, &Gate2x2::x()));
    }

    #[test]
    fn push_validates() {
        let mut nl = Netlist::<f64>::new(2);
        assert!(nl
            .push(GateOp::Cnot {
                control: q(1),
                target: q(1)
            })
            .is_err());
        assert!(nl.push(GateOp::x_layer([q(3)])).is_err());
        assert!(nl.push(GateOp::x_layer([])).is_err());
        let bad = Gate2x2::from_real(1.0, 1.0, 0.0, 1.0);
        assert!(nl
            .push(GateOp::single(SingleGate::Matrix(bad), q(1)))
            .is_err());
    }

    #[test]
    fn x_layer_is_involution() {
        let mut nl = Netlist::<f64>::new(4);
        nl.push(GateOp::x_layer([q(2), q(4), q(1)])).unwrap();
        nl.push(GateOp::x_layer([q(1), q(2), q(4)])).unwrap();
        assert_eq!(nl.matrix(), CMatrix::identity(16));
    }

    #[test]
    fn apply_matches_matrix() {
        let mut nl = Netlist::<f64>::new(3);
        nl.push(GateOp::single(SingleGate::Standard(StandardGate::H), q(1))).unwrap();
        nl.push(GateOp::Cnot { control: q(1), target: q(3) }).unwrap();
        nl.push(GateOp::x_layer([q(2)])).unwrap();
        nl.push(GateOp::MultiControlled {
            controls: vec![q(3), q(2)],
            gate: ry(RotationAngle(0.4)),
            target: q(1),
        })
        .unwrap();
        let m = nl.matrix();
        for i in 0..8 {
            let basis = StateVector::basis_state(3, i).unwrap();
            let out = nl.apply(&basis).unwrap();
            let col = m.mul_vec(basis.amplitudes());
            for (a, b) in out.amplitudes().iter().zip(&col) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }
}
