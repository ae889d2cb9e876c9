//! The recovery unitary `U_N = diag(I, u_1, …, u_{2^N-1})` on Bob's `N`
//! qubits plus the ancilla (least significant).

use crate::channel::ChannelSpec;
use crate::error::Result;
use crate::gates::compensator;
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::statevector::{q, QubitIndex};

use super::{GateOp, Netlist};

/// Particle labels of Bob's qubits and the ancilla: `2N+1, …, 3N, a`.
pub(crate) fn bob_labels(n: usize) -> Vec<String> {
    (2 * n + 1..=3 * n)
        .map(|k| k.to_string())
        .chain(std::iter::once("a".to_string()))
        .collect()
}

/// Control qubits (1-based, qubit 1 most significant) whose bit is set in `mask`.
pub(crate) fn mask_qubits(mask: usize, n_controls: usize) -> Vec<QubitIndex> {
    (1..=n_controls)
        .filter(|j| mask >> (n_controls - j) & 1 == 1)
        .map(q)
        .collect()
}

pub fn build_un_matrix<T: Real>(channel: &ChannelSpec<T>) -> Result<CMatrix<T>> {
    let n = channel.n();
    let mut m = CMatrix::identity(1usize << (n + 1));
    let y = channel.y();
    for (i, yi) in y.iter().enumerate().skip(1) {
        let u = compensator(y[0], *yi)?;
        for r in 0..2 {
            for c in 0..2 {
                m.set(2 * i + r, 2 * i + c, u.get(r, c));
            }
        }
    }
    Ok(m)
}

/// `U_N` as alternating X layers and `Λ_N(u_i)` factors.
///
/// Blocks are visited from `i = 2^N - 1` down to 1. Before `Λ_N(u_i)` the
/// X layer flips exactly the controls where the running mask differs from
/// `(2^N - 1) ^ i`, so the all-ones control pattern lands on block `i`. A
/// final layer clears the mask.
pub fn un_netlist<T: Real>(channel: &ChannelSpec<T>) -> Result<Netlist<T>> {
    let n = channel.n();
    let full = (1usize << n) - 1;
    let controls: Vec<QubitIndex> = (1..=n).map(q).collect();
    let target = q(n + 1);
    let y = channel.y();

    let mut nl = Netlist::with_labels(bob_labels(n));
    let mut mask = 0usize;
    for i in (1..=full).rev() {
        let want = full ^ i;
        if want != mask {
            nl.push(GateOp::x_layer(mask_qubits(want ^ mask, n)))?;
            mask = want;
        }
        nl.push(GateOp::MultiControlled {
            controls: controls.clone(),
            gate: compensator(y[0], y[i])?,
            target,
        })?;
    }
    if mask != 0 {
        nl.push(GateOp::x_layer(mask_qubits(mask, n)))?;
    }
    Ok(nl)
}
