//! Written-out factor lists for `U_2`, `U_3`, `U_4`, the general-N layer
//! pattern, and the CNOT-level gate string for `U_2`.
//!
//! These are data, transcribed once, so the generated netlists can be
//! compared against them factor by factor.

use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::gates::compensator;
use crate::scalar::Real;
use crate::statevector::q;

use super::un::bob_labels;
use super::{GateOp, Netlist};

/// One factor of a written operator product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrintedFactor {
    /// X on the listed control positions (1-based), identity elsewhere.
    X(Vec<usize>),
    /// `Λ_N(u_i)` with all N controls and the ancilla as target.
    Lambda(usize),
}

use PrintedFactor::{Lambda as L, X};

/// How to turn a written factor list into a time-ordered netlist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReadOrder {
    /// Operator-product convention: the rightmost factor acts first.
    OperatorProduct,
    /// Left to right as printed.
    AsWritten,
}

/// Factor lists of `U_2`, `U_3` and `U_4`, leftmost factor first.
pub fn printed_factors(n: usize) -> Option<Vec<PrintedFactor>> {
    let v = match n {
        2 => vec![L(3), X(vec![2]), L(2), X(vec![1, 2]), L(1), X(vec![1])],
        3 => vec![
            X(vec![1, 2]),
            L(1),
            X(vec![2, 3]),
            L(2),
            X(vec![3]),
            L(3),
            X(vec![1, 2, 3]),
            L(4),
            X(vec![3]),
            L(5),
            X(vec![2, 3]),
            L(6),
            X(vec![3]),
            L(7),
        ],
        4 => vec![
            X(vec![1, 2, 3]),
            L(1),
            X(vec![3, 4]),
            L(2),
            X(vec![4]),
            L(3),
            X(vec![2, 3, 4]),
            L(4),
            X(vec![4]),
            L(5),
            X(vec![3, 4]),
            L(6),
            X(vec![4]),
            L(7),
            X(vec![1, 2, 3, 4]),
            L(8),
            X(vec![4]),
            L(9),
            X(vec![3, 4]),
            L(10),
            X(vec![4]),
            L(11),
            X(vec![2, 3, 4]),
            L(12),
            X(vec![4]),
            L(13),
            X(vec![3, 4]),
            L(14),
            X(vec![4]),
            L(15),
        ],
        _ => return None,
    };
    Some(v)
}

/// General-N factor list, leftmost first: `X` on controls `1..N-1`, then
/// `Λ_N(u_1)`, then for each `i ≥ 2` an X on the last `tz(i) + 1` controls
/// followed by `Λ_N(u_i)`.
pub fn generic_layer_factors(n: usize) -> Vec<PrintedFactor> {
    let mut out = Vec::new();
    if n >= 2 {
        out.push(X((1..n).collect()));
    }
    out.push(L(1));
    for i in 2..1usize << n {
        let width = i.trailing_zeros() as usize + 1;
        out.push(X((n + 1 - width..=n).collect()));
        out.push(L(i));
    }
    out
}

/// Builds the netlist for a written factor list over Bob's qubits plus the ancilla.
pub fn printed_to_netlist<T: Real>(
    channel: &ChannelSpec<T>,
    factors: &[PrintedFactor],
    order: ReadOrder,
) -> Result<Netlist<T>> {
    let n = channel.n();
    let y = channel.y();
    let controls: Vec<_> = (1..=n).map(q).collect();
    let mut nl = Netlist::with_labels(bob_labels(n));
    let ordered: Box<dyn Iterator<Item = &PrintedFactor>> = match order {
        ReadOrder::OperatorProduct => Box::new(factors.iter().rev()),
        ReadOrder::AsWritten => Box::new(factors.iter()),
    };
    for f in ordered {
        match f {
            X(pos) => nl.push(GateOp::x_layer(pos.iter().map(|&p| q(p))))?,
            L(i) => {
                if *i == 0 || *i >= y.len() {
                    return Err(Error::BadBlock(*i));
                }
                nl.push(GateOp::MultiControlled {
                    controls: controls.clone(),
                    gate: compensator(y[0], y[*i])?,
                    target: q(n + 1),
                })?
            }
        }
    }
    Ok(nl)
}

/// CNOT-level expression of `U_2` on particles 5, 6 and the ancilla `a`,
/// written as an operator product (leftmost factor acts last).
///
/// Tokens: `A<i>` / `B<i>` are rotations on `a` (`A_i = ry(θ_i/4)`,
/// `B_i = ry(-θ_i/4)`), `C<c><t>` is a CNOT, `X5` / `X6` a NOT gate.
pub const U2_CNOT_EXPANSION: &str = "\
A3 C5a B3 C5a C56 B3 C6a A3 C6a C56 A3 C6a B3 C6a \
X6 \
A2 C5a B2 C5a C56 B2 C6a A2 C6a C56 A2 C6a B2 C6a \
X5 X6 \
A1 C5a B1 C5a C56 B1 C6a A1 C6a C56 A1 C6a B1 C6a \
X5";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_pattern_small_cases() {
        assert_eq!(generic_layer_factors(1), vec![L(1)]);
        assert_eq!(
            generic_layer_factors(2),
            vec![X(vec![1]), L(1), X(vec![1, 2]), L(2), X(vec![2]), L(3)]
        );
    }

    #[test]
    fn generic_pattern_matches_written_lists_for_three_and_four() {
        for n in [3, 4] {
            assert_eq!(generic_layer_factors(n), printed_factors(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn expansion_string_token_count() {
        let tokens: Vec<_> = U2_CNOT_EXPANSION.split_whitespace().collect();
        assert_eq!(tokens.iter().filter(|t| t.starts_with('C')).count(), 24);
        assert_eq!(
            tokens.iter().filter(|t| t.starts_with('A') || t.starts_with('B')).count(),
            18
        );
        assert_eq!(tokens.iter().filter(|t| t.starts_with('X')).count(), 4);
    }
}
