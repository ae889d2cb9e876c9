//! CNOT-level form of `U_2` and the two-control reference decomposition it
//! is checked against.

use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::gates::{compensator, compensator_angle, lambda_matrix, Gate2x2, RotationAngle, StandardGate};
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::statevector::{q, QubitIndex};

use super::tables::U2_CNOT_EXPANSION;
use super::{build_un_matrix, GateOp, Netlist, SingleGate};

const LABELS: [&str; 3] = ["5", "6", "a"];

/// Compares two matrices and reports the largest deviation as a structured error.
pub fn verify_matrix<T: Real>(what: &str, got: &CMatrix<T>, want: &CMatrix<T>, tol: T) -> Result<()> {
    let (d, row, col) = got.max_abs_diff(want);
    if d <= tol {
        Ok(())
    } else {
        Err(Error::VerificationFailed {
            what: what.to_string(),
            max_diff: d.to_f64().unwrap_or(f64::NAN),
            row,
            col,
        })
    }
}

fn particle(c: char) -> Option<QubitIndex> {
    match c {
        '5' => Some(q(1)),
        '6' => Some(q(2)),
        'a' => Some(q(3)),
        _ => None,
    }
}

fn token_op<T: Real>(tok: &str, angles: &[RotationAngle<T>; 3]) -> Result<GateOp<T>> {
    let bad = || Error::Parse {
        line: 0,
        msg: format!("bad expansion token {tok:?}"),
    };
    let chars: Vec<char> = tok.chars().collect();
    match chars.as_slice() {
        ['A', d] | ['B', d] => {
            let block = d.to_digit(10).filter(|b| (1..=3).contains(b)).ok_or_else(bad)? as usize;
            let quarter = angles[block - 1].0 / T::lit(4.0);
            let angle = if chars[0] == 'A' { quarter } else { -quarter };
            Ok(GateOp::single(SingleGate::Ry(RotationAngle(angle)), q(3)))
        }
        ['C', c, t] => Ok(GateOp::Cnot {
            control: particle(*c).ok_or_else(bad)?,
            target: particle(*t).ok_or_else(bad)?,
        }),
        ['X', t] => Ok(GateOp::single(
            SingleGate::Standard(StandardGate::X),
            particle(*t).ok_or_else(bad)?,
        )),
        _ => Err(bad()),
    }
}

fn channel_angles<T: Real>(channel: &ChannelSpec<T>) -> Result<[RotationAngle<T>; 3]> {
    if channel.n() != 2 {
        return Err(Error::WrongN {
            expected: 2,
            got: channel.n(),
        });
    }
    let y = channel.y();
    Ok([
        compensator_angle(y[0], y[1])?,
        compensator_angle(y[0], y[2])?,
        compensator_angle(y[0], y[3])?,
    ])
}

/// Builds a time-ordered netlist from operator-product tokens.
fn tokens_to_netlist<T: Real>(tokens: &[&str], angles: &[RotationAngle<T>; 3]) -> Result<Netlist<T>> {
    let mut nl = Netlist::with_labels(LABELS.to_vec());
    for tok in tokens.iter().rev() {
        nl.push(token_op(tok, angles)?)?;
    }
    Ok(nl)
}

/// The rotation/CNOT sequence realizing `Λ_2(u_i)` for block `i` in 1..=3,
/// checked against the block matrix within `1e-10`.
pub fn lambda2_cnot_expansion<T: Real>(channel: &ChannelSpec<T>, i: usize) -> Result<Netlist<T>> {
    let angles = channel_angles(channel)?;
    if !(1..=3).contains(&i) {
        return Err(Error::BadBlock(i));
    }
    let tokens: Vec<&str> = U2_CNOT_EXPANSION.split_whitespace().collect();
    let runs: Vec<&[&str]> = tokens
        .split(|t| t.starts_with('X'))
        .filter(|run| !run.is_empty())
        .collect();
    // Written order is block 3, block 2, block 1.
    let nl = tokens_to_netlist(runs[3 - i], &angles)?;
    let u = compensator(channel.y0(), channel.y()[i])?;
    verify_matrix(
        &format!("two-control expansion of block {i}"),
        &nl.matrix(),
        &lambda_matrix(2, &u),
        T::lit(1e-10),
    )?;
    Ok(nl)
}

/// The whole CNOT-level `U_2` (rotations, CNOTs and NOT gates only),
/// checked against the block-diagonal matrix within `1e-10`.
pub fn expand_u2_full<T: Real>(channel: &ChannelSpec<T>) -> Result<Netlist<T>> {
    let angles = channel_angles(channel)?;
    let tokens: Vec<&str> = U2_CNOT_EXPANSION.split_whitespace().collect();
    let nl = tokens_to_netlist(&tokens, &angles)?;
    verify_matrix(
        "CNOT-level U_2",
        &nl.matrix(),
        &build_un_matrix(channel)?,
        T::lit(1e-10),
    )?;
    Ok(nl)
}

/// Reference `Λ_2(u)` from controlled square roots:
/// `C_6(v)`, `CNOT(5,6)`, `C_6(v†)`, `CNOT(5,6)`, `C_5(v)` with `v² = u`.
pub fn two_control_reference<T: Real>(u: &Gate2x2<T>) -> Result<Netlist<T>> {
    let v = u.sqrt();
    let (c5, c6, a) = (q(1), q(2), q(3));
    let mut nl = Netlist::with_labels(LABELS.to_vec());
    nl.push(GateOp::MultiControlled {
        controls: vec![c6],
        gate: v,
        target: a,
    })?;
    nl.push(GateOp::Cnot {
        control: c5,
        target: c6,
    })?;
    nl.push(GateOp::MultiControlled {
        controls: vec![c6],
        gate: v.adjoint(),
        target: a,
    })?;
    nl.push(GateOp::Cnot {
        control: c5,
        target: c6,
    })?;
    nl.push(GateOp::MultiControlled {
        controls: vec![c5],
        gate: v,
        target: a,
    })?;
    Ok(nl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::ry;
    use std::f64::consts::PI;

    fn channel_with_angles(y: [f64; 4]) -> ChannelSpec<f64> {
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        ChannelSpec::new(2, y.iter().map(|v| v / norm).collect()).unwrap()
    }

    #[test]
    fn identity_blocks_cancel() {
        let ch = ChannelSpec::<f64>::maximal(2).unwrap();
        for i in 1..=3 {
            let nl = lambda2_cnot_expansion(&ch, i).unwrap();
            assert!(nl.matrix().max_abs_diff(&CMatrix::identity(8)).0 < 1e-12);
        }
        let full = expand_u2_full(&ch).unwrap();
        assert!(full.matrix().max_abs_diff(&CMatrix::identity(8)).0 < 1e-12);
    }

    #[test]
    fn half_turn_block() {
        // θ = π needs y0 = 0, which no valid channel has; drive the token list directly.
        let u = ry(RotationAngle(PI));
        let angles = [RotationAngle(PI); 3];
        let tokens: Vec<&str> = U2_CNOT_EXPANSION.split_whitespace().collect();
        let block: Vec<&str> = tokens[..14].to_vec();
        let nl = tokens_to_netlist(&block, &angles).unwrap();
        assert!(nl.matrix().max_abs_diff(&lambda_matrix(2, &u)).0 < 1e-12);

        let reference = two_control_reference(&u).unwrap();
        assert!(reference.matrix().max_abs_diff(&lambda_matrix(2, &u)).0 < 1e-12);
    }

    #[test]
    fn block_op_census() {
        let ch = channel_with_angles([0.2, 0.5, 0.6, 0.9]);
        let c = lambda2_cnot_expansion(&ch, 2).unwrap().census();
        assert_eq!((c.cnots, c.rotations, c.single_x), (8, 6, 0));
        let c = expand_u2_full(&ch).unwrap().census();
        assert_eq!((c.cnots, c.rotations, c.single_x), (24, 18, 4));
        assert_eq!((c.x_layers, c.multi_controlled, c.other_singles), (0, 0, 0));
    }

    #[test]
    fn full_expansion_starts_with_not_on_first_qubit() {
        let ch = channel_with_angles([0.2, 0.5, 0.6, 0.9]);
        let nl = expand_u2_full(&ch).unwrap();
        assert_eq!(
            nl.ops()[0],
            GateOp::single(SingleGate::Standard(StandardGate::X), q(1))
        );
        assert_eq!(nl.labels(), &["5", "6", "a"]);
    }

    #[test]
    fn wrong_n_or_block_rejected() {
        let ch3 = ChannelSpec::<f64>::maximal(3).unwrap();
        assert!(matches!(
            expand_u2_full(&ch3),
            Err(Error::WrongN { expected: 2, got: 3 })
        ));
        let ch2 = ChannelSpec::<f64>::maximal(2).unwrap();
        assert!(matches!(lambda2_cnot_expansion(&ch2, 4), Err(Error::BadBlock(4))));
        assert!(matches!(lambda2_cnot_expansion(&ch2, 0), Err(Error::BadBlock(0))));
    }

    #[test]
    fn verification_failure_is_localized() {
        let a = CMatrix::<f64>::identity(4);
        let b = lambda_matrix(1, &Gate2x2::x());
        match verify_matrix("probe", &a, &b, 1e-10) {
            Err(Error::VerificationFailed { max_diff, row, col, .. }) => {
                assert_eq!(max_diff, 1.0);
                assert_eq!((row, col), (2, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
