//! Experiment configuration, runners and reports used by the CLI.

pub mod config;
pub mod report;
mod run;
mod verify;

pub use config::{parse_channel_json, parse_message_json, parse_un_path, ExperimentConfig, Mode, Source};
pub use report::{BranchRow, CheckResult, ConfigEcho, Report, ShotTally};
pub use run::{run, run_exact, run_sampled};
pub use verify::{branch_oracle, lambda_by_action, random_unitary, run_verify};

use crate::error::Result;
use crate::netlist::{expand_u2_full, lambda2_cnot_expansion, print_netlist, un_netlist};
use crate::protocol::prepare_channel_circuit;
use crate::Channel64;

/// Circuits the `synthesize` command can emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Circuit {
    /// `U_N` as X layers and multi-controlled compensators.
    Un,
    /// `U_2` in rotations and CNOTs.
    U2Cnot,
    /// `Λ_2(u_i)` for one block in rotations and CNOTs.
    U2Block(usize),
    /// Channel preparation from `|0…0⟩`.
    ChannelPrep,
}

impl std::str::FromStr for Circuit {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || crate::Error::Config {
            field: "circuit".into(),
            msg: format!("expected un|u2-cnot|u2-block:<1..3>|channel-prep, got {s:?}"),
        };
        match s {
            "un" => Ok(Self::Un),
            "u2-cnot" => Ok(Self::U2Cnot),
            "channel-prep" => Ok(Self::ChannelPrep),
            other => other
                .strip_prefix("u2-block:")
                .and_then(|i| i.parse().ok())
                .map(Self::U2Block)
                .ok_or_else(bad),
        }
    }
}

/// Text form of the requested circuit.
pub fn synthesize(ch: &Channel64, circuit: Circuit) -> Result<String> {
    let nl = match circuit {
        Circuit::Un => un_netlist(ch)?,
        Circuit::U2Cnot => expand_u2_full(ch)?,
        Circuit::U2Block(i) => lambda2_cnot_expansion(ch, i)?,
        Circuit::ChannelPrep => prepare_channel_circuit(ch)?,
    };
    Ok(print_netlist(&nl))
}
