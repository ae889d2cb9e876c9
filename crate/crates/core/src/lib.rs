//! State-vector simulation of probabilistic teleportation of an `N`-qubit
//! state through a `2N`-qubit nonmaximally entangled channel.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below are what the harness and CLI use.

pub mod channel;
pub mod error;
pub mod gates;
pub mod harness;
pub mod matrix;
pub mod netlist;
pub mod protocol;
pub mod scalar;
pub mod statevector;

pub use channel::{ChannelSpec, MessageSpec};
pub use error::{Error, Result};
pub use gates::{Gate2x2, RotationAngle, StandardGate};
pub use matrix::CMatrix;
pub use netlist::{GateOp, Netlist, SingleGate};
pub use scalar::Real;
pub use statevector::{q, QubitIndex, StateVector};

pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
pub type Gate64 = Gate2x2<f64>;
pub type Gate32 = Gate2x2<f32>;
pub type Matrix64 = CMatrix<f64>;
pub type Netlist64 = Netlist<f64>;
pub type Channel64 = ChannelSpec<f64>;
pub type Message64 = MessageSpec<f64>;
