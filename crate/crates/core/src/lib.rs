//! Majority-logic synthesis and quantum-dot cellular automata design toolkit.

pub mod adders;
pub mod equiv;
pub mod error;
pub mod fault;
pub mod layout;
pub mod network;
pub mod reversible;
pub mod scalar;
pub mod sim;
pub mod truth;

pub use error::{Error, Result};
pub use scalar::Real;

pub type SimTrace64 = sim::SimTrace<f64>;
pub type SimTrace32 = sim::SimTrace<f32>;
