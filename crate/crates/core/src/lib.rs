//! Small-gain verification for networks of ISS systems with power-max gains:
//! exact cycle checks, motif reduction, Ω-paths and Lyapunov descriptors.

pub mod algebra;
pub mod cycles;
pub mod dot;
pub mod error;
pub mod format;
pub mod graph;
pub mod lyapunov;
pub mod omega;
pub mod reduction;

pub use algebra::{Coefficient, GainFunction, InverseGain, PowerTerm, Scalar, Verdict};
pub use error::{Error, Result};
pub use graph::{Network, NetworkDraft};
