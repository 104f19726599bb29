//! Exact calculus for gains of the form `max_i c_i t^{p_i}`.

mod coefficient;
mod factor;
mod gain;
mod precision;

pub use coefficient::Coefficient;
pub use gain::{simplify, GainFunction, InverseGain, PowerTerm, Scalar, Verdict};
pub use precision::{global_precision, set_global_precision, Precision, MAX_PRECISION_BITS};
