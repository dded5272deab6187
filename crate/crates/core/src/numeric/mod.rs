//! Arbitrary-precision numerics: binary floats, complex arithmetic, trig
//! constants, and straight-line-program evaluation.

mod complex;
mod eval;
mod float;
mod trig;

pub use complex::{complex_sqrt, BigComplex};
pub use eval::{eval_program, EvalError, EvalTrace};
pub use float::{BigFloat, MIN_PRECISION};
pub use trig::{pi, sin_cos};

pub(crate) use eval::apply_instruction;
