//! Construction of all p-th roots of unity for Fermat primes as explicit
//! straight-line programs over {+, -, *, /, sqrt}, starting from the constant 1.
//!
//! A Fermat prime p = 2^m + 1 admits a tower of quadratic extensions between
//! the rationals and the p-th cyclotomic field. Walking that tower with
//! Gaussian periods turns into a concrete arithmetic circuit: each level
//! recovers twice as many period values from sums and products already built,
//! via one square root per pair. The crate compiles that recursion into a flat
//! instruction list, evaluates it at arbitrary precision, and certifies both
//! the numerics and the instruction count (strictly below 12p²).
//!
//! Modules:
//!
//! - [`ntheory`]: Fermat-prime validation, primitive roots, discrete logs.
//! - [`counts`]: the pair-count tables N[k][t] that drive the period products.
//! - [`numeric`]: arbitrary-precision binary floats, complex arithmetic,
//!   and program evaluation.
//! - [`periods`]: reference Gaussian-period values computed from the defining
//!   sums, used to label and verify circuit nodes.
//! - [`circuit`]: the straight-line program representation, the builder, and
//!   the text/DOT serializers.
//! - [`verify`]: end-to-end program verification against reference values.
//!
//! The companion `cyclotome` binary wraps all of this in a CLI.
//!
//! The crate is `no_std` (requires `alloc`).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod circuit;
pub mod counts;
pub mod ntheory;
pub mod numeric;
pub mod periods;
pub mod verify;
