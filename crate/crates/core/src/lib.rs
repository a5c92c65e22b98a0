//! Quaternionic prolate spheroidal wave functions.
//!
//! - [`quat`], [`grid`], [`io`]: quaternion algebra, sampled quaternion fields,
//!   inner products and the QGRID file format.
//! - [`qft`]: two-sided quaternionic Fourier transform.
//! - [`prolate`]: Nyström eigenbasis and its verification.
//! - [`concentration`]: time/band limiting and energy-concentration extremals.
//! - [`extrapolate`]: iterative band-limited extrapolation.

pub mod concentration;
pub mod error;
pub mod extrapolate;
pub mod grid;
pub mod io;
pub mod prolate;
pub mod qft;
pub mod quat;
pub mod rng;

pub use error::{Error, Result};
pub use grid::{angle, energy, inner_product, scalar_inner_product, GridAxis, QSignal, Region};
pub use quat::{q_conj, q_modulus, q_mul, Quaternion};
pub use rustfft::num_complex::Complex64;
