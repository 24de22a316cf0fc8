//! Quantized spectra, Gaussian wave packet expansions and autocorrelation
//! revival dynamics for the circular infinite well and its companion
//! billiards.
//!
//! Units follow the caller's [`spectrum::WellConfig`]; the defaults
//! `2μ = ħ = R = 1` make `E = z²` and the base time `T₀ = 1/π`.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical_orbits;
pub mod companion_wells;
pub mod dynamics;
pub mod io;
pub mod quadrature;
pub mod scenario;
pub mod special_functions;
pub mod spectrum;
pub mod wavepacket;

pub use num_complex::Complex64;
