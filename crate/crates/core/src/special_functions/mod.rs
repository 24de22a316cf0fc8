//! Cylindrical Bessel functions and their zeros.

mod bessel;
mod zeros;

pub use bessel::{bessel_j, bessel_y, BesselLimits};
pub use zeros::{
    asymptotic_z0, check_interlacing, exact_zero, exact_zero_with, wkb_zero, zeros_of_order,
    zeros_of_order_below, ZeroMethod, ZeroRecord, ROOT_RELATIVE_WIDTH, ROOT_RESIDUAL,
};

pub(crate) use bessel::{j_unchecked, y_unchecked};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFunctionError {
    #[error("Bessel order {order} exceeds the configured maximum {max_order}")]
    UnsupportedOrder { order: u32, max_order: u32 },
    #[error("argument {x} exceeds the supported maximum {max_argument}")]
    ArgumentOutOfRange { x: f64, max_argument: f64 },
    #[error("{what} is undefined at x = {x}")]
    Domain { what: &'static str, x: f64 },
    #[error("no sign change bracketing zero (m={m}, n_r={n_r}): f({lo})={f_lo}, f({hi})={f_hi}")]
    Bracket {
        m: u32,
        n_r: u32,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("root polish did not converge for (m={m}, n_r={n_r}): z={z}, residual={residual}")]
    Unconverged {
        m: u32,
        n_r: u32,
        z: f64,
        residual: f64,
    },
}
