//! Comptonized photon spectra inside an x-ray pulsar accretion column.
//!
//! The library evaluates the exact eigenfunction-expansion Green's function
//! of the steady-state Kompaneets transport problem for a column with a
//! linear velocity profile, the photon number and energy densities derived
//! from it, and the Laguerre-polynomial summation identity obtained by
//! equating the series and closed-form density routes.
//!
//! Layout:
//! - [`specfun`]: gamma, Kummer M, Tricomi U, Whittaker M/W (+ derivatives),
//!   generalized Laguerre polynomials.
//! - [`column`]: physical/dimensionless parameters and the maps between them.
//! - [`quad`]: adaptive Gauss–Kronrod quadrature, finite and semi-infinite.
//! - [`bilinear`]: the bilinear Laguerre kernel shared by the slowly
//!   convergent series (generating-function tail integrals).
//! - [`greens`]: the Green's function expansion, densities, residual checks,
//!   and source convolution.
//! - [`identities`]: numerical certification of the summation identity and
//!   the Wronskian identities.
//! - [`cli`]: config parsing and the CSV-emitting run commands.

// reference constants are written with their full 25-digit values even
// though f64 rounds them; `!(x > 0)` guards deliberately reject NaN
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod bilinear;
pub mod cli;
pub mod column;
pub mod greens;
pub mod identities;
pub mod quad;
pub mod specfun;

pub use column::{ColumnParams, DerivedParams, EigenMode, MicroPhysics};
pub use specfun::SeriesControl;

/// Errors shared across the numerical modules.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("gamma pole at non-positive integer argument {0}")]
    GammaPole(f64),

    #[error("{what}: series did not converge within {max_terms} terms (last relative term {last_rel:.3e})")]
    NonConvergence {
        what: &'static str,
        max_terms: usize,
        last_rel: f64,
    },

    #[error("{what}: quadrature failed to reach tolerance (estimated error {est_err:.3e})")]
    QuadratureFailure { what: &'static str, est_err: f64 },

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("result overflows double precision: {mantissa:.17e} x 10^{exp10}")]
    Overflow { mantissa: f64, exp10: i32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("finite-difference stencil overlaps the injection point")]
    StencilOverlap,

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
