//! Special functions: gamma, confluent hypergeometric (Kummer M, Tricomi U),
//! Whittaker M/W with derivatives, and generalized Laguerre polynomials of
//! order −1/2.
//!
//! Everything here is plain double precision; the only exception is the
//! scaled-representation overflow path of the Whittaker functions. All
//! functions are pure and thread-safe.

mod gamma;
mod hyp;
pub(crate) mod laguerre;
mod whittaker;

pub use gamma::{gamma, ln_gamma, LnGamma};
pub use hyp::{kummer_m, tricomi_u, tricomi_u_full, UEval};
pub use laguerre::laguerre;
pub use whittaker::{
    whittaker_m, whittaker_m_ln, whittaker_m_prime, whittaker_m_scaled, whittaker_w,
    whittaker_w_ln, whittaker_w_prime, whittaker_w_scaled, LnVal, ScaledValue,
};

use crate::{Error, Result};

/// Truncation and tolerance policy for the infinite series and quadratures.
///
/// A series stops once `consecutive_small` successive terms fall below
/// `rel_tol` times the running sum, or fails with a non-convergence error
/// after `max_terms` terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    max_terms: usize,
    rel_tol: f64,
    consecutive_small: usize,
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64, consecutive_small: usize) -> Result<Self> {
        if max_terms < 1 {
            return Err(Error::InvalidParameter("max_terms must be >= 1".into()));
        }
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::InvalidParameter(
                "rel_tol must lie in (0, 1)".into(),
            ));
        }
        if consecutive_small < 1 {
            return Err(Error::InvalidParameter(
                "consecutive_small must be >= 1".into(),
            ));
        }
        Ok(SeriesControl {
            max_terms,
            rel_tol,
            consecutive_small,
        })
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn consecutive_small(&self) -> usize {
        self.consecutive_small
    }

    /// Same policy with a different term budget.
    pub fn with_max_terms(&self, max_terms: usize) -> Self {
        SeriesControl {
            max_terms,
            ..*self
        }
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 200,
            rel_tol: 1e-10,
            consecutive_small: 3,
        }
    }
}

/// Compensated (Kahan) accumulator used by the term-recurrence series.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, term: f64) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}
