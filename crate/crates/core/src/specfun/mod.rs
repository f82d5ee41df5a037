//! Real-valued special functions used by the closed-form CDFs and the
//! rate optimizers.
//!
//! Everything here is pure and allocation-free. Accuracy targets are
//! relative 1e-12 or better unless a function says otherwise.

mod bessel;
mod erf;
mod expint;
mod gamma;
mod hyper;
mod incgamma;
mod lambert;

pub use bessel::bessel_k;
pub use erf::{erf, erfc};
pub use expint::exp_integral;
pub use gamma::{gamma, ln_gamma, rgamma, sin_pi};
pub use hyper::{hyp1f2, hyp1f2_reg, HypSeries};
pub use incgamma::{gamma_p, gamma_q, gamma_upper, gamma_upper_any, inverse_gamma_p, reg_gamma_q};
pub use lambert::{lambert_w, Branch};

use thiserror::Error;

/// Errors raised by the special-function layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{func}: argument outside domain ({detail})")]
    Domain { func: &'static str, detail: String },
    #[error("{func}: series did not converge within {terms} terms")]
    NonConvergence { func: &'static str, terms: usize },
}

impl SpecFunError {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        SpecFunError::Domain {
            func,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SpecFunError>;

/// Stopping rule shared by the series and continued-fraction evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            rel_tol: 1e-12,
            max_terms: 10_000,
        }
    }
}

impl EvalOptions {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(SpecFunError::domain("EvalOptions", "rel_tol must be > 0"));
        }
        if max_terms == 0 {
            return Err(SpecFunError::domain("EvalOptions", "max_terms must be >= 1"));
        }
        Ok(EvalOptions { rel_tol, max_terms })
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_options_reject_bad_values() {
        assert!(EvalOptions::new(0.0, 10).is_err());
        assert!(EvalOptions::new(1e-10, 0).is_err());
        assert!(EvalOptions::new(f64::NAN, 10).is_err());
        assert!(EvalOptions::new(1e-10, 1).is_ok());
    }

    #[test]
    fn compensated_sum_recovers_lost_bits() {
        let mut s = CompensatedSum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }
}
