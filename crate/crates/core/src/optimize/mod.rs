//! Rate optimizers for the adaptive and fixed-rate schemes, plus the grid
//! oracle used to validate them.
//!
//! Every solver works on the gamma surrogate of the irradiance laws, which
//! is what the stationarity conditions are written for. The exact-CDF EST
//! at the returned rates is reported alongside.

pub(crate) mod adaptive;
mod fixed;
mod oracle;

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::channel::{ggp_cdf_approx, ggp_pdf_approx, Receiver};
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::secrecy::{sop_approx, RatePair};
use crate::specfun::{gamma_p, gamma_q, inverse_gamma_p, ln_gamma};

pub use adaptive::{adaptive_average, adaptive_optimal, adaptive_unconstrained_re, AdaptiveAverage};
pub use fixed::{fixed_constrained_rb, fixed_optimal, fixed_unconstrained_pair};
pub use oracle::{
    adaptive_oracle, fixed_oracle, fixed_rb_oracle, grid_refine_maximize, grid_refine_maximize_2d,
    GridMax, GridMax2,
};

/// Upper end of the rate search; far beyond any capacity a desk-scale
/// scenario reaches.
const RATE_LIMIT: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    pub rate_tol: f64,
    pub max_iter: usize,
    pub damping: f64,
    /// Grid points per axis for the oracle.
    pub grid_points: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rate_tol: 1e-9,
            max_iter: 200,
            damping: 0.5,
            grid_points: 400,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate_tol > 0.0) {
            return Err(Error::Argument(format!("rate_tol must be > 0, got {}", self.rate_tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Argument("max_iter must be >= 1".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::Argument(format!("damping must lie in (0, 1], got {}", self.damping)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FixedPoint,
    LambertW,
    Threshold,
    /// Stationarity bracketed by bisection after the fixed-point map failed.
    Bisection,
    GridOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub rates: RatePair,
    /// Surrogate EST, gated by the surrogate SOP.
    pub est: f64,
    /// Exact-CDF EST at the same rates, not gated.
    pub est_exact: f64,
    /// Surrogate SOP at `rates.r_e`.
    pub sop: f64,
    pub sop_exact: f64,
    pub method: Method,
    pub hessian_ok: bool,
    pub constraint_active: bool,
    /// False when no rate pair meets the secrecy constraint.
    pub feasible: bool,
    pub iterations: usize,
}

/// Eve's surrogate CDF at the threshold of `r_e`, i.e. 1 − SOP.
pub(crate) fn eve_cdf(sc: &Scenario, r_e: f64) -> Result<f64> {
    let x = sc.threshold(r_e, Receiver::Eve)?.value;
    ggp_cdf_approx(&sc.approx_eve, sc.xi(), x)
}

/// d/dr_e of [`eve_cdf`].
pub(crate) fn eve_cdf_rate_deriv(sc: &Scenario, r_e: f64) -> Result<f64> {
    let x = sc.threshold(r_e, Receiver::Eve)?.value;
    let dx = (r_e * LN_2).exp() * LN_2 / sc.snr_scale(Receiver::Eve);
    Ok(ggp_pdf_approx(&sc.approx_eve, sc.xi(), x)? * dx)
}

/// Bob's per-branch surrogate quantities at rate `r_b`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BobBranch {
    /// x / θ
    pub t: f64,
    /// P(k, t)
    pub c1: f64,
    /// 1 − P(k, t)
    pub q: f64,
    /// Gamma(k, 1) density at t.
    pub density: f64,
    /// dt / dr_b
    pub dt: f64,
}

pub(crate) fn bob_branch(sc: &Scenario, r_b: f64) -> Result<BobBranch> {
    let ga = &sc.approx_bob;
    let x = sc.threshold(r_b, Receiver::Bob)?.value;
    let t = x / ga.theta_ap;
    let density = if t > 0.0 {
        ((ga.k_ap - 1.0) * t.ln() - t - ln_gamma(ga.k_ap)?).exp()
    } else if ga.k_ap == 1.0 {
        1.0
    } else {
        0.0
    };
    Ok(BobBranch {
        t,
        c1: gamma_p(ga.k_ap, t)?,
        q: gamma_q(ga.k_ap, t)?,
        density,
        dt: (r_b * LN_2).exp() * LN_2 / (sc.snr_scale(Receiver::Bob) * ga.theta_ap),
    })
}

/// 1 − P^N computed from Q without cancellation.
pub(crate) fn one_minus_pow(q: f64, n: u32) -> f64 {
    -((n as f64) * (-q).ln_1p()).exp_m1()
}

/// Ungated surrogate EST of the fixed-rate scheme.
pub(crate) fn fixed_objective(sc: &Scenario, r_b: f64, r_e: f64) -> Result<f64> {
    if r_e < 0.0 || r_b < r_e {
        return Ok(0.0);
    }
    let b = bob_branch(sc, r_b)?;
    Ok((r_b - r_e) * one_minus_pow(b.q, sc.nodes().n_a) * eve_cdf(sc, r_e)?)
}

/// Ungated surrogate EST of the adaptive scheme.
pub(crate) fn adaptive_objective(sc: &Scenario, c_b: f64, r_e: f64) -> Result<f64> {
    if r_e < 0.0 || r_e > c_b {
        return Ok(0.0);
    }
    Ok((c_b - r_e) * eve_cdf(sc, r_e)?)
}

/// Rate from a normalized Eve threshold t = x/θ.
fn eve_rate_from_t(sc: &Scenario, t: f64) -> f64 {
    (sc.approx_eve.theta_ap * t * sc.snr_scale(Receiver::Eve)).ln_1p() / LN_2
}

/// Smallest redundancy rate whose surrogate SOP does not exceed `s_th`.
pub fn re_threshold(sc: &Scenario, s_th: f64, opts: &SolverOptions) -> Result<f64> {
    opts.validate()?;
    if !(s_th > 0.0 && s_th <= 1.0) {
        return Err(Error::Argument(format!("s_th must lie in (0, 1], got {s_th}")));
    }
    if s_th == 1.0 {
        return Ok(0.0);
    }
    let ga = &sc.approx_eve;
    let k = ga.k_ap;
    let target = 1.0 - s_th;
    let seed = inverse_gamma_p(k, target)?;
    let t = if sc.pointing.is_pointing_free() {
        seed
    } else {
        threshold_fixed_point(sc, s_th, seed, opts)
            .or_else(|_| threshold_bisection(sc, target, seed))?
    };
    let r = eve_rate_from_t(sc, t);
    if !(r.is_finite()) || r > RATE_LIMIT {
        return Err(Error::NoSolution(format!(
            "s_th = {s_th} needs a redundancy rate beyond {RATE_LIMIT} bpcu"
        )));
    }
    polish_threshold(sc, s_th, r)
}

/// t ← ((Γ(k, t) − S Γ(k)) / E_ϑ(t))^{1/k}, damped.
fn threshold_fixed_point(sc: &Scenario, s_th: f64, seed: f64, opts: &SolverOptions) -> Result<f64> {
    let ga = &sc.approx_eve;
    let k = ga.k_ap;
    let order = sc.pointing.xi_sq() - k + 1.0;
    let lg = ln_gamma(k)?;
    let mut t = seed;
    for _ in 0..opts.max_iter {
        if !(t > 0.0) {
            return Err(Error::Convergence {
                what: "threshold-rate iteration",
                detail: format!("left the domain at t = {t}"),
            });
        }
        let num = gamma_q(k, t)? - s_th;
        let mapped = if num > 0.0 {
            let e = crate::specfun::exp_integral(order, t)?;
            ((num.ln() + lg - e.ln()) / k).exp()
        } else {
            0.0
        };
        let next = (1.0 - opts.damping) * t + opts.damping * mapped;
        if !next.is_finite() {
            break;
        }
        let step = (next - t).abs();
        t = next;
        if step <= opts.rate_tol * t.max(1.0) {
            return Ok(t);
        }
    }
    Err(Error::Convergence {
        what: "threshold-rate iteration",
        detail: format!("no convergence in {} iterations", opts.max_iter),
    })
}

fn threshold_bisection(sc: &Scenario, target: f64, seed: f64) -> Result<f64> {
    let ga = &sc.approx_eve;
    let f = |t: f64| -> Result<f64> { Ok(ggp_cdf_approx(ga, sc.xi(), t * ga.theta_ap)? - target) };
    let mut hi = seed.max(1.0);
    while f(hi)? < 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoSolution("SOP never reaches the threshold".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Moves `r` onto the feasible side of the SOP = s_th crossing.
fn polish_threshold(sc: &Scenario, s_th: f64, r: f64) -> Result<f64> {
    let feasible = |r: f64| -> Result<bool> { Ok(sop_approx(sc, r)? <= s_th) };
    let mut step = 1e-9_f64.max(r * 1e-9);
    let (mut lo, mut hi) = if feasible(r)? {
        let mut lo = (r - step).max(0.0);
        while lo > 0.0 && feasible(lo)? {
            step *= 2.0;
            lo = (r - step).max(0.0);
        }
        (lo, r)
    } else {
        let mut hi = r + step;
        while !feasible(hi)? {
            step *= 2.0;
            hi = r + step;
            if hi > RATE_LIMIT {
                return Err(Error::NoSolution(format!("s_th = {s_th} not reachable")));
            }
        }
        (r, hi)
    };
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo < 1e-14 {
            break;
        }
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let gap = (sop_approx(sc, hi)? - s_th).abs();
    if gap > 1e-6 {
        return Err(Error::Convergence {
            what: "threshold rate",
            detail: format!("SOP misses s_th by {gap:e}"),
        });
    }
    Ok(hi)
}

/// Central-difference derivative.
pub(crate) fn central_diff(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Root of a sign change of `g` on [lo, hi], assuming g(lo) > 0 > g(hi).
pub(crate) fn bisect_sign(
    g: impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<(f64, usize)> {
    let mut iterations = 0;
    while hi - lo > tol && iterations < 400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), iterations))
}
