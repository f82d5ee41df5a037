//! Adaptive scheme: Alice knows Bob's instantaneous capacity and only
//! chooses the redundancy rate.

use serde::{Deserialize, Serialize};

use super::{
    adaptive_objective, bisect_sign, central_diff, eve_cdf, eve_cdf_rate_deriv, re_threshold, Method,
    Optimum, SolverOptions,
};
use crate::channel::{gg_cdf, Receiver};
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::secrecy::{est_adaptive_with, sop, CdfModel, RatePair, SecrecyConstraint};

/// Stationary redundancy rate of the unconstrained adaptive EST for a
/// given Bob capacity.
pub fn adaptive_unconstrained_re(sc: &Scenario, c_b: f64, opts: &SolverOptions) -> Result<f64> {
    Ok(solve_unconstrained(sc, c_b, None, opts)?.0)
}

pub(crate) fn solve_unconstrained(
    sc: &Scenario,
    c_b: f64,
    warm: Option<f64>,
    opts: &SolverOptions,
) -> Result<(f64, Method, usize)> {
    opts.validate()?;
    if !(c_b > 0.0) || !c_b.is_finite() {
        return Err(Error::Argument(format!("c_b must be finite and > 0, got {c_b}")));
    }
    let lo = c_b * 1e-12;
    let hi = c_b * (1.0 - 1e-12);
    let map = |r: f64| -> Result<f64> {
        // r = c_b − F/F′; F′ = 0 in the saturated tail maps to −∞
        Ok(c_b - eve_cdf(sc, r)? / eve_cdf_rate_deriv(sc, r)?)
    };
    // Steffensen extrapolation of the map inside a sign bracket of
    // map(r) − r, which is positive near 0 and negative near c_b
    let (mut a, mut b) = (lo, hi);
    let mut r = warm.filter(|w| *w > lo && *w < hi).unwrap_or(0.5 * c_b);
    for it in 1..=opts.max_iter {
        let width = b - a;
        let p1 = map(r)?;
        if p1.is_nan() {
            break;
        }
        if (p1 - r).abs() <= opts.rate_tol {
            return Ok((p1.clamp(lo, hi), Method::FixedPoint, it));
        }
        if p1 > r {
            a = r;
        } else {
            b = r;
        }
        let mut next = 0.5 * (a + b);
        if p1 > a && p1 < b {
            let p2 = map(p1)?;
            if p2 > p1 {
                a = p1;
            } else {
                b = p1;
            }
            let extrapolated = r - (p1 - r).powi(2) / (p2 - 2.0 * p1 + r);
            next = if extrapolated > a && extrapolated < b {
                extrapolated
            } else if p2 > a && p2 < b {
                p2
            } else {
                0.5 * (a + b)
            };
        }
        if b - a <= opts.rate_tol {
            return Ok((0.5 * (a + b), Method::FixedPoint, it));
        }
        // stalled extrapolation: fall back to halving the bracket
        r = if b - a > 0.5 * width { 0.5 * (a + b) } else { next };
    }
    let h = 1e-7 * c_b.max(1.0);
    let g = |r: f64| central_diff(|x| adaptive_objective(sc, c_b, x), r, h);
    let (r, it) = bisect_sign(g, h, c_b - h, opts.rate_tol)?;
    Ok((r, Method::Bisection, it))
}

/// Max rule: the larger of the stationary point and the threshold rate.
pub fn adaptive_optimal(sc: &Scenario, c_b: f64, s_th: f64, opts: &SolverOptions) -> Result<Optimum> {
    let (r_u, method, iterations) = solve_unconstrained(sc, c_b, None, opts)?;
    let r_th = re_threshold(sc, s_th, opts)?;
    let (r_e, method, active) = if r_th > r_u {
        (r_th, Method::Threshold, true)
    } else {
        (r_u, method, false)
    };
    finish_adaptive(sc, c_b, r_e, s_th, method, active, iterations)
}

pub(super) fn finish_adaptive(
    sc: &Scenario,
    c_b: f64,
    r_e: f64,
    s_th: f64,
    method: Method,
    constraint_active: bool,
    iterations: usize,
) -> Result<Optimum> {
    let feasible = r_e <= c_b;
    let r_e = r_e.min(c_b);
    let constraint = SecrecyConstraint::new(s_th)?;
    let rep = est_adaptive_with(sc, c_b, r_e, constraint, CdfModel::GammaApprox)?;
    let sop_exact = sop(sc, r_e)?;
    let h = 1e-4;
    let hessian_ok = if r_e - h >= 0.0 && r_e + h <= c_b {
        let f = |x: f64| adaptive_objective(sc, c_b, x);
        (f(r_e + h)? - 2.0 * f(r_e)? + f(r_e - h)?) / (h * h) < 0.0
    } else {
        false
    };
    Ok(Optimum {
        rates: RatePair::new(c_b, r_e)?,
        est: rep.est,
        est_exact: (c_b - r_e) * (1.0 - sop_exact),
        sop: rep.sop,
        sop_exact,
        method,
        hessian_ok,
        constraint_active,
        feasible: feasible && rep.constraint_met,
        iterations,
    })
}

/// Surrogate-only per-realization solve used by the averaged mode and the
/// Monte-Carlo estimator: returns (r_e, gated EST).
pub(crate) fn adaptive_rate_for_capacity(
    sc: &Scenario,
    c_b: f64,
    r_th: f64,
    warm: Option<f64>,
    opts: &SolverOptions,
) -> Result<(f64, f64)> {
    if !(c_b > 0.0) || r_th >= c_b {
        return Ok((c_b.max(0.0), 0.0));
    }
    let (r_u, _, _) = solve_unconstrained(sc, c_b, warm, opts)?;
    let r_e = r_u.max(r_th);
    Ok((r_e, (c_b - r_e) * eve_cdf(sc, r_e)?))
}

/// Expected adaptive EST over the law of Bob's capacity, with the
/// redundancy rate re-optimized for every capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveAverage {
    /// Average of the surrogate objective the solver maximizes.
    pub est: f64,
    /// Same rates scored with the exact SOP.
    pub est_exact: f64,
    pub mean_capacity: f64,
    /// Capacity-weighted mean of the chosen redundancy rate.
    pub mean_r_e: f64,
    /// Probability that no redundancy rate meets the constraint.
    pub infeasible_mass: f64,
    pub cells: usize,
}

/// Riemann–Stieltjes sum of the per-capacity optimum against the TLS
/// capacity distribution F_gg(x)^{N_A}.
pub fn adaptive_average(sc: &Scenario, s_th: f64, opts: &SolverOptions) -> Result<AdaptiveAverage> {
    opts.validate()?;
    let r_th = re_threshold(sc, s_th, opts)?;
    let n_a = sc.nodes().n_a as i32;
    let law = |x: f64| -> Result<f64> { Ok(gg_cdf(sc.turb_bob.alpha, sc.beta_agg_bob(), x)?.powi(n_a)) };
    let mut x_hi = 4.0;
    while 1.0 - law(x_hi)? > 1e-10 {
        x_hi *= 2.0;
        if x_hi > 1e6 {
            return Err(Error::Convergence {
                what: "capacity law support",
                detail: "upper tail does not decay".into(),
            });
        }
    }
    let cells = opts.grid_points.max(10);
    let dx = x_hi / cells as f64;
    let mut prev = 0.0;
    let mut est = 0.0;
    let mut est_exact = 0.0;
    let mut mean_capacity = 0.0;
    let mut mean_r_e = 0.0;
    let mut infeasible_mass = 0.0;
    let mut warm = None;
    for i in 0..cells {
        let upper = law((i + 1) as f64 * dx)?;
        let w = upper - prev;
        prev = upper;
        let c_b = sc.capacity((i as f64 + 0.5) * dx, Receiver::Bob);
        let (r_e, psi) = adaptive_rate_for_capacity(sc, c_b, r_th, warm, opts)?;
        if r_th >= c_b {
            infeasible_mass += w;
        } else {
            warm = Some(r_e);
        }
        est += w * psi;
        if psi > 0.0 {
            est_exact += w * (c_b - r_e) * (1.0 - sop(sc, r_e)?);
        }
        mean_capacity += w * c_b;
        mean_r_e += w * r_e;
    }
    Ok(AdaptiveAverage {
        est,
        est_exact,
        mean_capacity,
        mean_r_e,
        infeasible_mass,
        cells,
    })
}
