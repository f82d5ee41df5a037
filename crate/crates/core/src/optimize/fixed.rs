//! Fixed-rate scheme: both rates are chosen from average CSI.

use std::f64::consts::LN_2;

use super::{
    bisect_sign, bob_branch, eve_cdf, eve_cdf_rate_deriv, fixed_objective, one_minus_pow, re_threshold,
    Method, Optimum, SolverOptions,
};
use crate::channel::Receiver;
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::secrecy::{est_fixed_with, reliability_outage, sop, CdfModel, RatePair, SecrecyConstraint};
use crate::specfun::{lambert_w, ln_gamma, Branch};

/// Width of the r_b search window above r_e.
const RB_SPAN: f64 = 20.0;

/// F_E / F_E′ at r_e, the secrecy rate that makes ∂Ψ/∂r_e vanish.
fn eve_ratio(sc: &Scenario, r_e: f64) -> Result<f64> {
    Ok(eve_cdf(sc, r_e)? / eve_cdf_rate_deriv(sc, r_e)?)
}

/// ∂Ψ/∂r_b up to the positive factor F_E.
fn grad_rb(sc: &Scenario, r_b: f64, r_e: f64) -> Result<f64> {
    let n = sc.nodes().n_a;
    let b = bob_branch(sc, r_b)?;
    let deriv = n as f64 * b.c1.powi(n as i32 - 1) * b.density * b.dt;
    Ok(one_minus_pow(b.q, n) - (r_b - r_e) * deriv)
}

/// ∂Ψ/∂r_e up to the positive factor 1 − T.
fn grad_re(sc: &Scenario, r_b: f64, r_e: f64) -> Result<f64> {
    Ok(-eve_cdf(sc, r_e)? + (r_b - r_e) * eve_cdf_rate_deriv(sc, r_e)?)
}

fn damp(old: f64, new: f64, d: f64) -> f64 {
    (1.0 - d) * old + d * new
}

/// Joint stationary point of the unconstrained fixed-rate EST.
pub fn fixed_unconstrained_pair(sc: &Scenario, opts: &SolverOptions) -> Result<Optimum> {
    let (r_b, r_e, method, iterations) = solve_pair(sc, opts)?;
    let hessian_ok = hessian_negative_definite(sc, r_b, r_e)?;
    finish(sc, r_b, r_e, 1.0, method, false, hessian_ok, iterations)
}

fn solve_pair(sc: &Scenario, opts: &SolverOptions) -> Result<(f64, f64, Method, usize)> {
    opts.validate()?;
    let mut r_b = sc.capacity(0.5, Receiver::Bob).max(0.1);
    let mut r_e = 0.4 * r_b;
    let mut total = 0;
    let mut used_w = true;
    for _ in 0..opts.max_iter {
        // r_b from the W-function closed form at the current r_e
        let (inner_b, method, it) = solve_constrained_rb(sc, r_e, opts)?;
        used_w &= method == Method::LambertW;
        total += it;
        r_b = inner_b;
        // r_e = r_b − F_E/F_E′
        let mapped_e = r_b - eve_ratio(sc, r_e)?;
        if !mapped_e.is_finite() {
            break;
        }
        let next_e = damp(r_e, mapped_e.clamp(0.0, r_b), opts.damping);
        let step = (next_e - r_e).abs();
        r_e = next_e;
        total += 1;
        if step <= opts.rate_tol {
            let (b, _, it) = solve_constrained_rb(sc, r_e, opts)?;
            if r_e > 1e-6 && b > r_e + 1e-6 {
                let method = if used_w { Method::FixedPoint } else { Method::Bisection };
                return Ok((b, r_e, method, total + it));
            }
            break;
        }
    }
    coordinate_ascent(sc, opts)
}

/// Alternating exact 1-D maximization, each step bracketing a sign change
/// of the partial derivative.
fn coordinate_ascent(sc: &Scenario, opts: &SolverOptions) -> Result<(f64, f64, Method, usize)> {
    let mut r_b = sc.capacity(0.5, Receiver::Bob).max(0.1);
    let mut r_e = 0.4 * r_b;
    let tol = opts.rate_tol;
    for it in 1..=opts.max_iter.max(50) {
        let (next_e, _) = bisect_sign(|x| grad_re(sc, r_b, x), 0.0, r_b, tol)?;
        let (next_b, _) = bisect_sign(|x| grad_rb(sc, x, next_e), next_e, next_e + RB_SPAN, tol)?;
        let step = (next_e - r_e).abs().max((next_b - r_b).abs());
        r_e = next_e;
        r_b = next_b;
        if step <= 10.0 * tol {
            return Ok((r_b, r_e, Method::Bisection, it));
        }
    }
    Err(Error::Convergence {
        what: "fixed-rate joint optimum",
        detail: format!("no convergence after {} sweeps", opts.max_iter.max(50)),
    })
}

/// 𝒜 < 0 and 𝒜𝒞 − ℬ² > 0 for the central-difference Hessian.
fn hessian_negative_definite(sc: &Scenario, r_b: f64, r_e: f64) -> Result<bool> {
    let h = 1e-4;
    if r_e - h < 0.0 || r_b - h < r_e + h {
        return Ok(false);
    }
    let f = |b: f64, e: f64| fixed_objective(sc, b, e);
    let f0 = f(r_b, r_e)?;
    let a = (f(r_b, r_e + h)? - 2.0 * f0 + f(r_b, r_e - h)?) / (h * h);
    let c = (f(r_b + h, r_e)? - 2.0 * f0 + f(r_b - h, r_e)?) / (h * h);
    let b = (f(r_b + h, r_e + h)? - f(r_b + h, r_e - h)? - f(r_b - h, r_e + h)? + f(r_b - h, r_e - h)?)
        / (4.0 * h * h);
    Ok(a < 0.0 && a * c - b * b > 0.0)
}

/// Optimal codeword rate for a fixed redundancy rate.
pub fn fixed_constrained_rb(sc: &Scenario, r_e_fixed: f64, opts: &SolverOptions) -> Result<f64> {
    Ok(solve_constrained_rb(sc, r_e_fixed, opts)?.0)
}

pub(crate) fn solve_constrained_rb(
    sc: &Scenario,
    r_e: f64,
    opts: &SolverOptions,
) -> Result<(f64, Method, usize)> {
    opts.validate()?;
    if !(r_e >= 0.0) || !r_e.is_finite() {
        return Err(Error::Argument(format!("r_e must be finite and >= 0, got {r_e}")));
    }
    // coarse bracket of the stationary point seeds the W iteration
    let (seed, _) = bisect_sign(|x| grad_rb(sc, x, r_e), r_e + 1e-9, r_e + RB_SPAN, 1e-2)?;
    let mut best: Option<(f64, f64, usize)> = None;
    for branch in [Branch::Principal, Branch::Lower] {
        if let Ok((r_b, it)) = lambert_iteration(sc, r_e, seed, branch, opts) {
            let v = fixed_objective(sc, r_b, r_e)?;
            if best.map_or(true, |(_, bv, _)| v > bv) {
                best = Some((r_b, v, it));
            }
        }
    }
    if let Some((r_b, _, it)) = best {
        return Ok((r_b, Method::LambertW, it));
    }
    let h = 1e-9;
    let (r_b, it) = bisect_sign(|x| grad_rb(sc, x, r_e), r_e + h, r_e + RB_SPAN, opts.rate_tol)?;
    Ok((r_b, Method::Bisection, it))
}

/// r_b ← log₂(−c W(arg(r_b))), damped, on one branch of W.
fn lambert_iteration(
    sc: &Scenario,
    r_e: f64,
    seed: f64,
    branch: Branch,
    opts: &SolverOptions,
) -> Result<(f64, usize)> {
    let n = sc.nodes().n_a;
    let k = sc.approx_bob.k_ap;
    let c = sc.snr_scale(Receiver::Bob) * sc.approx_bob.theta_ap;
    let lg = ln_gamma(k)?;
    let lo = r_e + 1e-9;
    let hi = r_e + RB_SPAN;
    let map = |r_b: f64| -> Result<f64> {
        let b = bob_branch(sc, r_b)?;
        // ln|arg| with (C1 − C1^{1−N}) = −C1^{1−N} (1 − C1^N)
        let ln_mag = (1.0 - n as f64) * b.c1.ln() + one_minus_pow(b.q, n).ln() + lg + (1.0 - k) * b.t.ln()
            - 1.0 / c
            - (r_b - r_e).ln()
            - (LN_2 * n as f64).ln();
        let arg = -ln_mag.exp();
        if !(arg >= -(-1.0f64).exp()) {
            return Err(Error::LambertDomain {
                argument: arg,
                r_b,
                r_e,
            });
        }
        let mapped = (-c * lambert_w(branch, arg)?).log2();
        if !mapped.is_finite() {
            return Err(Error::NoSolution("Lambert W map left the rate domain".into()));
        }
        Ok(mapped)
    };
    // the plain map is repelling near the root; Steffensen's extrapolation
    // converges regardless of the slope sign
    let mut r_b = seed.clamp(lo, hi);
    for it in 1..=opts.max_iter {
        let p1 = map(r_b)?;
        if (p1 - r_b).abs() <= opts.rate_tol {
            return Ok((p1, it));
        }
        let p2 = map(p1.clamp(lo, hi))?;
        let denom = p2 - 2.0 * p1 + r_b;
        let next = r_b - (p1 - r_b).powi(2) / denom;
        if !next.is_finite() || next <= lo || next >= hi {
            return Err(Error::NoSolution("Lambert W fixed point sits on the rate bound".into()));
        }
        r_b = next;
    }
    Err(Error::Convergence {
        what: "Lambert W iteration",
        detail: format!("no convergence in {} iterations", opts.max_iter),
    })
}

/// Max rule: keep the joint optimum when it already meets the threshold,
/// otherwise pin r_e to the threshold rate and re-optimize r_b.
pub fn fixed_optimal(sc: &Scenario, s_th: f64, opts: &SolverOptions) -> Result<Optimum> {
    let (r_b_u, r_e_u, method, iterations) = solve_pair(sc, opts)?;
    let r_th = re_threshold(sc, s_th, opts)?;
    if r_e_u >= r_th {
        let hessian_ok = hessian_negative_definite(sc, r_b_u, r_e_u)?;
        return finish(sc, r_b_u, r_e_u, s_th, method, false, hessian_ok, iterations);
    }
    let (r_b, method, it) = solve_constrained_rb(sc, r_th, opts)?;
    let h = 1e-4;
    let f = |b: f64| fixed_objective(sc, b, r_th);
    let hessian_ok = r_b - h > r_th && (f(r_b + h)? - 2.0 * f(r_b)? + f(r_b - h)?) < 0.0;
    finish(sc, r_b, r_th, s_th, method, true, hessian_ok, iterations + it)
}

#[allow(clippy::too_many_arguments)]
pub(super) fn finish(
    sc: &Scenario,
    r_b: f64,
    r_e: f64,
    s_th: f64,
    method: Method,
    constraint_active: bool,
    hessian_ok: bool,
    iterations: usize,
) -> Result<Optimum> {
    let rates = RatePair::new(r_b, r_e)?;
    let constraint = SecrecyConstraint::new(s_th)?;
    let rep = est_fixed_with(sc, rates, constraint, CdfModel::GammaApprox)?;
    let sop_exact = sop(sc, r_e)?;
    let outage_exact = reliability_outage(sc, r_b)?;
    Ok(Optimum {
        rates,
        est: rep.est,
        est_exact: (r_b - r_e) * (1.0 - outage_exact) * (1.0 - sop_exact),
        sop: rep.sop,
        sop_exact,
        method,
        hessian_ok,
        constraint_active,
        feasible: rep.constraint_met,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_is_stationary() {
        let sc = Scenario::baseline();
        let o = fixed_unconstrained_pair(&sc, &SolverOptions::default()).unwrap();
        let h = 1e-5;
        let (b, e) = (o.rates.r_b, o.rates.r_e);
        let de = (fixed_objective(&sc, b, e + h).unwrap() - fixed_objective(&sc, b, e - h).unwrap()) / (2.0 * h);
        let db = (fixed_objective(&sc, b + h, e).unwrap() - fixed_objective(&sc, b - h, e).unwrap()) / (2.0 * h);
        assert!(de.abs() < 1e-5 && db.abs() < 1e-5, "{de} {db}");
        assert!(o.hessian_ok);
    }

    #[test]
    fn constrained_rb_is_stationary() {
        let sc = Scenario::baseline();
        let r_b = fixed_constrained_rb(&sc, 2.0, &SolverOptions::default()).unwrap();
        assert!(grad_rb(&sc, r_b, 2.0).unwrap().abs() < 1e-6);
    }

    #[test]
    fn single_transmit_aperture() {
        let sc = Scenario::new(crate::scenario::ScenarioConfig::default().with_apertures(1, 1, 2)).unwrap();
        let r_b = fixed_constrained_rb(&sc, 1.5, &SolverOptions::default()).unwrap();
        assert!(grad_rb(&sc, r_b, 1.5).unwrap().abs() < 1e-6);
    }

    #[test]
    fn s_th_one_reproduces_pair() {
        let sc = Scenario::baseline();
        let opts = SolverOptions::default();
        let a = fixed_optimal(&sc, 1.0, &opts).unwrap();
        let b = fixed_unconstrained_pair(&sc, &opts).unwrap();
        assert_eq!(a.rates, b.rates);
    }
}
