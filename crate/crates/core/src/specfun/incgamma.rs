//! Incomplete gamma functions.
//!
//! The regularized pair (P, Q) uses the power series for x < a + 1 and the
//! Legendre continued fraction (modified Lentz) otherwise. Γ(a, x) for
//! a ≤ 0 is reached through the downward recurrence
//! Γ(a, x) = (Γ(a + 1, x) − x^a e^{−x}) / a.

use super::gamma::{gamma, ln_gamma_pos};
use super::{Result, SpecFunError};

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn check(func: &'static str, a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(SpecFunError::domain(func, format!("a = {a} must be > 0")));
    }
    if !(x >= 0.0) {
        return Err(SpecFunError::domain(func, format!("x = {x} must be >= 0")));
    }
    Ok(())
}

/// exp(-x + a ln x - ln Γ(a))
fn prefactor(a: f64, x: f64) -> f64 {
    (-x + a * x.ln() - ln_gamma_pos(a)).exp()
}

fn series_p(a: f64, x: f64) -> Result<f64> {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            return Ok(sum * prefactor(a, x));
        }
    }
    Err(SpecFunError::NonConvergence {
        func: "gamma_p",
        terms: MAX_ITER,
    })
}

/// Legendre continued fraction for e^{x} x^{-a} Γ(a, x); valid for any
/// real a when x > 0.
fn legendre_cf(a: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = if b.abs() < FPMIN { 1.0 / FPMIN } else { 1.0 / b };
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(SpecFunError::NonConvergence {
        func: "gamma_q",
        terms: MAX_ITER,
    })
}

fn p_q(a: f64, x: f64) -> Result<(f64, f64)> {
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    if x < a + 1.0 {
        let p = series_p(a, x)?;
        Ok((p, 1.0 - p))
    } else {
        let q = legendre_cf(a, x)? * prefactor(a, x);
        Ok((1.0 - q, q))
    }
}

/// Regularized lower incomplete gamma P(a, x) = γ(a, x)/Γ(a).
pub fn gamma_p(a: f64, x: f64) -> Result<f64> {
    check("gamma_p", a, x)?;
    Ok(p_q(a, x)?.0)
}

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x)/Γ(a).
pub fn gamma_q(a: f64, x: f64) -> Result<f64> {
    check("gamma_q", a, x)?;
    Ok(p_q(a, x)?.1)
}

/// Upper incomplete gamma Γ(a, x) = ∫_x^∞ t^{a−1} e^{−t} dt for a > 0.
pub fn gamma_upper(a: f64, x: f64) -> Result<f64> {
    check("gamma_upper", a, x)?;
    if x == 0.0 {
        return Ok(gamma(a));
    }
    if x >= a + 1.0 {
        // avoid forming Γ(a) · Q when Q underflows relative to Γ(a)
        return Ok(legendre_cf(a, x)? * (-x + a * x.ln()).exp());
    }
    Ok(gamma(a) * p_q(a, x)?.1)
}

/// e^{x} x^{−a} Γ(a, x) for a > 0 and x > 0, without forming Γ(a).
pub(crate) fn gamma_upper_scaled(a: f64, x: f64) -> Result<f64> {
    check("gamma_upper_scaled", a, x)?;
    if x >= a + 1.0 {
        return legendre_cf(a, x);
    }
    let q = 1.0 - series_p(a, x)?;
    Ok(q * (x - a * x.ln() + ln_gamma_pos(a)).exp())
}

/// E_1(x) by its convergent series; used for x ≤ 1.
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= -x / kf;
        let del = term / kf;
        sum += del;
        if del.abs() < EPS * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// Γ(a, x) for any real `a` and x > 0 (x = 0 is allowed when a > 0).
pub fn gamma_upper_any(a: f64, x: f64) -> Result<f64> {
    if a > 0.0 {
        return gamma_upper(a, x);
    }
    if !(x > 0.0) || !a.is_finite() {
        return Err(SpecFunError::domain(
            "gamma_upper_any",
            format!("x = {x} must be > 0 when a = {a} <= 0"),
        ));
    }
    if x >= 1.0 {
        return Ok(legendre_cf(a, x)? * (-x + a * x.ln()).exp());
    }
    // a + n lands in (0, 1], or exactly 0 when a is an integer
    let n = (-a).floor() as i64 + 1;
    let mut s = a + n as f64;
    let mut g = if a == a.floor() {
        s = 0.0;
        e1_series(x)
    } else {
        gamma_upper(s, x)?
    };
    let ex = (-x).exp();
    while s > a + 0.5 {
        s -= 1.0;
        g = (g - x.powf(s) * ex) / s;
    }
    Ok(g)
}

/// Generalized regularized incomplete gamma
/// Q(a, x0, x1) = (Γ(a, x0) − Γ(a, x1)) / Γ(a).
///
/// `x1 = f64::INFINITY` is accepted.
pub fn reg_gamma_q(a: f64, x0: f64, x1: f64) -> Result<f64> {
    check("reg_gamma_q", a, x0)?;
    if !(x1 >= x0) {
        return Err(SpecFunError::domain(
            "reg_gamma_q",
            format!("need x0 <= x1, got x0 = {x0}, x1 = {x1}"),
        ));
    }
    let (p0, q0) = p_q(a, x0)?;
    let (p1, q1) = p_q(a, x1)?;
    // difference of whichever tail is smaller loses the least
    if x1 < a {
        Ok(p1 - p0)
    } else {
        Ok(q0 - q1)
    }
}

/// Inverse of the regularized lower incomplete gamma: x with P(a, x) = p.
pub fn inverse_gamma_p(a: f64, p: f64) -> Result<f64> {
    check("inverse_gamma_p", a, 0.0)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(SpecFunError::domain("inverse_gamma_p", format!("p = {p} outside [0, 1]")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    let mut hi = a.max(1.0);
    while gamma_p(a, hi)? < p {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    let mut x = 0.5 * hi;
    for _ in 0..200 {
        let f = gamma_p(a, x)? - p;
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        // Newton step when it stays inside the bracket
        let dens = prefactor(a, x) / x;
        let mut next = if dens > 0.0 { x - f / dens } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x.max(1e-300) || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
