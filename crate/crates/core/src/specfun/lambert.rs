use std::f64::consts::E;

use super::{Result, SpecFunError};

const INV_E: f64 = 1.0 / E;
const MAX_ITER: usize = 64;

/// Real branches of the Lambert W function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// W₀, defined on [−1/e, ∞), values ≥ −1.
    Principal,
    /// W₋₁, defined on [−1/e, 0), values ≤ −1.
    Lower,
}

/// Lambert W: the w on the requested branch with w·e^w = x, by Halley
/// iteration from a branch-point or asymptotic starting value.
pub fn lambert_w(branch: Branch, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(SpecFunError::domain("lambert_w", "x is NaN"));
    }
    // tolerate the rounding of -1/e itself
    let x = if x < -INV_E && x > -INV_E - 4.0 * f64::EPSILON {
        -INV_E
    } else {
        x
    };
    if x < -INV_E {
        return Err(SpecFunError::domain("lambert_w", format!("x = {x} < -1/e")));
    }
    if branch == Branch::Lower && x >= 0.0 {
        return Err(SpecFunError::domain("lambert_w", format!("lower branch needs x < 0, got {x}")));
    }
    if x == -INV_E {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }

    let mut w = initial_guess(branch, x);
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let step = f / denom;
        let next = w - step;
        let next = match branch {
            Branch::Principal => next.max(-1.0),
            Branch::Lower => next.min(-1.0),
        };
        if (next - w).abs() <= 4.0 * f64::EPSILON * next.abs().max(1.0) {
            return Ok(next);
        }
        w = next;
    }
    Ok(w)
}

fn initial_guess(branch: Branch, x: f64) -> f64 {
    let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
    match branch {
        Branch::Principal => {
            if x < -0.25 {
                -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
            } else {
                // Winitzki
                let l = x.ln_1p();
                l * (1.0 - (1.0 + l).ln() / (2.0 + l))
            }
        }
        Branch::Lower => {
            if x < -0.25 {
                -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p
            } else {
                let l1 = (-x).ln();
                let l2 = (-l1).ln();
                l1 - l2 + l2 / l1
            }
        }
    }
}
