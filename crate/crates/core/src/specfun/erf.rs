use super::incgamma::{gamma_p, gamma_q};

/// Error function, via erf(x) = sign(x) · P(1/2, x²).
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    // P(1/2, x^2) is total for all finite x, so unwrap cannot fail
    let p = gamma_p(0.5, x * x).unwrap_or(1.0);
    p.copysign(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    gamma_q(0.5, x * x).unwrap_or(0.0)
}
