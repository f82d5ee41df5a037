use std::f64::consts::PI;

use super::{Result, SpecFunError};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (z - 1)
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// `sin(pi * x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x % 2.0;
    let r = if r < 0.0 { r + 2.0 } else { r };
    // r in [0, 2)
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else if r <= 1.25 {
        (PI * (1.0 - r)).sin()
    } else if r <= 1.75 {
        -(PI * (r - 1.5)).cos()
    } else {
        -(PI * (2.0 - r)).sin()
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::domain("ln_gamma", format!("x = {x} must be > 0")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos argument away from zero
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Γ(x) for any real x. Poles return NaN.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) || x.is_nan() {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    if x > 30.0 {
        return ln_gamma_pos(x).exp();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// 1/Γ(x) for any real x, exactly zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1 - x) / π
        let g = gamma(1.0 - x);
        if g.is_infinite() {
            return sin_pi(x).signum() * 0.0;
        }
        return sin_pi(x) * g / PI;
    }
    if x > 171.7 {
        return (-ln_gamma_pos(x)).exp();
    }
    1.0 / gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_at_one_and_two_is_zero() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn ln_gamma_half_is_ln_sqrt_pi() {
        let want = PI.sqrt().ln();
        assert!((ln_gamma(0.5).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.572_364_942_9).abs() < 1e-10);
    }

    #[test]
    fn ln_gamma_rejects_nonpositive() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-2.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn gamma_factorials() {
        let mut f = 1.0;
        for n in 1..20 {
            let g = gamma(n as f64);
            assert!((g - f).abs() <= 1e-14 * f, "n = {n}: {g} vs {f}");
            f *= n as f64;
        }
    }

    #[test]
    fn gamma_negative_half() {
        // Γ(-1/2) = -2√π
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rgamma_vanishes_at_poles() {
        for n in 0..6 {
            assert_eq!(rgamma(-(n as f64)), 0.0);
        }
        assert!((rgamma(-0.5) * gamma(-0.5) - 1.0).abs() < 1e-14);
        assert!((rgamma(3.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sin_pi_exact_at_integers() {
        for n in -5..5 {
            assert_eq!(sin_pi(n as f64), 0.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-0.5) + 1.0).abs() < 1e-16);
        assert!((sin_pi(7.3) - (PI * 7.3).sin()).abs() < 1e-13);
    }
}
