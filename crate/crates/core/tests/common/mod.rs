//! Reference implementations used only as test oracles. None of them share
//! code with the crate under test.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

/// Tanh-sinh quadrature on [a, b]; tolerates integrable endpoint
/// singularities. Refines the step until two levels agree to `tol`
/// (relative to the magnitude of the result, floor 1).
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let d = 0.5 * (b - a);
    let eval = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        // distance to the nearer endpoint, without cancellation
        let gap = d * 2.0 / ((2.0 * u.abs()).exp() + 1.0);
        let x = if u >= 0.0 { b - gap } else { a + gap };
        if gap <= 0.0 || x <= a || x >= b {
            return 0.0;
        }
        let v = f(x) * w * d;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let t_max = 6.5;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= t_max {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let cur = sum * h;
        if (cur - prev).abs() <= tol * cur.abs().max(1.0) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// ∫_a^∞ f by the substitution x = a + s/(1 − s).
pub fn tanh_sinh_inf(f: impl Fn(f64) -> f64, a: f64, tol: f64) -> f64 {
    tanh_sinh(
        |s| {
            let one = 1.0 - s;
            f(a + s / one) / (one * one)
        },
        0.0,
        1.0,
        tol,
    )
}

/// ln Γ(x) for x > 0: upward recurrence to x ≥ 30, then the Stirling
/// series with eight Bernoulli terms.
pub fn ln_gamma_stirling(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut shift = 0.0;
    let mut z = x;
    while z < 30.0 {
        shift += z.ln();
        z += 1.0;
    }
    const B: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for b in B {
        series += b * p;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
}

/// Regularized lower incomplete gamma P(a, x) by its power series
/// Σ xⁿ⁺ᵃ e⁻ˣ / Γ(a + n + 1), adequate for x up to a few hundred.
pub fn gamma_p_series(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let ln_lead = a * x.ln() - x - ln_gamma_stirling(a + 1.0);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 1.0;
    while term > 1e-17 * sum {
        term *= x / (a + n);
        sum += term;
        n += 1.0;
        assert!(n < 1e5, "P series did not converge");
    }
    (ln_lead.exp() * sum).min(1.0)
}

/// CDF of the unit-mean gamma-gamma product by conditioning on the
/// large-scale factor: ∫ f_X(s) P(β, βx/s) ds with X ~ Gamma(α, 1/α).
pub fn gg_cdf_oracle(alpha: f64, beta: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let ln_norm = alpha * alpha.ln() - ln_gamma_stirling(alpha);
    tanh_sinh_inf(
        |s| {
            if s <= 0.0 {
                return 0.0;
            }
            let dens = (ln_norm + (alpha - 1.0) * s.ln() - alpha * s).exp();
            dens * gamma_p_series(beta, beta * x / s)
        },
        0.0,
        1e-13,
    )
}

/// CDF of I_p · X · Y with I_p having density ξ² u^{ξ²−1} on (0, 1]:
/// ∫_0^1 F_gg(x / v^{1/ξ²}) dv after the substitution v = u^{ξ²}.
pub fn ggp_cdf_oracle(alpha: f64, beta: f64, xi_sq: f64, x: f64) -> f64 {
    tanh_sinh(|v| gg_cdf_oracle(alpha, beta, x / v.powf(1.0 / xi_sq)), 0.0, 1.0, 1e-11)
}

/// Bisection for an increasing function: the point where f crosses `target`.
pub fn bisect_increasing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    assert!(f(lo) <= target && f(hi) >= target, "target not bracketed");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Double-double number (hi + lo with |lo| ≤ ulp(hi)/2).
#[derive(Debug, Clone, Copy)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::new(-q1)));
        let q2 = r.hi / o.hi;
        let (hi, lo) = two_sum(q1, q2);
        Dd { hi, lo }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Unregularized ₁F₂(a; b, c; z) summed in double-double arithmetic.
pub fn hyp1f2_dd(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = Dd::new(1.0);
    let mut sum = Dd::new(1.0);
    let z = Dd::new(z);
    for n in 0..5000 {
        let nf = n as f64;
        let num = Dd::new(a).add(Dd::new(nf)).mul(z);
        let den = Dd::new(b)
            .add(Dd::new(nf))
            .mul(Dd::new(c).add(Dd::new(nf)))
            .mul(Dd::new(nf + 1.0));
        term = term.mul(num).div(den);
        sum = sum.add(term);
        if term.hi.abs() < 1e-34 * sum.hi.abs() {
            break;
        }
    }
    sum.value()
}

/// Maclaurin series of erf, for moderate |x|.
pub fn erf_maclaurin(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term.abs() > 1e-18 * sum.abs().max(1e-300) {
        n += 1.0;
        term *= -x * x / n;
        sum += term / (2.0 * n + 1.0);
        assert!(n < 500.0);
    }
    2.0 / PI.sqrt() * sum
}

/// Turbulence shapes for a Rytov variance, written out directly.
pub fn turbulence_oracle(cn2: f64, wavelength: f64, d: f64) -> (f64, f64, f64) {
    let w = 2.0 * PI / wavelength;
    let s2 = 1.23 * cn2 * w.powf(7.0 / 6.0) * d.powf(11.0 / 6.0);
    let alpha = 1.0 / ((0.49 * s2 / (1.0 + 1.11 * s2.powf(1.2)).powf(7.0 / 6.0)).exp() - 1.0);
    let beta = 1.0 / ((0.51 * s2 / (1.0 + 0.69 * s2.powf(1.2)).powf(5.0 / 6.0)).exp() - 1.0);
    (s2, alpha, beta)
}

/// Quantile points of a CDF at probabilities 0.025, 0.075, ..., 0.975.
pub fn quantile_points(cdf: impl Fn(f64) -> f64, hi: f64) -> Vec<f64> {
    (0..20)
        .map(|i| {
            let p = 0.025 + 0.05 * i as f64;
            bisect_increasing(&cdf, p, 0.0, hi)
        })
        .collect()
}

/// Fraction of `samples` at or below `x`.
pub fn empirical_cdf(samples: &[f64], x: f64) -> f64 {
    samples.iter().filter(|&&s| s <= x).count() as f64 / samples.len() as f64
}
