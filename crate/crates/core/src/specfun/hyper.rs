use super::gamma::{gamma, rgamma};
use super::{CompensatedSum, EvalOptions, Result, SpecFunError};

/// Result of a ₁F₂ series evaluation.
///
/// `abs_sum` is Σ|term|; `abs_sum * f64::EPSILON` bounds the rounding
/// error of `value`, which callers use to detect cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypSeries {
    pub value: f64,
    pub abs_sum: f64,
    pub terms: usize,
    /// False when |z| > 100, where the forward series is no longer a
    /// reliable route and callers should prefer a quadrature fallback.
    pub well_conditioned: bool,
}

impl HypSeries {
    pub fn rounding_bound(&self) -> f64 {
        self.abs_sum * f64::EPSILON * (self.terms as f64).sqrt().max(1.0)
    }
}

fn pole_index(p: f64) -> usize {
    // first n with p + n not a non-positive integer
    if p <= 0.0 && p == p.floor() {
        (-p) as usize + 1
    } else {
        0
    }
}

/// Regularized hypergeometric ₁F̃₂(a; b, c; z) =
/// Σ (a)_n zⁿ / (n! Γ(b+n) Γ(c+n)).
///
/// Non-positive integer `b` or `c` are handled with 1/Γ = 0 at the poles.
pub fn hyp1f2_reg(a: f64, b: f64, c: f64, z: f64, opts: EvalOptions) -> Result<HypSeries> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(SpecFunError::domain("hyp1f2_reg", "non-finite argument"));
    }
    let well_conditioned = z.abs() <= 100.0;
    let n0 = pole_index(b).max(pole_index(c));

    // leading non-vanishing term
    let mut poch = 1.0;
    let mut zpow_fact = 1.0;
    for k in 0..n0 {
        poch *= a + k as f64;
        zpow_fact *= z / (k as f64 + 1.0);
    }
    let mut term = poch * zpow_fact * rgamma(b + n0 as f64) * rgamma(c + n0 as f64);

    let mut sum = CompensatedSum::default();
    let mut abs_sum = 0.0;
    let mut n = n0;
    let mut terms = 0;
    loop {
        sum.add(term);
        abs_sum += term.abs();
        terms += 1;
        let nf = n as f64;
        let ratio = (a + nf) * z / ((nf + 1.0) * (b + nf) * (c + nf));
        let next = term * ratio;
        // terminating series (a a non-positive integer) or zero argument
        if next == 0.0 {
            break;
        }
        // past the peak, and the tail is below both the requested tolerance
        // and the rounding noise already in the sum
        if ratio.abs() < 1.0
            && next.abs() <= opts.rel_tol * sum.value().abs()
            && next.abs() <= f64::EPSILON * abs_sum
        {
            sum.add(next);
            abs_sum += next.abs();
            terms += 1;
            break;
        }
        if terms >= opts.max_terms {
            return Err(SpecFunError::NonConvergence {
                func: "hyp1f2_reg",
                terms,
            });
        }
        term = next;
        n += 1;
    }
    Ok(HypSeries {
        value: sum.value(),
        abs_sum,
        terms,
        well_conditioned,
    })
}

/// Unregularized ₁F₂(a; b, c; z) = ₁F̃₂ · Γ(b) Γ(c); b and c must not be
/// poles of Γ.
pub fn hyp1f2(a: f64, b: f64, c: f64, z: f64, opts: EvalOptions) -> Result<HypSeries> {
    if pole_index(b) > 0 || pole_index(c) > 0 {
        return Err(SpecFunError::domain(
            "hyp1f2",
            format!("b = {b} or c = {c} is a pole of the gamma function"),
        ));
    }
    let scale = gamma(b) * gamma(c);
    let s = hyp1f2_reg(a, b, c, z, opts)?;
    Ok(HypSeries {
        value: s.value * scale,
        abs_sum: s.abs_sum * scale.abs(),
        ..s
    })
}
