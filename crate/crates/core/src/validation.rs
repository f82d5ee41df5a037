//! Closed-form versus Monte-Carlo comparison over the standard scenario
//! matrix: N_A = N_B ∈ {1, 2, 4}, N_E = 2, σ_s ∈ {1, 2, 3}.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::montecarlo::{
    estimate_est, estimate_reliability_outage, estimate_sop, Estimate, SimConfig,
};
use crate::optimize::{adaptive_average, bisect_sign, fixed_optimal, SolverOptions};
use crate::scenario::{Scenario, ScenarioConfig};
use crate::secrecy::{reliability_outage, sop, Scheme};

pub const APERTURES: [u32; 3] = [1, 2, 4];
pub const EVE_APERTURES: u32 = 2;
pub const SIGMA_S: [f64; 3] = [1.0, 2.0, 3.0];
/// Closed-form probabilities at which the SOP and outage are compared.
pub const PROBE_LEVELS: [f64; 3] = [0.1, 0.5, 0.9];
/// Absolute slack on top of the 3σ interval.
pub const SLACK: f64 = 1e-4;
/// Intervals wider than this are too weak to decide a check.
pub const MAX_DECISIVE_CI: f64 = 0.01;
/// Minimum expected count in the rarer outcome of a probability check.
pub const MIN_EXPECTED_COUNT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub quantity: String,
    pub n: u32,
    pub sigma_s: f64,
    /// Rate at which the quantity is evaluated, if any.
    pub rate: Option<f64>,
    pub closed_form: f64,
    pub estimate: Option<Estimate>,
    /// Tolerance minus the observed gap; negative on failure.
    pub margin: f64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub trials: u64,
    pub stream_count: u32,
    pub s_th: f64,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

fn compare(quantity: &str, sc: &Scenario, rate: Option<f64>, cf: f64, est: Estimate, probability: bool) -> Check {
    let gap = (est.mean - cf).abs();
    let margin = est.ci_halfwidth + SLACK - gap;
    let p = est.mean;
    let weak = est.ci_halfwidth > MAX_DECISIVE_CI
        || (probability && (est.trials as f64) * p.min(1.0 - p) < MIN_EXPECTED_COUNT);
    let outcome = if weak {
        Outcome::Inconclusive
    } else if margin >= 0.0 {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Check {
        quantity: quantity.into(),
        n: sc.nodes().n_a,
        sigma_s: sc.config.sigma_s,
        rate,
        closed_form: cf,
        estimate: Some(est),
        margin,
        outcome,
    }
}

/// Rate at which a monotone closed-form probability reaches `level`.
fn rate_at(f: impl Fn(f64) -> Result<f64>, level: f64, increasing: bool, hi: f64) -> Result<f64> {
    let sign = if increasing { -1.0 } else { 1.0 };
    let (r, _) = bisect_sign(|r| Ok(sign * (f(r)? - level)), 0.0, hi, 1e-10)?;
    Ok(r)
}

/// Runs the full matrix. `base` supplies geometry, γ₀, s_th and the
/// surrogate adjustments; apertures and σ_s are overridden per cell.
pub fn validate(base: &ScenarioConfig, sim: &SimConfig) -> Result<ValidationReport> {
    sim.validate()?;
    base.validate()?;
    let opts = SolverOptions::default();
    let s_th = base.s_th;
    let mut checks = Vec::new();
    for &n in &APERTURES {
        for &sigma_s in &SIGMA_S {
            let cfg = (*base).with_apertures(n, n, EVE_APERTURES).with_sigma_s(sigma_s);
            let sc = Scenario::new(cfg)?;
            let hi = sc.rate_ceiling();
            for &level in &PROBE_LEVELS {
                let r = rate_at(|r| sop(&sc, r), level, false, hi)?;
                let cf = sop(&sc, r)?;
                checks.push(compare("sop", &sc, Some(r), cf, estimate_sop(&sc, r, sim)?, true));
            }
            for &level in &PROBE_LEVELS {
                let r = rate_at(|r| reliability_outage(&sc, r), level, true, hi)?;
                let cf = reliability_outage(&sc, r)?;
                let est = estimate_reliability_outage(&sc, r, sim)?;
                checks.push(compare("reliability_outage", &sc, Some(r), cf, est, true));
            }
            // EST checks compare ungated values so that a constraint sitting
            // exactly on the surrogate threshold cannot flip one side only.
            let fixed = fixed_optimal(&sc, s_th, &opts)?;
            let est = estimate_est(&sc, fixed.rates, Scheme::Fixed, 1.0, sim)?;
            checks.push(compare("est_fixed", &sc, None, fixed.est_exact, est, false));
            let avg = adaptive_average(&sc, s_th, &opts)?;
            let est = estimate_est(&sc, fixed.rates, Scheme::Adaptive, s_th, sim)?;
            checks.push(compare("est_adaptive", &sc, None, avg.est_exact, est, false));
            let margin = avg.est - fixed.est;
            checks.push(Check {
                quantity: "adaptive_dominance".into(),
                n,
                sigma_s,
                rate: None,
                closed_form: margin,
                estimate: None,
                margin,
                outcome: if margin >= 0.0 { Outcome::Pass } else { Outcome::Fail },
            });
        }
    }
    let count = |o: Outcome| checks.iter().filter(|c| c.outcome == o).count();
    Ok(ValidationReport {
        seed: sim.seed,
        trials: sim.trials,
        stream_count: sim.stream_count,
        s_th,
        passed: count(Outcome::Pass),
        failed: count(Outcome::Fail),
        inconclusive: count(Outcome::Inconclusive),
        checks,
    })
}
