//! Secrecy outage, reliability outage and effective secrecy throughput.

use serde::{Deserialize, Serialize};

use crate::channel::{gg_cdf, ggp_cdf, ggp_cdf_approx, Receiver};
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::specfun::gamma_p;

/// Wiretap-code rates in bpcu: codeword rate `r_b`, redundancy rate `r_e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r_b: f64,
    pub r_e: f64,
}

impl RatePair {
    pub fn new(r_b: f64, r_e: f64) -> Result<Self> {
        if !(r_e >= 0.0) || !(r_b >= r_e) || !r_b.is_finite() {
            return Err(Error::Argument(format!(
                "rates must satisfy 0 <= r_e <= r_b (r_b = {r_b}, r_e = {r_e})"
            )));
        }
        Ok(RatePair { r_b, r_e })
    }

    pub fn secrecy_rate(&self) -> f64 {
        self.r_b - self.r_e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecyConstraint {
    pub s_th: f64,
}

impl SecrecyConstraint {
    pub fn new(s_th: f64) -> Result<Self> {
        if !(s_th > 0.0 && s_th <= 1.0) {
            return Err(Error::Argument(format!("s_th must lie in (0, 1], got {s_th}")));
        }
        Ok(SecrecyConstraint { s_th })
    }

    pub fn unconstrained() -> Self {
        SecrecyConstraint { s_th: 1.0 }
    }

    pub fn admits(&self, sop: f64) -> bool {
        sop <= self.s_th
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstReport {
    pub est: f64,
    /// 1 − reliability outage.
    pub reliability_factor: f64,
    /// 1 − SOP.
    pub secrecy_factor: f64,
    pub sop: f64,
    pub constraint_met: bool,
}

/// Rate-adaptation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Alice knows Bob's instantaneous capacity and sets r_b to it.
    Adaptive,
    /// Alice only knows channel statistics; both rates are fixed.
    Fixed,
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "adaptive" => Ok(Scheme::Adaptive),
            "fixed" => Ok(Scheme::Fixed),
            other => Err(format!("unknown scheme '{other}', expected adaptive or fixed")),
        }
    }
}

/// Which CDF drives Eve's SOP and Bob's outage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CdfModel {
    Exact,
    GammaApprox,
}

/// Probability that Eve's capacity exceeds `r_e`.
pub fn sop(sc: &Scenario, r_e: f64) -> Result<f64> {
    sop_with(sc, r_e, CdfModel::Exact)
}

/// [`sop`] through the gamma surrogate of Eve's irradiance.
pub fn sop_approx(sc: &Scenario, r_e: f64) -> Result<f64> {
    sop_with(sc, r_e, CdfModel::GammaApprox)
}

pub fn sop_with(sc: &Scenario, r_e: f64, model: CdfModel) -> Result<f64> {
    let x = sc.threshold(r_e, Receiver::Eve)?.value;
    let f = match model {
        CdfModel::Exact => ggp_cdf(sc.turb_eve.alpha, sc.beta_agg_eve(), sc.xi(), x)?,
        CdfModel::GammaApprox => ggp_cdf_approx(&sc.approx_eve, sc.xi(), x)?,
    };
    Ok(1.0 - f)
}

/// Probability that the TLS-selected link cannot support `r_b`.
pub fn reliability_outage(sc: &Scenario, r_b: f64) -> Result<f64> {
    reliability_outage_with(sc, r_b, CdfModel::Exact)
}

pub fn reliability_outage_approx(sc: &Scenario, r_b: f64) -> Result<f64> {
    reliability_outage_with(sc, r_b, CdfModel::GammaApprox)
}

pub fn reliability_outage_with(sc: &Scenario, r_b: f64, model: CdfModel) -> Result<f64> {
    let x = sc.threshold(r_b, Receiver::Bob)?.value;
    let f = match model {
        CdfModel::Exact => gg_cdf(sc.turb_bob.alpha, sc.beta_agg_bob(), x)?,
        CdfModel::GammaApprox => gamma_p(sc.approx_bob.k_ap, x / sc.approx_bob.theta_ap)?,
    };
    Ok(f.powi(sc.nodes().n_a as i32))
}

/// EST of the adaptive scheme, where Alice sets r_b to the instantaneous
/// capacity `c_b` and only secrecy can fail.
pub fn est_adaptive(sc: &Scenario, c_b: f64, r_e: f64, constraint: SecrecyConstraint) -> Result<EstReport> {
    est_adaptive_with(sc, c_b, r_e, constraint, CdfModel::Exact)
}

pub fn est_adaptive_with(
    sc: &Scenario,
    c_b: f64,
    r_e: f64,
    constraint: SecrecyConstraint,
    model: CdfModel,
) -> Result<EstReport> {
    let rates = RatePair::new(c_b, r_e)?;
    let s = sop_with(sc, r_e, model)?;
    Ok(gate(rates.secrecy_rate(), 1.0, s, constraint))
}

/// EST of the fixed-rate scheme.
pub fn est_fixed(sc: &Scenario, rates: RatePair, constraint: SecrecyConstraint) -> Result<EstReport> {
    est_fixed_with(sc, rates, constraint, CdfModel::Exact)
}

pub fn est_fixed_with(
    sc: &Scenario,
    rates: RatePair,
    constraint: SecrecyConstraint,
    model: CdfModel,
) -> Result<EstReport> {
    let rates = RatePair::new(rates.r_b, rates.r_e)?;
    let s = sop_with(sc, rates.r_e, model)?;
    let t = reliability_outage_with(sc, rates.r_b, model)?;
    Ok(gate(rates.secrecy_rate(), 1.0 - t, s, constraint))
}

fn gate(secrecy_rate: f64, reliability_factor: f64, sop: f64, constraint: SecrecyConstraint) -> EstReport {
    let constraint_met = constraint.admits(sop);
    let secrecy_factor = 1.0 - sop;
    let est = if constraint_met {
        (secrecy_rate * reliability_factor * secrecy_factor).max(0.0)
    } else {
        0.0
    };
    EstReport {
        est,
        reliability_factor,
        secrecy_factor,
        sop,
        constraint_met,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ScenarioConfig;

    #[test]
    fn boundary_values() {
        let sc = Scenario::baseline();
        assert_eq!(sop(&sc, 0.0).unwrap(), 1.0);
        assert_eq!(sop_approx(&sc, 0.0).unwrap(), 1.0);
        assert!(sop(&sc, 20.0).unwrap() <= 1e-6);
        assert_eq!(reliability_outage(&sc, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn tls_exponent_law() {
        let one = Scenario::new(ScenarioConfig::default().with_apertures(1, 1, 2)).unwrap();
        let two = Scenario::new(ScenarioConfig::default().with_apertures(2, 1, 2)).unwrap();
        let a = reliability_outage(&one, 3.0).unwrap();
        let b = reliability_outage(&two, 3.0).unwrap();
        assert!((b - a * a).abs() < 1e-15);
    }

    #[test]
    fn diagonal_is_zero() {
        let sc = Scenario::baseline();
        let r = est_fixed(&sc, RatePair::new(3.0, 3.0).unwrap(), SecrecyConstraint::unconstrained()).unwrap();
        assert_eq!(r.est, 0.0);
        let r = est_adaptive(&sc, 4.0, 4.0, SecrecyConstraint::unconstrained()).unwrap();
        assert_eq!(r.est, 0.0);
        assert_eq!(r.reliability_factor, 1.0);
    }

    #[test]
    fn gating_zeroes_violations() {
        let sc = Scenario::baseline();
        let c = SecrecyConstraint::new(0.2).unwrap();
        let r = est_adaptive(&sc, 4.0, 0.5, c).unwrap();
        assert!(r.sop > 0.2);
        assert_eq!(r.est, 0.0);
        assert!(!r.constraint_met);
    }

    #[test]
    fn rejects_inverted_rates() {
        assert!(RatePair::new(1.0, 2.0).is_err());
        let sc = Scenario::baseline();
        assert!(est_adaptive(&sc, 1.0, 2.0, SecrecyConstraint::unconstrained()).is_err());
        assert!(SecrecyConstraint::new(0.0).is_err());
    }
}
