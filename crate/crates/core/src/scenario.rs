//! Experiment description and its resolved channel parameters.

use serde::{Deserialize, Serialize};

use crate::channel::{
    gamma_approx, pointing_params, snr_threshold, turbulence_params, GammaApprox, GeometryConfig,
    NodeConfig, PointingParams, Receiver, SnrThreshold, TurbulenceParams,
};
use crate::error::{Error, Result};

/// Full experiment description. Every field defaults to the baseline
/// two-aperture link at 1 km, so `{}` is a valid config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub geometry: GeometryConfig,
    pub nodes: NodeConfig,
    /// Standard deviation of Eve's beam displacement; 0 disables pointing loss.
    pub sigma_s: f64,
    /// Maximum allowed secrecy outage probability.
    pub s_th: f64,
    pub epsilon: f64,
    pub omega_adj: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            geometry: GeometryConfig::default(),
            nodes: NodeConfig::default(),
            sigma_s: 2.0,
            s_th: 1.0,
            epsilon: 0.0,
            omega_adj: 0.97,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.nodes.validate()?;
        if !(self.sigma_s >= 0.0) || !self.sigma_s.is_finite() {
            return Err(Error::config("sigma_s", format!("must be finite and >= 0, got {}", self.sigma_s)));
        }
        if !(self.s_th > 0.0 && self.s_th <= 1.0) {
            return Err(Error::config("s_th", format!("must lie in (0, 1], got {}", self.s_th)));
        }
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::config("epsilon", format!("must be finite and >= 0, got {}", self.epsilon)));
        }
        if !(self.omega_adj > 0.0) || !self.omega_adj.is_finite() {
            return Err(Error::config(
                "omega_adj",
                format!("must be finite and > 0, got {}", self.omega_adj),
            ));
        }
        Ok(())
    }

    pub fn with_apertures(mut self, n_a: u32, n_b: u32, n_e: u32) -> Self {
        self.nodes.n_a = n_a;
        self.nodes.n_b = n_b;
        self.nodes.n_e = n_e;
        self
    }

    pub fn with_sigma_s(mut self, sigma_s: f64) -> Self {
        self.sigma_s = sigma_s;
        self
    }

    pub fn with_gamma0(mut self, gamma0: f64) -> Self {
        self.nodes.gamma0 = gamma0;
        self
    }

    pub fn with_s_th(mut self, s_th: f64) -> Self {
        self.s_th = s_th;
        self
    }
}

/// A validated [`ScenarioConfig`] with every derived parameter resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub turb_bob: TurbulenceParams,
    pub turb_eve: TurbulenceParams,
    pub pointing: PointingParams,
    pub approx_bob: GammaApprox,
    pub approx_eve: GammaApprox,
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let g = &config.geometry;
        let n = &config.nodes;
        let turb_bob = turbulence_params(g, g.distance_bob_m)?;
        let turb_eve = turbulence_params(g, g.distance_eve_m)?;
        let pointing = pointing_params(g, config.sigma_s)?;
        let approx_bob = gamma_approx(&turb_bob, n.n_b, config.epsilon, config.omega_adj)?;
        let approx_eve = gamma_approx(&turb_eve, n.n_e, config.epsilon, config.omega_adj)?;
        Ok(Scenario {
            config,
            turb_bob,
            turb_eve,
            pointing,
            approx_bob,
            approx_eve,
        })
    }

    pub fn baseline() -> Self {
        Scenario::new(ScenarioConfig::default()).expect("default config is valid")
    }

    pub fn nodes(&self) -> &NodeConfig {
        &self.config.nodes
    }

    pub fn gamma0(&self) -> f64 {
        self.config.nodes.gamma0
    }

    pub fn beta_agg_bob(&self) -> f64 {
        self.turb_bob.beta_agg(self.config.nodes.n_b)
    }

    pub fn beta_agg_eve(&self) -> f64 {
        self.turb_eve.beta_agg(self.config.nodes.n_e)
    }

    pub fn xi(&self) -> f64 {
        self.pointing.xi
    }

    pub fn threshold(&self, rate: f64, which: Receiver) -> Result<SnrThreshold> {
        snr_threshold(&self.config.nodes, &self.pointing, rate, which)
    }

    /// Linear SNR per unit of normalized irradiance at a receiver:
    /// γ₀ N_k A₀.
    pub fn snr_scale(&self, which: Receiver) -> f64 {
        let n = match which {
            Receiver::Bob => self.config.nodes.n_b,
            Receiver::Eve => self.config.nodes.n_e,
        };
        self.gamma0() * n as f64 * self.pointing.a0
    }

    /// Channel capacity log₂(1 + γ₀ N_k A₀ I) for an N_k-normalized
    /// irradiance `i`.
    pub fn capacity(&self, i: f64, which: Receiver) -> f64 {
        (self.snr_scale(which) * i).ln_1p() / std::f64::consts::LN_2
    }

    /// Rate bound used by the optimizers and oracles: capacity at 30 times
    /// the mean irradiance of the stronger receiver, plus one bpcu.
    pub fn rate_ceiling(&self) -> f64 {
        let s = self.snr_scale(Receiver::Bob).max(self.snr_scale(Receiver::Eve));
        (30.0 * s).ln_1p() / std::f64::consts::LN_2 + 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_json_gives_baseline() {
        let c: ScenarioConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, ScenarioConfig::default());
        let sc = Scenario::new(c).unwrap();
        assert_eq!(sc.beta_agg_eve(), 2.0 * sc.turb_eve.beta_single);
    }

    #[test]
    fn unknown_field_is_rejected() {
        let r: std::result::Result<ScenarioConfig, _> = serde_json::from_str(r#"{"sigma": 1}"#);
        assert!(r.unwrap_err().to_string().contains("sigma"));
    }

    #[test]
    fn field_level_validation() {
        let c = ScenarioConfig::default().with_s_th(0.0);
        match Scenario::new(c) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "s_th"),
            other => panic!("{other:?}"),
        }
        let c = ScenarioConfig::default().with_apertures(0, 1, 1);
        match Scenario::new(c) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "nodes.n_a"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn capacity_inverts_threshold() {
        let sc = Scenario::baseline();
        let x = sc.threshold(2.5, Receiver::Eve).unwrap().value;
        assert!((sc.capacity(x, Receiver::Eve) - 2.5).abs() < 1e-12);
    }
}
