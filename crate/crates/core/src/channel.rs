//! FSO channel parameterization and the irradiance distribution kernels.
//!
//! Irradiance is normalized to unit mean. A receiver with N apertures sees
//! a large-scale gamma variate shared by all apertures times a small-scale
//! gamma variate with aggregated shape `beta_single * N`; Eve additionally
//! sees a pointing factor with density ξ² I^{ξ²−1} on (0, 1].

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::{
    bessel_k, erf, exp_integral, gamma, gamma_p, hyp1f2_reg, ln_gamma, rgamma,
    sin_pi, EvalOptions,
};

/// Stand-in for +∞ shape parameters in the no-turbulence limit.
pub const SHAPE_CAP: f64 = 1e12;

/// Largest Rytov variance accepted before the shape formulas are considered
/// meaningless.
pub const MAX_RYTOV_VARIANCE: f64 = 1e6;

/// Pole-distance below which a shape parameter is nudged.
const POLE_WINDOW: f64 = 1e-6;
const POLE_NUDGE: f64 = 1e-5;

/// Absolute rounding budget for the closed-form series; beyond it the
/// kernels integrate the mixture representation instead.
const SERIES_ABS_TOL: f64 = 1e-11;
const MIXTURE_ABS_TOL: f64 = 1e-13;
const CLAMP_SLACK: f64 = 1e-9;

static CLAMP_WARNINGS: AtomicU64 = AtomicU64::new(0);

/// Number of times a probability left [0, 1] by more than 1e-9 before
/// being clamped.
pub fn probability_clamp_count() -> u64 {
    CLAMP_WARNINGS.load(Ordering::Relaxed)
}

pub(crate) fn clamp_probability(p: f64) -> f64 {
    if p < -CLAMP_SLACK || p > 1.0 + CLAMP_SLACK {
        CLAMP_WARNINGS.fetch_add(1, Ordering::Relaxed);
    }
    p.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub wavelength_m: f64,
    /// Refractive-index structure parameter, m^{-2/3}.
    pub cn2: f64,
    /// Received beam size, same unit as the aperture radius.
    pub beam_waist_wb: f64,
    pub aperture_radius_rho: f64,
    pub distance_bob_m: f64,
    pub distance_eve_m: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            wavelength_m: 1550e-9,
            cn2: 1.7e-14,
            beam_waist_wb: 2.5,
            aperture_radius_rho: 0.1,
            distance_bob_m: 1000.0,
            distance_eve_m: 1000.0,
        }
    }
}

impl GeometryConfig {
    pub fn wave_number(&self) -> f64 {
        2.0 * PI / self.wavelength_m
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("geometry.wavelength_m", self.wavelength_m),
            ("geometry.cn2", self.cn2),
            ("geometry.beam_waist_wb", self.beam_waist_wb),
            ("geometry.aperture_radius_rho", self.aperture_radius_rho),
            ("geometry.distance_bob_m", self.distance_bob_m),
            ("geometry.distance_eve_m", self.distance_eve_m),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(name, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurbulenceParams {
    pub alpha: f64,
    pub beta_single: f64,
    pub rytov_var: f64,
}

impl TurbulenceParams {
    pub fn beta_agg(&self, apertures: u32) -> f64 {
        self.beta_single * apertures as f64
    }

    /// True when either shape hit [`SHAPE_CAP`] (vanishing scintillation).
    pub fn is_capped(&self) -> bool {
        self.alpha >= SHAPE_CAP || self.beta_single >= SHAPE_CAP
    }
}

/// Large- and small-scale gamma-gamma shapes from the Rytov variance
/// σ²_R = 1.23 C²_n w^{7/6} d^{11/6}.
pub fn turbulence_params(geom: &GeometryConfig, distance_m: f64) -> Result<TurbulenceParams> {
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(Error::Argument(format!("distance must be > 0, got {distance_m}")));
    }
    if !(geom.cn2 >= 0.0) || !(geom.wavelength_m > 0.0) {
        return Err(Error::Argument("cn2 must be >= 0 and wavelength > 0".into()));
    }
    let rytov = 1.23 * geom.cn2 * geom.wave_number().powf(7.0 / 6.0) * distance_m.powf(11.0 / 6.0);
    if rytov > MAX_RYTOV_VARIANCE {
        return Err(Error::Argument(format!(
            "Rytov variance {rytov:e} exceeds {MAX_RYTOV_VARIANCE:e}"
        )));
    }
    // σ_R^{12/5} = (σ²_R)^{6/5}
    let s125 = rytov.powf(1.2);
    let shape = |y: f64| {
        let v = 1.0 / y.exp_m1();
        if v.is_finite() {
            v.min(SHAPE_CAP)
        } else {
            SHAPE_CAP
        }
    };
    let alpha = shape(0.49 * rytov / (1.0 + 1.11 * s125).powf(7.0 / 6.0));
    let beta_single = shape(0.51 * rytov / (1.0 + 0.69 * s125).powf(5.0 / 6.0));
    Ok(TurbulenceParams {
        alpha,
        beta_single,
        rytov_var: rytov,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointingParams {
    pub nu: f64,
    /// Collected power fraction at zero displacement, erf²(ν).
    pub a0: f64,
    /// Equivalent beam waist.
    pub omega_e: f64,
    pub sigma_s: f64,
    /// ω_e / (2 σ_s); +∞ when σ_s = 0.
    #[serde(with = "infinite_as_null")]
    pub xi: f64,
}

impl PointingParams {
    pub fn is_pointing_free(&self) -> bool {
        self.xi.is_infinite()
    }

    pub fn xi_sq(&self) -> f64 {
        self.xi * self.xi
    }
}

mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

pub fn pointing_params(geom: &GeometryConfig, sigma_s: f64) -> Result<PointingParams> {
    if !(sigma_s >= 0.0) || !sigma_s.is_finite() {
        return Err(Error::Argument(format!("sigma_s must be >= 0, got {sigma_s}")));
    }
    let wb = geom.beam_waist_wb;
    let nu = (PI / 2.0).sqrt() * geom.aperture_radius_rho / wb;
    let erf_nu = erf(nu);
    let a0 = erf_nu * erf_nu;
    let omega_e = (PI.sqrt() * wb * wb * erf_nu / (2.0 * nu * (-nu * nu).exp())).sqrt();
    let xi = if sigma_s == 0.0 {
        f64::INFINITY
    } else {
        omega_e / (2.0 * sigma_s)
    };
    Ok(PointingParams {
        nu,
        a0,
        omega_e,
        sigma_s,
        xi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NodeConfig {
    pub n_a: u32,
    pub n_b: u32,
    pub n_e: u32,
    /// Turbulence- and pointing-free SNR (linear), 1/N₀.
    pub gamma0: f64,
}

/// γ₀ at which the fixed-rate optimum of the default two-aperture layout
/// sits at r_b = 3.400 bpcu.
pub const DEFAULT_GAMMA0: f64 = 3975.0;

impl Default for NodeConfig {
    fn default() -> Self {
        NodeConfig {
            n_a: 2,
            n_b: 1,
            n_e: 2,
            gamma0: DEFAULT_GAMMA0,
        }
    }
}

const PLANCK: f64 = 6.626_070_15e-34;

impl NodeConfig {
    pub fn n0(&self) -> f64 {
        1.0 / self.gamma0
    }

    /// γ₀ = η E_s A / (h f Δf) from the detector and link constants.
    pub fn gamma0_from_physical(
        quantum_efficiency: f64,
        symbol_energy_j: f64,
        beam_area_m2: f64,
        optical_freq_hz: f64,
        noise_bandwidth_hz: f64,
    ) -> f64 {
        quantum_efficiency * symbol_energy_j * beam_area_m2
            / (PLANCK * optical_freq_hz * noise_bandwidth_hz)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("nodes.n_a", self.n_a), ("nodes.n_b", self.n_b), ("nodes.n_e", self.n_e)] {
            if n == 0 {
                return Err(Error::config(name, "aperture count must be >= 1"));
            }
        }
        if !(self.gamma0 > 0.0) || !self.gamma0.is_finite() {
            return Err(Error::config(
                "nodes.gamma0",
                format!("must be finite and > 0, got {}", self.gamma0),
            ));
        }
        Ok(())
    }
}

/// Gamma surrogate Gamma(k, θ) of a unit-mean gamma-gamma variate, with
/// the mean adjusted to Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaApprox {
    pub k_ap: f64,
    pub theta_ap: f64,
    pub epsilon: f64,
    pub omega_adj: f64,
}

impl GammaApprox {
    pub fn mean(&self) -> f64 {
        self.k_ap * self.theta_ap
    }

    /// CDF of the surrogate without pointing loss.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Argument(format!("threshold must be >= 0, got {x}")));
        }
        Ok(gamma_p(self.k_ap, x / self.theta_ap)?)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let t = x / self.theta_ap;
        ((self.k_ap - 1.0) * t.ln() - t - ln_gamma_or_inf(self.k_ap)).exp() / self.theta_ap
    }
}

fn ln_gamma_or_inf(a: f64) -> f64 {
    ln_gamma(a).unwrap_or(f64::INFINITY)
}

/// Gamma surrogate for a receiver with `n_apertures` combined apertures.
pub fn gamma_approx(
    turb: &TurbulenceParams,
    n_apertures: u32,
    epsilon: f64,
    omega_adj: f64,
) -> Result<GammaApprox> {
    if n_apertures == 0 {
        return Err(Error::Argument("aperture count must be >= 1".into()));
    }
    gamma_approx_shapes(turb.alpha, turb.beta_agg(n_apertures), epsilon, omega_adj)
}

/// `beta_agg` is the aggregated small-scale shape `beta_single * N`.
pub fn gamma_approx_shapes(alpha: f64, beta_agg: f64, epsilon: f64, omega_adj: f64) -> Result<GammaApprox> {
    if !(alpha > 0.0 && beta_agg > 0.0) {
        return Err(Error::Argument("alpha and beta must be > 0".into()));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::Argument(format!("epsilon must be >= 0, got {epsilon}")));
    }
    if !(omega_adj > 0.0) {
        return Err(Error::Argument(format!("omega_adj must be > 0, got {omega_adj}")));
    }
    // (β+1)(α+1)/(βα) − (1+ε), written without the leading cancellation
    let bracket = 1.0 / alpha + 1.0 / beta_agg + 1.0 / (alpha * beta_agg) - epsilon;
    if !(bracket > 0.0) {
        return Err(Error::Argument(format!(
            "gamma approximation breaks down: bracket = {bracket} <= 0"
        )));
    }
    let k_ap = 1.0 / bracket;
    Ok(GammaApprox {
        k_ap,
        theta_ap: omega_adj / k_ap,
        epsilon,
        omega_adj,
    })
}

/// Index vectors of the combined turbulence-and-pointing CDF expansion.
/// `a`, `d`, `e` are indexed `[u][v]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GgpCdfTerms {
    pub a: [[f64; 2]; 2],
    pub b: [f64; 2],
    pub c: [f64; 2],
    pub d: [[f64; 2]; 2],
    pub e: [[f64; 2]; 2],
}

impl GgpCdfTerms {
    pub fn new(alpha: f64, beta: f64, xi_sq: f64) -> Self {
        let b = [alpha, beta];
        let c = [-1.0, 1.0];
        let mut a = [[0.0; 2]; 2];
        let mut d = [[0.0; 2]; 2];
        let mut e = [[0.0; 2]; 2];
        for u in 0..2 {
            let shifted = (beta - alpha) * c[u] + 1.0;
            a[u] = [b[u], b[u] - xi_sq];
            d[u] = [b[u] + 1.0, shifted];
            e[u] = [shifted, b[u] - xi_sq + 1.0];
        }
        GgpCdfTerms { a, b, c, d, e }
    }
}

fn near_integer(v: f64) -> bool {
    (v - v.round()).abs() < POLE_WINDOW
}

fn nudge_beta(alpha: f64, beta: f64) -> Result<f64> {
    let beta = if near_integer(alpha - beta) {
        beta + POLE_NUDGE
    } else {
        beta
    };
    if near_integer(alpha - beta) {
        return Err(Error::PoleProximity(format!("alpha = {alpha}, beta = {beta}")));
    }
    Ok(beta)
}

struct SeriesValue {
    value: f64,
    rounding: f64,
    well_conditioned: bool,
}

/// Closed-form series; `xi_sq = None` drops the pointing factor.
fn cdf_series(alpha: f64, beta: f64, xi_sq: Option<f64>, x: f64) -> Result<SeriesValue> {
    let z = alpha * beta * x;
    let ln_z = z.ln();
    let opts = EvalOptions::default();
    let csc_ab = 1.0 / sin_pi(alpha - beta);
    let norm = PI * rgamma(alpha) * rgamma(beta);
    let terms = GgpCdfTerms::new(alpha, beta, xi_sq.unwrap_or(0.0));
    let mut acc = 0.0;
    let mut rounding = 0.0;
    let mut well_conditioned = true;
    let v_range = if xi_sq.is_some() { 0..2 } else { 0..1 };
    for u in 0..2 {
        for v in v_range.clone() {
            let s = hyp1f2_reg(terms.a[u][v], terms.d[u][v], terms.e[u][v], z, opts)?;
            let coef = -csc_ab * terms.c[u] * terms.c[v] * (terms.b[u] * ln_z).exp() * gamma(terms.a[u][v]);
            let t = coef * s.value;
            acc += t;
            rounding += coef.abs() * s.rounding_bound() + t.abs() * f64::EPSILON;
            well_conditioned &= s.well_conditioned;
        }
    }
    if let Some(xi2) = xi_sq {
        let tail = PI * (xi2 * ln_z).exp() / (sin_pi(alpha - xi2) * sin_pi(beta - xi2))
            * rgamma(xi2 - alpha + 1.0)
            * rgamma(xi2 - beta + 1.0);
        acc += tail;
        rounding += tail.abs() * 4.0 * f64::EPSILON;
    }
    Ok(SeriesValue {
        value: norm * acc,
        rounding: norm * rounding,
        well_conditioned,
    })
}

/// P(Z·Y ≤ s) for Y ~ Gamma(β, 1/β) and Z the pointing factor.
fn small_scale_cdf(beta: f64, xi_sq: Option<f64>, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let y = beta * s;
    let base = gamma_p(beta, y).unwrap_or(1.0);
    match xi_sq {
        None => base,
        Some(xi2) => {
            // y^{ξ²} Γ(β − ξ², y) = y^β E_{ξ²−β+1}(y)
            let e = exp_integral(xi2 - beta + 1.0, y).unwrap_or(0.0);
            base + (beta * y.ln() + e.ln() - ln_gamma_or_inf(beta)).exp()
        }
    }
}

/// Integrates the small-scale CDF against the large-scale density.
fn mixture_cdf(alpha: f64, beta: f64, xi_sq: Option<f64>, x: f64) -> Result<f64> {
    let ln_norm = alpha * alpha.ln() - ln_gamma(alpha)?;
    let density = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        (ln_norm + (alpha - 1.0) * t.ln() - alpha * t).exp()
    };
    let t_max = 1.0 + 12.0 / alpha.sqrt() + 40.0 / alpha;
    let r = quad::integrate(
        |t| density(t) * small_scale_cdf(beta, xi_sq, x / t),
        0.0,
        t_max,
        MIXTURE_ABS_TOL,
        2000,
    );
    if !r.converged && r.error > 1e-9 {
        return Err(Error::Convergence {
            what: "CDF mixture quadrature",
            detail: format!("error estimate {:e}", r.error),
        });
    }
    Ok(r.value)
}

fn series_or_mixture(alpha: f64, beta: f64, xi_sq: Option<f64>, x: f64) -> Result<f64> {
    const SERIES_MAX_ARG: f64 = 100.0;
    const SERIES_MAX_XI_SQ: f64 = 25.0;
    if alpha * beta * x > SERIES_MAX_ARG || xi_sq.is_some_and(|v| v > SERIES_MAX_XI_SQ) {
        return Ok(clamp_probability(mixture_cdf(alpha, beta, xi_sq, x)?));
    }
    let s = match cdf_series(alpha, beta, xi_sq, x) {
        Ok(s) => s,
        Err(Error::SpecFun(_)) => return Ok(clamp_probability(mixture_cdf(alpha, beta, xi_sq, x)?)),
        Err(e) => return Err(e),
    };
    let trustworthy = s.well_conditioned
        && s.value.is_finite()
        && s.rounding <= SERIES_ABS_TOL
        && s.value >= -CLAMP_SLACK
        && s.value <= 1.0 + CLAMP_SLACK;
    let v = if trustworthy {
        s.value
    } else {
        mixture_cdf(alpha, beta, xi_sq, x)?
    };
    Ok(clamp_probability(v))
}

fn check_cdf_args(alpha: f64, beta_agg: f64, x: f64) -> Result<()> {
    if !(alpha > 0.0 && beta_agg > 0.0) || !alpha.is_finite() || !beta_agg.is_finite() {
        return Err(Error::Argument(format!(
            "shapes must be finite and > 0 (alpha = {alpha}, beta = {beta_agg})"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::Argument(format!("threshold must be >= 0, got {x}")));
    }
    Ok(())
}

/// CDF of the unit-mean gamma-gamma variate X·Y with
/// X ~ Gamma(α, 1/α), Y ~ Gamma(β, 1/β).
pub fn gg_cdf(alpha: f64, beta_agg: f64, x: f64) -> Result<f64> {
    check_cdf_args(alpha, beta_agg, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let beta = nudge_beta(alpha, beta_agg)?;
    series_or_mixture(alpha, beta, None, x)
}

/// CDF of I_p·X·Y where I_p has density ξ² I^{ξ²−1} on (0, 1].
/// `xi = +∞` is the pointing-error-free case.
pub fn ggp_cdf(alpha: f64, beta_agg: f64, xi: f64, x: f64) -> Result<f64> {
    check_cdf_args(alpha, beta_agg, x)?;
    if !(xi > 0.0) {
        return Err(Error::Argument(format!("xi must be > 0, got {xi}")));
    }
    if xi.is_infinite() {
        return gg_cdf(alpha, beta_agg, x);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let beta = nudge_beta(alpha, beta_agg)?;
    let mut xi2 = xi * xi;
    if near_integer(alpha - xi2) || near_integer(beta - xi2) {
        xi2 += POLE_NUDGE;
    }
    if near_integer(alpha - xi2) || near_integer(beta - xi2) {
        return Err(Error::PoleProximity(format!(
            "alpha = {alpha}, beta = {beta}, xi^2 = {xi2}"
        )));
    }
    series_or_mixture(alpha, beta, Some(xi2), x)
}

/// Gamma-surrogate version of [`ggp_cdf`]:
/// [t^k E_ϑ(t) − Γ(k, t) + Γ(k)] / Γ(k) with t = x/θ and ϑ = ξ² − k + 1.
pub fn ggp_cdf_approx(ga: &GammaApprox, xi: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Argument(format!("threshold must be >= 0, got {x}")));
    }
    if !(xi > 0.0) {
        return Err(Error::Argument(format!("xi must be > 0, got {xi}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let k = ga.k_ap;
    let t = x / ga.theta_ap;
    // Γ(k) − Γ(k, t) taken as Γ(k)·P(k, t)
    let lower = gamma_p(k, t)?;
    if xi.is_infinite() {
        return Ok(lower);
    }
    let order = xi * xi - k + 1.0;
    let e = exp_integral(order, t)?;
    let mixed = (k * t.ln() + e.ln() - ln_gamma(k)?).exp();
    Ok(clamp_probability(lower + mixed))
}

/// Density of the gamma surrogate with pointing loss, d/dx of
/// [`ggp_cdf_approx`]: (ξ²/θ) t^{k−1} E_ϑ(t) / Γ(k).
pub fn ggp_pdf_approx(ga: &GammaApprox, xi: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Ok(0.0);
    }
    if xi.is_infinite() {
        return Ok(ga.pdf(x));
    }
    let k = ga.k_ap;
    let xi2 = xi * xi;
    let t = x / ga.theta_ap;
    let e = exp_integral(xi2 - k + 1.0, t)?;
    Ok(xi2 / ga.theta_ap * ((k - 1.0) * t.ln() + e.ln() - ln_gamma(k)?).exp())
}

/// Gamma-gamma density of a unit-mean irradiance.
pub fn gg_pdf(alpha: f64, beta_agg: f64, i: f64) -> Result<f64> {
    if !(i > 0.0) {
        return Err(Error::Argument(format!("irradiance must be > 0, got {i}")));
    }
    check_cdf_args(alpha, beta_agg, 0.0)?;
    let ab = alpha * beta_agg;
    let k = bessel_k(alpha - beta_agg, 2.0 * (ab * i).sqrt())?;
    let half = 0.5 * (alpha + beta_agg);
    let ln = std::f64::consts::LN_2 + half * ab.ln() - ln_gamma(alpha)? - ln_gamma(beta_agg)?
        + (half - 1.0) * i.ln()
        + k.ln();
    Ok(ln.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Receiver {
    Bob,
    Eve,
}

/// Irradiance threshold a receiver must exceed to support a rate.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SnrThreshold {
    pub value: f64,
}

/// (2^rate − 1) / (γ₀ N_k A₀).
pub fn snr_threshold(
    node: &NodeConfig,
    pointing: &PointingParams,
    rate: f64,
    which: Receiver,
) -> Result<SnrThreshold> {
    if !(rate >= 0.0) {
        return Err(Error::Argument(format!("rate must be >= 0, got {rate}")));
    }
    let n = match which {
        Receiver::Bob => node.n_b,
        Receiver::Eve => node.n_e,
    } as f64;
    Ok(SnrThreshold {
        value: (rate * std::f64::consts::LN_2).exp_m1() / (node.gamma0 * n * pointing.a0),
    })
}
