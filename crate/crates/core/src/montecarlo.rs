//! Seeded simulation of the full link: transmit laser selection and MRC at
//! Bob, correlated large-scale fading and pointing loss at Eve.
//!
//! Trial `t` draws from ChaCha8 stream `t mod stream_count`, every stream
//! is consumed in trial order, and per-stream partial sums are reduced in
//! stream order. Serial and parallel runs therefore agree bit for bit.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::Receiver;
use crate::error::{Error, Result};
use crate::optimize::adaptive::adaptive_rate_for_capacity;
use crate::optimize::{re_threshold, SolverOptions};
use crate::scenario::Scenario;
use crate::secrecy::{sop_approx, RatePair, Scheme, SecrecyConstraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub stream_count: u32,
    /// Evaluate streams on the rayon pool. Does not change results.
    pub parallel: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            trials: 1_000_000,
            seed: 0,
            stream_count: 64,
            parallel: true,
        }
    }
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        SimConfig {
            trials,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("sim.trials", "must be >= 1"));
        }
        if self.stream_count == 0 {
            return Err(Error::config("sim.stream_count", "must be >= 1"));
        }
        Ok(())
    }

    /// Generator for stream `s`.
    pub fn stream(&self, s: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(s as u64);
        rng
    }

    fn trials_in_stream(&self, s: u32) -> u64 {
        let n = self.stream_count as u64;
        self.trials / n + u64::from((s as u64) < self.trials % n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    /// 3σ half-width of the normal-approximation interval.
    pub ci_halfwidth: f64,
    pub trials: u64,
}

impl Estimate {
    fn probability(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        Estimate {
            mean: p,
            ci_halfwidth: 3.0 * (p * (1.0 - p) / trials as f64).sqrt(),
            trials,
        }
    }

    /// Whether `value` lies within the interval widened by `slack`.
    pub fn covers(&self, value: f64, slack: f64) -> bool {
        (self.mean - value).abs() <= self.ci_halfwidth + slack
    }
}

/// Neumaier-compensated running sum of a value and its square.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    sum: f64,
    comp: f64,
    sq: f64,
    sq_comp: f64,
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl Moments {
    fn push(&mut self, x: f64) {
        neumaier(&mut self.sum, &mut self.comp, x);
        neumaier(&mut self.sq, &mut self.sq_comp, x * x);
    }

    fn merge(&mut self, o: &Moments) {
        self.push_raw(o.sum + o.comp, o.sq + o.sq_comp);
    }

    fn push_raw(&mut self, s: f64, q: f64) {
        neumaier(&mut self.sum, &mut self.comp, s);
        neumaier(&mut self.sq, &mut self.sq_comp, q);
    }

    fn estimate(&self, n: u64) -> Estimate {
        let nf = n as f64;
        let mean = (self.sum + self.comp) / nf;
        let var = ((self.sq + self.sq_comp) / nf - mean * mean).max(0.0);
        Estimate {
            mean,
            ci_halfwidth: 3.0 * (var / nf).sqrt(),
            trials: n,
        }
    }
}

/// Runs `body(rng, count)` once per stream and returns the results in
/// stream order.
fn per_stream<T: Send>(sim: &SimConfig, body: impl Fn(&mut ChaCha8Rng, u64) -> Result<T> + Sync) -> Result<Vec<T>> {
    sim.validate()?;
    let run = |s: u32| {
        let mut rng = sim.stream(s);
        body(&mut rng, sim.trials_in_stream(s))
    };
    if sim.parallel {
        (0..sim.stream_count).into_par_iter().map(run).collect()
    } else {
        (0..sim.stream_count).map(run).collect()
    }
}

/// Unit-mean gamma draws for one scenario.
#[derive(Debug, Clone, Copy)]
struct Sampler {
    eve_large: Gamma<f64>,
    eve_small: Gamma<f64>,
    bob_large: Gamma<f64>,
    bob_small: Gamma<f64>,
    inv_xi_sq: f64,
    n_a: u32,
    n_b: u32,
    n_e: u32,
}

fn unit_gamma(shape: f64) -> Result<Gamma<f64>> {
    Gamma::new(shape, 1.0 / shape).map_err(|e| Error::Argument(format!("gamma shape {shape}: {e}")))
}

impl Sampler {
    fn new(sc: &Scenario) -> Result<Self> {
        let n = sc.nodes();
        Ok(Sampler {
            eve_large: unit_gamma(sc.turb_eve.alpha)?,
            eve_small: unit_gamma(sc.turb_eve.beta_single)?,
            bob_large: unit_gamma(sc.turb_bob.alpha)?,
            bob_small: unit_gamma(sc.turb_bob.beta_single)?,
            inv_xi_sq: if sc.pointing.is_pointing_free() {
                0.0
            } else {
                1.0 / sc.pointing.xi_sq()
            },
            n_a: n.n_a,
            n_b: n.n_b,
            n_e: n.n_e,
        })
    }

    fn eve<R: Rng>(&self, rng: &mut R) -> f64 {
        let x = self.eve_large.sample(rng);
        let y: f64 = (0..self.n_e).map(|_| self.eve_small.sample(rng)).sum();
        let i_p = if self.inv_xi_sq == 0.0 {
            1.0
        } else {
            // U on (0, 1]
            (1.0 - rng.gen::<f64>()).powf(self.inv_xi_sq)
        };
        i_p * x * y
    }

    fn bob<R: Rng>(&self, rng: &mut R) -> f64 {
        let mut best = 0.0f64;
        for _ in 0..self.n_a {
            let x = self.bob_large.sample(rng);
            let y: f64 = (0..self.n_b).map(|_| self.bob_small.sample(rng)).sum();
            best = best.max(x * y);
        }
        best
    }
}

/// One draw of Eve's combined irradiance I_p · X · Σ_j Y_j (not normalized
/// by N_E).
pub fn sample_eve_irradiance<R: Rng>(sc: &Scenario, rng: &mut R) -> Result<f64> {
    Ok(Sampler::new(sc)?.eve(rng))
}

/// One draw of Bob's irradiance after transmit laser selection,
/// max_i X_i Σ_j Y_ij (not normalized by N_B).
pub fn sample_bob_irradiance<R: Rng>(sc: &Scenario, rng: &mut R) -> Result<f64> {
    Ok(Sampler::new(sc)?.bob(rng))
}

/// Draws `sim.trials` irradiance samples of one receiver in trial order.
pub fn sample_irradiance(sc: &Scenario, which: Receiver, sim: &SimConfig) -> Result<Vec<f64>> {
    let smp = Sampler::new(sc)?;
    let parts = per_stream(sim, |rng, count| {
        Ok((0..count)
            .map(|_| match which {
                Receiver::Bob => smp.bob(rng),
                Receiver::Eve => smp.eve(rng),
            })
            .collect::<Vec<_>>())
    })?;
    let n = sim.stream_count as usize;
    let mut out = vec![0.0; sim.trials as usize];
    for (s, part) in parts.into_iter().enumerate() {
        for (j, v) in part.into_iter().enumerate() {
            out[s + j * n] = v;
        }
    }
    Ok(out)
}

/// Capacity of a raw (unnormalized) irradiance draw.
fn raw_capacity(sc: &Scenario, raw: f64, which: Receiver) -> f64 {
    let n = match which {
        Receiver::Bob => sc.nodes().n_b,
        Receiver::Eve => sc.nodes().n_e,
    };
    sc.capacity(raw / n as f64, which)
}

fn count_hits(sim: &SimConfig, hit: impl Fn(&mut ChaCha8Rng) -> bool + Sync) -> Result<u64> {
    let parts = per_stream(sim, |rng, count| Ok((0..count).filter(|_| hit(rng)).count() as u64))?;
    Ok(parts.into_iter().sum())
}

/// Fraction of trials in which Eve's capacity exceeds `r_e`.
pub fn estimate_sop(sc: &Scenario, r_e: f64, sim: &SimConfig) -> Result<Estimate> {
    check_rate(r_e)?;
    let smp = Sampler::new(sc)?;
    let hits = count_hits(sim, |rng| raw_capacity(sc, smp.eve(rng), Receiver::Eve) > r_e)?;
    Ok(Estimate::probability(hits, sim.trials))
}

/// Fraction of trials in which the selected Bob link cannot carry `r_b`.
pub fn estimate_reliability_outage(sc: &Scenario, r_b: f64, sim: &SimConfig) -> Result<Estimate> {
    check_rate(r_b)?;
    let smp = Sampler::new(sc)?;
    let hits = count_hits(sim, |rng| raw_capacity(sc, smp.bob(rng), Receiver::Bob) <= r_b)?;
    Ok(Estimate::probability(hits, sim.trials))
}

fn check_rate(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Argument(format!("rate must be finite and >= 0, got {r}")));
    }
    Ok(())
}

/// Empirical EST.
///
/// Fixed scheme: product of the empirical reliability and secrecy factors,
/// gated by the empirical SOP, with a delta-method interval.
///
/// Adaptive scheme: every trial realizes C_B, re-solves the redundancy
/// rate (warm-started from the previous trial of the same stream), and
/// scores (C_B − r_e)·1{C_E ≤ r_e}; `rates` is ignored. See
/// [`estimate_est_adaptive_at`] for a fixed redundancy rate.
pub fn estimate_est(sc: &Scenario, rates: RatePair, scheme: Scheme, s_th: f64, sim: &SimConfig) -> Result<Estimate> {
    let constraint = SecrecyConstraint::new(s_th)?;
    match scheme {
        Scheme::Fixed => estimate_fixed(sc, rates, constraint, sim),
        Scheme::Adaptive => estimate_adaptive(sc, s_th, sim),
    }
}

fn estimate_fixed(sc: &Scenario, rates: RatePair, constraint: SecrecyConstraint, sim: &SimConfig) -> Result<Estimate> {
    let rates = RatePair::new(rates.r_b, rates.r_e)?;
    let smp = Sampler::new(sc)?;
    let parts = per_stream(sim, |rng, count| {
        let mut out = (0u64, 0u64);
        for _ in 0..count {
            let bob = raw_capacity(sc, smp.bob(rng), Receiver::Bob);
            let eve = raw_capacity(sc, smp.eve(rng), Receiver::Eve);
            out.0 += u64::from(bob <= rates.r_b);
            out.1 += u64::from(eve > rates.r_e);
        }
        Ok(out)
    })?;
    let (t_hits, s_hits) = parts.into_iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let t = Estimate::probability(t_hits, sim.trials);
    let s = Estimate::probability(s_hits, sim.trials);
    let r = rates.secrecy_rate();
    if !constraint.admits(s.mean) || r == 0.0 {
        return Ok(Estimate {
            mean: 0.0,
            ci_halfwidth: 0.0,
            trials: sim.trials,
        });
    }
    let (a, b) = (1.0 - t.mean, 1.0 - s.mean);
    Ok(Estimate {
        mean: r * a * b,
        ci_halfwidth: r * ((b * t.ci_halfwidth).powi(2) + (a * s.ci_halfwidth).powi(2)).sqrt(),
        trials: sim.trials,
    })
}

fn estimate_adaptive(sc: &Scenario, s_th: f64, sim: &SimConfig) -> Result<Estimate> {
    let opts = SolverOptions::default();
    let r_th = re_threshold(sc, s_th, &opts)?;
    let smp = Sampler::new(sc)?;
    let parts = per_stream(sim, |rng, count| {
        let mut m = Moments::default();
        let mut warm = None;
        for _ in 0..count {
            let c_b = raw_capacity(sc, smp.bob(rng), Receiver::Bob);
            let c_e = raw_capacity(sc, smp.eve(rng), Receiver::Eve);
            let (r_e, psi) = adaptive_rate_for_capacity(sc, c_b, r_th, warm, &opts)?;
            if psi > 0.0 {
                warm = Some(r_e);
            }
            m.push(if psi > 0.0 && c_e <= r_e { c_b - r_e } else { 0.0 });
        }
        Ok(m)
    })?;
    Ok(reduce(parts).estimate(sim.trials))
}

/// Adaptive-scheme EST at a fixed redundancy rate: r_b follows the
/// realized capacity, and the rate is gated by the surrogate SOP as in the
/// solvers.
pub fn estimate_est_adaptive_at(sc: &Scenario, r_e: f64, s_th: f64, sim: &SimConfig) -> Result<Estimate> {
    check_rate(r_e)?;
    let constraint = SecrecyConstraint::new(s_th)?;
    let open = constraint.admits(sop_approx(sc, r_e)?);
    let smp = Sampler::new(sc)?;
    let parts = per_stream(sim, |rng, count| {
        let mut m = Moments::default();
        for _ in 0..count {
            let c_b = raw_capacity(sc, smp.bob(rng), Receiver::Bob);
            let c_e = raw_capacity(sc, smp.eve(rng), Receiver::Eve);
            m.push(if open && c_e <= r_e { (c_b - r_e).max(0.0) } else { 0.0 });
        }
        Ok(m)
    })?;
    Ok(reduce(parts).estimate(sim.trials))
}

fn reduce(parts: Vec<Moments>) -> Moments {
    let mut total = Moments::default();
    for p in &parts {
        total.merge(p);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: u64) -> SimConfig {
        SimConfig {
            trials,
            seed: 7,
            stream_count: 8,
            parallel: false,
        }
    }

    #[test]
    fn stream_partition_covers_all_trials() {
        let sim = SimConfig {
            trials: 1003,
            stream_count: 10,
            ..Default::default()
        };
        let total: u64 = (0..10).map(|s| sim.trials_in_stream(s)).sum();
        assert_eq!(total, 1003);
        assert_eq!(sim.trials_in_stream(2), 101);
        assert_eq!(sim.trials_in_stream(3), 100);
    }

    #[test]
    fn zero_redundancy_always_leaks() {
        let sc = Scenario::baseline();
        assert_eq!(estimate_sop(&sc, 0.0, &small(2000)).unwrap().mean, 1.0);
        assert_eq!(estimate_reliability_outage(&sc, 0.0, &small(2000)).unwrap().mean, 0.0);
    }

    #[test]
    fn serial_and_parallel_agree() {
        let sc = Scenario::baseline();
        let mut sim = small(20_000);
        let a = estimate_sop(&sc, 1.0, &sim).unwrap();
        let e = estimate_est_adaptive_at(&sc, 1.0, 1.0, &sim).unwrap();
        sim.parallel = true;
        assert_eq!(a, estimate_sop(&sc, 1.0, &sim).unwrap());
        assert_eq!(e, estimate_est_adaptive_at(&sc, 1.0, 1.0, &sim).unwrap());
    }

    #[test]
    fn equal_rates_give_zero_est() {
        let sc = Scenario::baseline();
        let rates = RatePair::new(2.0, 2.0).unwrap();
        let e = estimate_est(&sc, rates, Scheme::Fixed, 1.0, &small(1000)).unwrap();
        assert_eq!(e.mean, 0.0);
    }

    #[test]
    fn rejects_empty_run() {
        let sc = Scenario::baseline();
        assert!(estimate_sop(&sc, 1.0, &small(0)).is_err());
    }
}
