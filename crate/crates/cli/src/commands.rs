use fsosec_core::channel::Receiver;
use fsosec_core::montecarlo::{estimate_est, estimate_sop};
use fsosec_core::optimize::{
    adaptive_average, adaptive_optimal, adaptive_oracle, fixed_optimal, fixed_oracle, re_threshold, AdaptiveAverage,
};
use fsosec_core::secrecy::{est_adaptive, est_fixed, reliability_outage, sop};
use fsosec_core::validation::validate;
use fsosec_core::{
    CdfModel, Estimate, Optimum, PointingParams, RatePair, Scenario, ScenarioConfig, Scheme, SecrecyConstraint,
    SimConfig, SolverOptions, TurbulenceParams, ValidationReport,
};
use serde::Serialize;

use crate::args::{Axis, OptimizeArgs, SweepArgs, ValidateArgs};
use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct NodeParams {
    pub apertures: u32,
    pub distance_m: f64,
    pub turbulence: TurbulenceParams,
    pub beta_agg: f64,
    pub k_ap: f64,
    pub theta_ap: f64,
    /// γ₀ N A₀: SNR per unit of normalized irradiance.
    pub snr_scale: f64,
}

#[derive(Debug, Serialize)]
pub struct ParamsReport {
    pub scenario: ScenarioConfig,
    pub pointing: PointingParams,
    pub pointing_free: bool,
    pub bob: NodeParams,
    pub eve: NodeParams,
}

pub fn params(cfg: &ScenarioConfig) -> Result<ParamsReport, CliError> {
    let sc = Scenario::new(*cfg)?;
    let n = sc.nodes();
    Ok(ParamsReport {
        scenario: *cfg,
        pointing: sc.pointing,
        pointing_free: sc.pointing.is_pointing_free(),
        bob: NodeParams {
            apertures: n.n_b,
            distance_m: cfg.geometry.distance_bob_m,
            turbulence: sc.turb_bob,
            beta_agg: sc.beta_agg_bob(),
            k_ap: sc.approx_bob.k_ap,
            theta_ap: sc.approx_bob.theta_ap,
            snr_scale: sc.snr_scale(Receiver::Bob),
        },
        eve: NodeParams {
            apertures: n.n_e,
            distance_m: cfg.geometry.distance_eve_m,
            turbulence: sc.turb_eve,
            beta_agg: sc.beta_agg_eve(),
            k_ap: sc.approx_eve.k_ap,
            theta_ap: sc.approx_eve.theta_ap,
            snr_scale: sc.snr_scale(Receiver::Eve),
        },
    })
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub axis: Vec<f64>,
    pub est_closed: f64,
    pub est_mc: Option<Estimate>,
    /// Undefined for the capacity-averaged adaptive optimum.
    pub sop: Option<f64>,
    pub reliability_outage: f64,
    pub constraint_met: bool,
}

pub const COLUMNS: [&str; 6] = ["est_closed", "est_mc", "ci", "sop", "reliability_outage", "constraint_met"];

pub fn axis_names(axis: Axis) -> &'static [&'static str] {
    match axis {
        Axis::RE => &["r_e"],
        Axis::RB => &["r_b"],
        Axis::Surface => &["r_e", "r_b"],
        Axis::STh => &["s_th"],
        Axis::N => &["n"],
        Axis::SigmaS => &["sigma_s"],
    }
}

pub fn linspace(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !from.is_finite() || !to.is_finite() {
        return Err(CliError::Config("sweep range must be finite".into()));
    }
    if from > to {
        return Err(CliError::Config(format!("sweep range is empty: from {from} > to {to}")));
    }
    Ok(match steps {
        0 => Vec::new(),
        1 => vec![from],
        n => (0..n)
            .map(|i| if i == n - 1 { to } else { from + (to - from) * i as f64 / (n - 1) as f64 })
            .collect(),
    })
}

fn zero(sim: &SimConfig) -> Estimate {
    Estimate {
        mean: 0.0,
        ci_halfwidth: 0.0,
        trials: sim.trials,
    }
}

fn require(v: Option<f64>, flag: &str, why: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Config(format!("{flag} is required {why}")))
}

/// EST at a fixed rate pair; in the adaptive scheme `r_b` is Bob's capacity.
pub fn point(
    sc: &Scenario,
    scheme: Scheme,
    r_e: f64,
    r_b: f64,
    s_th: f64,
    sim: Option<&SimConfig>,
) -> Result<Row, CliError> {
    let constraint = SecrecyConstraint::new(s_th)?;
    if !(r_e >= 0.0) || !(r_b >= 0.0) {
        return Err(CliError::Config(format!("rates must be >= 0, got r_e = {r_e}, r_b = {r_b}")));
    }
    let s = sop(sc, r_e)?;
    let t = match scheme {
        Scheme::Adaptive => 0.0,
        Scheme::Fixed => reliability_outage(sc, r_b)?,
    };
    if r_e > r_b {
        return Ok(Row {
            axis: vec![],
            est_closed: 0.0,
            est_mc: sim.map(zero),
            sop: Some(s),
            reliability_outage: t,
            constraint_met: constraint.admits(s),
        });
    }
    let rates = RatePair::new(r_b, r_e)?;
    let rep = match scheme {
        Scheme::Adaptive => est_adaptive(sc, r_b, r_e, constraint)?,
        Scheme::Fixed => est_fixed(sc, rates, constraint)?,
    };
    let est_mc = match (sim, scheme) {
        (None, _) => None,
        (Some(sim), Scheme::Fixed) => Some(estimate_est(sc, rates, Scheme::Fixed, s_th, sim)?),
        (Some(sim), Scheme::Adaptive) => {
            let e = estimate_sop(sc, r_e, sim)?;
            let r = r_b - r_e;
            Some(if constraint.admits(e.mean) {
                Estimate {
                    mean: r * (1.0 - e.mean),
                    ci_halfwidth: r * e.ci_halfwidth,
                    trials: e.trials,
                }
            } else {
                zero(sim)
            })
        }
    };
    Ok(Row {
        axis: vec![],
        est_closed: rep.est,
        est_mc,
        sop: Some(s),
        reliability_outage: t,
        constraint_met: rep.constraint_met,
    })
}

/// Optimizer output scored with the exact CDFs. Gating follows the
/// solver's feasibility verdict, so the Monte-Carlo column is not gated
/// again.
pub fn optimum_row(
    sc: &Scenario,
    scheme: Scheme,
    s_th: f64,
    c_b: Option<f64>,
    sim: Option<&SimConfig>,
) -> Result<Row, CliError> {
    let opts = SolverOptions::default();
    match (scheme, c_b) {
        (Scheme::Fixed, _) => {
            let o = fixed_optimal(sc, s_th, &opts)?;
            let est_mc = match sim {
                Some(sim) if o.feasible => Some(estimate_est(sc, o.rates, Scheme::Fixed, 1.0, sim)?),
                Some(sim) => Some(zero(sim)),
                None => None,
            };
            Ok(Row {
                axis: vec![],
                est_closed: if o.feasible { o.est_exact } else { 0.0 },
                est_mc,
                sop: Some(o.sop_exact),
                reliability_outage: reliability_outage(sc, o.rates.r_b)?,
                constraint_met: o.feasible,
            })
        }
        (Scheme::Adaptive, Some(c_b)) => {
            let o = adaptive_optimal(sc, c_b, s_th, &opts)?;
            let est_mc = match sim {
                Some(sim) if o.feasible => {
                    let e = estimate_sop(sc, o.rates.r_e, sim)?;
                    let r = o.rates.secrecy_rate();
                    Some(Estimate {
                        mean: r * (1.0 - e.mean),
                        ci_halfwidth: r * e.ci_halfwidth,
                        trials: e.trials,
                    })
                }
                Some(sim) => Some(zero(sim)),
                None => None,
            };
            Ok(Row {
                axis: vec![],
                est_closed: if o.feasible { o.est_exact } else { 0.0 },
                est_mc,
                sop: Some(o.sop_exact),
                reliability_outage: 0.0,
                constraint_met: o.feasible,
            })
        }
        (Scheme::Adaptive, None) => {
            let avg = adaptive_average(sc, s_th, &opts)?;
            let est_mc = match sim {
                Some(sim) => {
                    let dummy = RatePair::new(0.0, 0.0)?;
                    Some(estimate_est(sc, dummy, Scheme::Adaptive, s_th, sim)?)
                }
                None => None,
            };
            Ok(Row {
                axis: vec![],
                est_closed: avg.est_exact,
                est_mc,
                sop: None,
                reliability_outage: 0.0,
                constraint_met: avg.infeasible_mass < 1.0,
            })
        }
    }
}

pub fn sweep(base: &ScenarioConfig, a: &SweepArgs) -> Result<Vec<Row>, CliError> {
    let mut cfg = *base;
    if let Some(s) = a.sth {
        cfg.s_th = s;
    }
    cfg.validate()?;
    let s_th = cfg.s_th;
    let sim = a.sim.sim();
    let sim = if a.mc {
        sim.validate()?;
        Some(&sim)
    } else {
        None
    };
    let xs = linspace(a.from, a.to, a.steps)?;
    let mut rows = Vec::with_capacity(xs.len());
    let sc = Scenario::new(cfg)?;
    let with_axis = |mut r: Row, axis: Vec<f64>| {
        r.axis = axis;
        r
    };
    match a.axis {
        Axis::RE => {
            let r_b = require(a.rb, "--rb", "for a r_e sweep")?;
            for x in xs {
                rows.push(with_axis(point(&sc, a.scheme, x, r_b, s_th, sim)?, vec![x]));
            }
        }
        Axis::RB => {
            let r_e = require(a.re, "--re", "for a r_b sweep")?;
            for x in xs {
                rows.push(with_axis(point(&sc, a.scheme, r_e, x, s_th, sim)?, vec![x]));
            }
        }
        Axis::Surface => {
            let ys = linspace(
                a.from2.unwrap_or(a.from),
                a.to2.unwrap_or(a.to),
                a.steps2.unwrap_or(a.steps),
            )?;
            for &x in &xs {
                for &y in &ys {
                    rows.push(with_axis(point(&sc, a.scheme, x, y, s_th, sim)?, vec![x, y]));
                }
            }
        }
        Axis::STh => {
            for x in xs {
                let row = optimum_row(&sc, a.scheme, x, a.rb, sim)?;
                rows.push(with_axis(row, vec![x]));
            }
        }
        Axis::N => {
            for x in xs {
                if x.fract() != 0.0 || x < 1.0 {
                    return Err(CliError::Config(format!("aperture count must be a positive integer, got {x}")));
                }
                let n = x as u32;
                let sc = Scenario::new(cfg.with_apertures(n, n, n))?;
                rows.push(with_axis(optimum_row(&sc, a.scheme, s_th, a.rb, sim)?, vec![x]));
            }
        }
        Axis::SigmaS => {
            for x in xs {
                let sc = Scenario::new(cfg.with_sigma_s(x))?;
                rows.push(with_axis(optimum_row(&sc, a.scheme, s_th, a.rb, sim)?, vec![x]));
            }
        }
    }
    Ok(rows)
}

fn num(v: f64) -> String {
    format!("{v:.10}")
}

pub fn write_csv(axis: Axis, rows: &[Row]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let header: Vec<&str> = axis_names(axis).iter().chain(COLUMNS.iter()).copied().collect();
    w.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = r.axis.iter().map(|&v| num(v)).collect();
        rec.push(num(r.est_closed));
        match r.est_mc {
            Some(e) => {
                rec.push(num(e.mean));
                rec.push(num(e.ci_halfwidth));
            }
            None => rec.extend([String::new(), String::new()]),
        }
        rec.push(r.sop.map(num).unwrap_or_default());
        rec.push(num(r.reliability_outage));
        rec.push(r.constraint_met.to_string());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is ASCII"))
}

#[derive(Debug, Serialize)]
pub struct OracleCheck {
    pub rates: RatePair,
    /// Oracle objective value.
    pub est: f64,
    /// Relative shortfall of the solver against the oracle.
    pub gap: f64,
}

#[derive(Debug, Serialize)]
pub struct OptimizeReport {
    pub scheme: Scheme,
    pub s_th: f64,
    pub c_b: Option<f64>,
    /// "point" for a single optimum, "averaged" for the capacity average.
    pub mode: &'static str,
    pub r_e_threshold: f64,
    pub optimum: Option<Optimum>,
    /// Grid oracle on the surrogate objective the solver maximizes.
    pub surrogate_oracle: Option<OracleCheck>,
    /// Grid oracle on the exact EST, compared with the solver's rates
    /// scored exactly.
    pub oracle: Option<OracleCheck>,
    pub average: Option<AdaptiveAverage>,
    pub monte_carlo: Option<Estimate>,
}

fn gap(oracle: f64, solver: f64) -> f64 {
    if oracle > 0.0 {
        ((oracle - solver) / oracle).max(0.0)
    } else {
        0.0
    }
}

fn exact_value(o: &Optimum) -> f64 {
    if o.feasible {
        o.est_exact
    } else {
        0.0
    }
}

pub fn optimize(base: &ScenarioConfig, a: &OptimizeArgs) -> Result<OptimizeReport, CliError> {
    let mut cfg = *base;
    if let Some(s) = a.sth {
        cfg.s_th = s;
    }
    cfg.validate()?;
    let s_th = cfg.s_th;
    let sc = Scenario::new(cfg)?;
    let opts = SolverOptions::default();
    let sim = a.sim.sim();
    if a.mc {
        sim.validate()?;
    }
    let r_e_threshold = re_threshold(&sc, s_th, &opts)?;
    let mut report = OptimizeReport {
        scheme: a.scheme,
        s_th,
        c_b: a.cb,
        mode: "point",
        r_e_threshold,
        optimum: None,
        surrogate_oracle: None,
        oracle: None,
        average: None,
        monte_carlo: None,
    };
    let (o, sur, exact) = match (a.scheme, a.cb) {
        (Scheme::Adaptive, None) => {
            report.mode = "averaged";
            report.average = Some(adaptive_average(&sc, s_th, &opts)?);
            if a.mc {
                let dummy = RatePair::new(0.0, 0.0)?;
                report.monte_carlo = Some(estimate_est(&sc, dummy, Scheme::Adaptive, s_th, &sim)?);
            }
            return Ok(report);
        }
        (Scheme::Adaptive, Some(c_b)) => (
            adaptive_optimal(&sc, c_b, s_th, &opts)?,
            adaptive_oracle(&sc, c_b, s_th, CdfModel::GammaApprox, &opts)?,
            adaptive_oracle(&sc, c_b, s_th, CdfModel::Exact, &opts)?,
        ),
        (Scheme::Fixed, _) => (
            fixed_optimal(&sc, s_th, &opts)?,
            fixed_oracle(&sc, s_th, CdfModel::GammaApprox, &opts)?,
            fixed_oracle(&sc, s_th, CdfModel::Exact, &opts)?,
        ),
    };
    report.surrogate_oracle = Some(OracleCheck {
        rates: sur.rates,
        est: sur.est,
        gap: gap(sur.est, o.est),
    });
    report.oracle = Some(OracleCheck {
        rates: exact.rates,
        est: exact_value(&exact),
        gap: gap(exact_value(&exact), exact_value(&o)),
    });
    if a.mc {
        let row = optimum_row(&sc, a.scheme, s_th, a.cb, Some(&sim))?;
        report.monte_carlo = row.est_mc;
    }
    report.optimum = Some(o);
    Ok(report)
}

pub fn run_validate(base: &ScenarioConfig, a: &ValidateArgs) -> Result<ValidationReport, CliError> {
    let mut cfg = *base;
    if let Some(s) = a.sth {
        cfg.s_th = s;
    }
    Ok(validate(&cfg, &a.sim.sim())?)
}
