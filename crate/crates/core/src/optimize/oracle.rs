//! Grid-plus-refinement maximizer used to cross-check the closed-form
//! solvers. Deterministic: ties on the grid go to the first index and a
//! refined point replaces the incumbent only if strictly better.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{adaptive::finish_adaptive, fixed::finish, Method, Optimum, SolverOptions};
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::secrecy::{reliability_outage_with, sop_approx, sop_with, CdfModel};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMax {
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMax2 {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 || hi <= lo {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { hi } else { lo + i as f64 * step }).collect()
}

/// Golden-section search on [a, b]; returns the best point seen.
fn golden(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let tol = 1e-12 * (1.0 + a.abs().max(b.abs()));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Maximizes `f` on [lo, hi]: coarse grid of `opts.grid_points`, then
/// golden-section refinement between the incumbent's grid neighbours.
pub fn grid_refine_maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64, opts: &SolverOptions) -> GridMax {
    let xs = grid(lo, hi, opts.grid_points);
    let mut best = 0;
    let mut best_v = f(xs[0]);
    for (i, &x) in xs.iter().enumerate().skip(1) {
        let v = f(x);
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    let mut out = GridMax {
        x: xs[best],
        value: best_v,
    };
    if xs.len() > 1 {
        let a = xs[best.saturating_sub(1)];
        let b = xs[(best + 1).min(xs.len() - 1)];
        let (x, v) = golden(&f, a, b);
        if v > out.value {
            out = GridMax { x, value: v };
        }
    }
    out
}

/// Two-dimensional version: full grid, then cyclic golden-section
/// refinement one coordinate at a time within one grid cell.
pub fn grid_refine_maximize_2d(
    f: impl Fn(f64, f64) -> f64,
    x_bounds: (f64, f64),
    y_bounds: (f64, f64),
    opts: &SolverOptions,
) -> GridMax2 {
    let xs = grid(x_bounds.0, x_bounds.1, opts.grid_points);
    let ys = grid(y_bounds.0, y_bounds.1, opts.grid_points);
    let mut out = GridMax2 {
        x: xs[0],
        y: ys[0],
        value: f(xs[0], ys[0]),
    };
    for &x in &xs {
        for &y in &ys {
            let v = f(x, y);
            if v > out.value {
                out = GridMax2 { x, y, value: v };
            }
        }
    }
    let dx = if xs.len() > 1 { xs[1] - xs[0] } else { 0.0 };
    let dy = if ys.len() > 1 { ys[1] - ys[0] } else { 0.0 };
    for _ in 0..30 {
        let before = out.value;
        if dx > 0.0 {
            let y = out.y;
            let a = (out.x - dx).max(x_bounds.0);
            let b = (out.x + dx).min(x_bounds.1);
            let (x, v) = golden(&|x| f(x, y), a, b);
            if v > out.value {
                out = GridMax2 { x, y, value: v };
            }
        }
        if dy > 0.0 {
            let x = out.x;
            let a = (out.y - dy).max(y_bounds.0);
            let b = (out.y + dy).min(y_bounds.1);
            let (y, v) = golden(&|y| f(x, y), a, b);
            if v > out.value {
                out = GridMax2 { x, y, value: v };
            }
        }
        if out.value - before <= 1e-15 * out.value.abs().max(1.0) {
            break;
        }
    }
    out
}

/// Memoized rate function; keys are the exact bit patterns of the rate.
struct Memo<F: Fn(f64) -> Result<f64>> {
    f: F,
    cache: RefCell<HashMap<u64, f64>>,
    failed: RefCell<Option<Error>>,
}

impl<F: Fn(f64) -> Result<f64>> Memo<F> {
    fn new(f: F) -> Self {
        Memo {
            f,
            cache: RefCell::new(HashMap::new()),
            failed: RefCell::new(None),
        }
    }

    fn get(&self, x: f64) -> f64 {
        if let Some(v) = self.cache.borrow().get(&x.to_bits()) {
            return *v;
        }
        let v = match (self.f)(x) {
            Ok(v) => v,
            Err(e) => {
                self.failed.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        };
        self.cache.borrow_mut().insert(x.to_bits(), v);
        v
    }

    fn check(self) -> Result<()> {
        match self.failed.into_inner() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Best redundancy rate for the adaptive scheme by grid search. The
/// objective is the EST under `model`, gated by the surrogate SOP.
pub fn adaptive_oracle(
    sc: &Scenario,
    c_b: f64,
    s_th: f64,
    model: CdfModel,
    opts: &SolverOptions,
) -> Result<Optimum> {
    if !(c_b > 0.0) {
        return Err(Error::Argument(format!("c_b must be > 0, got {c_b}")));
    }
    let gate = Memo::new(|r| sop_approx(sc, r));
    let s = Memo::new(|r| sop_with(sc, r, model));
    let objective = |r: f64| {
        if gate.get(r) > s_th {
            0.0
        } else {
            (c_b - r) * (1.0 - s.get(r))
        }
    };
    let best = grid_refine_maximize(objective, 0.0, c_b, opts);
    gate.check()?;
    s.check()?;
    let active = s_th < 1.0 && sop_approx(sc, best.x)? > 0.99 * s_th;
    finish_adaptive(sc, c_b, best.x, s_th, Method::GridOracle, active, opts.grid_points)
}

/// Best rate pair for the fixed-rate scheme by 2-D grid search over
/// (r_e, r_b) ∈ [0, R]², with R from [`Scenario::rate_ceiling`].
pub fn fixed_oracle(sc: &Scenario, s_th: f64, model: CdfModel, opts: &SolverOptions) -> Result<Optimum> {
    let ceiling = sc.rate_ceiling();
    let gate = Memo::new(|r| sop_approx(sc, r));
    let s = Memo::new(|r| sop_with(sc, r, model));
    let t = Memo::new(|r| reliability_outage_with(sc, r, model));
    let objective = |r_e: f64, r_b: f64| {
        if r_b <= r_e || gate.get(r_e) > s_th {
            0.0
        } else {
            (r_b - r_e) * (1.0 - t.get(r_b)) * (1.0 - s.get(r_e))
        }
    };
    let best = grid_refine_maximize_2d(objective, (0.0, ceiling), (0.0, ceiling), opts);
    gate.check()?;
    s.check()?;
    t.check()?;
    let (r_e, r_b) = (best.x, best.y.max(best.x));
    let active = s_th < 1.0 && sop_approx(sc, r_e)? > 0.99 * s_th;
    finish(sc, r_b, r_e, s_th, Method::GridOracle, active, false, opts.grid_points * opts.grid_points)
}

/// Best codeword rate for a fixed redundancy rate by 1-D grid search.
pub fn fixed_rb_oracle(sc: &Scenario, r_e: f64, model: CdfModel, opts: &SolverOptions) -> Result<f64> {
    let s = 1.0 - sop_with(sc, r_e, model)?;
    let t = Memo::new(|r| reliability_outage_with(sc, r, model));
    let best = grid_refine_maximize(|r_b| (r_b - r_e) * (1.0 - t.get(r_b)) * s, r_e, r_e + sc.rate_ceiling(), opts);
    t.check()?;
    Ok(best.x)
}
