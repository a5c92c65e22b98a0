//! Band-limited extrapolation of a signal observed on `D = [-d, d]²` by
//! alternating substitution of the observation and band limiting.

use crate::concentration::band_limit;
use crate::error::{Error, Result};
use crate::grid::{energy, GridAxis, QSignal, Region};
use crate::prolate::BasisSet2D;
use crate::qft::band_half_count;
use std::f64::consts::PI;

/// Observation `g = f χ_D` of a band-limited `f`, with optional ground truth.
#[derive(Debug, Clone)]
pub struct ExtrapolationProblem {
    pub observed: QSignal,
    pub d: f64,
    pub w: f64,
    pub truth: Option<QSignal>,
}

impl ExtrapolationProblem {
    pub fn new(observed: QSignal, d: f64, w: f64, truth: Option<QSignal>) -> Result<Self> {
        let outside = observed.restrict_complement(Region::CenteredSquare(d))?;
        if outside.values.iter().any(|q| q.modulus() != 0.0) {
            return Err(Error::BadParameters("observation is not zero outside D".into()));
        }
        if let Some(t) = &truth {
            t.check_same_grid(&observed)?;
            let r = t.restrict(Region::CenteredSquare(d))?;
            let scale = r.max_abs().max(f64::MIN_POSITIVE);
            if r.max_abs_diff(&observed) > 1e-12 * scale {
                return Err(Error::BadParameters("observation differs from truth on D".into()));
            }
        }
        Ok(Self { observed, d, w, truth })
    }

    /// Observe `truth` on `D`.
    pub fn from_truth(truth: QSignal, d: f64, w: f64) -> Result<Self> {
        let observed = truth.restrict(Region::CenteredSquare(d))?;
        Ok(Self {
            observed,
            d,
            w,
            truth: Some(truth),
        })
    }
}

/// One iteration of the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub n: usize,
    /// `E_n = ‖f − f_n‖²` when the truth is known.
    pub energy_error: Option<f64>,
    /// `max |f − f_n|` when the truth is known.
    pub sup_error: Option<f64>,
    /// Pointwise bound from `E_n` over the discrete pass band.
    pub bound: Option<f64>,
    /// `√(W E_n / π²)`, the constant quoted in the literature, for comparison.
    pub reference_bound: Option<f64>,
    /// `‖f_n − f_{n−1}‖ / ‖f_n‖`.
    pub delta: f64,
}

#[derive(Debug, Clone)]
pub struct ExtrapolationTrace {
    pub steps: Vec<StepRecord>,
    pub final_iterate: QSignal,
    pub converged: bool,
    /// Half-width `W_eff` of the square with the area of the discrete pass band.
    pub effective_band: f64,
}

/// `f_n = B_W(g on D, f_{n−1} elsewhere)`.
pub fn pg_step(g_obs: &QSignal, f_prev: &QSignal, d: f64, w: f64) -> Result<QSignal> {
    g_obs.check_same_grid(f_prev)?;
    let mask_x = g_obs.ax_x.mask(d)?;
    let mask_y = g_obs.ax_y.mask(d)?;
    let ny = g_obs.ny();
    let mut h = f_prev.clone();
    for (ix, &bx) in mask_x.iter().enumerate() {
        for (iy, &by) in mask_y.iter().enumerate() {
            if bx && by {
                h.values[ix * ny + iy] = g_obs.values[ix * ny + iy];
            }
        }
    }
    band_limit(&h, w)
}

/// Area of the retained frequency set of `B_W` on the reciprocal grid.
pub fn discrete_band_area(ax_x: &GridAxis, ax_y: &GridAxis, w: f64) -> f64 {
    let side = |a: &GridAxis| {
        let du = a.dual().step;
        (2 * band_half_count(w, du) + 1) as f64 * du
    };
    side(ax_x) * side(ax_y)
}

/// `sup |e| ≤ (area(W)/(2π)²)^{1/2} √E` with `area = (2W)²`, i.e. `W √E / π`.
pub fn pointwise_bound(e_n: f64, w: f64) -> f64 {
    w * e_n.max(0.0).sqrt() / PI
}

/// `√(W E / π²)`.
pub fn reference_pointwise_bound(e_n: f64, w: f64) -> f64 {
    (w * e_n.max(0.0) / (PI * PI)).sqrt()
}

/// Iterate from `f₀ = 0` until `‖f_n − f_{n−1}‖/‖f_n‖ < stop_tol` or `max_steps`.
pub fn pg_run(problem: &ExtrapolationProblem, max_steps: usize, stop_tol: f64) -> Result<ExtrapolationTrace> {
    if max_steps == 0 {
        return Err(Error::BadParameters("max_steps must be ≥ 1".into()));
    }
    let g = &problem.observed;
    let w_eff = discrete_band_area(&g.ax_x, &g.ax_y, problem.w).sqrt() / 2.0;
    let mut f = QSignal::zeros(g.ax_x, g.ax_y);
    let mut steps = Vec::new();
    let mut converged = false;
    for n in 1..=max_steps {
        let next = pg_step(g, &f, problem.d, problem.w)?;
        let change = next.sub(&f)?.norm();
        let size = next.norm();
        let delta = if size > 0.0 { change / size } else { 0.0 };
        let (mut energy_error, mut sup_error, mut bound, mut reference_bound) = (None, None, None, None);
        if let Some(truth) = &problem.truth {
            let e = truth.sub(&next)?;
            let en = energy(&e, Region::FullGrid)?;
            energy_error = Some(en);
            sup_error = Some(e.max_abs());
            bound = Some(pointwise_bound(en, w_eff));
            reference_bound = Some(reference_pointwise_bound(en, problem.w));
        }
        steps.push(StepRecord {
            n,
            energy_error,
            sup_error,
            bound,
            reference_bound,
            delta,
        });
        f = next;
        if delta < stop_tol {
            converged = true;
            break;
        }
    }
    Ok(ExtrapolationTrace {
        steps,
        final_iterate: f,
        converged,
        effective_band: w_eff,
    })
}

/// `f_n = Σ a_j (1 − (1 − λ_j)^n) ψ_j` over the first `a.len()` basis elements.
pub fn closed_form_iterate(a: &[f64], lambdas: &[f64], n: usize, basis: &BasisSet2D) -> Result<QSignal> {
    if lambdas.len() != a.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: lambdas.len(),
        });
    }
    if basis.items.len() < a.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: basis.items.len(),
        });
    }
    let mut out = QSignal::zeros(basis.ax_x, basis.ax_y);
    for ((&aj, &lj), item) in a.iter().zip(lambdas).zip(&basis.items) {
        let c = aj * (1.0 - (1.0 - lj).powi(n as i32));
        for (o, &v) in out.values.iter_mut().zip(&item.values.values) {
            *o += v * c;
        }
    }
    Ok(out)
}

/// `E_n = Σ a_j² (1 − λ_j)^{2n}`.
pub fn error_energy(a: &[f64], lambdas: &[f64], n: usize) -> f64 {
    a.iter()
        .zip(lambdas)
        .map(|(&aj, &lj)| aj * aj * (1.0 - lj).powi(2 * n as i32))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_formulas() {
        let a = [0.5, -1.0, 2.0];
        assert_eq!(error_energy(&a, &[0.3, 0.2, 0.9], 0), 5.25);
        assert_eq!(error_energy(&a, &[1.0, 1.0, 1.0], 3), 0.0);
        assert_eq!(pointwise_bound(0.0, 3.0), 0.0);
        let b = pointwise_bound(2.0, 3.0);
        assert!((pointwise_bound(1.0, 3.0) - b / 2f64.sqrt()).abs() < 1e-15);
        assert!((reference_pointwise_bound(4.0, 1.0) - 2.0 / PI).abs() < 1e-15);
    }
}
