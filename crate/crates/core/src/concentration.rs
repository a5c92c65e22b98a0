//! Time- and band-limiting operators, energy ratios `(ξ, η_Q)` and the
//! signals that attain the concentration bounds.

use crate::error::{Error, Result};
use crate::grid::{angle, energy, GridAxis, QSignal, Region, ZERO_ENERGY_FLOOR};
use crate::prolate::BasisSet2D;
use crate::qft::{forward_qft_dual, inverse_qft, mask_band, q_energy, q_energy_in_band};
use rayon::prelude::*;

/// `D_T f = f χ_T`.
pub fn time_limit(f: &QSignal, t: f64) -> Result<QSignal> {
    f.restrict(Region::CenteredSquare(t))
}

fn max_frequency(axis: &GridAxis) -> f64 {
    let d = axis.dual();
    d.coord(0).abs().min(d.end().abs())
}

/// `B_W f`: mask all component spectra to `[-W, W]²` on the reciprocal
/// frequency grid and invert.
pub fn band_limit(f: &QSignal, w: f64) -> Result<QSignal> {
    let max = max_frequency(&f.ax_x).min(max_frequency(&f.ax_y));
    if w.is_nan() || w <= 0.0 || w > max {
        return Err(Error::WindowTooSmall { w, max });
    }
    let mut s = forward_qft_dual(f)?;
    mask_band(&mut s, w);
    inverse_qft(&s, f.ax_x, f.ax_y)
}

/// Energy fractions of a signal inside `T` (time) and `W` (frequency).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub xi: f64,
    pub eta_q: f64,
    pub lambda0: f64,
    /// `arccos ξ + arccos η_Q − arccos √λ₀`; non-negative for every signal.
    pub angle_sum_deficit: f64,
}

impl EnergyReport {
    pub fn new(xi: f64, eta_q: f64, lambda0: f64) -> Self {
        let deficit = xi.clamp(0.0, 1.0).acos() + eta_q.clamp(0.0, 1.0).acos() - lambda0.sqrt().acos();
        Self {
            xi,
            eta_q,
            lambda0,
            angle_sum_deficit: deficit,
        }
    }
}

/// `ξ² = ‖D_T f‖² / ‖f‖²`, `η_Q² = ∫_W |F(f)|_Q² / ‖f‖²`.
pub fn energy_ratios(f: &QSignal, t: f64, w: f64, lambda0: f64) -> Result<EnergyReport> {
    let e = energy(f, Region::FullGrid)?;
    if e <= ZERO_ENERGY_FLOOR {
        return Err(Error::ZeroSignal);
    }
    let inside = energy(f, Region::CenteredSquare(t))?;
    let s = forward_qft_dual(f)?;
    let total = q_energy(&s);
    let band = q_energy_in_band(&s, w);
    let xi = (inside / e).sqrt().min(1.0);
    let eta = (band / total).sqrt().min(1.0);
    Ok(EnergyReport::new(xi, eta, lambda0))
}

/// `(arccos √λ₀, angle(ψ₀, D_T ψ₀))`.
pub fn least_angle_check(set: &BasisSet2D) -> Result<(f64, f64)> {
    let psi0 = &set.items.first().ok_or(Error::BadIndex(0))?.values;
    let theoretical = set.items[0].lambda2d.sqrt().acos();
    let achieved = angle(psi0, &time_limit(psi0, set.t)?)?;
    Ok((theoretical, achieved))
}

/// Upper edge of the admissible `(ξ, η_Q)` region: `1` for `ξ ≤ √λ₀`,
/// `cos(arccos √λ₀ − arccos ξ)` beyond.
pub fn boundary_eta(xi: f64, lambda0: f64) -> f64 {
    let s = lambda0.sqrt();
    if xi <= s {
        1.0
    } else {
        (s.acos() - xi.clamp(0.0, 1.0).acos()).cos()
    }
}

/// `g = p ψ₀ + q D_T ψ₀` with `p = √((1−ξ²)/(1−λ₀))`, `q = ξ/√λ₀ − p`: unit
/// energy, time fraction `ξ`, and on the boundary of the admissible region.
pub fn build_boundary_signal(xi: f64, set: &BasisSet2D) -> Result<QSignal> {
    let item = set.items.first().ok_or(Error::BadIndex(0))?;
    let l0 = item.lambda2d;
    let lo = l0.sqrt();
    if !(xi >= lo - 1e-12 && xi < 1.0) || l0 >= 1.0 {
        return Err(Error::XiOutOfRange { xi, lo, hi: 1.0 });
    }
    let p = ((1.0 - xi * xi) / (1.0 - l0)).max(0.0).sqrt();
    let q = xi / lo - p;
    let d = time_limit(&item.values, set.t)?;
    item.values.lin_comb(p, &d, q)
}

/// `g = (ψ_n − D_T ψ_n)/√(1 − λ_n)`: unit energy with nothing inside `T`.
pub fn build_zero_xi_signal(index: usize, set: &BasisSet2D) -> Result<QSignal> {
    let item = set.items.get(index).ok_or(Error::BadIndex(index))?;
    if item.lambda2d >= 1.0 - 1e-15 {
        return Err(Error::BadIndex(index));
    }
    let outside = item.values.restrict_complement(Region::CenteredSquare(set.t))?;
    Ok(outside.scale(1.0 / (1.0 - item.lambda2d).sqrt()))
}

/// `g = (√(ξ²−λ_n) ψ₀ + √(λ₀−ξ²) ψ_n)/√(λ₀−λ_n)`: band-limited, unit energy,
/// time fraction `ξ < √λ₀`. Without an explicit index the first element with
/// `λ_n < ξ²` is used.
pub fn build_eta_one_signal(xi: f64, index: Option<usize>, set: &BasisSet2D) -> Result<QSignal> {
    let l0 = set.items.first().ok_or(Error::BadIndex(0))?.lambda2d;
    if !(xi > 0.0 && xi < l0.sqrt()) {
        return Err(Error::XiOutOfRange {
            xi,
            lo: 0.0,
            hi: l0.sqrt(),
        });
    }
    let x2 = xi * xi;
    let n = match index {
        Some(n) => {
            let item = set.items.get(n).ok_or(Error::BadIndex(n))?;
            if n == 0 || item.lambda2d >= x2 {
                return Err(Error::NoAdmissibleIndex(x2));
            }
            n
        }
        None => (1..set.items.len())
            .find(|&n| set.items[n].lambda2d < x2)
            .ok_or(Error::NoAdmissibleIndex(x2))?,
    };
    let ln = set.items[n].lambda2d;
    let den = (l0 - ln).sqrt();
    set.items[0]
        .values
        .lin_comb((x2 - ln).sqrt() / den, &set.items[n].values, (l0 - x2).sqrt() / den)
}

/// Where a point of the admissible-region sweep comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSource {
    BoundaryCurve,
    BoundarySignal,
    EtaOneSignal,
    ZeroXiSignal,
    Input,
}

impl PointSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointSource::BoundaryCurve => "boundary_curve",
            PointSource::BoundarySignal => "boundary_signal",
            PointSource::EtaOneSignal => "eta_one_signal",
            PointSource::ZeroXiSignal => "zero_xi_signal",
            PointSource::Input => "input",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub report: EnergyReport,
    pub source: PointSource,
}

/// Analytic boundary at each `ξ` plus measured reports of the extremal
/// constructions: boundary signals for `ξ ≥ √λ₀`, band-limited signals for
/// `ξ < √λ₀`, and `ξ = 0` signals from the even-even elements.
pub fn sweep_admissible_region(set: &BasisSet2D, xis: &[f64]) -> Result<Vec<RegionPoint>> {
    let l0 = set.items.first().ok_or(Error::BadIndex(0))?.lambda2d;
    let (t, w) = (set.t, set.w);
    let mut points: Vec<RegionPoint> = xis
        .iter()
        .map(|&xi| RegionPoint {
            report: EnergyReport::new(xi, boundary_eta(xi, l0), l0),
            source: PointSource::BoundaryCurve,
        })
        .collect();
    let measured: Vec<Option<RegionPoint>> = xis
        .par_iter()
        .map(|&xi| -> Result<Option<RegionPoint>> {
            let (g, source) = if xi >= l0.sqrt() && xi < 1.0 {
                (build_boundary_signal(xi, set)?, PointSource::BoundarySignal)
            } else if xi > 0.0 && xi < l0.sqrt() {
                match build_eta_one_signal(xi, None, set) {
                    Ok(g) => (g, PointSource::EtaOneSignal),
                    Err(Error::NoAdmissibleIndex(_)) => return Ok(None),
                    Err(e) => return Err(e),
                }
            } else {
                return Ok(None);
            };
            Ok(Some(RegionPoint {
                report: energy_ratios(&g, t, w, l0)?,
                source,
            }))
        })
        .collect::<Result<_>>()?;
    points.extend(measured.into_iter().flatten());
    for (n, item) in set.items.iter().enumerate() {
        if item.m % 2 == 0 && item.n % 2 == 0 && item.lambda2d < 1.0 - 1e-15 {
            let g = build_zero_xi_signal(n, set)?;
            points.push(RegionPoint {
                report: energy_ratios(&g, t, w, l0)?,
                source: PointSource::ZeroXiSignal,
            });
        }
    }
    Ok(points)
}
