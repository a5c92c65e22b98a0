use crate::basis::{solve_1d, ELEMENT_COEFF};
use crate::config::RunConfig;
use crate::error::{io_err, CliResult};
use crate::output::{ensure_dir, write_json, write_text};
use crate::svg::Plot;
use qpswf::concentration::{
    band_limit, energy_ratios, least_angle_check, sweep_admissible_region, time_limit, EnergyReport,
};
use qpswf::prolate::{build_qpswf_basis, eig_prolate_grid, BasisSet2D};
use qpswf::rng::random_signal;
use qpswf::QSignal;
use serde::Serialize;
use std::fmt::Write;
use std::path::Path;

/// Boundary-curve sample count.
pub const SWEEP_POINTS: usize = 40;
/// Extra samples on `[√λ₀, 1)`, where the boundary is attained.
pub const ARC_POINTS: usize = 10;
/// Random signals added to the region plot.
pub const RANDOM_SIGNALS: u64 = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub xi: f64,
    pub eta_q: f64,
    pub xi2: f64,
    pub eta_q2: f64,
    pub deficit: f64,
}

impl From<&EnergyReport> for PointReport {
    fn from(r: &EnergyReport) -> Self {
        Self {
            xi: r.xi,
            eta_q: r.eta_q,
            xi2: r.xi * r.xi,
            eta_q2: r.eta_q * r.eta_q,
            deficit: r.angle_sum_deficit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "W")]
    pub w: f64,
    /// Leading eigenvalue of the grid operator the measurements use.
    pub lambda0: f64,
    /// Leading eigenvalue of the continuous operator.
    pub lambda0_continuous: f64,
    pub least_angle: f64,
    pub least_angle_achieved: f64,
    pub points: usize,
    pub min_deficit: f64,
    pub input: Option<PointReport>,
}

pub fn grid_basis(cfg: &RunConfig) -> CliResult<BasisSet2D> {
    let ax = cfg.axis()?;
    let b = eig_prolate_grid(&ax, cfg.t, cfg.w, cfg.basis_count.min(ax.count))?;
    Ok(build_qpswf_basis(&b, cfg.basis_count, ELEMENT_COEFF, ax, ax)?)
}

/// Writes `region.csv`, `region.svg`, `report.json` and the grid extremal `psi0.qgrd`.
pub fn run(cfg: &RunConfig, input: Option<&Path>, out: &Path) -> CliResult<ConcentrationReport> {
    let input_signal = match input {
        Some(p) => {
            if !p.is_file() {
                return Err(io_err(p, "input signal not found"));
            }
            Some(QSignal::load(p)?)
        }
        None => None,
    };
    let set = grid_basis(cfg)?;
    let l0 = set.items[0].lambda2d;
    let (t, w) = (cfg.t, cfg.w);
    let input_report = match &input_signal {
        Some(f) => Some(energy_ratios(f, t, w, l0)?),
        None => None,
    };
    let continuous = solve_1d(t, w, cfg.quad_n, 1)?.eigvals[0].powi(2);
    let (angle, achieved) = least_angle_check(&set)?;

    let lo = l0.sqrt();
    let mut xis: Vec<f64> = (0..SWEEP_POINTS)
        .map(|k| (k as f64 + 0.5) / SWEEP_POINTS as f64)
        .collect();
    xis.retain(|&x| x < lo);
    xis.extend((0..ARC_POINTS).map(|k| lo + (1.0 - lo) * (k as f64 + 0.5) / ARC_POINTS as f64));
    let mut rows: Vec<(EnergyReport, &'static str)> = sweep_admissible_region(&set, &xis)?
        .into_iter()
        .map(|p| (p.report, p.source.as_str()))
        .collect();
    let ax = set.ax_x;
    for s in 0..RANDOM_SIGNALS {
        let raw = random_signal(ax, ax, cfg.seed.wrapping_add(s));
        let frac = 0.25 + 0.75 * (s % 4) as f64 / 3.0;
        let (g, label) = if s % 2 == 0 {
            (band_limit(&raw, w * frac)?, "random_bandlimited")
        } else {
            (time_limit(&raw, t * frac)?, "random_timelimited")
        };
        rows.push((energy_ratios(&g, t, w, l0)?, label));
    }
    if let Some(r) = input_report {
        rows.push((r, "input"));
    }

    ensure_dir(out)?;
    let psi0 = out.join("psi0.qgrd");
    set.items[0].values.save(&psi0).map_err(|e| io_err(&psi0, e))?;
    let mut csv = String::from("xi,eta_q,deficit,source\n");
    for (r, src) in &rows {
        let _ = writeln!(csv, "{:e},{:e},{:e},{src}", r.xi, r.eta_q, r.angle_sum_deficit);
    }
    write_text(&out.join("region.csv"), &csv)?;
    write_text(&out.join("region.svg"), &region_plot(&rows, l0).render())?;

    let report = ConcentrationReport {
        t,
        w,
        lambda0: l0,
        lambda0_continuous: continuous,
        least_angle: angle,
        least_angle_achieved: achieved,
        points: rows.len(),
        min_deficit: rows
            .iter()
            .map(|(r, _)| r.angle_sum_deficit)
            .fold(f64::INFINITY, f64::min),
        input: input_report.as_ref().map(PointReport::from),
    };
    write_json(&out.join("report.json"), &report)?;
    Ok(report)
}

fn region_plot(rows: &[(EnergyReport, &str)], l0: f64) -> Plot {
    let sq = |r: &EnergyReport| (r.xi * r.xi, r.eta_q * r.eta_q);
    let pick = |src: &str| -> Vec<(f64, f64)> { rows.iter().filter(|(_, s)| *s == src).map(|(r, _)| sq(r)).collect() };
    let mut curve: Vec<(f64, f64)> = pick("boundary_curve");
    curve.insert(0, (0.0, 1.0));
    curve.push((1.0, 0.0));
    let mut plot = Plot::new(
        &format!("Admissible region, lambda0 = {l0:.6}"),
        "xi^2",
        "eta_Q^2",
        (0.0, 1.0),
        (0.0, 1.0),
    )
    .line("boundary", "black", curve);
    for (src, color) in [
        ("boundary_signal", "#d62728"),
        ("eta_one_signal", "#1f77b4"),
        ("zero_xi_signal", "#2ca02c"),
        ("random_bandlimited", "#9467bd"),
        ("random_timelimited", "#8c564b"),
        ("input", "#ff7f0e"),
    ] {
        let pts = pick(src);
        if !pts.is_empty() {
            plot = plot.markers(src, color, pts);
        }
    }
    plot
}
