use crate::basis::{solve_1d, Manifest, MANIFEST};
use crate::config::RunConfig;
use crate::error::{io_err, CliError, CliResult, EXIT_RESIDUAL};
use crate::output::{read_json, write_json};
use qpswf::prolate::{
    build_qpswf_basis, gram_tensor, verify_allpass, verify_finite_qft, verify_lowpass, Expansion, GramDomain,
};
use qpswf::{GridAxis, QSignal, Quaternion};
use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub tol: f64,
    pub elements: usize,
    /// Half-width of the all-pass window.
    pub allpass_window: f64,
    /// Largest raw all-pass residual, including the part due to energy outside the window.
    pub allpass_raw_residual: f64,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

pub const REPORT: &str = "verify_report.json";

#[derive(Default, Clone, Copy)]
struct Row {
    lowpass: f64,
    finite_qft: f64,
    relation: f64,
    mu: f64,
    lambda: f64,
    allpass: f64,
    allpass_raw: f64,
    samples: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Recomputes every manifest element and checks it against the manifest and its file.
pub fn run(cfg: &RunConfig, manifest_path: &Path, out: &Path) -> CliResult<VerifyReport> {
    if !manifest_path.is_file() {
        return Err(io_err(manifest_path, "manifest not found"));
    }
    let manifest: Manifest = read_json(manifest_path, "manifest.parse")?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    if manifest.entries.is_empty() {
        return Err(CliError::input("manifest.entries", "manifest lists no elements"));
    }
    let coeff = Quaternion::from_array(manifest.coeff);
    let ax = GridAxis::symmetric(manifest.grid.halfwidth, manifest.grid.n)
        .map_err(|e| CliError::input("manifest.grid", e.to_string()))?;
    let b = solve_1d(manifest.t, manifest.w, manifest.quad_n, manifest.count1d)?;
    let window = 4.0 * manifest.t;

    let rows: Vec<Row> = manifest
        .entries
        .par_iter()
        .map(|e| -> CliResult<Row> {
            let path = dir.join(&e.file);
            if !path.is_file() {
                return Err(io_err(&path, "element file not found"));
            }
            let stored = QSignal::load(&path)?;
            let psi = Expansion::single(e.m, e.n, coeff);
            let fresh = psi.sample(&b, ax, ax)?;
            stored.check_same_grid(&fresh)?;
            let fq = verify_finite_qft(&b, e.m, e.n, coeff)?;
            let ap = verify_allpass(&b, e.m, e.n, window)?;
            let mu = [(fq.mu_x, e.mu_x), (fq.mu_y, e.mu_y)]
                .iter()
                .map(|(z, s)| (z - num_complex(*s)).norm() / z.norm())
                .fold(0.0, f64::max);
            Ok(Row {
                lowpass: verify_lowpass(&b, &psi, e.lambda2d)?,
                finite_qft: fq.residual,
                relation: fq.relation_residual,
                mu,
                lambda: rel(e.lambda2d, b.eigvals[e.m] * b.eigvals[e.n]),
                allpass: ap.excess,
                allpass_raw: ap.residual,
                samples: stored.max_abs_diff(&fresh),
            })
        })
        .collect::<CliResult<_>>()?;

    let set = build_qpswf_basis(&b, manifest.entries.len(), coeff, ax, ax)?;
    let same_order = set.items.len() == manifest.entries.len()
        && set
            .items
            .iter()
            .zip(&manifest.entries)
            .all(|(p, e)| (p.m, p.n) == (e.m, e.n));
    let (time, plane) = if same_order {
        let lambdas = set.lambdas();
        let dev = |g: Vec<Vec<Quaternion>>, diag: &dyn Fn(usize) -> f64| -> f64 {
            let mut worst: f64 = 0.0;
            for (p, row) in g.iter().enumerate() {
                for (q, v) in row.iter().enumerate() {
                    let want = if p == q {
                        Quaternion::real(diag(p))
                    } else {
                        Quaternion::ZERO
                    };
                    worst = worst.max(v.max_abs_diff(want));
                }
            }
            worst
        };
        (
            dev(gram_tensor(&set, GramDomain::Time)?, &|p| lambdas[p]),
            dev(gram_tensor(&set, GramDomain::Plane)?, &|_| 1.0),
        )
    } else {
        (f64::INFINITY, f64::INFINITY)
    };

    let max = |f: fn(&Row) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let tol = cfg.tol;
    let checks: Vec<CheckResult> = [
        ("verify_lowpass", max(|r| r.lowpass)),
        ("verify_finite_qft", max(|r| r.finite_qft)),
        ("finite_qft_relation", max(|r| r.relation)),
        ("manifest_mu", max(|r| r.mu)),
        ("manifest_lambda", max(|r| r.lambda)),
        ("verify_allpass", max(|r| r.allpass)),
        ("gram_time", time),
        ("gram_plane", plane),
        ("element_samples", max(|r| r.samples)),
    ]
    .into_iter()
    .map(|(name, v)| CheckResult {
        name: name.into(),
        max_residual: v,
        passed: v <= tol,
    })
    .collect();
    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport {
        tol,
        elements: rows.len(),
        allpass_window: window,
        allpass_raw_residual: max(|r| r.allpass_raw),
        checks,
        passed,
    };
    crate::output::ensure_dir(out)?;
    write_json(&out.join(REPORT), &report)?;
    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
        return Err(CliError::new(
            EXIT_RESIDUAL,
            c.name.clone(),
            format!("max residual {:e} exceeds tol {:e}", c.max_residual, tol),
        ));
    }
    Ok(report)
}

fn num_complex(z: [f64; 2]) -> qpswf::Complex64 {
    qpswf::Complex64::new(z[0], z[1])
}

pub fn default_manifest(out: &Path) -> std::path::PathBuf {
    out.join(MANIFEST)
}
