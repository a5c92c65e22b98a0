use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{ensure_dir, write_json, write_text};
use qpswf::prolate::{build_qpswf_basis, eig_prolate_1d, ProlateBasis1D};
use qpswf::Quaternion;
use serde::{Deserialize, Serialize};
use std::fmt::Write;
use std::path::Path;

/// Unit coefficient `(1 + i + j + k)/2` attached to every written element.
pub const ELEMENT_COEFF: Quaternion = Quaternion::half_ones();

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub halfwidth: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub index: usize,
    pub m: usize,
    pub n: usize,
    pub lambda2d: f64,
    pub mu_x: [f64; 2],
    pub mu_y: [f64; 2],
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "W")]
    pub w: f64,
    pub c: f64,
    /// Gauss nodes of the Nyström rule.
    #[serde(rename = "N")]
    pub quad_n: usize,
    /// 1D eigenpairs computed.
    pub count1d: usize,
    pub grid: GridSpec,
    pub coeff: [f64; 4],
    pub entries: Vec<ManifestEntry>,
}

pub const MANIFEST: &str = "manifest.json";

pub fn solve_1d(t: f64, w: f64, quad_n: usize, count1d: usize) -> CliResult<ProlateBasis1D> {
    eig_prolate_1d(t, w, quad_n, count1d).map_err(|e| match e {
        qpswf::Error::BadParameters(d) => CliError::input("config", d),
        other => CliError::new(crate::error::EXIT_EIGEN, "eigensolver", other.to_string()),
    })
}

/// Writes `manifest.json`, `eigenvalues.csv` and one QGRID file per element.
pub fn run(cfg: &RunConfig, out: &Path) -> CliResult<Manifest> {
    let ax = cfg.axis()?;
    let count1d = cfg.basis_count.min(cfg.quad_n);
    let b = solve_1d(cfg.t, cfg.w, cfg.quad_n, count1d)?;
    let set = build_qpswf_basis(&b, cfg.basis_count, ELEMENT_COEFF, ax, ax)?;
    if set.items.is_empty() {
        return Err(CliError::new(
            crate::error::EXIT_EIGEN,
            "eigenvalue_floor",
            "no eigenvalue above the floor",
        ));
    }
    ensure_dir(out)?;
    let mut entries = Vec::with_capacity(set.items.len());
    for (index, item) in set.items.iter().enumerate() {
        let file = format!("psi_{index:03}_{}_{}.qgrd", item.m, item.n);
        let path = out.join(&file);
        item.values.save(&path).map_err(|e| crate::error::io_err(&path, e))?;
        let (mx, my) = (b.mu[item.m], b.mu[item.n]);
        entries.push(ManifestEntry {
            index,
            m: item.m,
            n: item.n,
            lambda2d: item.lambda2d,
            mu_x: [mx.re, mx.im],
            mu_y: [my.re, my.im],
            file,
        });
    }
    let mut csv = String::from("k,lambda\n");
    for k in 0..b.count_above_floor() {
        let _ = writeln!(csv, "{k},{:e}", b.eigvals[k]);
    }
    write_text(&out.join("eigenvalues.csv"), &csv)?;
    let manifest = Manifest {
        t: cfg.t,
        w: cfg.w,
        c: b.c,
        quad_n: cfg.quad_n,
        count1d,
        grid: GridSpec {
            halfwidth: cfg.grid_halfwidth,
            n: cfg.grid_n,
        },
        coeff: ELEMENT_COEFF.to_array(),
        entries,
    };
    write_json(&out.join(MANIFEST), &manifest)?;
    Ok(manifest)
}
