use crate::error::{io_err, CliError, CliResult};
use qpswf::GridAxis;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Run parameters shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "W")]
    pub w: f64,
    pub grid_halfwidth: f64,
    pub grid_n: usize,
    pub quad_n: usize,
    pub basis_count: usize,
    pub tol: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            t: 1.0,
            w: 4.0,
            grid_halfwidth: 4.0,
            grid_n: 257,
            quad_n: 256,
            basis_count: 36,
            tol: 1e-6,
            seed: 0,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::input("config.parse", format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |field: &str, detail: String| Err(CliError::input(format!("config.{field}"), detail));
        if !(self.t.is_finite() && self.t > 0.0) {
            return bad("T", format!("T must be positive, got {}", self.t));
        }
        if !(self.w.is_finite() && self.w > 0.0) {
            return bad("W", format!("W must be positive, got {}", self.w));
        }
        if !(self.grid_halfwidth.is_finite() && self.grid_halfwidth >= 3.0 * self.t) {
            return bad(
                "grid_halfwidth",
                format!(
                    "grid_halfwidth must be >= 3T = {}, got {}",
                    3.0 * self.t,
                    self.grid_halfwidth
                ),
            );
        }
        if self.grid_n < 3 || self.grid_n % 2 == 0 {
            return bad(
                "grid_n",
                format!(
                    "grid_n must be odd and >= 3 so the origin is a node, got {}",
                    self.grid_n
                ),
            );
        }
        if self.basis_count == 0 {
            return bad("basis_count", "basis_count must be >= 1".into());
        }
        if self.quad_n < 2 * self.basis_count {
            return bad(
                "quad_n",
                format!(
                    "quad_n must be >= 2*basis_count = {}, got {}",
                    2 * self.basis_count,
                    self.quad_n
                ),
            );
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return bad("tol", format!("tol must be positive, got {}", self.tol));
        }
        let nyquist = self.axis()?.dual().end();
        if self.w > nyquist {
            return bad(
                "W",
                format!("W = {} exceeds the grid frequency window {nyquist}", self.w),
            );
        }
        Ok(())
    }

    /// Sampling axis `[-grid_halfwidth, grid_halfwidth]` with `grid_n` nodes.
    pub fn axis(&self) -> CliResult<GridAxis> {
        GridAxis::symmetric(self.grid_halfwidth, self.grid_n).map_err(|e| CliError::input("config.grid", e.to_string()))
    }
}
