use crate::error::{io_err, CliResult};
use crate::output::ensure_dir;
use qpswf::qft::{forward_qft_dual, inverse_qft, SpectrumQ};
use qpswf::QSignal;
use std::path::{Path, PathBuf};

/// Forward transform onto the reciprocal axes; writes `<name>.qgrd` (combined
/// spectrum) and `<name>.c0.qgrd` … `<name>.c3.qgrd` (real-component spectra).
pub fn forward(input: &Path, name: &str, out: &Path) -> CliResult<Vec<PathBuf>> {
    let f = load(input)?;
    let s = forward_qft_dual(&f)?;
    ensure_dir(out)?;
    let mut written = vec![save(&s.combined_signal(), &out.join(format!("{name}.qgrd")))?];
    for c in 0..4 {
        written.push(save(&s.component_signal(c), &out.join(format!("{name}.c{c}.qgrd")))?);
    }
    Ok(written)
}

/// Inverse transform of a combined spectrum onto the reciprocal axes.
pub fn inverse(input: &Path, name: &str, out: &Path) -> CliResult<PathBuf> {
    let spec = load(input)?;
    let s = SpectrumQ {
        ax_u: spec.ax_x,
        ax_v: spec.ax_y,
        combined: spec.values.clone(),
        components: Default::default(),
    };
    let f = inverse_qft(&s, spec.ax_x.dual(), spec.ax_y.dual())?;
    ensure_dir(out)?;
    save(&f, &out.join(format!("{name}.qgrd")))
}

fn load(path: &Path) -> CliResult<QSignal> {
    if !path.is_file() {
        return Err(io_err(path, "file not found"));
    }
    Ok(QSignal::load(path)?)
}

fn save(f: &QSignal, path: &Path) -> CliResult<PathBuf> {
    f.save(path).map_err(|e| io_err(path, e))?;
    Ok(path.to_path_buf())
}
