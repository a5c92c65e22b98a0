use crate::error::{io_err, CliError, CliResult, EXIT_NOT_CONVERGED};
use crate::output::{ensure_dir, num, read_json, resolve, write_json, write_text};
use crate::svg::Plot;
use qpswf::extrapolate::{pg_run, ExtrapolationProblem};
use qpswf::QSignal;
use serde::{Deserialize, Serialize};
use std::fmt::Write;
use std::path::{Path, PathBuf};

/// Problem file; paths are relative to the file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub d: f64,
    #[serde(rename = "W")]
    pub w: f64,
    pub max_steps: usize,
    pub stop_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth_file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub converged: bool,
    pub steps: usize,
    pub final_delta: f64,
    pub effective_band: f64,
    pub final_energy_error: Option<f64>,
    pub initial_energy: Option<f64>,
}

fn load(path: &Path) -> CliResult<QSignal> {
    if !path.is_file() {
        return Err(io_err(path, "file not found"));
    }
    Ok(QSignal::load(path)?)
}

/// Writes `final.qgrd`, `trace.csv`, `trace.svg` and `summary.json`; fails with
/// exit 5 after writing them when the run stops at `max_steps`.
pub fn run(observation: &Path, problem: &Path, out: &Path) -> CliResult<Summary> {
    let spec: ProblemSpec = read_json(problem, "problem.parse")?;
    if !(spec.d > 0.0 && spec.w > 0.0 && spec.stop_tol >= 0.0) || spec.max_steps == 0 {
        return Err(CliError::input(
            "problem",
            "need d > 0, W > 0, stop_tol >= 0, max_steps >= 1",
        ));
    }
    let obs = load(observation)?;
    let truth = match &spec.truth_file {
        Some(p) => Some(load(&resolve(problem.parent().unwrap_or(Path::new(".")), p))?),
        None => None,
    };
    let initial_energy = truth.as_ref().map(|f| f.norm().powi(2));
    let prob = ExtrapolationProblem::new(obs, spec.d, spec.w, truth)?;
    let trace = pg_run(&prob, spec.max_steps, spec.stop_tol)?;

    ensure_dir(out)?;
    let path = out.join("final.qgrd");
    trace.final_iterate.save(&path).map_err(|e| io_err(&path, e))?;
    let mut csv = String::from("n,E_n,sup_e,bound,delta\n");
    for s in &trace.steps {
        let _ = writeln!(
            csv,
            "{},{},{},{},{:e}",
            s.n,
            num(s.energy_error),
            num(s.sup_error),
            num(s.bound),
            s.delta
        );
    }
    write_text(&out.join("trace.csv"), &csv)?;
    write_text(&out.join("trace.svg"), &trace_plot(&trace.steps).render())?;
    let last = trace.steps.last().expect("at least one step");
    let summary = Summary {
        converged: trace.converged,
        steps: trace.steps.len(),
        final_delta: last.delta,
        effective_band: trace.effective_band,
        final_energy_error: last.energy_error,
        initial_energy,
    };
    write_json(&out.join("summary.json"), &summary)?;
    if !trace.converged {
        return Err(CliError::new(
            EXIT_NOT_CONVERGED,
            "extrapolate_converged",
            format!(
                "no convergence after {} steps, delta = {:e} >= stop_tol {:e}",
                summary.steps, last.delta, spec.stop_tol
            ),
        ));
    }
    Ok(summary)
}

fn trace_plot(steps: &[qpswf::extrapolate::StepRecord]) -> Plot {
    let lg = |v: f64| if v > 0.0 { v.log10() } else { f64::NAN };
    let series = |f: &dyn Fn(&qpswf::extrapolate::StepRecord) -> Option<f64>| -> Vec<(f64, f64)> {
        steps.iter().filter_map(|s| f(s).map(|v| (s.n as f64, lg(v)))).collect()
    };
    let delta = series(&|s| Some(s.delta));
    let energy = series(&|s| s.energy_error);
    let sup = series(&|s| s.sup_error);
    let bound = series(&|s| s.bound);
    let ys: Vec<f64> = [&delta, &energy, &sup, &bound]
        .iter()
        .flat_map(|v| v.iter().map(|p| p.1))
        .filter(|y| y.is_finite())
        .collect();
    let lo = ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo.is_finite() {
        (lo.floor(), hi.ceil().max(lo.floor() + 1.0))
    } else {
        (-1.0, 0.0)
    };
    let mut plot = Plot::new(
        "Extrapolation trace",
        "iteration n",
        "log10",
        (0.0, steps.len().max(1) as f64),
        (lo, hi),
    )
    .line("delta", "#1f77b4", delta);
    for (label, color, pts) in [
        ("E_n", "#d62728", energy),
        ("sup error", "#2ca02c", sup),
        ("bound", "#9467bd", bound),
    ] {
        if !pts.is_empty() {
            plot = plot.line(label, color, pts);
        }
    }
    plot
}
