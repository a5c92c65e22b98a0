use super::basis1d::{composite_gauss, gauss_legendre, i_power, Kernel, ProlateBasis1D, EIGEN_FLOOR};
use super::basis2d::{combine, eval_factor, BasisSet2D, Expansion, FactorTable};
use crate::error::{Error, Result};
use crate::grid::{inner_product, Region};
use crate::quat::Quaternion;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Quadrature on `[-T, T]` independent of the one that built the basis.
/// Grid bases are verified against their own discrete operator.
fn check_rule(basis: &ProlateBasis1D) -> Result<(Vec<f64>, Vec<f64>)> {
    match basis.kernel {
        Kernel::Sinc { .. } => gauss_legendre(basis.t, basis.nodes.len() + 31),
        Kernel::Periodic { .. } => Ok((basis.nodes.clone(), basis.weights.clone())),
    }
}

/// Evaluation points on `[-T, T]` with weights for residual norms.
fn eval_rule(basis: &ProlateBasis1D, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    match basis.kernel {
        Kernel::Sinc { .. } => gauss_legendre(basis.t, n),
        Kernel::Periodic { .. } => Ok((basis.nodes.clone(), basis.weights.clone())),
    }
}

/// `(K f)(x) = Σ_j w_j k(x − s_j) f(s_j)`.
fn apply_kernel(kernel: &Kernel, xs: &[f64], nodes: &[f64], weights: &[f64], f: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            nodes
                .iter()
                .zip(weights)
                .zip(f)
                .map(|((&s, &w), &v)| w * kernel.eval(x - s) * v)
                .sum()
        })
        .collect()
}

fn weighted_norm(values: &[Quaternion], wx: &[f64], wy: &[f64]) -> f64 {
    let ny = wy.len();
    let mut acc = 0.0;
    for (ix, &a) in wx.iter().enumerate() {
        let row: f64 = values[ix * ny..(ix + 1) * ny]
            .iter()
            .zip(wy)
            .map(|(q, &b)| q.norm_sqr() * b)
            .sum();
        acc += a * row;
    }
    acc.sqrt()
}

/// Relative residual `‖λψ − ∫_T k(x−s)k(y−t)ψ(s,t)‖ / ‖λψ‖` on `T`.
///
/// The operator is applied by quadrature on a rule independent of the basis
/// nodes, to the expansion evaluated through the extension formula.
pub fn verify_lowpass(basis: &ProlateBasis1D, psi: &Expansion, lambda: f64) -> Result<f64> {
    let (ex, ew) = eval_rule(basis, 40)?;
    let (qx, qw) = check_rule(basis)?;
    let mut f_eval: FactorTable = BTreeMap::new();
    let mut kf_eval: FactorTable = BTreeMap::new();
    for t in &psi.terms {
        for key in [(t.m, t.flip_x), (t.n, t.flip_y)] {
            if f_eval.contains_key(&key) {
                continue;
            }
            let on_rule = eval_factor(basis, key.0, key.1, &qx)?;
            kf_eval.insert(key, apply_kernel(&basis.kernel, &ex, &qx, &qw, &on_rule));
            f_eval.insert(key, eval_factor(basis, key.0, key.1, &ex)?);
        }
    }
    let n = ex.len();
    let psi_v = combine(&psi.terms, &f_eval, &f_eval, n, n);
    let kpsi = combine(&psi.terms, &kf_eval, &kf_eval, n, n);
    let diff: Vec<Quaternion> = psi_v.iter().zip(&kpsi).map(|(&a, &b)| a * lambda - b).collect();
    let den = weighted_norm(&psi_v, &ew, &ew) * lambda.abs();
    if den == 0.0 {
        return Err(Error::ZeroSignal);
    }
    Ok(weighted_norm(&diff, &ew, &ew) / den)
}

/// Finite-Fourier eigen-form check of one tensor element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteQftCheck {
    /// Relative misfit of `∫_T e^{iγsx} ψ e^{jγty} = μ_x μ_y i^m ψ j^n`.
    pub residual: f64,
    pub mu_x: Complex64,
    pub mu_y: Complex64,
    /// Relative misfit of `λ_m λ_n = γ² |μ_x μ_y|² / (2π)²`.
    pub relation_residual: f64,
}

fn embed_i(z: Complex64) -> Quaternion {
    Quaternion::new(z.re, z.im, 0.0, 0.0)
}

fn embed_j(z: Complex64) -> Quaternion {
    Quaternion::new(z.re, 0.0, z.im, 0.0)
}

/// Evaluates `∫_T e^{iγsx} coeff φ_m(s) φ_n(t) e^{jγty} ds dt` with `γ = W/T`
/// and fits the per-axis multipliers.
pub fn verify_finite_qft(basis: &ProlateBasis1D, m: usize, n: usize, coeff: Quaternion) -> Result<FiniteQftCheck> {
    let (ex, ew) = eval_rule(basis, 24)?;
    let gamma = basis.fourier_scale();
    let transform = |k: usize| -> Vec<Complex64> {
        let phi = &basis.eigvecs[k];
        ex.iter()
            .map(|&x| {
                basis
                    .nodes
                    .iter()
                    .zip(&basis.weights)
                    .zip(phi)
                    .map(|((&s, &w), &v)| Complex64::from_polar(w * v, gamma * s * x))
                    .sum()
            })
            .collect()
    };
    let fit = |k: usize, a: &[Complex64], phi: &[f64]| -> Complex64 {
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for e in 0..ex.len() {
            num += i_power(k).conj() * a[e] * (ew[e] * phi[e]);
            den += ew[e] * phi[e] * phi[e];
        }
        num / den
    };
    let (am, an) = (transform(m), transform(n));
    let (pm, pn) = (basis.extend_many(m, &ex)?, basis.extend_many(n, &ex)?);
    let (mu_x, mu_y) = (fit(m, &am, &pm), fit(n, &an, &pn));
    let lhs_x = embed_i(mu_x * i_power(m));
    let rhs_y = embed_j(mu_y * i_power(n));
    let ne = ex.len();
    let mut got = Vec::with_capacity(ne * ne);
    let mut diff = Vec::with_capacity(ne * ne);
    for a in 0..ne {
        for b in 0..ne {
            let q = embed_i(am[a]) * coeff * embed_j(an[b]);
            let want = lhs_x * coeff * rhs_y * (pm[a] * pn[b]);
            got.push(q);
            diff.push(q - want);
        }
    }
    let residual = weighted_norm(&diff, &ew, &ew) / weighted_norm(&got, &ew, &ew);
    let l2 = basis.eigvals[m] * basis.eigvals[n];
    let predicted = gamma * gamma * mu_x.norm_sqr() * mu_y.norm_sqr() / (4.0 * PI * PI);
    Ok(FiniteQftCheck {
        residual,
        mu_x,
        mu_y,
        relation_residual: (l2 - predicted).abs() / l2,
    })
}

/// All-pass check on a finite window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllpassCheck {
    /// `‖ψ − ∫_window k k ψ‖ / ‖ψ‖` over the window.
    pub residual: f64,
    /// Energy of `ψ` outside the window (`ψ` has unit norm on the plane).
    pub tail: f64,
    /// Part of the residual not explained by the tail: the truncated integral
    /// differs from `ψ` by `B(χ_out ψ)`, whose norm is at most `√tail`.
    pub excess: f64,
}

/// `ψ = coeff φ_m(x) φ_n(y)` against its band-limited convolution truncated to
/// `[-L, L]²`. Grid bases use their whole periodic grid as the window.
pub fn verify_allpass(basis: &ProlateBasis1D, m: usize, n: usize, window: f64) -> Result<AllpassCheck> {
    let (xs, ws) = match (basis.kernel, basis.grid) {
        (Kernel::Periodic { .. }, Some(axis)) => (axis.coords(), vec![axis.step; axis.count]),
        _ => {
            let width = (4.0 / basis.kernel.effective_band()).min(0.5);
            composite_gauss(window, width, 16)?
        }
    };
    let factor = |k: usize| -> Result<(Vec<f64>, Vec<f64>, f64)> {
        let f = basis.extend_many(k, &xs)?;
        let kf = apply_kernel(&basis.kernel, &xs, &xs, &ws, &f);
        let e = f.iter().zip(&ws).map(|(v, w)| w * v * v).sum();
        Ok((f, kf, e))
    };
    let (fm, km, em) = factor(m)?;
    let (fn_, kn, en) = if n == m {
        (fm.clone(), km.clone(), em)
    } else {
        factor(n)?
    };
    let mut num = 0.0;
    for (a, wa) in ws.iter().enumerate() {
        let row: f64 = (0..xs.len())
            .map(|b| {
                let d = fm[a] * fn_[b] - km[a] * kn[b];
                ws[b] * d * d
            })
            .sum();
        num += wa * row;
    }
    let inside = em * en;
    let residual = (num / inside).sqrt();
    let tail = (1.0 - inside).max(0.0);
    let excess = (residual - (tail / (1.0 - tail)).sqrt()).max(0.0);
    Ok(AllpassCheck { residual, tail, excess })
}

/// Which integration domain a Gram matrix is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramDomain {
    /// `[-T, T]` (per axis).
    Time,
    /// The whole line (per axis).
    Plane,
}

fn check_count(basis: &ProlateBasis1D, count: usize) -> Result<()> {
    if count > basis.len() {
        return Err(Error::BadIndex(count - 1));
    }
    if let Some(k) = (0..count).find(|&k| basis.eigvals[k] < EIGEN_FLOOR) {
        return Err(Error::EigenvalueTooSmall {
            k,
            lambda: basis.eigvals[k],
        });
    }
    Ok(())
}

/// `∫_{-T}^{T} φ_k φ_l` on an independent rule.
pub fn time_gram_1d(basis: &ProlateBasis1D, count: usize) -> Result<Vec<Vec<f64>>> {
    check_count(basis, count)?;
    let (xs, ws) = check_rule(basis)?;
    let vals: Vec<Vec<f64>> = (0..count).map(|k| basis.extend_many(k, &xs)).collect::<Result<_>>()?;
    Ok(gram_of(&vals, &ws))
}

/// `∫_ℝ φ_k φ_l`. For the sinc kernel this uses the spectrum
/// `φ̂_k = λ_k⁻¹ 1_{[-W,W]} (χ_T φ_k)^` integrated over `[-W, W]`; grid bases
/// sum over their periodic grid.
pub fn plane_gram_1d(basis: &ProlateBasis1D, count: usize) -> Result<Vec<Vec<f64>>> {
    check_count(basis, count)?;
    match (basis.kernel, basis.grid) {
        (Kernel::Periodic { .. }, Some(axis)) => {
            let xs = axis.coords();
            let vals: Vec<Vec<f64>> = (0..count).map(|k| basis.extend_many(k, &xs)).collect::<Result<_>>()?;
            Ok(gram_of(&vals, &vec![axis.step; axis.count]))
        }
        _ => {
            let band = basis.kernel.effective_band();
            let (us, wu) = gauss_legendre(band, basis.nodes.len().max(64))?;
            let spectra: Vec<Vec<Complex64>> = (0..count)
                .map(|k| {
                    let phi = &basis.eigvecs[k];
                    let scale = 1.0 / (basis.eigvals[k] * (2.0 * PI).sqrt());
                    us.iter()
                        .map(|&u| {
                            let s: Complex64 = basis
                                .nodes
                                .iter()
                                .zip(&basis.weights)
                                .zip(phi)
                                .map(|((&s, &w), &v)| Complex64::from_polar(w * v, -u * s))
                                .sum();
                            s * scale
                        })
                        .collect()
                })
                .collect();
            let mut g = vec![vec![0.0; count]; count];
            for k in 0..count {
                for l in k..count {
                    let v: f64 = (0..us.len())
                        .map(|e| wu[e] * (spectra[k][e].conj() * spectra[l][e]).re)
                        .sum();
                    g[k][l] = v;
                    g[l][k] = v;
                }
            }
            Ok(g)
        }
    }
}

fn gram_of(vals: &[Vec<f64>], ws: &[f64]) -> Vec<Vec<f64>> {
    let n = vals.len();
    let mut g = vec![vec![0.0; n]; n];
    for k in 0..n {
        for l in k..n {
            let v: f64 = vals[k].iter().zip(&vals[l]).zip(ws).map(|((a, b), w)| w * a * b).sum();
            g[k][l] = v;
            g[l][k] = v;
        }
    }
    g
}

/// Gram matrix of the 2D basis from the 1D Grams:
/// `<ψ_p, ψ_q> = coeff_p conj(coeff_q) G[m_p][m_q] G[n_p][n_q]`.
pub fn gram_tensor(set: &BasisSet2D, domain: GramDomain) -> Result<Vec<Vec<Quaternion>>> {
    let k = set.items.iter().map(|p| p.m.max(p.n) + 1).max().unwrap_or(0);
    let g1 = match domain {
        GramDomain::Time => time_gram_1d(&set.basis1d, k)?,
        GramDomain::Plane => plane_gram_1d(&set.basis1d, k)?,
    };
    Ok(set
        .items
        .iter()
        .map(|p| {
            set.items
                .iter()
                .map(|q| p.coeff * q.coeff.conj() * (g1[p.m][q.m] * g1[p.n][q.n]))
                .collect()
        })
        .collect())
}

/// Gram matrix of the sampled basis over `region` of the sampling grid.
pub fn gram_matrix(set: &BasisSet2D, region: Region) -> Result<Vec<Vec<Quaternion>>> {
    set.items
        .par_iter()
        .map(|p| {
            set.items
                .iter()
                .map(|q| inner_product(&p.values, &q.values, region))
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}
