use crate::error::{Error, Result};
use crate::grid::GridAxis;
use crate::qft::{band_half_count, sinc_kernel_1d};
use gauss_quad::GaussLegendre;
use nalgebra::{DMatrix, SymmetricEigen};
use rustfft::num_complex::Complex64;
use std::f64::consts::PI;

/// Eigenvalues below this are treated as numerically zero.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// Real, even convolution kernel of the band-limiting operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `sin(W t) / (π t)`, band `[-W, W]` on the line.
    Sinc { w: f64 },
    /// Band projection on a periodic grid of length `period` with frequency step
    /// `du`: `(1/period)(1 + 2 Σ_{m=1}^{M} cos(m du t))`.
    Periodic { du: f64, half_count: usize, period: f64 },
}

impl Kernel {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Kernel::Sinc { w } => sinc_kernel_1d(t, w),
            Kernel::Periodic { du, half_count, period } => {
                let mut s = 1.0;
                for m in 1..=half_count {
                    s += 2.0 * (m as f64 * du * t).cos();
                }
                s / period
            }
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            Kernel::Sinc { w } => {
                let z = w * t;
                if z.abs() < 1e-3 {
                    -w * w * w * t / (3.0 * PI) * (1.0 - z * z / 10.0)
                } else {
                    (z * z.cos() - z.sin()) / (PI * t * t)
                }
            }
            Kernel::Periodic { du, half_count, period } => {
                let mut s = 0.0;
                for m in 1..=half_count {
                    let f = m as f64 * du;
                    s -= 2.0 * f * (f * t).sin();
                }
                s / period
            }
        }
    }

    /// Half-width of the pass band; for the periodic kernel `(M + ½) du`, the
    /// band whose area equals the number of retained frequencies.
    pub fn effective_band(&self) -> f64 {
        match *self {
            Kernel::Sinc { w } => w,
            Kernel::Periodic { du, half_count, .. } => (half_count as f64 + 0.5) * du,
        }
    }
}

/// Eigenpairs of `∫_{-T}^{T} k(x − s) φ(s) ds = λ φ(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProlateBasis1D {
    pub t: f64,
    pub w: f64,
    /// `T·W`.
    pub c: f64,
    pub kernel: Kernel,
    /// Quadrature nodes on `[-T, T]`.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Descending.
    pub eigvals: Vec<f64>,
    /// `eigvecs[k][p] = φ_k(nodes[p])`, unit norm on the line.
    pub eigvecs: Vec<Vec<f64>>,
    /// Finite-Fourier multipliers: `∫_{-T}^{T} e^{iγsx} φ_k(s) ds = μ_k i^k φ_k(x)`
    /// with `γ = W/T`.
    pub mu: Vec<Complex64>,
    /// Sampling axis for bases built on a periodic grid.
    pub grid: Option<GridAxis>,
}

/// Gauss–Legendre rule on `[-T, T]`.
pub fn gauss_legendre(t: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 2 {
        return Err(Error::BadParameters(format!("Gauss rule needs ≥ 2 nodes, got {n}")));
    }
    let gl = GaussLegendre::new(n.try_into().expect("n ≥ 2"));
    let mut pairs: Vec<(f64, f64)> = gl.iter().map(|(x, w)| (*x * t, *w * t)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // exact mirror symmetry
    for p in 0..n / 2 {
        let q = n - 1 - p;
        let x = 0.5 * (pairs[q].0 - pairs[p].0);
        let w = 0.5 * (pairs[p].1 + pairs[q].1);
        pairs[p] = (-x, w);
        pairs[q] = (x, w);
    }
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
    Ok(pairs.into_iter().unzip())
}

/// Composite Gauss–Legendre rule on `[-L, L]` with panels no wider than `max_width`.
pub fn composite_gauss(l: f64, max_width: f64, per_panel: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let panels = ((2.0 * l / max_width).ceil() as usize).max(1);
    let (x0, w0) = gauss_legendre(1.0, per_panel)?;
    let h = 2.0 * l / panels as f64;
    let mut xs = Vec::with_capacity(panels * per_panel);
    let mut ws = Vec::with_capacity(panels * per_panel);
    for p in 0..panels {
        let mid = -l + (p as f64 + 0.5) * h;
        for (x, w) in x0.iter().zip(&w0) {
            xs.push(mid + 0.5 * h * x);
            ws.push(0.5 * h * w);
        }
    }
    Ok((xs, ws))
}

/// Symmetrised Nyström matrix `√w_p k(x_p − x_q) √w_q`.
pub fn nystrom_matrix(kernel: &Kernel, nodes: &[f64], weights: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let sw: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let mut a = DMatrix::zeros(n, n);
    for p in 0..n {
        for q in p..n {
            let v = sw[p] * kernel.eval(nodes[p] - nodes[q]) * sw[q];
            a[(p, q)] = v;
            a[(q, p)] = v;
        }
    }
    a
}

fn check_tw(t: f64, w: f64) -> Result<()> {
    if !(t > 0.0 && w > 0.0 && t.is_finite() && w.is_finite()) {
        return Err(Error::BadParameters(format!("T = {t} and W = {w} must be positive")));
    }
    Ok(())
}

/// Nyström matrix of the sinc kernel on `n` Gauss–Legendre nodes of `[-T, T]`.
pub fn build_sinc_operator(t: f64, w: f64, n: usize) -> Result<DMatrix<f64>> {
    check_tw(t, w)?;
    if n < 16 {
        return Err(Error::BadParameters(format!("N = {n} < 16")));
    }
    let (nodes, weights) = gauss_legendre(t, n)?;
    Ok(nystrom_matrix(&Kernel::Sinc { w }, &nodes, &weights))
}

/// Leading `count` prolate eigenpairs from an `n`-node Gauss–Legendre discretisation.
pub fn eig_prolate_1d(t: f64, w: f64, n: usize, count: usize) -> Result<ProlateBasis1D> {
    check_tw(t, w)?;
    if n < 16 {
        return Err(Error::BadParameters(format!("N = {n} < 16")));
    }
    let (nodes, weights) = gauss_legendre(t, n)?;
    solve(Kernel::Sinc { w }, nodes, weights, count, t, w, None)
}

/// Leading `count` eigenpairs of the discrete operator `B D B` on a uniform grid,
/// where `D` keeps nodes with `|x| ≤ T` and `B` keeps frequencies `|u| ≤ W` of the
/// reciprocal axis. These are exact eigenvectors of the grid operators used by
/// the concentration and extrapolation modules.
pub fn eig_prolate_grid(axis: &GridAxis, t: f64, w: f64, count: usize) -> Result<ProlateBasis1D> {
    check_tw(t, w)?;
    let mask = axis.mask(t)?;
    let nodes: Vec<f64> = (0..axis.count).filter(|&i| mask[i]).map(|i| axis.coord(i)).collect();
    let weights = vec![axis.step; nodes.len()];
    let du = axis.dual().step;
    let max_u = (axis.count / 2) as f64 * du;
    if w > max_u {
        return Err(Error::WindowTooSmall { w, max: max_u });
    }
    let kernel = Kernel::Periodic {
        du,
        half_count: band_half_count(w, du),
        period: axis.count as f64 * axis.step,
    };
    solve(kernel, nodes, weights, count, t, w, Some(*axis))
}

fn solve(
    kernel: Kernel,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    count: usize,
    t: f64,
    w: f64,
    grid: Option<GridAxis>,
) -> Result<ProlateBasis1D> {
    let n = nodes.len();
    if count == 0 || count > n {
        return Err(Error::BadParameters(format!("count {count} must be in 1..={n}")));
    }
    let a = nystrom_matrix(&kernel, &nodes, &weights);
    let mut pairs = parity_eigenpairs(&a)?;
    if let Kernel::Sinc { w } = kernel {
        separate_clusters(&mut pairs, &kernel, &nodes, &weights, t, w)?;
    }
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let pairs: Vec<(f64, Vec<f64>)> = pairs.into_iter().map(|(l, v, _)| (l, v)).collect();

    let mut eigvals = Vec::with_capacity(count);
    let mut eigvecs = Vec::with_capacity(count);
    for (k, (lambda, v)) in pairs.into_iter().take(count).enumerate() {
        let scale = lambda.max(0.0).sqrt();
        let mut phi: Vec<f64> = (0..n).map(|p| scale * v[p] / weights[p].sqrt()).collect();
        // parity convention: φ_k(0) > 0 for even k, φ'_k(0) > 0 for odd k
        let probe: f64 = if k % 2 == 0 {
            (0..n).map(|q| weights[q] * kernel.eval(-nodes[q]) * phi[q]).sum()
        } else {
            (0..n).map(|q| weights[q] * kernel.derivative(-nodes[q]) * phi[q]).sum()
        };
        if probe * lambda.signum() < 0.0 {
            phi.iter_mut().for_each(|v| *v = -*v);
        }
        eigvals.push(lambda);
        eigvecs.push(phi);
    }

    let gamma = w / t;
    let phase: Vec<Vec<Complex64>> = nodes
        .iter()
        .map(|&x| {
            nodes
                .iter()
                .map(|&s| Complex64::from_polar(1.0, gamma * s * x))
                .collect()
        })
        .collect();
    let mu = eigvecs
        .iter()
        .enumerate()
        .map(|(k, phi)| {
            let ik = i_power(k);
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            for p in 0..n {
                let a: Complex64 = (0..n).map(|q| phase[p][q] * (weights[q] * phi[q])).sum();
                num += ik.conj() * a * (weights[p] * phi[p]);
                den += weights[p] * phi[p] * phi[p];
            }
            if den > 0.0 {
                num / den
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();

    Ok(ProlateBasis1D {
        t,
        w,
        c: t * w,
        kernel,
        nodes,
        weights,
        eigvals,
        eigvecs,
        mu,
        grid,
    })
}

/// Eigenpairs of a matrix that commutes with index reversal (symmetric nodes),
/// solved separately on the even and odd subspaces so every eigenvector has
/// exact parity even when eigenvalues of opposite parity coincide to rounding.
/// Sorted by eigenvalue, descending.
fn parity_eigenpairs(a: &DMatrix<f64>) -> Result<Vec<(f64, Vec<f64>, bool)>> {
    let n = a.nrows();
    let half = n / 2;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let n_even = n - half;
    let mut ue = DMatrix::zeros(n, n_even);
    let mut uo = DMatrix::zeros(n, half);
    for p in 0..half {
        ue[(p, p)] = r;
        ue[(n - 1 - p, p)] = r;
        uo[(p, p)] = r;
        uo[(n - 1 - p, p)] = -r;
    }
    if n % 2 == 1 {
        ue[(half, half)] = 1.0;
    }
    let mut out = Vec::with_capacity(n);
    for (odd, u) in [(false, ue), (true, uo)] {
        if u.ncols() == 0 {
            continue;
        }
        let mut block = u.transpose() * a * &u;
        // restore exact symmetry lost to rounding in the products
        for p in 0..block.nrows() {
            for q in 0..p {
                let m = 0.5 * (block[(p, q)] + block[(q, p)]);
                block[(p, q)] = m;
                block[(q, p)] = m;
            }
        }
        let eig = SymmetricEigen::try_new(block, f64::EPSILON, 100_000).ok_or(Error::ConvergenceFailure)?;
        let vecs = &u * &eig.eigenvectors;
        for (c, &l) in eig.eigenvalues.iter().enumerate() {
            out.push((l, vecs.column(c).iter().copied().collect(), odd));
        }
    }
    out.sort_by(|x, y| y.0.total_cmp(&x.0));
    Ok(out)
}

/// Same-parity eigenvalues closer than this are resolved with the commuting
/// differential operator.
const CLUSTER_GAP: f64 = 1e-7;

/// Eigenvalues of the sinc operator approach 1 geometrically, so for larger `c`
/// several same-parity eigenvalues agree to rounding and the dense solver
/// returns arbitrary rotations within that cluster. The cluster subspace is
/// still accurate; rotating it to diagonalise the differential operator
/// `L = d/dx (T² − x²) d/dx − W² x²`, which commutes with the integral operator
/// on `[-T, T]` and has well-separated eigenvalues, recovers the individual
/// eigenfunctions. Within a cluster the order follows `L` (least negative first).
fn separate_clusters(
    pairs: &mut [(f64, Vec<f64>, bool)],
    kernel: &Kernel,
    nodes: &[f64],
    weights: &[f64],
    t: f64,
    w: f64,
) -> Result<()> {
    let n = nodes.len();
    for parity in [false, true] {
        let idx: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].2 == parity).collect();
        let mut start = 0;
        while start < idx.len() {
            let mut end = start + 1;
            while end < idx.len() && pairs[idx[end - 1]].0 - pairs[idx[end]].0 < CLUSTER_GAP {
                end += 1;
            }
            let members = &idx[start..end];
            start = end;
            if members.len() < 2 || pairs[members[0]].0 < EIGEN_FLOOR {
                continue;
            }
            // node values and derivatives of each member (common scale per member)
            let vals: Vec<Vec<f64>> = members
                .iter()
                .map(|&i| (0..n).map(|p| pairs[i].1[p] / weights[p].sqrt()).collect())
                .collect();
            let ders: Vec<Vec<f64>> = members
                .iter()
                .zip(&vals)
                .map(|(&i, f)| {
                    let lambda = pairs[i].0;
                    nodes
                        .iter()
                        .map(|&x| {
                            (0..n)
                                .map(|q| weights[q] * kernel.derivative(x - nodes[q]) * f[q])
                                .sum::<f64>()
                                / lambda
                        })
                        .collect()
                })
                .collect();
            let m = members.len();
            let form = DMatrix::from_fn(m, m, |a, b| {
                -(0..n)
                    .map(|p| {
                        let x = nodes[p];
                        weights[p]
                            * ((t * t - x * x) * ders[a][p] * ders[b][p] + w * w * x * x * vals[a][p] * vals[b][p])
                    })
                    .sum::<f64>()
            });
            let form = 0.5 * (&form + form.transpose());
            let eig = SymmetricEigen::try_new(form, f64::EPSILON, 100_000).ok_or(Error::ConvergenceFailure)?;
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
            let old: Vec<Vec<f64>> = members.iter().map(|&i| pairs[i].1.clone()).collect();
            let lambdas: Vec<f64> = members.iter().map(|&i| pairs[i].0).collect();
            for (slot, &col) in order.iter().enumerate() {
                let mut v = vec![0.0; n];
                for (a, o) in old.iter().enumerate() {
                    let r = eig.eigenvectors[(a, col)];
                    for (vp, op) in v.iter_mut().zip(o) {
                        *vp += r * op;
                    }
                }
                let target = members[slot];
                pairs[target].0 = lambdas[slot];
                pairs[target].1 = v;
            }
        }
    }
    Ok(())
}

/// `i^k` as a complex number.
pub fn i_power(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl ProlateBasis1D {
    pub fn len(&self) -> usize {
        self.eigvals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigvals.is_empty()
    }

    /// Scale `γ = W/T` of the finite Fourier transform `∫_{-T}^{T} e^{iγsx} φ(s) ds`.
    pub fn fourier_scale(&self) -> f64 {
        self.w / self.t
    }

    /// Number of leading eigenvalues at or above [`EIGEN_FLOOR`].
    pub fn count_above_floor(&self) -> usize {
        self.eigvals.iter().take_while(|&&l| l >= EIGEN_FLOOR).count()
    }

    fn check_index(&self, k: usize) -> Result<f64> {
        let lambda = *self.eigvals.get(k).ok_or(Error::BadIndex(k))?;
        if lambda < EIGEN_FLOOR {
            return Err(Error::EigenvalueTooSmall { k, lambda });
        }
        Ok(lambda)
    }

    /// `φ_k(x) = λ_k⁻¹ ∫_{-T}^{T} k(x − s) φ_k(s) ds`, valid for any `x`.
    pub fn extend(&self, k: usize, x: f64) -> Result<f64> {
        let lambda = self.check_index(k)?;
        Ok(self.raw_extend(k, x) / lambda)
    }

    fn raw_extend(&self, k: usize, x: f64) -> f64 {
        let phi = &self.eigvecs[k];
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(phi)
            .map(|((&s, &w), &v)| w * self.kernel.eval(x - s) * v)
            .sum()
    }

    pub fn extend_many(&self, k: usize, xs: &[f64]) -> Result<Vec<f64>> {
        let lambda = self.check_index(k)?;
        Ok(xs.iter().map(|&x| self.raw_extend(k, x) / lambda).collect())
    }

    /// `φ'_k(x)` from the differentiated extension formula.
    pub fn extend_derivative(&self, k: usize, x: f64) -> Result<f64> {
        let lambda = self.check_index(k)?;
        let phi = &self.eigvecs[k];
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(phi)
            .map(|((&s, &w), &v)| w * self.kernel.derivative(x - s) * v)
            .sum();
        Ok(s / lambda)
    }
}

/// Free-function form of [`ProlateBasis1D::extend`].
pub fn extend_eigenfunction(basis: &ProlateBasis1D, k: usize, x: f64) -> Result<f64> {
    basis.extend(k, x)
}
