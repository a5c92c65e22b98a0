//! Two-sided quaternionic Fourier transform
//! `F(f)(u,v) = (1/2π) ∫∫ e^{-iux} f(x,y) e^{-jvy} dx dy` and its inverse.
//!
//! Each real component is reduced to two complex transforms
//! `G±(u,v) = Σ e^{σιux} e^{±σιvy} g` from which the cos/sin integrals follow.
//! When the frequency axis is reciprocal to the sample axis
//! (`du·dx·N = 2π`, see [`GridAxis::dual`]) the 1D maps run through an FFT and the
//! discrete transform is unitary; any other axis pair uses a dense map.

use crate::error::{Error, Result};
use crate::grid::{energy, GridAxis, QSignal, Region, ZERO_ENERGY_FLOOR};
use crate::quat::Quaternion;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// QFT of a quaternion signal: the combined spectrum and the four real-component spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumQ {
    pub ax_u: GridAxis,
    pub ax_v: GridAxis,
    /// `F(f₀) + i F(f₁) + F(f₂) j + i F(f₃) j`, u-major.
    pub combined: Vec<Quaternion>,
    /// `F(f_c)` for the real components `f = f₀ + i f₁ + j f₂ + k f₃`.
    pub components: [Vec<Quaternion>; 4],
}

impl SpectrumQ {
    pub fn at(&self, iu: usize, iv: usize) -> Quaternion {
        self.combined[iu * self.ax_v.count + iv]
    }

    /// Combined spectrum as a field on the `(u, v)` grid.
    pub fn combined_signal(&self) -> QSignal {
        QSignal::from_values(self.ax_u, self.ax_v, self.combined.clone()).expect("sizes agree")
    }

    pub fn component_signal(&self, c: usize) -> QSignal {
        QSignal::from_values(self.ax_u, self.ax_v, self.components[c].clone()).expect("sizes agree")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Sign {
    Minus,
    Plus,
}

impl Sign {
    fn flip(self) -> Self {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }
}

/// `out_b = ds · Σ_a e^{σι t_b s_a} in_a` from axis `s` to axis `t`.
enum AxisMap {
    Fft {
        forward: Arc<dyn Fft<f64>>,
        inverse: Arc<dyn Fft<f64>>,
        pre: Vec<Complex64>,
        post: Vec<Complex64>,
    },
    Dense {
        n_in: usize,
        mat: Vec<Complex64>,
    },
}

fn is_reciprocal(s: &GridAxis, t: &GridAxis) -> bool {
    s.count == t.count && (s.step * t.step * s.count as f64 / (2.0 * PI) - 1.0).abs() < 1e-12
}

impl AxisMap {
    fn new(s: &GridAxis, t: &GridAxis, planner: &mut FftPlanner<f64>) -> Self {
        let (s0, ds, t0, dt) = (s.start, s.step, t.start, t.step);
        let cis = |phi: f64| Complex64::from_polar(1.0, phi);
        if is_reciprocal(s, t) {
            let n = s.count;
            let pre = (0..n).map(|a| cis(t0 * a as f64 * ds)).collect();
            let post = (0..n).map(|b| cis(t0 * s0 + b as f64 * dt * s0) * ds).collect();
            AxisMap::Fft {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
                pre,
                post,
            }
        } else {
            let mut mat = Vec::with_capacity(s.count * t.count);
            for b in 0..t.count {
                let tb = t.coord(b);
                mat.extend((0..s.count).map(|a| cis(tb * s.coord(a)) * ds));
            }
            AxisMap::Dense { n_in: s.count, mat }
        }
    }

    fn scratch_len(&self) -> usize {
        match self {
            AxisMap::Fft { forward, inverse, .. } => {
                forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len())
            }
            AxisMap::Dense { .. } => 0,
        }
    }

    fn apply(&self, sign: Sign, input: &[Complex64], out: &mut [Complex64], scratch: &mut [Complex64]) {
        let pick = |z: Complex64| if sign == Sign::Plus { z } else { z.conj() };
        match self {
            AxisMap::Fft {
                forward,
                inverse,
                pre,
                post,
            } => {
                for ((o, &x), &p) in out.iter_mut().zip(input).zip(pre) {
                    *o = x * pick(p);
                }
                let fft = if sign == Sign::Plus { inverse } else { forward };
                let need = fft.get_inplace_scratch_len();
                fft.process_with_scratch(out, &mut scratch[..need]);
                for (o, &p) in out.iter_mut().zip(post) {
                    *o *= pick(p);
                }
            }
            AxisMap::Dense { n_in, mat } => {
                for (b, o) in out.iter_mut().enumerate() {
                    let row = &mat[b * n_in..(b + 1) * n_in];
                    *o = row.iter().zip(input).map(|(&m, &x)| pick(m) * x).sum();
                }
            }
        }
    }
}

struct Plan2D {
    map_x: AxisMap,
    map_y: AxisMap,
    n_in: (usize, usize),
    n_out: (usize, usize),
    symmetric_out: bool,
}

impl Plan2D {
    fn new(in_x: &GridAxis, in_y: &GridAxis, out_x: &GridAxis, out_y: &GridAxis) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            map_x: AxisMap::new(in_x, out_x, &mut planner),
            map_y: AxisMap::new(in_y, out_y, &mut planner),
            n_in: (in_x.count, in_y.count),
            n_out: (out_x.count, out_y.count),
            symmetric_out: [out_x, out_y]
                .iter()
                .all(|a| (a.start + a.end()).abs() <= 1e-12 * a.step),
        }
    }

    /// `Σ_x Σ_y e^{σιux} h e^{σιvy}` of a complex field (u-major).
    fn complex_transform(&self, h: &[Complex64], sign: Sign, flip_v: bool) -> Vec<Complex64> {
        let (nx, ny) = self.n_in;
        let (nu, nv) = self.n_out;
        let zero = Complex64::new(0.0, 0.0);
        let mut scratch = vec![zero; self.map_x.scratch_len().max(self.map_y.scratch_len())];
        // x pass: X[a][iy]
        let mut xt = vec![zero; nu * ny];
        let mut col = vec![zero; nx];
        let mut col_out = vec![zero; nu];
        for iy in 0..ny {
            for ix in 0..nx {
                col[ix] = h[ix * ny + iy];
            }
            self.map_x.apply(sign, &col, &mut col_out, &mut scratch);
            for a in 0..nu {
                xt[a * ny + iy] = col_out[a];
            }
        }
        let sign_v = if flip_v { sign.flip() } else { sign };
        let mut out = vec![zero; nu * nv];
        for a in 0..nu {
            self.map_y.apply(
                sign_v,
                &xt[a * ny..(a + 1) * ny],
                &mut out[a * nv..(a + 1) * nv],
                &mut scratch,
            );
        }
        out
    }

    /// `(1/2π) ∫∫ e^{σιux} g e^{σjvy}` of a real field from `G±(u, v) = Σ e^{σι(ux ± vy)} g`.
    fn from_pm(gp: &[Complex64], gm: &[Complex64], sign: Sign) -> Vec<Quaternion> {
        let s = sign.value();
        let norm = 1.0 / (2.0 * PI);
        gp.iter()
            .zip(gm)
            .map(|(&p, &m)| {
                let c = 0.5 * (p.re + m.re);
                let s12 = 0.5 * (m.re - p.re);
                let s1 = s * 0.5 * (p.im + m.im);
                let s2 = s * 0.5 * (p.im - m.im);
                Quaternion::new(c, s * s1, s * s2, s12) * norm
            })
            .collect()
    }

    fn real_transform(&self, g: &[f64], sign: Sign) -> Vec<Quaternion> {
        let h: Vec<Complex64> = g.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let gp = self.complex_transform(&h, sign, false);
        let gm = self.complex_transform(&h, sign, true);
        Self::from_pm(&gp, &gm, sign)
    }

    /// Two real fields through one complex transform of `g_a + ι g_b`. Needs
    /// output axes symmetric about zero: with `H = G_a + ι G_b`,
    /// `G_a(u,v) = (H(u,v) + conj H(−u,−v))/2`, and for real input
    /// `G∓(u, v) = conj G±(−u, v)`.
    fn real_pair(&self, ga: &[f64], gb: &[f64], sign: Sign) -> [Vec<Quaternion>; 2] {
        let (nu, nv) = self.n_out;
        let h: Vec<Complex64> = ga.iter().zip(gb).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let hp = self.complex_transform(&h, sign, false);
        let split = |k: usize, r: usize| {
            let (x, y) = (hp[k], hp[r].conj());
            ((x + y) * 0.5, Complex64::new(0.0, -0.5) * (x - y))
        };
        let mut pa = vec![Complex64::new(0.0, 0.0); nu * nv];
        let mut pb = pa.clone();
        let mut ma = pa.clone();
        let mut mb = pa.clone();
        for a in 0..nu {
            let ar = nu - 1 - a;
            for b in 0..nv {
                let br = nv - 1 - b;
                let k = a * nv + b;
                let (xa, xb) = split(k, ar * nv + br);
                let (ya, yb) = split(ar * nv + b, a * nv + br);
                pa[k] = xa;
                pb[k] = xb;
                ma[k] = ya.conj();
                mb[k] = yb.conj();
            }
        }
        [Self::from_pm(&pa, &ma, sign), Self::from_pm(&pb, &mb, sign)]
    }

    /// Transforms of the four real component fields.
    fn components(&self, g: [Vec<f64>; 4], sign: Sign) -> [Vec<Quaternion>; 4] {
        if self.symmetric_out {
            let pairs: Vec<[Vec<Quaternion>; 2]> = [(0, 1), (2, 3)]
                .into_par_iter()
                .map(|(a, b)| self.real_pair(&g[a], &g[b], sign))
                .collect();
            let [[c0, c1], [c2, c3]]: [[Vec<Quaternion>; 2]; 2] = pairs.try_into().expect("two pairs");
            [c0, c1, c2, c3]
        } else {
            let v: Vec<Vec<Quaternion>> = g.par_iter().map(|c| self.real_transform(c, sign)).collect();
            v.try_into().expect("four components")
        }
    }
}

/// `a + i b + c j + i d j` for quaternion fields.
fn assemble(parts: &[Vec<Quaternion>; 4]) -> Vec<Quaternion> {
    (0..parts[0].len())
        .map(|n| {
            let (a, b, c, d) = (parts[0][n], parts[1][n], parts[2][n], parts[3][n]);
            // i b = −b₁ + b₀ i − b₃ j + b₂ k; c j = −c₂ − c₃ i + c₀ j + c₁ k; i d j = d₃ − d₂ i − d₁ j + d₀ k
            Quaternion::new(
                a.w - b.x - c.y + d.z,
                a.x + b.w - c.z - d.y,
                a.y - b.z + c.w - d.x,
                a.z + b.y + c.x + d.w,
            )
        })
        .collect()
}

fn check_uniform(f: &QSignal) -> Result<()> {
    let uniform = |w: &[f64], step: f64| w.iter().all(|&x| (x - step).abs() <= 1e-12 * step);
    if !uniform(&f.quad_x, f.ax_x.step) || !uniform(&f.quad_y, f.ax_y.step) {
        return Err(Error::NonUniformGrid(
            "quadrature weights are not the uniform step".into(),
        ));
    }
    Ok(())
}

/// Forward QFT of `f` sampled onto the frequency axes `ax_u`, `ax_v`.
pub fn forward_qft(f: &QSignal, ax_u: GridAxis, ax_v: GridAxis) -> Result<SpectrumQ> {
    check_uniform(f)?;
    let plan = Plan2D::new(&f.ax_x, &f.ax_y, &ax_u, &ax_v);
    let components = plan.components([0, 1, 2, 3].map(|c| f.component(c)), Sign::Minus);
    let combined = assemble(&components);
    Ok(SpectrumQ {
        ax_u,
        ax_v,
        combined,
        components,
    })
}

/// Forward QFT on the reciprocal frequency axes of `f`'s grid.
pub fn forward_qft_dual(f: &QSignal) -> Result<SpectrumQ> {
    forward_qft(f, f.ax_x.dual(), f.ax_y.dual())
}

/// Inverse QFT `(1/2π) ∫∫ e^{iux} S(u,v) e^{jvy} du dv` of the combined spectrum.
pub fn inverse_qft(s: &SpectrumQ, ax_x: GridAxis, ax_y: GridAxis) -> Result<QSignal> {
    let plan = Plan2D::new(&s.ax_u, &s.ax_v, &ax_x, &ax_y);
    let g = [0, 1, 2, 3].map(|c| s.combined.iter().map(|q| q.to_array()[c]).collect::<Vec<f64>>());
    let parts = plan.components(g, Sign::Plus);
    QSignal::from_values(ax_x, ax_y, assemble(&parts))
}

/// Pointwise Q-modulus density `Σ_c |F(f_c)|²`.
pub fn q_modulus_field(s: &SpectrumQ) -> Vec<f64> {
    (0..s.combined.len())
        .map(|n| s.components.iter().map(|c| c[n].norm_sqr()).sum())
        .collect()
}

/// `∫∫ |F(f)|_Q² du dv` over the spectrum grid.
pub fn q_energy(s: &SpectrumQ) -> f64 {
    let nv = s.ax_v.count;
    let dens = q_modulus_field(s);
    let mut acc = 0.0;
    for a in 0..s.ax_u.count {
        acc += dens[a * nv..(a + 1) * nv].iter().sum::<f64>();
    }
    acc * s.ax_u.step * s.ax_v.step
}

/// `|‖f‖² − ∫|F(f)|_Q²| / ‖f‖²` on the reciprocal frequency grid.
pub fn parseval_check(f: &QSignal) -> Result<f64> {
    let e = energy(f, Region::FullGrid)?;
    if e <= ZERO_ENERGY_FLOOR {
        return Err(Error::ZeroSignal);
    }
    let s = forward_qft_dual(f)?;
    Ok((e - q_energy(&s)).abs() / e)
}

/// Left multiplication by `e^{irx}`; shifts the spectrum by `r` along u.
pub fn modulate(f: &QSignal, r: f64) -> QSignal {
    let mut out = f.clone();
    let ny = f.ny();
    for ix in 0..f.nx() {
        let e = Quaternion::exp_i(r * f.ax_x.coord(ix));
        for v in &mut out.values[ix * ny..(ix + 1) * ny] {
            *v = e * *v;
        }
    }
    out
}

/// `sin(W t) / (π t)` with the limit `W/π` at `t = 0`.
#[inline]
pub fn sinc_kernel_1d(t: f64, w: f64) -> f64 {
    if t == 0.0 {
        w / PI
    } else {
        (w * t).sin() / (PI * t)
    }
}

/// Separable band-limiting kernel `k(dx) k(dy)`.
pub fn sinc_bandlimit_kernel(dx: f64, dy: f64, w: f64) -> f64 {
    sinc_kernel_1d(dx, w) * sinc_kernel_1d(dy, w)
}

/// Frequencies with `|u| ≤ W` on an axis of step `du` (shared by the spectral
/// mask and the matching discrete kernel).
#[inline]
pub fn in_band(u: f64, w: f64, du: f64) -> bool {
    u.abs() <= w + 1e-9 * du
}

/// Number of positive multiples of `du` inside `[0, W]`.
pub fn band_half_count(w: f64, du: f64) -> usize {
    (w / du + 1e-9).floor().max(0.0) as usize
}

/// Zero the spectrum (combined and components) outside `[-W, W]²`.
pub fn mask_band(s: &mut SpectrumQ, w: f64) {
    let nv = s.ax_v.count;
    let (du, dv) = (s.ax_u.step, s.ax_v.step);
    for a in 0..s.ax_u.count {
        let ua = in_band(s.ax_u.coord(a), w, du);
        for b in 0..nv {
            if !(ua && in_band(s.ax_v.coord(b), w, dv)) {
                let k = a * nv + b;
                s.combined[k] = Quaternion::ZERO;
                for c in s.components.iter_mut() {
                    c[k] = Quaternion::ZERO;
                }
            }
        }
    }
}

/// `∫∫_{[-W,W]²} |F(f)|_Q² du dv`.
pub fn q_energy_in_band(s: &SpectrumQ, w: f64) -> f64 {
    let nv = s.ax_v.count;
    let dens = q_modulus_field(s);
    let (du, dv) = (s.ax_u.step, s.ax_v.step);
    let mut acc = 0.0;
    for a in 0..s.ax_u.count {
        if !in_band(s.ax_u.coord(a), w, du) {
            continue;
        }
        let mut row = 0.0;
        for b in 0..nv {
            if in_band(s.ax_v.coord(b), w, dv) {
                row += dens[a * nv + b];
            }
        }
        acc += row;
    }
    acc * du * dv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, l: f64) -> GridAxis {
        GridAxis::symmetric(l, n).unwrap()
    }

    /// Direct quadrature of the defining integral at one frequency.
    fn direct(f: &QSignal, u: f64, v: f64) -> Quaternion {
        let mut acc = Quaternion::ZERO;
        for ix in 0..f.nx() {
            for iy in 0..f.ny() {
                let (x, y) = (f.ax_x.coord(ix), f.ax_y.coord(iy));
                acc += Quaternion::exp_i(-u * x)
                    * f.at(ix, iy)
                    * Quaternion::exp_j(-v * y)
                    * (f.quad_x[ix] * f.quad_y[iy]);
            }
        }
        acc / (2.0 * PI)
    }

    fn sample() -> QSignal {
        let a = grid(15, 2.0);
        let b = grid(13, 1.5);
        QSignal::from_fn(a, b, |x, y| {
            Quaternion::new(
                (-(x * x + y * y)).exp(),
                x * (-(x * x)).exp() * (1.0 + y),
                (x - 0.3 * y).sin() * (-(y * y)).exp(),
                (x * y).cos() * (-(x * x)).exp(),
            )
        })
    }

    #[test]
    fn fft_and_dense_paths_match_direct_sum() {
        let f = sample();
        let dual = forward_qft_dual(&f).unwrap();
        let au = GridAxis::new(-2.3, 0.41, 9).unwrap();
        let av = GridAxis::new(-1.1, 0.37, 7).unwrap();
        let dense = forward_qft(&f, au, av).unwrap();
        for (s, iu, iv) in [
            (&dual, 3, 4),
            (&dual, 0, 12),
            (&dual, 14, 0),
            (&dense, 2, 5),
            (&dense, 8, 6),
        ] {
            let d = direct(&f, s.ax_u.coord(iu), s.ax_v.coord(iv));
            assert!(s.at(iu, iv).max_abs_diff(d) < 1e-13, "{:?} vs {:?}", s.at(iu, iv), d);
        }
    }

    #[test]
    fn real_component_uses_cos_sin_form() {
        let a = grid(9, 1.0);
        let f = QSignal::from_fn(a, a, |x, y| Quaternion::real((1.0 + x) * (2.0 - y) * (x * y).cos()));
        let s = forward_qft_dual(&f).unwrap();
        for c in 1..4 {
            assert!(s.components[c].iter().all(|q| q.modulus() < 1e-14), "{c}");
        }
        let (u, v) = (s.ax_u.coord(2), s.ax_v.coord(6));
        let mut cs = [0.0; 4];
        for ix in 0..9 {
            for iy in 0..9 {
                let (x, y) = (a.coord(ix), a.coord(iy));
                let g = f.at(ix, iy).w * a.step * a.step / (2.0 * PI);
                cs[0] += (u * x).cos() * (v * y).cos() * g;
                cs[1] += (u * x).sin() * (v * y).cos() * g;
                cs[2] += (u * x).cos() * (v * y).sin() * g;
                cs[3] += (u * x).sin() * (v * y).sin() * g;
            }
        }
        let want = Quaternion::new(cs[0], -cs[1], -cs[2], cs[3]);
        assert!(s.at(2, 6).max_abs_diff(want) < 1e-14);
        for (a, b) in s.components[0].iter().zip(&s.combined) {
            assert!(a.max_abs_diff(*b) < 1e-14);
        }
    }

    #[test]
    fn inverse_undoes_forward() {
        let f = sample();
        let s = forward_qft_dual(&f).unwrap();
        let g = inverse_qft(&s, f.ax_x, f.ax_y).unwrap();
        assert!(f.max_abs_diff(&g) < 1e-14);
    }

    #[test]
    fn zero_and_linearity() {
        let f = sample();
        let z = forward_qft_dual(&f.scale(0.0)).unwrap();
        assert!(z.combined.iter().all(|q| q.modulus() == 0.0));
        let s1 = forward_qft_dual(&f).unwrap();
        let s3 = forward_qft_dual(&f.scale(-2.5)).unwrap();
        for (a, b) in s1.combined.iter().zip(&s3.combined) {
            assert!((*a * -2.5).max_abs_diff(*b) < 1e-14);
        }
    }

    #[test]
    fn parseval_on_reciprocal_axes() {
        assert!(parseval_check(&sample()).unwrap() < 1e-13);
        assert_eq!(parseval_check(&sample().scale(0.0)), Err(Error::ZeroSignal));
    }

    #[test]
    fn kernel_limits() {
        let w = 2.5;
        assert!((sinc_bandlimit_kernel(0.0, 0.0, w) - (w / PI).powi(2)).abs() < 1e-15);
        assert!(sinc_bandlimit_kernel(PI / w, 0.7, w).abs() < 1e-15);
        assert_eq!(band_half_count(2.0, 0.5), 4);
        assert_eq!(band_half_count(1.99, 0.5), 3);
    }

    #[test]
    fn modulation_keeps_modulus() {
        let f = sample();
        let g = modulate(&f, 1.7);
        for (a, b) in f.values.iter().zip(&g.values) {
            assert!((a.modulus() - b.modulus()).abs() < 1e-15);
        }
        assert_eq!(modulate(&f, 0.0), f);
    }
}
