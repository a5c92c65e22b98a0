//! Uniform sampling axes, sampled quaternion fields and their inner products.

use crate::error::{Error, Result};
use crate::quat::Quaternion;
use std::f64::consts::PI;

/// Uniform axis `start + n·step`, `n ∈ [0, count)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(start.is_finite() && step.is_finite() && step > 0.0) {
            return Err(Error::NonUniformGrid(format!("start {start}, step {step}")));
        }
        if count < 2 {
            return Err(Error::NonUniformGrid(format!("count {count} < 2")));
        }
        Ok(Self { start, step, count })
    }

    /// `count` nodes spanning `[-halfwidth, halfwidth]`.
    pub fn symmetric(halfwidth: f64, count: usize) -> Result<Self> {
        if halfwidth.is_nan() || halfwidth <= 0.0 {
            return Err(Error::BadParameters(format!("halfwidth {halfwidth} must be > 0")));
        }
        if count < 2 {
            return Err(Error::NonUniformGrid(format!("count {count} < 2")));
        }
        Self::new(-halfwidth, 2.0 * halfwidth / (count - 1) as f64, count)
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.coord(self.count - 1)
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.coord(i)).collect()
    }

    /// Frequency axis reciprocal to this one: same count, step `2π/(count·step)`,
    /// centred on zero. With this axis the discrete transform is unitary.
    pub fn dual(&self) -> Self {
        let du = 2.0 * PI / (self.count as f64 * self.step);
        Self {
            start: -((self.count / 2) as f64) * du,
            step: du,
            count: self.count,
        }
    }

    /// True if `other` is this axis up to relative rounding.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let tol = 1e-12 * self.step.max(self.start.abs());
        self.count == other.count
            && (self.start - other.start).abs() <= tol
            && (self.step - other.step).abs() <= 1e-12 * self.step
    }

    /// Node mask of `|coord| ≤ halfwidth` (closed interval, full weight on
    /// boundary nodes).
    pub fn mask(&self, halfwidth: f64) -> Result<Vec<bool>> {
        let tol = 1e-9 * self.step;
        if halfwidth.is_nan() || halfwidth <= 0.0 || -halfwidth < self.start - tol || halfwidth > self.end() + tol {
            return Err(Error::RegionOutOfGrid { halfwidth });
        }
        Ok((0..self.count)
            .map(|i| self.coord(i).abs() <= halfwidth + tol)
            .collect())
    }

    /// Index of the node at the origin, if there is one.
    pub fn zero_index(&self) -> Option<usize> {
        let r = -self.start / self.step;
        let i = r.round();
        ((r - i).abs() < 1e-9 && i >= 0.0 && (i as usize) < self.count).then_some(i as usize)
    }
}

/// Square integration region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    FullGrid,
    /// `[-h, h] × [-h, h]`.
    CenteredSquare(f64),
}

/// Quaternion field on a uniform 2D grid. Values are stored x-major:
/// node `(ix, iy)` lives at `ix * ny + iy`.
///
/// Quadrature weights are per axis; the node weight is `quad_x[ix] * quad_y[iy]`.
/// The default rule gives every node the full step, which is the trapezoid rule
/// over one period of the grid and the natural weight for the discrete transform.
#[derive(Debug, Clone, PartialEq)]
pub struct QSignal {
    pub ax_x: GridAxis,
    pub ax_y: GridAxis,
    pub values: Vec<Quaternion>,
    pub quad_x: Vec<f64>,
    pub quad_y: Vec<f64>,
}

impl QSignal {
    pub fn zeros(ax_x: GridAxis, ax_y: GridAxis) -> Self {
        Self {
            values: vec![Quaternion::ZERO; ax_x.count * ax_y.count],
            quad_x: vec![ax_x.step; ax_x.count],
            quad_y: vec![ax_y.step; ax_y.count],
            ax_x,
            ax_y,
        }
    }

    pub fn from_values(ax_x: GridAxis, ax_y: GridAxis, values: Vec<Quaternion>) -> Result<Self> {
        let expected = ax_x.count * ax_y.count;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: values.len(),
            });
        }
        Ok(Self {
            values,
            quad_x: vec![ax_x.step; ax_x.count],
            quad_y: vec![ax_y.step; ax_y.count],
            ax_x,
            ax_y,
        })
    }

    pub fn from_fn(ax_x: GridAxis, ax_y: GridAxis, f: impl Fn(f64, f64) -> Quaternion) -> Self {
        let mut s = Self::zeros(ax_x, ax_y);
        for ix in 0..ax_x.count {
            let x = ax_x.coord(ix);
            for iy in 0..ax_y.count {
                s.values[ix * ax_y.count + iy] = f(x, ax_y.coord(iy));
            }
        }
        s
    }

    /// Replace the quadrature rule.
    pub fn with_weights(mut self, quad_x: Vec<f64>, quad_y: Vec<f64>) -> Result<Self> {
        if quad_x.len() != self.ax_x.count {
            return Err(Error::LengthMismatch {
                expected: self.ax_x.count,
                got: quad_x.len(),
            });
        }
        if quad_y.len() != self.ax_y.count {
            return Err(Error::LengthMismatch {
                expected: self.ax_y.count,
                got: quad_y.len(),
            });
        }
        self.quad_x = quad_x;
        self.quad_y = quad_y;
        Ok(self)
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.ax_x.count
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.ax_y.count
    }

    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> Quaternion {
        self.values[ix * self.ax_y.count + iy]
    }

    /// A signal on the same grid with new values.
    pub fn with_values(&self, values: Vec<Quaternion>) -> Self {
        assert_eq!(values.len(), self.values.len());
        Self { values, ..self.clone() }
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> Self {
        self.with_values(self.values.iter().map(|&q| f(q)).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|q| q * s)
    }

    /// `q · f` pointwise.
    pub fn left_mul(&self, q: Quaternion) -> Self {
        self.map(|v| q * v)
    }

    /// `f · q` pointwise.
    pub fn right_mul(&self, q: Quaternion) -> Self {
        self.map(|v| v * q)
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if !self.ax_x.approx_eq(&other.ax_x) || !self.ax_y.approx_eq(&other.ax_y) {
            return Err(Error::GridMismatch(format!(
                "{:?}x{:?} vs {:?}x{:?}",
                self.ax_x, self.ax_y, other.ax_x, other.ax_y
            )));
        }
        Ok(())
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(self.with_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&p, &q)| p * a + q * b)
                .collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lin_comb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lin_comb(1.0, other, -1.0)
    }

    /// Real component `c` (0 = scalar, 1 = i, 2 = j, 3 = k).
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.values.iter().map(|q| q.to_array()[c]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|q| q.modulus()).fold(0.0, f64::max)
    }

    /// Largest pointwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max)
    }

    /// Keep values on `region`, zero elsewhere.
    pub fn restrict(&self, region: Region) -> Result<Self> {
        let (mx, my) = region_masks(self, region)?;
        Ok(self.masked(&mx, &my, true))
    }

    /// Zero values on `region`, keep the rest.
    pub fn restrict_complement(&self, region: Region) -> Result<Self> {
        let (mx, my) = region_masks(self, region)?;
        Ok(self.masked(&mx, &my, false))
    }

    fn masked(&self, mx: &[bool], my: &[bool], inside: bool) -> Self {
        let ny = self.ny();
        let mut out = self.clone();
        for (ix, &bx) in mx.iter().enumerate() {
            for (iy, &by) in my.iter().enumerate() {
                if (bx && by) != inside {
                    out.values[ix * ny + iy] = Quaternion::ZERO;
                }
            }
        }
        out
    }

    /// `‖f‖` over the whole grid.
    pub fn norm(&self) -> f64 {
        energy(self, Region::FullGrid)
            .expect("full grid is always valid")
            .sqrt()
    }
}

fn region_masks(f: &QSignal, region: Region) -> Result<(Vec<bool>, Vec<bool>)> {
    match region {
        Region::FullGrid => Ok((vec![true; f.nx()], vec![true; f.ny()])),
        Region::CenteredSquare(h) => Ok((f.ax_x.mask(h)?, f.ax_y.mask(h)?)),
    }
}

/// Left inner product `<f, g> = ∫ f ḡ` over `region`.
pub fn inner_product(f: &QSignal, g: &QSignal, region: Region) -> Result<Quaternion> {
    f.check_same_grid(g)?;
    let (mx, my) = region_masks(f, region)?;
    let ny = f.ny();
    let mut acc = Quaternion::ZERO;
    for ix in (0..f.nx()).filter(|&i| mx[i]) {
        let mut row = Quaternion::ZERO;
        for iy in (0..ny).filter(|&i| my[i]) {
            let k = ix * ny + iy;
            row += (f.values[k] * g.values[k].conj()) * f.quad_y[iy];
        }
        acc += row * f.quad_x[ix];
    }
    Ok(acc)
}

/// `Sc <f, g>`.
pub fn scalar_inner_product(f: &QSignal, g: &QSignal, region: Region) -> Result<f64> {
    f.check_same_grid(g)?;
    let (mx, my) = region_masks(f, region)?;
    let ny = f.ny();
    let mut acc = 0.0;
    for ix in (0..f.nx()).filter(|&i| mx[i]) {
        let mut row = 0.0;
        for iy in (0..ny).filter(|&i| my[i]) {
            let k = ix * ny + iy;
            let (a, b) = (f.values[k], g.values[k]);
            row += (a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z) * f.quad_y[iy];
        }
        acc += row * f.quad_x[ix];
    }
    Ok(acc)
}

/// `∫ |f|²` over `region`.
pub fn energy(f: &QSignal, region: Region) -> Result<f64> {
    let (mx, my) = region_masks(f, region)?;
    let ny = f.ny();
    let mut acc = 0.0;
    for ix in (0..f.nx()).filter(|&i| mx[i]) {
        let mut row = 0.0;
        for iy in (0..ny).filter(|&i| my[i]) {
            row += f.values[ix * ny + iy].norm_sqr() * f.quad_y[iy];
        }
        acc += row * f.quad_x[ix];
    }
    Ok(acc)
}

/// Energies below this count as zero.
pub const ZERO_ENERGY_FLOOR: f64 = 1e-300;

/// `arccos(Sc<f,g> / (‖f‖‖g‖))` in `[0, π]`.
pub fn angle(f: &QSignal, g: &QSignal) -> Result<f64> {
    let ef = energy(f, Region::FullGrid)?;
    let eg = energy(g, Region::FullGrid)?;
    if ef <= ZERO_ENERGY_FLOOR || eg <= ZERO_ENERGY_FLOOR {
        return Err(Error::ZeroSignal);
    }
    let s = scalar_inner_product(f, g, Region::FullGrid)?;
    Ok((s / (ef.sqrt() * eg.sqrt())).clamp(-1.0, 1.0).acos())
}
