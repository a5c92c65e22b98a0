#![allow(dead_code)]

use qpswf::concentration::band_limit;
use qpswf::prolate::{build_qpswf_basis, eig_prolate_grid, BasisSet2D};
use qpswf::rng::random_signal;
use qpswf::{GridAxis, QSignal, Quaternion};
use std::f64::consts::PI;

/// Direct quadrature of the two-sided transform at one frequency pair.
pub fn direct_qft(f: &QSignal, u: f64, v: f64) -> Quaternion {
    let mut acc = Quaternion::ZERO;
    for ix in 0..f.nx() {
        let x = f.ax_x.coord(ix);
        let left = Quaternion::exp_i(-u * x);
        for iy in 0..f.ny() {
            let y = f.ax_y.coord(iy);
            acc += left * f.at(ix, iy) * Quaternion::exp_j(-v * y) * (f.quad_x[ix] * f.quad_y[iy]);
        }
    }
    acc / (2.0 * PI)
}

/// White noise band-limited to `[-w, w]²`, scaled to unit energy.
pub fn bandlimited(ax: GridAxis, w: f64, seed: u64) -> QSignal {
    let g = band_limit(&random_signal(ax, ax, seed), w).unwrap();
    let n = g.norm();
    g.scale(1.0 / n)
}

/// Grid-consistent basis: T = 1, W = 2 on `[-4, 4]²` with 257 nodes per axis.
pub fn grid_basis(count: usize) -> BasisSet2D {
    grid_basis_with(1.0, 2.0, 4.0, 257, count)
}

pub fn grid_basis_with(t: f64, w: f64, l: f64, n: usize, count: usize) -> BasisSet2D {
    let ax = GridAxis::symmetric(l, n).unwrap();
    let b = eig_prolate_grid(&ax, t, w, 16).unwrap();
    build_qpswf_basis(&b, count, Quaternion::ONE, ax, ax).unwrap()
}
