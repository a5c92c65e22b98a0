mod common;

use common::{bandlimited, grid_basis};
use qpswf::concentration::{
    band_limit, boundary_eta, build_boundary_signal, build_eta_one_signal, build_zero_xi_signal, energy_ratios,
    least_angle_check, sweep_admissible_region, time_limit, PointSource,
};
use qpswf::qft::modulate;
use qpswf::rng::{random_signal, random_vec};
use qpswf::{scalar_inner_product, QSignal, Quaternion, Region};
use std::sync::OnceLock;

const T: f64 = 1.0;
const W: f64 = 2.0;

fn basis() -> &'static qpswf::prolate::BasisSet2D {
    static SET: OnceLock<qpswf::prolate::BasisSet2D> = OnceLock::new();
    SET.get_or_init(|| grid_basis(25))
}

// Fraction of energy on the closed square |x|, |y| ≤ T, summed directly.
fn time_fraction(f: &QSignal) -> f64 {
    let (mut inside, mut total) = (0.0, 0.0);
    for ix in 0..f.nx() {
        for iy in 0..f.ny() {
            let e = f.at(ix, iy).norm_sqr();
            total += e;
            if f.ax_x.coord(ix).abs() <= T + 1e-12 && f.ax_y.coord(iy).abs() <= T + 1e-12 {
                inside += e;
            }
        }
    }
    (inside / total).sqrt()
}

fn lambda0() -> f64 {
    basis().items[0].lambda2d
}

#[test]
fn bandlimited_signals_stay_below_the_extremal_fraction() {
    let l0 = lambda0();
    let ax = basis().ax_x;
    for seed in 0..200 {
        let f = bandlimited(ax, W, 5000 + seed);
        let r = energy_ratios(&f, T, W, l0).unwrap();
        assert!((r.xi - time_fraction(&f)).abs() < 1e-12);
        assert!(r.xi <= l0.sqrt() + 1e-8, "seed {seed}: ξ = {}", r.xi);
        assert!((r.eta_q - 1.0).abs() < 1e-8);
    }
}

#[test]
fn leading_element_is_extremal() {
    let set = basis();
    let l0 = lambda0();
    let r = energy_ratios(&set.items[0].values, T, W, l0).unwrap();
    assert!((r.xi * r.xi - l0).abs() <= 1e-6);
    assert!((r.eta_q - 1.0).abs() <= 1e-6);
    let (want, got) = least_angle_check(set).unwrap();
    assert!((want - got).abs() <= 1e-8);
    // and the 1D factors are the leading 1D eigenvector
    assert!((l0 - set.basis1d.eigvals[0].powi(2)).abs() < 1e-15);
}

#[test]
fn boundary_signals_attain_the_angle_bound() {
    let set = basis();
    let l0 = lambda0();
    let lo = l0.sqrt();
    for i in 0..10 {
        let xi = lo + (0.999 - lo) * i as f64 / 9.0;
        let g = build_boundary_signal(xi, set).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-10);
        assert!((time_fraction(&g) - xi).abs() < 1e-8);
        let r = energy_ratios(&g, T, W, l0).unwrap();
        let lhs = r.xi.acos() + r.eta_q.acos();
        assert!((lhs - lo.acos()).abs() <= 1e-6, "ξ = {xi}: {lhs} vs {}", lo.acos());
        assert!((r.eta_q - boundary_eta(xi, l0)).abs() <= 1e-6);
    }
    assert!(build_boundary_signal(lo - 0.1, set).is_err());
    assert!(build_boundary_signal(1.0, set).is_err());
}

#[test]
fn zero_fraction_signals_from_even_elements() {
    let set = basis();
    let l0 = lambda0();
    let mut checked = 0;
    for (n, item) in set.items.iter().enumerate() {
        if item.m % 2 != 0 || item.n % 2 != 0 {
            continue;
        }
        let g = build_zero_xi_signal(n, set).unwrap();
        let r = energy_ratios(&g, T, W, l0).unwrap();
        assert!(r.xi <= 1e-10);
        assert!(
            (r.eta_q * r.eta_q - (1.0 - item.lambda2d)).abs() <= 1e-6,
            "({}, {})",
            item.m,
            item.n
        );
        checked += 1;
    }
    assert!(checked >= 4);
}

#[test]
fn eta_one_signals_fill_the_left_edge() {
    let set = basis();
    let l0 = lambda0();
    for xi in [0.2, 0.5, 0.8] {
        let g = build_eta_one_signal(xi, None, set).unwrap();
        let r = energy_ratios(&g, T, W, l0).unwrap();
        assert!((r.xi - xi).abs() < 1e-8);
        assert!((r.eta_q - 1.0).abs() < 1e-8);
    }
    assert!(build_eta_one_signal(l0.sqrt() + 0.01, None, set).is_err());
    assert!(matches!(
        build_eta_one_signal(0.5, Some(0), set),
        Err(qpswf::Error::NoAdmissibleIndex(_))
    ));
}

#[test]
fn mixed_random_signals_are_admissible() {
    let set = basis();
    let l0 = lambda0();
    let ax = set.ax_x;
    let mut worst = f64::INFINITY;
    for seed in 0..500u64 {
        let raw = random_signal(ax, ax, 9000 + seed);
        let f = match seed % 3 {
            0 => band_limit(&raw, W * (0.5 + 0.5 * (seed % 7) as f64 / 6.0)).unwrap(),
            1 => time_limit(&raw, T * (0.25 + (seed % 5) as f64 * 0.25)).unwrap(),
            _ => raw,
        };
        let f = f.scale(1.0 / f.norm());
        let r = energy_ratios(&f, T, W, l0).unwrap();
        worst = worst.min(r.angle_sum_deficit);
    }
    assert!(worst >= -1e-6, "worst deficit {worst:e}");
}

#[test]
fn time_limited_signals_are_not_bandlimited() {
    let l0 = lambda0();
    let ax = basis().ax_x;
    for seed in 0..20 {
        let f = time_limit(&random_signal(ax, ax, 300 + seed), T).unwrap();
        let r = energy_ratios(&f, T, W, l0).unwrap();
        assert!((r.xi - 1.0).abs() < 1e-12);
        assert!(r.eta_q < 1.0 - 1e-6);
        // time-limited counterpart of the extremal bound
        assert!(r.eta_q <= l0.sqrt() + 1e-8);
    }
    let ext = time_limit(&basis().items[0].values, T).unwrap();
    let r = energy_ratios(&ext, T, W, l0).unwrap();
    assert!((r.eta_q - l0.sqrt()).abs() < 1e-8);
}

#[test]
fn limiting_operators_are_orthogonal_projections() {
    let ax = basis().ax_x;
    let f = random_signal(ax, ax, 77);
    let d = time_limit(&f, T).unwrap();
    let b = band_limit(&f, W).unwrap();
    for p in [d, b] {
        let rest = f.sub(&p).unwrap();
        let s = scalar_inner_product(&p, &rest, Region::FullGrid).unwrap();
        assert!(s.abs() <= 1e-10, "{s:e}");
    }
    let b2 = band_limit(&band_limit(&f, W).unwrap(), W).unwrap();
    assert!(b2.max_abs_diff(&band_limit(&f, W).unwrap()) < 1e-12);
}

#[test]
fn modulation_pushes_energy_out_of_the_band() {
    let set = basis();
    let l0 = lambda0();
    let g = build_zero_xi_signal(0, set).unwrap();
    let du = set.ax_x.dual().step;
    let mut last = energy_ratios(&g, T, W, l0).unwrap().eta_q;
    for k in [3, 5, 10, 20] {
        let r = energy_ratios(&modulate(&g, k as f64 * du), T, W, l0).unwrap();
        assert!(r.xi <= 1e-10);
        assert!(r.eta_q < last, "r = {}", k as f64 * du);
        last = r.eta_q;
    }
    assert!(last < 0.1);
}

#[test]
fn sweep_reports_every_construction() {
    let set = basis();
    let xs: Vec<f64> = random_vec(12, 3)
        .iter()
        .map(|u| 0.5 * (u + 1.0) * 0.98 + 0.01)
        .collect();
    let pts = sweep_admissible_region(set, &xs).unwrap();
    let count = |s: PointSource| pts.iter().filter(|p| p.source == s).count();
    assert_eq!(count(PointSource::BoundaryCurve), 12);
    assert!(count(PointSource::BoundarySignal) > 0);
    assert!(count(PointSource::ZeroXiSignal) > 0);
    for p in &pts {
        assert!(p.report.angle_sum_deficit >= -1e-6, "{p:?}");
        let on_curve = p.report.xi >= lambda0().sqrt();
        if on_curve && matches!(p.source, PointSource::BoundaryCurve | PointSource::BoundarySignal) {
            assert!(p.report.angle_sum_deficit.abs() <= 1e-6);
        }
    }
}

#[test]
fn zero_signal_is_rejected() {
    let ax = basis().ax_x;
    let z = QSignal::zeros(ax, ax);
    assert_eq!(energy_ratios(&z, T, W, lambda0()), Err(qpswf::Error::ZeroSignal));
    let one = QSignal::from_fn(ax, ax, |_, _| Quaternion::ONE);
    assert!(energy_ratios(&one, T, W, lambda0()).is_ok());
}
