mod common;

use common::{bandlimited, grid_basis_with};
use qpswf::prolate::{
    build_qpswf_basis, eig_prolate_1d, eig_prolate_grid, gram_matrix, gram_tensor, plane_gram_1d, time_gram_1d,
    verify_allpass, verify_finite_qft, verify_lowpass, Expansion, GramDomain, ProlateBasis1D,
};
use qpswf::qft::sinc_kernel_1d;
use qpswf::{inner_product, GridAxis, Quaternion, Region};

fn simpson(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let h = (b - a) / n as f64;
    (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (a + i as f64 * h, w * h / 3.0)
        })
        .collect()
}

fn legendre(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

// Eigenvalues of the sinc operator in an orthonormal Legendre basis on [-T, T],
// integrated with a product Simpson rule.
fn legendre_galerkin_eigenvalues(t: f64, w: f64, dim: usize) -> Vec<f64> {
    let rule = simpson(800, -t, t);
    let basis: Vec<Vec<f64>> = (0..dim)
        .map(|n| {
            let norm = ((2 * n + 1) as f64 / (2.0 * t)).sqrt();
            rule.iter().map(|&(x, _)| norm * legendre(n, x / t)).collect()
        })
        .collect();
    let kp: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            rule.iter()
                .map(|&(x, _)| {
                    rule.iter()
                        .enumerate()
                        .map(|(q, &(s, ws))| ws * sinc_kernel_1d(x - s, w) * basis[j][q])
                        .sum()
                })
                .collect()
        })
        .collect();
    let m = nalgebra::DMatrix::<f64>::from_fn(dim, dim, |i, j| {
        rule.iter()
            .enumerate()
            .map(|(p, &(_, wp))| wp * basis[i][p] * kp[j][p])
            .sum()
    });
    let m = 0.5 * (&m + m.transpose());
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

#[test]
fn eigenvalues_at_unit_bandwidth() {
    let b256 = eig_prolate_1d(1.0, 1.0, 256, 12).unwrap();
    let b512 = eig_prolate_1d(1.0, 1.0, 512, 12).unwrap();
    for k in 0..12 {
        assert!((b256.eigvals[k] - b512.eigvals[k]).abs() <= 1e-8);
    }
    let galerkin = legendre_galerkin_eigenvalues(1.0, 1.0, 12);
    for k in 0..8 {
        assert!(
            (b256.eigvals[k] - galerkin[k]).abs() <= 1e-10,
            "λ{k}: {} vs {}",
            b256.eigvals[k],
            galerkin[k]
        );
    }
    let resolved = b256.eigvals.iter().take_while(|&&l| l > 1e-13).count();
    assert!(resolved >= 6);
    for k in 0..resolved {
        assert!(b256.eigvals[k] > 0.0 && b256.eigvals[k] < 1.0);
        if k + 1 < resolved {
            assert!(b256.eigvals[k] > b256.eigvals[k + 1]);
        }
    }
}

#[test]
fn trace_identities() {
    let (t, w) = (1.0, 3.0);
    let n = 96;
    let b = eig_prolate_1d(t, w, n, n).unwrap();
    let sum: f64 = b.eigvals.iter().sum();
    assert!((sum - 2.0 * t * w / std::f64::consts::PI).abs() < 1e-12);
    // Σλ² = ∫∫_T k(x−s)² on an independent rule
    let rule = simpson(1200, -t, t);
    let mut hs = 0.0;
    for &(x, wx) in &rule {
        for &(s, ws) in &rule {
            let k = sinc_kernel_1d(x - s, w);
            hs += wx * ws * k * k;
        }
    }
    let sq: f64 = b.eigvals.iter().map(|l| l * l).sum();
    assert!((sq - hs).abs() < 1e-9, "{sq} vs {hs}");
}

#[test]
fn eigenvalues_depend_only_on_the_product() {
    let a = eig_prolate_1d(1.0, 4.0, 128, 10).unwrap();
    for s in [0.5, 2.0, 3.7] {
        let b = eig_prolate_1d(s, 4.0 / s, 128, 10).unwrap();
        for k in 0..10 {
            assert!((a.eigvals[k] - b.eigvals[k]).abs() <= 1e-10);
        }
        // eigenfunctions rescale as φ(x/s)/√s
        for &x in &[0.0, 0.3, 0.9, 2.5] {
            let want = a.extend(3, x).unwrap() / s.sqrt();
            assert!((b.extend(3, s * x).unwrap() - want).abs() < 1e-9);
        }
    }
}

fn sign_changes(b: &ProlateBasis1D, k: usize) -> usize {
    let xs: Vec<f64> = (1..2000).map(|i| -b.t + 2.0 * b.t * i as f64 / 2000.0).collect();
    let v = b.extend_many(k, &xs).unwrap();
    v.windows(2).filter(|p| p[0].signum() != p[1].signum()).count()
}

#[test]
fn parity_sign_convention_and_zero_count() {
    for (w, count) in [(1.0, 6), (4.0, 8), (24.0, 12)] {
        let b = eig_prolate_1d(1.0, w, 256, count).unwrap();
        for k in 0..count {
            for &x in &[0.2, 0.7, 1.0, 1.8, 3.5] {
                let (p, m) = (b.extend(k, x).unwrap(), b.extend(k, -x).unwrap());
                let want = if k % 2 == 0 { p } else { -p };
                assert!((m - want).abs() < 1e-10 * p.abs().max(1.0), "k={k} x={x}");
            }
            if k % 2 == 0 {
                assert!(b.extend(k, 0.0).unwrap() > 0.0);
            } else {
                assert!(b.extend_derivative(k, 0.0).unwrap() > 0.0);
            }
            // the k-th eigenfunction has k zeros inside the interval
            assert_eq!(sign_changes(&b, k), k, "c={w}, k={k}");
        }
    }
}

#[test]
fn recomputation_is_bitwise_identical() {
    let a = eig_prolate_1d(1.0, 6.0, 128, 12).unwrap();
    let b = eig_prolate_1d(1.0, 6.0, 128, 12).unwrap();
    assert_eq!(a, b);
}

#[test]
fn lowpass_and_finite_transform_forms() {
    let b = eig_prolate_1d(1.0, 4.0, 256, 12).unwrap();
    let coeff = Quaternion::new(0.5, 0.5, -0.5, 0.5);
    for m in 0..6 {
        for n in 0..6 {
            let l = b.eigvals[m] * b.eigvals[n];
            let r = verify_lowpass(&b, &Expansion::single(m, n, coeff), l).unwrap();
            assert!(r <= 1e-8, "lowpass ({m},{n}) {r:e}");
            let fq = verify_finite_qft(&b, m, n, coeff).unwrap();
            assert!(fq.residual <= 1e-6 && fq.relation_residual <= 1e-6, "({m},{n}) {fq:?}");
        }
    }
    // 1D multipliers: |μ|² γ / 2π = λ
    let g = b.fourier_scale();
    for k in 0..8 {
        let l = g * b.mu[k].norm_sqr() / (2.0 * std::f64::consts::PI);
        assert!((l - b.eigvals[k]).abs() <= 1e-9 * b.eigvals[k].max(1e-3));
    }
}

#[test]
fn wide_bandwidth_clusters_are_separated() {
    // leading eigenvalues coincide to rounding here
    let b = eig_prolate_1d(1.0, 24.0, 256, 12).unwrap();
    assert!(1.0 - b.eigvals[4] < 1e-10);
    let coeff = Quaternion::ONE;
    for m in 0..8 {
        for n in [0, 2, 4, 7] {
            let fq = verify_finite_qft(&b, m, n, coeff).unwrap();
            assert!(fq.residual <= 1e-6, "({m},{n}) {fq:?}");
        }
    }
    for m in 0..8 {
        let ap = verify_allpass(&b, m, m, 4.0).unwrap();
        assert!(ap.residual <= 1e-4, "{m}: {ap:?}");
    }
}

#[test]
fn allpass_residual_is_explained_by_the_window_tail() {
    let b = eig_prolate_1d(1.0, 4.0, 256, 8).unwrap();
    for (m, n) in [(0, 0), (1, 2), (3, 3)] {
        let ap = verify_allpass(&b, m, n, 4.0).unwrap();
        assert!(ap.excess <= 1e-6, "({m},{n}) {ap:?}");
        assert!(ap.residual <= (ap.tail / (1.0 - ap.tail)).sqrt() + 1e-6);
        assert!(ap.tail < 0.5);
    }
}

#[test]
fn reflections_and_symmetry_combinations() {
    let b = eig_prolate_1d(1.0, 3.0, 256, 8).unwrap();
    let q1 = Quaternion::new(0.2, -0.7, 0.1, 0.4);
    let q2 = Quaternion::new(-0.3, 0.5, 0.9, 0.0);
    for (m, n) in [(0, 0), (1, 2), (2, 3)] {
        let l = b.eigvals[m] * b.eigvals[n];
        let psi = Expansion::single(m, n, q1);
        for (fx, fy) in [(false, false), (true, false), (false, true), (true, true)] {
            let r = verify_lowpass(&b, &psi.reflected(fx, fy), l).unwrap();
            assert!(r <= 1e-8);
        }
    }
    // (0,1) and (1,0) share an eigenvalue, so any combination stays an eigenfunction
    let l = b.eigvals[0] * b.eigvals[1];
    let psi = Expansion::single(0, 1, q1).plus(&Expansion::single(1, 0, q2));
    // both terms are odd under (x, y) → (−x, −y), so ψ_ee and ψ_oo = 2ψ
    let probe = [0.3, -0.6, 0.8];
    let mut nonzero = 0;
    for (idx, comb) in psi.symmetry_combinations().iter().enumerate() {
        let size = comb
            .tabulate(&b, &probe, &probe)
            .unwrap()
            .iter()
            .map(|q| q.modulus())
            .fold(0.0, f64::max);
        if size < 1e-12 {
            assert!(idx == 0, "combination {idx} vanished");
            continue;
        }
        nonzero += 1;
        let r = verify_lowpass(&b, comb, l).unwrap();
        assert!(r <= 1e-8, "combination {idx}: {r:e}");
    }
    assert_eq!(nonzero, 5);
}

#[test]
fn gram_matrices_of_the_leading_basis() {
    let b = eig_prolate_1d(1.0, 4.0, 256, 16).unwrap();
    let ax = GridAxis::symmetric(4.0, 33).unwrap();
    let set = build_qpswf_basis(&b, 36, Quaternion::new(0.5, 0.5, 0.5, 0.5), ax, ax).unwrap();
    assert_eq!(set.items.len(), 36);
    let plane = gram_tensor(&set, GramDomain::Plane).unwrap();
    let time = gram_tensor(&set, GramDomain::Time).unwrap();
    for p in 0..36 {
        for q in 0..36 {
            let id = if p == q { 1.0 } else { 0.0 };
            assert!(plane[p][q].max_abs_diff(Quaternion::real(id)) <= 1e-8);
            let d = if p == q { set.items[p].lambda2d } else { 0.0 };
            assert!(time[p][q].max_abs_diff(Quaternion::real(d)) <= 1e-8);
        }
    }
    // 1D Grams against a Simpson rule
    let tg = time_gram_1d(&b, 6).unwrap();
    let rule = simpson(4000, -1.0, 1.0);
    let xs: Vec<f64> = rule.iter().map(|r| r.0).collect();
    for k in 0..6 {
        let vk = b.extend_many(k, &xs).unwrap();
        for l in 0..6 {
            let vl = b.extend_many(l, &xs).unwrap();
            let s: f64 = rule.iter().enumerate().map(|(i, r)| r.1 * vk[i] * vl[i]).sum();
            assert!((s - tg[k][l]).abs() < 1e-10);
        }
    }
    let pg = plane_gram_1d(&b, 6).unwrap();
    for k in 0..6 {
        assert!((pg[k][k] - 1.0).abs() < 1e-10);
    }
}

#[test]
fn tensor_order_is_sorted_with_index_ties() {
    let b = eig_prolate_1d(1.0, 2.0, 128, 8).unwrap();
    let ax = GridAxis::symmetric(2.0, 9).unwrap();
    let set = build_qpswf_basis(&b, 20, Quaternion::K, ax, ax).unwrap();
    for w in set.items.windows(2) {
        assert!(
            w[0].lambda2d > w[1].lambda2d || (w[0].lambda2d == w[1].lambda2d && (w[0].m, w[0].n) < (w[1].m, w[1].n))
        );
    }
    assert_eq!((set.items[1].m, set.items[1].n), (0, 1));
    assert_eq!((set.items[2].m, set.items[2].n), (1, 0));
    assert!(matches!(
        build_qpswf_basis(&b, 4, Quaternion::new(1.0, 1.0, 0.0, 0.0), ax, ax),
        Err(qpswf::Error::NonUnitCoefficient(_))
    ));
}

#[test]
fn tiny_eigenvalues_are_not_extended() {
    let b = eig_prolate_1d(1.0, 1.0, 64, 20).unwrap();
    let k = b.count_above_floor();
    assert!(k < 20);
    assert!(matches!(b.extend(k, 0.5), Err(qpswf::Error::EigenvalueTooSmall { .. })));
    assert!(matches!(b.extend(40, 0.5), Err(qpswf::Error::BadIndex(40))));
}

#[test]
fn grid_basis_is_exact_on_the_grid() {
    let set = grid_basis_with(1.0, 2.0, 4.0, 257, 25);
    let g = gram_matrix(&set, Region::FullGrid).unwrap();
    let gt = gram_matrix(&set, Region::CenteredSquare(1.0)).unwrap();
    for p in 0..set.items.len() {
        for q in 0..set.items.len() {
            let id = if p == q { 1.0 } else { 0.0 };
            assert!(g[p][q].max_abs_diff(Quaternion::real(id)) < 1e-10);
            let d = if p == q { set.items[p].lambda2d } else { 0.0 };
            assert!(gt[p][q].max_abs_diff(Quaternion::real(d)) < 1e-10);
        }
    }
    let ax = GridAxis::symmetric(4.0, 257).unwrap();
    assert!(matches!(
        eig_prolate_grid(&ax, 1.0, 1e3, 4),
        Err(qpswf::Error::WindowTooSmall { .. })
    ));
}

#[test]
fn projection_onto_the_basis_captures_bandlimited_energy() {
    // T = 1, W = 1 on [-8, 8]²: the band holds 5 × 5 grid frequencies
    let set = grid_basis_with(1.0, 1.0, 8.0, 257, 100);
    assert_eq!(set.items.len(), 25);
    let f = bandlimited(set.ax_x, 1.0, 5);
    let mut captured = 0.0;
    let mut last = 0.0;
    for item in &set.items {
        captured += inner_product(&f, &item.values, Region::FullGrid).unwrap().norm_sqr();
        assert!(captured >= last);
        last = captured;
    }
    assert!((1.0 - captured).abs() <= 1e-4, "{captured}");
}
