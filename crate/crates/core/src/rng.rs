//! Reproducible random test signals.
//!
//! Every stream is ChaCha8 (the `rand_chacha` implementation, a counter-based
//! generator) seeded with `ChaCha8Rng::seed_from_u64(seed)`. Components are
//! uniform on `[-1, 1)` and drawn in storage order `w, i, j, k` per node, nodes
//! in x-major order.

use crate::grid::{GridAxis, QSignal};
use crate::quat::Quaternion;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on `[-1, 1)`.
pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

pub fn random_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    let w = uniform(rng);
    let x = uniform(rng);
    let y = uniform(rng);
    let z = uniform(rng);
    Quaternion::new(w, x, y, z)
}

/// White-noise quaternion field.
pub fn random_signal(ax_x: GridAxis, ax_y: GridAxis, seed: u64) -> QSignal {
    let mut rng = stream(seed);
    let values = (0..ax_x.count * ax_y.count)
        .map(|_| random_quaternion(&mut rng))
        .collect();
    QSignal::from_values(ax_x, ax_y, values).expect("sizes agree")
}

/// `n` uniform values.
pub fn random_vec(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = stream(seed);
    (0..n).map(|_| uniform(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a = GridAxis::symmetric(1.0, 5).unwrap();
        assert_eq!(random_signal(a, a, 3), random_signal(a, a, 3));
        assert_ne!(random_signal(a, a, 3), random_signal(a, a, 4));
        assert!(random_vec(1000, 9).iter().all(|v| (-1.0..1.0).contains(v)));
    }
}
