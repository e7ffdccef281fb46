//! Shared helpers for the integration and acceptance suites: seeded RNG,
//! random metric-respecting objects and forward-constructed fixtures.

#![allow(dead_code)]

use kaluza_core::hyperlin::Metric;
use kaluza_core::linalg::{self, Matrix};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| uniform(rng, -scale, scale)).collect()
}

/// Random rotation from a random axis and angle (Rodrigues formula).
pub fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix {
    let axis = loop {
        let a = random_vec(rng, 3, 1.0);
        let n = linalg::norm2(&a);
        if n > 1e-3 {
            break linalg::scale(&a, 1.0 / n);
        }
    };
    let angle = uniform(rng, 0.0, core::f64::consts::TAU);
    rotation_about(&axis, angle)
}

pub fn rotation_about(axis: &[f64], angle: f64) -> Matrix {
    let k = linalg::skew3(axis);
    let k2 = k.mul(&k);
    Matrix::identity(3)
        .add(&k.scale(angle.sin()))
        .add(&k2.scale(1.0 - angle.cos()))
}

/// Random subluminal 3-velocity with norm at most `vmax`.
pub fn random_velocity(rng: &mut ChaCha8Rng, vmax: f64) -> Vec<f64> {
    loop {
        let v = random_vec(rng, 3, vmax);
        if linalg::norm2(&v) < vmax {
            return v;
        }
    }
}

/// Gram-Schmidt for an orthonormal pair adapted to a timelike direction:
/// returns `(i, j)` with `i*i = 1`, `j*j = -1`, `j*i = 0` built from a random
/// timelike seed and a random spacelike one.
pub fn random_timelike_unit(rng: &mut ChaCha8Rng, g: &Metric) -> Vec<f64> {
    loop {
        let mut v = random_vec(rng, g.dim(), 2.0);
        v[0] = uniform(rng, 1.2, 3.0); // bias towards timelike
        let n2 = g.norm2(&v);
        if n2 > 0.1 {
            return linalg::scale(&v, 1.0 / n2.sqrt());
        }
    }
}

/// A unit spacelike vector orthogonal (w.r.t. `g`) to every vector in `ortho`.
pub fn random_spacelike_orthogonal(
    rng: &mut ChaCha8Rng,
    g: &Metric,
    ortho: &[&[f64]],
) -> Vec<f64> {
    loop {
        let mut v = random_vec(rng, g.dim(), 2.0);
        for o in ortho {
            // subtract the g-projection onto o (o is unit timelike or unit spacelike)
            let oo = g.norm2(o);
            let c = g.inner(&v, o) / oo;
            v = linalg::sub(&v, &linalg::scale(o, c));
        }
        let n2 = g.norm2(&v);
        if n2 < -0.05 {
            return linalg::scale(&v, 1.0 / (-n2).sqrt());
        }
    }
}

pub fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got}, want {want} (tol {tol})"
    );
}
