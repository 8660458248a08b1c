#![allow(dead_code)]

use lempert_core::domain::{in_lhat, in_lie_ball, in_tetrablock};
use lempert_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cube(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<Complex64> {
    (0..n).map(|_| c(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius))).collect()
}

/// Uniform in the Euclidean unit ball of `C^n`.
pub fn ball(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let normal = rand_distr::StandardNormal;
    let z: Vec<Complex64> = (0..n).map(|_| c(rng.sample(normal), rng.sample(normal))).collect();
    let norm = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let r = rng.gen::<f64>().powf(1.0 / (2 * n) as f64);
    z.into_iter().map(|x| x * (r / norm)).collect()
}

pub fn sample_where(rng: &mut ChaCha8Rng, n: usize, pred: impl Fn(&[Complex64]) -> bool) -> Vec<Complex64> {
    loop {
        let z = ball(rng, n);
        if pred(&z) {
            return z;
        }
    }
}

pub fn lhat_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    sample_where(rng, n, in_lhat)
}

pub fn lie_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    sample_where(rng, n, in_lie_ball)
}

pub fn tetra_point(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let x = cube(rng, 3, 1.0);
        if in_tetrablock(&x).unwrap() {
            return x;
        }
    }
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `Ψ_g ∘ Ψ_h⁻¹` for `g`, `h` sending random points of `L_n` to `0`.
pub fn random_group_element(rng: &mut ChaCha8Rng, n: usize) -> lempert_core::automorphisms::GroupElement {
    use lempert_core::automorphisms::lie_ball_to_origin;
    let g = lie_ball_to_origin(&lie_point(rng, n)).unwrap();
    let h = lie_ball_to_origin(&lie_point(rng, n)).unwrap();
    &g * &h.inverse()
}
