//! Polynomial discs in the matrix ball, fitted by convex minimax and pushed
//! to `𝔼` by `S ↦ (s₁₁, s₂₂, det S)`.
//!
//! With the interpolation constraints eliminated through the two lowest
//! coefficients, `max_{ζ∈𝕋} ‖F(ζ)‖` is a convex function of the remaining
//! ones, so a smoothed maximum minimized by L-BFGS finds the best polynomial
//! disc of the given degree. The pushed disc has twice that degree.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::disc::{taylor_coeffs, AnalyticDisc, CertifiedDisc, CertifyOptions, Interpolation};
use super::matrix::{op_norm, Mat2};
use super::optimize::{lbfgs, LbfgsOptions};
use crate::domain::DomainKind;
use crate::metrics::atanh_clamped;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ENTRIES: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];
const SHARPNESS: [f64; 5] = [20.0, 200.0, 2e3, 2e4, 2e5];

/// Linear constraints on a matrix polynomial `F`.
#[derive(Clone, Copy, Debug)]
enum Pins {
    /// `F(m₁) = A`, `F(m₂) = B` at real `m₁ < m₂`.
    Nodes { a: Mat2, b: Mat2, m1: f64, m2: f64 },
    /// `F(0) = A`, `F'(0) = D`.
    Tangent { a: Mat2, d: Mat2 },
}

struct Fitter {
    degree: usize,
    /// `ζ_k^j` for the boundary grid.
    powers: Vec<Vec<Complex64>>,
}

impl Fitter {
    fn new(degree: usize, grid: usize) -> Self {
        let powers = (0..grid)
            .map(|k| {
                let z = Complex64::from_polar(1.0, core::f64::consts::TAU * k as f64 / grid as f64);
                let mut row = Vec::with_capacity(degree + 1);
                let mut p = Complex64::new(1.0, 0.0);
                for _ in 0..=degree {
                    row.push(p);
                    p *= z;
                }
                row
            })
            .collect();
        Self { degree, powers }
    }

    fn free_len(&self) -> usize {
        8 * (self.degree - 1)
    }

    fn coeffs(&self, pins: &Pins, x: &[f64]) -> Vec<Mat2> {
        let mut c = vec![Mat2::zeros(); self.degree + 1];
        for j in 2..=self.degree {
            for (e, &(p, q)) in ENTRIES.iter().enumerate() {
                let i = 8 * (j - 2) + 2 * e;
                c[j][(p, q)] = Complex64::new(x[i], x[i + 1]);
            }
        }
        match *pins {
            Pins::Nodes { a, b, m1, m2 } => {
                let (mut r1, mut r2) = (a, b);
                for (j, cj) in c.iter().enumerate().skip(2) {
                    r1 -= cj * Complex64::new(m1.powi(j as i32), 0.0);
                    r2 -= cj * Complex64::new(m2.powi(j as i32), 0.0);
                }
                c[1] = (r2 - r1) / Complex64::new(m2 - m1, 0.0);
                c[0] = r1 - c[1] * Complex64::new(m1, 0.0);
            }
            Pins::Tangent { a, d } => {
                c[0] = a;
                c[1] = d;
            }
        }
        c
    }

    /// `∂F(ζ)/∂c_j` once the constraints are solved for `c₀` and `c₁`.
    fn basis(pins: &Pins, j: usize, powers: &[Complex64]) -> Complex64 {
        match *pins {
            Pins::Nodes { m1, m2, .. } => {
                let (p1, p2) = (m1.powi(j as i32), m2.powi(j as i32));
                powers[j] - p1 - (powers[1] - m1) * ((p2 - p1) / (m2 - m1))
            }
            Pins::Tangent { .. } => powers[j],
        }
    }

    fn eval(c: &[Mat2], powers: &[Complex64]) -> Mat2 {
        c.iter().zip(powers).fold(Mat2::zeros(), |acc, (m, p)| acc + m * *p)
    }

    fn max_norm(&self, pins: &Pins, x: &[f64]) -> f64 {
        let c = self.coeffs(pins, x);
        self.powers.iter().map(|p| op_norm(&Self::eval(&c, p))).fold(0.0, f64::max)
    }

    /// Soft maximum of the boundary norms at sharpness `beta`, with gradient.
    fn smooth_max(&self, pins: &Pins, beta: f64, x: &[f64], grad: &mut [f64]) -> f64 {
        let c = self.coeffs(pins, x);
        let parts: Vec<(f64, Complex64, Complex64, Complex64, Complex64)> =
            self.powers.iter().map(|p| top_singular(&Self::eval(&c, p))).collect();
        let m = parts.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = parts.iter().map(|t| (beta * (t.0 - m)).exp()).collect();
        let total: f64 = weights.iter().sum();
        grad.iter_mut().for_each(|g| *g = 0.0);
        for ((w, &(_, u0, u1, v0, v1)), p) in weights.iter().zip(&parts).zip(&self.powers) {
            let w = w / total;
            if w < 1e-300 {
                continue;
            }
            let uv = [u0.conj() * v0, u0.conj() * v1, u1.conj() * v0, u1.conj() * v1];
            for j in 2..=self.degree {
                let b = Self::basis(pins, j, p) * w;
                for (e, g) in uv.iter().enumerate() {
                    let i = 8 * (j - 2) + 2 * e;
                    let t = b * g;
                    grad[i] += t.re;
                    grad[i + 1] -= t.im;
                }
            }
        }
        m + total.ln() / beta
    }

    /// Minimizes the boundary norm from `x0`; returns the free coefficients
    /// and the attained maximum.
    fn fit(&self, pins: &Pins, x0: &[f64], evals: &mut usize) -> (Vec<f64>, f64) {
        if self.degree < 2 {
            return (Vec::new(), self.max_norm(pins, &[]));
        }
        let opts = LbfgsOptions { memory: 10, max_iter: 300, gtol: 1e-12, ftol: 1e-14 };
        let mut x = x0.to_vec();
        let mut best = (x.clone(), self.max_norm(pins, &x));
        for beta in SHARPNESS {
            let m = lbfgs(|x, g| self.smooth_max(pins, beta, x, g), &x, opts);
            *evals += m.evals;
            x = m.x;
            let value = self.max_norm(pins, &x);
            if value < best.1 {
                best = (x.clone(), value);
            }
        }
        best
    }

    /// Free coefficients of `ζ ↦ E(rζ)`, truncated.
    fn start(&self, exact: &dyn Fn(Complex64) -> Option<Mat2>, r: f64) -> Vec<f64> {
        let h = |z: Complex64| exact(z).map(|m| ENTRIES.iter().map(|&(p, q)| m[(p, q)]).collect());
        let mut x = vec![0.0; self.free_len()];
        if let Some(t) = taylor_coeffs(&h, 4, r, self.degree) {
            for j in 2..=self.degree {
                for e in 0..4 {
                    let i = 8 * (j - 2) + 2 * e;
                    x[i] = t[j][e].re;
                    x[i + 1] = t[j][e].im;
                }
            }
        }
        x
    }
}

/// `(σ, u, v)` with `Mv = σu` for the top singular pair of `M`.
fn top_singular(m: &Mat2) -> (f64, Complex64, Complex64, Complex64, Complex64) {
    let h = m.adjoint() * m;
    let (h11, h12, h21, h22) = (h[(0, 0)].re, h[(0, 1)], h[(1, 0)], h[(1, 1)].re);
    let tr = h11 + h22;
    let det = h11 * h22 - h12.norm_sqr();
    let lambda = (tr + (tr * tr - 4.0 * det).max(0.0).sqrt()) / 2.0;
    let a = (h12, Complex64::new(lambda - h11, 0.0));
    let b = (Complex64::new(lambda - h22, 0.0), h21);
    let na = (a.0.norm_sqr() + a.1.norm_sqr()).sqrt();
    let nb = (b.0.norm_sqr() + b.1.norm_sqr()).sqrt();
    let (v0, v1) = if na.max(nb) < 1e-300 {
        (Complex64::new(1.0, 0.0), ZERO)
    } else if na >= nb {
        (a.0 / na, a.1 / na)
    } else {
        (b.0 / nb, b.1 / nb)
    };
    let sigma = lambda.sqrt();
    let (u0, u1) = if sigma > 1e-300 {
        ((m[(0, 0)] * v0 + m[(0, 1)] * v1) / sigma, (m[(1, 0)] * v0 + m[(1, 1)] * v1) / sigma)
    } else {
        (Complex64::new(1.0, 0.0), ZERO)
    };
    (sigma, u0, u1, v0, v1)
}

/// `S ↦ (s₁₁, s₂₂, det S)` applied to a matrix polynomial.
fn push_forward(c: &[Mat2]) -> Vec<Vec<Complex64>> {
    let d = c.len() - 1;
    let mut out = vec![vec![ZERO; 3]; 2 * d + 1];
    for (i, ci) in c.iter().enumerate() {
        out[i][0] = ci[(0, 0)];
        out[i][1] = ci[(1, 1)];
        for (j, cj) in c.iter().enumerate() {
            out[i + j][2] += ci[(0, 0)] * cj[(1, 1)] - ci[(0, 1)] * cj[(1, 0)];
        }
    }
    out
}

/// Best certified disc `π∘F` in `𝔼`, `F` a matrix polynomial of degree
/// `opts.degree` following the exact matrix disc `E`. For `Nodes` data,
/// `E(a)` and `E(b)` lift `z` and `w`; for `Tangent` data, `E(0)` lifts the
/// centre and `dπ(E'(0)) = X/α`, with `d = E'(0)`. The polynomial tracks
/// `ζ ↦ E(rζ)` and meets the data at rescaled nodes, so the bound grows as
/// `r` shrinks; `r` is bisected on the scale of the bound.
pub(crate) fn lift_disc(
    exact: &dyn Fn(Complex64) -> Option<Mat2>,
    data: &Interpolation,
    d: Option<Mat2>,
    ceiling: f64,
    opts: &CertifyOptions,
) -> Option<CertifiedDisc> {
    let fitter = Fitter::new(opts.degree.max(1), opts.grid);
    let bound_at = |r: f64| match data {
        Interpolation::Nodes { a, b, .. } => {
            let (m1, m2) = (a / r, b / r);
            atanh_clamped((m2 - m1) / (1.0 - m1 * m2))
        }
        Interpolation::Tangent { alpha, .. } => alpha / r,
        Interpolation::Point { sigma, .. } => atanh_clamped(sigma / r),
    };
    let r_min = match data {
        Interpolation::Nodes { a, b, .. } => a.abs().max(b.abs()),
        Interpolation::Tangent { .. } => 0.0,
        Interpolation::Point { sigma, .. } => *sigma,
    };
    let base = bound_at(1.0);
    // the radius whose bound is `base + t`; the bound decreases in r
    let radius = |t: f64| {
        let target = base + t;
        if target.tanh() >= ceiling {
            return None;
        }
        let (mut lo, mut hi) = (r_min, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if bound_at(mid) > target { lo = mid } else { hi = mid }
        }
        Some(hi)
    };
    let a0 = exact(Complex64::new(0.0, 0.0))?;
    let limit = 1.0 - opts.margin;
    let build = |t: f64, warm: &[f64], evals: &mut usize| -> Option<(Vec<f64>, AnalyticDisc, f64)> {
        let r = radius(t)?;
        let (pins, interp) = match data {
            Interpolation::Nodes { z, a, w, b } => {
                let pins = Pins::Nodes { a: exact(Complex64::new(*a, 0.0))?, b: exact(Complex64::new(*b, 0.0))?, m1: a / r, m2: b / r };
                (pins, Interpolation::nodes(z.clone(), a / r, w.clone(), b / r))
            }
            Interpolation::Point { sigma, w } => {
                let pins = Pins::Nodes { a: a0, b: exact(Complex64::new(*sigma, 0.0))?, m1: 0.0, m2: sigma / r };
                (pins, Interpolation::Point { sigma: sigma / r, w: w.clone() })
            }
            Interpolation::Tangent { direction, alpha } => {
                let pins = Pins::Tangent { a: a0, d: d? * Complex64::new(r, 0.0) };
                (pins, Interpolation::Tangent { direction: direction.clone(), alpha: alpha / r })
            }
        };
        let start = fitter.start(exact, r);
        let mut fit = fitter.fit(&pins, &start, evals);
        if warm.len() == start.len() && !warm.is_empty() {
            let other = fitter.fit(&pins, warm, evals);
            if other.1 < fit.1 {
                fit = other;
            }
        }
        if fit.1 > limit {
            return None;
        }
        let disc = AnalyticDisc::new(push_forward(&fitter.coeffs(&pins, &fit.0)), DomainKind::Tetrablock, interp).ok()?;
        disc.certify(opts.grid, opts.margin).then_some((fit.0, disc, bound_at(r)))
    };

    // grow the loss until a disc certifies, then bisect
    let mut evals = 0usize;
    let mut lo = 0.0;
    let mut hi = opts.tolerance.max(1e-6);
    let mut best = None;
    for _ in 0..40 {
        if let Some(found) = build(hi, &[], &mut evals) {
            best = Some(found);
            break;
        }
        lo = hi;
        hi *= 4.0;
        if (base + hi).tanh() >= ceiling {
            return None;
        }
    }
    let (mut x, mut disc, mut value) = best?;
    while hi - lo > opts.tolerance {
        let mid = 0.5 * (lo + hi);
        match build(mid, &x, &mut evals) {
            Some(found) => {
                (x, disc, value) = found;
                hi = mid;
            }
            None => lo = mid,
        }
    }
    // the fine re-check; back off if it fails
    let mut t = hi;
    for _ in 0..20 {
        if disc.certify(opts.recheck_grid, opts.margin / 2.0) {
            return Some(CertifiedDisc { disc, value, evals });
        }
        t = 2.0 * t + opts.tolerance;
        (x, disc, value) = build(t, &x, &mut evals)?;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::tetra_image;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn singular_pair_matches_norm() {
        let m = Mat2::new(c(0.3, 0.1), c(-0.2, 0.5), c(0.0, 0.4), c(0.1, -0.3));
        let (s, u0, u1, v0, v1) = top_singular(&m);
        assert!((s - op_norm(&m)).abs() < 1e-12);
        let mv0 = m[(0, 0)] * v0 + m[(0, 1)] * v1;
        let mv1 = m[(1, 0)] * v0 + m[(1, 1)] * v1;
        assert!((mv0 - u0 * s).norm() < 1e-12 && (mv1 - u1 * s).norm() < 1e-12);
    }

    #[test]
    fn push_forward_matches_pointwise_image() {
        let c0 = Mat2::new(c(0.1, 0.0), c(0.2, 0.1), c(-0.1, 0.0), c(0.0, 0.3));
        let c1 = Mat2::new(c(0.0, 0.2), c(0.1, 0.0), c(0.3, -0.1), c(0.2, 0.0));
        let c2 = Mat2::new(c(0.05, 0.0), c(0.0, 0.1), c(0.0, 0.0), c(-0.1, 0.1));
        let coeffs = push_forward(&[c0, c1, c2]);
        let z = c(0.3, -0.7);
        let m = c0 + c1 * z + c2 * z * z;
        let direct = tetra_image(&m);
        for k in 0..3 {
            let v: Complex64 = coeffs.iter().enumerate().map(|(j, row)| row[k] * z.powi(j as i32)).sum();
            assert!((v - direct[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let a = Mat2::new(c(0.0, 0.0), c(0.5, 0.0), c(-0.3, 0.0), c(0.0, 0.0));
        let b = Mat2::new(c(0.2, 0.1), c(0.1, 0.0), c(0.0, 0.3), c(-0.2, 0.0));
        let f = Fitter::new(3, 64);
        let pins = Pins::Nodes { a, b, m1: -0.3, m2: 0.6 };
        let x: Vec<f64> = (0..f.free_len()).map(|i| 0.05 * ((i as f64) * 0.7).sin()).collect();
        let mut g = vec![0.0; x.len()];
        f.smooth_max(&pins, 50.0, &x, &mut g);
        let mut scratch = vec![0.0; x.len()];
        for i in 0..x.len() {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[i] += 1e-6;
            xm[i] -= 1e-6;
            let fd = (f.smooth_max(&pins, 50.0, &xp, &mut scratch) - f.smooth_max(&pins, 50.0, &xm, &mut scratch)) / 2e-6;
            assert!((fd - g[i]).abs() < 1e-6, "{i}: {fd} vs {}", g[i]);
        }
    }
}
