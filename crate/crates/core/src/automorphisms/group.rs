//! The group `G(n)` and its Möbius action on the Lie ball.
//!
//! `g = [A B; C D]` is a real `(n+2)×(n+2)` matrix with
//! `gᵀ J g = J`, `J = diag(Id_n, −Id_2)` and `det D > 0`. It acts by
//!
//! ```text
//! Ψ_g(z) = (A z + B W(z)) / ((1 i)(C z + D W(z))),
//! W(z)   = (½(⟨z,z̄⟩ + 1), (i/2)(⟨z,z̄⟩ − 1)),
//! ```
//!
//! where `⟨z,z̄⟩ = Σ z_j²` in both components. `(z, W(z))` is then a null
//! vector of `J` normalized by `(1 i)W = 1`, so `Ψ_{gh} = Ψ_g ∘ Ψ_h`.

use alloc::vec::Vec;
use core::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::domain::{gauge_p, in_lie_ball, symmetric_square, DomainKind, Point};
use crate::rotations::{normal_frame, Frame};
use crate::{Error, Result};

/// Entrywise tolerance of the `J`-isometry check.
pub const GROUP_TOL: f64 = 1e-10;
/// Smallest admissible modulus of the Möbius denominator.
pub const SINGULAR_TOL: f64 = 1e-13;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// An element of `G(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    n: usize,
    m: DMatrix<f64>,
}

impl GroupElement {
    /// Validates the `J`-isometry (entrywise, 1e−10) and `det D > 0`.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || m.nrows() < 3 {
            return Err(Error::InvalidGroupElement("matrix must be square of size n + 2 ≥ 3"));
        }
        let g = Self { n: m.nrows() - 2, m };
        if g.isometry_defect() > GROUP_TOL {
            return Err(Error::InvalidGroupElement("gᵀJg ≠ J"));
        }
        if g.det_d() <= 0.0 {
            return Err(Error::InvalidGroupElement("det D ≤ 0"));
        }
        Ok(g)
    }

    pub fn from_blocks(
        a: &DMatrix<f64>,
        b: &DMatrix<f64>,
        c: &DMatrix<f64>,
        d: &DMatrix<f64>,
    ) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || b.shape() != (n, 2) || c.shape() != (2, n) || d.shape() != (2, 2) {
            return Err(Error::InvalidGroupElement("block shapes do not fit"));
        }
        let mut m = DMatrix::zeros(n + 2, n + 2);
        m.view_mut((0, 0), (n, n)).copy_from(a);
        m.view_mut((0, n), (n, 2)).copy_from(b);
        m.view_mut((n, 0), (2, n)).copy_from(c);
        m.view_mut((n, n), (2, 2)).copy_from(d);
        Self::new(m)
    }

    pub fn identity(n: usize) -> Self {
        Self { n, m: DMatrix::identity(n + 2, n + 2) }
    }

    /// The dimension `n` of the Lie ball the element acts on.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn block_a(&self) -> DMatrix<f64> {
        self.m.view((0, 0), (self.n, self.n)).into_owned()
    }

    pub fn block_b(&self) -> DMatrix<f64> {
        self.m.view((0, self.n), (self.n, 2)).into_owned()
    }

    pub fn block_c(&self) -> DMatrix<f64> {
        self.m.view((self.n, 0), (2, self.n)).into_owned()
    }

    pub fn block_d(&self) -> DMatrix<f64> {
        self.m.view((self.n, self.n), (2, 2)).into_owned()
    }

    fn det_d(&self) -> f64 {
        let k = self.n;
        self.m[(k, k)] * self.m[(k + 1, k + 1)] - self.m[(k, k + 1)] * self.m[(k + 1, k)]
    }

    /// Largest entry of `|gᵀJg − J|`.
    pub fn isometry_defect(&self) -> f64 {
        let j = signature(self.n);
        let lhs = self.m.transpose() * &j * &self.m;
        (lhs - j).abs().max()
    }

    /// `g⁻¹ = J gᵀ J`.
    pub fn inverse(&self) -> Self {
        let j = signature(self.n);
        Self { n: self.n, m: &j * self.m.transpose() * &j }
    }

    /// The product `self · other`, i.e. `Ψ_self ∘ Ψ_other`.
    pub fn compose(&self, other: &GroupElement) -> Self {
        assert_eq!(self.n, other.n, "composing elements of different groups");
        Self { n: self.n, m: &self.m * &other.m }
    }

    /// `diag(Q, R_θ)` for a real orthogonal `Q`; acts by `z ↦ e^{−iθ} Q z`.
    pub fn linear(q: &DMatrix<f64>, theta: f64) -> Result<Self> {
        let n = q.nrows();
        let mut m = DMatrix::identity(n + 2, n + 2);
        m.view_mut((0, 0), (n, n)).copy_from(q);
        let (s, c) = theta.sin_cos();
        m[(n, n)] = c;
        m[(n, n + 1)] = -s;
        m[(n + 1, n)] = s;
        m[(n + 1, n + 1)] = c;
        Self::new(m)
    }

    /// The linear automorphism `z ↦ ηAz` of a frame.
    pub fn from_frame(frame: &Frame) -> Self {
        Self::linear(&frame.rotation, -frame.eta.arg()).expect("frames are orthogonal")
    }

    /// Hyperbolic rotation mixing coordinate `axis ∈ {0, 1}` with the
    /// matching component of `W`. Acting on the origin it gives
    /// `tanh(s/2)·e_1` (axis 0) or `−i tanh(s/2)·e_2` (axis 1).
    pub fn boost(n: usize, axis: usize, s: f64) -> Self {
        assert!(axis < 2 && axis < n, "boost axis out of range");
        let mut m = DMatrix::identity(n + 2, n + 2);
        let w = n + axis;
        let (ch, sh) = (s.cosh(), s.sinh());
        m[(axis, axis)] = ch;
        m[(w, w)] = ch;
        m[(axis, w)] = sh;
        m[(w, axis)] = sh;
        Self { n, m }
    }

    pub fn apply(&self, z: &[Complex64]) -> Result<Point> {
        apply_mobius(self, z)
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: &GroupElement) -> GroupElement {
        self.compose(rhs)
    }
}

fn signature(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n + 2, n + 2, |i, j| match (i == j, i < n) {
        (true, true) => 1.0,
        (true, false) => -1.0,
        _ => 0.0,
    })
}

/// `W(z) = (½(q + 1), (i/2)(q − 1))` with `q = Σ z_j²`.
pub fn w_vector(z: &[Complex64]) -> (Complex64, Complex64) {
    let q = symmetric_square(z);
    ((q + 1.0) * 0.5, I * 0.5 * (q - 1.0))
}

/// `Ψ_g(z)` for `z` in the closed Lie ball.
pub fn apply_mobius(g: &GroupElement, z: &[Complex64]) -> Result<Point> {
    let n = g.n;
    if z.len() != n {
        return Err(Error::Dimension { expected: n, got: z.len() });
    }
    if gauge_p(z) > 1.0 + 1e-9 {
        return Err(Error::OutsideDomain(DomainKind::LieBall(n)));
    }
    let (w1, w2) = w_vector(z);
    let m = &g.m;
    let row = |i: usize| -> Complex64 {
        let lin: Complex64 = (0..n).map(|j| z[j] * m[(i, j)]).sum();
        lin + w1 * m[(i, n)] + w2 * m[(i, n + 1)]
    };
    let den = row(n) + I * row(n + 1);
    if den.norm() < SINGULAR_TOL {
        return Err(Error::Singularity(den.norm()));
    }
    let coords: Vec<Complex64> = (0..n).map(|i| row(i) / den).collect();
    Ok(Point::from_vec_unchecked(coords))
}

/// `κ(g) = [1 0 0; 0 A B; 0 C D] ∈ G(n+1)`: the new variable is prepended.
pub fn kappa_lift(g: &GroupElement) -> GroupElement {
    let k = g.n + 2;
    let mut m = DMatrix::identity(k + 1, k + 1);
    m.view_mut((1, 1), (k, k)).copy_from(&g.m);
    GroupElement { n: g.n + 1, m }
}

/// `κ` conjugated by the permutation that appends the new variable:
/// `[A 0 B; 0 1 0; C 0 D] ∈ G(n+1)`.
pub fn kappa_append(g: &GroupElement) -> GroupElement {
    let n = g.n;
    let mut m = DMatrix::identity(n + 3, n + 3);
    let map = |i: usize| if i < n { i } else { i + 1 };
    for i in 0..n + 2 {
        for j in 0..n + 2 {
            m[(map(i), map(j))] = g.m[(i, j)];
        }
    }
    GroupElement { n: n + 1, m }
}

/// Pads `g ∈ G(k)` to `G(n)` by repeatedly appending fixed variables.
pub fn embed_leading(g: &GroupElement, n: usize) -> GroupElement {
    assert!(n >= g.n, "cannot embed G({}) into G({n})", g.n);
    let mut out = g.clone();
    while out.n < n {
        out = kappa_append(&out);
    }
    out
}

/// The element of `G(2)` acting on the bidisc picture
/// `(ζ_1, ζ_2) = (x_1 + ix_2, x_1 − ix_2)` of `L_2` by
/// `ζ_k ↦ (ζ_k + τ_k)/(1 + τ_k ζ_k)`, `τ_k ∈ (−1, 1)`.
pub fn bidisc_translation(tau1: f64, tau2: f64) -> GroupElement {
    let (h1, h2) = (tau1.atanh(), tau2.atanh());
    &GroupElement::boost(2, 0, h1 + h2) * &GroupElement::boost(2, 1, h1 - h2)
}

/// The element of `G(2)` acting on the bidisc picture by
/// `ζ_k ↦ e^{iφ_k} ζ_k`.
pub fn bidisc_rotation(phi1: f64, phi2: f64) -> GroupElement {
    let chi = 0.5 * (phi1 - phi2);
    let psi = 0.5 * (phi1 + phi2);
    let (s, c) = chi.sin_cos();
    let r = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
    GroupElement::linear(&r, -psi).expect("rotation blocks are orthogonal")
}

/// The element of `G(2)` exchanging the two bidisc factors, `x_2 ↦ −x_2`.
pub fn bidisc_swap() -> GroupElement {
    let r = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    GroupElement::linear(&r, 0.0).expect("reflection is orthogonal")
}

/// An element `g` with `Ψ_g(z) = 0`.
///
/// `z` is first rotated to `(a, ib, 0, …, 0)`. On the slice spanned by the
/// first two coordinates the point reads `(a − b, a + b)` in the bidisc
/// picture and a pair of real disc translations takes it to the origin.
pub fn lie_ball_to_origin(z: &[Complex64]) -> Result<GroupElement> {
    let n = z.len();
    if !in_lie_ball(z) {
        return Err(Error::OutsideDomain(DomainKind::LieBall(n)));
    }
    if z.iter().all(|c| c.norm() == 0.0) {
        return Ok(GroupElement::identity(n));
    }
    if n == 1 {
        let r = z[0].norm();
        let rotate = GroupElement::linear(&DMatrix::identity(1, 1), z[0].arg())?;
        let translate = GroupElement::boost(1, 0, 2.0 * r.atanh()).inverse();
        return Ok(&translate * &rotate);
    }
    let frame = normal_frame(z)?;
    let image = frame.apply(z)?;
    let (a, b) = (image[0].re, image[1].im);
    let to_point = embed_leading(&bidisc_translation(a - b, a + b), n);
    Ok(&to_point.inverse() * &GroupElement::from_frame(&frame))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_ball_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        loop {
            let z: Vec<Complex64> =
                (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            if in_lie_ball(&z) {
                return z;
            }
        }
    }

    #[test]
    fn w_vector_examples() {
        let (w1, w2) = w_vector(&[c(0.0, 0.0); 3]);
        assert_eq!((w1, w2), (c(0.5, 0.0), c(0.0, -0.5)));
        let (w1, w2) = w_vector(&[c(1.0, 0.0), c(0.0, 1.0)]);
        assert_eq!((w1, w2), (c(0.5, 0.0), c(0.0, -0.5)));
        let (w1, w2) = w_vector(&[c(0.3, 0.0), c(0.4, 0.0), c(0.0, 0.0)]);
        assert!((w1 - c(0.625, 0.0)).norm() < 1e-15 && (w2 - c(0.0, -0.375)).norm() < 1e-15);
    }

    #[test]
    fn identity_and_rotations_act_as_expected() {
        let z = [c(0.3, -0.1), c(0.2, 0.25), c(-0.1, 0.05)];
        let out = apply_mobius(&GroupElement::identity(3), &z).unwrap();
        assert!(out.approx_eq(&Point::new(z.to_vec()).unwrap(), 1e-15));

        let theta = 0.7;
        let g = GroupElement::linear(&DMatrix::identity(3, 3), theta).unwrap();
        let out = apply_mobius(&g, &z).unwrap();
        let expect = Point::new(z.to_vec()).unwrap().scale(Complex64::from_polar(1.0, -theta));
        assert!(out.approx_eq(&expect, 1e-14));

        let (s, co) = 0.4f64.sin_cos();
        let q = DMatrix::from_row_slice(3, 3, &[co, -s, 0.0, s, co, 0.0, 0.0, 0.0, 1.0]);
        let g = GroupElement::linear(&q, 0.0).unwrap();
        let out = apply_mobius(&g, &z).unwrap();
        let expect = [z[0] * co - z[1] * s, z[0] * s + z[1] * co, z[2]];
        assert!(out.approx_eq(&Point::new(expect.to_vec()).unwrap(), 1e-14));
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let mut m = DMatrix::identity(4, 4);
        m[(0, 0)] = 2.0;
        assert!(GroupElement::new(m).is_err());
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![1.0, 1.0, 1.0, -1.0]));
        assert_eq!(GroupElement::new(m), Err(Error::InvalidGroupElement("det D ≤ 0")));
        assert!(GroupElement::new(DMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn boosts_move_the_origin_along_axes() {
        let s: f64 = 0.9;
        let t = (0.5 * s).tanh();
        let g = GroupElement::boost(3, 0, s);
        assert!(GroupElement::new(g.matrix().clone()).is_ok());
        let out = apply_mobius(&g, &[c(0.0, 0.0); 3]).unwrap();
        assert!(out.approx_eq(&Point::from_pairs(&[(t, 0.0), (0.0, 0.0), (0.0, 0.0)]).unwrap(), 1e-14));
        let out = apply_mobius(&GroupElement::boost(3, 1, s), &[c(0.0, 0.0); 3]).unwrap();
        assert!(out.approx_eq(&Point::from_pairs(&[(0.0, 0.0), (0.0, -t), (0.0, 0.0)]).unwrap(), 1e-14));
    }

    #[test]
    fn bidisc_generators_act_factorwise() {
        let to_bidisc = |p: &Point| (p[0] + I * p[1], p[0] - I * p[1]);
        let from_bidisc = |a: Complex64, b: Complex64| [(a + b) * 0.5, (a - b) / (I * 2.0)];
        let (z1, z2) = (c(0.3, -0.2), c(-0.5, 0.4));
        let z = from_bidisc(z1, z2);

        let (t1, t2) = (0.4, -0.6);
        let out = apply_mobius(&bidisc_translation(t1, t2), &z).unwrap();
        let (y1, y2) = to_bidisc(&out);
        assert!((y1 - (z1 + t1) / (z1 * t1 + 1.0)).norm() < 1e-13);
        assert!((y2 - (z2 + t2) / (z2 * t2 + 1.0)).norm() < 1e-13);

        let (p1, p2) = (0.9, -2.1);
        let out = apply_mobius(&bidisc_rotation(p1, p2), &z).unwrap();
        let (y1, y2) = to_bidisc(&out);
        assert!((y1 - z1 * Complex64::from_polar(1.0, p1)).norm() < 1e-13);
        assert!((y2 - z2 * Complex64::from_polar(1.0, p2)).norm() < 1e-13);

        let out = apply_mobius(&bidisc_swap(), &z).unwrap();
        let (y1, y2) = to_bidisc(&out);
        assert!((y1 - z2).norm() < 1e-14 && (y2 - z1).norm() < 1e-14);
    }

    #[test]
    fn kappa_is_a_homomorphism_fixing_the_new_axis() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = lie_ball_to_origin(&random_ball_point(&mut rng, 3)).unwrap();
        let h = lie_ball_to_origin(&random_ball_point(&mut rng, 3)).unwrap();
        let lhs = kappa_lift(&(&g * &h));
        let rhs = &kappa_lift(&g) * &kappa_lift(&h);
        assert!((lhs.matrix() - rhs.matrix()).abs().max() < 1e-12);
        let id = &kappa_lift(&g) * &kappa_lift(&g.inverse());
        assert!((id.matrix() - DMatrix::identity(6, 6)).abs().max() < 1e-10);
        assert_eq!(kappa_lift(&GroupElement::identity(3)), GroupElement::identity(4));
        assert!(GroupElement::new(kappa_append(&g).matrix().clone()).is_ok());

        for _ in 0..100 {
            let z = random_ball_point(&mut rng, 3);
            let mut padded = alloc::vec![c(0.0, 0.0)];
            padded.extend_from_slice(&z);
            let lifted = apply_mobius(&kappa_lift(&g), &padded).unwrap();
            let direct = apply_mobius(&g, &z).unwrap();
            assert!(lifted[0].norm() < 1e-14);
            for i in 0..3 {
                assert!((lifted[i + 1] - direct[i]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn lie_ball_to_origin_examples() {
        assert_eq!(lie_ball_to_origin(&[c(0.0, 0.0); 3]).unwrap(), GroupElement::identity(3));
        let r = 0.6;
        let g = lie_ball_to_origin(&[c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(apply_mobius(&g, &[c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap()[0].norm() < 1e-12);
        let image_of_origin = apply_mobius(&g, &[c(0.0, 0.0); 3]).unwrap();
        assert!((gauge_p(&image_of_origin) - r).abs() < 1e-12);
        assert!((image_of_origin[0] - c(-r, 0.0)).norm() < 1e-12);
        assert!(lie_ball_to_origin(&[c(0.5, 0.0), c(0.0, 0.5)]).is_err());

        let g = lie_ball_to_origin(&[c(0.3, 0.4)]).unwrap();
        assert!(apply_mobius(&g, &[c(0.3, 0.4)]).unwrap()[0].norm() < 1e-12);
    }

    #[test]
    fn lie_ball_to_origin_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..1000 {
            let n = 2 + trial % 5;
            let z = random_ball_point(&mut rng, n);
            let g = lie_ball_to_origin(&z).unwrap();
            assert!(g.isometry_defect() < GROUP_TOL);
            let out = apply_mobius(&g, &z).unwrap();
            assert!(out.iter().all(|c| c.norm() < 1e-9), "{z:?} -> {out:?}");
        }
    }
}
