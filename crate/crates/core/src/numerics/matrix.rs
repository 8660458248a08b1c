//! The unit ball of 2×2 complex matrices and its Möbius maps.
//!
//! `𝔼` is the image of this ball under `S ↦ (s₁₁, s₂₂, det S)`; extremal
//! discs for `𝔼` are produced here and pushed down.

use nalgebra::Matrix2;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::automorphisms::TetraMobius;

pub type Mat2 = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest singular value.
pub fn op_norm(m: &Mat2) -> f64 {
    let t: f64 = m.iter().map(|c| c.norm_sqr()).sum();
    let d = m.determinant().norm();
    ((t + (t * t - 4.0 * d * d).max(0.0).sqrt()) / 2.0).sqrt()
}

/// Square root of a Hermitian positive semidefinite matrix.
fn psd_sqrt(m: &Mat2) -> Mat2 {
    let s = m.determinant().re.max(0.0).sqrt();
    let t = (m.trace().re + 2.0 * s).sqrt();
    (m + Mat2::identity() * Complex64::new(s, 0.0)) / Complex64::new(t, 0.0)
}

fn inverse(m: &Mat2) -> Option<Mat2> {
    let det = m.determinant();
    if det.norm() < 1e-300 {
        return None;
    }
    Some(Mat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det)
}

/// The automorphism `φ_A(B) = (I − AA*)^{−1/2}(B − A)(I − A*B)^{−1}(I − A*A)^{1/2}`
/// of the matrix ball, sending `A` to `0`.
#[derive(Clone, Copy, Debug)]
pub struct MatrixMobius {
    a: Mat2,
    left: Mat2,
    right: Mat2,
}

impl MatrixMobius {
    /// `None` unless `‖A‖ < 1`.
    pub fn new(a: Mat2) -> Option<Self> {
        if op_norm(&a) >= 1.0 {
            return None;
        }
        let id = Mat2::identity();
        let left = inverse(&psd_sqrt(&(id - a * a.adjoint())))?;
        let right = psd_sqrt(&(id - a.adjoint() * a));
        Some(Self { a, left, right })
    }

    pub fn apply(&self, b: &Mat2) -> Option<Mat2> {
        let mid = inverse(&(Mat2::identity() - self.a.adjoint() * b))?;
        Some(self.left * (b - self.a) * mid * self.right)
    }

    /// Derivative at `A`: `X ↦ (I − AA*)^{−1/2} X (I − A*A)^{−1/2}`.
    pub fn differential_at_center(&self, x: &Mat2) -> Option<Mat2> {
        Some(self.left * x * inverse(&self.right)?)
    }
}

/// `(s₁₁, s₂₂, det S)`.
pub fn tetra_image(s: &Mat2) -> [Complex64; 3] {
    [s[(0, 0)], s[(1, 1)], s.determinant()]
}

/// The matrix ball automorphism covering `m`: `φ_B` with
/// `B = diag(β₁, β₂)`, then the flip `S ↦ PSP`, then left multiplication by
/// `diag(η₁, η₂)`.
pub fn lift_tetra_mobius(m: &TetraMobius, s: &Mat2) -> Option<Mat2> {
    let b = Mat2::new(m.beta1, ZERO, ZERO, m.beta2);
    let y = MatrixMobius::new(b)?.apply(s)?;
    let y = if m.flip { Mat2::new(y[(1, 1)], y[(1, 0)], y[(0, 1)], y[(0, 0)]) } else { y };
    Some(Mat2::new(m.eta1, ZERO, ZERO, m.eta2) * y)
}

/// A lift `[[x₁, u], [π/u, x₂]]` of `x ∈ 𝔼`, `π = x₁x₂ − x₃`.
pub fn lift(x: &[Complex64], u: Complex64) -> Mat2 {
    let pi = x[0] * x[1] - x[2];
    Mat2::new(x[0], u, pi / u, x[1])
}

/// Lifts `[[x₁, u], [0, x₂]]` or, transposed, `[[x₁, 0], [u, x₂]]`, valid
/// when `x₃ = x₁x₂`.
pub fn triangular_lift(x: &[Complex64], u: Complex64, upper: bool) -> Mat2 {
    if upper {
        Mat2::new(x[0], u, ZERO, x[1])
    } else {
        Mat2::new(x[0], ZERO, u, x[1])
    }
}

/// The disc `ζ ↦ φ_{−A}(ζK)` in the matrix ball, where `‖K‖ = 1`. It passes
/// through `A` at `0`.
#[derive(Clone, Copy, Debug)]
pub struct MatrixDisc {
    a: Mat2,
    k: Mat2,
    inv: MatrixMobius,
}

impl MatrixDisc {
    pub fn new(a: Mat2, k: Mat2) -> Option<Self> {
        let inv = MatrixMobius::new(-a)?;
        Some(Self { a, k, inv })
    }

    pub fn center(&self) -> Mat2 {
        self.a
    }

    pub fn direction(&self) -> Mat2 {
        self.k
    }

    pub fn at(&self, zeta: Complex64) -> Option<Mat2> {
        self.inv.apply(&(self.k * zeta))
    }

    /// `(I − AA*)^{1/2} K (I − A*A)^{1/2}`.
    pub fn derivative_at_zero(&self) -> Mat2 {
        let id = Mat2::identity();
        psd_sqrt(&(id - self.a * self.a.adjoint())) * self.k * psd_sqrt(&(id - self.a.adjoint() * self.a))
    }

    /// Radius of the nearest pole, `≥ 1/‖A‖`.
    pub fn pole_radius(&self) -> f64 {
        // poles where det(I + ζA*K) = 0
        let m = self.a.adjoint() * self.k;
        let (tr, det) = (m.trace(), m.determinant());
        let disc = (tr * tr - det * 4.0).sqrt();
        [(-tr + disc) / 2.0, (-tr - disc) / 2.0]
            .iter()
            .filter(|mu| mu.norm() > 1e-300)
            .map(|mu| 1.0 / mu.norm())
            .fold(f64::INFINITY, f64::min)
    }
}
