//! Automorphisms of `𝕃_n` obtained by descending `κ(G(n−1))` through `Λ_n`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::group::{apply_mobius, kappa_append, kappa_lift, GroupElement};
use crate::domain::{lambda_lift, lambda_map, Branch, Point};
use crate::rotations::Frame;
use crate::{Error, Result};

/// `Φ` with `Λ_n ∘ Ψ_{κ(g)} = Φ ∘ Λ_n` for some `g ∈ G(n−1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LhatAutomorphism {
    g: GroupElement,
    lifted: GroupElement,
}

impl LhatAutomorphism {
    /// Wraps `g ∈ G(n−1)` as an automorphism of `𝕃_n`.
    pub fn descend(g: GroupElement) -> Self {
        let lifted = kappa_lift(&g);
        Self { g, lifted }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 2, "𝕃_n automorphisms are built for n ≥ 2");
        Self::descend(GroupElement::identity(n - 1))
    }

    /// The real rotation `z ↦ (z_1, A' z')` where `A'` is the tail block of a
    /// frame fixing the first coordinate.
    pub fn tail_rotation(frame: &Frame) -> Result<Self> {
        let n = frame.dim();
        let a = &frame.rotation;
        let fixes_first = (a[(0, 0)] - 1.0).abs() < 1e-12
            && (1..n).all(|j| a[(0, j)].abs() < 1e-12 && a[(j, 0)].abs() < 1e-12);
        if n < 2 || !fixes_first || (frame.eta - 1.0).norm() > 1e-14 {
            return Err(Error::InvalidArgument("frame must be real and fix the first coordinate"));
        }
        let tail: DMatrix<f64> = a.view((1, 1), (n - 1, n - 1)).into_owned();
        Ok(Self::descend(GroupElement::linear(&tail, 0.0)?))
    }

    /// Dimension of `𝕃_n`.
    pub fn n(&self) -> usize {
        self.g.n() + 1
    }

    /// The underlying element of `G(n−1)`.
    pub fn group_element(&self) -> &GroupElement {
        &self.g
    }

    pub fn lifted(&self) -> &GroupElement {
        &self.lifted
    }

    pub fn apply(&self, w: &[Complex64]) -> Result<Point> {
        self.apply_branch(w, Branch::Plus)
    }

    /// Evaluation through a chosen lift; the result does not depend on it.
    pub fn apply_branch(&self, w: &[Complex64], branch: Branch) -> Result<Point> {
        if w.len() != self.n() {
            return Err(Error::Dimension { expected: self.n(), got: w.len() });
        }
        let lift = lambda_lift(&Point::from_vec_unchecked(w.to_vec()), branch);
        Ok(lambda_map(&apply_mobius(&self.lifted, &lift)?))
    }

    pub fn inverse(&self) -> Self {
        Self::descend(self.g.inverse())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LhatAutomorphism) -> Self {
        Self::descend(self.g.compose(&other.g))
    }

    /// An automorphism `Φ̃` of `𝕃_{n+1}` with `Φ̃(z, 0) = (Φ(z), 0)`.
    pub fn extend(&self) -> Self {
        Self::descend(kappa_append(&self.g))
    }
}
