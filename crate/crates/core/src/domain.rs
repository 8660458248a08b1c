//! Complex bilinear geometry of `ℂⁿ` and the membership rules of the domains.
//!
//! Two pairings are in play:
//!
//! * the Hermitian product `⟨z,w⟩ = Σ z_j w̄_j`, giving `‖z‖`;
//! * the symmetric bilinear value `⟨z,z̄⟩ = Σ z_j²`, holomorphic in `z`.
//!
//! The gauge `p(z)² = ‖z‖² + √(‖z‖⁴ − |⟨z,z̄⟩|²)` is a norm and `L_n` is its
//! open unit ball. The image `𝕃_n = Λ_n(L_n)` under `Λ_n(z) = (z_1², z_2, …)`
//! is not convex; membership goes through the lifted gauge
//! [`lhat_gauge`], which is `p` evaluated at either preimage.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Deref, Index};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Absolute tolerance used by [`Point::approx_eq`] callers that have no
/// operation-specific tolerance.
pub const POINT_TOL: f64 = 1e-12;

/// A point or tangent vector of `ℂⁿ`, `n ≥ 1`, with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<Complex64>);

impl Point {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(coords))
    }

    /// Builds a point from `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }

    /// Builds a point with real coordinates.
    pub fn from_real(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "a point needs at least one coordinate");
        Self(alloc::vec![Complex64::new(0.0, 0.0); n])
    }

    /// Wraps coordinates produced by internal arithmetic.
    pub(crate) fn from_vec_unchecked(coords: Vec<Complex64>) -> Self {
        debug_assert!(!coords.is_empty());
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    /// Coordinates after the first one, `z' = (z_2, …, z_n)`.
    pub fn tail(&self) -> &[Complex64] {
        &self.0[1..]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn scale(&self, t: Complex64) -> Self {
        Self(self.0.iter().map(|c| c * t).collect())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|c| c.conj()).collect())
    }

    /// Largest coordinate-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Point) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        self.dim() == other.dim() && self.max_abs_diff(other) <= tol
    }
}

impl Deref for Point {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl Index<usize> for Point {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// The domains the crate knows how to measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainKind {
    /// The Cartan domain of type four `L_n`.
    LieBall(usize),
    /// The 2-proper image `𝕃_n = Λ_n(L_n)`.
    LHat(usize),
    /// The tetrablock in `ℂ³`.
    Tetrablock,
    /// The unit disc in `ℂ`.
    UnitDisc,
}

impl DomainKind {
    pub fn dim(&self) -> usize {
        match *self {
            DomainKind::LieBall(n) | DomainKind::LHat(n) => n,
            DomainKind::Tetrablock => 3,
            DomainKind::UnitDisc => 1,
        }
    }

    pub fn check_dim(&self, z: &Point) -> Result<()> {
        if z.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: z.dim() });
        }
        Ok(())
    }

    /// Exact membership test. Panics on a dimension mismatch.
    pub fn contains(&self, z: &Point) -> bool {
        assert_eq!(z.dim(), self.dim(), "dimension mismatch for {self}");
        match self {
            DomainKind::LieBall(_) => in_lie_ball(z),
            DomainKind::LHat(_) => in_lhat(z),
            DomainKind::Tetrablock => in_tetrablock(z).unwrap_or(false),
            DomainKind::UnitDisc => z[0].norm() < 1.0,
        }
    }

    /// `Ok(())` when `z` has the right dimension and lies in the domain.
    pub fn require(&self, z: &Point) -> Result<()> {
        self.check_dim(z)?;
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::OutsideDomain(*self))
        }
    }

    /// A continuous function that is `< 1` exactly on the domain and whose
    /// composition with any holomorphic disc is subharmonic.
    pub fn gauge(&self, z: &Point) -> f64 {
        match self {
            DomainKind::LieBall(_) => gauge_p(z),
            DomainKind::LHat(_) => lhat_gauge(z),
            DomainKind::Tetrablock => tetra_gauge(z),
            DomainKind::UnitDisc => z[0].norm(),
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::LieBall(n) => write!(f, "L_{n}"),
            DomainKind::LHat(n) => write!(f, "𝕃_{n}"),
            DomainKind::Tetrablock => f.write_str("𝔼"),
            DomainKind::UnitDisc => f.write_str("𝔻"),
        }
    }
}

/// `⟨z,w⟩ = Σ z_j w̄_j`.
pub fn hermitian_inner(z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    if z.len() != w.len() {
        return Err(Error::Dimension { expected: z.len(), got: w.len() });
    }
    Ok(z.iter().zip(w).map(|(a, b)| a * b.conj()).sum())
}

/// `‖z‖²`.
pub fn norm_sqr(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum()
}

/// The bilinear value `⟨z,z̄⟩ = Σ z_j²`.
pub fn symmetric_square(z: &[Complex64]) -> Complex64 {
    z.iter().map(|c| c * c).sum()
}

/// The moduli `a(z) ≥ b(z) ≥ 0` with `a² + b² = ‖z‖²`, `a² − b² = |⟨z,z̄⟩|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moduli {
    pub a: f64,
    pub b: f64,
}

impl Moduli {
    /// The gauge `p = a + b`.
    pub fn gauge(&self) -> f64 {
        self.a + self.b
    }
}

pub fn moduli(z: &[Complex64]) -> Moduli {
    moduli_from(norm_sqr(z), symmetric_square(z).norm())
}

fn moduli_from(s: f64, t: f64) -> Moduli {
    Moduli { a: (0.5 * (s + t)).max(0.0).sqrt(), b: (0.5 * (s - t)).max(0.0).sqrt() }
}

/// `p` from `s = ‖z‖²` and `t = |⟨z,z̄⟩|`.
fn gauge_from(s: f64, t: f64) -> f64 {
    (s + (s * s - t * t).max(0.0).sqrt()).max(0.0).sqrt()
}

/// The norm `p` whose unit ball is `L_n`.
pub fn gauge_p(z: &[Complex64]) -> f64 {
    gauge_from(norm_sqr(z), symmetric_square(z).norm())
}

/// `‖z‖ < 1` and `2‖z‖² < 1 + |⟨z,z̄⟩|²`.
pub fn in_lie_ball(z: &[Complex64]) -> bool {
    let s = norm_sqr(z);
    let t = symmetric_square(z).norm();
    s < 1.0 && 2.0 * s < 1.0 + t * t
}

/// `p` of either preimage under `Λ_n`: with `s = |z_1| + ‖z'‖²` and
/// `t = |z_1 + ⟨z',z̄'⟩|`, returns `√(s + √(s² − t²))`.
pub fn lhat_gauge(z: &[Complex64]) -> f64 {
    let (s, t) = lhat_invariants(z);
    gauge_from(s, t)
}

fn lhat_invariants(z: &[Complex64]) -> (f64, f64) {
    let tail = &z[1..];
    let s = z[0].norm() + norm_sqr(tail);
    let t = (z[0] + symmetric_square(tail)).norm();
    (s, t)
}

/// `|z_1| + ‖z'‖² < 1` and `2|z_1| + 2‖z'‖² < 1 + |z_1 + ⟨z',z̄'⟩|²`.
pub fn in_lhat(z: &[Complex64]) -> bool {
    let (s, t) = lhat_invariants(z);
    s < 1.0 && 2.0 * s < 1.0 + t * t
}

/// Membership with a safety margin: the lifted gauge is below `1 − eps`.
pub fn in_lhat_margin(z: &[Complex64], eps: f64) -> bool {
    lhat_gauge(z) < 1.0 - eps
}

/// `|x_1|² + |x_2|² + 2|x_1x_2 − x_3| < 1 + |x_3|²` and `|x_3| < 1`.
pub fn in_tetrablock(x: &[Complex64]) -> Result<bool> {
    if x.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: x.len() });
    }
    let x3 = x[2].norm();
    let lhs = x[0].norm_sqr() + x[1].norm_sqr() + 2.0 * (x[0] * x[1] - x[2]).norm();
    Ok(lhs < 1.0 + x3 * x3 && x3 < 1.0)
}

/// [`lhat_gauge`] transported to tetrablock coordinates; `< 1` exactly on `𝔼`.
pub fn tetra_gauge(x: &[Complex64]) -> f64 {
    let s = (x[0] * x[1] - x[2]).norm() + 0.5 * (x[0].norm_sqr() + x[1].norm_sqr());
    gauge_from(s, x[2].norm())
}

/// `sup_{|λ|=1} |(x_2 − λx_3)/(1 − λx_1)| = (|x_2 − x̄_1x_3| + |x_1x_2 − x_3|)/(1 − |x_1|²)`,
/// and `+∞` when `|x_1| ≥ 1`. It is `< 1` exactly on `𝔼`, Lipschitz near
/// the boundary, and subharmonic along discs with `|f_1| < 1`.
pub fn tetra_slice_norm(x: &[Complex64]) -> f64 {
    let d = 1.0 - x[0].norm_sqr();
    if d <= 0.0 {
        return f64::INFINITY;
    }
    ((x[1] - x[0].conj() * x[2]).norm() + (x[0] * x[1] - x[2]).norm()) / d
}

/// `Λ_n(z) = (z_1², z_2, …, z_n)`.
pub fn lambda_map(z: &Point) -> Point {
    let mut c = z.0.clone();
    c[0] = c[0] * c[0];
    Point(c)
}

/// Choice of square root in [`lambda_lift`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// A right inverse of [`lambda_map`]: `(±√w_1, w_2, …, w_n)` with the
/// principal square root.
pub fn lambda_lift(w: &Point, branch: Branch) -> Point {
    let mut c = w.0.clone();
    c[0] = c[0].sqrt() * branch.sign();
    Point(c)
}

/// `Π(z_1, …, z_n) = (z_1, …, z_{n−1})`.
pub fn project_pi(z: &Point) -> Result<Point> {
    if z.dim() < 2 {
        return Err(Error::Dimension { expected: 2, got: z.dim() });
    }
    Ok(Point(z.0[..z.dim() - 1].to_vec()))
}

/// `Q(z_1, …, z_{n−1}) = (z_1, …, z_{n−1}, 0)`.
pub fn embed_q(z: &Point) -> Point {
    let mut c = z.0.clone();
    c.push(Complex64::new(0.0, 0.0));
    Point(c)
}
