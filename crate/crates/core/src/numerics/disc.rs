//! Polynomial analytic discs, their boundary certificates, and the
//! conversion of exact (rational) extremal discs into certified polynomial
//! ones.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::domain::{gauge_p, lhat_gauge, tetra_slice_norm, DomainKind, Point};
use crate::metrics::atanh_clamped;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// What a disc interpolates besides `f(0)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Interpolation {
    /// `f(σ) = w`.
    Point { sigma: f64, w: Point },
    /// `f'(0) = X/α`.
    Tangent { direction: Point, alpha: f64 },
    /// `f(a) = z` and `f(b) = w` at real nodes `a < b`; the bound is the
    /// Poincaré distance of the nodes.
    Nodes { z: Point, a: f64, w: Point, b: f64 },
}

impl Interpolation {
    /// `f(a) = z`, `f(b) = w` with `|a|, |b| < 1`.
    pub fn nodes(z: Point, a: f64, w: Point, b: f64) -> Self {
        Interpolation::Nodes { z, a, w, b }
    }
}

/// A polynomial map `f(ζ) = Σ c_k ζ^k` from the unit disc into `ℂ^m`,
/// certified against the gauge of `domain`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticDisc {
    coeffs: Vec<Vec<Complex64>>,
    domain: DomainKind,
    center: Point,
    interpolation: Interpolation,
}

impl AnalyticDisc {
    /// Checks that the coefficient rows have the domain's dimension and that
    /// `f(0)` and the interpolation data are met within `1e−10`.
    pub fn new(coeffs: Vec<Vec<Complex64>>, domain: DomainKind, interpolation: Interpolation) -> Result<Self> {
        let m = domain.dim();
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a disc needs at least one coefficient"));
        }
        if let Some(row) = coeffs.iter().find(|r| r.len() != m) {
            return Err(Error::Dimension { expected: m, got: row.len() });
        }
        if coeffs.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let center = Point::from_vec_unchecked(coeffs[0].clone());
        let disc = Self { coeffs, domain, center, interpolation };
        let defect = match &disc.interpolation {
            Interpolation::Point { sigma, w } => disc.eval(Complex64::new(*sigma, 0.0)).max_abs_diff(w),
            Interpolation::Tangent { direction, alpha } => {
                let d = disc.derivative_at_zero();
                d.iter().zip(direction.iter()).map(|(a, x)| (a - x / *alpha).norm()).fold(0.0, f64::max)
            }
            Interpolation::Nodes { z, a, w, b } => {
                if !(a.abs() < 1.0 && b.abs() < 1.0 && a < b) {
                    return Err(Error::InvalidArgument("nodes must satisfy −1 < a < b < 1"));
                }
                let at = |t: f64| disc.eval(Complex64::new(t, 0.0));
                at(*a).max_abs_diff(z).max(at(*b).max_abs_diff(w))
            }
        };
        if defect > 1e-10 {
            return Err(Error::InvalidArgument("disc misses its interpolation data"));
        }
        Ok(disc)
    }

    /// The constant disc at `z`.
    pub fn constant(domain: DomainKind, z: &Point) -> Self {
        Self {
            coeffs: vec![z.coords().to_vec()],
            domain,
            center: z.clone(),
            interpolation: Interpolation::Point { sigma: 0.0, w: z.clone() },
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> DomainKind {
        self.domain
    }

    /// `coeffs()[k]` is the coefficient of `ζ^k`.
    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    /// `f(0)`.
    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn interpolation(&self) -> &Interpolation {
        &self.interpolation
    }

    /// The node `σ` of a two-point disc after moving the first node to `0`,
    /// `None` for a tangent disc.
    pub fn sigma(&self) -> Option<f64> {
        match self.interpolation {
            Interpolation::Point { sigma, .. } => Some(sigma),
            Interpolation::Tangent { .. } => None,
            Interpolation::Nodes { a, b, .. } => Some((b - a) / (1.0 - a * b)),
        }
    }

    pub fn eval(&self, zeta: Complex64) -> Point {
        let mut acc = vec![ZERO; self.dim()];
        for row in self.coeffs.iter().rev() {
            for (a, c) in acc.iter_mut().zip(row) {
                *a = *a * zeta + c;
            }
        }
        Point::from_vec_unchecked(acc)
    }

    pub fn derivative_at_zero(&self) -> Point {
        Point::from_vec_unchecked(self.coeffs.get(1).cloned().unwrap_or_else(|| vec![ZERO; self.dim()]))
    }

    /// Largest [`certificate`] value over `samples` equally spaced boundary
    /// points.
    pub fn max_boundary_gauge(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|k| {
                let zeta = Complex64::from_polar(1.0, core::f64::consts::TAU * k as f64 / samples as f64);
                certificate(self.domain, &self.eval(zeta))
            })
            .fold(0.0, f64::max)
    }

    /// `true` when every boundary sample has certificate value
    /// `≤ 1 − margin`. By subharmonicity along the disc this shows that the
    /// closed disc maps into the domain.
    pub fn certify(&self, samples: usize, margin: f64) -> bool {
        self.max_boundary_gauge(samples) <= 1.0 - margin
    }
}

/// The function certified on disc boundaries: the gauge of the domain, except
/// on `𝔼` where the Lipschitz [`tetra_slice_norm`] is used. Both are `< 1`
/// exactly on the domain and subharmonic along the discs in question.
pub fn certificate(domain: DomainKind, z: &[Complex64]) -> f64 {
    match domain {
        DomainKind::Tetrablock => tetra_slice_norm(z),
        DomainKind::LieBall(_) => gauge_p(z),
        DomainKind::LHat(_) => lhat_gauge(z),
        DomainKind::UnitDisc => z[0].norm(),
    }
}

/// How a disc search is scored and certified.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    pub degree: usize,
    pub grid: usize,
    pub margin: f64,
    /// Resolution of the outer bisection on the scale of the returned value.
    pub tolerance: f64,
    /// Boundary samples for the final re-check, at half the margin.
    pub recheck_grid: usize,
}

/// Number of samples used to read off Taylor coefficients.
const TAYLOR_SAMPLES: usize = 512;

/// Taylor coefficients `0..=degree` of `ζ ↦ h(rζ)`, read off from samples on
/// the unit circle. `None` if `h` fails anywhere.
pub(crate) fn taylor_coeffs(
    h: &dyn Fn(Complex64) -> Option<Vec<Complex64>>,
    m: usize,
    r: f64,
    degree: usize,
) -> Option<Vec<Vec<Complex64>>> {
    let n = TAYLOR_SAMPLES.max(4 * (degree + 1));
    let mut coeffs = vec![vec![ZERO; m]; degree + 1];
    for j in 0..n {
        let theta = core::f64::consts::TAU * j as f64 / n as f64;
        let values = h(Complex64::from_polar(r, theta))?;
        for (k, row) in coeffs.iter_mut().enumerate() {
            let w = Complex64::from_polar(1.0 / n as f64, -theta * k as f64);
            for (c, v) in row.iter_mut().zip(&values) {
                *c += v * w;
            }
        }
    }
    Some(coeffs)
}

/// A certified polynomial disc together with the bound it proves.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedDisc {
    pub disc: AnalyticDisc,
    /// `tanh⁻¹ σ` for a two-point disc, `α` for a tangent disc.
    pub value: f64,
    pub evals: usize,
}

/// Builds certified polynomial approximants of `ζ ↦ h(rζ)` for an exact disc
/// `h` holomorphic beyond the closed unit disc with `h(0) = center` and either
/// `h(σ₀) = w` or `h'(0) = X/α₀`, and returns the one with the best bound
/// found by bisection on `r`.
pub(crate) fn polynomialize(
    h: &dyn Fn(Complex64) -> Option<Vec<Complex64>>,
    domain: DomainKind,
    center: &Point,
    exact: &Interpolation,
    opts: &CertifyOptions,
) -> Option<CertifiedDisc> {
    let m = domain.dim();
    let r_min = match exact {
        Interpolation::Point { sigma, .. } => *sigma,
        Interpolation::Tangent { .. } => 0.0,
        Interpolation::Nodes { .. } => return None,
    };
    let mut evals = 0usize;
    let mut build = |theta: f64| -> Option<(AnalyticDisc, f64)> {
        evals += 1;
        let r = 1.0 - (1.0 - r_min) * theta;
        let mut coeffs = taylor_coeffs(h, m, r, opts.degree.max(1))?;
        coeffs[0] = center.coords().to_vec();
        let (interp, value) = match exact {
            Interpolation::Point { sigma, w } => {
                let s = sigma / r;
                let mut rest = center.coords().to_vec();
                let mut pow = s;
                for row in coeffs.iter().skip(2) {
                    pow *= s;
                    for (acc, c) in rest.iter_mut().zip(row) {
                        *acc += c * pow;
                    }
                }
                coeffs[1] = w.iter().zip(&rest).map(|(wi, ri)| (wi - ri) / s).collect();
                (Interpolation::Point { sigma: s, w: w.clone() }, atanh_clamped(s))
            }
            Interpolation::Tangent { direction, alpha } => {
                let a = alpha / r;
                coeffs[1] = direction.iter().map(|x| x / a).collect();
                (Interpolation::Tangent { direction: direction.clone(), alpha: a }, a)
            }
            Interpolation::Nodes { .. } => return None,
        };
        let disc = AnalyticDisc::new(coeffs, domain, interp).ok()?;
        disc.certify(opts.grid, opts.margin).then_some((disc, value))
    };

    // feasible for large θ (small r); find the smallest feasible θ
    let mut feasible: Option<(f64, AnalyticDisc, f64)> = None;
    let mut infeasible: Option<f64> = None;
    let mut theta = 0.5;
    for _ in 0..60 {
        match build(theta) {
            Some((d, v)) => {
                feasible = Some((theta, d, v));
                infeasible = None;
                theta *= 0.5;
                if theta < 1e-15 {
                    break;
                }
            }
            None => {
                infeasible = Some(theta);
                break;
            }
        }
    }
    if feasible.is_none() {
        // the approximant may only fit well away from the exact radius
        for theta in [0.75, 0.9, 0.97, 0.995] {
            if let Some((d, v)) = build(theta) {
                feasible = Some((theta, d, v));
                infeasible = Some(0.5);
                break;
            }
        }
    }
    let (mut lo_theta, mut best, mut best_value) = feasible?;
    if let Some(mut hi_theta) = infeasible {
        // θ in (hi_theta, lo_theta); bisect geometrically
        for _ in 0..60 {
            let mid = (hi_theta * lo_theta).sqrt();
            let mid_value = match build(mid) {
                Some((d, v)) => {
                    lo_theta = mid;
                    best = d;
                    best_value = v;
                    v
                }
                None => {
                    hi_theta = mid;
                    continue;
                }
            };
            let r = 1.0 - (1.0 - r_min) * hi_theta;
            let bound = match exact {
                Interpolation::Point { sigma, .. } => atanh_clamped(sigma / r),
                Interpolation::Tangent { alpha, .. } => alpha / r,
                Interpolation::Nodes { .. } => unreachable!("rejected above"),
            };
            if (mid_value - bound).abs() <= opts.tolerance {
                break;
            }
        }
    }
    // the final disc must survive a finer boundary sampling at half margin
    for _ in 0..20 {
        if best.certify(opts.recheck_grid, opts.margin / 2.0) {
            return Some(CertifiedDisc { disc: best, value: best_value, evals });
        }
        lo_theta = (lo_theta * 2.0).min(0.999);
        let (d, v) = build(lo_theta)?;
        best = d;
        best_value = v;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluation_and_interpolation() {
        let coeffs = vec![vec![c(0.1, 0.0)], vec![c(0.5, 0.0)], vec![c(0.0, 0.2)]];
        let w = Point::new(vec![c(0.1 + 0.25, 0.05)]).unwrap();
        let disc = AnalyticDisc::new(coeffs.clone(), DomainKind::UnitDisc, Interpolation::Point { sigma: 0.5, w }).unwrap();
        assert_eq!(disc.degree(), 2);
        assert!((disc.eval(c(0.0, 1.0))[0] - c(0.1, 0.3)).norm() < 1e-15);
        let wrong = Point::new(vec![c(0.3, 0.0)]).unwrap();
        assert!(AnalyticDisc::new(coeffs, DomainKind::UnitDisc, Interpolation::Point { sigma: 0.5, w: wrong }).is_err());
    }

    #[test]
    fn certificate_tracks_the_boundary() {
        let disc = AnalyticDisc::new(
            vec![vec![c(0.0, 0.0)], vec![c(0.9, 0.0)]],
            DomainKind::UnitDisc,
            Interpolation::Tangent { direction: Point::new(vec![c(1.0, 0.0)]).unwrap(), alpha: 1.0 / 0.9 },
        )
        .unwrap();
        assert!((disc.max_boundary_gauge(64) - 0.9).abs() < 1e-15);
        assert!(disc.certify(64, 0.05));
        assert!(!disc.certify(64, 0.2));
    }

    #[test]
    fn mobius_disc_polynomializes_near_the_exact_value() {
        // h(ζ) = (ζ + a)/(1 + āζ) through a at 0 and w = h(σ₀)
        let a = c(0.3, -0.2);
        let h = move |z: Complex64| Some(vec![(z + a) / (c(1.0, 0.0) + a.conj() * z)]);
        let sigma0 = 0.6;
        let w = Point::new(h(c(sigma0, 0.0)).unwrap()).unwrap();
        let opts = CertifyOptions { degree: 12, grid: 512, margin: 1e-6, tolerance: 1e-6, recheck_grid: 4096 };
        let center = Point::new(vec![a]).unwrap();
        let out = polynomialize(&h, DomainKind::UnitDisc, &center, &Interpolation::Point { sigma: sigma0, w }, &opts).unwrap();
        assert!(out.value >= sigma0.atanh() - 1e-12);
        assert!(out.value - sigma0.atanh() < 1e-2, "{}", out.value - sigma0.atanh());
        assert!(out.disc.certify(4096, 5e-7));
    }
}
