//! Lempert and Kobayashi upper bounds from certified polynomial discs.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lift::lift_disc;
use super::disc::{polynomialize, CertifiedDisc, CertifyOptions, Interpolation};
use super::matrix::{lift, lift_tetra_mobius, op_norm, tetra_image, triangular_lift, Mat2, MatrixDisc, MatrixMobius};
use super::optimize::{nelder_mead, SimplexOptions};
use super::Params;
use crate::automorphisms::{apply_mobius, lie_ball_to_origin, normalize_tetra, TetraMobius};
use crate::domain::{gauge_p, tetra_slice_norm, Point};
use crate::{DomainKind, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Points with `|π| = |x₁x₂ − x₃|` below this use triangular lifts.
const TRIANGULAR_PI: f64 = 1e-12;

/// An exact extremal disc in the matrix ball, pushed to `𝔼`.
#[derive(Clone, Copy, Debug)]
pub struct MatrixExtremal {
    pub sigma: f64,
    pub disc: MatrixDisc,
}

/// Lifts of a normalized point `(0, 0, ρ)`: `[[0, u], [−ρ/u, 0]]` with
/// `u = √ρ·e^{L tanh t}`, `L = −ln √ρ`, or the two triangular lifts of `0`.
#[derive(Clone, Copy)]
enum CenterLift {
    Balanced(f64),
    Upper,
    Lower,
}

impl CenterLift {
    fn matrix(self, t: f64) -> Mat2 {
        match self {
            CenterLift::Balanced(rho) => {
                let s = rho.sqrt();
                let u = s * (-s.ln() * t.tanh()).exp();
                Mat2::new(ZERO, Complex64::new(u, 0.0), Complex64::new(-rho / u, 0.0), ZERO)
            }
            CenterLift::Upper => Mat2::new(ZERO, Complex64::new(t.tanh(), 0.0), ZERO, ZERO),
            CenterLift::Lower => Mat2::new(ZERO, ZERO, Complex64::new(t.tanh(), 0.0), ZERO),
        }
    }
}

#[derive(Clone, Copy)]
enum TargetLift {
    Generic,
    Upper,
    Lower,
}

impl TargetLift {
    fn matrix(self, y: &[Complex64], p: &[f64]) -> Mat2 {
        match self {
            TargetLift::Generic => lift(y, Complex64::new(p[0], p[1]).exp()),
            TargetLift::Upper => triangular_lift(y, Complex64::new(p[0], p[1]), true),
            TargetLift::Lower => triangular_lift(y, Complex64::new(p[0], p[1]), false),
        }
    }

    /// A parameter giving a lift of moderate norm to start from.
    fn start(self, y: &[Complex64], phase: f64, scale: f64) -> [f64; 2] {
        match self {
            TargetLift::Generic => {
                let pi = (y[0] * y[1] - y[2]).norm();
                [0.5 * pi.ln() + scale, phase]
            }
            _ => [scale.tanh() * phase.cos() * 0.5, scale.tanh() * phase.sin() * 0.5],
        }
    }
}

fn sigma_of(a: &Mat2, b: &Mat2) -> f64 {
    if op_norm(b) >= 1.0 {
        return f64::INFINITY;
    }
    match MatrixMobius::new(*a).and_then(|phi| phi.apply(b)) {
        Some(c) => op_norm(&c),
        None => f64::INFINITY,
    }
}

/// Minimizes `‖φ_A(B)‖` over lifts `A` of `x = (0, 0, ρ)` and `B` of `y`;
/// `tanh⁻¹` of the minimum is `ℓ_𝔼(x, y)` when the search succeeds.
pub fn matrix_extremal(rho: f64, y: &[Complex64], params: &Params) -> Result<(MatrixExtremal, usize)> {
    let centers: Vec<CenterLift> = if rho > TRIANGULAR_PI {
        vec![CenterLift::Balanced(rho)]
    } else {
        vec![CenterLift::Upper, CenterLift::Lower]
    };
    let targets: Vec<TargetLift> = if (y[0] * y[1] - y[2]).norm() > TRIANGULAR_PI {
        vec![TargetLift::Generic]
    } else {
        vec![TargetLift::Upper, TargetLift::Lower]
    };
    let mut evals = 0;
    let mut candidates: Vec<(f64, [f64; 3], CenterLift, TargetLift)> = Vec::new();
    for &cl in &centers {
        for &tl in &targets {
            for t in [-1.5, -0.5, 0.0, 0.5, 1.5] {
                for scale in [-1.0, -0.3, 0.0, 0.3, 1.0] {
                    for k in 0..8 {
                        let phase = core::f64::consts::TAU * k as f64 / 8.0;
                        let v = tl.start(y, phase, scale);
                        let p = [t, v[0], v[1]];
                        let s = sigma_of(&cl.matrix(p[0]), &tl.matrix(y, &p[1..]));
                        evals += 1;
                        if s.is_finite() {
                            candidates.push((s, p, cl, tl));
                        }
                    }
                }
            }
        }
    }
    if candidates.is_empty() {
        return Err(Error::SearchFailure);
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let opts = SimplexOptions { step: 0.2, xtol: 1e-12, ftol: 1e-16, max_evals: 4000 };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x5eed);
    let mut best: Option<(f64, Vec<f64>, CenterLift, TargetLift)> = None;
    let restarts = params.simplex_restarts.max(1);
    let mut starts: Vec<([f64; 3], CenterLift, TargetLift)> =
        candidates.iter().take(restarts).map(|c| (c.1, c.2, c.3)).collect();
    for _ in 0..restarts {
        let c = candidates[rng.gen_range(0..candidates.len())];
        starts.push((c.1, c.2, c.3));
    }
    for (p0, cl, tl) in starts {
        let f = |p: &[f64]| sigma_of(&cl.matrix(p[0]), &tl.matrix(y, &p[1..]));
        let mut m = nelder_mead(f, &p0, opts);
        // a restart from the optimum escapes premature collapse
        let again = nelder_mead(f, &m.x, opts);
        evals += m.evals + again.evals;
        if again.value <= m.value {
            m = again;
        }
        if best.as_ref().map_or(true, |b| m.value < b.0) {
            best = Some((m.value, m.x, cl, tl));
        }
    }
    let (sigma, p, cl, tl) = best.ok_or(Error::SearchFailure)?;
    if !(sigma < 1.0) {
        return Err(Error::SearchFailure);
    }
    let a = cl.matrix(p[0]);
    let b = tl.matrix(y, &p[1..]);
    let c = MatrixMobius::new(a).and_then(|phi| phi.apply(&b)).ok_or(Error::SearchFailure)?;
    let k = if sigma > 0.0 { c / Complex64::new(sigma, 0.0) } else { Mat2::identity() };
    let disc = MatrixDisc::new(a, k).ok_or(Error::SearchFailure)?;
    Ok((MatrixExtremal { sigma, disc }, evals))
}

pub(crate) fn certify_options(params: &Params) -> CertifyOptions {
    CertifyOptions {
        degree: params.disc_degree,
        grid: params.boundary_grid,
        margin: params.margin,
        tolerance: params.bisection_tol,
        recheck_grid: params.recheck_grid,
    }
}

/// Geodesic points tried as the centre of the polynomial chart.
const RECENTER_SAMPLES: usize = 48;
/// Loss over the exact extremal value below which no further chart is
/// tried; above it the best chart is refitted at doubled degree.
const ACCEPTED_LOSS: f64 = 1e-3;
/// Positions of the chart centre along the geodesic, in order of trial.
const CENTER_FRACTIONS: [f64; 7] = [0.5, 0.3, 0.7, 0.4, 0.6, 0.2, 0.8];

/// A certified disc for a normalized pair `(x, y)` of `𝔼`. It lives in the
/// chart `recenter` and joins `recenter(x)` to `recenter(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TetraDisc {
    pub certified: CertifiedDisc,
    pub recenter: TetraMobius,
}

/// Certified polynomial disc in `𝔼` through `x = (0, 0, ρ)` and `y`. The
/// exact extremal disc is re-centred at the point of the geodesic whose
/// balanced matrix lift is smallest, which keeps the poles of the disc
/// away from the circle, and then replaced by a fitted polynomial.
pub fn tetra_upper(rho: f64, y: &[Complex64], params: &Params) -> Result<TetraDisc> {
    let x = Point::from_vec_unchecked(vec![ZERO, ZERO, Complex64::new(rho, 0.0)]);
    let yp = Point::from_vec_unchecked(y.to_vec());
    if x.max_abs_diff(&yp) == 0.0 {
        let certified = CertifiedDisc { disc: super::AnalyticDisc::constant(DomainKind::Tetrablock, &x), value: 0.0, evals: 0 };
        return Ok(TetraDisc { certified, recenter: TetraMobius::identity() });
    }
    let opts = certify_options(params);
    let axis = axis_disc(rho, &x, &yp, &opts);
    let (ext, mut evals) = match matrix_extremal(rho, y, params) {
        Ok(found) if found.0.sigma < params.max_sigma => found,
        _ => return axis.ok_or(Error::SearchFailure),
    };
    let sigma = ext.sigma;
    let mut charts = Vec::new();
    // the midpoint leaves both nodes equally far from the circle; the loss
    // still depends sharply on the centre, so other fractions follow
    for fraction in CENTER_FRACTIONS {
        if let Some(c) = center_chart(&ext, (fraction * sigma.atanh()).tanh()) {
            charts.push(c);
        }
    }
    if let Some(c) = best_center(&ext) {
        charts.push(c);
    }
    charts.push((0.0, TetraMobius::identity()));
    let exact_value = sigma.atanh();
    evals += axis.as_ref().map_or(0, |a| a.certified.evals);
    let lost = |b: &Option<TetraDisc>| b.as_ref().map_or(f64::INFINITY, |b| b.certified.value - exact_value);
    let try_chart = |center: f64, map: &TetraMobius, opts: &CertifyOptions| -> Result<Option<CertifiedDisc>> {
        let exact = |xi: Complex64| {
            let zeta = (xi + center) / (xi * center + 1.0);
            ext.disc.at(zeta).and_then(|m| lift_tetra_mobius(map, &m))
        };
        let data = if center == 0.0 {
            Interpolation::Point { sigma, w: yp.clone() }
        } else {
            let a = -center;
            let b = (sigma - center) / (1.0 - center * sigma);
            Interpolation::nodes(map.apply(x.coords())?, a, map.apply(y)?, b)
        };
        Ok(lift_disc(&exact, &data, None, params.max_sigma, opts))
    };
    let mut best: Option<TetraDisc> = axis;
    // best matrix chart, kept for refitting at higher degree
    let mut best_chart: Option<(f64, f64, TetraMobius)> = None;
    for (center, map) in charts {
        if lost(&best) <= ACCEPTED_LOSS {
            break;
        }
        if let Some(out) = try_chart(center, &map, &opts)? {
            evals += out.evals;
            if best_chart.as_ref().map_or(true, |c| out.value < c.0) {
                best_chart = Some((out.value, center, map.clone()));
            }
            if best.as_ref().map_or(true, |b| out.value < b.certified.value) {
                best = Some(TetraDisc { certified: out, recenter: map });
            }
        }
        evals += RECENTER_SAMPLES;
    }
    let mut degree = opts.degree;
    while lost(&best) > ACCEPTED_LOSS && degree < params.max_disc_degree {
        let Some((_, center, map)) = &best_chart else { break };
        degree = (2 * degree).min(params.max_disc_degree);
        let higher = CertifyOptions { degree, ..opts };
        if let Some(out) = try_chart(*center, map, &higher)? {
            evals += out.evals;
            if best.as_ref().map_or(true, |b| out.value < b.certified.value) {
                best = Some(TetraDisc { certified: out, recenter: map.clone() });
            }
        }
    }
    let mut best = best.ok_or(Error::SearchFailure)?;
    best.certified.evals = evals;
    Ok(best)
}

/// Below this size of `(y_1, y_2)` the direct disc [`axis_disc`] is tried.
const AXIS_BAND: f64 = 0.25;

/// Near the `x_3`-axis the extremal discs of `𝔼` need not lift to the
/// matrix ball (`ζ ↦ (0, 0, ζ)` has no bounded lift). There the disc
/// `ζ ↦ (y_1ζ/σ, y_2ζ/σ, m(ζ))`, `m` a Möbius map of the third coordinate,
/// is polynomialized directly.
fn axis_disc(rho: f64, x: &Point, y: &Point, opts: &CertifyOptions) -> Option<TetraDisc> {
    if y[0].norm().max(y[1].norm()) >= AXIS_BAND {
        return None;
    }
    let r = Complex64::new(rho, 0.0);
    let t = (y[2] - r) / (1.0 - r * y[2]);
    let sigma = t.norm();
    if sigma < 1e-12 {
        return None;
    }
    let u = t / sigma;
    let h = |zeta: Complex64| {
        let m = (r + u * zeta) / (1.0 + r * u * zeta);
        Some(vec![y[0] * zeta / sigma, y[1] * zeta / sigma, m])
    };
    let exact = Interpolation::Point { sigma, w: y.clone() };
    let certified = polynomialize(&h, DomainKind::Tetrablock, x, &exact, opts)?;
    Some(TetraDisc { certified, recenter: TetraMobius::identity() })
}

fn center_chart(ext: &MatrixExtremal, zeta: f64) -> Option<(f64, TetraMobius)> {
    let m = ext.disc.at(Complex64::new(zeta, 0.0))?;
    let nf = normalize_tetra(&tetra_image(&m)).ok()?;
    Some((zeta, nf.map))
}

/// The geodesic parameter `ζ*` and the chart map sending `π(E(ζ*))` to its
/// normal form, where `E` is the matrix geodesic, chosen to minimize the
/// norm of the lifted centre. `None` when the starting point is best.
fn best_center(ext: &MatrixExtremal) -> Option<(f64, TetraMobius)> {
    let length = ext.sigma.atanh();
    let mut best: Option<(f64, f64, TetraMobius)> = None;
    for k in 1..RECENTER_SAMPLES {
        let zeta = (length * k as f64 / RECENTER_SAMPLES as f64).tanh();
        let Some(m) = ext.disc.at(Complex64::new(zeta, 0.0)) else { continue };
        let Ok(nf) = normalize_tetra(&tetra_image(&m)) else { continue };
        let Some(lifted) = lift_tetra_mobius(&nf.map, &m) else { continue };
        let norm = op_norm(&lifted);
        if best.as_ref().map_or(true, |b| norm < b.0) {
            best = Some((norm, zeta, nf.map));
        }
    }
    let (norm, zeta, map) = best?;
    (norm < op_norm(&ext.disc.center())).then_some((zeta, map))
}

/// Certified polynomial disc in `L_n` through `z` and `w`, approximating the
/// Möbius image of a straight line through the origin.
pub fn lieball_upper(z: &Point, w: &Point, params: &Params) -> Result<CertifiedDisc> {
    let kind = DomainKind::LieBall(z.dim());
    kind.require(z)?;
    kind.require(w)?;
    if z == w {
        return Ok(CertifiedDisc { disc: super::AnalyticDisc::constant(kind, z), value: 0.0, evals: 0 });
    }
    let g = lie_ball_to_origin(z)?;
    let g_inv = g.inverse();
    let u = apply_mobius(&g, w)?;
    let sigma = gauge_p(&u);
    if sigma >= params.max_sigma {
        return Err(Error::SearchFailure);
    }
    let direction: Vec<Complex64> = u.iter().map(|c| c / sigma).collect();
    let h = |zeta: Complex64| {
        let line: Vec<Complex64> = direction.iter().map(|c| c * zeta).collect();
        apply_mobius(&g_inv, &line).ok().map(Point::into_vec)
    };
    let exact = Interpolation::Point { sigma, w: w.clone() };
    polynomialize(&h, kind, z, &exact, &certify_options(params)).ok_or(Error::SearchFailure)
}

/// Certified tangent disc at the origin of `𝔼` in direction `t`; its value
/// bounds `κ_𝔼(0; t)` from above.
pub fn tetra_kobayashi_upper(t: &[Complex64], params: &Params) -> Result<CertifiedDisc> {
    let alpha = t[0].norm().max(t[1].norm()) + t[2].norm();
    if alpha == 0.0 {
        return Err(Error::InvalidArgument("direction must be non-zero"));
    }
    let y: Vec<Complex64> = t.iter().map(|c| c / alpha).collect();
    let direction = Point::from_vec_unchecked(t.to_vec());
    let origin = Point::zeros(3);
    let opts = certify_options(params);
    let exact = Interpolation::Tangent { direction, alpha };

    let mut best: Option<CertifiedDisc> = None;
    let consider = |best: &mut Option<CertifiedDisc>, cand: Option<CertifiedDisc>| {
        if let Some(c) = cand {
            if best.as_ref().map_or(true, |b| c.value < b.value) {
                *best = Some(c);
            }
        }
    };
    if let Some(coeffs) = quadratic_tangent_disc(&y, params) {
        let h = move |zeta: Complex64| {
            Some((0..3).map(|j| coeffs[0][j] * zeta + coeffs[1][j] * zeta * zeta).collect())
        };
        let quad_opts = CertifyOptions { degree: 2, ..opts };
        consider(&mut best, polynomialize(&h, DomainKind::Tetrablock, &origin, &exact, &quad_opts));
    }
    let good_enough = best.as_ref().is_some_and(|b| b.value <= alpha * (1.0 + 1e-5));
    if !good_enough {
        if let Some((disc, scale)) = matrix_tangent_disc(&y, params) {
            let exact = |z: Complex64| disc.at(z);
            let data = Interpolation::Tangent { direction: Point::from_vec_unchecked(t.to_vec()), alpha: alpha * scale };
            consider(&mut best, lift_disc(&exact, &data, Some(disc.derivative_at_zero()), 2.0, &opts));
        }
    }
    best.ok_or(Error::SearchFailure)
}

/// Degree-two discs `f` with `f(0) = 0`, `f'(0) = y` and boundary
/// certificate `≈ 1`, when `max(|y₁|, |y₂|) + |y₃| = 1`. Returns the
/// coefficient rows of `ζ` and `ζ²`.
fn quadratic_tangent_disc(y: &[Complex64], params: &Params) -> Option<[[Complex64; 3]; 2]> {
    let swapped = y[0].norm() > y[1].norm();
    let (y1, y2, y3) = if swapped { (y[1], y[0], y[2]) } else { (y[0], y[1], y[2]) };
    let order = |r: [Complex64; 3]| if swapped { [r[1], r[0], r[2]] } else { r };
    if y3.norm() == 0.0 {
        return Some([order([y1, y2, ZERO]), order([ZERO, ZERO, y1 * y2])]);
    }
    if (y1.norm() - y2.norm()).abs() < 1e-9 {
        return None;
    }
    let lambda = if y2.norm() > 0.0 { -(y2 / y2.norm()) * (y3.conj() / y3.norm()) } else { ONE };
    let omega = y2 - lambda * y3;
    let build = |p: &[f64]| {
        let k3 = Complex64::new(p[0], p[1]);
        let k2 = lambda * k3 - omega * lambda * y1;
        [order([y1, y2, y3]), order([ZERO, k2, k3])]
    };
    let grid = params.boundary_grid;
    let objective = |p: &[f64]| {
        let rows = build(p);
        (0..grid)
            .map(|k| {
                let z = Complex64::from_polar(1.0, core::f64::consts::TAU * k as f64 / grid as f64);
                let v: Vec<Complex64> = (0..3).map(|j| rows[0][j] * z + rows[1][j] * z * z).collect();
                tetra_slice_norm(&v)
            })
            .fold(0.0, f64::max)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x4b0b);
    let opts = SimplexOptions { step: 0.2, xtol: 1e-12, ftol: 1e-15, max_evals: 2000 };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..(2 * params.simplex_restarts).max(4) {
        let x0 = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
        let m = nelder_mead(objective, &x0, opts);
        if best.as_ref().map_or(true, |b| m.value < b.0) {
            best = Some((m.value, m.x));
        }
        if best.as_ref().is_some_and(|b| b.0 <= 1.0 + 1e-12) {
            break;
        }
    }
    let (value, p) = best?;
    (value <= 1.0 + 1e-6).then(|| build(&p))
}

/// The matrix-ball tangent disc: over lifts `A = [[0, c], [0, 0]]` of the
/// origin and `M = [[y₁, u], [−y₃/c, y₂]]` of `y`, minimizes the norm of
/// `K = (I − AA*)^{−1/2} M (I − A*A)^{−1/2}`; the disc `ζ ↦ φ_{−A}(ζK/‖K‖)`
/// has derivative `y/‖K‖` at `0`. Returns it with `‖K‖`.
fn matrix_tangent_disc(y: &[Complex64], params: &Params) -> Option<(MatrixDisc, f64)> {
    let build = |p: &[f64]| -> Option<(Mat2, Mat2)> {
        let c = Complex64::from_polar(p[0].abs().tanh(), p[1]);
        if c.norm() == 0.0 {
            return None;
        }
        let s = (1.0 - c.norm_sqr()).sqrt();
        let u = Complex64::new(p[2], p[3]);
        let v = -y[2] / c;
        let a = Mat2::new(ZERO, c, ZERO, ZERO);
        let k = Mat2::new(y[0] / s, u / (s * s), v, y[1] / s);
        Some((a, k))
    };
    let objective = |p: &[f64]| build(p).map_or(f64::INFINITY, |(_, k)| op_norm(&k));
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x7a9e);
    let opts = SimplexOptions { step: 0.3, xtol: 1e-12, ftol: 1e-16, max_evals: 6000 };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..(2 * params.simplex_restarts).max(4) {
        let x0 = [rng.gen_range(0.2..1.5), rng.gen_range(0.0..6.3), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
        let m = nelder_mead(objective, &x0, opts);
        let m = nelder_mead(objective, &m.x, opts);
        if best.as_ref().map_or(true, |b| m.value < b.0) {
            best = Some((m.value, m.x));
        }
    }
    let (norm, p) = best?;
    let (a, k) = build(&p)?;
    let disc = MatrixDisc::new(a, k / Complex64::new(norm, 0.0))?;
    Some((disc, norm))
}

/// Tangent disc at `0 ∈ L_n` along `x`: a polynomial approximant of the
/// straight line `ζ ↦ ζx/p(x)`.
pub fn lieball_kobayashi_upper(x: &[Complex64], params: &Params) -> Result<CertifiedDisc> {
    let alpha = gauge_p(x);
    if alpha == 0.0 {
        return Err(Error::InvalidArgument("direction must be non-zero"));
    }
    let kind = DomainKind::LieBall(x.len());
    let y: Vec<Complex64> = x.iter().map(|c| c / alpha).collect();
    let h = |zeta: Complex64| Some(y.iter().map(|c| c * zeta).collect());
    let exact = Interpolation::Tangent { direction: Point::from_vec_unchecked(x.to_vec()), alpha };
    let opts = CertifyOptions { degree: 1, ..certify_options(params) };
    polynomialize(&h, kind, &Point::zeros(x.len()), &exact, &opts).ok_or(Error::SearchFailure)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matrix_extremal_matches_origin_formula() {
        let params = Params::default();
        let y = [c(0.1, 0.2), c(-0.3, 0.1), c(0.2, -0.1)];
        let (ext, _) = matrix_extremal(0.0, &y, &params).unwrap();
        let exact = crate::metrics::carath_origin_tetra(&y).unwrap();
        assert!((ext.sigma.atanh() - exact).abs() < 1e-8, "{} vs {}", ext.sigma.atanh(), exact);
        let end = tetra_image(&ext.disc.at(c(ext.sigma, 0.0)).unwrap());
        assert!(end.iter().zip(&y).all(|(a, b)| (a - b).norm() < 1e-10));
    }

    #[test]
    fn tangent_discs_attain_the_closed_form() {
        // the tie |t1| = |t2| has no quadratic disc; the matrix disc needs more terms
        let tie = Params { disc_degree: 16, ..Params::default() };
        let cases = [
            ([c(0.5, 0.0), c(0.2, 0.0), c(0.3, 0.0)], Params::default()),
            ([c(0.5, 0.0), c(0.5, 0.0), c(0.2, 0.0)], tie),
            ([c(0.0, 0.3), c(0.1, 0.1), c(-0.2, 0.4)], Params::default()),
        ];
        for (t, params) in cases {
            let exact = crate::metrics::kobayashi_origin_tetra(&t).unwrap();
            let out = tetra_kobayashi_upper(&t, &params).unwrap();
            assert!(out.value >= exact - 1e-12);
            assert!(out.value - exact < 1e-3, "{t:?}: {} vs {exact}", out.value);
        }
    }
}
