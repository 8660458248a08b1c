//! Two-sided numerical estimates of the Carathéodory distance `c` and the
//! Lempert function `ℓ`, and the gap report comparing them.
//!
//! Lower bounds maximize the Poincaré distance over explicit families of
//! holomorphic functions into the disc. Upper bounds are `tanh⁻¹ σ` for
//! polynomial discs `f` with `f(0) = z`, `f(σ) = w` whose boundary samples
//! have gauge `≤ 1 − margin`. For `𝕃_n` both sides are computed after moving
//! the pair to the normal form `((ρ, 0, 0), w*)` in `𝕃_3` and transferring
//! it to the tetrablock.

mod disc;
mod lower;
mod lift;
mod matrix;
mod optimize;
mod upper;

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

pub use disc::{certificate, AnalyticDisc, CertifiedDisc, CertifyOptions, Interpolation};
pub use lower::{
    tetra_fixed_point_function, tetra_lower, tetra_slice_function, tetra_slice_function_swapped,
    LowerBound, LowerWitness,
};
pub use matrix::{lift_tetra_mobius, op_norm, tetra_image, Mat2, MatrixDisc, MatrixMobius};
pub use optimize::{golden_max, lbfgs, nelder_mead, LbfgsOptions, Minimum, SimplexOptions};
pub use upper::{
    lieball_kobayashi_upper, lieball_upper, matrix_extremal, tetra_kobayashi_upper, tetra_upper, MatrixExtremal, TetraDisc,
};

use crate::automorphisms::{
    apply_mobius, lie_ball_to_origin, normalize_pair, normalize_tetra, tetra_from_lhat3,
    LhatAutomorphism, TetraMobius,
};
use crate::domain::{embed_q, gauge_p, lambda_lift, Branch, DomainKind, Point};
use crate::metrics::{atanh_clamped, poincare};
use crate::rotations::{normal_frame, partial_normal_frame};
use crate::{Error, Result};

/// Tuning knobs shared by the bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    /// Degree of the certified polynomial discs, in the chart where they are
    /// certified.
    pub disc_degree: usize,
    /// Upper discs that lose too much against the extremal are refitted at
    /// doubled degree up to this cap. Set it to `disc_degree` to fix the
    /// degree.
    pub max_disc_degree: usize,
    /// Boundary samples for a disc certificate.
    pub boundary_grid: usize,
    /// Required distance of boundary gauge values from `1`.
    pub margin: f64,
    pub simplex_restarts: usize,
    /// Resolution of the outer bisection, on the scale of the returned bound.
    pub bisection_tol: f64,
    pub lambda_grid: usize,
    /// Golden-section tolerance on the angle of `λ`.
    pub golden_tol: f64,
    /// Random tetrablock automorphisms tried around the normalizing one.
    pub perturbations: usize,
    /// Boundary samples for the re-check at half margin.
    pub recheck_grid: usize,
    /// Discs are not searched past this `σ`.
    pub max_sigma: f64,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            disc_degree: 6,
            max_disc_degree: 16,
            boundary_grid: 512,
            margin: 1e-6,
            simplex_restarts: 4,
            bisection_tol: 1e-4,
            lambda_grid: 720,
            golden_tol: 1e-10,
            perturbations: 16,
            recheck_grid: 4096,
            max_sigma: 1.0 - 1e-9,
            seed: 0,
        }
    }
}

/// A pair of `𝕃_n` (or `𝔼`) moved into `𝔼` with the first point at
/// `(0, 0, ρ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TetraReduction {
    pub rho: f64,
    pub x: Point,
    pub y: Point,
    /// The pair was exchanged so that the point with smaller `ρ` comes first.
    pub swapped: bool,
    pub frame: ReductionFrame,
}

/// The automorphism used by a [`TetraReduction`].
#[derive(Clone, Debug, PartialEq)]
pub enum ReductionFrame {
    /// `x = Ψ(Φ(z))` with `Φ` acting on `𝕃_n` (padded to `𝕃_3` when `n = 2`).
    LHat(LhatAutomorphism),
    /// `x = m(z)` with `m` a tetrablock automorphism.
    Tetra(TetraMobius),
}

fn reduce_lhat(z: &Point, w: &Point) -> Result<TetraReduction> {
    let (z, w) = if z.dim() == 2 { (embed_q(z), embed_q(w)) } else { (z.clone(), w.clone()) };
    let forward = normalize_pair(&z, &w);
    let backward = normalize_pair(&w, &z);
    let (pn, swapped) = match (forward, backward) {
        (Ok(f), Ok(b)) => {
            if b.rho < f.rho { (b, true) } else { (f, false) }
        }
        (Ok(f), Err(_)) => (f, false),
        (Err(_), Ok(b)) => (b, true),
        (Err(e), Err(_)) => return Err(e),
    };
    let x = tetra_from_lhat3(&pn.z_star.coords()[..3])?;
    let y = tetra_from_lhat3(&pn.w_star.coords()[..3])?;
    Ok(TetraReduction { rho: pn.rho, x, y, swapped, frame: ReductionFrame::LHat(pn.map) })
}

fn reduce_tetra(x: &Point, y: &Point) -> Result<TetraReduction> {
    let forward = normalize_tetra(x);
    let backward = normalize_tetra(y);
    let (nf, swapped) = match (forward, backward) {
        (Ok(f), Ok(b)) => {
            if b.r < f.r { (b, true) } else { (f, false) }
        }
        (Ok(f), Err(_)) => (f, false),
        (Err(_), Ok(b)) => (b, true),
        (Err(e), Err(_)) => return Err(e),
    };
    let b = if swapped { x } else { y };
    let yr = nf.map.apply(b)?;
    // the normal form residual is below 1e−12; store it exactly
    let xr = Point::from_vec_unchecked(alloc::vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(nf.r, 0.0)]);
    Ok(TetraReduction { rho: nf.r, x: xr, y: yr, swapped, frame: ReductionFrame::Tetra(nf.map) })
}

/// Moves a pair of `𝕃_n` (`n ≥ 2`) or `𝔼` to `((0, 0, ρ), y)` in `𝔼`.
pub fn reduce_to_tetra(kind: DomainKind, z: &Point, w: &Point) -> Result<TetraReduction> {
    kind.require(z)?;
    kind.require(w)?;
    match kind {
        DomainKind::LHat(n) if n >= 2 => reduce_lhat(z, w),
        DomainKind::Tetrablock => reduce_tetra(z, w),
        _ => Err(Error::InvalidArgument("only 𝕃_n with n ≥ 2 and 𝔼 reduce to the tetrablock")),
    }
}

fn first_three(z: &Point) -> Point {
    let mut c = z.coords().to_vec();
    c.resize(3, Complex64::new(0.0, 0.0));
    c.truncate(3);
    Point::from_vec_unchecked(c)
}

/// A certified lower bound for `c_D(z, w)`.
pub fn caratheodory_lower(kind: DomainKind, z: &Point, w: &Point, params: &Params) -> Result<LowerBound> {
    kind.require(z)?;
    kind.require(w)?;
    if z == w {
        return Ok(LowerBound::trivial());
    }
    match kind {
        DomainKind::UnitDisc | DomainKind::LHat(1) => Ok(LowerBound {
            value: poincare(z[0], w[0])?,
            witness: LowerWitness::Functional { coefficients: Point::from_vec_unchecked(alloc::vec![Complex64::new(1.0, 0.0)]) },
            evals: 1,
        }),
        DomainKind::LieBall(_) => lieball_lower(z, w),
        DomainKind::Tetrablock | DomainKind::LHat(_) => {
            let red = reduce_to_tetra(kind, z, w)?;
            let mut best = tetra_lower(&red.x, &red.y, params)?;
            // the same slice functions on the original coordinates, after
            // dropping coordinates beyond the third
            let (pz, pw) = match kind {
                DomainKind::Tetrablock => (z.clone(), w.clone()),
                _ => (tetra_from_lhat3(&first_three(z))?, tetra_from_lhat3(&first_three(w))?),
            };
            let (value, lambda, swapped, evals) = lower::slice_family(&pz, &pw, params);
            best.keep_max(LowerBound { value, witness: LowerWitness::Projected { lambda, swapped }, evals });
            Ok(best)
        }
    }
}

/// `c_{L_n}(z, w)` attained by the functional `x ↦ x₁ − ix₂` after the
/// automorphism sending `z` to `0` and the rotation normal form.
fn lieball_lower(z: &Point, w: &Point) -> Result<LowerBound> {
    let g = lie_ball_to_origin(z)?;
    let u = apply_mobius(&g, w)?;
    let frame = normal_frame(&u)?;
    let v = frame.apply(&u)?;
    let at_z = frame.apply(&apply_mobius(&g, z)?)?;
    let i = Complex64::new(0.0, 1.0);
    let f = |p: &Point| p[0] - i * p[1];
    let value = poincare(f(&at_z), f(&v))?;
    let mut coefficients = alloc::vec![Complex64::new(0.0, 0.0); z.dim()];
    coefficients[0] = Complex64::new(1.0, 0.0);
    coefficients[1] = -i;
    Ok(LowerBound { value, witness: LowerWitness::Functional { coefficients: Point::from_vec_unchecked(coefficients) }, evals: 1 })
}

/// How an upper-bound disc relates to the original pair.
#[derive(Clone, Debug, PartialEq)]
pub enum DiscChart {
    /// The disc lives in the domain itself.
    Direct,
    /// The disc lives in `𝔼` and joins the images under `recenter` of the
    /// reduced pair of a [`TetraReduction`].
    Tetra { frame: ReductionFrame, recenter: TetraMobius, swapped: bool },
    /// The disc lives in `L_3` and its image under `Λ_3` joins the reduced
    /// pair in `𝕃_3`.
    Lift { frame: ReductionFrame, swapped: bool, branch: Branch },
}

/// A certified upper bound for `ℓ_D(z, w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperBound {
    pub value: f64,
    pub disc: AnalyticDisc,
    pub chart: DiscChart,
    pub evals: usize,
}

/// A certified upper bound for `ℓ_D(z, w)`. Fails with
/// [`Error::SearchFailure`] if no disc can be certified below
/// `params.max_sigma`.
pub fn lempert_upper(kind: DomainKind, z: &Point, w: &Point, params: &Params) -> Result<UpperBound> {
    kind.require(z)?;
    kind.require(w)?;
    if z == w {
        return Ok(UpperBound { value: 0.0, disc: AnalyticDisc::constant(kind, z), chart: DiscChart::Direct, evals: 0 });
    }
    match kind {
        DomainKind::UnitDisc | DomainKind::LHat(1) => unit_disc_upper(z, w, params),
        DomainKind::LieBall(_) => {
            let out = lieball_upper(z, w, params)?;
            Ok(UpperBound { value: out.value, disc: out.disc, chart: DiscChart::Direct, evals: out.evals })
        }
        DomainKind::Tetrablock | DomainKind::LHat(_) => {
            let red = reduce_to_tetra(kind, z, w)?;
            let mut evals = 0;
            let mut best: Option<UpperBound> = None;
            match tetra_upper(red.rho, &red.y, params) {
                Ok(TetraDisc { certified: out, recenter }) => {
                    evals += out.evals;
                    best = Some(UpperBound {
                        value: out.value,
                        disc: out.disc,
                        chart: DiscChart::Tetra { frame: red.frame.clone(), recenter, swapped: red.swapped },
                        evals: 0,
                    });
                }
                Err(Error::SearchFailure) => {}
                Err(e) => return Err(e),
            }
            // discs in L_3 through either preimage of the second point
            let z3 = crate::automorphisms::lhat3_from_tetra(&red.x)?;
            let w3 = crate::automorphisms::lhat3_from_tetra(&red.y)?;
            let z_lift = lambda_lift(&z3, Branch::Plus);
            for branch in Branch::BOTH {
                let w_lift = lambda_lift(&w3, branch);
                let Ok(g) = lie_ball_to_origin(&z_lift) else { continue };
                let Ok(u) = apply_mobius(&g, &w_lift) else { continue };
                let exact = atanh_clamped(gauge_p(&u));
                if best.as_ref().is_some_and(|b| b.value <= exact) {
                    continue;
                }
                let Ok(out) = lieball_upper(&z_lift, &w_lift, params) else { continue };
                evals += out.evals;
                if best.as_ref().map_or(true, |b| out.value < b.value) {
                    best = Some(UpperBound {
                        value: out.value,
                        disc: out.disc,
                        chart: DiscChart::Lift { frame: red.frame.clone(), swapped: red.swapped, branch },
                        evals: 0,
                    });
                }
            }
            let mut best = best.ok_or(Error::SearchFailure)?;
            best.evals = evals;
            Ok(best)
        }
    }
}

fn unit_disc_upper(z: &Point, w: &Point, params: &Params) -> Result<UpperBound> {
    let a = z[0];
    let one = Complex64::new(1.0, 0.0);
    let t = (w[0] - a) / (one - a.conj() * w[0]);
    let sigma = t.norm();
    let phase = t / sigma;
    let h = |zeta: Complex64| Some(alloc::vec![(zeta * phase + a) / (one + a.conj() * zeta * phase)]);
    let exact = Interpolation::Point { sigma, w: w.clone() };
    let out = disc::polynomialize(&h, DomainKind::UnitDisc, z, &exact, &upper::certify_options(params))
        .ok_or(Error::SearchFailure)?;
    Ok(UpperBound { value: out.value, disc: out.disc, chart: DiscChart::Direct, evals: out.evals })
}

/// An upper bound for the Kobayashi metric `κ_D(0; X)` from a certified
/// tangent disc.
pub fn kobayashi_upper_origin(kind: DomainKind, x: &Point, params: &Params) -> Result<CertifiedDisc> {
    kind.check_dim(x)?;
    if x.is_zero() {
        return Err(Error::InvalidArgument("direction must be non-zero"));
    }
    match kind {
        DomainKind::UnitDisc | DomainKind::LHat(1) => lieball_kobayashi_upper(x, params),
        DomainKind::LieBall(_) => lieball_kobayashi_upper(x, params),
        DomainKind::Tetrablock => tetra_kobayashi_upper(x, params),
        DomainKind::LHat(n) => {
            // a rotation of the tail moves X into ℂ³ × {0}
            let reduced = if n >= 3 {
                partial_normal_frame(x, 1)?.frame.apply(x)?
            } else {
                embed_q(x)
            };
            let y = reduced.coords();
            let i = Complex64::new(0.0, 1.0);
            let t = [y[1] + i * y[2], y[1] - i * y[2], y[0]];
            tetra_kobayashi_upper(&t, params)
        }
    }
}

/// Both bounds for one pair.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceReport {
    pub kind: DomainKind,
    pub z: Point,
    pub w: Point,
    pub c_lower: f64,
    pub l_upper: f64,
    /// `l_upper − c_lower`.
    pub gap: f64,
    /// `tanh(l_upper)`, the node of the certified disc.
    pub sigma: f64,
    pub lower: LowerBound,
    pub upper: UpperBound,
    /// Objective and certificate evaluations spent on the pair.
    pub evaluations: usize,
    /// Wall time, filled in by callers that have a clock.
    pub seconds: f64,
}

impl DistanceReport {
    /// `c_lower ≤ l_upper + 1e−9`.
    pub fn is_sound(&self) -> bool {
        self.c_lower <= self.l_upper + 1e-9
    }
}

pub fn distance_report(kind: DomainKind, z: &Point, w: &Point, params: &Params) -> Result<DistanceReport> {
    let lower = caratheodory_lower(kind, z, w, params)?;
    let upper = lempert_upper(kind, z, w, params)?;
    Ok(DistanceReport {
        kind,
        z: z.clone(),
        w: w.clone(),
        c_lower: lower.value,
        l_upper: upper.value,
        gap: upper.value - lower.value,
        sigma: upper.value.tanh(),
        evaluations: lower.evals + upper.evals,
        lower,
        upper,
        seconds: 0.0,
    })
}

/// One row of a [`GapReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct PairOutcome {
    pub index: usize,
    pub z: Point,
    pub w: Point,
    pub result: Result<DistanceReport>,
}

/// Aggregate statistics over the successful rows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapSummary {
    pub pairs: usize,
    pub failures: usize,
    pub max_gap: f64,
    pub median_gap: f64,
    /// Rows violating `c_lower ≤ l_upper + 1e−9`.
    pub unsound: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub rows: Vec<PairOutcome>,
    pub summary: GapSummary,
}

impl GapSummary {
    pub fn from_rows(rows: &[PairOutcome]) -> Self {
        let mut gaps: Vec<f64> = rows.iter().filter_map(|r| r.result.as_ref().ok()).map(|r| r.gap).collect();
        gaps.sort_by(f64::total_cmp);
        let median_gap = match gaps.len() {
            0 => f64::NAN,
            k if k % 2 == 1 => gaps[k / 2],
            k => 0.5 * (gaps[k / 2 - 1] + gaps[k / 2]),
        };
        Self {
            pairs: rows.len(),
            failures: rows.iter().filter(|r| r.result.is_err()).count(),
            max_gap: gaps.last().copied().unwrap_or(f64::NAN),
            median_gap,
            unsound: rows.iter().filter(|r| r.result.as_ref().is_ok_and(|d| !d.is_sound())).count(),
        }
    }
}

/// Reports for every pair; a failing pair is recorded, not fatal.
pub fn lempert_gap_report(kind: DomainKind, pairs: &[(Point, Point)], params: &Params) -> GapReport {
    let rows: Vec<PairOutcome> = pairs
        .iter()
        .enumerate()
        .map(|(index, (z, w))| PairOutcome { index, z: z.clone(), w: w.clone(), result: distance_report(kind, z, w, params) })
        .collect();
    let summary = GapSummary::from_rows(&rows);
    GapReport { rows, summary }
}

/// A uniformly distributed point of `kind`, by rejection from a simple set
/// containing it: `{|z_1| + ‖z'‖² < 1}` for `𝕃_n`, the unit ball for `L_n`
/// and the tridisc for `𝔼`.
pub fn sample_point<R: Rng + ?Sized>(kind: DomainKind, rng: &mut R) -> Point {
    let n = kind.dim();
    loop {
        let z = match kind {
            DomainKind::LieBall(_) => uniform_ball(rng, n),
            DomainKind::Tetrablock => (0..3).flat_map(|_| uniform_ball(rng, 1)).collect(),
            DomainKind::UnitDisc => uniform_ball(rng, 1),
            DomainKind::LHat(_) => lhat_envelope(rng, n),
        };
        let p = Point::from_vec_unchecked(z);
        if kind.contains(&p) {
            return p;
        }
    }
}

/// Uniform on `{|z_1| + ‖z'‖² < 1}`. The density of `t = ‖z'‖²` is
/// proportional to `t^{m−1}(1 − t)²` with `m = n − 1`, the law of the `m`-th
/// smallest of `m + 2` uniforms.
fn lhat_envelope<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let m = n - 1;
    let t = if m == 0 {
        0.0
    } else {
        let mut u: Vec<f64> = (0..m + 2).map(|_| rng.gen()).collect();
        u.sort_by(f64::total_cmp);
        u[m - 1]
    };
    let mut z = uniform_ball(rng, 1);
    z[0] *= 1.0 - t;
    if m > 0 {
        let tail = uniform_ball(rng, m);
        let norm = tail.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            z.extend(tail);
        } else {
            z.extend(tail.into_iter().map(|c| c * (t.sqrt() / norm)));
        }
    }
    z
}

/// Uniform in the open unit ball of `ℂ^m`: a Gaussian direction and radius
/// `u^{1/2m}`.
fn uniform_ball<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<Complex64> {
    let mut gaussian = || {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let r = (-2.0 * u.ln()).sqrt();
        Complex64::from_polar(r, core::f64::consts::TAU * rng.gen::<f64>())
    };
    let z: Vec<Complex64> = (0..m).map(|_| gaussian()).collect();
    let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let radius = rng.gen::<f64>().powf(1.0 / (2 * m) as f64);
    if norm == 0.0 {
        return alloc::vec![Complex64::new(0.0, 0.0); m];
    }
    z.into_iter().map(|c| c * (radius / norm)).collect()
}

/// `count` independent pairs from [`sample_point`].
pub fn sample_pairs<R: Rng + ?Sized>(kind: DomainKind, count: usize, rng: &mut R) -> Vec<(Point, Point)> {
    (0..count).map(|_| (sample_point(kind, rng), sample_point(kind, rng))).collect()
}
