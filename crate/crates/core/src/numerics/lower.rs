//! Carathéodory lower bounds from explicit families of holomorphic
//! functions `𝔼 → 𝔻`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::optimize::{golden_max, nelder_mead, SimplexOptions};
use super::Params;
use crate::automorphisms::{normalize_tetra, perturbations, TetraMobius};
use crate::domain::{tetra_gauge, Point};
use crate::metrics::atanh_clamped;
use crate::{DomainKind, Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const TAU: f64 = core::f64::consts::TAU;

/// `G_λ(x) = (x₂ − λx₃)/(1 − λx₁)`.
pub fn tetra_slice_function(lambda: Complex64, x: &[Complex64]) -> Result<Complex64> {
    if x.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: x.len() });
    }
    let den = ONE - lambda * x[0];
    if den.norm() < 1e-13 {
        return Err(Error::Singularity(den.norm()));
    }
    Ok((x[1] - lambda * x[2]) / den)
}

/// `H_λ(x) = G_λ(x₂, x₁, x₃)`.
pub fn tetra_slice_function_swapped(lambda: Complex64, x: &[Complex64]) -> Result<Complex64> {
    if x.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: x.len() });
    }
    tetra_slice_function(lambda, &[x[1], x[0], x[2]])
}

/// The fixed point `ζ = G_{φ(ζ)}(x)` in `𝔻`, where
/// `φ(ζ) = ω(ζ − a)/(1 − āζ)`; holomorphic in `x ∈ 𝔼`. With `swapped` the
/// first two coordinates are exchanged first. As `|a| → 1` this tends to
/// `G_λ` with `λ = −ωa`.
pub fn tetra_fixed_point_function(omega: Complex64, a: Complex64, swapped: bool, x: &[Complex64]) -> Result<Complex64> {
    if x.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: x.len() });
    }
    if a.norm() >= 1.0 {
        return Err(Error::InvalidArgument("the Blaschke centre must lie in the disc"));
    }
    let (x1, x2) = if swapped { (x[1], x[0]) } else { (x[0], x[1]) };
    let x3 = x[2];
    let ab = a.conj();
    let c2 = -ab - omega * x1;
    let c1 = ONE + omega * a * x1 + ab * x2 + omega * x3;
    let c0 = -x2 - omega * a * x3;
    let roots = quadratic_roots(c2, c1, c0);
    let mut inside = roots.iter().flatten().filter(|r| r.norm() < 1.0);
    match (inside.next(), inside.next()) {
        (Some(r), None) => Ok(*r),
        _ => Err(Error::Singularity(0.0)),
    }
}

fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Option<Complex64>; 2] {
    if a.norm() < 1e-300 {
        return [(b.norm() > 0.0).then(|| -c / b), None];
    }
    let disc = (b * b - a * c * 4.0).sqrt();
    // avoid cancellation
    let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) / 2.0 } else { -(b - disc) / 2.0 };
    if q.norm() < 1e-300 {
        return [Some(Complex64::new(0.0, 0.0)), Some(Complex64::new(0.0, 0.0))];
    }
    [Some(q / a), Some(c / q)]
}

/// The function that attained a lower bound.
#[derive(Clone, Debug, PartialEq)]
pub enum LowerWitness {
    /// `z = w`; nothing to separate.
    Trivial,
    /// `G_λ` (or `H_λ` when `swapped`).
    Slice { lambda: Complex64, swapped: bool },
    /// [`tetra_fixed_point_function`].
    FixedPoint { omega: Complex64, a: Complex64, swapped: bool },
    /// `G_λ` or `H_λ` after a tetrablock automorphism.
    Precomposed { map: TetraMobius, lambda: Complex64, swapped: bool },
    /// [`tetra_fixed_point_function`] after a tetrablock automorphism.
    PrecomposedFixedPoint { map: TetraMobius, omega: Complex64, a: Complex64, swapped: bool },
    /// `G_λ` or `H_λ` after dropping coordinates down to `𝕃_3`.
    Projected { lambda: Complex64, swapped: bool },
    /// A linear functional of dual norm one applied after an automorphism.
    Functional { coefficients: Point },
}

impl LowerWitness {
    /// The unimodular parameter of the witness when it has one.
    pub fn lambda(&self) -> Option<Complex64> {
        match self {
            LowerWitness::Slice { lambda, .. }
            | LowerWitness::Precomposed { lambda, .. }
            | LowerWitness::Projected { lambda, .. } => Some(*lambda),
            LowerWitness::FixedPoint { omega, .. } | LowerWitness::PrecomposedFixedPoint { omega, .. } => Some(*omega),
            LowerWitness::Trivial | LowerWitness::Functional { .. } => None,
        }
    }
}

/// A certified lower bound for `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBound {
    pub value: f64,
    pub witness: LowerWitness,
    pub evals: usize,
}

impl LowerBound {
    pub(crate) fn trivial() -> Self {
        Self { value: 0.0, witness: LowerWitness::Trivial, evals: 0 }
    }

    pub(crate) fn keep_max(&mut self, other: LowerBound) {
        let evals = self.evals + other.evals;
        if other.value > self.value {
            *self = other;
        }
        self.evals = evals;
    }
}

fn rho(f: Complex64, g: Complex64) -> f64 {
    atanh_clamped(((f - g) / (ONE - f.conj() * g)).norm())
}

fn slice_value(theta: f64, swapped: bool, x: &[Complex64], y: &[Complex64]) -> f64 {
    let lambda = Complex64::from_polar(1.0, theta);
    let f = |p: &[Complex64]| {
        if swapped { tetra_slice_function_swapped(lambda, p) } else { tetra_slice_function(lambda, p) }
    };
    match (f(x), f(y)) {
        (Ok(a), Ok(b)) if a.norm() < 1.0 && b.norm() < 1.0 => rho(a, b),
        _ => 0.0,
    }
}

/// Best `G_λ`/`H_λ` over a grid of `λ ∈ 𝕋`, refined by golden-section
/// search around the three best grid points. Returns `(value, λ, swapped,
/// evaluations)`.
pub(crate) fn slice_family(x: &[Complex64], y: &[Complex64], params: &Params) -> (f64, Complex64, bool, usize) {
    let grid = params.lambda_grid.max(8);
    let step = TAU / grid as f64;
    let mut scored: Vec<(f64, f64, bool)> = Vec::with_capacity(2 * grid);
    for swapped in [false, true] {
        for k in 0..grid {
            let theta = k as f64 * step;
            scored.push((slice_value(theta, swapped, x, y), theta, swapped));
        }
    }
    let mut evals = scored.len();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = scored[0];
    for &(_, theta, swapped) in scored.iter().take(3) {
        let (t, v, e) = golden_max(|t| slice_value(t, swapped, x, y), theta - step, theta + step, params.golden_tol);
        evals += e;
        if v > best.0 {
            best = (v, t, swapped);
        }
    }
    (best.0, Complex64::from_polar(1.0, best.1), best.2, evals)
}

fn fixed_point_value(p: &[f64], swapped: bool, x: &[Complex64], y: &[Complex64]) -> f64 {
    let omega = Complex64::from_polar(1.0, p[0]);
    let q = Complex64::new(p[1], p[2]);
    let a = if q.norm() > 0.0 { q * (q.norm().tanh() / q.norm()) } else { q };
    match (
        tetra_fixed_point_function(omega, a, swapped, x),
        tetra_fixed_point_function(omega, a, swapped, y),
    ) {
        (Ok(f), Ok(g)) => rho(f, g),
        _ => 0.0,
    }
}

fn unpack_fixed_point(p: &[f64]) -> (Complex64, Complex64) {
    let q = Complex64::new(p[1], p[2]);
    let a = if q.norm() > 0.0 { q * (q.norm().tanh() / q.norm()) } else { q };
    (Complex64::from_polar(1.0, p[0]), a)
}

/// Maximizes the fixed-point family with Nelder–Mead from starts seeded by
/// the best slice parameter and by random draws.
fn fixed_point_family(x: &[Complex64], y: &[Complex64], seed_lambda: Complex64, seed_swapped: bool, params: &Params) -> LowerBound {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0xb1a5);
    let mut best = LowerBound::trivial();
    let opts = SimplexOptions { step: 0.3, xtol: 1e-11, ftol: 1e-15, max_evals: 3000 };
    for swapped in [false, true] {
        let mut starts: Vec<[f64; 3]> = Vec::new();
        if swapped == seed_swapped {
            // |a| → 1 with λ = −ωa recovers the slice function
            for r in [0.6, 0.9] {
                let phase = Complex64::from_polar(1.0, 0.3);
                let a = phase * r;
                let omega = -seed_lambda * a.conj() / a.norm();
                let q = phase * r.atanh();
                starts.push([omega.arg(), q.re, q.im]);
            }
        }
        for _ in 0..params.simplex_restarts {
            starts.push([rng.gen_range(0.0..TAU), rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)]);
        }
        for s in starts {
            let m = nelder_mead(|p| -fixed_point_value(p, swapped, x, y), &s, opts);
            let (omega, a) = unpack_fixed_point(&m.x);
            best.keep_max(LowerBound {
                value: -m.value,
                witness: LowerWitness::FixedPoint { omega, a, swapped },
                evals: m.evals,
            });
        }
    }
    best
}

/// Lower bound for `c_𝔼(x, y)`: slice functions, the fixed-point family, and
/// slice functions after the normalizing automorphism of `x` and random
/// perturbations of it.
pub fn tetra_lower(x: &[Complex64], y: &[Complex64], params: &Params) -> Result<LowerBound> {
    for p in [x, y] {
        if !crate::domain::in_tetrablock(p)? {
            return Err(Error::OutsideDomain(DomainKind::Tetrablock));
        }
    }
    if x == y {
        return Ok(LowerBound::trivial());
    }
    let (value, lambda, swapped, evals) = slice_family(x, y, params);
    let mut best = LowerBound { value, witness: LowerWitness::Slice { lambda, swapped }, evals };
    best.keep_max(fixed_point_family(x, y, lambda, swapped, params));

    let base = normalize_tetra(x).map(|n| n.map).unwrap_or_else(|_| TetraMobius::identity());
    let mut maps = alloc::vec![base];
    maps.extend(perturbations(&base, params.perturbations, 0.1, params.seed ^ 0x9e37));
    for map in maps {
        let (Ok(mx), Ok(my)) = (map.apply(x), map.apply(y)) else { continue };
        let (value, lambda, swapped, evals) = slice_family(&mx, &my, params);
        best.keep_max(LowerBound { value, witness: LowerWitness::Precomposed { map, lambda, swapped }, evals });
    }
    let refined = refine_precomposed(x, y, &best, params);
    best.keep_max(refined);
    Ok(best)
}

const PRECOMPOSED_STARTS: usize = 64;
const PRECOMPOSED_SCREEN_EVALS: usize = 700;
const PRECOMPOSED_POLISHED: usize = 6;
// near the circle `M_β` squashes everything onto the boundary
const MAX_BETA: f64 = 0.99;

fn disc_point(re: f64, im: f64) -> Complex64 {
    let q = Complex64::new(re, im);
    if q.norm() > 0.0 { q * (q.norm().tanh().min(MAX_BETA) / q.norm()) } else { q }
}

fn precomposed_value(p: &[f64], swapped: bool, x: &[Complex64], y: &[Complex64]) -> f64 {
    let Ok(map) = TetraMobius::new(disc_point(p[0], p[1]), disc_point(p[2], p[3]), ONE, ONE, false) else { return 0.0 };
    match (map.apply(x), map.apply(y)) {
        (Ok(mx), Ok(my)) if tetra_gauge(&mx) < 1.0 && tetra_gauge(&my) < 1.0 => fixed_point_value(&p[4..], swapped, &mx, &my),
        _ => 0.0,
    }
}

/// Nelder–Mead over `(β₁, β₂, ω, a)` for the fixed-point function after
/// `M_β`, from the best witness so far and from random draws. The phases
/// `η` of a tetrablock automorphism only rotate `ω`, so they need no search.
fn refine_precomposed(x: &[Complex64], y: &[Complex64], best: &LowerBound, params: &Params) -> LowerBound {
    let mut out = LowerBound::trivial();
    let unpack = |b: Complex64| if b.norm() > 0.0 { b * (b.norm().atanh() / b.norm()) } else { b };
    let mut starts: Vec<(bool, [f64; 7])> = Vec::new();
    let seed = match &best.witness {
        LowerWitness::Precomposed { map, lambda, swapped } if !map.flip => {
            let lambda = if *swapped { *lambda * map.eta2 } else { *lambda * map.eta1 };
            Some((map.beta1, map.beta2, lambda, *swapped))
        }
        LowerWitness::Slice { lambda, swapped } => Some((ZERO, ZERO, *lambda, *swapped)),
        _ => None,
    };
    if let Some((b1, b2, lambda, swapped)) = seed {
        let (q1, q2) = (unpack(b1), unpack(b2));
        // |a| → 1 with λ = −ωa recovers the slice function
        let a = Complex64::new(0.9, 0.0);
        let omega = -lambda;
        let q = a * a.norm().atanh() / a.norm();
        starts.push((swapped, [q1.re, q1.im, q2.re, q2.im, omega.arg(), q.re, q.im]));
    }
    if let LowerWitness::FixedPoint { omega, a, swapped } = &best.witness {
        let q = unpack(*a);
        starts.push((*swapped, [0.0, 0.0, 0.0, 0.0, omega.arg(), q.re, q.im]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x7e7a);
    for _ in 0..PRECOMPOSED_STARTS {
        let mut p = [0.0; 7];
        p.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
        p[4] = rng.gen_range(0.0..TAU);
        starts.push((rng.gen(), p));
    }
    let screen = SimplexOptions { step: 0.3, xtol: 1e-6, ftol: 1e-9, max_evals: PRECOMPOSED_SCREEN_EVALS };
    let mut screened: Vec<(f64, bool, Vec<f64>, usize)> = starts
        .into_iter()
        .map(|(swapped, start)| {
            let m = nelder_mead(|p| -precomposed_value(p, swapped, x, y), &start, screen);
            (m.value, swapped, m.x, m.evals)
        })
        .collect();
    screened.sort_by(|a, b| a.0.total_cmp(&b.0));
    out.evals = screened.iter().map(|s| s.3).sum();
    let polish = SimplexOptions { step: 0.1, xtol: 1e-12, ftol: 1e-15, max_evals: 8000 };
    for (_, swapped, start, _) in screened.into_iter().take(PRECOMPOSED_POLISHED) {
        let mut m = nelder_mead(|p| -precomposed_value(p, swapped, x, y), &start, polish);
        let mut evals = m.evals;
        // restart until a fresh simplex stops improving
        for _ in 0..4 {
            let next = nelder_mead(|p| -precomposed_value(p, swapped, x, y), &m.x, polish);
            evals += next.evals;
            let done = next.value > m.value - 1e-13;
            if next.value <= m.value {
                m = next;
            }
            if done {
                break;
            }
        }
        let Ok(map) = TetraMobius::new(disc_point(m.x[0], m.x[1]), disc_point(m.x[2], m.x[3]), ONE, ONE, false) else { continue };
        let (omega, a) = unpack_fixed_point(&m.x[4..]);
        // re-evaluate; the bound is the value of the reported witness
        let value = precomposed_value(&m.x, swapped, x, y);
        out.keep_max(LowerBound { value, witness: LowerWitness::PrecomposedFixedPoint { map, omega, a, swapped }, evals });
    }
    out
}
