//! Normal forms of points and pairs in `𝕃_n` under its automorphism group.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::group::{embed_leading, lie_ball_to_origin};
use super::lhat::LhatAutomorphism;
use super::tetra::{normalize_tetra, tetra_from_lhat3};
use crate::domain::{in_lhat, DomainKind, Point};
use crate::rotations::partial_normal_frame;
use crate::{Error, Result};

/// Tolerance on the tail of a normal form.
pub const NORMAL_FORM_TOL: f64 = 1e-8;

/// An automorphism `Φ` of `𝕃_n` with `Φ(z) = (ρ, 0, …, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointNormalization {
    pub map: LhatAutomorphism,
    pub rho: f64,
}

/// An automorphism `Φ` with `Φ(z) = z* = (ρ, 0, …, 0)` and
/// `Φ(w) = w* ∈ 𝕃_3 × {0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairNormalization {
    pub map: LhatAutomorphism,
    pub rho: f64,
    pub z_star: Point,
    pub w_star: Point,
}

fn check_lhat(z: &[Complex64]) -> Result<usize> {
    let n = z.len();
    if n < 3 {
        return Err(Error::Dimension { expected: 3, got: n });
    }
    if !in_lhat(z) {
        return Err(Error::OutsideDomain(DomainKind::LHat(n)));
    }
    Ok(n)
}

/// Constructs `Φ` with `Φ(z) = (ρ, 0, …, 0)` for `z ∈ 𝕃_n`, `n ≥ 3`.
pub fn normalize_point_lhat(z: &[Complex64]) -> Result<PointNormalization> {
    check_lhat(z)?;
    let mut map = normalizing_map(z)?;
    let (mut rho, mut residual) = normal_form_residual(&map.apply(z)?);
    for _ in 0..REFINEMENT_ROUNDS {
        if residual <= NORMAL_FORM_TOL * 1e-3 {
            break;
        }
        let image = map.apply(z)?;
        if !in_lhat(&image) {
            break;
        }
        let refined = normalizing_map(&image)?.compose(&map);
        let (r, res) = normal_form_residual(&refined.apply(z)?);
        if res >= residual {
            break;
        }
        (map, rho, residual) = (refined, r, res);
    }
    if residual > NORMAL_FORM_TOL || rho < -NORMAL_FORM_TOL {
        return Err(Error::NormalizationFailure { residual });
    }
    Ok(PointNormalization { map, rho: rho.max(0.0) })
}

const REFINEMENT_ROUNDS: usize = 3;

fn normal_form_residual(image: &Point) -> (f64, f64) {
    let residual = image[0].im.abs().max(image.tail().iter().map(|c| c.norm()).fold(0.0, f64::max));
    (image[0].re, residual)
}

fn normalizing_map(z: &[Complex64]) -> Result<LhatAutomorphism> {
    let n = z.len();
    if z[0] == Complex64::new(0.0, 0.0) {
        return Ok(LhatAutomorphism::descend(lie_ball_to_origin(&z[1..])?));
    }
    let frame = partial_normal_frame(z, 1)?;
    let rotate = LhatAutomorphism::tail_rotation(&frame.frame)?;
    let reduced = rotate.apply(z)?;
    let x = tetra_from_lhat3(&reduced.coords()[..3])?;
    let tetra = normalize_tetra(&x)?;
    let g = embed_leading(&tetra.map.to_group_element(), n - 1);
    Ok(LhatAutomorphism::descend(g).compose(&rotate))
}

/// Normalizes `z` and rotates the image of `w` into `𝕃_3 × {0}`.
pub fn normalize_pair(z: &[Complex64], w: &[Complex64]) -> Result<PairNormalization> {
    let n = check_lhat(z)?;
    if w.len() != n {
        return Err(Error::Dimension { expected: n, got: w.len() });
    }
    if !in_lhat(w) {
        return Err(Error::OutsideDomain(DomainKind::LHat(n)));
    }
    let first = normalize_point_lhat(z)?;
    let w1 = first.map.apply(w)?;
    let frame = partial_normal_frame(&w1, 1)?;
    let rotate = LhatAutomorphism::tail_rotation(&frame.frame)?;
    let map = rotate.compose(&first.map);

    let mut z_star = alloc::vec![Complex64::new(0.0, 0.0); n];
    z_star[0] = first.rho.into();
    let w_image = rotate.apply(&w1)?;
    let mut w_star: Vec<Complex64> = w_image.coords().to_vec();
    let tail_residual = w_star[3..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    if tail_residual > NORMAL_FORM_TOL {
        return Err(Error::NormalizationFailure { residual: tail_residual });
    }
    w_star[3..].iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
    Ok(PairNormalization {
        map,
        rho: first.rho,
        z_star: Point::from_vec_unchecked(z_star),
        w_star: Point::from_vec_unchecked(w_star),
    })
}
