//! The biholomorphism `𝕃_3 → 𝔼` and a family of tetrablock automorphisms.

use alloc::vec::Vec;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::group::{bidisc_rotation, bidisc_swap, bidisc_translation, GroupElement};
use crate::domain::{tetra_gauge, Point};
use crate::{Error, Result};

use super::group::SINGULAR_TOL;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `Ψ(z) = (z_2 + iz_3, z_2 − iz_3, z_1 + z_2² + z_3²)`.
pub fn tetra_from_lhat3(z: &[Complex64]) -> Result<Point> {
    if z.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: z.len() });
    }
    Ok(Point::from_vec_unchecked(alloc::vec![
        z[1] + I * z[2],
        z[1] - I * z[2],
        z[0] + z[1] * z[1] + z[2] * z[2],
    ]))
}

/// `Ψ⁻¹(x) = (x_3 − x_1x_2, (x_1 + x_2)/2, (x_1 − x_2)/(2i))`.
pub fn lhat3_from_tetra(x: &[Complex64]) -> Result<Point> {
    if x.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: x.len() });
    }
    Ok(Point::from_vec_unchecked(alloc::vec![
        x[2] - x[0] * x[1],
        (x[0] + x[1]) * 0.5,
        (x[0] - x[1]) / (I * 2.0),
    ]))
}

/// `x ↦ scale(flip(M_β(x)))` where `M_β` is induced by the matrix Möbius map
/// `M ↦ (M − B)(Id − B*M)⁻¹`, `B = diag(β_1, β_2)`, `flip` exchanges `x_1`
/// and `x_2`, and `scale(x) = (η_1x_1, η_2x_2, η_1η_2x_3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TetraMobius {
    pub beta1: Complex64,
    pub beta2: Complex64,
    pub eta1: Complex64,
    pub eta2: Complex64,
    pub flip: bool,
}

impl TetraMobius {
    pub fn new(
        beta1: Complex64,
        beta2: Complex64,
        eta1: Complex64,
        eta2: Complex64,
        flip: bool,
    ) -> Result<Self> {
        if beta1.norm() >= 1.0 || beta2.norm() >= 1.0 {
            return Err(Error::InvalidArgument("β must lie in the open bidisc"));
        }
        if (eta1.norm() - 1.0).abs() > 1e-12 || (eta2.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("η must be unimodular"));
        }
        Ok(Self { beta1, beta2, eta1, eta2, flip })
    }

    pub fn identity() -> Self {
        Self { beta1: 0.0.into(), beta2: 0.0.into(), eta1: ONE, eta2: ONE, flip: false }
    }

    /// Pure scaling `(η_1x_1, η_2x_2, η_1η_2x_3)`.
    pub fn scaling(eta1: Complex64, eta2: Complex64) -> Result<Self> {
        Self::new(0.0.into(), 0.0.into(), eta1, eta2, false)
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<Point> {
        if x.len() != 3 {
            return Err(Error::Dimension { expected: 3, got: x.len() });
        }
        let (b1, b2) = (self.beta1.conj(), self.beta2.conj());
        let pi = x[0] * x[1] - x[2];
        let delta = (ONE - b1 * x[0]) * (ONE - b2 * x[1]) - b1 * b2 * pi;
        if delta.norm() < SINGULAR_TOL {
            return Err(Error::Singularity(delta.norm()));
        }
        let y1 = ((x[0] - self.beta1) * (ONE - b2 * x[1]) + b2 * pi) / delta;
        let y2 = ((x[1] - self.beta2) * (ONE - b1 * x[0]) + b1 * pi) / delta;
        let y3 = ((x[0] - self.beta1) * (x[1] - self.beta2) - pi) / delta;
        let (y1, y2) = if self.flip { (y2, y1) } else { (y1, y2) };
        Ok(Point::from_vec_unchecked(alloc::vec![
            self.eta1 * y1,
            self.eta2 * y2,
            self.eta1 * self.eta2 * y3,
        ]))
    }

    pub fn inverse(&self) -> Self {
        let (e1, e2) = (self.eta1, self.eta2);
        if self.flip {
            Self {
                beta1: -e1 * self.beta2,
                beta2: -e2 * self.beta1,
                eta1: e2.conj(),
                eta2: e1.conj(),
                flip: true,
            }
        } else {
            Self {
                beta1: -e1 * self.beta1,
                beta2: -e2 * self.beta2,
                eta1: e1.conj(),
                eta2: e2.conj(),
                flip: false,
            }
        }
    }

    /// The element `g ∈ G(2)` whose descent to `𝕃_3` is `Ψ⁻¹ ∘ self ∘ Ψ`.
    pub fn to_group_element(&self) -> GroupElement {
        let conj_by = |phi1: f64, phi2: f64, inner: &GroupElement| {
            &(&bidisc_rotation(phi1, phi2) * inner) * &bidisc_rotation(-phi1, -phi2)
        };
        let translate = conj_by(
            self.beta1.arg(),
            self.beta2.arg(),
            &bidisc_translation(-self.beta1.norm(), -self.beta2.norm()),
        );
        let flipped = if self.flip { &bidisc_swap() * &translate } else { translate };
        &bidisc_rotation(self.eta1.arg(), self.eta2.arg()) * &flipped
    }
}

/// Outcome of [`normalize_tetra`]: `map(x) = (0, 0, r)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TetraNormalization {
    pub map: TetraMobius,
    pub r: f64,
    pub residual: f64,
}

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-12;
const RESTARTS: usize = 8;

/// Finds `β` with `M_β(x) = (0, 0, ·)` and rotates the last coordinate to
/// `r ≥ 0`.
pub fn normalize_tetra(x: &[Complex64]) -> Result<TetraNormalization> {
    if x.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: x.len() });
    }
    if tetra_gauge(x) >= 1.0 {
        return Err(Error::OutsideDomain(crate::DomainKind::Tetrablock));
    }
    let mut best = newton(x, [x[0], x[1]]);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e7a);
    for _ in 0..RESTARTS {
        if best.1 <= NEWTON_TOL {
            break;
        }
        let seed = [random_disc_point(&mut rng), random_disc_point(&mut rng)];
        let cand = newton(x, seed);
        if cand.1 < best.1 {
            best = cand;
        }
    }
    let ([b1, b2], residual) = best;
    if residual > NEWTON_TOL {
        return Err(Error::NormalizationFailure { residual });
    }
    let m = TetraMobius::new(b1, b2, ONE, ONE, false)?;
    let y = m.apply(x)?;
    let r = y[2].norm();
    let eta1 = if r > 0.0 { y[2].conj() / r } else { ONE };
    let map = TetraMobius { eta1, ..m };
    let residual = residual.max(y[0].norm()).max(y[1].norm());
    Ok(TetraNormalization { map, r, residual })
}

fn random_disc_point(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.gen_range(0.0f64..0.95).sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..core::f64::consts::TAU))
}

fn residual(x: &[Complex64], b: [Complex64; 2]) -> ([Complex64; 2], f64) {
    let pi = x[0] * x[1] - x[2];
    let (c1, c2) = (b[0].conj(), b[1].conj());
    let f1 = (x[0] - b[0]) * (ONE - c2 * x[1]) + c2 * pi;
    let f2 = (x[1] - b[1]) * (ONE - c1 * x[0]) + c1 * pi;
    let r = f1.norm().max(f2.norm());
    ([f1, f2], r)
}

fn newton(x: &[Complex64], seed: [Complex64; 2]) -> ([Complex64; 2], f64) {
    let pi = x[0] * x[1] - x[2];
    let mut b = seed;
    let (mut f, mut res) = residual(x, b);
    for _ in 0..NEWTON_MAX_ITER {
        if res <= NEWTON_TOL {
            break;
        }
        // Wirtinger derivatives: F1 depends on β_1 and β̄_2, F2 on β_2 and β̄_1
        let d1_b1 = -(ONE - b[1].conj() * x[1]);
        let d1_cb2 = -(x[0] - b[0]) * x[1] + pi;
        let d2_b2 = -(ONE - b[0].conj() * x[0]);
        let d2_cb1 = -(x[1] - b[1]) * x[0] + pi;
        let zero = Complex64::new(0.0, 0.0);
        // columns: (Re β_1, Im β_1, Re β_2, Im β_2)
        let entries = |holo: Complex64, anti: Complex64| (holo + anti, I * (holo - anti));
        let (f1_u1, f1_v1) = entries(d1_b1, zero);
        let (f1_u2, f1_v2) = entries(zero, d1_cb2);
        let (f2_u1, f2_v1) = entries(zero, d2_cb1);
        let (f2_u2, f2_v2) = entries(d2_b2, zero);
        let mut jac = Matrix4::zeros();
        let rows = [[f1_u1, f1_v1, f1_u2, f1_v2], [f2_u1, f2_v1, f2_u2, f2_v2]];
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                jac[(2 * i, j)] = v.re;
                jac[(2 * i + 1, j)] = v.im;
            }
        }
        let rhs = Vector4::new(-f[0].re, -f[0].im, -f[1].re, -f[1].im);
        let Some(step) = jac.lu().solve(&rhs) else { break };
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-6 {
            let cand = [
                b[0] + Complex64::new(step[0], step[1]) * t,
                b[1] + Complex64::new(step[2], step[3]) * t,
            ];
            if cand[0].norm() < 1.0 && cand[1].norm() < 1.0 {
                let (fc, rc) = residual(x, cand);
                if rc < res {
                    b = cand;
                    f = fc;
                    res = rc;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (b, res)
}

/// A list of `TetraMobius` maps near `base`, used to enlarge function
/// families. Deterministic in `seed`.
pub fn perturbations(base: &TetraMobius, count: usize, scale: f64, seed: u64) -> Vec<TetraMobius> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let jitter = |rng: &mut ChaCha8Rng| {
            Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
        };
        let b1 = base.beta1 + jitter(&mut rng);
        let b2 = base.beta2 + jitter(&mut rng);
        if let Ok(m) = TetraMobius::new(b1, b2, base.eta1, base.eta2, base.flip) {
            if b1.norm() < 0.95 && b2.norm() < 0.95 {
                out.push(m);
            }
        }
    }
    out
}
