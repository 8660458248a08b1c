//! Closed-form invariant distances and metrics at the origin.
//!
//! All distances are on the Poincaré scale: `tanh⁻¹` of a quantity in
//! `[0, 1)`.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::domain::{gauge_p, in_lhat, in_lie_ball, in_tetrablock, moduli, symmetric_square};
use crate::rotations::normalizing_phase;
use crate::{DomainKind, Error, Result};

/// Largest argument passed to `tanh⁻¹`.
pub const ATANH_CLAMP: f64 = 1.0 - 1e-15;
/// Allowed disagreement between the two closed forms of `c_{𝕃_n}(0, ·)`.
pub const FORM_AGREEMENT_TOL: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `tanh⁻¹` after clamping the argument into `[0, 1 − 1e−15]`.
pub fn atanh_clamped(x: f64) -> f64 {
    x.clamp(0.0, ATANH_CLAMP).atanh()
}

/// The Möbius pseudo-distance `|(a − b)/(1 − āb)|`.
pub fn mobius_modulus(a: Complex64, b: Complex64) -> f64 {
    ((a - b) / (Complex64::new(1.0, 0.0) - a.conj() * b)).norm()
}

/// Poincaré distance `tanh⁻¹ |(a − b)/(1 − āb)|` on the unit disc.
pub fn poincare(a: Complex64, b: Complex64) -> Result<f64> {
    if !(a.norm() < 1.0 && b.norm() < 1.0) {
        return Err(Error::OutsideDomain(DomainKind::UnitDisc));
    }
    Ok(atanh_clamped(mobius_modulus(a, b)))
}

/// `c_𝔼(0, x)`, with `x_1` and `x_2` exchanged first when `|x_1| > |x_2|`.
pub fn carath_origin_tetra(x: &[Complex64]) -> Result<f64> {
    if !in_tetrablock(x)? {
        return Err(Error::OutsideDomain(DomainKind::Tetrablock));
    }
    let (x1, x2) = if x[0].norm() > x[1].norm() { (x[1], x[0]) } else { (x[0], x[1]) };
    let x3 = x[2];
    let num = (x2 - x1.conj() * x3).norm() + (x1 * x2 - x3).norm();
    Ok(atanh_clamped(num / (1.0 - x1.norm_sqr())))
}

/// Both closed forms of `c_{𝕃_n}(0, z)`: the printed one in terms of
/// `⟨z',z̄'⟩` and the one using the phase `η` with `η²⟨z',z̄'⟩ = |⟨z',z̄'⟩|`.
/// Values are returned before `tanh⁻¹`.
pub fn carath_origin_lhat_forms(z: &[Complex64]) -> Result<(f64, f64)> {
    let n = z.len();
    if n < 2 {
        return Err(Error::Dimension { expected: 2, got: n });
    }
    if !in_lhat(z) {
        return Err(Error::OutsideDomain(DomainKind::LHat(n)));
    }
    let (z1, tail) = (z[0], &z[1..]);
    if tail.iter().all(|c| c.norm() == 0.0) {
        return Ok((z1.norm(), z1.norm()));
    }
    let q = symmetric_square(tail);
    let m = moduli(tail);
    let p = m.gauge();
    let den = p * p - q.norm_sqr();
    let printed = p * (Complex64::new(1.0, 0.0) - z1 * q.conj() / den).norm() + z1.norm() * p * p / den;

    let eta = normalizing_phase(tail);
    let mm = m.a - m.b;
    let one_minus = 1.0 - mm * mm;
    let eta_form = (eta.conj() * p - eta * z1 * mm / one_minus).norm() + z1.norm() / one_minus;
    Ok((printed, eta_form))
}

/// `c_{𝕃_n}(0, z)`; the phase form is returned after checking it against the
/// printed one.
pub fn carath_origin_lhat(z: &[Complex64]) -> Result<f64> {
    let (printed, eta_form) = carath_origin_lhat_forms(z)?;
    let gap = (atanh_clamped(printed) - atanh_clamped(eta_form)).abs();
    if gap > FORM_AGREEMENT_TOL {
        return Err(Error::FormulaInconsistency(gap));
    }
    Ok(atanh_clamped(eta_form))
}

/// `c_{𝕃_3}(0, z)` in coordinates, flipping `z_3 ↦ −z_3` first when
/// `|z_2 + iz_3| > |z_2 − iz_3|`.
pub fn carath_origin_lhat3(z: &[Complex64]) -> Result<f64> {
    if z.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: z.len() });
    }
    if !in_lhat(z) {
        return Err(Error::OutsideDomain(DomainKind::LHat(3)));
    }
    let (mut plus, mut minus) = (z[1] + I * z[2], z[1] - I * z[2]);
    if plus.norm() > minus.norm() {
        core::mem::swap(&mut plus, &mut minus);
    }
    let den = 1.0 - plus.norm_sqr();
    let value = (minus - z[0] * plus.conj() / den).norm() + z[0].norm() / den;
    Ok(atanh_clamped(value))
}

/// `c_{L_n}(0, z) = tanh⁻¹ p(z)`.
pub fn carath_origin_lieball(z: &[Complex64]) -> Result<f64> {
    if !in_lie_ball(z) {
        return Err(Error::OutsideDomain(DomainKind::LieBall(z.len())));
    }
    Ok(atanh_clamped(gauge_p(z)))
}

/// `κ_𝔼(0; X) = max(|X_1|, |X_2|) + |X_3|`.
pub fn kobayashi_origin_tetra(x: &[Complex64]) -> Result<f64> {
    if x.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: x.len() });
    }
    Ok(x[0].norm().max(x[1].norm()) + x[2].norm())
}

/// `κ_{𝕃_n}(0; X) = |X_1| + p(X')`.
pub fn kobayashi_origin_lhat(x: &[Complex64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::Dimension { expected: 2, got: x.len() });
    }
    Ok(x[0].norm() + gauge_p(&x[1..]))
}

/// The three-dimensional expression `|X_1| + max(|X_2 + iX_3|, |X_2 − iX_3|)`.
pub fn kobayashi_origin_lhat3(x: &[Complex64]) -> Result<f64> {
    if x.len() != 3 {
        return Err(Error::Dimension { expected: 3, got: x.len() });
    }
    Ok(x[0].norm() + (x[1] + I * x[2]).norm().max((x[1] - I * x[2]).norm()))
}

/// `κ_{L_n}(0; X) = p(X)`.
pub fn kobayashi_origin_lieball(x: &[Complex64]) -> f64 {
    gauge_p(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::tetra_from_lhat3;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn poincare_examples() {
        assert_abs_diff_eq!(poincare(c(0.0, 0.0), c(0.5, 0.0)).unwrap(), 0.5f64.atanh(), epsilon = 1e-15);
        assert_eq!(poincare(c(0.3, 0.2), c(0.3, 0.2)).unwrap(), 0.0);
        assert_abs_diff_eq!(
            poincare(c(0.3, 0.0), c(-0.3, 0.0)).unwrap(),
            (0.6f64 / 1.09).atanh(),
            epsilon = 1e-15
        );
        assert!(poincare(c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn tetra_examples() {
        assert_abs_diff_eq!(carath_origin_tetra(&[c(0.0, 0.0), c(0.0, 0.0), c(0.4, 0.0)]).unwrap(), 0.4f64.atanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(carath_origin_tetra(&[c(0.0, 0.0), c(0.3, 0.4), c(0.0, 0.0)]).unwrap(), 0.5f64.atanh(), epsilon = 1e-15);
        assert_eq!(carath_origin_tetra(&[c(0.0, 0.0); 3]).unwrap(), 0.0);
        assert!(carath_origin_tetra(&[c(0.8, 0.0), c(0.8, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn lhat_examples() {
        let r: f64 = 0.35;
        assert_abs_diff_eq!(carath_origin_lhat(&[c(r, 0.2), c(0.0, 0.0), c(0.0, 0.0)]).unwrap(), (0.35f64.hypot(0.2)).atanh(), epsilon = 1e-15);
        let tail = [c(0.0, 0.0), c(0.2, 0.1), c(-0.1, 0.3), c(0.05, 0.0)];
        assert_abs_diff_eq!(carath_origin_lhat(&tail).unwrap(), gauge_p(&tail[1..]).atanh(), epsilon = 1e-12);
        assert_eq!(carath_origin_lhat(&[c(0.0, 0.0); 4]).unwrap(), 0.0);

        assert_abs_diff_eq!(carath_origin_lhat3(&[c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap(), r.atanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(carath_origin_lhat3(&[c(0.0, 0.0), c(r / 2.0, 0.0), c(0.0, -r / 2.0)]).unwrap(), r.atanh(), epsilon = 1e-15);
        assert_eq!(carath_origin_lhat3(&[c(0.0, 0.0); 3]).unwrap(), 0.0);
    }

    #[test]
    fn three_dimensional_form_matches_tetrablock() {
        let z = [c(0.1, -0.2), c(0.2, 0.15), c(-0.1, 0.2)];
        let x = tetra_from_lhat3(&z).unwrap();
        assert_abs_diff_eq!(carath_origin_lhat3(&z).unwrap(), carath_origin_tetra(&x).unwrap(), epsilon = 1e-12);
        assert_abs_diff_eq!(carath_origin_lhat3(&z).unwrap(), carath_origin_lhat(&z).unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn lieball_and_kobayashi_examples() {
        assert_abs_diff_eq!(carath_origin_lieball(&[c(0.4, 0.0), c(0.0, 0.4)]).unwrap(), 0.8f64.atanh(), epsilon = 1e-14);
        assert_eq!(carath_origin_lieball(&[c(0.0, 0.0); 3]).unwrap(), 0.0);
        assert!(carath_origin_lieball(&[c(0.5, 0.0), c(0.0, 0.5)]).is_err());

        assert_eq!(kobayashi_origin_tetra(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap(), 1.0);
        assert_abs_diff_eq!(kobayashi_origin_tetra(&[c(0.5, 0.0), c(0.2, 0.0), c(0.3, 0.0)]).unwrap(), 0.8, epsilon = 1e-15);
        assert_eq!(kobayashi_origin_tetra(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap(), 1.0);

        assert_abs_diff_eq!(kobayashi_origin_lhat(&[c(0.3, 0.4), c(0.0, 0.0)]).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(kobayashi_origin_lhat(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(kobayashi_origin_lhat(&[c(1.0, 0.0), c(0.3, 0.0), c(0.4, 0.0), c(0.0, 0.0)]).unwrap(), 1.5, epsilon = 1e-14);
    }

    #[test]
    fn clamp_keeps_values_finite() {
        assert!(atanh_clamped(1.0).is_finite());
        assert_eq!(atanh_clamped(-1e-17), 0.0);
    }
}
