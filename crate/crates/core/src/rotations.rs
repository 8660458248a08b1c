//! Rotation normal forms.
//!
//! Every `z ∈ ℂⁿ`, `n ≥ 2`, can be brought to `(a(z), i·b(z), 0, …, 0)` by a
//! unimodular phase `η` and a real rotation `A`: pick `η` with
//! `η²⟨z,z̄⟩ = |⟨z,z̄⟩|`, split `ηz = u + iv` into real and imaginary parts
//! (then `u ⊥ v`, `‖u‖ = a`, `‖v‖ = b`) and complete `u/‖u‖, v/‖v‖` to an
//! orthonormal basis. Real rotations preserve `‖·‖`, `⟨z,z̄⟩` and hence `p`.
//!
//! When `n = 2`, `a > b > 0` and the pair `(u, v)` is negatively oriented, no
//! determinant-one rotation reaches `(a, ib)`; the normal form is then
//! `(a, −ib)`. The signed value is reported by [`PartialFrame::b`].

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::domain::{moduli, norm_sqr, symmetric_square, Point};
use crate::{Error, Result};

const ORTHO_TOL: f64 = 1e-12;
const SEED_DISCARD: f64 = 1e-8;

/// A unimodular phase together with a real special orthogonal matrix; acts
/// by `z ↦ η·(A z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub eta: Complex64,
    pub rotation: DMatrix<f64>,
}

impl Frame {
    pub fn identity(n: usize) -> Self {
        Self { eta: Complex64::new(1.0, 0.0), rotation: DMatrix::identity(n, n) }
    }

    /// Checks `AᵀA = Id`, `det A = 1` (1e−12) and `|η| = 1` (1e−14).
    pub fn new(eta: Complex64, rotation: DMatrix<f64>) -> Result<Self> {
        if !rotation.is_square() {
            return Err(Error::InvalidArgument("rotation must be square"));
        }
        if (eta.norm() - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidArgument("eta must be unimodular"));
        }
        if !is_special_orthogonal(&rotation, ORTHO_TOL) {
            return Err(Error::InvalidArgument("rotation must lie in SO(n)"));
        }
        Ok(Self { eta, rotation })
    }

    pub fn dim(&self) -> usize {
        self.rotation.nrows()
    }

    pub fn apply(&self, z: &[Complex64]) -> Result<Point> {
        if z.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: z.len() });
        }
        Ok(Point::from_vec_unchecked(rotate(&self.rotation, z, self.eta)))
    }
}

/// `η·(A z)`.
pub fn apply_frame(frame: &Frame, z: &[Complex64]) -> Result<Point> {
    frame.apply(z)
}

pub(crate) fn rotate(a: &DMatrix<f64>, z: &[Complex64], eta: Complex64) -> Vec<Complex64> {
    (0..a.nrows())
        .map(|i| {
            let s: Complex64 = (0..a.ncols()).map(|j| z[j] * a[(i, j)]).sum();
            s * eta
        })
        .collect()
}

pub(crate) fn is_special_orthogonal(a: &DMatrix<f64>, tol: f64) -> bool {
    let n = a.nrows();
    let gram = a.transpose() * a;
    let ortho = (0..n).all(|i| {
        (0..n).all(|j| {
            let target = if i == j { 1.0 } else { 0.0 };
            (gram[(i, j)] - target).abs() <= tol
        })
    });
    ortho && (a.clone().determinant() - 1.0).abs() <= tol
}

/// The phase `η` with `η²⟨z,z̄⟩ = |⟨z,z̄⟩|` and argument in `[0, π)`; `1` when
/// `⟨z,z̄⟩` vanishes relative to `‖z‖²`.
pub fn normalizing_phase(z: &[Complex64]) -> Complex64 {
    let q = symmetric_square(z);
    if q.norm() <= 1e-14 * norm_sqr(z) || q.norm() == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut theta = -0.5 * q.arg();
    if theta < 0.0 {
        theta += core::f64::consts::PI;
    }
    Complex64::from_polar(1.0, theta)
}

/// The frame taking `z` to `(a(z), i·b(z), 0, …, 0)`.
pub fn normal_frame(z: &[Complex64]) -> Result<Frame> {
    let n = z.len();
    if n < 2 {
        return Err(Error::Dimension { expected: 2, got: n });
    }
    if z.iter().all(|c| c.norm() == 0.0) {
        return Ok(Frame::identity(n));
    }
    let eta = normalizing_phase(z);
    let u: Vec<f64> = z.iter().map(|c| (c * eta).re).collect();
    let v: Vec<f64> = z.iter().map(|c| (c * eta).im).collect();

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    let u_norm = norm(&u);
    rows.push(u.iter().map(|x| x / u_norm).collect());
    let v_perp = orthogonalize(&v, &rows);
    let v_perp_norm = norm(&v_perp);
    if v_perp_norm > 1e-14 * u_norm {
        rows.push(v_perp.iter().map(|x| x / v_perp_norm).collect());
    }
    complete_basis(&mut rows, n);

    let mut a = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    if a.clone().determinant() < 0.0 {
        a.row_mut(n - 1).neg_mut();
    }
    Ok(Frame { eta, rotation: a })
}

/// Output of [`partial_normal_frame`].
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFrame {
    /// Block rotation `diag(Id_k, A')` with `η = 1`.
    pub frame: Frame,
    /// The unit factor in `A z = (z_1, …, z_k, η a, η b i, 0, …, 0)`.
    pub eta: Complex64,
    pub a: f64,
    /// `b(z')`, carrying a negative sign only in the two-dimensional tail case
    /// described in the module docs.
    pub b: f64,
}

/// A rotation fixing the first `k` coordinates that brings the tail
/// `z' = (z_{k+1}, …, z_n)` to `(η a(z'), η b(z') i, 0, …, 0)`.
pub fn partial_normal_frame(z: &[Complex64], k: usize) -> Result<PartialFrame> {
    let n = z.len();
    if n < 3 {
        return Err(Error::Dimension { expected: 3, got: n });
    }
    if k == 0 || k > n - 2 {
        return Err(Error::InvalidArgument("partial frame needs 1 ≤ k ≤ n − 2"));
    }
    let tail = &z[k..];
    let tail_frame = normal_frame(tail)?;
    let m = moduli(tail);
    let image = tail_frame.apply(tail)?;
    let b = if image[1].im < 0.0 { -m.b } else { m.b };

    let mut a = DMatrix::identity(n, n);
    a.view_mut((k, k), (n - k, n - k)).copy_from(&tail_frame.rotation);
    Ok(PartialFrame {
        frame: Frame { eta: Complex64::new(1.0, 0.0), rotation: a },
        eta: tail_frame.eta.conj(),
        a: m.a,
        b,
    })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn orthogonalize(v: &[f64], rows: &[Vec<f64>]) -> Vec<f64> {
    let mut out = v.to_vec();
    // two passes keep the result orthogonal to working precision
    for _ in 0..2 {
        for r in rows {
            let d: f64 = out.iter().zip(r).map(|(a, b)| a * b).sum();
            out.iter_mut().zip(r).for_each(|(o, ri)| *o -= d * ri);
        }
    }
    out
}

fn complete_basis(rows: &mut Vec<Vec<f64>>, n: usize) {
    for i in 0..n {
        if rows.len() == n {
            break;
        }
        let mut e = alloc::vec![0.0; n];
        e[i] = 1.0;
        let w = orthogonalize(&e, rows);
        let w_norm = norm(&w);
        if w_norm > SEED_DISCARD {
            rows.push(w.iter().map(|x| x / w_norm).collect());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::gauge_p;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    }

    #[test]
    fn apply_frame_examples() {
        let z = [c(0.3, 0.0), c(0.0, 0.4)];
        assert!(apply_frame(&Frame::identity(2), &z).unwrap().approx_eq(
            &Point::new(z.to_vec()).unwrap(),
            0.0
        ));
        let f = Frame::new(c(0.0, 1.0), DMatrix::identity(2, 2)).unwrap();
        let out = apply_frame(&f, &[c(0.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert!(out.approx_eq(&Point::from_real(&[0.0, -2.0]).unwrap(), 1e-15));
        let rot = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let f = Frame::new(c(1.0, 0.0), rot).unwrap();
        let out = apply_frame(&f, &[c(0.0, 0.0), c(-2.0, 0.0)]).unwrap();
        assert!(out.approx_eq(&Point::from_real(&[2.0, 0.0]).unwrap(), 1e-15));
        assert!(apply_frame(&f, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn frame_validation() {
        let reflection = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(Frame::new(c(1.0, 0.0), reflection).is_err());
        assert!(Frame::new(c(2.0, 0.0), DMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn normal_frame_examples() {
        // (0, 2i): η = i, output (2, 0)
        let f = normal_frame(&[c(0.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert_abs_diff_eq!((f.eta - c(0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);
        let out = f.apply(&[c(0.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert!(out.approx_eq(&Point::from_real(&[2.0, 0.0]).unwrap(), 1e-12));

        let z = [c(0.7, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let f = normal_frame(&z).unwrap();
        assert_eq!(f.rotation, DMatrix::identity(3, 3));
        assert_eq!(f.eta, c(1.0, 0.0));

        let z = [c(0.4, 0.0), c(0.0, 0.4)];
        let out = normal_frame(&z).unwrap().apply(&z).unwrap();
        assert_abs_diff_eq!(out[0].re, 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(out[1].im.abs(), 0.4, epsilon = 1e-12);
        assert!(normal_frame(&[c(1.0, 0.0)]).is_err());
        assert_eq!(normal_frame(&[c(0.0, 0.0); 3]).unwrap(), Frame::identity(3));
    }

    #[test]
    fn normal_frame_reaches_normal_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for trial in 0..10_000 {
            let n = 2 + trial % 5;
            let z = random_vec(&mut rng, n);
            let f = normal_frame(&z).unwrap();
            assert!(is_special_orthogonal(&f.rotation, 1e-12));
            assert_abs_diff_eq!(f.eta.norm(), 1.0, epsilon = 1e-14);
            let out = f.apply(&z).unwrap();
            let m = moduli(&z);
            let scale = 1.0 + m.a;
            assert!((out[0] - c(m.a, 0.0)).norm() < 1e-10 * scale, "{out:?}");
            assert!(out[1].re.abs() < 1e-10 * scale);
            if n > 2 {
                assert!(out[1].im >= -1e-10 && (out[1].im - m.b).abs() < 1e-10 * scale);
            } else {
                assert!((out[1].im.abs() - m.b).abs() < 1e-10 * scale);
            }
            for c in &out.coords()[2..] {
                assert!(c.norm() < 1e-10 * scale);
            }
            // invariants
            assert!((gauge_p(&out) - gauge_p(&z)).abs() < 1e-10 * scale);
            assert!((norm_sqr(&out) - norm_sqr(&z)).abs() < 1e-10 * scale * scale);
            assert!(
                (symmetric_square(&out).norm() - symmetric_square(&z).norm()).abs()
                    < 1e-10 * scale * scale
            );
            // renormalizing a normal form changes nothing
            let again = normal_frame(&out).unwrap().apply(&out).unwrap();
            assert!(again.approx_eq(&out, 1e-10));
        }
    }

    #[test]
    fn eta_argument_in_half_open_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let z = random_vec(&mut rng, 3);
            let eta = normalizing_phase(&z);
            let arg = eta.arg();
            assert!((0.0..core::f64::consts::PI).contains(&arg) || arg.abs() < 1e-15);
            let q = symmetric_square(&z);
            assert!((eta * eta * q - c(q.norm(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_frame_examples() {
        let z = [c(0.5, 0.0), c(0.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)];
        let pf = partial_normal_frame(&z, 1).unwrap();
        let out = pf.frame.apply(&z).unwrap();
        assert_abs_diff_eq!(pf.a, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pf.b, 0.0, epsilon = 1e-12);
        let expect = [c(0.5, 0.0), pf.eta * 2.0, c(0.0, 0.0), c(0.0, 0.0)];
        assert!(out.approx_eq(&Point::new(expect.to_vec()).unwrap(), 1e-12));

        let z = [c(0.3, -0.2), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let out = partial_normal_frame(&z, 1).unwrap().frame.apply(&z).unwrap();
        assert!(out.approx_eq(&Point::new(z.to_vec()).unwrap(), 1e-15));

        let z = [c(0.3, -0.2), c(0.1, 0.4), c(0.6, 0.0), c(0.0, 0.0)];
        let pf = partial_normal_frame(&z, 2).unwrap();
        assert_eq!(pf.eta, c(1.0, 0.0));
        assert!(pf.frame.apply(&z).unwrap().approx_eq(&Point::new(z.to_vec()).unwrap(), 1e-15));

        assert!(partial_normal_frame(&z, 3).is_err());
        assert!(partial_normal_frame(&z, 0).is_err());
        assert!(partial_normal_frame(&z[..2], 1).is_err());
    }

    #[test]
    fn partial_frame_fixes_leading_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for trial in 0..2000 {
            let n = 3 + trial % 4;
            let k = 1 + trial % (n - 2);
            let z = random_vec(&mut rng, n);
            let pf = partial_normal_frame(&z, k).unwrap();
            assert!(is_special_orthogonal(&pf.frame.rotation, 1e-12));
            let out = pf.frame.apply(&z).unwrap();
            for i in 0..k {
                assert!((out[i] - z[i]).norm() < 1e-12);
            }
            assert!((out[k] - pf.eta * pf.a).norm() < 1e-10);
            assert!((out[k + 1] - pf.eta * c(0.0, pf.b)).norm() < 1e-10);
            for c in &out.coords()[k + 2..] {
                assert!(c.norm() < 1e-10);
            }
            let w = random_vec(&mut rng, n);
            let wout = pf.frame.apply(&w).unwrap();
            for i in 0..k {
                assert!((wout[i] - w[i]).norm() < 1e-12);
            }
        }
    }
}
