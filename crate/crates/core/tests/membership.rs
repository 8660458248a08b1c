mod common;

use common::*;
use lempert_core::domain::{
    gauge_p, in_lhat, in_lie_ball, in_tetrablock, lambda_lift, lhat_gauge, tetra_gauge, tetra_slice_norm, Branch,
};
use lempert_core::{Complex64, Point};

#[test]
fn lie_ball_inequalities_agree_with_the_gauge() {
    let mut rng = rng(1);
    for n in 1..7 {
        for _ in 0..5_000 {
            let z = cube(&mut rng, n, 1.0);
            assert_eq!(in_lie_ball(&z), gauge_p(&z) < 1.0, "{z:?}");
        }
    }
}

#[test]
fn lhat_is_the_image_of_the_lie_ball() {
    let mut rng = rng(2);
    for n in 2..7 {
        for _ in 0..5_000 {
            let z = Point::new(cube(&mut rng, n, 1.0)).unwrap();
            for branch in Branch::BOTH {
                assert_eq!(in_lhat(&z), in_lie_ball(&lambda_lift(&z, branch)));
            }
            assert!((lhat_gauge(&z) - gauge_p(&lambda_lift(&z, Branch::Plus))).abs() < 1e-12);
        }
    }
}

#[test]
fn tetrablock_gauges_agree_with_membership() {
    let mut rng = rng(3);
    for _ in 0..20_000 {
        let x = cube(&mut rng, 3, 1.0);
        let inside = in_tetrablock(&x).unwrap();
        assert_eq!(inside, tetra_gauge(&x) < 1.0, "{x:?}");
        assert_eq!(inside, tetra_slice_norm(&x) < 1.0, "{x:?}");
    }
}

/// `1 − λ₁x₁ − λ₂x₂ + λ₁λ₂x₃` on a grid of the closed bidisc. A member has
/// no zero there; a zero found on the grid proves non-membership.
#[test]
fn tetrablock_against_its_defining_polynomial() {
    let mut rng = rng(4);
    let grid: Vec<Complex64> = (0..24)
        .flat_map(|k| [0.0, 0.5, 0.9, 1.0].map(move |r| Complex64::from_polar(r, k as f64 * std::f64::consts::TAU / 24.0)))
        .collect();
    let mut refuted = 0;
    for _ in 0..1_000 {
        let x = cube(&mut rng, 3, 1.0);
        let inside = in_tetrablock(&x).unwrap();
        for &l1 in &grid {
            // the zero in λ₂ for fixed λ₁, when there is one
            let den = x[1] - l1 * x[2];
            if den.norm() > 1e-14 {
                let l2 = (c(1.0, 0.0) - l1 * x[0]) / den;
                if l2.norm() <= 1.0 {
                    assert!(!inside, "{x:?} has a zero at ({l1}, {l2})");
                    refuted += 1;
                }
            }
            if inside {
                for &l2 in &grid {
                    let v = c(1.0, 0.0) - l1 * x[0] - l2 * x[1] + l1 * l2 * x[2];
                    assert!(v.norm() > 0.0);
                }
            }
        }
    }
    assert!(refuted > 0);
}

#[test]
fn boundary_points_are_not_members() {
    assert!(!in_lhat(&[c(1.0, 0.0)]));
    assert!(!in_lhat(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]));
    assert!(!in_tetrablock(&[c(0.8, 0.0), c(0.8, 0.0), c(0.0, 0.0)]).unwrap());
    assert!(in_lhat(&[c(0.5, 0.0), c(0.7, 0.0), c(0.0, 0.0), c(0.0, 0.0)]));
}
