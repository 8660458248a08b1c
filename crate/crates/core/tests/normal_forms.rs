mod common;

use common::*;
use lempert_core::automorphisms::{
    lie_ball_to_origin, normalize_pair, normalize_point_lhat, LhatAutomorphism,
};
use lempert_core::domain::{in_lhat, moduli};

fn random_automorphism(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> LhatAutomorphism {
    let g = lie_ball_to_origin(&lie_point(rng, n - 1)).unwrap();
    let h = lie_ball_to_origin(&lie_point(rng, n - 1)).unwrap();
    LhatAutomorphism::descend(&g * &h.inverse())
}

#[test]
fn point_normal_form_examples() {
    let z = [c(0.4, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    let nf = normalize_point_lhat(&z).unwrap();
    assert!((nf.rho - 0.4).abs() < 1e-12);
    assert!(max_diff(&nf.map.apply(&z).unwrap(), &z) < 1e-12);

    let z = [c(0.0, 0.0), c(0.3, 0.1), c(-0.2, 0.2), c(0.1, 0.0)];
    let nf = normalize_point_lhat(&z).unwrap();
    assert_eq!(nf.rho, 0.0);
    assert!(nf.map.apply(&z).unwrap().is_zero() || nf.map.apply(&z).unwrap().max_abs_diff(&lempert_core::Point::zeros(4)) < 1e-8);

    assert!(normalize_point_lhat(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).is_err());
    assert!(normalize_point_lhat(&[c(0.1, 0.0), c(0.0, 0.0)]).is_err());
}

#[test]
fn random_points_reach_the_normal_form() {
    let mut rng = rng(41);
    for n in 3..7 {
        for _ in 0..200 {
            let z = lhat_point(&mut rng, n);
            let nf = normalize_point_lhat(&z).unwrap();
            let image = nf.map.apply(&z).unwrap();
            let mut target = vec![c(0.0, 0.0); n];
            target[0] = c(nf.rho, 0.0);
            assert!(max_diff(&image, &target) < 1e-8);
            for _ in 0..3 {
                let w = lhat_point(&mut rng, n);
                assert!(in_lhat(&nf.map.apply(&w).unwrap()));
                assert!(in_lhat(&nf.map.inverse().apply(&w).unwrap()));
            }
        }
    }
}

#[test]
fn normal_form_radius_is_an_invariant() {
    let mut rng = rng(42);
    for _ in 0..100 {
        let z = lhat_point(&mut rng, 4);
        let h = random_automorphism(&mut rng, 4);
        let a = normalize_point_lhat(&z).unwrap().rho;
        let b = normalize_point_lhat(&h.apply(&z).unwrap()).unwrap().rho;
        assert!((a - b).abs() < 1e-7, "{a} vs {b}");
    }
}

#[test]
fn pair_normal_form_examples() {
    let z = [c(0.2, 0.1), c(0.1, -0.3), c(0.2, 0.2), c(0.0, 0.1)];
    let pn = normalize_pair(&z, &z).unwrap();
    assert!(pn.z_star.max_abs_diff(&pn.w_star) < 1e-8);
    assert!((pn.z_star[0].re - pn.rho).abs() < 1e-15);

    let zero = [c(0.0, 0.0); 4];
    let w = [c(0.1, 0.2), c(0.3, 0.1), c(-0.1, 0.2), c(0.2, -0.1)];
    let pn = normalize_pair(&zero, &w).unwrap();
    assert!(pn.z_star.is_zero());
    assert!((pn.w_star[0] - w[0]).norm() < 1e-12);
    let m = moduli(&w[1..]);
    assert!((pn.w_star[1].norm() - m.a).abs() < 1e-10);
    assert!((pn.w_star[2].norm() - m.b).abs() < 1e-10);
    assert!(pn.w_star[3].norm() < 1e-12);
}

#[test]
fn random_pairs_reduce_to_three_dimensions() {
    let mut rng = rng(43);
    for _ in 0..200 {
        let z = lhat_point(&mut rng, 5);
        let w = lhat_point(&mut rng, 5);
        let pn = normalize_pair(&z, &w).unwrap();
        assert!(max_diff(&pn.map.apply(&z).unwrap(), &pn.z_star) < 1e-8);
        let w_image = pn.map.apply(&w).unwrap();
        assert!(max_diff(&w_image, &pn.w_star) < 1e-8);
        assert!(w_image[3].norm() < 1e-8 && w_image[4].norm() < 1e-8);
        assert!(in_lhat(&pn.w_star));
    }
}
