mod common;

use common::*;
use lempert_core::automorphisms::{apply_mobius, kappa_lift, GroupElement, LhatAutomorphism};
use lempert_core::domain::{gauge_p, in_lhat, lambda_lift, Branch};
use lempert_core::Point;

#[test]
fn group_axioms() {
    let mut rng = rng(21);
    for n in 2..6 {
        for _ in 0..50 {
            let g = random_group_element(&mut rng, n);
            let h = random_group_element(&mut rng, n);
            let k = random_group_element(&mut rng, n);
            // gᵀJg − J scales like the square of the entries
            let defect = |x: &GroupElement| x.isometry_defect() / x.matrix().abs().max().powi(2);
            let gh = &g * &h;
            assert!(defect(&g) < 1e-13 && defect(&gh) < 1e-12 && defect(&g.inverse()) < 1e-13);
            let assoc = (&gh * &k).matrix() - (&g * &(&h * &k)).matrix();
            let scale = [&g, &h, &k].iter().map(|x| x.matrix().abs().max()).product::<f64>();
            assert!(assoc.abs().max() < 1e-14 * scale);
            let id = (&g * &g.inverse()).matrix() - GroupElement::identity(n).matrix();
            assert!(id.abs().max() < 1e-12 * g.matrix().abs().max().powi(2));

            let z = lie_point(&mut rng, n);
            let one = apply_mobius(&(&g * &h), &z).unwrap();
            let two = apply_mobius(&g, &apply_mobius(&h, &z).unwrap()).unwrap();
            assert!(one.max_abs_diff(&two) < 1e-9);
            assert!(gauge_p(&one) < 1.0 + 1e-12);
        }
    }
}

#[test]
fn identity_acts_trivially() {
    let mut rng = rng(22);
    for n in 1..6 {
        let id = GroupElement::identity(n);
        for _ in 0..200 {
            let z = lie_point(&mut rng, n);
            assert!(max_diff(&apply_mobius(&id, &z).unwrap(), &z) < 1e-12);
        }
    }
}

#[test]
fn kappa_acts_on_the_slice_of_zero_first_coordinate() {
    let mut rng = rng(23);
    for n in 2..6 {
        for _ in 0..250 {
            let g = random_group_element(&mut rng, n);
            let z = lie_point(&mut rng, n);
            let mut padded = vec![c(0.0, 0.0)];
            padded.extend_from_slice(&z);
            let lifted = apply_mobius(&kappa_lift(&g), &padded).unwrap();
            let mut expected = vec![c(0.0, 0.0)];
            expected.extend_from_slice(apply_mobius(&g, &z).unwrap().coords());
            assert!(max_diff(&lifted, &expected) < 1e-10);
        }
    }
}

#[test]
fn descent_does_not_depend_on_the_branch() {
    let mut rng = rng(24);
    for n in 2..6 {
        for _ in 0..200 {
            let phi = LhatAutomorphism::descend(random_group_element(&mut rng, n - 1));
            let w = Point::new(lhat_point(&mut rng, n)).unwrap();
            let plus = phi.apply_branch(&w, Branch::Plus).unwrap();
            let minus = phi.apply_branch(&w, Branch::Minus).unwrap();
            assert!(plus.max_abs_diff(&minus) < 1e-10);
            assert!(in_lhat(&plus));
            let back = phi.inverse().apply(&plus).unwrap();
            assert!(back.max_abs_diff(&w) < 1e-12 * phi.lifted().matrix().abs().max().max(1e3));
            // the lift of w and its image under the lifted map
            let lifted = apply_mobius(phi.lifted(), &lambda_lift(&w, Branch::Plus)).unwrap();
            assert!((lifted[0] * lifted[0] - plus[0]).norm() < 1e-10);
        }
    }
}

#[test]
fn automorphisms_preserve_lhat() {
    let mut rng = rng(25);
    for _ in 0..500 {
        let phi = LhatAutomorphism::descend(random_group_element(&mut rng, 3));
        let w = lhat_point(&mut rng, 4);
        assert!(in_lhat(&phi.apply(&w).unwrap()));
    }
}
