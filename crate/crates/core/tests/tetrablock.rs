mod common;

use common::*;
use lempert_core::automorphisms::{
    lhat3_from_tetra, normalize_tetra, tetra_from_lhat3, LhatAutomorphism, TetraMobius,
};
use lempert_core::domain::{in_lhat, in_tetrablock};
use rand::Rng;

#[test]
fn biholomorphism_examples() {
    let r = 0.42;
    let x = tetra_from_lhat3(&[c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert!(max_diff(&x, &[c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)]) < 1e-15);
    let x = tetra_from_lhat3(&[c(0.0, 0.0), c(r / 2.0, 0.0), c(0.0, -r / 2.0)]).unwrap();
    assert!(max_diff(&x, &[c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0)]) < 1e-15);
    assert!(tetra_from_lhat3(&[c(0.0, 0.0); 3]).unwrap().is_zero());
    assert!(tetra_from_lhat3(&[c(0.0, 0.0); 2]).is_err());
}

#[test]
fn biholomorphism_is_membership_exact() {
    let mut rng = rng(31);
    for _ in 0..10_000 {
        let z = cube(&mut rng, 3, 1.0);
        let x = tetra_from_lhat3(&z).unwrap();
        assert_eq!(in_lhat(&z), in_tetrablock(&x).unwrap());
        assert!(max_diff(&lhat3_from_tetra(&x).unwrap(), &z) < 1e-12);

        let x = cube(&mut rng, 3, 1.0);
        let z = lhat3_from_tetra(&x).unwrap();
        assert_eq!(in_lhat(&z), in_tetrablock(&x).unwrap());
        assert!(max_diff(&tetra_from_lhat3(&z).unwrap(), &x) < 1e-12);
    }
}

fn random_mobius(rng: &mut rand_chacha::ChaCha8Rng) -> TetraMobius {
    let disc = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let b = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if b.norm() < 0.9 {
            return b;
        }
    };
    let phase = |rng: &mut rand_chacha::ChaCha8Rng| c(0.0, rng.gen_range(0.0..6.3)).exp();
    TetraMobius::new(disc(rng), disc(rng), phase(rng), phase(rng), rng.gen_bool(0.5)).unwrap()
}

#[test]
fn mobius_examples() {
    let (b1, b2) = (c(0.3, -0.2), c(-0.1, 0.5));
    let m = TetraMobius::new(b1, b2, c(1.0, 0.0), c(1.0, 0.0), false).unwrap();
    assert!(m.apply(&[b1, b2, b1 * b2]).unwrap().max_abs_diff(&lempert_core::Point::zeros(3)) < 1e-15);
    let x = [c(0.2, 0.1), c(-0.3, 0.2), c(0.1, 0.05)];
    assert!(max_diff(&TetraMobius::identity().apply(&x).unwrap(), &x) < 1e-16);
    assert!(TetraMobius::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), false).is_err());

    let mut rng = rng(32);
    let s = TetraMobius::scaling(c(0.6, 0.8), c(0.0, -1.0)).unwrap();
    for _ in 0..1000 {
        let x = cube(&mut rng, 3, 1.0);
        assert_eq!(in_tetrablock(&x).unwrap(), in_tetrablock(&s.apply(&x).unwrap()).unwrap());
    }
}

#[test]
fn mobius_maps_preserve_the_tetrablock_and_invert() {
    let mut rng = rng(33);
    for _ in 0..100 {
        let m = random_mobius(&mut rng);
        let inv = m.inverse();
        for _ in 0..10 {
            let x = tetra_point(&mut rng);
            let y = m.apply(&x).unwrap();
            assert!(in_tetrablock(&y).unwrap());
            assert!(max_diff(&inv.apply(&y).unwrap(), &x) < 1e-9);
        }
    }
}

#[test]
fn mobius_group_element_matches_on_lhat3() {
    let mut rng = rng(34);
    for _ in 0..100 {
        let m = random_mobius(&mut rng);
        let phi = LhatAutomorphism::descend(m.to_group_element());
        for _ in 0..10 {
            let z = lhat_point(&mut rng, 3);
            let via_group = tetra_from_lhat3(&phi.apply(&z).unwrap()).unwrap();
            let direct = m.apply(&tetra_from_lhat3(&z).unwrap()).unwrap();
            assert!(max_diff(&via_group, &direct) < 1e-9);
        }
    }
}

#[test]
fn tetrablock_points_normalize_to_the_third_axis() {
    let mut rng = rng(35);
    for _ in 0..1000 {
        let x = tetra_point(&mut rng);
        let nf = normalize_tetra(&x).unwrap();
        let y = nf.map.apply(&x).unwrap();
        assert!(max_diff(&y, &[c(0.0, 0.0), c(0.0, 0.0), c(nf.r, 0.0)]) < 1e-10);
        assert!((0.0..1.0).contains(&nf.r));
    }
    let nf = normalize_tetra(&[c(0.0, 0.0), c(0.0, 0.0), c(0.3, 0.0)]).unwrap();
    assert!((nf.r - 0.3).abs() < 1e-15);
    assert!(normalize_tetra(&[c(0.8, 0.0), c(0.8, 0.0), c(0.0, 0.0)]).is_err());
}
