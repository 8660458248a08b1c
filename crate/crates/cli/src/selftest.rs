//! Quick versions of the property suites, one line per suite.

use std::io::Write;
use std::time::Instant;

use lempert_core::automorphisms::{
    apply_mobius, kappa_lift, lie_ball_to_origin, normalize_pair, tetra_from_lhat3, GroupElement, LhatAutomorphism,
};
use lempert_core::domain::{in_lhat, lhat_gauge, Branch};
use lempert_core::metrics::{
    atanh_clamped, carath_origin_lhat_forms, carath_origin_tetra, kobayashi_origin_lhat, kobayashi_origin_lhat3,
};
use lempert_core::numerics::{distance_report, sample_point, Params};
use lempert_core::{Complex64, DomainKind, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{exit, Result};

type Outcome = std::result::Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok { Ok(detail) } else { Err(detail) }
}

fn lhat(rng: &mut ChaCha8Rng, n: usize) -> Point {
    sample_point(DomainKind::LHat(n), rng)
}

fn group_element(rng: &mut ChaCha8Rng, n: usize) -> GroupElement {
    let g = lie_ball_to_origin(&sample_point(DomainKind::LieBall(n), rng)).expect("interior point");
    let h = lie_ball_to_origin(&sample_point(DomainKind::LieBall(n), rng)).expect("interior point");
    &g * &h.inverse()
}

fn closed_forms(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 3..=6 {
        for _ in 0..500 {
            let z = lhat(rng, n);
            let (printed, eta) = carath_origin_lhat_forms(&z).map_err(|e| e.to_string())?;
            worst = worst.max((printed - eta).abs());
            if n == 3 {
                let x = tetra_from_lhat3(&z).map_err(|e| e.to_string())?;
                let tetra = carath_origin_tetra(&x).map_err(|e| e.to_string())?.tanh();
                worst = worst.max((tetra - eta).abs());
            }
        }
    }
    check(worst <= 1e-10, format!("max deviation {worst:e}"))
}

fn membership(rng: &mut ChaCha8Rng) -> Outcome {
    let mut mismatches = 0;
    for _ in 0..10_000 {
        let z: Vec<Complex64> = (0..4).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let g = lhat_gauge(&z);
        // points this close to the boundary are left to the exact tests
        if (g - 1.0).abs() > 1e-9 && in_lhat(&z) != (g < 1.0) {
            mismatches += 1;
        }
    }
    check(mismatches == 0, format!("{mismatches} mismatches in 10000 samples"))
}

fn automorphisms(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        for _ in 0..50 {
            let g = group_element(rng, n);
            let scale = g.matrix().abs().max();
            worst = worst.max(g.isometry_defect() / (scale * scale));
            let z = sample_point(DomainKind::LieBall(n), rng);
            let mut padded = vec![Complex64::new(0.0, 0.0)];
            padded.extend_from_slice(&z);
            let lifted = apply_mobius(&kappa_lift(&g), &padded).map_err(|e| e.to_string())?;
            let direct = apply_mobius(&g, &z).map_err(|e| e.to_string())?;
            worst = worst.max(lifted[0].norm());
            worst = worst.max(lifted.tail().iter().zip(direct.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));

            let phi = LhatAutomorphism::descend(group_element(rng, n));
            let w = lhat(rng, n + 1);
            let plus = phi.apply_branch(&w, Branch::Plus).map_err(|e| e.to_string())?;
            let minus = phi.apply_branch(&w, Branch::Minus).map_err(|e| e.to_string())?;
            worst = worst.max(plus.max_abs_diff(&minus));
        }
    }
    check(worst <= 1e-10, format!("max defect {worst:e}"))
}

fn normalization(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (z, w) = (lhat(rng, 5), lhat(rng, 5));
        let pn = normalize_pair(&z, &w).map_err(|e| e.to_string())?;
        let z_image = pn.map.apply(&z).map_err(|e| e.to_string())?;
        let w_image = pn.map.apply(&w).map_err(|e| e.to_string())?;
        worst = worst.max(z_image[0].im.abs());
        worst = worst.max(z_image.tail().iter().map(|c| c.norm()).fold(0.0, f64::max));
        worst = worst.max(w_image.coords()[3..].iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    check(worst < 1e-8, format!("max residual {worst:e}"))
}

fn kobayashi(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x: Vec<Complex64> = (0..3).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let a = kobayashi_origin_lhat(&x).map_err(|e| e.to_string())?;
        let b = kobayashi_origin_lhat3(&x).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).abs() / a.max(1.0));
    }
    check(worst <= 1e-12, format!("max relative deviation {worst:e}"))
}

fn sandwich(rng: &mut ChaCha8Rng, seed: u64) -> Outcome {
    let params = Params { seed, ..Params::default() };
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let (z, w) = (lhat(rng, 4), lhat(rng, 4));
        let r = distance_report(DomainKind::LHat(4), &z, &w, &params).map_err(|e| e.to_string())?;
        if !r.is_sound() {
            return Err(format!("lower {} above upper {}", r.c_lower, r.l_upper));
        }
        worst = worst.max(r.gap);
    }
    let origin = lhat(rng, 4);
    let r = distance_report(DomainKind::LHat(4), &Point::zeros(4), &origin, &params).map_err(|e| e.to_string())?;
    let (_, eta) = carath_origin_lhat_forms(&origin).map_err(|e| e.to_string())?;
    let dev = (r.c_lower - atanh_clamped(eta)).abs().max((r.l_upper - atanh_clamped(eta)).abs());
    check(worst <= 1e-2 && dev <= 1e-3, format!("max gap {worst:e}, origin deviation {dev:e}"))
}

/// Runs every suite and prints `ok` or `FAIL` with a runtime per line.
/// Exits with [`exit::USAGE`] if any suite fails.
pub fn run(seed: u64, out: &mut dyn Write) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites: [(&str, &dyn Fn(&mut ChaCha8Rng) -> Outcome); 6] = [
        ("closed forms", &closed_forms),
        ("membership", &membership),
        ("automorphisms", &automorphisms),
        ("normalization", &normalization),
        ("kobayashi", &kobayashi),
        ("sandwich", &|rng| sandwich(rng, seed)),
    ];
    let mut failed = 0;
    for (name, suite) in suites {
        let start = Instant::now();
        let outcome = suite(&mut rng);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => writeln!(out, "ok   {name:<14} {detail} ({secs:.2} s)")?,
            Err(detail) => {
                failed += 1;
                writeln!(out, "FAIL {name:<14} {detail} ({secs:.2} s)")?;
            }
        }
    }
    Ok(if failed == 0 { exit::OK } else { exit::USAGE })
}
