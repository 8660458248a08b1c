//! The subcommands. Each one writes its report to `out` and returns the exit
//! status; errors bubble up to [`crate::run`].

use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use lempert_core::automorphisms::{normalize_pair, normalize_point_lhat, normalize_tetra, LhatAutomorphism, TetraMobius};
use lempert_core::domain::{norm_sqr, symmetric_square, tetra_gauge};
use lempert_core::metrics::{
    atanh_clamped, carath_origin_lhat, carath_origin_lieball, carath_origin_tetra, kobayashi_origin_lhat,
    kobayashi_origin_lieball, kobayashi_origin_tetra,
};
use lempert_core::numerics::{
    distance_report, kobayashi_upper_origin, sample_point, GapSummary, PairOutcome,
};
use lempert_core::{Complex64, DomainKind, Point};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{exit, CliError, Result};
use crate::input::{parse_point, parse_point_or_origin, point_to_json, DomainArg};
use crate::report::{max_closed_form_deviation, write_report, Row};
use crate::PairMode;

/// Share of failing rows above which `verify-lempert` exits with
/// [`exit::VERIFY_FAILED`].
pub const MAX_FAILURE_RATE: f64 = 0.1;

pub fn member(domain: DomainArg, point: &str, out: &mut dyn Write) -> Result<i32> {
    let z = parse_point(point)?;
    let kind = domain.kind(z.dim())?;
    let inside = kind.contains(&z);
    writeln!(out, "domain: {kind}")?;
    writeln!(out, "verdict: {}", if inside { "member" } else { "non-member" })?;
    match kind {
        DomainKind::LHat(_) | DomainKind::LieBall(_) => {
            let (s, t) = if let DomainKind::LHat(_) = kind {
                (z[0].norm() + norm_sqr(z.tail()), (z[0] + symmetric_square(z.tail())).norm())
            } else {
                (norm_sqr(&z), symmetric_square(&z).norm())
            };
            writeln!(out, "s = {s} (needs s < 1)")?;
            writeln!(out, "2s = {} (needs 2s < 1 + t^2 = {})", 2.0 * s, 1.0 + t * t)?;
            writeln!(out, "gauge = {}", kind.gauge(&z))?;
        }
        DomainKind::Tetrablock => {
            let lhs = z[0].norm_sqr() + z[1].norm_sqr() + 2.0 * (z[0] * z[1] - z[2]).norm();
            let x3 = z[2].norm();
            writeln!(out, "|x1|^2 + |x2|^2 + 2|x1 x2 - x3| = {lhs} (needs < 1 + |x3|^2 = {})", 1.0 + x3 * x3)?;
            writeln!(out, "|x3| = {x3} (needs < 1)")?;
            writeln!(out, "gauge = {}", tetra_gauge(&z))?;
        }
        DomainKind::UnitDisc => writeln!(out, "|z| = {} (needs < 1)", z[0].norm())?,
    }
    Ok(if inside { exit::OK } else { exit::NON_MEMBER })
}

/// `c(0, w)` from the closed forms; `None` where there is none.
fn closed_form_from_origin(kind: DomainKind, w: &Point) -> Result<Option<f64>> {
    Ok(Some(match kind {
        DomainKind::LHat(_) => carath_origin_lhat(w)?,
        DomainKind::Tetrablock => carath_origin_tetra(w)?,
        DomainKind::LieBall(_) => carath_origin_lieball(w)?,
        DomainKind::UnitDisc => atanh_clamped(w[0].norm()),
    }))
}

/// Two points where either may be `0`; the dimension comes from whichever
/// is spelled out.
fn parse_two(z: &str, w: &str) -> Result<(Point, Point)> {
    let dim = [z, w].iter().find(|s| s.trim() != "0").map(|s| parse_point(s)).transpose()?.map(|p| p.dim());
    let dim = dim.ok_or_else(|| CliError::Usage("at least one point must be given in full".into()))?;
    Ok((parse_point_or_origin(z, Some(dim))?, parse_point_or_origin(w, Some(dim))?))
}

fn parse_pair(domain: DomainArg, z: &str, w: &str) -> Result<(DomainKind, Point, Point)> {
    let (z, w) = parse_two(z, w)?;
    let kind = domain.kind(z.dim())?;
    kind.require(&z)?;
    kind.require(&w)?;
    Ok((kind, z, w))
}

pub fn dist(domain: DomainArg, z: &str, w: &str, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let (kind, z, w) = parse_pair(domain, z, w)?;
    let report = distance_report(kind, &z, &w, &cfg.params())?;
    let exact = if z.is_zero() {
        closed_form_from_origin(kind, &w)?
    } else if w.is_zero() {
        closed_form_from_origin(kind, &z)?
    } else {
        None
    };
    writeln!(out, "domain: {kind}")?;
    writeln!(out, "c_lower: {}", report.c_lower)?;
    writeln!(out, "l_upper: {}", report.l_upper)?;
    writeln!(out, "gap: {}", report.gap)?;
    writeln!(out, "sigma: {}", report.sigma)?;
    if let Some(exact) = exact {
        let dev = (report.c_lower - exact).abs().max((report.l_upper - exact).abs());
        writeln!(out, "exact: {exact}")?;
        writeln!(out, "deviation: {dev}")?;
    }
    Ok(exit::OK)
}

pub fn kappa(domain: DomainArg, x: &str, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let x = parse_point(x)?;
    let kind = domain.kind(x.dim())?;
    let upper = kobayashi_upper_origin(kind, &x, &cfg.params())?;
    let exact = match kind {
        DomainKind::LHat(1) | DomainKind::UnitDisc => x[0].norm(),
        DomainKind::LHat(_) => kobayashi_origin_lhat(&x)?,
        DomainKind::Tetrablock => kobayashi_origin_tetra(&x)?,
        DomainKind::LieBall(_) => kobayashi_origin_lieball(&x),
    };
    writeln!(out, "domain: {kind}")?;
    writeln!(out, "kappa_upper: {}", upper.value)?;
    writeln!(out, "exact: {exact}")?;
    writeln!(out, "deviation: {}", (upper.value - exact).abs())?;
    Ok(exit::OK)
}

fn complex_json(c: Complex64) -> Value {
    json!([c.re, c.im])
}

pub fn lhat_map_json(map: &LhatAutomorphism) -> Value {
    let m = map.group_element().matrix();
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect();
    json!({ "kind": "lhat_automorphism", "n": map.n(), "group_element": rows })
}

pub fn tetra_map_json(map: &TetraMobius) -> Value {
    json!({
        "kind": "tetra_mobius",
        "beta1": complex_json(map.beta1),
        "beta2": complex_json(map.beta2),
        "eta1": complex_json(map.eta1),
        "eta2": complex_json(map.eta2),
        "flip": map.flip,
    })
}

pub fn normalize(domain: DomainArg, z: &str, w: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    let (z, w) = match w {
        Some(w) => parse_two(z, w).map(|(z, w)| (z, Some(w)))?,
        None => (parse_point(z)?, None),
    };
    let kind = domain.kind(z.dim())?;
    match kind {
        DomainKind::LHat(n) if n >= 3 => match &w {
            None => {
                let pn = normalize_point_lhat(&z)?;
                let image = pn.map.apply(&z)?;
                writeln!(out, "normal_form: {}", point_to_json(&image))?;
                writeln!(out, "rho: {}", pn.rho)?;
                writeln!(out, "map: {}", lhat_map_json(&pn.map))?;
            }
            Some(w) => {
                let pn = normalize_pair(&z, w)?;
                writeln!(out, "normal_form: {}", point_to_json(&pn.z_star))?;
                writeln!(out, "second: {}", point_to_json(&pn.w_star))?;
                writeln!(out, "rho: {}", pn.rho)?;
                writeln!(out, "map: {}", lhat_map_json(&pn.map))?;
            }
        },
        DomainKind::Tetrablock => {
            let tn = normalize_tetra(&z)?;
            writeln!(out, "normal_form: {}", point_to_json(&tn.map.apply(&z)?))?;
            if let Some(w) = &w {
                kind.require(w)?;
                writeln!(out, "second: {}", point_to_json(&tn.map.apply(w)?))?;
            }
            writeln!(out, "r: {}", tn.r)?;
            writeln!(out, "residual: {}", tn.residual)?;
            writeln!(out, "map: {}", tetra_map_json(&tn.map))?;
        }
        other => return Err(CliError::Usage(format!("normalize supports 𝕃_n with n ≥ 3 and 𝔼, not {other}"))),
    }
    Ok(exit::OK)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub pairs: PairMode,
    pub jobs: usize,
    pub timings: bool,
}

/// The pairs a run uses, drawn from a stream fixed by the seed.
pub fn verify_pairs(cfg: &RunConfig, mode: PairMode) -> Vec<(Point, Point)> {
    let kind = DomainKind::LHat(cfg.n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.samples)
        .map(|_| match mode {
            PairMode::Random => (sample_point(kind, &mut rng), sample_point(kind, &mut rng)),
            PairMode::Origin => (Point::zeros(cfg.n), sample_point(kind, &mut rng)),
            PairMode::Identical => {
                let z = sample_point(kind, &mut rng);
                (z.clone(), z)
            }
        })
        .collect()
}

/// Runs the pairs on `jobs` threads; rows come back in pair order.
pub fn verify_rows(cfg: &RunConfig, opts: &VerifyOptions) -> Result<(GapSummary, Vec<Row>)> {
    let kind = DomainKind::LHat(cfg.n);
    let params = cfg.params();
    let pairs = verify_pairs(cfg, opts.pairs);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build()?;
    let results: Vec<(PairOutcome, f64)> = pool.install(|| {
        pairs
            .into_par_iter()
            .enumerate()
            .map(|(index, (z, w))| {
                let start = Instant::now();
                let result = distance_report(kind, &z, &w, &params);
                let seconds = start.elapsed().as_secs_f64();
                (PairOutcome { index, z, w, result }, seconds)
            })
            .collect()
    });
    let outcomes: Vec<PairOutcome> = results.iter().map(|(o, _)| o.clone()).collect();
    let summary = GapSummary::from_rows(&outcomes);
    let mut rows = Vec::with_capacity(results.len());
    for (outcome, seconds) in &results {
        let closed = match opts.pairs {
            PairMode::Origin => Some(carath_origin_lhat(&outcome.w)?),
            _ => None,
        };
        rows.push(Row::new(outcome, if opts.timings { *seconds } else { 0.0 }, cfg.tolerance, closed));
    }
    Ok((summary, rows))
}

pub fn verify_lempert(cfg: &RunConfig, opts: &VerifyOptions, out: &mut dyn Write) -> Result<i32> {
    let (summary, rows) = verify_rows(cfg, opts)?;
    if let Some(path) = &cfg.output {
        let file = BufWriter::new(File::create(path)?);
        write_report(file, cfg.format, cfg, &summary, &rows)?;
    }
    let failing = rows.iter().filter(|r| !r.passed).count();
    writeln!(
        out,
        "pairs={} failures={} unsound={} failing_rows={} max_gap={} median_gap={} tolerance={}",
        summary.pairs, summary.failures, summary.unsound, failing, summary.max_gap, summary.median_gap, cfg.tolerance
    )?;
    if let Some(dev) = max_closed_form_deviation(&rows) {
        writeln!(out, "max |bound - closed form| = {dev}")?;
    }
    let verdict = if failing == 0 { "PASS" } else { "FAIL" };
    writeln!(out, "{verdict}: max gap {} against tolerance {} over {} pairs", summary.max_gap, cfg.tolerance, summary.pairs)?;
    let rate = failing as f64 / rows.len() as f64;
    Ok(if rate > MAX_FAILURE_RATE { exit::VERIFY_FAILED } else { exit::OK })
}
