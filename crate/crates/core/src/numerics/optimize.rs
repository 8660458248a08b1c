//! Derivative-free one- and multi-dimensional minimizers.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

/// Stopping rules for [`nelder_mead`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions {
    /// Initial edge length along each axis.
    pub step: f64,
    pub xtol: f64,
    pub ftol: f64,
    pub max_evals: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self { step: 0.1, xtol: 1e-10, ftol: 1e-13, max_evals: 4000 }
    }
}

/// Result of a minimization.
#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Nelder–Mead with the dimension-adaptive coefficients of Gao and Han.
/// Non-finite objective values are treated as `+∞`.
pub fn nelder_mead(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: SimplexOptions) -> Minimum {
    let n = x0.len();
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() { v } else { f64::INFINITY }
    };
    let mut evals = 0;
    if n == 0 {
        let value = eval(x0, &mut evals);
        return Minimum { x: x0.to_vec(), value, evals };
    }
    let nf = n as f64;
    let (alpha, gamma, rho, shrink) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += if v[i].abs() > 1e-12 { opts.step * v[i].abs().max(1.0) } else { opts.step };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = (values[n] - values[0]).abs();
        let size = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if size <= opts.xtol || (spread <= opts.ftol && size <= opts.xtol.sqrt()) {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let along = |t: f64, out: &mut Vec<f64>, worst: &[f64]| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(worst) {
                *o = c + t * (c - w);
            }
        };
        along(alpha, &mut trial, &simplex[n]);
        let fr = eval(&trial, &mut evals);
        if fr < values[0] {
            along(gamma, &mut trial2, &simplex[n]);
            let fe = eval(&trial2, &mut evals);
            if fe < fr {
                simplex[n].copy_from_slice(&trial2);
                values[n] = fe;
            } else {
                simplex[n].copy_from_slice(&trial);
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n].copy_from_slice(&trial);
            values[n] = fr;
            continue;
        }
        let (t, bound) = if fr < values[n] { (rho * alpha, fr) } else { (-rho, values[n]) };
        along(t, &mut trial2, &simplex[n]);
        let fc = eval(&trial2, &mut evals);
        if fc < bound {
            simplex[n].copy_from_slice(&trial2);
            values[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            for (x, b) in simplex[i].iter_mut().zip(&best) {
                *x = b + shrink * (*x - b);
            }
            values[i] = eval(&simplex[i], &mut evals);
        }
    }
    let (i, _) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty simplex");
    Minimum { x: simplex[i].clone(), value: values[i], evals }
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
/// Returns `(argmax, max, evaluations)`.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64, usize) {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evals = 2;
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    if fc > fd { (c, fc, evals) } else { (d, fd, evals) }
}

/// Stopping rules for [`lbfgs`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LbfgsOptions {
    pub memory: usize,
    pub max_iter: usize,
    /// Stop when the gradient's max-norm falls below this.
    pub gtol: f64,
    /// Stop when an iteration improves the value by less than this.
    pub ftol: f64,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self { memory: 8, max_iter: 500, gtol: 1e-10, ftol: 1e-15 }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Limited-memory BFGS with a backtracking Armijo line search. `f` returns
/// the value and writes the gradient into its second argument.
pub fn lbfgs(mut f: impl FnMut(&[f64], &mut [f64]) -> f64, x0: &[f64], opts: LbfgsOptions) -> Minimum {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut g = vec![0.0; n];
    let mut value = f(&x, &mut g);
    let mut evals = 1;
    let mut history: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::with_capacity(opts.memory);
    let mut xn = vec![0.0; n];
    let mut gn = vec![0.0; n];
    for _ in 0..opts.max_iter {
        if !value.is_finite() || g.iter().all(|v| v.abs() <= opts.gtol) {
            break;
        }
        // two-loop recursion
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(history.len());
        for (sk, yk, rho) in history.iter().rev() {
            let a = rho * dot(sk, &d);
            d.iter_mut().zip(yk).for_each(|(di, yi)| *di -= a * yi);
            alphas.push(a);
        }
        if let Some((sk, yk, _)) = history.last() {
            let gamma = dot(sk, yk) / dot(yk, yk);
            d.iter_mut().for_each(|di| *di *= gamma);
        }
        for ((sk, yk, rho), a) in history.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(yk, &d);
            d.iter_mut().zip(sk).for_each(|(di, si)| *di += (a - b) * si);
        }
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            history.clear();
            d = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }
        let mut t = if history.is_empty() { 1.0 / g.iter().map(|v| v.abs()).fold(1.0, f64::max) } else { 1.0 };
        let mut accepted = false;
        for _ in 0..50 {
            xn.iter_mut().zip(&x).zip(&d).for_each(|((o, xi), di)| *o = xi + t * di);
            let vn = f(&xn, &mut gn);
            evals += 1;
            if vn.is_finite() && vn <= value + 1e-4 * t * slope {
                accepted = true;
                let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
                let sy = dot(&s, &y);
                if sy > 1e-300 {
                    if history.len() == opts.memory {
                        history.remove(0);
                    }
                    history.push((s, y, 1.0 / sy));
                }
                let improvement = value - vn;
                x.copy_from_slice(&xn);
                g.copy_from_slice(&gn);
                value = vn;
                if improvement <= opts.ftol * value.abs().max(1.0) {
                    return Minimum { x, value, evals };
                }
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Minimum { x, value, evals }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock_minimum() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = SimplexOptions { max_evals: 20_000, xtol: 1e-12, ftol: 1e-20, ..Default::default() };
        let m = nelder_mead(f, &[-1.2, 1.0], opts);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn quadratic_in_six_dimensions() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.5).powi(2)).sum();
        let opts = SimplexOptions { max_evals: 50_000, xtol: 1e-9, ftol: 1e-20, ..Default::default() };
        let m = nelder_mead(f, &[0.0; 6], opts);
        assert!(m.value < 1e-12, "{m:?}");
    }

    #[test]
    fn golden_section_finds_peak() {
        let (x, v, _) = golden_max(|t| -(t - 0.3).powi(2) + 2.0, -1.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lbfgs_solves_rosenbrock() {
        let f = |x: &[f64], g: &mut [f64]| {
            g[0] = -2.0 * (1.0 - x[0]) - 400.0 * x[0] * (x[1] - x[0] * x[0]);
            g[1] = 200.0 * (x[1] - x[0] * x[0]);
            (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
        };
        let m = lbfgs(f, &[-1.2, 1.0], LbfgsOptions { max_iter: 2000, ftol: 0.0, ..Default::default() });
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{:?}", m.x);
    }
}
