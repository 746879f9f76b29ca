//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use dirichlet_ds::ds::{sample_ds_weights, CategoryCounts, DsPolytope, DsWeights, Weakening};
use dirichlet_ds::geometry::ProbVector;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

/// Uniform point of the probability simplex (normalized exponentials).
pub fn uniform_simplex<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..d).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// A random polytope: either a DS draw for random counts or generic weights.
pub fn random_polytope<R: Rng>(d: usize, rng: &mut R) -> DsPolytope {
    if rng.random_bool(0.5) {
        let counts: Vec<u64> = (0..d).map(|_| rng.random_range(0..8)).collect();
        let r = rng.random_range(0..4);
        DsPolytope::from_weights(sample_ds_weights(
            &CategoryCounts::new(counts).unwrap(),
            Weakening(r),
            rng,
        ))
    } else {
        let mut w = uniform_simplex(d + 1, rng);
        let w0 = w.pop().unwrap();
        let w0 = (w0 + 1.0 - (w0 + w.iter().sum::<f64>())).max(0.0);
        DsPolytope::from_weights(DsWeights::new(w0, w).unwrap())
    }
}

pub fn random_target<R: Rng>(d: usize, rng: &mut R) -> ProbVector {
    ProbVector::new(uniform_simplex(d, rng)).unwrap()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Nearest distance by enumerating every face of the polytope.
///
/// On the face spanned by the vertices in `S`, the closest point of the
/// affine hull puts `w0 * lambda_i = (t_i - w_i) - c` for `i` in `S` with the
/// constant `c` fixed by `sum(lambda) = 1`. A face whose affine minimizer has
/// all `lambda_i >= 0` yields a feasible candidate, and the optimum is the
/// best candidate over all faces.
pub fn lower_distance_by_faces(poly: &DsPolytope, target: &[f64]) -> f64 {
    let w = poly.weights().lower_bounds();
    let w0 = poly.weights().slack();
    let d = w.len();
    assert!(d <= 16);
    if w0 == 0.0 {
        return dist(w, target);
    }
    let v: Vec<f64> = target.iter().zip(w).map(|(t, w)| t - w).collect();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << d) {
        let members: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
        let c = (members.iter().map(|&i| v[i]).sum::<f64>() - w0) / members.len() as f64;
        if members.iter().any(|&i| v[i] - c < -1e-15) {
            continue;
        }
        let mut y = w.to_vec();
        for &i in &members {
            y[i] += (v[i] - c).max(0.0);
        }
        best = best.min(dist(&y, target));
    }
    best
}

/// Largest distance from `target` to `samples` random convex combinations of
/// the vertices, half uniform on the polytope and half concentrated near a
/// vertex.
pub fn max_interior_distance<R: Rng>(poly: &DsPolytope, target: &[f64], samples: usize, rng: &mut R) -> f64 {
    let d = poly.dim();
    let w = poly.weights().lower_bounds();
    let w0 = poly.weights().slack();
    let mut best = 0.0f64;
    for s in 0..samples {
        let mut lambda = uniform_simplex(d, rng);
        if s % 2 == 1 {
            let j = rng.random_range(0..d);
            let eps = rng.random::<f64>().powi(3);
            for (i, l) in lambda.iter_mut().enumerate() {
                *l = eps * *l + if i == j { 1.0 - eps } else { 0.0 };
            }
        }
        let y: Vec<f64> = w.iter().zip(&lambda).map(|(w, l)| w + w0 * l).collect();
        best = best.max(dist(&y, target));
    }
    best
}

/// `Γ(df / 2)` from factorials, exact up to rounding for integer `df`.
fn gamma_half(df: u32) -> f64 {
    if df.is_multiple_of(2) {
        (1..df / 2).map(f64::from).product()
    } else {
        // Γ(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi)
        let m = (df - 1) / 2;
        let mut g = std::f64::consts::PI.sqrt();
        for i in 0..m {
            g *= f64::from(i) + 0.5;
        }
        g
    }
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Chi-square upper tail by numerical integration of the density.
///
/// Substituting `t = s^2` makes the integrand `2 s^(df-1) exp(-s^2/2)`
/// smooth at zero for every `df >= 1`.
pub fn chi_square_sf_by_quadrature(x: f64, df: u32) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let norm = 2f64.powf(f64::from(df) / 2.0) * gamma_half(df);
    let f = |s: f64| 2.0 * s.powi(df as i32 - 1) * (-s * s / 2.0).exp() / norm;
    let b = x.sqrt();
    let (fa, fm, fb) = (f(0.0), f(b / 2.0), f(b));
    let whole = b / 6.0 * (fa + 4.0 * fm + fb);
    let cdf = adaptive_simpson(&f, 0.0, b, fa, fm, fb, whole, 1e-14, 50);
    1.0 - cdf
}

/// Closed-form mean and variance of every component of
/// `Dirichlet(alpha_0, …, alpha_d)`.
pub fn dirichlet_moments(alpha: &[f64]) -> Vec<(f64, f64)> {
    let total: f64 = alpha.iter().sum();
    alpha
        .iter()
        .map(|a| (a / total, a * (total - a) / (total * total * (total + 1.0))))
        .collect()
}
