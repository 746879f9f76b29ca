//! Distances from a point to a DS polytope.
//!
//! The polytope `{y : y_i >= w_i, sum(y) = 1}` is the probability simplex
//! scaled by `w0` and shifted by `w`, so the nearest point is a simplex
//! projection of `target - w` onto the simplex of mass `w0`. The farthest point
//! is one of the `d` vertices because distance is convex.

use std::cmp::Ordering;

use crate::ds::DsPolytope;
use crate::error::{Error, Result};

/// Slack allowed below zero for a coordinate of a [`ProbVector`].
pub const NEGATIVITY_TOL: f64 = 1e-12;
/// Slack allowed on the sum of a [`ProbVector`].
pub const SUM_TOL: f64 = 1e-9;
/// Slack on lower bounds used by [`contains`].
pub const CONTAINS_TOL: f64 = 1e-10;

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.iter().any(|x| !x.is_finite() || *x < -NEGATIVITY_TOL) {
            return Err(Error::OutOfDomain("probabilities must be finite and non-negative".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::OutOfDomain(format!("probabilities sum to {total}, expected 1")));
        }
        Ok(Self(p))
    }

    /// The uniform vector `(1/d, …, 1/d)`.
    pub fn uniform(d: usize) -> Self {
        Self(vec![1.0 / d as f64; d])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Euclidean distance to another vector of the same length.
    pub fn distance(&self, other: &[f64]) -> f64 {
        euclidean(&self.0, other)
    }
}

impl AsRef<[f64]> for ProbVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Nearest and farthest distance from a target to a polytope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistancePair {
    pub lower: f64,
    pub upper: f64,
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn check_dim(poly: &DsPolytope, target: &ProbVector) -> Result<()> {
    if poly.dim() != target.dim() {
        return Err(Error::DimensionMismatch { expected: poly.dim(), got: target.dim() });
    }
    Ok(())
}

/// Finds `tau` with `sum(max(v_i - tau, 0)) == mass` for `mass >= 0`.
///
/// Sorts `v` once, so the cost is `O(d log d)`. With `mass == 0` this returns
/// `max(v)`. Several `v_i` equal to `tau` need no special handling because the
/// left-hand side is continuous in `tau`.
pub fn simplex_threshold(v: &[f64], mass: f64) -> f64 {
    debug_assert!(mass >= 0.0);
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    if mass == 0.0 {
        return sorted[0];
    }
    let mut cumsum = 0.0;
    let mut tau = sorted[0] - mass;
    for (j, &x) in sorted.iter().enumerate() {
        cumsum += x;
        let t = (cumsum - mass) / (j + 1) as f64;
        if x > t {
            tau = t;
        } else {
            break;
        }
    }
    tau
}

/// Euclidean projection of `target` onto the polytope.
///
/// Returns `target` itself when it already satisfies every lower bound.
pub fn project(target: &ProbVector, poly: &DsPolytope) -> Result<ProbVector> {
    check_dim(poly, target)?;
    let w = poly.weights().lower_bounds();
    let v: Vec<f64> = target.0.iter().zip(w).map(|(t, w)| t - w).collect();
    if v.iter().all(|x| *x >= 0.0) {
        return Ok(target.clone());
    }
    let tau = simplex_threshold(&v, poly.weights().slack());
    Ok(ProbVector(w.iter().zip(&v).map(|(w, v)| w + (v - tau).max(0.0)).collect()))
}

/// Smallest distance from `target` to a point of the polytope.
pub fn lower_distance(poly: &DsPolytope, target: &ProbVector) -> Result<f64> {
    let y = project(target, poly)?;
    Ok(y.distance(target.as_slice()))
}

/// Largest distance from `target` to a point of the polytope.
pub fn upper_distance(poly: &DsPolytope, target: &ProbVector) -> Result<f64> {
    check_dim(poly, target)?;
    let w = poly.weights().lower_bounds();
    // |w + w0 e_i - t|^2 = |w - t|^2 + w0 (2 (w_i - t_i) + w0), so the farthest
    // vertex has the largest w_i - t_i. Its distance is then computed directly.
    let far = w
        .iter()
        .zip(target.as_slice())
        .map(|(w, t)| w - t)
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
        .map(|(i, _)| i)
        .expect("polytope has at least two vertices");
    Ok(euclidean(&poly.vertex(far), target.as_slice()))
}

/// Both distances at once.
pub fn distances(poly: &DsPolytope, target: &ProbVector) -> Result<DistancePair> {
    Ok(DistancePair { lower: lower_distance(poly, target)?, upper: upper_distance(poly, target)? })
}

/// Whether `target` satisfies every lower bound, up to [`CONTAINS_TOL`].
pub fn contains(poly: &DsPolytope, target: &ProbVector) -> Result<bool> {
    check_dim(poly, target)?;
    Ok(target
        .as_slice()
        .iter()
        .zip(poly.weights().lower_bounds())
        .all(|(t, w)| *t >= w - CONTAINS_TOL))
}
