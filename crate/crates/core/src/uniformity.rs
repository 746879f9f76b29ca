//! Multi-resolution uniformity test on `[0,1]^2`.
//!
//! A bivariate sample is binned into a `k x k` table, and the cell counts are
//! tested against the uniform multinomial `(1/k^2, …, 1/k^2)`. The DS test
//! draws `m` polytopes and reports
//!
//! ```text
//! p_upper = #{u_i >= r_center} / m      p_lower = #{l_i >= r_center} / m
//! ```
//!
//! where `u_i` and `l_i` are the farthest and nearest distances from the
//! smoothed estimator `p_hat` to polytope `i`, and `r_center` is the distance
//! from `p_hat` to the uniform vector. The chi-square test is the classical
//! Pearson baseline.
//!
//! The counts use `>=` with no `(count + 1) / (m + 1)` correction.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::Distribution;

use crate::chisq::chi_square_sf;
use crate::ds::{CategoryCounts, DirichletDs, DsPolytope, Weakening};
use crate::error::{Error, Result};
use crate::geometry::{self, ProbVector};

/// One observation `(x, y)` in the unit square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub x: f64,
    pub y: f64,
}

impl SamplePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let p = Self { x, y };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        for c in [self.x, self.y] {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::OutOfDomain(format!(
                    "point ({}, {}) is outside [0,1]^2",
                    self.x, self.y
                )));
            }
        }
        Ok(())
    }
}

/// Counts of a `k x k` binning, stored row-major: cell `(i, j)` counts the
/// points with `x` in the `i`-th interval and `y` in the `j`-th.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    k: usize,
    cells: Vec<u64>,
}

impl ContingencyTable {
    pub fn new(k: usize, cells: Vec<u64>) -> Result<Self> {
        check_resolution(k)?;
        if cells.len() != k * k {
            return Err(Error::DimensionMismatch { expected: k * k, got: cells.len() });
        }
        Ok(Self { k, cells })
    }

    pub fn resolution(&self) -> usize {
        self.k
    }

    /// Row-major cell counts.
    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    /// Count of cell `(i, j)`, zero-based.
    pub fn cell(&self, i: usize, j: usize) -> u64 {
        self.cells[i * self.k + j]
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().sum()
    }

    /// The flattened `k^2` cells as multinomial counts.
    pub fn to_counts(&self) -> CategoryCounts {
        CategoryCounts::new(self.cells.clone()).expect("k >= 2 gives at least 4 cells")
    }
}

fn check_resolution(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Degenerate(format!("resolution must be at least 2, got {k}")));
    }
    Ok(())
}

/// Interval index of `c` in `[0,1]` for `k` equal half-open intervals, with
/// the last interval closed at 1.
fn interval(c: f64, k: usize) -> usize {
    ((c * k as f64).floor() as usize).min(k - 1)
}

/// Bins points into a `k x k` table.
pub fn bin_samples(points: &[SamplePoint], k: usize) -> Result<ContingencyTable> {
    check_resolution(k)?;
    let mut cells = vec![0u64; k * k];
    for p in points {
        p.check()?;
        cells[interval(p.x, k) * k + interval(p.y, k)] += 1;
    }
    Ok(ContingencyTable { k, cells })
}

/// Smoothed estimator `(z_i + 1/d) / (n + 1)` for `d` categories.
pub fn smoothed_estimator(counts: &CategoryCounts) -> ProbVector {
    let d = counts.categories() as f64;
    let denom = counts.total() as f64 + 1.0;
    let p = counts.as_slice().iter().map(|&z| (z as f64 + 1.0 / d) / denom).collect();
    ProbVector::new(p).expect("smoothed estimator is a probability vector")
}

/// Smoothed estimator of the `k^2` cell probabilities.
pub fn point_estimator(table: &ContingencyTable) -> ProbVector {
    smoothed_estimator(&table.to_counts())
}

/// Distance from `p_hat` to the uniform vector over `k^2` cells.
pub fn center_distance(p_hat: &ProbVector, k: usize) -> Result<f64> {
    let d = k * k;
    if p_hat.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: p_hat.dim() });
    }
    Ok(p_hat.distance(ProbVector::uniform(d).as_slice()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Ds,
    ChiSquare,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ds => "ds",
            Method::ChiSquare => "chisq",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ds" => Ok(Method::Ds),
            "chisq" | "chi-square" | "chi2" => Ok(Method::ChiSquare),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }
}

/// Outcome of one uniformity test at one resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub method: Method,
    pub k: usize,
    pub n: u64,
    pub r_center: f64,
    pub p_upper: f64,
    pub p_lower: f64,
    /// Number of polytopes drawn; `None` for chi-square.
    pub m: Option<usize>,
}

/// Upper and lower p-values of the DS test on arbitrary counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsPValues {
    pub r_center: f64,
    pub p_upper: f64,
    pub p_lower: f64,
}

/// DS test of `counts` against the uniform multinomial over its categories.
pub fn ds_test_counts<R: Rng + ?Sized>(
    counts: &CategoryCounts,
    m: usize,
    weaken: Weakening,
    rng: &mut R,
) -> Result<DsPValues> {
    if m == 0 {
        return Err(Error::Degenerate("need at least one polytope".into()));
    }
    let p_hat = smoothed_estimator(counts);
    let r_center = p_hat.distance(ProbVector::uniform(counts.categories()).as_slice());
    let sampler = DirichletDs::new(counts, weaken);
    let (mut above_upper, mut above_lower) = (0usize, 0usize);
    for _ in 0..m {
        let poly = DsPolytope::from_weights(sampler.sample(rng));
        let d = geometry::distances(&poly, &p_hat)?;
        above_upper += usize::from(d.upper >= r_center);
        above_lower += usize::from(d.lower >= r_center);
    }
    Ok(DsPValues {
        r_center,
        p_upper: above_upper as f64 / m as f64,
        p_lower: above_lower as f64 / m as f64,
    })
}

/// DS uniformity test of a table using `m` polytopes.
pub fn ds_uniformity_test<R: Rng + ?Sized>(
    table: &ContingencyTable,
    m: usize,
    weaken: Weakening,
    rng: &mut R,
) -> Result<TestReport> {
    let p = ds_test_counts(&table.to_counts(), m, weaken, rng)?;
    Ok(TestReport {
        method: Method::Ds,
        k: table.k,
        n: table.total(),
        r_center: p.r_center,
        p_upper: p.p_upper,
        p_lower: p.p_lower,
        m: Some(m),
    })
}

/// Pearson statistic `sum((z - n/k^2)^2 / (n/k^2))` over all cells.
pub fn pearson_statistic(table: &ContingencyTable) -> Result<f64> {
    let n = table.total();
    if n == 0 {
        return Err(Error::Empty("chi-square test needs at least one observation".into()));
    }
    let expected = n as f64 / table.cells.len() as f64;
    Ok(table
        .cells
        .iter()
        .map(|&z| {
            let diff = z as f64 - expected;
            diff * diff / expected
        })
        .sum())
}

/// Classical chi-square uniformity test with `k^2 - 1` degrees of freedom.
pub fn chi_square_uniformity_test(table: &ContingencyTable) -> Result<TestReport> {
    let stat = pearson_statistic(table)?;
    let df = u32::try_from(table.cells.len() - 1)
        .map_err(|_| Error::OutOfDomain("too many cells".into()))?;
    let p = chi_square_sf(stat, df)?;
    Ok(TestReport {
        method: Method::ChiSquare,
        k: table.k,
        n: table.total(),
        r_center: center_distance(&point_estimator(table), table.k)?,
        p_upper: p,
        p_lower: p,
        m: None,
    })
}
