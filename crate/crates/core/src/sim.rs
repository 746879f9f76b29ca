//! Monte Carlo study of the uniformity tests under a null and an alternative.
//!
//! Each dataset is `n` independent points with `X` and `Y` drawn from the same
//! Beta marginal: `Beta(1,1)` (uniform) under H0 and `Beta(1,2)` under H1. The
//! dataset is generated once and then binned at every configured resolution.
//!
//! DS draws are independent, so there is no burn-in.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;

use crate::ds::Weakening;
use crate::error::{Error, Result};
use crate::seed::{task_rng, TAG_DATA, TAG_DS};
use crate::uniformity::{bin_samples, chi_square_uniformity_test, ds_uniformity_test, Method, SamplePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    H0,
    H1,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::H0 => "h0",
            Hypothesis::H1 => "h1",
        })
    }
}

impl FromStr for Hypothesis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "h0" => Ok(Hypothesis::H0),
            "h1" => Ok(Hypothesis::H1),
            other => Err(Error::Config(format!("unknown hypothesis '{other}'"))),
        }
    }
}

/// Product of two identical `Beta(a, b)` marginals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisSpec {
    pub tag: Hypothesis,
    pub a: f64,
    pub b: f64,
}

impl HypothesisSpec {
    pub fn new(tag: Hypothesis, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::Config(format!("Beta parameters must be positive, got ({a}, {b})")));
        }
        Ok(Self { tag, a, b })
    }

    /// `Beta(1,1)^2` or `Beta(1,2)^2`.
    pub fn standard(tag: Hypothesis) -> Self {
        match tag {
            Hypothesis::H0 => Self { tag, a: 1.0, b: 1.0 },
            Hypothesis::H1 => Self { tag, a: 1.0, b: 2.0 },
        }
    }

    /// Closed-form inverse CDF, when the marginal has one.
    ///
    /// `Beta(1, b)` has `F(x) = 1 - (1 - x)^b` and `Beta(a, 1)` has `F(x) = x^a`.
    pub fn inverse_cdf(&self, u: f64) -> Option<f64> {
        let (a, b) = (self.a, self.b);
        if a == 1.0 && b == 1.0 {
            Some(u)
        } else if a == 1.0 && b == 2.0 {
            Some(1.0 - (1.0 - u).sqrt())
        } else if a == 1.0 {
            Some(1.0 - (1.0 - u).powf(1.0 / b))
        } else if b == 1.0 {
            Some(u.powf(1.0 / a))
        } else {
            None
        }
    }

    fn sample_coordinate<R: Rng + ?Sized>(&self, beta: Option<&Beta<f64>>, rng: &mut R) -> f64 {
        match beta {
            Some(beta) => beta.sample(rng),
            None => self.inverse_cdf(rng.random::<f64>()).expect("closed-form marginal"),
        }
    }
}

/// Draws `n` independent points from the hypothesis.
pub fn generate_dataset<R: Rng + ?Sized>(hyp: &HypothesisSpec, n: usize, rng: &mut R) -> Vec<SamplePoint> {
    let beta = hyp
        .inverse_cdf(0.5)
        .is_none()
        .then(|| Beta::new(hyp.a, hyp.b).expect("validated Beta parameters"));
    (0..n)
        .map(|_| {
            let x = hyp.sample_coordinate(beta.as_ref(), rng);
            let y = hyp.sample_coordinate(beta.as_ref(), rng);
            SamplePoint { x, y }
        })
        .collect()
}

/// Settings of a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub hypothesis: HypothesisSpec,
    /// Points per dataset.
    pub n: usize,
    pub datasets: usize,
    pub resolutions: Vec<usize>,
    /// Polytopes per DS test.
    pub m: usize,
    pub weaken: Weakening,
    pub master_seed: u64,
    pub methods: Vec<Method>,
    /// Worker threads; `0` lets the pool decide. Does not affect results.
    pub threads: usize,
}

impl SimulationConfig {
    /// 100 datasets of 30 points, resolutions 2, 3 and 6, 200 polytopes.
    pub fn standard(tag: Hypothesis) -> Self {
        Self {
            hypothesis: HypothesisSpec::standard(tag),
            n: 30,
            datasets: 100,
            resolutions: vec![2, 3, 6],
            m: 200,
            weaken: Weakening::NONE,
            master_seed: 0,
            methods: vec![Method::Ds, Method::ChiSquare],
            threads: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        HypothesisSpec::new(self.hypothesis.tag, self.hypothesis.a, self.hypothesis.b)?;
        if self.n == 0 || self.datasets == 0 || self.m == 0 {
            return Err(Error::Config("n, datasets and m must be positive".into()));
        }
        if self.resolutions.is_empty() || self.resolutions.iter().any(|&k| k < 2) {
            return Err(Error::Config("resolutions must be non-empty and at least 2".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        Ok(())
    }
}

/// One p-value pair from one test.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueRecord {
    pub dataset: usize,
    pub method: Method,
    pub k: usize,
    pub p_upper: f64,
    pub p_lower: f64,
}

fn run_dataset(config: &SimulationConfig, dataset: usize) -> Result<Vec<PValueRecord>> {
    let seed = config.master_seed;
    let mut data_rng = task_rng(seed, dataset as u64, TAG_DATA, 0);
    let points = generate_dataset(&config.hypothesis, config.n, &mut data_rng);
    let mut out = Vec::with_capacity(config.resolutions.len() * config.methods.len());
    for &k in &config.resolutions {
        let table = bin_samples(&points, k)
            .map_err(|e| trial_error(dataset, "binning", k, e))?;
        for &method in &config.methods {
            let report = match method {
                Method::Ds => {
                    let mut rng = task_rng(seed, dataset as u64, TAG_DS, k as u64);
                    ds_uniformity_test(&table, config.m, config.weaken, &mut rng)
                }
                Method::ChiSquare => chi_square_uniformity_test(&table),
            }
            .map_err(|e| trial_error(dataset, method.as_str(), k, e))?;
            out.push(PValueRecord {
                dataset,
                method,
                k,
                p_upper: report.p_upper,
                p_lower: report.p_lower,
            });
        }
    }
    Ok(out)
}

fn trial_error(dataset: usize, method: &str, k: usize, e: Error) -> Error {
    Error::Trial { dataset, method: method.to_string(), k, source: Box::new(e) }
}

/// Runs every (dataset, resolution, method) combination.
///
/// Datasets are processed in parallel; the records come back sorted by
/// `(dataset, method, k)` and are identical for any thread count.
pub fn run_experiment(config: &SimulationConfig) -> Result<Vec<PValueRecord>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let per_dataset: Vec<Vec<PValueRecord>> = pool.install(|| {
        (0..config.datasets)
            .into_par_iter()
            .map(|d| run_dataset(config, d))
            .collect::<Result<_>>()
    })?;
    let mut records: Vec<PValueRecord> = per_dataset.into_iter().flatten().collect();
    records.sort_by_key(|r| (r.dataset, r.method, r.k));
    Ok(records)
}

/// Empirical CDF evaluated on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl EcdfCurve {
    /// Value at the grid point equal to `g`, if present.
    pub fn at(&self, g: f64) -> Option<f64> {
        self.grid.iter().position(|&x| (x - g).abs() < 1e-12).map(|i| self.values[i])
    }
}

/// `101` equispaced points `0.00, 0.01, …, 1.00`.
pub fn default_grid() -> Vec<f64> {
    (0..=100).map(|i| f64::from(i) / 100.0).collect()
}

/// Fraction of `values` at or below each grid point.
pub fn ecdf(values: &[f64], grid: &[f64]) -> Result<EcdfCurve> {
    if values.is_empty() {
        return Err(Error::Empty("ECDF needs at least one value".into()));
    }
    if grid.iter().any(|g| g.is_nan()) || grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::OutOfDomain("ECDF grid must be sorted ascending".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let values = grid
        .iter()
        .map(|&g| sorted.partition_point(|&v| v <= g) as f64 / n)
        .collect();
    Ok(EcdfCurve { grid: grid.to_vec(), values })
}

/// Which p-value of a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    Upper,
    Lower,
}

impl Bound {
    pub fn as_str(self) -> &'static str {
        match self {
            Bound::Upper => "upper",
            Bound::Lower => "lower",
        }
    }

    pub fn of(self, r: &PValueRecord) -> f64 {
        match self {
            Bound::Upper => r.p_upper,
            Bound::Lower => r.p_lower,
        }
    }
}

/// The p-values of one bound for one method and resolution.
pub fn select(records: &[PValueRecord], method: Method, k: usize, bound: Bound) -> Vec<f64> {
    records
        .iter()
        .filter(|r| r.method == method && r.k == k)
        .map(|r| bound.of(r))
        .collect()
}

/// Mean of `p_upper - p_lower` over the records of one method and resolution.
pub fn mean_gap(records: &[PValueRecord], method: Method, k: usize) -> Option<f64> {
    let gaps: Vec<f64> = records
        .iter()
        .filter(|r| r.method == method && r.k == k)
        .map(|r| r.p_upper - r.p_lower)
        .collect();
    (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64)
}

/// ECDF curves for every `(method, k, bound)` present in the records, ordered
/// by method, then `k`, then upper before lower.
pub fn ecdf_curves(records: &[PValueRecord], grid: &[f64]) -> Result<Vec<(Method, usize, Bound, EcdfCurve)>> {
    let mut keys: Vec<(Method, usize)> = records.iter().map(|r| (r.method, r.k)).collect();
    keys.sort();
    keys.dedup();
    let mut out = Vec::with_capacity(keys.len() * 2);
    for (method, k) in keys {
        for bound in [Bound::Upper, Bound::Lower] {
            out.push((method, k, bound, ecdf(&select(records, method, k, bound), grid)?));
        }
    }
    Ok(out)
}
