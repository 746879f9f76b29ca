//! Dirichlet Dempster-Shafer inference for multinomial proportions.
//!
//! Given counts `z = (z_1, …, z_d)` the random focal element is
//!
//! ```text
//! F(W) = { p : p_i >= W_i for all i, sum(p) = 1 },   (W_0, W_1, …, W_d) ~ Dirichlet(1 + r, z_1, …, z_d)
//! ```
//!
//! where `r` is the number of trials known to be missing (weakening). The set
//! is always a simplex: its vertices are `W + W_0 e_i`.
//!
//! Components with a zero concentration are the point mass at zero, so empty
//! categories get a lower bound of exactly `0.0` and can be added or removed
//! without changing the other coordinates.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};

/// Tolerance on `w0 + sum(w) == 1` for a weight vector.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Observed multinomial counts over `d >= 2` categories.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CategoryCounts {
    counts: Vec<u64>,
}

impl CategoryCounts {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::Degenerate(format!(
                "need at least 2 categories, got {}",
                counts.len()
            )));
        }
        Ok(Self { counts })
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    /// Number of categories `d`.
    pub fn categories(&self) -> usize {
        self.counts.len()
    }

    /// Total number of observations `n`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.counts
    }
}

/// Number of multinoulli trials that happened but were not reported.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weakening(pub u64);

impl Weakening {
    pub const NONE: Weakening = Weakening(0);

    /// Concentration of the slack component, `1 + r`.
    pub fn slack_shape(self) -> f64 {
        1.0 + self.0 as f64
    }
}

/// One draw `(W_0, W_1, …, W_d)` defining a DS polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct DsWeights {
    w0: f64,
    w: Vec<f64>,
}

impl DsWeights {
    /// Builds a weight vector, checking non-negativity and normalization.
    pub fn new(w0: f64, w: Vec<f64>) -> Result<Self> {
        if w.len() < 2 {
            return Err(Error::Degenerate(format!(
                "need at least 2 lower bounds, got {}",
                w.len()
            )));
        }
        if !(w0.is_finite() && w0 >= 0.0) || w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::OutOfDomain("weights must be finite and non-negative".into()));
        }
        let total = w0 + w.iter().sum::<f64>();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::OutOfDomain(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { w0, w })
    }

    /// Slack mass `W_0` shared out by the vertices.
    pub fn slack(&self) -> f64 {
        self.w0
    }

    /// Lower bounds `W_1, …, W_d`.
    pub fn lower_bounds(&self) -> &[f64] {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }
}

/// The Dirichlet DS sampler for fixed counts and weakening.
///
/// Draws are `Gamma(shape, 1)` variates normalized by their sum, with the
/// slack component drawn first and then one component per category.
#[derive(Debug, Clone)]
pub struct DirichletDs {
    slack: Gamma<f64>,
    // `None` for zero counts: the shape-0 gamma is the point mass at 0.
    components: Vec<Option<Gamma<f64>>>,
}

impl DirichletDs {
    pub fn new(counts: &CategoryCounts, weaken: Weakening) -> Self {
        let slack = Gamma::new(weaken.slack_shape(), 1.0).expect("slack shape is at least 1");
        let components = counts
            .as_slice()
            .iter()
            .map(|&z| (z > 0).then(|| Gamma::new(z as f64, 1.0).expect("positive shape")))
            .collect();
        Self { slack, components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

impl Distribution<DsWeights> for DirichletDs {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DsWeights {
        let g0 = self.slack.sample(rng);
        let mut w: Vec<f64> = self
            .components
            .iter()
            .map(|c| c.as_ref().map_or(0.0, |g| g.sample(rng)))
            .collect();
        let total = g0 + w.iter().sum::<f64>();
        for x in &mut w {
            *x /= total;
        }
        DsWeights { w0: g0 / total, w }
    }
}

/// Draws one weight vector from `Dirichlet(1 + r, z_1, …, z_d)`.
///
/// Use [`DirichletDs`] directly when drawing many times from the same counts.
pub fn sample_ds_weights<R: Rng + ?Sized>(
    counts: &CategoryCounts,
    weaken: Weakening,
    rng: &mut R,
) -> DsWeights {
    DirichletDs::new(counts, weaken).sample(rng)
}

/// The focal element `{p : p_i >= w_i, sum(p) = 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DsPolytope {
    weights: DsWeights,
}

impl DsPolytope {
    pub fn from_weights(weights: DsWeights) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &DsWeights {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    /// Vertex `w + w0 * e_i`.
    ///
    /// # Panics
    ///
    /// If `i >= self.dim()`.
    pub fn vertex(&self, i: usize) -> Vec<f64> {
        let mut v = self.weights.w.clone();
        v[i] += self.weights.w0;
        v
    }

    /// All `d` vertices, in category order.
    pub fn vertices(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.dim()).map(|i| self.vertex(i))
    }
}

impl From<DsWeights> for DsPolytope {
    fn from(weights: DsWeights) -> Self {
        Self::from_weights(weights)
    }
}

/// A partition of the category indices `0..d` into at least two blocks.
///
/// Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    dim: usize,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>, dim: usize) -> Result<Self> {
        if blocks.len() < 2 {
            return Err(Error::InvalidPartition(format!(
                "need at least 2 blocks, got {}",
                blocks.len()
            )));
        }
        let mut seen = vec![false; dim];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &i in block {
                match seen.get_mut(i) {
                    None => {
                        return Err(Error::InvalidPartition(format!(
                            "index {i} out of range for {dim} categories"
                        )))
                    }
                    Some(true) => {
                        return Err(Error::InvalidPartition(format!("index {i} appears twice")))
                    }
                    Some(s) => *s = true,
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {i} is not covered")));
        }
        Ok(Self { blocks, dim })
    }

    /// Every category in its own block.
    pub fn identity(dim: usize) -> Result<Self> {
        Self::new((0..dim).map(|i| vec![i]).collect(), dim)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} categories, input has {got}",
                self.dim
            )));
        }
        Ok(())
    }
}

/// Sums counts within each block, in block order.
pub fn merge_categories(counts: &CategoryCounts, groups: &Partition) -> Result<CategoryCounts> {
    groups.check_dim(counts.categories())?;
    let merged = groups
        .blocks
        .iter()
        .map(|b| b.iter().map(|&i| counts.counts[i]).sum())
        .collect();
    CategoryCounts::new(merged)
}

/// Sums lower bounds within each block; the slack is unchanged.
pub fn merge_weights(weights: &DsWeights, groups: &Partition) -> Result<DsWeights> {
    groups.check_dim(weights.dim())?;
    let w = groups
        .blocks
        .iter()
        .map(|b| b.iter().map(|&i| weights.w[i]).sum())
        .collect();
    Ok(DsWeights { w0: weights.w0, w })
}
