#![doc = include_str!("../../../README.md")]

pub mod chisq;
pub mod cli;
pub mod ds;
pub mod error;
pub mod geometry;
pub mod ks;
pub mod report;
pub mod seed;
pub mod sim;
pub mod uniformity;

pub use ds::{merge_categories, merge_weights, CategoryCounts, DsPolytope, DsWeights, Partition, Weakening};
pub use error::{Error, Result};
pub use geometry::{contains, lower_distance, project, upper_distance, DistancePair, ProbVector};
pub use uniformity::{
    bin_samples, chi_square_uniformity_test, ds_uniformity_test, ContingencyTable, Method, SamplePoint,
    TestReport,
};

// The guide under `book/` is compiled into doc-tests so its snippets cannot
// drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dirichlet-ds.md")]
    mod dirichlet_ds {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/uniformity-test.md")]
    mod uniformity_test {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
