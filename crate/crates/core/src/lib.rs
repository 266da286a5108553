//! Distribution of a sum of independent, non-identical binomial random
//! variables.
//!
//! The pmf is a second-order saddlepoint approximation renormalized around the
//! exact boundary masses; tail probabilities use the Lugannani–Rice formula
//! with a second-order continuity correction. An exact convolution oracle and
//! a Monte Carlo sampler are included for validation.
//!
//! ```
//! use binsum::BinomialSum;
//!
//! let d = BinomialSum::from_parts(&[2], &[0.5]).unwrap();
//! assert_eq!(d.pmf_at(&[0, 1, 2], false).unwrap(), vec![0.25, 0.5, 0.25]);
//! ```

pub mod cgf;
pub mod datasets;
pub mod density;
pub mod distribution;
pub mod error;
pub mod model;
pub mod normal;
pub mod oracle;
pub mod quantile;
pub mod report;
pub mod solver;
pub mod tail;

pub use cgf::{eval_cgf, CgfDerivatives};
pub use density::{boundary_masses, pmf_table, PmfTable};
pub use distribution::BinomialSum;
pub use error::{Error, Result};
pub use model::{split_degenerate, BinomialMixture, DegenerateSplit};
pub use normal::{std_normal_cdf, std_normal_pdf};
pub use oracle::{empirical_pmf, exact_pmf, sample, ExactPmf};
pub use quantile::{quantile, random, QuantileQuery};
pub use report::{bench, compare_mixture, compare_two_binomial, BenchReport, CompareReport, Stat, Truth};
pub use solver::{solve_saddlepoint, SaddlepointRoot};
pub use tail::{cdf_at, survival, TailApprox, TailBranch, TailResult};
