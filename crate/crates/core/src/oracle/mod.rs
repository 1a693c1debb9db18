//! Independent reference computations: the monomial series and Monte-Carlo integration.

mod monte_carlo;
mod series;

pub use monte_carlo::{mc_volume, reproducing_check, Polynomial, ReproducingOutcome, MIN_SAMPLES};
pub use series::{
    series_kernel, series_kernel_detailed, series_partial_sums, SeriesConfig, SeriesKernel, SeriesOutcome, SERIES_PHI_LIMIT,
};
