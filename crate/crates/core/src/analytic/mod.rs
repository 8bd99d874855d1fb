//! Closed-form predictions, reduced models and curve fitters.

pub mod fit;
mod langevin;
mod predict;
mod transfer;

pub use fit::{
    decay_time, fit_exponential, fit_power_law, linear_least_squares, FitModel, FitResult, LinearFit,
};
pub use langevin::{langevin_oracle, langevin_slope, LangevinSpec};
pub use predict::{
    ehrenfest_time, gaussian_profile, generalized_ehrenfest_time, integrate,
    predict_condensate_decay, predict_psi1, predict_psi1_quadrature, predict_sigma2_delta_longtime,
    predict_subdiffusion, predict_tau, predict_tf, sigma2_delta_rate, GrowthPrediction,
    SubdiffusionLaw,
};
pub use transfer::{
    growth_classifier, growth_probability, growth_rate, mu, non_growing_interval, psi1_monte_carlo,
    transfer_matrix, Growth, TransferMatrix2,
};
