//! Harmonic analysis on the boundary sphere of the Poincaré ball.
//!
//! Geometry is generic over the float type; quadrature, Monte Carlo and
//! Nystrom code run in `f64`.

pub mod ball;
pub mod experiments;
pub mod operators;
pub mod quadrature;
pub mod sphere;
pub mod suite;

pub use ball::{
    harmonic_measure_density, hyperbolic_distance, poisson_kernel, random_ball_point, sample_harmonic_measure,
    u_functions, visual_metric, BallPoint, BoundaryPoint, MoebiusMap,
};
pub use experiments::{riesz_potential, shadow_experiment, MonteCarloEstimate};
pub use operators::{h_function, h_function_gauge, hypersingular_apply};
pub use quadrature::{multiplier_closed_form, multiplier_gauss_jacobi, SphericalMultiplier};
pub use sphere::SphereGrid;
