pub mod analytic;
pub mod circle;
pub mod error;
pub mod gallery;
pub mod poincare;
pub mod poisson;
pub mod report;
pub mod scalar;
pub mod seminorm;
pub mod special;
pub mod stochastic;
pub mod verify;

pub use error::{Error, Result};

pub type Grid = circle::GridFunction<f64>;
pub type Coeffs = circle::FourierCoeffs<f64>;
pub type Taylor = analytic::TaylorFunction<f64>;
pub type Grid32 = circle::GridFunction<f32>;
pub type Coeffs32 = circle::FourierCoeffs<f32>;
pub type Taylor32 = analytic::TaylorFunction<f32>;
