pub mod channels;
pub mod error;
pub mod faulttol;
pub mod gates;
pub mod qcore;
pub mod scalar;
pub mod zeno;

pub use error::{Error, Result};
pub use scalar::{Real, C};

/// Double-precision aliases used by the experiment runner.
pub type Complex64 = C<f64>;
pub type CMatrix64 = qcore::CMatrix<f64>;
pub type Operator64 = qcore::Operator<f64>;
pub type HermitianOperator64 = qcore::HermitianOperator<f64>;
pub type DensityMatrix64 = qcore::DensityMatrix<f64>;
pub type Channel64 = channels::Channel<f64>;
pub type PauliErrorDistribution64 = channels::PauliErrorDistribution<f64>;
pub type NoisyCycleSpec64 = zeno::NoisyCycleSpec<f64>;
pub type NocoResult64 = zeno::NocoResult<f64>;
pub type DistillationConfig64 = faulttol::DistillationConfig<f64>;
pub type DistillationResult64 = faulttol::DistillationResult<f64>;
pub type ErrorBudget64 = faulttol::ErrorBudget<f64>;
pub type ThresholdPoint64 = faulttol::ThresholdPoint<f64>;

/// Single-precision aliases.
pub type Complex32 = C<f32>;
pub type CMatrix32 = qcore::CMatrix<f32>;
pub type Operator32 = qcore::Operator<f32>;
pub type DensityMatrix32 = qcore::DensityMatrix<f32>;
pub type Channel32 = channels::Channel<f32>;
