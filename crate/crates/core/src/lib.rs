//! Radiated-power figures of merit for polarized far-field EIRP patterns.
//!
//! The crate computes total radiated power (TRP), partial radiated power over
//! a θ band (PRP) and constrained-view radiated power (CVRP), the mean EIRP
//! over a spherical cap or window normalized by its own solid angle. It also
//! synthesizes planar phased arrays with steering and failed elements,
//! rotates patterns about the y axis, and compares CVRP sweeps in dB.
//!
//! Everything is generic over the [`Scalar`] type (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`.
//!
//! ```
//! use cvrp::{metrics, Grid, Pattern, Mask, Direction};
//!
//! let p = Pattern::uniform(Grid::standard(1.5, 1.5).unwrap(), 0.5, 0.5).unwrap();
//! let trp = metrics::trp(&p).unwrap();
//! let cap = Mask::cap(Direction::boresight(), 30.0).unwrap();
//! let cvrp = metrics::cvrp(&p, &cap).unwrap();
//! assert!((trp - 1.0).abs() < 2e-4);
//! assert!((cvrp - 1.0).abs() < 1e-2);
//! ```

pub mod array;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod io;
pub mod mask;
pub mod metrics;
pub mod pattern;
pub mod pipeline;
pub mod remap;
pub mod rotate;
pub mod scalar;

pub use error::{Error, Result};
pub use grid::Convention;
pub use scalar::Scalar;

pub type Grid = grid::AngularGrid<f64>;
pub type Direction = grid::Direction<f64>;
pub type Pattern = pattern::PolarizedPattern<f64>;
pub type Pattern32 = pattern::PolarizedPattern<f32>;
pub type Mask = mask::SphericalMask<f64>;
pub type Sweep = metrics::CvrpSweep<f64>;
pub type Comparison = diagnostics::SweepComparison<f64>;
pub type Array = array::ArraySpec<f64>;
