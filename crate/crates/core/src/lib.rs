//! Circular coordinates for point clouds.
//!
//! A filtered 2-skeleton (Rips or witness) is built from pairwise distances,
//! persistent cohomology over a prime field finds the long-lived
//! 1-dimensional classes, each representative is lifted to an integer
//! cocycle, smoothed to its harmonic representative by least squares, and
//! the resulting potential gives every point an angle in `[0, 1)`.
//!
//! Everything real-valued is generic over [`Scalar`] (`f32` or `f64`);
//! finite-field and integer coefficients are `u32` and `i64`.
//!
//! ```
//! use circular_coords::pipeline::{run_pipeline, ComplexKind, InputSource, PipelineConfig};
//! use circular_coords::datasets::{DatasetKind, DatasetSpec};
//!
//! let spec = DatasetSpec::new(DatasetKind::NoisyCircle, 60, 0.0, 1);
//! let mut config = PipelineConfig::<f64>::new(InputSource::Dataset(spec), ComplexKind::Rips, 1.0);
//! config.top = Some(1);
//! let out = run_pipeline(&config).unwrap();
//! assert_eq!(out.selected.len(), 1);
//! assert!(out.selected[0].coordinate.theta.iter().all(|t| (0.0..1.0).contains(t)));
//! ```

pub mod analysis;
pub mod circular;
pub mod cochain;
pub mod complex;
pub mod datasets;
pub mod error;
pub mod harmonic;
pub mod io;
pub mod lift;
pub mod metric;
pub mod persistence;
pub mod pipeline;
pub mod scalar;
pub mod svg;

pub use circular::CircularCoordinate;
pub use cochain::{Cochain, Integers, PrimeField, Reals, Ring};
pub use complex::{FilteredComplex, OrderedFiltration, Simplex};
pub use error::{Error, Result};
pub use metric::{DistanceMatrix, LandmarkSet, PointCloud};
pub use persistence::{PersistenceDiagram, PersistenceInterval};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineError, PipelineOutput};
pub use scalar::Scalar;

pub type PointCloud64 = PointCloud<f64>;
pub type PointCloud32 = PointCloud<f32>;
pub type DistanceMatrix64 = DistanceMatrix<f64>;
pub type DistanceMatrix32 = DistanceMatrix<f32>;
pub type Filtration64 = OrderedFiltration<f64>;
pub type Filtration32 = OrderedFiltration<f32>;
pub type Diagram64 = PersistenceDiagram<f64>;
pub type Diagram32 = PersistenceDiagram<f32>;
pub type Coordinate64 = CircularCoordinate<f64>;
pub type Coordinate32 = CircularCoordinate<f32>;
pub type RealCochain64 = Cochain<f64>;
pub type RealCochain32 = Cochain<f32>;
pub type PipelineConfig64 = PipelineConfig<f64>;
pub type PipelineConfig32 = PipelineConfig<f32>;
