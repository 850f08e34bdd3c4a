//! Numerical laboratory for entanglement in `m`-qudit subsystems of
//! Haar-random `N`-qudit pure states.
//!
//! * [`quditmath`]: partial trace, partial transpose, Hermitian spectra.
//! * [`sampling`]: seeded Haar-random pure states and induced mixed states.
//! * [`measures`]: purity, inverse participation ratio, entropy, distance to
//!   the maximally mixed state, maximal-ball test.
//! * [`ppt`]: PPT/NPT classification over all bipartitions.
//! * [`analytic`]: closed-form means, bounds and the Werner family.
//! * [`montecarlo`]: parallel, deterministic experiment harness.

pub mod analytic;
pub mod error;
pub mod measures;
pub mod montecarlo;
pub mod ppt;
pub mod quditmath;
pub mod sampling;

pub use analytic::{bounds_report, BoundsReport};
pub use error::{Error, Result};
pub use measures::MeasureRecord;
pub use montecarlo::{run_experiment, ExperimentConfig, PointStats};
pub use ppt::{classify, ClassificationRecord, Verdict};
pub use quditmath::{ComplexMatrix, DensityMatrix, PartitionSpec, PureState, Spectrum};
pub use sampling::{KeepPolicy, SeedSpec};
