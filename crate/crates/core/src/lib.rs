//! Ramond-sector ground states of the Conway moonshine module, class by class.
//!
//! For each conjugacy class of Co₀ the pipeline goes
//!
//! 1. Frame shape → twelve log-eigenvalues ([`frame`]),
//! 2. four `Spin₂₄` lift candidates, keeping the one whose Witten index is
//!    the trace ([`classify::select_lift`]),
//! 3. `Z^NS_{Rg}` and `Z^R_{Rg}` as exact q-series ([`partition`], built on
//!    [`theta`] and [`qseries`]),
//! 4. boson/fermion ground-state counts and the verdict: conspiratorial,
//!    nonconspiratorial, or supersymmetry-breaking ([`classify`]).
//!
//! [`dataset`] drives this over the bundled Co₀ class table and renders the
//! results; [`oracle`] holds brute-force cross-checks.
//!
//! ```
//! use conway_ramond::{dataset, qseries::Exp};
//!
//! let rows = dataset::read_frames("co0_class,co1_class,frame_shape\n1A,1A,1^24\n".as_bytes())?;
//! let recs = dataset::run_all(&rows, Exp::from_integer(2))?;
//! assert_eq!(recs[0].counts.bosons, 24);
//! # Ok::<(), dataset::DatasetError>(())
//! ```

pub mod classify;
pub mod dataset;
pub mod frame;
pub mod oracle;
pub mod partition;
pub mod qseries;
pub mod selfcheck;
pub mod theta;

pub use classify::{Classification, GroundStateCount};
pub use dataset::{ClassRecord, FrameRow};
pub use frame::{FrameShape, LiftTag, LogEigenvalues};
pub use qseries::{Bound, Exp, PuiseuxSeries};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default truncation: coefficients of `q^e` are trusted for `e < 5`.
pub const DEFAULT_TRUNCATION: i64 = 5;
