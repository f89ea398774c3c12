//! Numerical toolkit for the contractive quantum plane `yx = qxy`: truncated
//! series arithmetic, q-topology on the complex plane, a matrix functional
//! calculus over a shift/diagonal model pair, and Koszul-complex spectra.

pub mod catalog;
pub mod error;
pub mod formats;
pub mod holo;
pub mod koszul;
pub mod linalg;
pub mod opcalc;
pub mod qalgebra;
pub mod qtopology;
pub mod sampling;

pub use error::{Axis, Error, Result};
pub use holo::HoloSeries;
pub use koszul::{Homology, KoszulComplexAt, ScanGrid, ScanRow};
pub use linalg::Matrix;
pub use num_complex::Complex64;
pub use opcalc::{OperatorPair, QFunctionRep};
pub use qalgebra::{Character, Decomposition, PowMethod, QSeries};
pub use qtopology::{Disk, DiskUnion, QHull, QSet};
