//! Dense complex linear algebra for small quantum systems.
//!
//! Everything here is a pure function of its inputs. Index convention for
//! bipartite spaces: `(i1, i2) ↦ i1 * d2 + i2`.

mod eigen;
mod matrix;
mod norm;
mod state;

pub use eigen::{frac_power, HermitianEigen, HERMITIAN_TOL, PSD_TOL, SUPPORT_CUTOFF};
pub use matrix::{partial_trace, tensor, ComplexMatrix, Subsystem};
pub use norm::{schatten_norm, singular_values, PNorm};
pub use state::{purify, PureState, STATE_NORM_TOL};
