//! Finite-dimensional quantum channels and their norms.
//!
//! * [`linalg`]: Schatten norms, Hermitian functional calculus, partial traces.
//! * [`channel`]: Kraus / Choi / Stinespring / Lindblad views, conjugate
//!   channels, tensor products, random and named instances.
//! * [`normcalc`]: estimators for `‖Φ‖_{q→p}`, `ω_p(Φ)`, `g_p` and `S_CB,min`.
//! * [`verify`]: scenario runners that check the identities tying these
//!   quantities together and emit reports.

pub mod channel;
pub mod error;
pub mod linalg;
pub mod normcalc;
pub mod rng;
pub mod verify;

pub use channel::{tensor_channels, ChoiMatrix, NamedChannel, QuantumChannel};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, PNorm, PureState, Subsystem};
