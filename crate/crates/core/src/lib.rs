//! Simulation and analytics for a one-dimensional Bose gas whose interaction
//! strength is switched on in periodic kicks.
//!
//! The wave function lives on a symmetric momentum grid. One period applies a
//! quenched random free-evolution phase per momentum mode followed by either an
//! exact delta kick or a finite-width kick integrated by split-step Fourier.
//! Ensembles of phase realizations are averaged deterministically, and closed
//! form growth laws are provided as independent predictions to compare against.

pub mod analytic;
pub mod ensemble;
pub mod error;
pub mod gpe;
pub mod io;
pub mod observables;
pub mod precision;

pub use error::{Error, Result};
