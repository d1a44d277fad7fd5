//! Semicontraction certificates for saddle-matrix dynamics.
//!
//! The crate builds weighted-seminorm contraction certificates for saddle
//! matrices `[-Q, -Aᵀ; τ⁻¹A, 0]`, checks them numerically, and applies them to
//! linearly constrained primal-dual flows, distributed optimization over
//! graphs (Laplacian and incidence constraints) and Nash-equilibrium seeking
//! dynamics. The [`harness`] module drives the Erdős–Rényi comparison
//! experiment and the command-line interface.
//!
//! Module map:
//!
//! - [`spectra`]: eigenvalue extremes, weighted log seminorms, LMI checks,
//!   Hurwitz/Schur/Metzler predicates, diagonal Lyapunov weights.
//! - [`saddle`]: saddle problems, spectral bounds and the three certificate
//!   constructions.
//! - [`graphs`]: undirected graphs, Laplacian/incidence matrices, G(n, p)
//!   sampling with connectivity enforcement.
//! - [`flows`]: primal-dual vector fields, RK4 integration, trajectory decay
//!   measurements.
//! - [`games`]: gain matrices, the stability equivalence check, quadratic
//!   game simulation.
//! - [`harness`]: experiment configuration, seeding, CSV/JSON-lines output,
//!   file formats and the CLI.

pub mod error;
pub mod flows;
pub mod games;
pub mod graphs;
pub mod harness;
pub mod saddle;
pub mod spectra;

pub use error::{Error, Result};
