//! Local-minima analysis of QAOA MaxCut landscapes.
//!
//! The crate is a pipeline of small pieces:
//!
//! - [`graphs`]: Erdős–Rényi instances and the exact cut table `C(x)`.
//! - [`simulator`]: state-vector QAOA with the transverse-field mixer,
//!   expectation values and adjoint gradients.
//! - [`optimizer`]: deterministic BFGS with a strong Wolfe line search.
//! - [`landscape`]: quality of minima from uniform restarts, and the number
//!   of minima from bisected basin radii.
//! - [`experiments`]: reproducible sweeps over `n` and `p` written to CSV.
//!
//! ```
//! use qaoa_landscape::graphs::{gen_er, CostTable};
//! use qaoa_landscape::simulator::{approx_ratio, ParamVector};
//!
//! let graph = gen_er(6, 0.5, 42).unwrap();
//! let table = CostTable::build(&graph).unwrap();
//! let params = ParamVector::new(&[0.4, 0.8], &[0.6, 0.3]).unwrap();
//! let r = approx_ratio(&table, &params).unwrap();
//! assert!((0.0..=1.0).contains(&r));
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod graphs;
pub mod landscape;
pub mod optimizer;
pub mod rng;
pub mod simulator;
pub mod synthetic;

pub use error::{Error, Result};
