//! Eigenvalues of regular Sturm-Liouville problems
//! `-y'' + p(x) y = lambda y` on `[0, 1]` by piecewise approximation of the
//! coefficient.
//!
//! Two segment models are available: the classical piecewise-constant
//! midpoint fit, and an extended fit by translates of the barrier
//! `2/cos^2(x)`, whose eigenvalue equation still has elementary solutions.
//! Either way each subinterval gets a closed-form transfer matrix, the global
//! fundamental matrix is their ordered product, and eigenvalues are roots of
//! a scalar boundary characteristic located by scan plus bisection.
//!
//! ```
//! use pruess::mesh::uniform_mesh;
//! use pruess::fitting::Method;
//! use pruess::potentials::{builtin, CaseId};
//! use pruess::solver::{find_eigenvalues, BoundaryConditions, Problem, SolveConfig};
//!
//! let problem = Problem::new(
//!     builtin(CaseId::Case4),
//!     BoundaryConditions::dirichlet(),
//!     uniform_mesh(16).unwrap(),
//!     Method::Pruess,
//! )
//! .unwrap();
//! let lowest = find_eigenvalues(&problem, 3, &SolveConfig::default()).unwrap();
//! assert!((lowest[0].lambda - 11.256).abs() < 1e-2);
//! ```

pub mod basis;
pub mod commutation;
pub mod error;
pub mod fitting;
pub mod mesh;
pub mod potentials;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
