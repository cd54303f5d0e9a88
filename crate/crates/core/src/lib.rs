//! Generalized distance measures on the special orthogonal group and
//! verification of their isometries.
//!
//! The crate builds distances of the form `N(f(A^-1 B))` where `N` is
//! a unitarily invariant matrix norm and `f` maps the unit circle into
//! the complex plane, then checks which transformations of the group
//! preserve them: conjugations, inverted conjugations, and in
//! dimension four two exceptional families twisted by an involution of
//! the skew-symmetric matrices.
//!
//! Modules are layered bottom-up: `linalg` holds the dense kernels,
//! `skewsym` and `rotation` the matrix manifolds, `scalarfun` and
//! `norms` the two ingredients of a distance, `distance` the measures
//! themselves, `isometry` the candidate maps, and `verify` the
//! reusable pass/fail suites consumed by the command-line tool.

pub mod error;
pub mod tol;

pub mod linalg;
pub mod seedmix;
pub mod sweep;

pub mod skewsym;
pub mod rotation;

pub mod scalarfun;
pub mod norms;

pub mod distance;
pub mod isometry;

pub mod textmat;
pub mod verify;

pub use error::{Error, Result};
