//! Numerical laboratory for the inhomogeneous anisotropic Allen-Cahn equation
//! `u_t = div_m[a_p(x, grad u)] + f(u)/eps^2` and its sharp-interface limit,
//! the anisotropic curvature flow `V_{n,phi} = -kappa_phi`.
//!
//! Organization:
//! - [`anisotropy`]: the Finsler toolkit (density a(x,p), dual metric, constants)
//! - [`distance`]: anisotropic distances, cut-offs, grid differential operators
//! - [`reaction`]: bistable nonlinearity, ODE kernel Y, standing-wave profile
//! - [`diffuse`]: explicit conservative solver for the diffuse problem
//! - [`sharp`]: narrow-band level-set solver for the curvature flow
//! - [`bounds`]: constants ledger, sub/super-solution pairs, certification
//! - [`lab`]: configuration, measurement drivers, CSV/checkpoint output
//!
//! Runnable demonstrations live in `examples/`; the `anisolab` binary wraps
//! the measurement drivers behind subcommands.

pub mod anisotropy;
pub mod bounds;
pub mod diffuse;
pub mod distance;
pub mod error;
pub mod expr;
pub mod field;
pub mod geom;
pub mod lab;
pub mod reaction;
pub mod sharp;

pub use anisotropy::{AnisotropyField, MetricConstants};
pub use error::{Error, Result};
pub use field::{GridSpec, ScalarField, VectorField};
pub use geom::{Mat2, Vec2};
