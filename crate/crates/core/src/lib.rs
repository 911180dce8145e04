//! Hermite–Hadamard type inequalities for geometrically and
//! s-geometrically convex functions, evaluated and checked numerically.
//!
//! * [`means`]: arithmetic, geometric, logarithmic and p-logarithmic means.
//! * [`functions`]: builtin test families, convexity samplers, suprema.
//! * [`quadrature`]: adaptive Gauss–Kronrod integration and the product
//!   integral `(1/ln(b/a)) ∫ f(x) f(ab/x) / x dx`.
//! * [`kernels`]: h₁, h₂, h₃, the (θ, ϑ) pair and the derivative case split.
//! * [`bounds`]: integral identities, bound theorems, Hermite–Hadamard chains.
//! * [`applications`]: the special-means propositions.
//! * [`sweep`]: grid evaluation of the bounds, sequential or with rayon.

pub mod applications;
pub mod bounds;
mod error;
pub mod exec;
pub mod functions;
pub mod kernels;
pub mod means;
pub mod quadrature;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Execution;
pub use functions::{ConvexityParams, FunctionSpec};
pub use quadrature::{Interval, Tolerance};
