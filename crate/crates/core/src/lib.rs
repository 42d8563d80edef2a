//! Kinematics of one-parameter homothetic exponential motions in dual
//! Lorentzian 3-space.

pub mod acceleration;
pub mod commands;
pub mod config;
pub mod dual_matrix;
pub mod dual_scalar;
pub mod error;
pub mod function;
pub mod lorentz;
pub mod motion;
pub mod sampling;
pub mod verify;

pub use acceleration::{AccelCenterResult, DegeneracyKind};
pub use dual_matrix::{AxisData, DualMat3, Mat3};
pub use dual_scalar::{DualPolynomial, DualScalar};
pub use error::{Error, Result};
pub use function::{ScalarFunction, Term, VecFunction};
pub use lorentz::{CausalClass, DualVec3, UnitSphere, Vec3};
pub use motion::{Mode, Motion};
