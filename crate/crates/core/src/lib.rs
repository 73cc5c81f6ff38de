//! Pseudohermitian invariants of pluriharmonic perturbations of the unit
//! sphere in ℂ² and the CR umbilical locus of real ellipsoids.
//!
//! * [`ambient`]: the defining function, its jets, frames and contractions.
//! * [`invariants`]: Webster curvature, torsion, covariant blocks and the
//!   Cartan tensor, with a finite-difference oracle.
//! * [`ellipsoid`]: closed-form umbilical curves, the sextic system and
//!   the Beltrami coefficient for Re(az² + bw²) ellipsoids.
//! * [`tracer`]: continuation of the generic umbilical variety.
//! * [`verify`]: the property suites behind `cr-umbilic verify`.

pub mod ambient;
pub mod ellipsoid;
pub mod error;
pub mod invariants;
pub mod scalar;
pub mod tracer;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::C64;
