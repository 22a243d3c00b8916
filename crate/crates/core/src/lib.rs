//! Exact index calculus for iterated symplectic paths, a constructive common
//! index jump solver, homology ranks of prequantization bundles, and a
//! checker for the Morse-theoretic multiplicity argument built on them.

pub mod catalog;
pub mod certify;
pub mod error;
pub mod homology;
pub mod index;
pub mod jump;
pub mod rational;
pub mod record;
pub mod schema;

pub use catalog::{CrossEntry, CrossFamily};
pub use certify::{BoundOptions, BoundReport, Flag, IndexSign, OrbitModel, SystemModel, Verdict};
pub use error::{Error, Result};
pub use homology::{BaseManifold, MonotoneSign};
pub use index::{FastPath, PathModel};
pub use jump::{JumpCertificate, JumpParams, Strategy, VerifyReport};
pub use rational::Rational;
pub use record::Record;
