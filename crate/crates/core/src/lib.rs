//! Construction and certification of the Grassl-Rötteler cyclic and
//! constacyclic MDS codes as generalised Reed-Solomon codes.
//!
//! The crate is organised bottom-up:
//!
//! - [`field_tower`]: `F_q` and `F_{q^2}` with canonical encodings.
//! - [`polynomial`]: univariate polynomials over a tower.
//! - [`linear_code`]: codes as canonical RREF matrices, distances, duals,
//!   the Hermitian puncture code.
//! - [`constructions`]: every code family used here.
//! - [`equivalence`]: diagonal-equivalence solver, GRS witnesses, the
//!   per-case verification pipeline and the puncture-distance formula.

pub mod constructions;
pub mod equivalence;
pub mod error;
pub mod field_tower;
pub mod linear_code;
pub mod polynomial;

pub use constructions::{CaseKind, GrCase, Lemma, ProjectivePoint};
pub use equivalence::{GrsWitness, VerificationReport};
pub use error::{Error, Result};
pub use field_tower::{FieldElement, FieldTower};
pub use linear_code::{LinearCode, Multipliers};
pub use polynomial::Poly;
