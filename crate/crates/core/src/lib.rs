//! Concordance invariants of boundary links computed from block Seifert
//! matrices.
//!
//! The crate covers four layers:
//!
//! * [`seifert`]: validated Seifert data and the algebraic concordance moves
//!   (block sum, mirror, unimodular congruence, metabolic enlargement);
//! * [`laurent`] and [`presentation`]: exact Laurent-polynomial presentation
//!   matrices `T_i A_i ± A^T_{n+1−i}` and their Alexander-type determinants;
//! * [`substitution`]: the discriminant test at a point of `U(k)^m`, obtained by
//!   substituting unitary matrices for the variables;
//! * [`twisted`]: a Hermitian twisted form whose signature models the
//!   ρ-invariant, with path scans and torus grids for its jump locus.
//!
//! [`lab`] runs randomized property suites over all of the above and
//! [`acceptance`] holds the end-to-end checks behind `blinksig selftest`.

pub mod acceptance;
pub mod document;
pub mod error;
pub mod intmat;
pub mod lab;
pub mod laurent;
pub mod numeric;
pub mod presentation;
pub mod seifert;
pub mod substitution;
pub mod twisted;

pub use error::{Error, Result};
pub use intmat::IntMatrix;
pub use laurent::{LaurentMatrix, LaurentPoly};
pub use seifert::{BlockStructure, BoundaryLinkData, Convention, Level};
