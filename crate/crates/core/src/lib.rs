//! Constructive factorization of singular endomorphisms into idempotents
//! of the same rank, for two concrete algebras: finite-set transformations
//! and square matrices over a prime field.
//!
//! The library exposes:
//!
//! - [`algebra`]: closure, independence, rank and basis manipulation for
//!   both algebras, behind one exchange-property contract;
//! - [`endo`]: total and partial endomorphism values with left-to-right
//!   composition;
//! - [`instances`]: text codecs, singularity tests and exhaustive
//!   enumeration of endomorphisms;
//! - [`factorization`]: the pipeline producing an idempotent factorization
//!   certificate, plus an independent certificate checker;
//! - [`oracle`]: brute-force verifiers (idempotent-product reachability,
//!   shortest exchange chains, span enumeration) that share no code path
//!   with the pipeline.

pub mod algebra;
pub mod endo;
pub mod error;
pub mod factorization;
mod fp;
pub mod instances;
pub mod oracle;

pub use algebra::{AlgebraDescriptor, ElementId, ElementSet};
pub use endo::{Endomorphism, PartialEndomorphism};
pub use error::{Error, Result};
pub use factorization::{
    factorize, verify_factorization, CertificateChecks, FactorizationReport,
};
pub use instances::{format_endo, is_singular, parse_endo};
pub use oracle::{idempotent_generated, OracleBudget, Reachability};
