//! Exact intersection rings of blow-ups of projective space along disjoint
//! linear centers, pullback actions on them, dynamical degrees and entropy
//! with certified enclosures, and positivity checks.

pub mod action;
pub mod document;
pub mod error;
pub mod gate;
pub mod lattice;
pub mod matrix;
pub mod numeric;
pub mod poly;
pub mod positivity;
pub mod ring;
pub mod roots;
pub mod spectral;

pub use action::{PullbackAction, ValidationReport};
pub use document::{InputDocument, Workspace};
pub use error::{Error, Result};
pub use gate::{decide, proof_chain_report, ChainReport, GateVerdict, NonRealizability};
pub use matrix::IntMatrix;
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::IntPolynomial;
pub use positivity::{NefAssertion, PfOutcome};
pub use ring::{build_ring, BasisMonomial, BlowupConfig, GradedClass, RingModel};
pub use spectral::{
    char_poly, dynamical_degrees, is_cyclotomic_product, lemma21_report, spectral_radius, DegreeSequence, Enclosure,
    Entropy, Truth,
};
