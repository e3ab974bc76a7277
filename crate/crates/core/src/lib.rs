//! Exact arithmetic in the local rings `K[X]/(P^n)`: residue-field
//! embeddings, digit expansions over the residue field, and lifting of
//! residue-field isomorphisms to higher levels.

pub mod error;
pub mod fields;
pub mod hensel;
pub mod lift;
pub mod parse;
pub mod poly;
pub mod quotient;
pub mod survey;
pub mod verify;

pub use error::{Error, Result};
pub use fields::{Elem, Field, FieldAutomorphism, FieldDescriptor, FieldElement};
pub use hensel::{
    embed_residue_field, from_digits, hensel_root_series, structure_isomorphism_check,
    taylor_shift_certificate, to_digits, ResidueDigits, RootSeries, StructureIsomorphism,
    StructureReport,
};
pub use lift::{
    extend_automorphism, find_residue_isomorphisms, induced_residue_morphism,
    isomorphism_from_residue, lift_is_isomorphism, lift_morphism, residue_morphism_from_q,
    rings_isomorphic_separable, roots_bijection_check, LiftReport, RootsReport,
};
pub use parse::{parse_element, parse_field, parse_poly, parse_poly_in};
pub use poly::Poly;
pub use quotient::{
    compose_morphisms, Irreducibility, QuotientElement, QuotientRing, StabilizingMorphism,
};
pub use verify::{
    certify_isomorphism, exhaustive_morphism_check, kernel_basis, morphism_matrix, Matrix,
};
pub use survey::{survey, SurveyRow};
