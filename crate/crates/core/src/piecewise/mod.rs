//! Piecewise-polynomial functions on explicit cell decompositions.

pub mod builders;
pub mod fixture;
pub mod function;
pub mod generate;
pub mod polynomial;
pub mod refine;
pub mod validate;

pub use builders::{affine_precompose, indicator, min_of_affine, negate, sum};
pub use fixture::{
    corpus_dir, fixture_to_string, load_corpus, load_fixture, parse_fixture, save_fixture,
};
pub use function::{
    gradient_on_cell, point_text, Adjacency, Cell, ExtendedRational, PiecewiseFunction,
    SpecialOracle, Tier,
};
pub use generate::{random_piecewise_affine, GeneratorConfig};
pub use polynomial::Polynomial;
pub use refine::{complex_faces, is_face, refine, ComplexFace};
pub use validate::{validate, Check, CheckStatus, ValidationReport};
