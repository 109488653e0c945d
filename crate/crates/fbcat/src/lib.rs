//! Exact computer algebra for diagrammatic Brauer-type supercategories over
//! symmetric involutive Frobenius superalgebras, together with their affine
//! extensions: normal forms for string-diagram morphisms, evaluation functors
//! into orthosymplectic supermodule categories, machine verification of the
//! defining relations, and rank-based basis evidence.

pub mod rat;
pub mod superlinear;
pub mod frobenius;
