//! Two-dimensional algebraic theories and their finite algebras.

mod algebra;
pub mod catalog;
mod constructions;
mod hom;
mod syntax;
#[cfg(test)]
mod tests;

pub use algebra::{
    interpret_term, interpret_two_cell, satisfies, Algebra, EquationFailure, OpTable, RawOpTable,
    RawTables,
};
pub(crate) use algebra::all_tuples;
pub use constructions::{
    algebra_congruence_closure, algebra_kernel, product_algebra, quotient_algebra,
    reflexive_coequifier_algebra, subalgebra_check, ProductAlgebra, ReflexiveAlgebraData,
};
pub use hom::{
    algebra_orthogonal, enumerate_algebra_homs, enumerate_algebra_two_cells, find_algebra_isomorphism, is_algebra_hom,
    is_algebra_two_cell, AlgebraHom, HomFailure, OrthogonalityFailure,
};
pub use syntax::{
    monoidal_presentation, pentagon, triangle, Boundary, CellEquation, Extension, Operation,
    Presentation, Signature, SubstArg, Term, TwoCellExpr, TwoCellGenerator, ALPHA, LAMBDA, RHO,
    TENSOR, UNIT,
};
