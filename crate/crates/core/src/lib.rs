//! Exact symbolic engine for commuting traces of multilinear maps and
//! one-variable functional identities on the n x n matrix algebra over the
//! rationals.
//!
//! Maps are carried as matrices of homogeneous polynomials in the generic
//! matrix entries. On top of that substrate the crate provides the
//! commuting test with standard-form extraction, a degree-lowering partial
//! calculus, the second-order Engel check, the adjugate solver for maps
//! with `x^m q(x)` central, and the full decomposition of identities
//! `q_0(x) x^m + x q_1(x) x^{m-1} + ... + x^m q_m(x) in k`, each result
//! verified by exact reconstruction and cross-checkable against an
//! independent linear-algebra oracle.

pub mod decompose;
pub mod error;
pub mod json;
mod linsolve;
pub mod polymat;
pub mod polyring;
pub mod randgen;
pub mod tracemaps;

pub use decompose::{
    adjugate_solve, engel_check, fi_decompose, fi_decompose_oracle, fi_verify, is_commuting,
    l2_reduce, standard_form, AdjugateOutcome, EngelOutcome, FIDecomposition, StandardForm,
};
pub use error::Error;
pub use polymat::{
    adj_standard_form, cayley_hamilton_check, faddeev_leverrier, generic_adjugate_power,
    generic_char_data, generic_matrix, generic_power, CharPolyData, PolyMatrix, RatMat,
};
pub use polyring::{monomials_of_degree, rat, rat_int, Monomial, Polynomial, Rat, VarIndex};
pub use tracemaps::{
    iterated_partial, make_trace_map, partial, product_rule_check, sandwich, scalar_mul_map,
    ScalarPoly, TraceMap,
};
