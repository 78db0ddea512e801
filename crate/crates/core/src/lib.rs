//! Exact computations for finite differential graded categories over prime
//! fields: chain complexes, dg-categories, bimodules, bar-construction
//! composition, Hochschild complexes, and the strict Segal condition for
//! finite simplicial sets.
//!
//! Every homology computation reduces to rank and kernel computations in
//! [`linalg`], which has a word-packed fast path over GF(2).

pub mod bar;
pub mod bimod;
pub mod complex;
pub mod dgcat;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod linalg;
pub mod random;
pub mod segal;

mod names;

pub use bar::{
    compose, hochschild_direct, hochschild_via_adj, quasi_iso_report, safe_degree_bound,
    BarComplex, BettiLine, Marker, QuasiIsoReport, SafeBound, TotalComplex,
};
pub use bimod::{adj, adj_op, diagonal, ext_tensor, nat_complex, pi_k, Bimodule, BimoduleReport};
pub use complex::{hom_cx, tensor_cx, ChainComplex, ComplexReport, Generator, Grading};
pub use dgcat::{opposite, sum_cat, tensor_cat, unit_cat, CategoryReport, DgCategory};
pub use error::{Error, Result};
pub use field::{Field, Scalar, SparseVec};
pub use linalg::{homology_rank, kernel_basis, rank, SparseMatrix};
pub use segal::{nerve, segal_check, FiniteCategory, FiniteSimplicialSet, SegalVerdict, SsetReport};
