//! Combinatorial models of simplicial Lagrangian skeleta and their mirrors.
//!
//! Given an abstract simplicial complex `K` on vertices `[n]`, this crate
//! builds two finite graded linear categories and compares them:
//!
//! * the poset side: the category of projectives over the face-poset
//!   algebra of `K`, where arbitrary subsets of `[n]` are realized as
//!   twisted complexes ([`poset`]);
//! * the toric side: equivariant line bundles on the quasi-affine toric
//!   variety cut out by `K`, with graded Homs computed weight by weight
//!   through alternating Čech complexes ([`toric`]).
//!
//! The glue is the monomial category on subsets of `[n]` ([`lincat`]),
//! shifted Koszul complexes over it ([`koszul`]), and the axiom checks
//! that pin down such a category up to equivalence ([`monomial`]). All
//! cohomology is computed over exact fields ([`linalg`]). The [`flow`]
//! module numerically verifies the geometric picture behind the
//! generators: distance fields, the piecewise Hamiltonian flow, and
//! intersection counts.

pub mod flow;
pub mod koszul;
pub mod linalg;
pub mod lincat;
pub mod monomial;
pub mod poset;
pub mod simplicial;
pub mod table;
pub mod toric;
pub mod twisted;
