//! Encoding finite projective plane searches as SAT problems.
//!
//! The crate covers the whole path from a partial incidence matrix to a
//! checked unsatisfiability certificate:
//!
//! - [`matrix`] and [`case`]: tri-valued partial incidence matrices and the
//!   starting-case file format.
//! - [`perm`] and [`group`]: permutation arithmetic, group closure, matrix
//!   automorphisms, orbits and stabilizers.
//! - [`cnf`] and [`encoder`]: clause databases, DIMACS I/O, and the incidence
//!   and cardinality constraints.
//! - [`symbreak`]: column-lex ordering, lex-leader constraints and the block
//!   labelling method.
//! - [`solver`] and [`enumerate`]: a small CDCL solver with DRAT output, and
//!   all-solutions / isomorph-free enumeration on top of it.
//! - [`cnc`] and [`process`]: cubing, parallel conquering, proof collection
//!   and reporting, with external tools behind command templates.
//! - [`pipeline`]: the whole run for a plane order or a starting case.

pub mod case;
pub mod cnc;
pub mod cnf;
pub mod encoder;
pub mod enumerate;
pub mod group;
pub mod matrix;
pub mod perm;
pub mod pipeline;
pub mod process;
pub mod solver;
pub mod symbreak;

pub use case::{CaseId, CaseSpec};
pub use cnf::{CnfFormula, Lit};
pub use encoder::{PlaneEncoding, VarMap};

pub use group::{MatrixSymmetry, SymmetryGroup};
pub use matrix::{Cell, PartialIncidenceMatrix, PlaneParams};
pub use perm::Permutation;
