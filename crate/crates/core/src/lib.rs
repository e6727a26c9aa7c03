//! Affine (XOR-only) multi-modal logic over S5 frames.
//!
//! The crate turns 3CNF formulas into affine 2-multi-modal formulas whose
//! S5-satisfiability matches the propositional satisfiability of the
//! input, constructs machine-verified satisfying structures for the
//! satisfiable ones, and provides the supporting machinery: a formula
//! parser and printer, Kripke structures with frame-class closures, a
//! model checker for the exclusive-or semantics, brute-force oracles, and
//! seeded random structure generation.
//!
//! Entry points:
//! * [`cnf::parse_dimacs`] / [`formula::parse_formula`] — read inputs;
//! * [`reduction::reduce`] — pad, bracket, and translate a CNF;
//! * [`witness::build_witness`] — construct and verify an S5 model for a
//!   satisfiable input;
//! * [`modelcheck::check`] — the satisfaction relation;
//! * [`solver::bounded_modal_sat`] — bounded exhaustive modal search.

pub mod cnf;
pub mod error;
pub mod formula;
pub mod kripke;
pub mod modelcheck;
pub mod naive;
pub mod reduction;
pub mod solver;
pub mod witness;

pub use cnf::{Assignment, Clause, Cnf, ConjTree, Literal, PaddedCnf, TreePath};
pub use error::{Error, Result};
pub use formula::{parse_formula, print_formula, Formula, FormulaKind, FormulaMetrics};
pub use kripke::{FrameClass, FrameProperties, KripkeBuilder, KripkeStructure, NiceModel};
pub use reduction::{reduce, ReductionOutput, ReductionStats};
pub use solver::SearchBudget;
pub use witness::{WitnessBuild, WitnessCertificate};
