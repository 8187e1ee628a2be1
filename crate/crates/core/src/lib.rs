//! Proof analysis for first-order TPTP problems.
//!
//! Beyond asking whether a conjecture follows from its premises, the
//! analyses here ask which premises a proof used, which are truly needed,
//! what all the minimal sufficient subsets are, whether an axiom set is
//! independent, and whether the axioms (with or without the conjecture)
//! have models. Every analysis is parametrised by engines: the built-in
//! resolution prover and finite model finder, or external SZS-speaking
//! provers run as subprocesses.

pub mod logic;
pub mod syntax;
pub mod verdict;
pub mod prover;
pub mod analysis;
pub mod model;
pub mod external;
pub mod engine;
