//! Invariants of three-dimensional terminal singularities and exhaustive
//! checks of how they change under flips and divisorial contractions to
//! curves.
//!
//! * [`invariants`]: terminal germs, baskets, Ξ and F.
//! * [`dualgraph`]: ADE graphs of general elephants and their degeneration order.
//! * [`neighborhoods`]: the catalog of irreducible extremal neighborhoods.
//! * [`transitions`]: admissible singularities after the contraction.
//! * [`mori`]: the index recursion of semistable flips.
//! * [`verifier`]: sweeps and reports.

pub mod dualgraph;
pub mod error;
pub mod invariants;
pub mod mori;
pub mod neighborhoods;
pub mod rational;
pub mod transitions;
pub mod verifier;

pub use dualgraph::{degenerates_to, elephant_graph, sum_dominated_by, DuValGraph, DuValKind, GraphSum};
pub use error::{Error, Result};
pub use invariants::{basket_of, c1c2_from_chi, f_from_basket, Basket, Configuration, SingType, TerminalPoint};
pub use mori::{run_mori_recursion, MoriRecursionInput, MoriRecursionOutput};
pub use neighborhoods::{CaseLabel, ExtremalNbhd, NbhdKind, Params, TargetConstraint};
pub use rational::Rational;
pub use transitions::{enumerate_divisorial_targets, enumerate_flip_targets, Bounds};
pub use verifier::{oracle_check, verify_all, verify_divisorial_case, verify_flip_case, VerifyReport};
