//! Model checker for strategy logic with imperfect information (SLi) on
//! hierarchical instances.
//!
//! The pipeline: an SLi sentence and a concurrent game structure with
//! observations are compiled into a compound Kripke structure and a
//! QCTL* formula with observation-annotated propositional quantifiers;
//! the formula is then translated, bottom-up, into alternating parity
//! tree automata, and the final verdict is the winner of a finite parity
//! acceptance game.
//!
//! Independent brute-force oracles (attractor games, knowledge-subset
//! games, bounded strategy enumeration, classical CTL* checking) live in
//! [`oracles`] and share no evaluation code with the engine.

pub mod automata;
pub mod check;
pub mod compiler;
pub mod games;
pub mod gen;
pub mod logic;
pub mod oracles;
pub mod par;
pub mod qctl_mc;
pub mod word;

pub use check::{check_instance, check_qctl, CheckOptions, RunReport, Verdict};
