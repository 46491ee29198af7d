//! Independent brute-force and classical game-solving oracles.
//!
//! Everything here validates the main engine from the outside: these
//! implementations share parsed data types with the engine but none of
//! its evaluation code.

mod attractor;
mod bounded;
mod ctlstar;
mod knowledge;
mod lasso;
mod plays;
mod qctl_bounded;

pub use attractor::attractor_solve;
pub use bounded::{bounded_sli_eval, BoundedAnswer};
pub use ctlstar::ctl_star_check;
pub use knowledge::{knowledge_solve, Goal};
pub use lasso::eval_ltl_on_lasso;
pub use plays::{outcome, Assignment, Lasso, MealyStrategy};
pub use qctl_bounded::{qctl_bounded_eval, Three};
