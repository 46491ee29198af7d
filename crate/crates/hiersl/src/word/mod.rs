//! Word automata: path-formula translation, lasso acceptance, and
//! determinization.

mod ltl;
mod npw;
mod safra;
mod tableau;

pub use ltl::{Ltl, Nnf, NnfArena, NnfId};
pub use npw::{Dpw, Npw, ResourceError, WStateId};
pub use safra::{determinize, ParityToBuchi, SafraDet, STree};
pub use tableau::ltl_to_npw;

#[cfg(test)]
mod tests;
