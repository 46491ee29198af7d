//! Formula languages: abstract syntax, parsers, printers and the static
//! analyses used by the pipeline (free sets, quantified/free atoms,
//! hierarchy checks).

mod lex;
mod parse;
mod qctl;
mod sli;

pub use lex::{ParseError, Span};
pub use parse::{parse_qctl, parse_sli, Signature};
pub use qctl::{
    ap_free, ap_quantified, is_hierarchical_qctl, split_props, QPath, QPathNode,
    QState, QStateNode, QctlHierarchyWitness,
};
pub use sli::{
    build_nash_formula, free, is_hierarchical_instance, is_sentence, FreeSet, HierarchyWitness,
    QuantOcc, Sli, SliNode,
};

#[cfg(test)]
mod tests;
