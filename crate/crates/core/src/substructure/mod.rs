//! Substructure queries, matching and structural-alert packs.

mod matcher;
mod pack;
mod pattern;

pub use matcher::Target;
pub use pack::{passes_filters, FilterOutcome, FilterPack, PackError, Rule, RuleKind};
pub use pattern::{
    parse_pattern, AtomExpr, AtomPrim, BondExpr, BondPrim, Expr, Pattern, PatternError, QueryBond, MAX_DEPTH,
};
