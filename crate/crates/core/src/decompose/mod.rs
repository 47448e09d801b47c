//! BRICS fragments, Bemis–Murcko scaffolds and their frequency profiles.

mod brics;
mod murcko;
mod profile;

use rayon::prelude::*;

use crate::chem::Molecule;

pub use brics::{brics_fragments, BricsBond, BricsRules, CleavageRule, LinkEnvironment};
pub use murcko::{murcko_framework, murcko_scaffold};
pub use profile::{build_profile, Profile};

/// Profile key for molecules without rings.
pub const ACYCLIC_SCAFFOLD: &str = "<acyclic>";

/// Fragment occurrences over a set, counted per molecule occurrence.
pub fn fragment_profile(mols: &[Molecule]) -> Profile {
    mols.par_iter()
        .map(|m| build_profile(brics_fragments(m)))
        .reduce(Profile::new, |mut a, b| {
            a.merge(&b);
            a
        })
}

/// Scaffold occurrences over a set; acyclic molecules count under
/// [`ACYCLIC_SCAFFOLD`].
pub fn scaffold_profile(mols: &[Molecule]) -> Profile {
    build_profile(
        mols.par_iter()
            .map(|m| murcko_scaffold(m).unwrap_or_else(|| ACYCLIC_SCAFFOLD.to_string()))
            .collect::<Vec<_>>(),
    )
}
