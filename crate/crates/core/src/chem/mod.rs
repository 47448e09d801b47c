//! Molecular graph substrate: elements, SMILES reading and writing, ring
//! perception, kekulization and canonical ranking.

mod canon;
mod element;
mod error;
mod kekule;
mod molecule;
mod rings;
mod smiles;

pub use canon::{canonical_ranks, symmetry_classes, write_smiles};
pub use element::Element;
pub use error::{ParseDiagnostic, ParseErrorKind};
pub use molecule::{Atom, Bond, BondOrder, Molecule, Neighbor};
pub use smiles::{parse_fragment_smiles, parse_smiles};
