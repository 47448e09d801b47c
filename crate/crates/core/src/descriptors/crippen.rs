//! Wildman–Crippen atom-typed logP.

use std::sync::OnceLock;

use crate::chem::{Element, Molecule};
use crate::substructure::{parse_pattern, PackError, Pattern, Target};

const CRIPPEN_TEXT: &str = include_str!("../../data/crippen.txt");

#[derive(Debug, Clone)]
pub struct CrippenType {
    pub name: String,
    pub pattern: Pattern,
    pub logp: f64,
}

/// Ordered atom-type table; the first pattern that matches at an atom types it.
#[derive(Debug, Clone)]
pub struct CrippenTable {
    pub types: Vec<CrippenType>,
}

/// Type and contribution of one atom. Indices past the input's atom count
/// are hydrogens made explicit for typing.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomContribution {
    pub atom: usize,
    pub type_name: String,
    pub logp: f64,
}

/// Type name for atoms no table row matches; contributes zero.
pub const UNCLASSIFIED: &str = "unclassified";

impl CrippenTable {
    pub fn parse(text: &str) -> Result<CrippenTable, PackError> {
        let mut types = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.starts_with('#') || raw.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = raw.trim_end_matches('\r').split('\t').collect();
            if cols.len() != 3 {
                return Err(PackError::Line {
                    line,
                    message: "expected TYPE<TAB>PATTERN<TAB>LOGP".to_string(),
                });
            }
            let pattern = parse_pattern(cols[1]).map_err(|source| PackError::Pattern { line, source })?;
            let logp = cols[2].parse().map_err(|_| PackError::Line {
                line,
                message: format!("bad value '{}'", cols[2]),
            })?;
            types.push(CrippenType {
                name: cols[0].to_string(),
                pattern,
                logp,
            });
        }
        Ok(CrippenTable { types })
    }

    pub fn standard() -> &'static CrippenTable {
        static T: OnceLock<CrippenTable> = OnceLock::new();
        T.get_or_init(|| CrippenTable::parse(CRIPPEN_TEXT).expect("bundled Crippen table parses"))
    }

    /// Per-atom breakdown, hydrogens included.
    pub fn contributions(&self, mol: &Molecule) -> Vec<AtomContribution> {
        let expanded = mol.with_explicit_hydrogens();
        let target = Target::new(&expanded);
        (0..expanded.num_atoms())
            .filter(|&i| !expanded.atom(i).element().is_dummy())
            .map(|i| match self.types.iter().find(|t| t.pattern.matches_at(&target, i)) {
                Some(t) => AtomContribution {
                    atom: i,
                    type_name: t.name.clone(),
                    logp: t.logp,
                },
                None => AtomContribution {
                    atom: i,
                    type_name: UNCLASSIFIED.to_string(),
                    logp: 0.0,
                },
            })
            .collect()
    }

    pub fn logp(&self, mol: &Molecule) -> f64 {
        let expanded = mol.with_explicit_hydrogens();
        let target = Target::new(&expanded);
        (0..expanded.num_atoms())
            .filter(|&i| expanded.atom(i).element() != Element::DUMMY)
            .filter_map(|i| self.types.iter().find(|t| t.pattern.matches_at(&target, i)))
            .map(|t| t.logp)
            .sum()
    }
}

pub fn crippen_contributions(mol: &Molecule) -> Vec<AtomContribution> {
    CrippenTable::standard().contributions(mol)
}

pub fn crippen_logp(mol: &Molecule) -> f64 {
    CrippenTable::standard().logp(mol)
}
