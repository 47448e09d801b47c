//! Molecular descriptors: weight, Crippen logP, rotatable bonds, polar
//! surface area, drug-likeness, synthetic accessibility and natural-product
//! likeness.

mod basic;
mod contrib;
mod crippen;
mod qed;

use std::fmt;
use std::str::FromStr;

use crate::chem::Molecule;

pub use basic::{
    aromatic_rings, h_bond_acceptors, h_bond_donors, molecular_weight, psa_contribution, rotatable_bonds, rotatable_bonds_strict, tpsa,
};
pub use contrib::{
    np_score, ring_complexity, sa_score, train_contributions, train_np_contributions, ContributionError,
    ContributionTable, RingComplexity,
};
pub use crippen::{crippen_contributions, crippen_logp, AtomContribution, CrippenTable, CrippenType, UNCLASSIFIED};
pub use qed::{
    qed, qed_alerts, qed_from_desirabilities, qed_from_properties, qed_params, qed_properties, AdsParams,
    QedProperties, QED_PROPERTY_NAMES,
};

/// A scalar descriptor selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Descriptor {
    Mw,
    Logp,
    RotatableBonds,
    Qed,
    Sa,
    Np,
}

impl Descriptor {
    pub const ALL: [Descriptor; 6] = [
        Descriptor::Mw,
        Descriptor::Logp,
        Descriptor::RotatableBonds,
        Descriptor::Qed,
        Descriptor::Sa,
        Descriptor::Np,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Descriptor::Mw => "mw",
            Descriptor::Logp => "logp",
            Descriptor::RotatableBonds => "rotatable_bonds",
            Descriptor::Qed => "qed",
            Descriptor::Sa => "sa",
            Descriptor::Np => "np",
        }
    }

    /// Whether computing the descriptor needs a contribution table.
    pub fn needs_table(self) -> bool {
        matches!(self, Descriptor::Sa | Descriptor::Np)
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown descriptor '{0}' (expected one of mw, logp, rotatable_bonds, qed, sa, np)")]
pub struct UnknownDescriptor(pub String);

impl FromStr for Descriptor {
    type Err = UnknownDescriptor;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Descriptor::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| UnknownDescriptor(s.to_string()))
    }
}

/// Tables for the corpus-derived scores; either may be absent.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScoreTables<'a> {
    pub sa: Option<&'a ContributionTable>,
    pub np: Option<&'a ContributionTable>,
}

/// Evaluates one descriptor. `None` when it needs a table that is missing.
pub fn descriptor_value(mol: &Molecule, d: Descriptor, tables: ScoreTables) -> Option<f64> {
    Some(match d {
        Descriptor::Mw => molecular_weight(mol),
        Descriptor::Logp => crippen_logp(mol),
        Descriptor::RotatableBonds => rotatable_bonds(mol) as f64,
        Descriptor::Qed => qed(mol),
        Descriptor::Sa => sa_score(mol, tables.sa?),
        Descriptor::Np => np_score(mol, tables.np?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescriptorVector {
    pub mw: f64,
    pub logp: f64,
    pub rotatable_bonds: usize,
    pub qed: f64,
    pub sa: Option<f64>,
    pub np: Option<f64>,
}

pub fn descriptor_vector(mol: &Molecule, tables: ScoreTables) -> DescriptorVector {
    DescriptorVector {
        mw: molecular_weight(mol),
        logp: crippen_logp(mol),
        rotatable_bonds: rotatable_bonds(mol),
        qed: qed(mol),
        sa: tables.sa.map(|t| sa_score(mol, t)),
        np: tables.np.map(|t| np_score(mol, t)),
    }
}
