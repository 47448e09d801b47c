//! Two-point topological pharmacophore fingerprint.
//!
//! Features are typed by rule on single atoms (and aromatic rings); every
//! pair of features contributes the hash of (type, type, distance bin),
//! where distance is the shortest bond path between the two features.

use std::collections::VecDeque;

use crate::chem::{BondOrder, Element, Molecule};

use super::bits::{BitFingerprint, FingerprintError, FingerprintKind};
use super::hash::{combine, mix64};

pub const DEFAULT_PHARMACOPHORE_WIDTH: usize = 2048;

const SEED: u64 = 0x7068_6172_6d32_0001;

/// Upper edges of the topological distance bins; larger distances fall in
/// the last bin.
pub const DISTANCE_BINS: [u32; 4] = [2, 4, 6, 8];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FeatureType {
    Donor,
    Acceptor,
    Aromatic,
    PositiveIonizable,
    NegativeIonizable,
    Hydrophobic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    pub kind: FeatureType,
    pub atoms: Vec<usize>,
}

fn has_double_to_hetero(mol: &Molecule, i: usize) -> bool {
    mol.neighbors(i).iter().any(|nb| {
        let e = mol.atom(nb.atom as usize).element();
        mol.bond(nb.bond as usize).order() == BondOrder::Double && matches!(e, Element::O | Element::S | Element::N)
    })
}

fn is_basic_amine(mol: &Molecule, i: usize) -> bool {
    let a = mol.atom(i);
    a.element() == Element::N
        && a.formal_charge() == 0
        && !a.is_aromatic()
        && mol.neighbors(i).iter().all(|nb| {
            let j = nb.atom as usize;
            let b = mol.atom(j);
            mol.bond(nb.bond as usize).order() == BondOrder::Single
                && b.element() == Element::C
                && !b.is_aromatic()
                && !has_double_to_hetero(mol, j)
        })
}

fn is_acid_center(mol: &Molecule, i: usize) -> bool {
    let e = mol.atom(i).element();
    if !matches!(e, Element::C | Element::S | Element::P) || !has_double_to_hetero(mol, i) {
        return false;
    }
    mol.neighbors(i).iter().any(|nb| {
        let o = mol.atom(nb.atom as usize);
        o.element() == Element::O && mol.bond(nb.bond as usize).order() == BondOrder::Single && o.total_h() == 1
    })
}

fn is_acceptor(mol: &Molecule, i: usize) -> bool {
    let a = mol.atom(i);
    match a.element() {
        Element::O => a.formal_charge() <= 0,
        Element::N => {
            if a.formal_charge() != 0 || a.total_h() > 0 {
                return false;
            }
            if a.is_aromatic() {
                return mol.degree(i) == 2;
            }
            mol.neighbors(i).iter().any(|nb| {
                matches!(mol.bond(nb.bond as usize).order(), BondOrder::Double | BondOrder::Triple)
            })
        }
        _ => false,
    }
}

fn is_hydrophobic(mol: &Molecule, i: usize) -> bool {
    let a = mol.atom(i);
    match a.element() {
        Element::CL | Element::BR | Element::I => true,
        Element::C => {
            a.formal_charge() == 0
                && !a.is_aromatic()
                && mol
                    .neighbors(i)
                    .iter()
                    .all(|nb| matches!(mol.atom(nb.atom as usize).element(), Element::C | Element::H))
        }
        _ => false,
    }
}

/// Feature assignment used by the fingerprint.
pub fn pharmacophore_features(mol: &Molecule) -> Vec<Feature> {
    let mut out = Vec::new();
    for i in 0..mol.num_atoms() {
        let a = mol.atom(i);
        if a.element().is_dummy() || a.element() == Element::H {
            continue;
        }
        let mut push = |kind| out.push(Feature { kind, atoms: vec![i] });
        if matches!(a.element(), Element::N | Element::O) && a.total_h() > 0 {
            push(FeatureType::Donor);
        }
        if is_acceptor(mol, i) {
            push(FeatureType::Acceptor);
        }
        if a.formal_charge() > 0 || is_basic_amine(mol, i) {
            push(FeatureType::PositiveIonizable);
        }
        if a.formal_charge() < 0 || is_acid_center(mol, i) {
            push(FeatureType::NegativeIonizable);
        }
        if is_hydrophobic(mol, i) {
            push(FeatureType::Hydrophobic);
        }
    }
    for ring in mol.rings() {
        if ring.iter().all(|&a| mol.atom(a).is_aromatic()) {
            out.push(Feature {
                kind: FeatureType::Aromatic,
                atoms: ring.clone(),
            });
        }
    }
    out
}

fn distance_matrix(mol: &Molecule) -> Vec<Vec<u32>> {
    let n = mol.num_atoms();
    let mut d = vec![vec![u32::MAX; n]; n];
    let mut q = VecDeque::new();
    for (s, row) in d.iter_mut().enumerate() {
        row[s] = 0;
        q.push_back(s);
        while let Some(u) = q.pop_front() {
            for nb in mol.neighbors(u) {
                let v = nb.atom as usize;
                if row[v] == u32::MAX {
                    row[v] = row[u] + 1;
                    q.push_back(v);
                }
            }
        }
    }
    d
}

pub fn distance_bin(d: u32) -> u8 {
    DISTANCE_BINS.iter().position(|&edge| d <= edge).unwrap_or(DISTANCE_BINS.len()) as u8
}

pub fn pharmacophore_fingerprint(mol: &Molecule, width: usize) -> Result<BitFingerprint, FingerprintError> {
    let mut fp = BitFingerprint::new(FingerprintKind::Pharmacophore, width)?;
    let features = pharmacophore_features(mol);
    if features.len() < 2 {
        return Ok(fp);
    }
    let dist = distance_matrix(mol);
    for (x, fa) in features.iter().enumerate() {
        for fb in &features[x + 1..] {
            let d = fa
                .atoms
                .iter()
                .flat_map(|&i| fb.atoms.iter().map(move |&j| (i, j)))
                .map(|(i, j)| dist[i][j])
                .min()
                .unwrap_or(u32::MAX);
            if d == u32::MAX {
                continue;
            }
            let (t1, t2) = if fa.kind <= fb.kind { (fa.kind, fb.kind) } else { (fb.kind, fa.kind) };
            let h = mix64(combine(combine(combine(SEED, t1 as u64), t2 as u64), distance_bin(d) as u64));
            fp.set((h % width as u64) as usize);
        }
    }
    Ok(fp)
}
