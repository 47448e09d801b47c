//! Circular (extended-connectivity) environments.

use crate::chem::Molecule;

use super::bits::{BitFingerprint, FingerprintError, FingerprintKind};
use super::hash::{combine, mix64};

pub const DEFAULT_RADIUS: u32 = 2;
pub const DEFAULT_WIDTH: usize = 1024;

const SEED: u64 = 0x6d6f_7267_616e_0001;

fn atom_invariant(mol: &Molecule, i: usize) -> u64 {
    let a = mol.atom(i);
    let mut h = SEED;
    h = combine(h, a.element().atomic_number() as u64);
    h = combine(h, (mol.degree(i) + a.total_h() as usize) as u64);
    h = combine(h, a.total_h() as u64);
    h = combine(h, (a.formal_charge() as i64) as u64);
    h = combine(h, a.in_ring() as u64);
    h = combine(h, a.label() as u64);
    mix64(h)
}

/// One surviving environment: its identifier, centre atom and radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Environment {
    pub id: u64,
    pub atom: usize,
    pub radius: u32,
}

/// Every environment up to `radius`, with duplicates (same bond set) removed.
/// Within a round, of two atoms covering the same bonds the one with the
/// smaller identifier is kept; an atom whose environment repeats an earlier
/// one stops growing.
pub fn morgan_environments(mol: &Molecule, radius: u32) -> Vec<Environment> {
    let n = mol.num_atoms();
    let nb_words = mol.num_bonds().div_ceil(64).max(1);
    let mut ids: Vec<u64> = (0..n).map(|i| atom_invariant(mol, i)).collect();
    let mut out: Vec<Environment> = ids
        .iter()
        .enumerate()
        .map(|(atom, &id)| Environment { id, atom, radius: 0 })
        .collect();
    let mut cover: Vec<Vec<u64>> = vec![vec![0; nb_words]; n];
    let mut seen_covers: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
    seen_covers.insert(vec![0; nb_words]);
    let mut dead = vec![false; n];
    let mut nbr: Vec<(u64, u64)> = Vec::new();
    for r in 1..=radius {
        let mut round: Vec<(Vec<u64>, u64, usize)> = Vec::new();
        let mut next_ids = ids.clone();
        let mut next_cover = cover.clone();
        for i in 0..n {
            if dead[i] {
                continue;
            }
            nbr.clear();
            for nb in mol.neighbors(i) {
                let b = nb.bond as usize;
                let j = nb.atom as usize;
                nbr.push((mol.bond(b).order().code() as u64, ids[j]));
                next_cover[i][b / 64] |= 1 << (b % 64);
                for (w, x) in next_cover[i].iter_mut().zip(&cover[j]) {
                    *w |= x;
                }
            }
            nbr.sort_unstable();
            let mut h = combine(SEED ^ r as u64, ids[i]);
            for &(code, id) in &nbr {
                h = combine(combine(h, code), id);
            }
            next_ids[i] = mix64(h);
            round.push((next_cover[i].clone(), next_ids[i], i));
        }
        round.sort();
        let mut k = 0;
        while k < round.len() {
            let (ref c, id, atom) = round[k];
            let fresh = !seen_covers.contains(c);
            if fresh {
                out.push(Environment { id, atom, radius: r });
            } else {
                dead[atom] = true;
            }
            let mut j = k + 1;
            while j < round.len() && round[j].0 == *c {
                dead[round[j].2] = true;
                j += 1;
            }
            k = j;
        }
        for (c, _, _) in round {
            seen_covers.insert(c);
        }
        ids = next_ids;
        cover = next_cover;
    }
    out
}

/// Sorted, distinct environment identifiers: the unfolded fingerprint.
pub fn morgan_ids(mol: &Molecule, radius: u32) -> Vec<u64> {
    let mut ids: Vec<u64> = morgan_environments(mol, radius).into_iter().map(|e| e.id).collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

/// Folds identifiers into a bit vector of `width` bits (`id mod width`).
pub fn fold(ids: impl IntoIterator<Item = u64>, kind: FingerprintKind, width: usize) -> Result<BitFingerprint, FingerprintError> {
    let mut fp = BitFingerprint::new(kind, width)?;
    for id in ids {
        fp.set((id % width as u64) as usize);
    }
    Ok(fp)
}

pub fn morgan_fingerprint(mol: &Molecule, radius: u32, width: usize) -> Result<BitFingerprint, FingerprintError> {
    fold(
        morgan_environments(mol, radius).into_iter().map(|e| e.id),
        FingerprintKind::Morgan,
        width,
    )
}
