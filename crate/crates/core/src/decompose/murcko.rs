//! Bemis–Murcko frameworks.

use crate::chem::{BondOrder, Molecule};

/// Scaffold as a molecule: ring atoms, linkers between rings and atoms
/// double-bonded to either. `None` for acyclic input.
pub fn murcko_framework(mol: &Molecule) -> Option<Molecule> {
    if mol.rings().is_empty() {
        return None;
    }
    let n = mol.num_atoms();
    let mut keep = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|i| mol.degree(i)).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&i| degree[i] <= 1 && !mol.atom(i).in_ring()).collect();
    while let Some(i) = stack.pop() {
        if !keep[i] {
            continue;
        }
        keep[i] = false;
        for nb in mol.neighbors(i) {
            let j = nb.atom as usize;
            if keep[j] {
                degree[j] -= 1;
                if degree[j] <= 1 && !mol.atom(j).in_ring() {
                    stack.push(j);
                }
            }
        }
    }
    let core = keep.clone();
    for i in 0..n {
        if core[i] || mol.degree(i) != 1 {
            continue;
        }
        let nb = mol.neighbors(i)[0];
        if core[nb.atom as usize] && mol.bond(nb.bond as usize).order() == BondOrder::Double {
            keep[i] = true;
        }
    }
    Some(mol.subgraph(&keep))
}

/// Canonical string of the scaffold, `None` for acyclic input.
pub fn murcko_scaffold(mol: &Molecule) -> Option<String> {
    murcko_framework(mol).map(|m| m.canonical_smiles().to_string())
}
