//! Kekulé assignment for aromatic systems: a perfect matching over the atoms
//! that still need one π bond, restricted to aromatic bonds.

use super::molecule::{Atom, Bond, BondOrder, Neighbor};

/// Upper bound on backtracking steps before a system is declared unkekulizable.
const SEARCH_BUDGET: usize = 200_000;

/// Whether an aromatic atom must take one double bond in the Kekulé form,
/// judged from its bonds and stated hydrogens before any are implied.
pub(crate) fn needs_double(atom: &Atom, adj: &[Neighbor], bonds: &[Bond]) -> bool {
    let s0: u32 = adj
        .iter()
        .map(|nb| match bonds[nb.bond as usize].order {
            BondOrder::Aromatic => 1,
            o => o.valence() as u32,
        })
        .sum();
    let h = atom.explicit_h as u32;
    let valences = atom.element.allowed_valences(atom.formal_charge);
    match valences.iter().map(|&v| v as u32).find(|&v| v >= s0 + h) {
        Some(target) => target - s0 - h >= 1,
        None => false,
    }
}

/// Assigns single/double Kekulé orders to every aromatic bond. `need[a]`
/// marks atoms that must receive exactly one double bond. Returns the index
/// of an atom left unmatched on failure.
pub(crate) fn assign(
    need: &[bool],
    adj: &[impl AsRef<[Neighbor]>],
    bonds: &mut [Bond],
) -> Result<(), usize> {
    for b in bonds.iter_mut() {
        b.kekule = match b.order {
            BondOrder::Aromatic => BondOrder::Single,
            o => o,
        };
    }
    let n = need.len();
    let candidate = |a: usize, b: &Bond| b.order == BondOrder::Aromatic && need[a];
    let mut options: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for a in 0..n {
        if !need[a] {
            continue;
        }
        for nb in adj[a].as_ref() {
            let (v, bi) = (nb.atom as usize, nb.bond as usize);
            if candidate(v, &bonds[bi]) {
                options[a].push((v, bi));
            }
        }
        if options[a].is_empty() {
            return Err(a);
        }
    }
    let mut mate: Vec<Option<usize>> = vec![None; n];
    let mut budget = SEARCH_BUDGET;
    if !search(need, &options, &mut mate, &mut budget) {
        let stuck = (0..n).find(|&a| need[a] && mate[a].is_none()).unwrap_or(0);
        return Err(stuck);
    }
    for bi in mate.into_iter().flatten() {
        bonds[bi].kekule = BondOrder::Double;
    }
    Ok(())
}

fn search(
    need: &[bool],
    options: &[Vec<(usize, usize)>],
    mate: &mut [Option<usize>],
    budget: &mut usize,
) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    // Most constrained unmatched atom first.
    let mut pick: Option<(usize, usize)> = None;
    for a in 0..need.len() {
        if !need[a] || mate[a].is_some() {
            continue;
        }
        let free = options[a].iter().filter(|(v, _)| mate[*v].is_none()).count();
        if free == 0 {
            return false;
        }
        if pick.is_none_or(|(_, f)| free < f) {
            pick = Some((a, free));
            if free == 1 {
                break;
            }
        }
    }
    let Some((a, _)) = pick else { return true };
    for &(v, bi) in &options[a] {
        if mate[v].is_some() {
            continue;
        }
        mate[a] = Some(bi);
        mate[v] = Some(bi);
        if search(need, options, mate, budget) {
            return true;
        }
        mate[a] = None;
        mate[v] = None;
    }
    false
}
