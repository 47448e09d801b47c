//! Backtracking subgraph matching of patterns against molecules.

use std::collections::HashSet;

use smallvec::SmallVec;

use crate::chem::{BondOrder, Element, Molecule};

use super::pattern::{AtomExpr, AtomPrim, BondExpr, BondPrim, Pattern};

/// Per-molecule atom properties used by query predicates, computed once and
/// shared by every pattern of a pack.
pub struct Target<'m> {
    mol: &'m Molecule,
    hydrogens: Vec<u8>,
    connectivity: Vec<u8>,
    ring_bonds: Vec<u8>,
    valence: Vec<u8>,
    element_counts: Vec<u16>,
}

impl<'m> Target<'m> {
    pub fn new(mol: &'m Molecule) -> Self {
        let n = mol.num_atoms();
        let mut hydrogens = Vec::with_capacity(n);
        let mut connectivity = Vec::with_capacity(n);
        let mut ring_bonds = Vec::with_capacity(n);
        let mut valence = Vec::with_capacity(n);
        let mut element_counts = vec![0u16; 256];
        for i in 0..n {
            let a = mol.atom(i);
            let h_nbrs = mol
                .neighbors(i)
                .iter()
                .filter(|nb| mol.atom(nb.atom as usize).element() == Element::H)
                .count();
            hydrogens.push((a.total_h() as usize + h_nbrs).min(255) as u8);
            connectivity.push((mol.degree(i) + a.total_h() as usize).min(255) as u8);
            ring_bonds.push(
                mol.neighbors(i)
                    .iter()
                    .filter(|nb| mol.bond(nb.bond as usize).in_ring())
                    .count() as u8,
            );
            valence.push((mol.bond_order_sum(i) + a.total_h() as u32).min(255) as u8);
            let z = a.element().atomic_number() as usize;
            element_counts[z] = element_counts[z].saturating_add(1);
        }
        Target {
            mol,
            hydrogens,
            connectivity,
            ring_bonds,
            valence,
            element_counts,
        }
    }

    pub fn molecule(&self) -> &'m Molecule {
        self.mol
    }

    fn atom_prim(&self, p: &AtomPrim, i: usize) -> bool {
        let a = self.mol.atom(i);
        match *p {
            AtomPrim::Any => true,
            AtomPrim::Aromatic => a.is_aromatic(),
            AtomPrim::Aliphatic => !a.is_aromatic(),
            AtomPrim::Element(e, arom) => a.element() == e && arom.is_none_or(|x| x == a.is_aromatic()),
            AtomPrim::AtomicNumber(z) => a.element().atomic_number() == z,
            AtomPrim::HydrogenCount(h) => self.hydrogens[i] == h,
            AtomPrim::Degree(d) => self.mol.degree(i) == d as usize,
            AtomPrim::Connectivity(x) => self.connectivity[i] == x,
            AtomPrim::InRing => a.in_ring(),
            AtomPrim::RingCount(n) => a.ring_sizes().len() == n as usize,
            AtomPrim::RingSize(n) => a.ring_sizes().iter().min() == Some(&n),
            AtomPrim::RingBonds(n) => self.ring_bonds[i] == n,
            AtomPrim::Valence(v) => self.valence[i] == v,
            AtomPrim::Charge(c) => a.formal_charge() == c,
        }
    }

    fn atom_ok(&self, pattern: &Pattern, q: usize, i: usize) -> bool {
        pattern.atoms[q].eval(&|p| self.atom_prim(p, i))
    }

    fn bond_ok(&self, expr: &BondExpr, b: usize) -> bool {
        let bond = self.mol.bond(b);
        expr.eval(&|p| match p {
            BondPrim::Implicit => matches!(bond.order(), BondOrder::Single | BondOrder::Aromatic),
            BondPrim::Single => bond.order() == BondOrder::Single,
            BondPrim::Double => bond.order() == BondOrder::Double,
            BondPrim::Triple => bond.order() == BondOrder::Triple,
            BondPrim::Aromatic => bond.order() == BondOrder::Aromatic,
            BondPrim::Any => true,
            BondPrim::Ring => bond.in_ring(),
        })
    }
}

/// Visiting order for query atoms: breadth-first from `root`, each atom
/// after the first reached through `parent` (query atom, query bond), with
/// the remaining query bonds to earlier atoms checked on placement.
#[derive(Debug, Clone)]
pub(crate) struct Plan {
    order: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
    closures: Vec<Vec<(usize, usize)>>,
}

pub(crate) fn plan(atoms: &[AtomExpr], adjacency: &[Vec<(usize, usize)>], root: usize) -> Plan {
    let n = atoms.len();
    let mut order = Vec::with_capacity(n);
    let mut parent = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut pos = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for start in std::iter::once(root).chain(0..n) {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back((start, None));
        while let Some((q, via)) = queue.pop_front() {
            pos[q] = order.len();
            order.push(q);
            parent.push(via);
            for &(r, b) in &adjacency[q] {
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back((r, Some((q, b))));
                }
            }
        }
    }
    let mut closures = vec![Vec::new(); n];
    for (k, &q) in order.iter().enumerate() {
        for &(r, b) in &adjacency[q] {
            if pos[r] < k && parent[k].map(|p| p.1) != Some(b) {
                closures[k].push((r, b));
            }
        }
    }
    Plan {
        order,
        parent,
        closures,
    }
}

/// Query atom with the most selective predicate, used as the search root.
pub(crate) fn choose_root(atoms: &[AtomExpr], adjacency: &[Vec<(usize, usize)>]) -> usize {
    (0..atoms.len())
        .max_by_key(|&q| (selectivity(atoms, adjacency, q), std::cmp::Reverse(q)))
        .unwrap_or(0)
}

fn selectivity(atoms: &[AtomExpr], adjacency: &[Vec<(usize, usize)>], q: usize) -> u32 {
    let mut score = 0;
    for p in atoms[q].required() {
        score += match p {
            AtomPrim::Element(e, _) if *e == Element::C => 2,
            AtomPrim::AtomicNumber(6) => 2,
            AtomPrim::Element(e, _) if *e == Element::H => 1,
            AtomPrim::AtomicNumber(1) => 1,
            AtomPrim::Element(..) | AtomPrim::AtomicNumber(_) => 10,
            AtomPrim::Charge(c) if *c != 0 => 8,
            AtomPrim::Any => 0,
            _ => 1,
        };
    }
    score * 4 + adjacency[q].len() as u32
}

enum Mode {
    First,
    All,
}

struct Search<'a, 't> {
    pattern: &'a Pattern,
    target: &'a Target<'t>,
    plan: &'a Plan,
    map: Vec<usize>,
    used: Vec<bool>,
    mode: Mode,
    seen: HashSet<Vec<usize>>,
    found: Vec<Vec<usize>>,
}

impl Search<'_, '_> {
    /// Returns true to stop the search.
    fn extend(&mut self, k: usize, roots: &[usize]) -> bool {
        if k == self.plan.order.len() {
            if matches!(self.mode, Mode::First) {
                self.found.push(self.map.clone());
                return true;
            }
            let mut key: Vec<usize> = self.map.clone();
            key.sort_unstable();
            if self.seen.insert(key) {
                self.found.push(self.map.clone());
            }
            return false;
        }
        let q = self.plan.order[k];
        let mol = self.target.mol;
        let candidates: SmallVec<[usize; 8]> = match self.plan.parent[k] {
            None if k == 0 => roots.iter().copied().collect(),
            None => (0..mol.num_atoms()).collect(),
            Some((pq, qb)) => mol
                .neighbors(self.map[pq])
                .iter()
                .filter(|nb| self.target.bond_ok(&self.pattern.bonds[qb].expr, nb.bond as usize))
                .map(|nb| nb.atom as usize)
                .collect(),
        };
        for c in candidates {
            if self.used[c] || !self.target.atom_ok(self.pattern, q, c) {
                continue;
            }
            let closed = self.plan.closures[k].iter().all(|&(r, b)| {
                mol.bond_between(c, self.map[r])
                    .is_some_and(|mb| self.target.bond_ok(&self.pattern.bonds[b].expr, mb))
            });
            if !closed {
                continue;
            }
            self.map[q] = c;
            self.used[c] = true;
            let stop = self.extend(k + 1, roots);
            self.used[c] = false;
            self.map[q] = usize::MAX;
            if stop {
                return true;
            }
        }
        false
    }
}

impl Pattern {
    fn quick_reject(&self, target: &Target) -> bool {
        self.atoms.len() > target.mol.num_atoms()
            || self
                .required_elements
                .iter()
                .any(|&(z, k)| k > target.element_counts[z as usize])
    }

    fn run(&self, target: &Target, anchor: Option<usize>, mode: Mode) -> Vec<Vec<usize>> {
        if self.quick_reject(target) {
            return Vec::new();
        }
        let plan = match anchor {
            Some(_) => &self.anchored_plan,
            None => &self.free_plan,
        };
        let all: Vec<usize>;
        let roots: &[usize] = match &anchor {
            Some(a) => std::slice::from_ref(a),
            None => {
                all = (0..target.mol.num_atoms()).collect();
                &all
            }
        };
        let mut search = Search {
            pattern: self,
            target,
            plan,
            map: vec![usize::MAX; self.atoms.len()],
            used: vec![false; target.mol.num_atoms()],
            mode,
            seen: HashSet::new(),
            found: Vec::new(),
        };
        search.extend(0, roots);
        search.found
    }

    /// All embeddings as query-atom → molecule-atom maps, one per distinct
    /// set of matched atoms.
    pub fn find_matches(&self, mol: &Molecule) -> Vec<Vec<usize>> {
        self.find_matches_in(&Target::new(mol))
    }

    pub fn find_matches_in(&self, target: &Target) -> Vec<Vec<usize>> {
        self.run(target, None, Mode::All)
    }

    pub fn has_match(&self, mol: &Molecule) -> bool {
        self.has_match_in(&Target::new(mol))
    }

    pub fn has_match_in(&self, target: &Target) -> bool {
        !self.run(target, None, Mode::First).is_empty()
    }

    /// Whether some embedding maps query atom 0 onto `atom`.
    pub fn matches_at(&self, target: &Target, atom: usize) -> bool {
        !self.run(target, Some(atom), Mode::First).is_empty()
    }
}
