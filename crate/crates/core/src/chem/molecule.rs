//! The sanitized molecular graph shared by every other module.

use std::sync::OnceLock;

use smallvec::SmallVec;

use super::canon;
use super::element::Element;
use super::error::{ParseDiagnostic, ParseErrorKind};
use super::{kekule, rings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Small stable code used in invariants and hashes.
    pub fn code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }

    /// Integer valence contribution. Aromatic counts as one; use the Kekulé
    /// order for exact sums.
    pub fn valence(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub(crate) element: Element,
    pub(crate) formal_charge: i8,
    pub(crate) explicit_h: u8,
    pub(crate) implicit_h: u8,
    pub(crate) aromatic: bool,
    pub(crate) ring_sizes: SmallVec<[u8; 2]>,
    /// Attachment label on dummy atoms (BRICS link type); zero elsewhere.
    pub(crate) label: u16,
}

impl Atom {
    pub(crate) fn new(element: Element) -> Self {
        Atom {
            element,
            formal_charge: 0,
            explicit_h: 0,
            implicit_h: 0,
            aromatic: false,
            ring_sizes: SmallVec::new(),
            label: 0,
        }
    }

    pub fn element(&self) -> Element {
        self.element
    }
    pub fn formal_charge(&self) -> i8 {
        self.formal_charge
    }
    pub fn explicit_h(&self) -> u8 {
        self.explicit_h
    }
    pub fn implicit_h(&self) -> u8 {
        self.implicit_h
    }
    pub fn total_h(&self) -> u8 {
        self.explicit_h + self.implicit_h
    }
    pub fn is_aromatic(&self) -> bool {
        self.aromatic
    }
    /// Sizes of the basis rings containing this atom.
    pub fn ring_sizes(&self) -> &[u8] {
        &self.ring_sizes
    }
    pub fn in_ring(&self) -> bool {
        !self.ring_sizes.is_empty()
    }
    pub fn label(&self) -> u16 {
        self.label
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bond {
    pub(crate) begin: usize,
    pub(crate) end: usize,
    pub(crate) order: BondOrder,
    /// Single/double assignment for aromatic bonds; equals `order` otherwise.
    pub(crate) kekule: BondOrder,
    pub(crate) in_ring: bool,
}

impl Bond {
    pub(crate) fn new(begin: usize, end: usize, order: BondOrder) -> Self {
        Bond {
            begin,
            end,
            order,
            kekule: order,
            in_ring: false,
        }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.begin, self.end)
    }
    pub fn order(&self) -> BondOrder {
        self.order
    }
    pub fn kekule_order(&self) -> BondOrder {
        self.kekule
    }
    pub fn in_ring(&self) -> bool {
        self.in_ring
    }
    pub fn other(&self, atom: usize) -> usize {
        if self.begin == atom {
            self.end
        } else {
            self.begin
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbor {
    pub atom: u32,
    pub bond: u32,
}

pub(crate) type Adjacency = SmallVec<[Neighbor; 4]>;

/// A sanitized molecule. Immutable once built; the canonical SMILES is
/// computed on first request and cached.
#[derive(Debug, Clone)]
pub struct Molecule {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    adjacency: Vec<Adjacency>,
    rings: Vec<Vec<usize>>,
    fragments: usize,
    canonical: OnceLock<String>,
}

/// Atom as produced by the SMILES reader, before sanitization.
#[derive(Debug, Clone)]
pub(crate) struct RawAtom {
    pub atom: Atom,
    /// True for bracket atoms, whose hydrogen count is given explicitly.
    pub bracket: bool,
    pub position: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct RawBond {
    pub begin: usize,
    pub end: usize,
    pub order: BondOrder,
}

fn build_adjacency(n: usize, bonds: &[Bond]) -> Vec<Adjacency> {
    let mut adj: Vec<Adjacency> = vec![SmallVec::new(); n];
    for (i, b) in bonds.iter().enumerate() {
        adj[b.begin].push(Neighbor {
            atom: b.end as u32,
            bond: i as u32,
        });
        adj[b.end].push(Neighbor {
            atom: b.begin as u32,
            bond: i as u32,
        });
    }
    adj
}

fn count_fragments(adj: &[Adjacency]) -> usize {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for nb in &adj[u] {
                let v = nb.atom as usize;
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    count
}

impl Molecule {
    /// Parses and sanitizes a SMILES string.
    pub fn from_smiles(text: &str) -> Result<Molecule, ParseDiagnostic> {
        super::smiles::parse_smiles(text)
    }

    /// Sanitizes reader output: folds hydrogen atoms into their neighbours,
    /// perceives rings, kekulizes aromatic systems and fills in implicit
    /// hydrogens under the valence model.
    pub(crate) fn sanitize(
        mut raw_atoms: Vec<RawAtom>,
        raw_bonds: Vec<RawBond>,
        input_len: usize,
    ) -> Result<Molecule, ParseDiagnostic> {
        let last = input_len.saturating_sub(1);
        if raw_atoms.is_empty() {
            return Err(ParseDiagnostic::new(0, ParseErrorKind::Empty, "no atoms"));
        }

        // Fold terminal, neutral hydrogen atoms into their heavy neighbour.
        let mut degree = vec![0usize; raw_atoms.len()];
        for b in &raw_bonds {
            degree[b.begin] += 1;
            degree[b.end] += 1;
        }
        let mut drop = vec![false; raw_atoms.len()];
        for b in &raw_bonds {
            for (h, heavy) in [(b.begin, b.end), (b.end, b.begin)] {
                let ha = &raw_atoms[h].atom;
                let hv = &raw_atoms[heavy].atom;
                if ha.element == Element::H
                    && ha.formal_charge == 0
                    && ha.explicit_h == 0
                    && degree[h] == 1
                    && b.order == BondOrder::Single
                    && hv.element != Element::H
                    && !drop[heavy]
                {
                    drop[h] = true;
                }
            }
        }
        let mut remap = vec![usize::MAX; raw_atoms.len()];
        let mut kept = 0;
        for i in 0..raw_atoms.len() {
            if !drop[i] {
                remap[i] = kept;
                kept += 1;
            }
        }
        let mut bonds = Vec::with_capacity(raw_bonds.len());
        for b in &raw_bonds {
            match (drop[b.begin], drop[b.end]) {
                (false, false) => bonds.push(Bond::new(remap[b.begin], remap[b.end], b.order)),
                (true, false) => raw_atoms[b.end].atom.explicit_h += 1,
                (false, true) => raw_atoms[b.begin].atom.explicit_h += 1,
                (true, true) => unreachable!("hydrogen pair folded twice"),
            }
        }
        let positions: Vec<usize> = raw_atoms
            .iter()
            .zip(&drop)
            .filter(|(_, d)| !**d)
            .map(|(r, _)| r.position.min(last))
            .collect();
        let bracket: Vec<bool> = raw_atoms
            .iter()
            .zip(&drop)
            .filter(|(_, d)| !**d)
            .map(|(r, _)| r.bracket)
            .collect();
        let mut atoms: Vec<Atom> = raw_atoms
            .into_iter()
            .zip(drop)
            .filter(|(_, d)| !*d)
            .map(|(r, _)| r.atom)
            .collect();

        let adjacency = build_adjacency(atoms.len(), &bonds);
        let ends: Vec<(usize, usize)> = bonds.iter().map(|b| (b.begin, b.end)).collect();
        let perception = rings::perceive(&ends, &adjacency);
        for (b, in_ring) in bonds.iter_mut().zip(&perception.bond_in_ring) {
            b.in_ring = *in_ring;
            // An implicit bond between aromatic atoms of different rings
            // (biaryl) is an ordinary single bond.
            if b.order == BondOrder::Aromatic && !b.in_ring {
                b.order = BondOrder::Single;
            }
        }
        for ring in &perception.rings {
            for &a in ring {
                atoms[a].ring_sizes.push(ring.len().min(255) as u8);
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            if a.aromatic && a.ring_sizes.is_empty() {
                return Err(ParseDiagnostic::new(
                    positions[i],
                    ParseErrorKind::Kekulization,
                    format!("aromatic atom '{}' outside a ring", a.element.symbol().to_lowercase()),
                ));
            }
        }

        let need: Vec<bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| a.aromatic && kekule::needs_double(a, &adjacency[i], &bonds))
            .collect();
        if let Err(stuck) = kekule::assign(&need, &adjacency, &mut bonds) {
            return Err(ParseDiagnostic::new(
                positions[stuck],
                ParseErrorKind::Kekulization,
                "aromatic system has no Kekulé structure",
            ));
        }

        for i in 0..atoms.len() {
            let sum: u32 = adjacency[i]
                .iter()
                .map(|nb| bonds[nb.bond as usize].kekule.valence() as u32)
                .sum();
            let a = &mut atoms[i];
            if !a.element.has_valence_model() {
                continue;
            }
            let allowed = a.element.allowed_valences(a.formal_charge);
            let held = sum + a.explicit_h as u32;
            if bracket[i] {
                if !allowed.iter().any(|&v| v as u32 == held) {
                    return Err(ParseDiagnostic::new(
                        positions[i],
                        ParseErrorKind::Valence,
                        format!("{} with valence {held} not allowed", a.element),
                    ));
                }
            } else {
                match allowed.iter().map(|&v| v as u32).find(|&v| v >= held) {
                    Some(v) => a.implicit_h = (v - held) as u8,
                    None => {
                        return Err(ParseDiagnostic::new(
                            positions[i],
                            ParseErrorKind::Valence,
                            format!("{} with valence {held} exceeds the maximum", a.element),
                        ))
                    }
                }
            }
        }

        let fragments = count_fragments(&adjacency);
        Ok(Molecule {
            atoms,
            bonds,
            adjacency,
            rings: perception.rings,
            fragments,
            canonical: OnceLock::new(),
        })
    }

    /// Rebuilds derived data for a graph whose hydrogens and Kekulé orders
    /// are already consistent (subgraphs, fragments, relabelings).
    pub(crate) fn assemble(mut atoms: Vec<Atom>, mut bonds: Vec<Bond>) -> Molecule {
        let adjacency = build_adjacency(atoms.len(), &bonds);
        let ends: Vec<(usize, usize)> = bonds.iter().map(|b| (b.begin, b.end)).collect();
        let perception = rings::perceive(&ends, &adjacency);
        for (b, in_ring) in bonds.iter_mut().zip(&perception.bond_in_ring) {
            b.in_ring = *in_ring;
        }
        for a in atoms.iter_mut() {
            a.ring_sizes.clear();
        }
        for ring in &perception.rings {
            for &a in ring {
                atoms[a].ring_sizes.push(ring.len().min(255) as u8);
            }
        }
        let fragments = count_fragments(&adjacency);
        Molecule {
            atoms,
            bonds,
            adjacency,
            rings: perception.rings,
            fragments,
            canonical: OnceLock::new(),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }
    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }
    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }
    pub fn bond(&self, i: usize) -> &Bond {
        &self.bonds[i]
    }
    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }
    pub fn num_bonds(&self) -> usize {
        self.bonds.len()
    }
    pub fn neighbors(&self, atom: usize) -> &[Neighbor] {
        &self.adjacency[atom]
    }
    /// Number of explicit graph neighbours (heavy atoms and dummies).
    pub fn degree(&self, atom: usize) -> usize {
        self.adjacency[atom].len()
    }
    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a]
            .iter()
            .find(|nb| nb.atom as usize == b)
            .map(|nb| nb.bond as usize)
    }
    /// Minimum cycle basis, each ring as a closed walk of atom indices.
    pub fn rings(&self) -> &[Vec<usize>] {
        &self.rings
    }
    pub fn fragment_count(&self) -> usize {
        self.fragments
    }
    /// False when the source contained the '.' disconnect.
    pub fn is_connected(&self) -> bool {
        self.fragments <= 1
    }
    /// Atoms other than dummy attachment points.
    pub fn heavy_atom_count(&self) -> usize {
        self.atoms.iter().filter(|a| !a.element.is_dummy()).count()
    }
    /// Sum of Kekulé bond orders at an atom.
    pub fn bond_order_sum(&self, atom: usize) -> u32 {
        self.adjacency[atom]
            .iter()
            .map(|nb| self.bonds[nb.bond as usize].kekule.valence() as u32)
            .sum()
    }

    pub fn canonical_smiles(&self) -> &str {
        self.canonical.get_or_init(|| canon::canonical_smiles(self))
    }

    /// A copy whose bond orders are the Kekulé assignment. Aromatic atom
    /// flags are kept as annotations.
    pub fn kekulize(&self) -> Molecule {
        let bonds = self
            .bonds
            .iter()
            .map(|b| Bond {
                order: b.kekule,
                ..b.clone()
            })
            .collect();
        Molecule {
            atoms: self.atoms.clone(),
            bonds,
            adjacency: self.adjacency.clone(),
            rings: self.rings.clone(),
            fragments: self.fragments,
            canonical: OnceLock::new(),
        }
    }

    /// The same molecule with atom `i` moved to position `order[i]`.
    pub fn renumbered(&self, order: &[usize]) -> Molecule {
        assert_eq!(order.len(), self.atoms.len(), "permutation length");
        let mut atoms = vec![Atom::new(Element::C); self.atoms.len()];
        for (i, a) in self.atoms.iter().enumerate() {
            atoms[order[i]] = a.clone();
        }
        let bonds = self
            .bonds
            .iter()
            .map(|b| Bond {
                begin: order[b.begin],
                end: order[b.end],
                ..b.clone()
            })
            .collect();
        Molecule::assemble(atoms, bonds)
    }

    /// Induced subgraph on `keep`. Atoms that lose bonds gain hydrogens so
    /// their valence is unchanged.
    pub fn subgraph(&self, keep: &[bool]) -> Molecule {
        let mut remap = vec![usize::MAX; self.atoms.len()];
        let mut atoms = Vec::new();
        for (i, a) in self.atoms.iter().enumerate() {
            if keep[i] {
                remap[i] = atoms.len();
                atoms.push(a.clone());
            }
        }
        let mut bonds = Vec::new();
        for b in &self.bonds {
            match (keep[b.begin], keep[b.end]) {
                (true, true) => bonds.push(Bond {
                    begin: remap[b.begin],
                    end: remap[b.end],
                    ..b.clone()
                }),
                (true, false) => atoms[remap[b.begin]].explicit_h += b.kekule.valence(),
                (false, true) => atoms[remap[b.end]].explicit_h += b.kekule.valence(),
                (false, false) => {}
            }
        }
        Molecule::assemble(atoms, bonds)
    }

    /// Connected components as separate molecules, in order of lowest atom index.
    pub fn components(&self) -> Vec<Molecule> {
        if self.fragments <= 1 {
            return vec![self.clone()];
        }
        let n = self.atoms.len();
        let mut comp = vec![usize::MAX; n];
        let mut k = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = k;
            while let Some(u) = stack.pop() {
                for nb in &self.adjacency[u] {
                    let v = nb.atom as usize;
                    if comp[v] == usize::MAX {
                        comp[v] = k;
                        stack.push(v);
                    }
                }
            }
            k += 1;
        }
        (0..k)
            .map(|c| {
                let keep: Vec<bool> = comp.iter().map(|&x| x == c).collect();
                self.subgraph(&keep)
            })
            .collect()
    }

    /// Copy with every hydrogen made an explicit atom bonded to its heavy
    /// atom, as needed by query atoms that name hydrogen directly.
    pub fn with_explicit_hydrogens(&self) -> Molecule {
        let mut atoms = self.atoms.clone();
        let mut bonds = self.bonds.clone();
        for i in 0..self.atoms.len() {
            let h = self.atoms[i].total_h();
            atoms[i].explicit_h = 0;
            atoms[i].implicit_h = 0;
            for _ in 0..h {
                let idx = atoms.len();
                atoms.push(Atom::new(Element::H));
                bonds.push(Bond::new(i, idx, BondOrder::Single));
            }
        }
        Molecule::assemble(atoms, bonds)
    }
}
