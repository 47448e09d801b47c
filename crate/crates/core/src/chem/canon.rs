//! Canonical atom ranking and SMILES writing.
//!
//! Ranks start from an atom invariant and are refined by neighbour ranks
//! until stable. Remaining ties are broken by individualizing an atom of the
//! first non-trivial cell and refining again; the search keeps the labeling
//! with the smallest certificate, pruning branches proven equivalent by
//! identical greedy leaves.

use smallvec::SmallVec;

use super::element::Element;
use super::molecule::{Atom, BondOrder, Molecule};

/// Aromatic as it will be written: flagged and carrying an aromatic bond.
fn writes_aromatic(mol: &Molecule, i: usize) -> bool {
    mol.atom(i).is_aromatic()
        && mol
            .neighbors(i)
            .iter()
            .any(|nb| mol.bond(nb.bond as usize).order() == BondOrder::Aromatic)
}

fn invariant(mol: &Molecule, i: usize) -> u64 {
    let a = mol.atom(i);
    (a.element().atomic_number() as u64) << 48
        | (mol.degree(i).min(255) as u64) << 40
        | ((a.formal_charge() as i16 + 128) as u64) << 32
        | (a.total_h() as u64) << 24
        | (a.in_ring() as u64) << 17
        | (writes_aromatic(mol, i) as u64) << 16
        | a.label() as u64
}

/// Position-based ranks: every member of a cell gets the index of the
/// cell's first slot in sorted order.
struct Ranker<'a> {
    mol: &'a Molecule,
    inv: Vec<u64>,
}

impl<'a> Ranker<'a> {
    fn new(mol: &'a Molecule) -> Self {
        let inv = (0..mol.num_atoms()).map(|i| invariant(mol, i)).collect();
        Ranker { mol, inv }
    }

    fn initial(&self) -> Vec<u32> {
        let n = self.inv.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.inv[i]);
        let mut ranks = vec![0u32; n];
        for k in 0..n {
            ranks[order[k]] = if k > 0 && self.inv[order[k]] == self.inv[order[k - 1]] {
                ranks[order[k - 1]]
            } else {
                k as u32
            };
        }
        self.refine(&mut ranks);
        ranks
    }

    fn cell_count(ranks: &[u32]) -> usize {
        let mut seen = vec![false; ranks.len()];
        let mut c = 0;
        for &r in ranks {
            if !seen[r as usize] {
                seen[r as usize] = true;
                c += 1;
            }
        }
        c
    }

    fn refine(&self, ranks: &mut [u32]) {
        let n = ranks.len();
        let mut cells = Self::cell_count(ranks);
        let mut order: Vec<usize> = (0..n).collect();
        let mut keys: Vec<SmallVec<[u64; 6]>> = vec![SmallVec::new(); n];
        while cells < n {
            for (i, key) in keys.iter_mut().enumerate() {
                key.clear();
                for nb in self.mol.neighbors(i) {
                    let code = self.mol.bond(nb.bond as usize).order().code() as u64;
                    key.push((ranks[nb.atom as usize] as u64) << 8 | code);
                }
                key.sort_unstable();
            }
            order.sort_by(|&a, &b| ranks[a].cmp(&ranks[b]).then_with(|| keys[a].cmp(&keys[b])));
            let mut next = vec![0u32; n];
            for k in 0..n {
                let (cur, prev) = (order[k], order[k.saturating_sub(1)]);
                next[cur] = if k > 0 && ranks[cur] == ranks[prev] && keys[cur] == keys[prev] {
                    next[prev]
                } else {
                    k as u32
                };
            }
            let count = Self::cell_count(&next);
            ranks.copy_from_slice(&next);
            if count == cells {
                break;
            }
            cells = count;
        }
    }

    fn individualize(&self, ranks: &[u32], x: usize) -> Vec<u32> {
        let r = ranks[x];
        let mut out: Vec<u32> = ranks
            .iter()
            .enumerate()
            .map(|(i, &q)| if q == r && i != x { r + 1 } else { q })
            .collect();
        self.refine(&mut out);
        out
    }

    /// Members of the lowest-ranked cell with more than one atom.
    fn target_cell(ranks: &[u32]) -> Option<Vec<usize>> {
        let n = ranks.len();
        let mut size = vec![0u32; n];
        for &r in ranks {
            size[r as usize] += 1;
        }
        let r = (0..n).find(|&r| size[r] > 1)? as u32;
        Some((0..n).filter(|&i| ranks[i] == r).collect())
    }

    fn greedy_leaf(&self, mut ranks: Vec<u32>) -> Vec<u32> {
        while let Some(cell) = Self::target_cell(&ranks) {
            ranks = self.individualize(&ranks, cell[0]);
        }
        ranks
    }

    fn certificate(&self, labels: &[u32]) -> Vec<u64> {
        let n = labels.len();
        let mut by_label = vec![0usize; n];
        for (i, &l) in labels.iter().enumerate() {
            by_label[l as usize] = i;
        }
        let mut cert: Vec<u64> = by_label.iter().map(|&i| self.inv[i]).collect();
        let mut edges: Vec<u64> = self
            .mol
            .bonds()
            .iter()
            .map(|b| {
                let (x, y) = b.endpoints();
                let (p, q) = (labels[x].min(labels[y]), labels[x].max(labels[y]));
                (p as u64) << 36 | (q as u64) << 8 | b.order().code() as u64
            })
            .collect();
        edges.sort_unstable();
        cert.extend(edges);
        cert
    }

    fn search(&self, ranks: Vec<u32>) -> (Vec<u64>, Vec<u32>) {
        let Some(cell) = Self::target_cell(&ranks) else {
            return (self.certificate(&ranks), ranks);
        };
        let mut branches: Vec<(Vec<u64>, Vec<u32>)> = cell
            .iter()
            .map(|&x| {
                let child = self.individualize(&ranks, x);
                let leaf = self.greedy_leaf(child.clone());
                (self.certificate(&leaf), child)
            })
            .collect();
        // Equal greedy leaves prove the branch roots lie in one orbit.
        branches.sort_by(|a, b| a.0.cmp(&b.0));
        branches.dedup_by(|a, b| a.0 == b.0);
        branches
            .into_iter()
            .map(|(_, child)| self.search(child))
            .min_by(|a, b| a.0.cmp(&b.0))
            .expect("non-empty cell")
    }
}

/// Canonical labels (a permutation of `0..n`) for a molecule.
pub fn canonical_ranks(mol: &Molecule) -> Vec<u32> {
    if mol.num_atoms() == 0 {
        return Vec::new();
    }
    let ranker = Ranker::new(mol);
    let start = ranker.initial();
    ranker.search(start).1
}

/// Symmetry classes after refinement only: atoms with equal values are
/// indistinguishable by neighbourhood invariants.
pub fn symmetry_classes(mol: &Molecule) -> Vec<u32> {
    if mol.num_atoms() == 0 {
        return Vec::new();
    }
    Ranker::new(mol).initial()
}

pub(crate) fn canonical_smiles(mol: &Molecule) -> String {
    if mol.num_atoms() == 0 {
        return String::new();
    }
    if !mol.is_connected() {
        let mut parts: Vec<String> = mol
            .components()
            .iter()
            .map(|c| c.canonical_smiles().to_string())
            .collect();
        parts.sort();
        return parts.join(".");
    }
    let ranks = canonical_ranks(mol);
    write_smiles(mol, &ranks)
}

/// Writes a SMILES string visiting atoms by ascending `priority`: each
/// component starts at its lowest-priority atom and neighbours are explored
/// in priority order. With canonical ranks this is the canonical SMILES; with
/// a random permutation it yields a random valid SMILES of the same molecule.
pub fn write_smiles<P: Copy + Ord>(mol: &Molecule, priority: &[P]) -> String {
    assert_eq!(priority.len(), mol.num_atoms(), "priority length");
    let n = mol.num_atoms();
    let mut writer = Writer {
        mol,
        priority,
        visited: vec![false; n],
        closure_seen: vec![false; mol.num_bonds()],
        children: vec![Vec::new(); n],
        opens: vec![Vec::new(); n],
        closes: vec![Vec::new(); n],
        digit_of: vec![0; mol.num_bonds()],
        in_use: [false; 100],
        out: String::new(),
    };
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&i| priority[i]);
    let mut first = true;
    for s in starts {
        if writer.visited[s] {
            continue;
        }
        writer.plan(s, usize::MAX);
        if !first {
            writer.out.push('.');
        }
        first = false;
        writer.emit(s);
    }
    writer.out
}

struct Writer<'a, P> {
    mol: &'a Molecule,
    priority: &'a [P],
    visited: Vec<bool>,
    closure_seen: Vec<bool>,
    children: Vec<Vec<(usize, usize)>>,
    opens: Vec<Vec<usize>>,
    closes: Vec<Vec<usize>>,
    digit_of: Vec<u8>,
    in_use: [bool; 100],
    out: String,
}

impl<P: Copy + Ord> Writer<'_, P> {
    fn sorted_neighbors(&self, u: usize) -> SmallVec<[(usize, usize); 4]> {
        let mut nbrs: SmallVec<[(usize, usize); 4]> = self
            .mol
            .neighbors(u)
            .iter()
            .map(|nb| (nb.atom as usize, nb.bond as usize))
            .collect();
        nbrs.sort_by_key(|&(v, _)| self.priority[v]);
        nbrs
    }

    /// First pass: spanning tree and ring-closure bonds.
    fn plan(&mut self, u: usize, via: usize) {
        self.visited[u] = true;
        for (v, b) in self.sorted_neighbors(u) {
            if b == via {
                continue;
            }
            if self.visited[v] {
                if !self.closure_seen[b] {
                    self.closure_seen[b] = true;
                    self.opens[v].push(b);
                    self.closes[u].push(b);
                }
            } else {
                self.children[u].push((v, b));
                self.plan(v, b);
            }
        }
    }

    fn emit(&mut self, u: usize) {
        let lower = writes_aromatic(self.mol, u);
        atom_token(self.mol, u, lower, &mut self.out);
        let closes = std::mem::take(&mut self.closes[u]);
        for &b in &closes {
            push_digit(&mut self.out, self.digit_of[b]);
        }
        for b in std::mem::take(&mut self.opens[u]) {
            let d = (1..100).find(|&d| !self.in_use[d]).expect("fewer than 100 open rings") as u8;
            self.in_use[d as usize] = true;
            self.digit_of[b] = d;
            let other = self.mol.bond(b).other(u);
            self.out.push_str(bond_symbol(self.mol, b, u, other));
            push_digit(&mut self.out, d);
        }
        for &b in &closes {
            self.in_use[self.digit_of[b] as usize] = false;
        }
        let children = std::mem::take(&mut self.children[u]);
        let last = children.len().saturating_sub(1);
        for (k, &(v, b)) in children.iter().enumerate() {
            let branch = k < last;
            if branch {
                self.out.push('(');
            }
            self.out.push_str(bond_symbol(self.mol, b, u, v));
            self.emit(v);
            if branch {
                self.out.push(')');
            }
        }
    }
}

fn push_digit(out: &mut String, d: u8) {
    if d < 10 {
        out.push((b'0' + d) as char);
    } else {
        out.push('%');
        out.push_str(&d.to_string());
    }
}

fn bond_symbol(mol: &Molecule, b: usize, u: usize, v: usize) -> &'static str {
    match mol.bond(b).order() {
        BondOrder::Single if writes_aromatic(mol, u) && writes_aromatic(mol, v) => "-",
        BondOrder::Single => "",
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
        BondOrder::Aromatic => "",
    }
}

/// Hydrogens the reader would imply for an unbracketed atom in this context.
fn implied_h(atom: &Atom, mol: &Molecule, i: usize, lower: bool) -> Option<u8> {
    let valences = atom.element().allowed_valences(0);
    if lower {
        // Reader view: aromatic bonds count one, then needs_double decides
        // whether a π bond is taken.
        let s0: u32 = mol
            .neighbors(i)
            .iter()
            .map(|nb| mol.bond(nb.bond as usize).order().valence() as u32)
            .sum();
        let target = valences.iter().map(|&v| v as u32).find(|&v| v >= s0)?;
        let needs = target - s0 >= 1;
        let has_double = mol.neighbors(i).iter().any(|nb| {
            let bond = mol.bond(nb.bond as usize);
            bond.order() == BondOrder::Aromatic && bond.kekule_order() == BondOrder::Double
        });
        if needs != has_double {
            return None;
        }
    }
    let held = mol.bond_order_sum(i);
    let v = valences.iter().map(|&v| v as u32).find(|&v| v >= held)?;
    Some((v - held) as u8)
}

fn atom_token(mol: &Molecule, i: usize, lower: bool, out: &mut String) {
    let a = mol.atom(i);
    let e = a.element();
    if e.is_dummy() {
        if a.label() > 0 {
            out.push('[');
            out.push_str(&a.label().to_string());
            out.push_str("*]");
        } else {
            out.push('*');
        }
        return;
    }
    let organic_ok = a.formal_charge() == 0
        && e.is_organic()
        && (!lower || matches!(e, Element::B | Element::C | Element::N | Element::O | Element::P | Element::S))
        && implied_h(a, mol, i, lower) == Some(a.total_h());
    let symbol = if lower {
        e.symbol().to_ascii_lowercase()
    } else {
        e.symbol().to_string()
    };
    if organic_ok {
        out.push_str(&symbol);
        return;
    }
    out.push('[');
    out.push_str(&symbol);
    match a.total_h() {
        0 => {}
        1 => out.push('H'),
        h => {
            out.push('H');
            out.push_str(&h.to_string());
        }
    }
    match a.formal_charge() {
        0 => {}
        1 => out.push('+'),
        -1 => out.push('-'),
        c if c > 0 => {
            out.push('+');
            out.push_str(&c.to_string());
        }
        c => {
            out.push('-');
            out.push_str(&(-c).to_string());
        }
    }
    out.push(']');
}
