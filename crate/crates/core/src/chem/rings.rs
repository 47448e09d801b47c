//! Ring perception: bridge detection for ring membership and a minimum cycle
//! basis (Horton candidate set reduced by GF(2) elimination) for ring sizes.

use std::collections::VecDeque;

use super::molecule::Neighbor;

pub(crate) struct RingPerception {
    pub bond_in_ring: Vec<bool>,
    pub rings: Vec<Vec<usize>>,
}

/// Marks every bond that is not a bridge. Iterative lowlink DFS.
fn ring_bonds(n_bonds: usize, adj: &[impl AsRef<[Neighbor]>]) -> Vec<bool> {
    let n = adj.len();
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut in_ring = vec![true; n_bonds];
    let mut time = 0u32;
    // (atom, bond used to enter, next neighbor cursor)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != u32::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (u, via, ref mut cursor)) = stack.last_mut() {
            let nbrs = adj[u].as_ref();
            if *cursor < nbrs.len() {
                let nb = nbrs[*cursor];
                *cursor += 1;
                let (v, b) = (nb.atom as usize, nb.bond as usize);
                if b == via {
                    continue;
                }
                if disc[v] == u32::MAX {
                    disc[v] = time;
                    low[v] = time;
                    time += 1;
                    stack.push((v, b, 0));
                } else {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] > disc[p] {
                        in_ring[via] = false;
                    }
                }
            }
        }
    }
    in_ring
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    len: usize,
    edges: Vec<u64>,
    atoms: Vec<usize>,
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn leading_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

pub(crate) fn perceive(ends: &[(usize, usize)], adj: &[impl AsRef<[Neighbor]>]) -> RingPerception {
    let n = adj.len();
    let n_bonds = ends.len();
    let bond_in_ring = ring_bonds(n_bonds, adj);
    let ring_bond_ids: Vec<usize> = (0..n_bonds).filter(|&b| bond_in_ring[b]).collect();
    if ring_bond_ids.is_empty() {
        return RingPerception {
            bond_in_ring,
            rings: Vec::new(),
        };
    }
    // Compact index for ring bonds so edge sets are dense bit vectors.
    let mut compact = vec![usize::MAX; n_bonds];
    for (i, &b) in ring_bond_ids.iter().enumerate() {
        compact[b] = i;
    }
    let words = ring_bond_ids.len().div_ceil(64);
    let ring_atoms: Vec<usize> = (0..n)
        .filter(|&a| {
            adj[a]
                .as_ref()
                .iter()
                .any(|nb| bond_in_ring[nb.bond as usize])
        })
        .collect();

    // Cyclomatic number of the ring-bond subgraph.
    let mut comp = vec![usize::MAX; n];
    let mut n_comp = 0;
    for &a in &ring_atoms {
        if comp[a] != usize::MAX {
            continue;
        }
        let mut q = vec![a];
        comp[a] = n_comp;
        while let Some(u) = q.pop() {
            for nb in adj[u].as_ref() {
                let v = nb.atom as usize;
                if bond_in_ring[nb.bond as usize] && comp[v] == usize::MAX {
                    comp[v] = n_comp;
                    q.push(v);
                }
            }
        }
        n_comp += 1;
    }
    let basis_size = ring_bond_ids.len() + n_comp - ring_atoms.len();

    // Horton candidates: for each root v and ring bond (x, y), the cycle
    // P(v,x) + xy + P(y,v) when the two tree paths meet only at v.
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut dist = vec![u32::MAX; n];
    let mut parent = vec![(usize::MAX, usize::MAX); n];
    let mut queue = VecDeque::new();
    let mut mark = vec![usize::MAX; n];
    for &v in &ring_atoms {
        for &a in &ring_atoms {
            dist[a] = u32::MAX;
            parent[a] = (usize::MAX, usize::MAX);
        }
        dist[v] = 0;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            for nb in adj[u].as_ref() {
                let (w, b) = (nb.atom as usize, nb.bond as usize);
                if bond_in_ring[b] && dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = (u, b);
                    queue.push_back(w);
                }
            }
        }
        for &b in &ring_bond_ids {
            let (x, y) = ends[b];
            if dist[x] == u32::MAX || dist[y] == u32::MAX {
                continue;
            }
            if parent[x].1 == b || parent[y].1 == b {
                continue;
            }
            let path = |mut a: usize| {
                let mut atoms = vec![a];
                let mut bonds = Vec::new();
                while a != v {
                    let (p, pb) = parent[a];
                    bonds.push(pb);
                    atoms.push(p);
                    a = p;
                }
                (atoms, bonds)
            };
            let (px, bx) = path(x);
            let (py, by) = path(y);
            let stamp = v * n_bonds + b;
            for &a in &px[..px.len() - 1] {
                mark[a] = stamp;
            }
            if py[..py.len() - 1].iter().any(|&a| mark[a] == stamp) {
                continue;
            }
            let mut edges = vec![0u64; words];
            for &e in bx.iter().chain(by.iter()).chain(std::iter::once(&b)) {
                let c = compact[e];
                edges[c / 64] |= 1 << (c % 64);
            }
            let mut atoms: Vec<usize> = px.into_iter().rev().collect();
            atoms.extend(py[..py.len() - 1].iter().copied());
            candidates.push(Candidate {
                len: atoms.len(),
                edges,
                atoms,
            });
        }
    }
    candidates.sort_by(|a, b| a.len.cmp(&b.len).then_with(|| a.edges.cmp(&b.edges)));
    candidates.dedup_by(|a, b| a.edges == b.edges);

    // Greedy selection of the shortest independent cycles.
    let mut reduced: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut rings = Vec::with_capacity(basis_size);
    for cand in candidates {
        if rings.len() == basis_size {
            break;
        }
        let mut v = cand.edges.clone();
        while let Some(lead) = leading_bit(&v) {
            match reduced.iter().find(|(p, _)| *p == lead) {
                Some((_, r)) => xor_into(&mut v, r),
                None => break,
            }
        }
        if let Some(lead) = leading_bit(&v) {
            reduced.push((lead, v));
            rings.push(cand.atoms);
        }
    }
    RingPerception {
        bond_in_ring,
        rings,
    }
}
