//! Counting descriptors: weight, rotatable bonds, donors, acceptors,
//! aromatic rings and polar surface area.

use std::sync::OnceLock;

use crate::chem::{BondOrder, Element, Molecule};
use crate::substructure::{parse_pattern, Pattern, Target};

/// Average molecular weight including all hydrogens.
pub fn molecular_weight(mol: &Molecule) -> f64 {
    mol.atoms()
        .iter()
        .map(|a| a.element().weight() + a.total_h() as f64 * Element::H.weight())
        .sum()
}

fn is_amide_cn(mol: &Molecule, c: usize, n: usize) -> bool {
    mol.atom(c).element() == Element::C
        && mol.atom(n).element() == Element::N
        && mol.neighbors(c).iter().any(|nb| {
            mol.atom(nb.atom as usize).element() == Element::O
                && mol.bond(nb.bond as usize).order() == BondOrder::Double
        })
}

/// Acyclic single bonds between atoms that each have at least two heavy
/// neighbours, not counting amide C–N bonds.
pub fn rotatable_bonds(mol: &Molecule) -> usize {
    let heavy_degree = |i: usize| {
        mol.neighbors(i)
            .iter()
            .filter(|nb| mol.atom(nb.atom as usize).element() != Element::H)
            .count()
    };
    mol.bonds()
        .iter()
        .filter(|b| {
            let (x, y) = b.endpoints();
            b.order() == BondOrder::Single
                && !b.in_ring()
                && heavy_degree(x) >= 2
                && heavy_degree(y) >= 2
                && !is_amide_cn(mol, x, y)
                && !is_amide_cn(mol, y, x)
        })
        .count()
}

fn has_triple(mol: &Molecule, i: usize) -> bool {
    mol.neighbors(i)
        .iter()
        .any(|nb| mol.bond(nb.bond as usize).order() == BondOrder::Triple)
}

/// Trihalomethyl or tert-butyl centre: turning it does not change the shape.
fn is_symmetric_top(mol: &Molecule, i: usize) -> bool {
    if mol.atom(i).element() != Element::C {
        return false;
    }
    let nbrs = mol.neighbors(i);
    for e in [Element::F, Element::CL, Element::BR] {
        if nbrs.iter().filter(|nb| mol.atom(nb.atom as usize).element() == e).count() == 3 {
            return true;
        }
    }
    nbrs.iter()
        .filter(|nb| {
            let a = mol.atom(nb.atom as usize);
            a.element() == Element::C && mol.degree(nb.atom as usize) == 1 && a.total_h() == 3
        })
        .count()
        == 3
}

/// C(=X)-Y bond of an amide, ester, thioester or amidinium: `c` is a
/// three-connected carbon double-bonded to N, O or S and `y` a non-terminal
/// N, O or S.
fn is_conjugated_acyl(mol: &Molecule, c: usize, y: usize) -> bool {
    let (ca, ya) = (mol.atom(c), mol.atom(y));
    if ca.element() != Element::C || mol.degree(c) != 3 || mol.degree(y) < 2 {
        return false;
    }
    let double_to = |e: &[Element], charged: bool| {
        mol.neighbors(c).iter().any(|nb| {
            let a = mol.atom(nb.atom as usize);
            nb.atom as usize != y
                && mol.bond(nb.bond as usize).order() == BondOrder::Double
                && e.contains(&a.element())
                && (!charged || a.formal_charge() == 1)
        })
    };
    match ya.element() {
        Element::N | Element::O | Element::S => {
            double_to(&[Element::N, Element::O, Element::S], false)
                || (ya.element() == Element::N && double_to(&[Element::N], true))
        }
        _ => false,
    }
}

/// Rotatable bonds under the stricter convention used by the drug-likeness
/// score: additionally excludes bonds at triple-bonded atoms, at
/// trihalomethyl and tert-butyl centres, and amide, ester and thioester
/// C–X bonds.
pub fn rotatable_bonds_strict(mol: &Molecule) -> usize {
    mol.bonds()
        .iter()
        .filter(|b| {
            let (x, y) = b.endpoints();
            b.order() == BondOrder::Single
                && !b.in_ring()
                && mol.degree(x) >= 2
                && mol.degree(y) >= 2
                && !has_triple(mol, x)
                && !has_triple(mol, y)
                && !is_symmetric_top(mol, x)
                && !is_symmetric_top(mol, y)
                && !is_conjugated_acyl(mol, x, y)
                && !is_conjugated_acyl(mol, y, x)
        })
        .count()
}

/// Hydrogen-bond donors: N, O, S bearing hydrogen.
pub fn h_bond_donors(mol: &Molecule) -> usize {
    (0..mol.num_atoms())
        .filter(|&i| {
            let a = mol.atom(i);
            if a.total_h() == 0 {
                return false;
            }
            let v = mol.bond_order_sum(i) + a.total_h() as u32;
            match a.element() {
                Element::N if a.is_aromatic() => a.formal_charge() == 0,
                Element::N => (a.formal_charge() == 0 && v == 3) || (a.formal_charge() == 1 && v == 4),
                Element::O | Element::S => a.formal_charge() == 0 && a.total_h() == 1,
                _ => false,
            }
        })
        .count()
}

const ACCEPTORS: [&str; 10] = [
    "[oH0;X2]",
    "[OH1;X2;v2]",
    "[OH0;X2;v2]",
    "[OH0;X1;v2]",
    "[O-;X1]",
    "[SH0;X2;v2]",
    "[SH0;X1;v2]",
    "[S-;X1]",
    "[nH0;X2]",
    "[NH0;X1;v3]",
];

struct AcceptorPatterns {
    simple: Vec<Pattern>,
    amine: Pattern,
    amine_exclude: Pattern,
}

fn acceptor_patterns() -> &'static AcceptorPatterns {
    static P: OnceLock<AcceptorPatterns> = OnceLock::new();
    P.get_or_init(|| AcceptorPatterns {
        simple: ACCEPTORS.iter().map(|s| parse_pattern(s).expect("acceptor pattern")).collect(),
        amine: parse_pattern("[N;+0;X3;v3]").expect("acceptor pattern"),
        amine_exclude: parse_pattern("N[C,S]=O").expect("acceptor pattern"),
    })
}

/// Hydrogen-bond acceptors under the drug-likeness score's definition.
pub fn h_bond_acceptors(mol: &Molecule) -> usize {
    let p = acceptor_patterns();
    let target = Target::new(mol);
    (0..mol.num_atoms())
        .filter(|&i| {
            p.simple.iter().any(|x| x.matches_at(&target, i))
                || (p.amine.matches_at(&target, i) && !p.amine_exclude.matches_at(&target, i))
        })
        .count()
}

/// Basis rings whose atoms are all aromatic.
pub fn aromatic_rings(mol: &Molecule) -> usize {
    mol.rings()
        .iter()
        .filter(|r| r.iter().all(|&a| mol.atom(a).is_aromatic()))
        .count()
}

#[derive(Debug, Clone)]
struct PsaRow {
    element: Element,
    aromatic: bool,
    h: u8,
    charge: i8,
    bonds: [u8; 4],
    ring3: Option<bool>,
    value: f64,
}

const TPSA_TEXT: &str = include_str!("../../data/tpsa.txt");

fn psa_table() -> &'static [PsaRow] {
    static T: OnceLock<Vec<PsaRow>> = OnceLock::new();
    T.get_or_init(|| {
        TPSA_TEXT
            .lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
            .map(|l| {
                let c: Vec<&str> = l.split('\t').collect();
                let n = |i: usize| c[i].parse::<u8>().expect("tpsa column");
                PsaRow {
                    element: Element::from_symbol(c[0]).expect("tpsa element"),
                    aromatic: c[1] == "1",
                    h: n(2),
                    charge: c[3].parse().expect("tpsa charge"),
                    bonds: [n(4), n(5), n(6), n(7)],
                    ring3: match c[8] {
                        "*" => None,
                        x => Some(x == "1"),
                    },
                    value: c[9].parse().expect("tpsa value"),
                }
            })
            .collect()
    })
}

/// Polar surface area contribution of one atom (zero for elements other
/// than N and O).
pub fn psa_contribution(mol: &Molecule, i: usize) -> f64 {
    let a = mol.atom(i);
    if !matches!(a.element(), Element::N | Element::O) {
        return 0.0;
    }
    let mut bonds = [0u8; 4];
    let mut h = a.total_h();
    for nb in mol.neighbors(i) {
        if mol.atom(nb.atom as usize).element() == Element::H {
            h += 1;
            continue;
        }
        let k = match mol.bond(nb.bond as usize).order() {
            BondOrder::Single => 0,
            BondOrder::Double => 1,
            BondOrder::Triple => 2,
            BondOrder::Aromatic => 3,
        };
        bonds[k] += 1;
    }
    let ring3 = a.ring_sizes().contains(&3);
    let row = psa_table().iter().find(|r| {
        r.element == a.element()
            && r.aromatic == a.is_aromatic()
            && r.h == h
            && r.charge == a.formal_charge()
            && r.bonds == bonds
            && r.ring3.is_none_or(|x| x == ring3)
    });
    match row {
        Some(r) => r.value,
        None => {
            let heavy = bonds.iter().map(|&b| b as f64).sum::<f64>();
            let v = match a.element() {
                Element::N => 30.5 - heavy * 8.2 + h as f64 * 1.5,
                _ => 28.5 - heavy * 8.6 + h as f64 * 1.5,
            };
            v.max(0.0)
        }
    }
}

/// Topological polar surface area over N and O atoms.
pub fn tpsa(mol: &Molecule) -> f64 {
    (0..mol.num_atoms()).map(|i| psa_contribution(mol, i)).sum()
}
