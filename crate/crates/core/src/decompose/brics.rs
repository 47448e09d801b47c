//! BRICS fragmentation.
//!
//! The rule table lists link-atom environments and the pairs of
//! environments whose connecting acyclic bond is cut. Each severed end is
//! capped with a dummy atom labelled by the link type of the atom it caps.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::chem::{Atom, Bond, BondOrder, Element, Molecule};
use crate::substructure::{parse_pattern, PackError, Pattern, Target};

const BRICS_TEXT: &str = include_str!("../../data/brics.txt");

/// A link-atom environment: the link atom is query atom 0 of `pattern`.
#[derive(Debug, Clone)]
pub struct LinkEnvironment {
    pub name: String,
    /// Label written on dummy atoms that cap this environment.
    pub label: u16,
    pub pattern: Pattern,
    pub exclude: Vec<Pattern>,
}

impl LinkEnvironment {
    pub fn matches_at(&self, target: &Target, atom: usize) -> bool {
        self.pattern.matches_at(target, atom) && !self.exclude.iter().any(|x| x.matches_at(target, atom))
    }
}

#[derive(Debug, Clone)]
pub struct CleavageRule {
    pub left: LinkEnvironment,
    pub right: LinkEnvironment,
    pub order: BondOrder,
    /// `"L1-L3"` style identifier.
    pub rule_id: String,
}

#[derive(Debug, Clone)]
pub struct BricsRules {
    pub environments: Vec<LinkEnvironment>,
    pub rules: Vec<CleavageRule>,
}

/// One bond selected for cleavage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BricsBond {
    pub bond: usize,
    /// (atom, label) for each side.
    pub ends: [(usize, u16); 2],
}

impl BricsRules {
    pub fn parse(text: &str) -> Result<BricsRules, PackError> {
        let mut environments: Vec<LinkEnvironment> = Vec::new();
        let mut by_name: HashMap<String, usize> = HashMap::new();
        let mut rules = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let bad = |message: String| PackError::Line { line, message };
            let pat = |s: &str| parse_pattern(s).map_err(|source| PackError::Pattern { line, source });
            let cols: Vec<&str> = raw.split('\t').collect();
            match cols.as_slice() {
                ["ENV", name, label, pattern, rest @ ..] => {
                    let label = label.parse().map_err(|_| bad(format!("bad label '{label}'")))?;
                    let mut exclude = Vec::new();
                    for x in rest {
                        let p = x.strip_prefix("exclude=").ok_or_else(|| bad(format!("unknown column '{x}'")))?;
                        exclude.push(pat(p)?);
                    }
                    if by_name.insert(name.to_string(), environments.len()).is_some() {
                        return Err(bad(format!("duplicate environment '{name}'")));
                    }
                    environments.push(LinkEnvironment {
                        name: name.to_string(),
                        label,
                        pattern: pat(pattern)?,
                        exclude,
                    });
                }
                ["RULE", left, right, bond] => {
                    let env = |n: &str| {
                        by_name
                            .get(n)
                            .map(|&i| environments[i].clone())
                            .ok_or_else(|| bad(format!("unknown environment '{n}'")))
                    };
                    let order = match *bond {
                        "-" => BondOrder::Single,
                        "=" => BondOrder::Double,
                        _ => return Err(bad(format!("bad bond '{bond}'"))),
                    };
                    rules.push(CleavageRule {
                        left: env(left)?,
                        right: env(right)?,
                        order,
                        rule_id: format!("{left}-{right}"),
                    });
                }
                _ => return Err(bad("expected an ENV or RULE line".to_string())),
            }
        }
        Ok(BricsRules { environments, rules })
    }

    /// The bundled rule table.
    pub fn standard() -> &'static BricsRules {
        static RULES: OnceLock<BricsRules> = OnceLock::new();
        RULES.get_or_init(|| BricsRules::parse(BRICS_TEXT).expect("bundled BRICS table parses"))
    }

    /// Bonds to cut, in bond order. When several rules match a bond the
    /// first in table order decides the labels.
    pub fn find_bonds(&self, mol: &Molecule) -> Vec<BricsBond> {
        let target = Target::new(mol);
        let n = mol.num_atoms();
        let mut env_hits: HashMap<&str, Vec<bool>> = HashMap::new();
        for e in &self.environments {
            let hits = (0..n).map(|a| e.matches_at(&target, a)).collect();
            env_hits.insert(e.name.as_str(), hits);
        }
        let mut out = Vec::new();
        for (b, bond) in mol.bonds().iter().enumerate() {
            if bond.in_ring() {
                continue;
            }
            let (x, y) = bond.endpoints();
            for r in &self.rules {
                if bond.order() != r.order {
                    continue;
                }
                let l = &env_hits[r.left.name.as_str()];
                let rt = &env_hits[r.right.name.as_str()];
                let ends = if l[x] && rt[y] {
                    Some([(x, r.left.label), (y, r.right.label)])
                } else if l[y] && rt[x] {
                    Some([(x, r.right.label), (y, r.left.label)])
                } else {
                    None
                };
                if let Some(ends) = ends {
                    out.push(BricsBond { bond: b, ends });
                    break;
                }
            }
        }
        out
    }

    /// The molecule with every selected bond replaced by two capped ends.
    pub fn cleave(&self, mol: &Molecule) -> Molecule {
        let cuts = self.find_bonds(mol);
        let mut atoms: Vec<Atom> = mol.atoms().to_vec();
        let mut cut = vec![false; mol.num_bonds()];
        let mut bonds: Vec<Bond> = Vec::with_capacity(mol.num_bonds() + cuts.len());
        for c in &cuts {
            cut[c.bond] = true;
        }
        for (b, bond) in mol.bonds().iter().enumerate() {
            if !cut[b] {
                bonds.push(bond.clone());
            }
        }
        for c in &cuts {
            let order = mol.bond(c.bond).order();
            for &(atom, label) in &c.ends {
                let mut dummy = Atom::new(Element::DUMMY);
                dummy.label = label;
                let idx = atoms.len();
                atoms.push(dummy);
                bonds.push(Bond::new(atom, idx, order));
            }
        }
        Molecule::assemble(atoms, bonds)
    }
}

/// Canonical strings of the BRICS fragments, sorted. A molecule with no
/// cleavable bond is its own single fragment.
pub fn brics_fragments(mol: &Molecule) -> Vec<String> {
    let cleaved = BricsRules::standard().cleave(mol);
    let mut out: Vec<String> = cleaved
        .components()
        .iter()
        .map(|m| m.canonical_smiles().to_string())
        .collect();
    out.sort();
    out
}
