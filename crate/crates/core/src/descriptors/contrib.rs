//! Environment-frequency tables and the synthetic-accessibility and
//! natural-product-likeness scores built on them.
//!
//! Table file (little-endian): magic `MOLCTB01`, u32 version, u64 count,
//! then `count` pairs of (u64 environment id, f64 contribution) sorted by id.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::chem::Molecule;
use crate::fingerprints::{morgan_environments, morgan_ids};

const MAGIC: &[u8; 8] = b"MOLCTB01";
const VERSION: u32 = 1;
const RADIUS: u32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum ContributionError {
    #[error("cannot build a contribution table from an empty corpus")]
    EmptyCorpus,
    #[error("malformed contribution table: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Environment identifier to score contribution. Identifiers absent from
/// the table contribute zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContributionTable {
    entries: HashMap<u64, f64>,
}

fn document_frequencies<'a>(corpus: impl IntoIterator<Item = &'a Molecule>) -> (HashMap<u64, u64>, u64) {
    let mut df: HashMap<u64, u64> = HashMap::new();
    let mut n = 0u64;
    for m in corpus {
        n += 1;
        for id in morgan_ids(m, RADIUS) {
            *df.entry(id).or_insert(0) += 1;
        }
    }
    (df, n)
}

/// Contribution of each environment: log10 of the fraction of corpus
/// molecules containing it, offset by 3.
pub fn train_contributions<'a>(
    corpus: impl IntoIterator<Item = &'a Molecule>,
) -> Result<ContributionTable, ContributionError> {
    let (df, n) = document_frequencies(corpus);
    if n == 0 {
        return Err(ContributionError::EmptyCorpus);
    }
    let entries = df
        .into_iter()
        .map(|(id, c)| (id, (c as f64 / n as f64).log10() + 3.0))
        .collect();
    Ok(ContributionTable { entries })
}

/// Log-odds of each environment between a natural-product corpus and a
/// synthetic corpus, with add-one smoothing on counts.
pub fn train_np_contributions<'a>(
    natural: impl IntoIterator<Item = &'a Molecule>,
    synthetic: impl IntoIterator<Item = &'a Molecule>,
) -> Result<ContributionTable, ContributionError> {
    let (np, n_np) = document_frequencies(natural);
    let (sm, n_sm) = document_frequencies(synthetic);
    if n_np == 0 || n_sm == 0 {
        return Err(ContributionError::EmptyCorpus);
    }
    let mut entries = HashMap::new();
    for &id in np.keys().chain(sm.keys()) {
        let a = (np.get(&id).copied().unwrap_or(0) + 1) as f64 / (n_np + 1) as f64;
        let b = (sm.get(&id).copied().unwrap_or(0) + 1) as f64 / (n_sm + 1) as f64;
        entries.insert(id, (a / b).log10());
    }
    Ok(ContributionTable { entries })
}

impl ContributionTable {
    pub fn from_entries(entries: impl IntoIterator<Item = (u64, f64)>) -> Self {
        ContributionTable {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn get(&self, id: u64) -> Option<f64> {
        self.entries.get(&id).copied()
    }

    pub fn contribution(&self, id: u64) -> f64 {
        self.get(id).unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted by identifier.
    pub fn sorted_entries(&self) -> Vec<(u64, f64)> {
        let mut v: Vec<(u64, f64)> = self.entries.iter().map(|(&k, &v)| (k, v)).collect();
        v.sort_unstable_by_key(|e| e.0);
        v
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<(), ContributionError> {
        let entries = self.sorted_entries();
        let mut buf = Vec::with_capacity(20 + entries.len() * 16);
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.extend_from_slice(&(entries.len() as u64).to_le_bytes());
        for (id, v) in entries {
            buf.extend_from_slice(&id.to_le_bytes());
            buf.extend_from_slice(&v.to_bits().to_le_bytes());
        }
        w.write_all(&buf)?;
        w.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(mut r: R) -> Result<ContributionTable, ContributionError> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        if buf.len() < 20 || &buf[..8] != MAGIC {
            return Err(ContributionError::Format("bad magic".to_string()));
        }
        let version = u32::from_le_bytes(buf[8..12].try_into().expect("4 bytes"));
        if version != VERSION {
            return Err(ContributionError::Format(format!("unsupported version {version}")));
        }
        let count = u64::from_le_bytes(buf[12..20].try_into().expect("8 bytes"));
        let body = &buf[20..];
        if count.checked_mul(16) != Some(body.len() as u64) {
            return Err(ContributionError::Format("length does not match count".to_string()));
        }
        let mut entries = HashMap::with_capacity(count as usize);
        let mut prev = None;
        for chunk in body.chunks_exact(16) {
            let id = u64::from_le_bytes(chunk[..8].try_into().expect("8 bytes"));
            let v = f64::from_bits(u64::from_le_bytes(chunk[8..].try_into().expect("8 bytes")));
            if prev.is_some_and(|p| p >= id) {
                return Err(ContributionError::Format("identifiers not strictly increasing".to_string()));
            }
            prev = Some(id);
            entries.insert(id, v);
        }
        Ok(ContributionTable { entries })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ContributionError> {
        let f = std::fs::File::create(path)?;
        self.write(std::io::BufWriter::new(f))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ContributionTable, ContributionError> {
        ContributionTable::read(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

/// Ring-topology counts used by the complexity penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RingComplexity {
    pub spiro: usize,
    pub bridgeheads: usize,
    pub macrocycles: usize,
}

pub fn ring_complexity(mol: &Molecule) -> RingComplexity {
    let rings = mol.rings();
    let mut spiro = vec![false; mol.num_atoms()];
    let mut bridge = vec![false; mol.num_atoms()];
    for (i, r1) in rings.iter().enumerate() {
        for r2 in &rings[i + 1..] {
            let shared: Vec<usize> = r1.iter().copied().filter(|a| r2.contains(a)).collect();
            if shared.len() == 1 {
                spiro[shared[0]] = true;
            } else if shared.len() > 2 {
                // Ends of the shared path are the atoms with a neighbour outside it in r1.
                for &a in &shared {
                    let k = r1.iter().position(|&x| x == a).expect("shared atom in ring");
                    let prev = r1[(k + r1.len() - 1) % r1.len()];
                    let next = r1[(k + 1) % r1.len()];
                    if !shared.contains(&prev) || !shared.contains(&next) {
                        bridge[a] = true;
                    }
                }
            }
        }
    }
    RingComplexity {
        spiro: spiro.iter().filter(|&&x| x).count(),
        bridgeheads: bridge.iter().filter(|&&x| x).count(),
        macrocycles: rings.iter().filter(|r| r.len() > 8).count(),
    }
}

/// Synthetic accessibility on a 1 (easy) to 10 (hard) scale.
pub fn sa_score(mol: &Molecule, table: &ContributionTable) -> f64 {
    let envs = morgan_environments(mol, RADIUS);
    let mut counts: HashMap<u64, u32> = HashMap::new();
    for e in &envs {
        *counts.entry(e.id).or_insert(0) += 1;
    }
    let total: u32 = counts.values().sum();
    let fragment = if total == 0 {
        0.0
    } else {
        counts.iter().map(|(&id, &c)| table.contribution(id) * c as f64).sum::<f64>() / total as f64
    };
    let n_atoms = mol.heavy_atom_count() as f64;
    let rc = ring_complexity(mol);
    let size_penalty = n_atoms.powf(1.005) - n_atoms;
    let spiro_penalty = (rc.spiro as f64 + 1.0).log10();
    let bridge_penalty = (rc.bridgeheads as f64 + 1.0).log10();
    let macro_penalty = if rc.macrocycles > 0 { 2f64.log10() } else { 0.0 };
    let complexity = -size_penalty - spiro_penalty - bridge_penalty - macro_penalty;
    let density = if !counts.is_empty() && n_atoms > counts.len() as f64 {
        (n_atoms / counts.len() as f64).ln() * 0.5
    } else {
        0.0
    };
    let raw = fragment + complexity + density;
    let (lo, hi) = (-4.0, 2.5);
    let mut s = 11.0 - (raw - lo + 1.0) / (hi - lo) * 9.0;
    if s > 8.0 {
        s = 8.0 + (s - 8.0).ln_1p();
    }
    s.clamp(1.0, 10.0)
}

/// Natural-product likeness: per-atom mean of environment log-odds,
/// softened beyond ±4 and clamped to [-5, 5].
pub fn np_score(mol: &Molecule, table: &ContributionTable) -> f64 {
    let n_atoms = mol.heavy_atom_count();
    if n_atoms == 0 {
        return 0.0;
    }
    let sum: f64 = morgan_ids(mol, RADIUS).into_iter().map(|id| table.contribution(id)).sum();
    let mut s = sum / n_atoms as f64;
    if s > 4.0 {
        s = 4.0 + (s - 3.0).log10();
    } else if s < -4.0 {
        s = -4.0 - (-s - 3.0).log10();
    }
    s.clamp(-5.0, 5.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mols(v: &[&str]) -> Vec<Molecule> {
        v.iter().map(|s| Molecule::from_smiles(s).unwrap()).collect()
    }

    #[test]
    fn single_molecule_corpus() {
        let c = mols(&["CCO"]);
        let t = train_contributions(&c).unwrap();
        let ids = morgan_ids(&c[0], 2);
        assert_eq!(t.len(), ids.len());
        assert!(ids.iter().all(|&id| t.get(id) == Some(3.0)));
    }

    #[test]
    fn duplication_invariant() {
        let c = mols(&["CCO", "CCN", "c1ccccc1O"]);
        let doubled: Vec<Molecule> = c.iter().chain(c.iter()).cloned().collect();
        assert_eq!(train_contributions(&c).unwrap(), train_contributions(&doubled).unwrap());
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(matches!(train_contributions(&[]), Err(ContributionError::EmptyCorpus)));
    }

    #[test]
    fn file_round_trip() {
        let t = train_contributions(&mols(&["CCO", "CC(=O)Nc1ccccc1"])).unwrap();
        let mut buf = Vec::new();
        t.write(&mut buf).unwrap();
        let back = ContributionTable::read(&buf[..]).unwrap();
        assert_eq!(back.sorted_entries().len(), t.len());
        for (id, v) in t.sorted_entries() {
            assert_eq!(back.get(id).unwrap().to_bits(), v.to_bits());
        }
        assert!(ContributionTable::read(&buf[..buf.len() - 1]).is_err());
    }

    #[test]
    fn frequent_environments_are_easier() {
        let corpus = mols(&["CCCCCC", "CCCCCCC", "CCCCC"]);
        let t = train_contributions(&corpus).unwrap();
        let seen = sa_score(&Molecule::from_smiles("CCCCCC").unwrap(), &t);
        let unseen = sa_score(&Molecule::from_smiles("NNNNNN").unwrap(), &t);
        assert!(seen < unseen, "{seen} vs {unseen}");
        assert!((1.0..=10.0).contains(&seen) && (1.0..=10.0).contains(&unseen));
    }

    #[test]
    fn np_sign_and_neutral() {
        let natural = mols(&["OCC1OC(O)C(O)C(O)C1O", "OC1CCCCC1O"]);
        let synthetic = mols(&["c1ccccc1Cl", "Clc1ccc(Cl)cc1"]);
        let t = train_np_contributions(&natural, &synthetic).unwrap();
        assert!(np_score(&natural[0], &t) > 0.0);
        assert!(np_score(&synthetic[1], &t) < 0.0);
        assert_eq!(np_score(&Molecule::from_smiles("BrBr").unwrap(), &t), 0.0);
    }

    #[test]
    fn np_clamp() {
        let m = Molecule::from_smiles("CCO").unwrap();
        let big = ContributionTable::from_entries(morgan_ids(&m, 2).into_iter().map(|id| (id, 1e6)));
        assert_eq!(np_score(&m, &big), 5.0);
        let small = ContributionTable::from_entries(morgan_ids(&m, 2).into_iter().map(|id| (id, -1e6)));
        assert_eq!(np_score(&m, &small), -5.0);
    }

    #[test]
    fn ring_topology() {
        let spiro = Molecule::from_smiles("C1CCC2(CC1)CCCC2").unwrap();
        assert_eq!(ring_complexity(&spiro).spiro, 1);
        let norbornane = Molecule::from_smiles("C1CC2CCC1C2").unwrap();
        assert_eq!(ring_complexity(&norbornane).bridgeheads, 2);
        let decalin = Molecule::from_smiles("C1CCC2CCCCC2C1").unwrap();
        assert_eq!(ring_complexity(&decalin), RingComplexity::default());
    }
}
