//! Random and scaffold-held-out splits.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chem::Molecule;
use crate::decompose::{murcko_scaffold, ACYCLIC_SCAFFOLD};

use super::DatasetError;

/// Split fractions and seed. Whatever `train + test` leaves over goes to the
/// scaffold test set when `scaffold_test` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train: f64,
    pub test: f64,
    pub seed: u64,
    pub scaffold_test: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train: 0.9,
            test: 0.05,
            seed: 0,
            scaffold_test: true,
        }
    }
}

impl SplitSpec {
    pub fn scaffold_fraction(&self) -> f64 {
        if self.scaffold_test {
            (1.0 - self.train - self.test).max(0.0)
        } else {
            0.0
        }
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let ok = self.train > 0.0
            && self.test > 0.0
            && self.train + self.test <= 1.0 + 1e-12
            && (!self.scaffold_test || self.scaffold_fraction() > 0.0);
        if ok {
            Ok(())
        } else {
            Err(DatasetError::BadSplit(format!(
                "fractions train={} test={} scaffold_test={}",
                self.train, self.test, self.scaffold_test
            )))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Splits {
    pub train: Vec<String>,
    pub test: Vec<String>,
    pub scaffold_test: Vec<String>,
}

/// Scaffold key used for grouping; acyclic molecules share one group.
pub fn scaffold_key(mol: &Molecule) -> String {
    murcko_scaffold(mol).unwrap_or_else(|| ACYCLIC_SCAFFOLD.to_string())
}

/// Splits a deduplicated list of canonical strings. Outputs keep input
/// order.
///
/// With `scaffold_test`, scaffold groups are shuffled by the seed, stably
/// ordered by size, and taken smallest first until the scaffold-test share
/// is reached. The rest is shuffled and cut into test and train.
pub fn split(dataset: &[String], spec: &SplitSpec) -> Result<Splits, DatasetError> {
    spec.validate()?;
    let n = dataset.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut held = vec![false; n];
    let mut n_scaffold = 0usize;
    if spec.scaffold_test {
        let keys: Vec<String> = dataset
            .par_iter()
            .map(|s| {
                Molecule::from_smiles(s)
                    .map(|m| scaffold_key(&m))
                    .map_err(|e| DatasetError::InvalidRecord(format!("{s}: {e}")))
            })
            .collect::<Result<_, _>>()?;
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, k) in keys.iter().enumerate() {
            let g = *index.entry(k.as_str()).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(i);
        }
        groups.shuffle(&mut rng);
        groups.sort_by_key(|g| g.len());
        let target = (n as f64 * spec.scaffold_fraction()).round() as usize;
        // The largest group is never held out, so train keeps something.
        let last = groups.len().saturating_sub(1);
        for g in &groups[..last] {
            if n_scaffold >= target {
                break;
            }
            for &i in g {
                held[i] = true;
            }
            n_scaffold += g.len();
        }
        if n_scaffold == 0 {
            return Err(DatasetError::TooSmall(format!(
                "{n} molecules in {} scaffold groups cannot fill a scaffold test set",
                groups.len()
            )));
        }
    }
    let mut rest: Vec<usize> = (0..n).filter(|&i| !held[i]).collect();
    rest.shuffle(&mut rng);
    let n_test = (n as f64 * spec.test).round() as usize;
    if n_test == 0 || n_test >= rest.len() {
        return Err(DatasetError::TooSmall(format!(
            "{n} molecules cannot give a non-empty test and train split"
        )));
    }
    let mut is_test = vec![false; n];
    for &i in &rest[..n_test] {
        is_test[i] = true;
    }
    let mut out = Splits::default();
    for (i, s) in dataset.iter().enumerate() {
        let bucket = if held[i] {
            &mut out.scaffold_test
        } else if is_test[i] {
            &mut out.test
        } else {
            &mut out.train
        };
        bucket.push(s.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn corpus() -> Vec<String> {
        let mut v = Vec::new();
        for tail in ["C", "CC", "CCC", "CO", "CN", "CCl", "CF", "CBr", "OC", "NC"] {
            for ring in ["c1ccccc1", "C1CCCCC1", "c1ccncc1", "C1CCOC1", "c1ccsc1", "C1CC1"] {
                v.push(Molecule::from_smiles(&format!("{ring}{tail}")).unwrap().canonical_smiles().to_string());
            }
            v.push(Molecule::from_smiles(&format!("CCCC{tail}")).unwrap().canonical_smiles().to_string());
        }
        crate::dataset::deduplicate(v)
    }

    fn scaffolds(v: &[String]) -> HashSet<String> {
        v.iter().map(|s| scaffold_key(&Molecule::from_smiles(s).unwrap())).collect()
    }

    #[test]
    fn partition_and_disjoint_scaffolds() {
        let data = corpus();
        let spec = SplitSpec {
            train: 0.6,
            test: 0.2,
            seed: 7,
            scaffold_test: true,
        };
        let s = split(&data, &spec).unwrap();
        assert_eq!(s.train.len() + s.test.len() + s.scaffold_test.len(), data.len());
        let mut all: Vec<String> = s.train.iter().chain(&s.test).chain(&s.scaffold_test).cloned().collect();
        all.sort();
        let mut sorted = data.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        let held = scaffolds(&s.scaffold_test);
        let mut seen = s.train.clone();
        seen.extend(s.test.iter().cloned());
        assert!(scaffolds(&seen).is_disjoint(&held));
        assert!(!held.is_empty());
    }

    #[test]
    fn seeded() {
        let data = corpus();
        let spec = SplitSpec {
            train: 0.7,
            test: 0.15,
            seed: 42,
            scaffold_test: true,
        };
        assert_eq!(split(&data, &spec).unwrap(), split(&data, &spec).unwrap());
        let other = SplitSpec { seed: 43, ..spec };
        assert_ne!(split(&data, &spec).unwrap(), split(&data, &other).unwrap());
    }

    #[test]
    fn random_only() {
        let data = corpus();
        let spec = SplitSpec {
            train: 0.8,
            test: 0.2,
            seed: 1,
            scaffold_test: false,
        };
        let s = split(&data, &spec).unwrap();
        assert!(s.scaffold_test.is_empty());
        assert_eq!(s.test.len(), (data.len() as f64 * 0.2).round() as usize);
    }

    #[test]
    fn too_small() {
        let data = vec!["CCO".to_string()];
        assert!(matches!(split(&data, &SplitSpec::default()), Err(DatasetError::TooSmall(_))));
        let bad = SplitSpec {
            train: 0.9,
            test: 0.2,
            ..SplitSpec::default()
        };
        assert!(matches!(split(&data, &bad), Err(DatasetError::BadSplit(_))));
    }
}
