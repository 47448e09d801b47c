//! Set-level counting metrics: validity, uniqueness, novelty, filters.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::chem::Molecule;
use crate::dataset::FilterConfig;

use super::MetricsError;

/// Parses every string in parallel; invalid ones are dropped, order kept.
pub fn parse_valid<S: AsRef<str> + Sync>(generated: &[S]) -> Vec<Molecule> {
    generated
        .par_iter()
        .filter_map(|s| Molecule::from_smiles(s.as_ref()).ok())
        .collect()
}

/// Fraction of strings that parse and sanitize. 0 for an empty list.
pub fn validity<S: AsRef<str> + Sync>(generated: &[S]) -> f64 {
    if generated.is_empty() {
        return 0.0;
    }
    let ok = generated
        .par_iter()
        .filter(|s| Molecule::from_smiles(s.as_ref()).is_ok())
        .count();
    ok as f64 / generated.len() as f64
}

/// Distinct canonical strings among the first `k` valid molecules, over `k`.
pub fn uniqueness_of(valid: &[Molecule], k: usize) -> Result<f64, MetricsError> {
    if k == 0 {
        return Err(MetricsError::Empty("k"));
    }
    if valid.len() < k {
        return Err(MetricsError::Shortfall { k, valid: valid.len() });
    }
    let distinct: HashSet<&str> = valid[..k].iter().map(|m| m.canonical_smiles()).collect();
    Ok(distinct.len() as f64 / k as f64)
}

pub fn uniqueness_at_k<S: AsRef<str> + Sync>(generated: &[S], k: usize) -> Result<f64, MetricsError> {
    uniqueness_of(&parse_valid(generated), k)
}

/// Fraction of distinct valid canonical strings absent from `train`.
pub fn novelty_of(valid: &[Molecule], train: &HashSet<String>) -> Result<f64, MetricsError> {
    let distinct: HashSet<&str> = valid.iter().map(|m| m.canonical_smiles()).collect();
    if distinct.is_empty() {
        return Err(MetricsError::NoValid);
    }
    let novel = distinct.iter().filter(|s| !train.contains(**s)).count();
    Ok(novel as f64 / distinct.len() as f64)
}

pub fn novelty<S: AsRef<str> + Sync>(generated: &[S], train: &HashSet<String>) -> Result<f64, MetricsError> {
    novelty_of(&parse_valid(generated), train)
}

/// Fraction of molecules passing the alert packs and the element, charge
/// and ring-size rules of `config`.
pub fn filters_fraction(valid: &[Molecule], config: &FilterConfig) -> Result<f64, MetricsError> {
    if valid.is_empty() {
        return Err(MetricsError::NoValid);
    }
    let pass = valid.par_iter().filter(|m| config.passes_alerts(m)).count();
    Ok(pass as f64 / valid.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mols(v: &[&str]) -> Vec<Molecule> {
        v.iter().map(|s| Molecule::from_smiles(s).unwrap()).collect()
    }

    #[test]
    fn validity_counts() {
        assert_eq!(validity(&["CCO", "C("]), 0.5);
        assert_eq!(validity(&["CCO", "c1ccccc1"]), 1.0);
        assert_eq!(validity::<&str>(&[]), 0.0);
    }

    #[test]
    fn uniqueness() {
        assert_eq!(uniqueness_at_k(&["CCO", "OCC", "CCO"], 3).unwrap(), 1.0 / 3.0);
        assert_eq!(uniqueness_at_k(&["C", "CC", "CCC"], 3).unwrap(), 1.0);
        // First k valid: the invalid string is skipped.
        assert_eq!(uniqueness_at_k(&["C(", "C", "CC", "C"], 2).unwrap(), 1.0);
        match uniqueness_at_k(&["C", "C("], 2) {
            Err(MetricsError::Shortfall { k: 2, valid: 1 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn novelty_fraction() {
        let train: HashSet<String> = ["CCO".to_string()].into();
        assert_eq!(novelty(&["OCC"], &train).unwrap(), 0.0);
        assert_eq!(novelty(&["CCN", "CCC"], &train).unwrap(), 1.0);
        assert_eq!(novelty(&["CCO", "CCN", "CCN"], &train).unwrap(), 0.5);
        assert!(novelty(&["C("], &train).is_err());
    }

    #[test]
    fn filters() {
        let cfg = FilterConfig::default();
        assert_eq!(filters_fraction(&mols(&["CCO"]), &cfg).unwrap(), 1.0);
        assert_eq!(filters_fraction(&mols(&["CCN=[N+]=[N-]"]), &cfg).unwrap(), 0.0);
        assert_eq!(filters_fraction(&mols(&["CCO", "CCP"]), &cfg).unwrap(), 0.5);
    }
}
