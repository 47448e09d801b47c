//! Named pattern collections used as structural-alert filters.
//!
//! File format: one rule per line, `NAME<TAB>PATTERN`, with `#` comments.
//! Extra tab-separated columns turn a rule into a count rule:
//! `min=N` fires when at least N distinct atoms match query atom 0 of the
//! pattern, and each `exclude=PATTERN` drops atoms that the excluded pattern
//! matches at its own atom 0. `alt=PATTERN` columns add alternatives: the
//! rule fires when any of its patterns matches. Directive lines:
//!
//! - `#!pack NAME` sets the provenance label,
//! - `#!version V` sets the version string reported by the CLI,
//! - `#!explicit-hydrogens` matches against a copy with hydrogen atoms.

use std::collections::HashSet;
use std::path::Path;

use crate::chem::Molecule;

use super::matcher::Target;
use super::pattern::{parse_pattern, Pattern, PatternError};

#[derive(Debug, thiserror::Error)]
pub enum PackError {
    #[error("cannot read pack {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}: {source}")]
    Pattern {
        line: usize,
        #[source]
        source: PatternError,
    },
}

#[derive(Debug, Clone)]
pub enum RuleKind {
    /// Fires on any embedding.
    Match(Pattern),
    /// Fires on an embedding of any listed pattern.
    AnyOf(Vec<Pattern>),
    /// Fires when enough distinct atoms anchor the pattern.
    Count {
        pattern: Pattern,
        min: usize,
        exclude: Vec<Pattern>,
    },
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub name: String,
    pub kind: RuleKind,
}

impl Rule {
    pub fn fires(&self, target: &Target) -> bool {
        match &self.kind {
            RuleKind::Match(p) => p.has_match_in(target),
            RuleKind::AnyOf(ps) => ps.iter().any(|p| p.has_match_in(target)),
            RuleKind::Count {
                pattern,
                min,
                exclude,
            } => {
                let n = target.molecule().num_atoms();
                let mut count = 0;
                for a in 0..n {
                    if pattern.matches_at(target, a) && !exclude.iter().any(|x| x.matches_at(target, a)) {
                        count += 1;
                        if count >= *min {
                            return true;
                        }
                    }
                }
                false
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct FilterPack {
    pub name: String,
    pub version: String,
    pub explicit_hydrogens: bool,
    pub rules: Vec<Rule>,
}

const MCF_TEXT: &str = include_str!("../../data/mcf.txt");
const PAINS_TEXT: &str = include_str!("../../data/pains.txt");

impl FilterPack {
    pub fn parse(text: &str, default_name: &str) -> Result<FilterPack, PackError> {
        let mut pack = FilterPack {
            name: default_name.to_string(),
            version: "unversioned".to_string(),
            explicit_hydrogens: false,
            rules: Vec::new(),
        };
        let mut names = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim_end_matches('\r');
            if let Some(directive) = trimmed.strip_prefix("#!") {
                let mut parts = directive.splitn(2, char::is_whitespace);
                match (parts.next(), parts.next().map(str::trim)) {
                    (Some("pack"), Some(v)) if !v.is_empty() => pack.name = v.to_string(),
                    (Some("version"), Some(v)) if !v.is_empty() => pack.version = v.to_string(),
                    (Some("explicit-hydrogens"), None) => pack.explicit_hydrogens = true,
                    _ => {
                        return Err(PackError::Line {
                            line,
                            message: format!("unknown directive '#!{directive}'"),
                        })
                    }
                }
                continue;
            }
            if trimmed.trim().is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = trimmed.split('\t').collect();
            if cols.len() < 2 || cols[0].is_empty() || cols[1].is_empty() {
                return Err(PackError::Line {
                    line,
                    message: "expected NAME<TAB>PATTERN".to_string(),
                });
            }
            let name = cols[0].to_string();
            if !names.insert(name.clone()) {
                return Err(PackError::Line {
                    line,
                    message: format!("duplicate rule name '{name}'"),
                });
            }
            let pat = |s: &str| parse_pattern(s).map_err(|source| PackError::Pattern { line, source });
            let pattern = pat(cols[1])?;
            let mut min = None;
            let mut exclude = Vec::new();
            let mut alternatives = Vec::new();
            for extra in &cols[2..] {
                if let Some(v) = extra.strip_prefix("min=") {
                    min = Some(v.parse::<usize>().map_err(|_| PackError::Line {
                        line,
                        message: format!("bad count '{v}'"),
                    })?);
                } else if let Some(v) = extra.strip_prefix("exclude=") {
                    exclude.push(pat(v)?);
                } else if let Some(v) = extra.strip_prefix("alt=") {
                    alternatives.push(pat(v)?);
                } else if !extra.is_empty() {
                    return Err(PackError::Line {
                        line,
                        message: format!("unknown column '{extra}'"),
                    });
                }
            }
            if !alternatives.is_empty() && (min.is_some() || !exclude.is_empty()) {
                return Err(PackError::Line {
                    line,
                    message: "alt= cannot be combined with min= or exclude=".to_string(),
                });
            }
            let kind = match min {
                None if !alternatives.is_empty() => {
                    alternatives.insert(0, pattern);
                    RuleKind::AnyOf(alternatives)
                }
                Some(min) => RuleKind::Count {
                    pattern,
                    min,
                    exclude,
                },
                None if exclude.is_empty() => RuleKind::Match(pattern),
                None => {
                    return Err(PackError::Line {
                        line,
                        message: "exclude= requires min=".to_string(),
                    })
                }
            };
            pack.rules.push(Rule { name, kind });
        }
        Ok(pack)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FilterPack, PackError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| PackError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("pack");
        FilterPack::parse(&text, stem)
    }

    /// The 22 medicinal-chemistry alerts.
    pub fn mcf() -> FilterPack {
        FilterPack::parse(MCF_TEXT, "MCF").expect("bundled MCF pack parses")
    }

    /// The PAINS alerts expressible without recursive patterns.
    pub fn pains() -> FilterPack {
        FilterPack::parse(PAINS_TEXT, "PAINS").expect("bundled PAINS pack parses")
    }

    /// Names of the rules that fire on `mol`, in pack order.
    pub fn violations(&self, mol: &Molecule) -> Vec<&str> {
        let expanded;
        let subject = if self.explicit_hydrogens {
            expanded = mol.with_explicit_hydrogens();
            &expanded
        } else {
            mol
        };
        let target = Target::new(subject);
        self.rules
            .iter()
            .filter(|r| r.fires(&target))
            .map(|r| r.name.as_str())
            .collect()
    }

    /// Name of the first rule, in pack order, that fires.
    pub fn first_violation(&self, mol: &Molecule) -> Option<&str> {
        let expanded;
        let subject = if self.explicit_hydrogens {
            expanded = mol.with_explicit_hydrogens();
            &expanded
        } else {
            mol
        };
        let target = Target::new(subject);
        self.rules.iter().find(|r| r.fires(&target)).map(|r| r.name.as_str())
    }

    pub fn find(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterOutcome {
    pub passed: bool,
    /// Fired rule names, sorted.
    pub violations: Vec<String>,
}

pub fn passes_filters(mol: &Molecule, packs: &[FilterPack]) -> FilterOutcome {
    let mut violations: Vec<String> = packs
        .iter()
        .flat_map(|p| p.violations(mol).into_iter().map(String::from))
        .collect();
    violations.sort();
    violations.dedup();
    FilterOutcome {
        passed: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mol(s: &str) -> Molecule {
        Molecule::from_smiles(s).unwrap()
    }

    #[test]
    fn bundled_packs_load() {
        assert_eq!(FilterPack::mcf().rules.len(), 22);
        assert!(FilterPack::pains().rules.len() > 400);
        assert!(FilterPack::pains().explicit_hydrogens);
    }

    #[test]
    fn acetaldehyde_fails_mcf7() {
        let out = passes_filters(&mol("CC=O"), &[FilterPack::mcf()]);
        assert!(!out.passed);
        assert_eq!(out.violations, vec!["MCF7"]);
    }

    #[test]
    fn ethanol_passes() {
        let out = passes_filters(&mol("CCO"), &[FilterPack::mcf(), FilterPack::pains()]);
        assert!(out.passed, "{:?}", out.violations);
    }

    #[test]
    fn azide_fails_mcf17() {
        let out = passes_filters(&mol("CCN=[N+]=[N-]"), &[FilterPack::mcf()]);
        assert!(out.violations.iter().any(|v| v == "MCF17"));
    }

    #[test]
    fn pack_order_does_not_matter() {
        let m = mol("O=Cc1ccc(Cl)nc1");
        let a = passes_filters(&m, &[FilterPack::mcf(), FilterPack::pains()]);
        let b = passes_filters(&m, &[FilterPack::pains(), FilterPack::mcf()]);
        assert_eq!(a, b);
    }

    #[test]
    fn format_errors() {
        assert!(matches!(FilterPack::parse("A\tC\nA\tN\n", "x"), Err(PackError::Line { line: 2, .. })));
        assert!(matches!(FilterPack::parse("A C\n", "x"), Err(PackError::Line { line: 1, .. })));
        assert!(matches!(FilterPack::parse("A\tC(\n", "x"), Err(PackError::Pattern { line: 1, .. })));
        assert!(matches!(FilterPack::parse("#!bogus\n", "x"), Err(PackError::Line { .. })));
        let p = FilterPack::parse("#!pack T\n#!version 3\n# note\nX\t[Cl]\tmin=2\n", "x").unwrap();
        assert_eq!((p.name.as_str(), p.version.as_str()), ("T", "3"));
        assert_eq!(p.violations(&mol("ClCCl")), vec!["X"]);
        assert!(p.violations(&mol("ClC")).is_empty());
    }

    #[test]
    fn alternatives() {
        let p = FilterPack::parse("A\t[Br]\talt=[I]\n", "x").unwrap();
        assert_eq!(p.violations(&mol("CI")), vec!["A"]);
        assert_eq!(p.violations(&mol("CBr")), vec!["A"]);
        assert!(p.violations(&mol("CCl")).is_empty());
        assert!(FilterPack::parse("A\t[Br]\talt=[I]\tmin=2\n", "x").is_err());
    }
}
