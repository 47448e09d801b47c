//! Lead-like filter settings and their `key = value` file form.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::chem::{Element, Molecule};
use crate::descriptors::{crippen_logp, molecular_weight, rotatable_bonds};
use crate::substructure::{FilterPack, PackError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: unknown config key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value '{value}' for key '{key}'")]
    BadValue { line: usize, key: String, value: String },
    #[error("line {line}: expected 'key = value'")]
    Syntax { line: usize },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Pack(#[from] PackError),
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
pub struct FilterConfig {
    pub mw_range: (f64, f64),
    pub max_rotatable: usize,
    pub max_logp: f64,
    pub allowed_elements: BTreeSet<Element>,
    pub max_ring_size: usize,
    pub packs: Vec<FilterPack>,
    pub reject_charged: bool,
    pub reject_disconnected: bool,
}

pub const DEFAULT_ELEMENTS: [Element; 8] = [
    Element::C,
    Element::N,
    Element::S,
    Element::O,
    Element::F,
    Element::CL,
    Element::BR,
    Element::H,
];

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            mw_range: (250.0, 350.0),
            max_rotatable: 7,
            max_logp: 3.5,
            allowed_elements: DEFAULT_ELEMENTS.into_iter().collect(),
            max_ring_size: 8,
            packs: vec![FilterPack::mcf(), FilterPack::pains()],
            reject_charged: true,
            reject_disconnected: true,
        }
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

fn load_pack(spec: &str, base: Option<&Path>) -> Result<FilterPack, PackError> {
    match spec.to_ascii_lowercase().as_str() {
        "mcf" => return Ok(FilterPack::mcf()),
        "pains" => return Ok(FilterPack::pains()),
        _ => {}
    }
    match base {
        Some(dir) if Path::new(spec).is_relative() => FilterPack::load(dir.join(spec)),
        _ => FilterPack::load(spec),
    }
}

impl FilterConfig {
    /// Parses `key = value` lines over the defaults. `#` starts a comment.
    /// Pack paths are resolved against `base` when relative.
    ///
    /// Keys: `mw_min`, `mw_max`, `max_rotatable`, `max_logp`,
    /// `allowed_elements` (comma list), `max_ring_size`, `packs` (comma list
    /// of `mcf`, `pains` or pack file paths; empty for none),
    /// `reject_charged`, `reject_disconnected`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<FilterConfig, ConfigError> {
        let mut cfg = FilterConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let key = key.trim();
            let value = value.trim();
            let bad = || ConfigError::BadValue {
                line,
                key: key.to_string(),
                value: value.to_string(),
            };
            match key {
                "mw_min" => cfg.mw_range.0 = value.parse().map_err(|_| bad())?,
                "mw_max" => cfg.mw_range.1 = value.parse().map_err(|_| bad())?,
                "max_rotatable" => cfg.max_rotatable = value.parse().map_err(|_| bad())?,
                "max_logp" => cfg.max_logp = value.parse().map_err(|_| bad())?,
                "max_ring_size" => cfg.max_ring_size = value.parse().map_err(|_| bad())?,
                "reject_charged" => cfg.reject_charged = parse_bool(value).ok_or_else(bad)?,
                "reject_disconnected" => cfg.reject_disconnected = parse_bool(value).ok_or_else(bad)?,
                "allowed_elements" => {
                    cfg.allowed_elements = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| Element::from_symbol(s).ok_or_else(bad))
                        .collect::<Result<_, _>>()?;
                }
                "packs" => {
                    cfg.packs = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| load_pack(s, base))
                        .collect::<Result<_, _>>()?;
                }
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FilterConfig, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        FilterConfig::parse(&text, path.parent())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let (lo, hi) = self.mw_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(ConfigError::Invalid(format!("mw range {lo}..{hi} is not well ordered")));
        }
        if !self.max_logp.is_finite() {
            return Err(ConfigError::Invalid("max_logp must be finite".into()));
        }
        if self.allowed_elements.is_empty() {
            return Err(ConfigError::Invalid("allowed element set is empty".into()));
        }
        Ok(())
    }

    /// Config file text equivalent to this config, packs listed by name.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let elements: Vec<&str> = self.allowed_elements.iter().map(|e| e.symbol()).collect();
        let packs: Vec<&str> = self.packs.iter().map(|p| p.name.as_str()).collect();
        let _ = writeln!(s, "mw_min = {}", self.mw_range.0);
        let _ = writeln!(s, "mw_max = {}", self.mw_range.1);
        let _ = writeln!(s, "max_rotatable = {}", self.max_rotatable);
        let _ = writeln!(s, "max_logp = {}", self.max_logp);
        let _ = writeln!(s, "allowed_elements = {}", elements.join(","));
        let _ = writeln!(s, "max_ring_size = {}", self.max_ring_size);
        let _ = writeln!(s, "packs = {}", packs.join(","));
        let _ = writeln!(s, "reject_charged = {}", self.reject_charged);
        let _ = writeln!(s, "reject_disconnected = {}", self.reject_disconnected);
        s
    }

    fn structural_violation(&self, mol: &Molecule) -> Option<String> {
        if mol.atoms().iter().any(|a| !self.allowed_elements.contains(&a.element())) {
            return Some("elements".into());
        }
        if self.reject_charged && mol.atoms().iter().any(|a| a.formal_charge() != 0) {
            return Some("charged".into());
        }
        if mol.rings().iter().any(|r| r.len() > self.max_ring_size) {
            return Some("ring_size".into());
        }
        None
    }

    fn pack_violation(&self, mol: &Molecule) -> Option<String> {
        self.packs
            .iter()
            .find_map(|p| p.first_violation(mol))
            .map(|name| format!("filter:{name}"))
    }

    /// First failing rule, in order: `disconnected`, `elements`, `charged`,
    /// `ring_size`, `mw_range`, `rotatable`, `logp`, `filter:<name>`.
    pub fn first_failure(&self, mol: &Molecule) -> Option<String> {
        if self.reject_disconnected && !mol.is_connected() {
            return Some("disconnected".into());
        }
        if let Some(rule) = self.structural_violation(mol) {
            return Some(rule);
        }
        let mw = molecular_weight(mol);
        if mw < self.mw_range.0 || mw > self.mw_range.1 {
            return Some("mw_range".into());
        }
        if rotatable_bonds(mol) > self.max_rotatable {
            return Some("rotatable".into());
        }
        if crippen_logp(mol) > self.max_logp {
            return Some("logp".into());
        }
        self.pack_violation(mol)
    }

    /// The checks behind the Filters metric: alert packs plus allowed
    /// elements, charges and ring size. Property ranges are not applied.
    pub fn passes_alerts(&self, mol: &Molecule) -> bool {
        self.structural_violation(mol).is_none() && self.pack_violation(mol).is_none()
    }
}
