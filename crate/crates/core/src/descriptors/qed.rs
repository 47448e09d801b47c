//! Quantitative estimate of drug-likeness.

use std::sync::OnceLock;

use crate::chem::Molecule;
use crate::substructure::FilterPack;

use super::basic::{aromatic_rings, h_bond_acceptors, h_bond_donors, molecular_weight, rotatable_bonds_strict, tpsa};
use super::crippen::crippen_logp;

const PARAMS_TEXT: &str = include_str!("../../data/qed_params.txt");
const ALERTS_TEXT: &str = include_str!("../../data/qed_alerts.txt");

/// Asymmetric double sigmoid parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdsParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub dmax: f64,
    pub weight: f64,
}

impl AdsParams {
    /// Desirability of `x`, scaled so the curve's maximum is about 1.
    pub fn desirability(&self, x: f64) -> f64 {
        let rise = 1.0 + (-(x - self.c + self.d / 2.0) / self.e).exp();
        let fall = 1.0 - 1.0 / (1.0 + (-(x - self.c - self.d / 2.0) / self.f).exp());
        (self.a + self.b / rise * fall) / self.dmax
    }
}

/// The eight inputs of the score.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QedProperties {
    pub mw: f64,
    pub alogp: f64,
    pub hba: f64,
    pub hbd: f64,
    pub psa: f64,
    pub rotb: f64,
    pub arom: f64,
    pub alerts: f64,
}

impl QedProperties {
    pub fn as_array(&self) -> [f64; 8] {
        [self.mw, self.alogp, self.hba, self.hbd, self.psa, self.rotb, self.arom, self.alerts]
    }
}

pub const QED_PROPERTY_NAMES: [&str; 8] = ["MW", "ALOGP", "HBA", "HBD", "PSA", "ROTB", "AROM", "ALERTS"];

pub fn qed_params() -> &'static [AdsParams; 8] {
    static P: OnceLock<[AdsParams; 8]> = OnceLock::new();
    P.get_or_init(|| {
        let mut out = [AdsParams {
            a: 0.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            e: 1.0,
            f: 1.0,
            dmax: 1.0,
            weight: 0.0,
        }; 8];
        for line in PARAMS_TEXT.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
            let cols: Vec<&str> = line.split('\t').collect();
            let k = QED_PROPERTY_NAMES.iter().position(|n| *n == cols[0]).expect("known QED property");
            let v: Vec<f64> = cols[1..].iter().map(|x| x.parse().expect("QED parameter")).collect();
            out[k] = AdsParams {
                a: v[0],
                b: v[1],
                c: v[2],
                d: v[3],
                e: v[4],
                f: v[5],
                dmax: v[6],
                weight: v[7],
            };
        }
        out
    })
}

/// Unwanted-group alerts counted by the score.
pub fn qed_alerts() -> &'static FilterPack {
    static P: OnceLock<FilterPack> = OnceLock::new();
    P.get_or_init(|| FilterPack::parse(ALERTS_TEXT, "QED-alerts").expect("bundled QED alerts parse"))
}

pub fn qed_properties(mol: &Molecule) -> QedProperties {
    QedProperties {
        mw: molecular_weight(mol),
        alogp: crippen_logp(mol),
        hba: h_bond_acceptors(mol) as f64,
        hbd: h_bond_donors(mol) as f64,
        psa: tpsa(mol),
        rotb: rotatable_bonds_strict(mol) as f64,
        arom: aromatic_rings(mol) as f64,
        alerts: qed_alerts().violations(mol).len() as f64,
    }
}

/// Weighted geometric mean of precomputed desirabilities, each clamped to [0, 1].
pub fn qed_from_desirabilities(d: &[f64; 8]) -> f64 {
    let params = qed_params();
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, p) in d.iter().zip(params.iter()) {
        let x = x.clamp(0.0, 1.0);
        if x == 0.0 {
            return 0.0;
        }
        num += p.weight * x.ln();
        den += p.weight;
    }
    (num / den).exp().clamp(0.0, 1.0)
}

pub fn qed_from_properties(props: &QedProperties) -> f64 {
    let params = qed_params();
    let vals = props.as_array();
    let mut d = [0.0; 8];
    for k in 0..8 {
        d[k] = params[k].desirability(vals[k]);
    }
    qed_from_desirabilities(&d)
}

pub fn qed(mol: &Molecule) -> f64 {
    qed_from_properties(&qed_properties(mol))
}
