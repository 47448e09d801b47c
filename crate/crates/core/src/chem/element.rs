//! Periodic-table registry: symbols, standard atomic weights and default valences.

use std::fmt;

use smallvec::{smallvec, SmallVec};

/// An element identified by atomic number. Atomic number 0 is the dummy
/// attachment atom used by fragmentation; it never comes out of SMILES parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u8);

const SYMBOLS: [&str; 104] = [
    "*", "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S",
    "Cl", "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge",
    "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
    "In", "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd",
    "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg",
    "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm",
    "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr",
];

// Standard atomic weights (IUPAC conventional values, daltons).
const WEIGHTS: [f64; 104] = [
    0.0, 1.008, 4.003, 6.941, 9.012, 10.811, 12.011, 14.007, 15.999, 18.998, 20.180, 22.990,
    24.305, 26.982, 28.086, 30.974, 32.065, 35.453, 39.948, 39.098, 40.078, 44.956, 47.867,
    50.942, 51.996, 54.938, 55.845, 58.933, 58.693, 63.546, 65.38, 69.723, 72.630, 74.922,
    78.971, 79.904, 83.798, 85.468, 87.62, 88.906, 91.224, 92.906, 95.95, 98.0, 101.07, 102.906,
    106.42, 107.868, 112.414, 114.818, 118.710, 121.760, 127.60, 126.904, 131.293, 132.905,
    137.327, 138.905, 140.116, 140.908, 144.242, 145.0, 150.36, 151.964, 157.25, 158.925,
    162.500, 164.930, 167.259, 168.934, 173.045, 174.967, 178.49, 180.948, 183.84, 186.207,
    190.23, 192.217, 195.084, 196.967, 200.592, 204.38, 207.2, 208.980, 209.0, 210.0, 222.0,
    223.0, 226.0, 227.0, 232.038, 231.036, 238.029, 237.0, 244.0, 243.0, 247.0, 247.0, 251.0,
    252.0, 257.0, 258.0, 259.0, 262.0,
];

impl Element {
    pub const DUMMY: Element = Element(0);
    pub const H: Element = Element(1);
    pub const B: Element = Element(5);
    pub const C: Element = Element(6);
    pub const N: Element = Element(7);
    pub const O: Element = Element(8);
    pub const F: Element = Element(9);
    pub const SI: Element = Element(14);
    pub const P: Element = Element(15);
    pub const S: Element = Element(16);
    pub const CL: Element = Element(17);
    pub const SE: Element = Element(34);
    pub const BR: Element = Element(35);
    pub const I: Element = Element(53);

    pub fn from_atomic_number(z: u8) -> Option<Element> {
        ((z as usize) < SYMBOLS.len()).then_some(Element(z))
    }

    /// Case-sensitive symbol lookup ("Cl", not "cl"). The dummy "*" is not returned.
    pub fn from_symbol(sym: &str) -> Option<Element> {
        SYMBOLS
            .iter()
            .skip(1)
            .position(|s| *s == sym)
            .map(|i| Element(i as u8 + 1))
    }

    pub fn atomic_number(self) -> u8 {
        self.0
    }

    pub fn symbol(self) -> &'static str {
        SYMBOLS[self.0 as usize]
    }

    pub fn weight(self) -> f64 {
        WEIGHTS[self.0 as usize]
    }

    pub fn is_dummy(self) -> bool {
        self.0 == 0
    }

    pub fn is_halogen(self) -> bool {
        matches!(self.0, 9 | 17 | 35 | 53)
    }

    /// Members of the SMILES organic subset, writable without brackets.
    pub fn is_organic(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 9 | 15 | 16 | 17 | 35 | 53)
    }

    /// Elements allowed to carry the lowercase aromatic form.
    pub fn can_be_aromatic(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 15 | 16 | 33 | 34 | 52)
    }

    /// Neutral valence states, ascending. Empty for elements without a
    /// valence model (metals, noble gases); those are never validated.
    fn neutral_valences(self) -> &'static [u8] {
        match self.0 {
            1 => &[1],
            5 => &[3],
            6 => &[4],
            7 => &[3],
            8 => &[2],
            9 => &[1],
            14 => &[4],
            15 => &[3, 5],
            16 => &[2, 4, 6],
            17 | 35 | 53 => &[1],
            33 => &[3, 5],
            34 => &[2, 4, 6],
            52 => &[2, 4, 6],
            _ => &[],
        }
    }

    pub fn has_valence_model(self) -> bool {
        !self.neutral_valences().is_empty()
    }

    /// Allowed valences for this element at a formal charge, ascending.
    /// Group 15-17 elements shift by the charge (N+ behaves as C, O- as F);
    /// boron gains a bond per negative charge (B- is tetravalent) and carbon
    /// loses one bond per unit of charge of either sign.
    pub fn allowed_valences(self, charge: i8) -> SmallVec<[u8; 4]> {
        let base = self.neutral_valences();
        if charge == 0 {
            return SmallVec::from_slice(base);
        }
        let shifted = |v: u8, d: i32| -> Option<u8> {
            let x = v as i32 + d;
            (0..=8).contains(&x).then_some(x as u8)
        };
        let mut out: SmallVec<[u8; 4]> = match self.0 {
            5 => base.iter().filter_map(|&v| shifted(v, -(charge as i32))).collect(),
            6 | 14 => base
                .iter()
                .filter_map(|&v| shifted(v, -(charge as i32).abs()))
                .collect(),
            1 => {
                if charge.abs() == 1 {
                    smallvec![0]
                } else {
                    SmallVec::new()
                }
            }
            _ => base.iter().filter_map(|&v| shifted(v, charge as i32)).collect(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
