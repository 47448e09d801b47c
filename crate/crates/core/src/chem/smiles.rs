//! SMILES reader for the OpenSMILES subset used throughout the toolkit.
//!
//! Stereo marks (`/`, `\`, `@`) are consumed and dropped; isotopes and atom
//! classes are read and ignored.

use super::element::Element;
use super::error::{ParseDiagnostic, ParseErrorKind};
use super::molecule::{Atom, BondOrder, Molecule, RawAtom, RawBond};

/// Parses and sanitizes `text` into a molecule.
pub fn parse_smiles(text: &str) -> Result<Molecule, ParseDiagnostic> {
    parse_with(text, false)
}

/// Like [`parse_smiles`] but also accepts `*` / `[n*]` dummy attachment atoms,
/// as emitted for fragments.
pub fn parse_fragment_smiles(text: &str) -> Result<Molecule, ParseDiagnostic> {
    parse_with(text, true)
}

#[derive(Clone, Copy)]
struct PendingBond {
    order: BondOrder,
    position: usize,
}

#[derive(Clone, Copy)]
struct OpenRing {
    atom: usize,
    bond: Option<BondOrder>,
    position: usize,
}

struct Reader<'a> {
    text: &'a [u8],
    pos: usize,
    allow_dummy: bool,
    atoms: Vec<RawAtom>,
    bonds: Vec<RawBond>,
    prev: Option<usize>,
    pending: Option<PendingBond>,
    branches: Vec<(Option<usize>, usize)>,
    rings: [Option<OpenRing>; 100],
}

fn err(position: usize, kind: ParseErrorKind, message: impl Into<String>) -> ParseDiagnostic {
    ParseDiagnostic::new(position, kind, message)
}

fn parse_with(text: &str, allow_dummy: bool) -> Result<Molecule, ParseDiagnostic> {
    if text.is_empty() {
        return Err(err(0, ParseErrorKind::Empty, "empty input"));
    }
    let mut r = Reader {
        text: text.as_bytes(),
        pos: 0,
        allow_dummy,
        atoms: Vec::new(),
        bonds: Vec::new(),
        prev: None,
        pending: None,
        branches: Vec::new(),
        rings: [None; 100],
    };
    r.run()?;
    Molecule::sanitize(r.atoms, r.bonds, text.len())
}

impl<'a> Reader<'a> {
    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn last_pos(&self) -> usize {
        self.text.len() - 1
    }

    fn run(&mut self) -> Result<(), ParseDiagnostic> {
        while let Some(c) = self.peek() {
            let start = self.pos;
            match c {
                b'[' => {
                    let atom = self.bracket_atom()?;
                    self.add_atom(atom, true, start)?;
                }
                b'*' => {
                    if !self.allow_dummy {
                        return Err(err(start, ParseErrorKind::Lexical, "wildcard atom not allowed in a molecule"));
                    }
                    self.pos += 1;
                    self.add_atom(Atom::new(Element::DUMMY), true, start)?;
                }
                b'A'..=b'Z' | b'a'..=b'z' => {
                    let atom = self.organic_atom()?;
                    self.add_atom(atom, false, start)?;
                }
                b'-' | b'=' | b'#' | b':' | b'/' | b'\\' => {
                    if self.prev.is_none() {
                        return Err(err(start, ParseErrorKind::Syntax, "bond without a preceding atom"));
                    }
                    if self.pending.is_some() {
                        return Err(err(start, ParseErrorKind::Syntax, "two consecutive bond symbols"));
                    }
                    let order = match c {
                        b'=' => BondOrder::Double,
                        b'#' => BondOrder::Triple,
                        b':' => BondOrder::Aromatic,
                        _ => BondOrder::Single,
                    };
                    self.pending = Some(PendingBond { order, position: start });
                    self.pos += 1;
                }
                b'$' => return Err(err(start, ParseErrorKind::Lexical, "quadruple bonds are not supported")),
                b'(' => {
                    if self.prev.is_none() {
                        return Err(err(start, ParseErrorKind::Syntax, "branch without a preceding atom"));
                    }
                    if self.pending.is_some() {
                        return Err(err(start, ParseErrorKind::Syntax, "bond symbol before '('"));
                    }
                    self.branches.push((self.prev, start));
                    self.pos += 1;
                }
                b')' => {
                    if self.pending.is_some() {
                        return Err(err(start, ParseErrorKind::Syntax, "bond symbol before ')'"));
                    }
                    let Some((prev, _)) = self.branches.pop() else {
                        return Err(err(start, ParseErrorKind::Syntax, "unbalanced ')'"));
                    };
                    if self.text.get(start.wrapping_sub(1)) == Some(&b'(') {
                        return Err(err(start, ParseErrorKind::Syntax, "empty branch"));
                    }
                    self.prev = prev;
                    self.pos += 1;
                }
                b'0'..=b'9' | b'%' => {
                    let digit = self.ring_digit()?;
                    self.ring_closure(digit, start)?;
                }
                b'.' => {
                    if self.pending.is_some() {
                        return Err(err(start, ParseErrorKind::Syntax, "bond symbol before '.'"));
                    }
                    if self.prev.is_none() {
                        return Err(err(start, ParseErrorKind::Syntax, "'.' without a preceding atom"));
                    }
                    self.prev = None;
                    self.pos += 1;
                }
                _ => {
                    return Err(err(
                        start,
                        ParseErrorKind::Lexical,
                        format!("unexpected character '{}'", char::from(c)),
                    ))
                }
            }
        }
        if let Some(p) = self.pending {
            return Err(err(p.position, ParseErrorKind::Syntax, "dangling bond at end of input"));
        }
        if let Some(&(_, p)) = self.branches.last() {
            return Err(err(p, ParseErrorKind::UnclosedBranch, "'(' is never closed"));
        }
        if let Some(open) = self.rings.iter().flatten().min_by_key(|o| o.position) {
            return Err(err(
                open.position,
                ParseErrorKind::UnmatchedRingClosure,
                "ring-closure digit is never matched",
            ));
        }
        if self.atoms.is_empty() {
            return Err(err(self.last_pos(), ParseErrorKind::Empty, "no atoms"));
        }
        Ok(())
    }

    fn add_atom(&mut self, atom: Atom, bracket: bool, position: usize) -> Result<(), ParseDiagnostic> {
        let idx = self.atoms.len();
        let aromatic = atom.aromatic;
        self.atoms.push(RawAtom {
            atom,
            bracket,
            position,
        });
        if let Some(p) = self.prev {
            let order = match self.pending.take() {
                Some(b) => b.order,
                None if aromatic && self.atoms[p].atom.aromatic => BondOrder::Aromatic,
                None => BondOrder::Single,
            };
            self.bonds.push(RawBond {
                begin: p,
                end: idx,
                order,
            });
        } else if let Some(b) = self.pending {
            return Err(err(b.position, ParseErrorKind::Syntax, "bond without a preceding atom"));
        }
        self.prev = Some(idx);
        Ok(())
    }

    fn organic_atom(&mut self) -> Result<Atom, ParseDiagnostic> {
        let start = self.pos;
        let c = self.text[start];
        let next = self.text.get(start + 1).copied();
        let (element, aromatic, len) = match (c, next) {
            (b'C', Some(b'l')) => (Element::CL, false, 2),
            (b'B', Some(b'r')) => (Element::BR, false, 2),
            (b'B', _) => (Element::B, false, 1),
            (b'C', _) => (Element::C, false, 1),
            (b'N', _) => (Element::N, false, 1),
            (b'O', _) => (Element::O, false, 1),
            (b'P', _) => (Element::P, false, 1),
            (b'S', _) => (Element::S, false, 1),
            (b'F', _) => (Element::F, false, 1),
            (b'I', _) => (Element::I, false, 1),
            (b'b', _) => (Element::B, true, 1),
            (b'c', _) => (Element::C, true, 1),
            (b'n', _) => (Element::N, true, 1),
            (b'o', _) => (Element::O, true, 1),
            (b'p', _) => (Element::P, true, 1),
            (b's', _) => (Element::S, true, 1),
            _ => {
                return Err(err(
                    start,
                    ParseErrorKind::Lexical,
                    format!("'{}' is not an organic-subset atom; use brackets", char::from(c)),
                ))
            }
        };
        self.pos += len;
        let mut atom = Atom::new(element);
        atom.aromatic = aromatic;
        Ok(atom)
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
    }

    fn bracket_atom(&mut self) -> Result<Atom, ParseDiagnostic> {
        let open = self.pos;
        self.pos += 1;
        let isotope = self.number();
        let sym_start = self.pos;
        let rest = &self.text[self.pos..];
        let (element, aromatic, len) = if rest.first() == Some(&b'*') {
            if !self.allow_dummy {
                return Err(err(sym_start, ParseErrorKind::Lexical, "wildcard atom not allowed in a molecule"));
            }
            (Element::DUMMY, false, 1)
        } else if let Some((e, l)) = [("se", Element::SE), ("as", Element::from_symbol("As").unwrap()), ("te", Element::from_symbol("Te").unwrap())]
            .iter()
            .find(|(s, _)| rest.starts_with(s.as_bytes()))
            .map(|(s, e)| (*e, s.len()))
        {
            (e, true, l)
        } else {
            match rest.first() {
                Some(&c @ (b'b' | b'c' | b'n' | b'o' | b'p' | b's')) => {
                    let sym = (c as char).to_ascii_uppercase().to_string();
                    (Element::from_symbol(&sym).unwrap(), true, 1)
                }
                Some(&c) if c.is_ascii_uppercase() => {
                    let two = rest
                        .get(..2)
                        .filter(|t| t[1].is_ascii_lowercase())
                        .and_then(|t| std::str::from_utf8(t).ok())
                        .and_then(Element::from_symbol);
                    match two {
                        Some(e) => (e, false, 2),
                        None => {
                            let one = std::str::from_utf8(&rest[..1]).ok().and_then(Element::from_symbol);
                            match one {
                                Some(e) => (e, false, 1),
                                None => {
                                    return Err(err(sym_start, ParseErrorKind::Lexical, "unknown element symbol"))
                                }
                            }
                        }
                    }
                }
                _ => return Err(err(sym_start.min(self.last_pos()), ParseErrorKind::Lexical, "missing element symbol")),
            }
        };
        self.pos += len;
        let mut atom = Atom::new(element);
        atom.aromatic = aromatic;
        if element.is_dummy() {
            atom.label = isotope.unwrap_or(0).min(u16::MAX as u32) as u16;
        }

        // Chirality: consumed and discarded.
        while self.peek() == Some(b'@') {
            self.pos += 1;
        }
        let tail = &self.text[self.pos..];
        if ["TH", "AL", "SP", "TB", "OH"].iter().any(|t| tail.starts_with(t.as_bytes()))
            && tail.get(2).is_some_and(|c| c.is_ascii_digit())
        {
            self.pos += 2;
            self.number();
        }

        if self.peek() == Some(b'H') {
            self.pos += 1;
            atom.explicit_h = self.number().unwrap_or(1).min(16) as u8;
        }

        let mut charge: i32 = 0;
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            let unit = if sign == b'+' { 1 } else { -1 };
            self.pos += 1;
            if let Some(n) = self.number() {
                charge = unit * n as i32;
            } else {
                charge = unit;
                while self.peek() == Some(sign) {
                    charge += unit;
                    self.pos += 1;
                }
            }
            if charge.abs() > 8 {
                return Err(err(open, ParseErrorKind::Lexical, "charge out of range"));
            }
        }
        atom.formal_charge = charge as i8;

        if self.peek() == Some(b':') {
            self.pos += 1;
            if self.number().is_none() {
                return Err(err(self.pos.min(self.last_pos()), ParseErrorKind::Lexical, "atom class requires a number"));
            }
        }
        if self.peek() != Some(b']') {
            return Err(err(
                self.pos.min(self.last_pos()),
                ParseErrorKind::Lexical,
                "malformed bracket atom",
            ));
        }
        self.pos += 1;
        Ok(atom)
    }

    fn ring_digit(&mut self) -> Result<usize, ParseDiagnostic> {
        let start = self.pos;
        if self.text[start] == b'%' {
            let d = self.text.get(start + 1..start + 3);
            match d {
                Some(&[a, b]) if a.is_ascii_digit() && b.is_ascii_digit() => {
                    self.pos += 3;
                    Ok(((a - b'0') * 10 + (b - b'0')) as usize)
                }
                _ => Err(err(start, ParseErrorKind::Lexical, "'%' must be followed by two digits")),
            }
        } else {
            self.pos += 1;
            Ok((self.text[start] - b'0') as usize)
        }
    }

    fn ring_closure(&mut self, digit: usize, position: usize) -> Result<(), ParseDiagnostic> {
        let Some(cur) = self.prev else {
            return Err(err(position, ParseErrorKind::Syntax, "ring closure without a preceding atom"));
        };
        let here = self.pending.take();
        match self.rings[digit].take() {
            None => {
                self.rings[digit] = Some(OpenRing {
                    atom: cur,
                    bond: here.map(|b| b.order),
                    position,
                });
            }
            Some(open) => {
                if open.atom == cur {
                    return Err(err(position, ParseErrorKind::Syntax, "ring closure to the same atom"));
                }
                let order = match (open.bond, here.map(|b| b.order)) {
                    (Some(a), Some(b)) if a != b => {
                        return Err(err(position, ParseErrorKind::Syntax, "conflicting ring-closure bond symbols"))
                    }
                    (Some(a), _) | (None, Some(a)) => a,
                    (None, None) => {
                        if self.atoms[open.atom].atom.aromatic && self.atoms[cur].atom.aromatic {
                            BondOrder::Aromatic
                        } else {
                            BondOrder::Single
                        }
                    }
                };
                let dup = self.bonds.iter().any(|b| {
                    (b.begin == open.atom && b.end == cur) || (b.begin == cur && b.end == open.atom)
                });
                if dup {
                    return Err(err(position, ParseErrorKind::Syntax, "duplicate bond between the same atoms"));
                }
                self.bonds.push(RawBond {
                    begin: open.atom,
                    end: cur,
                    order,
                });
            }
        }
        Ok(())
    }
}
