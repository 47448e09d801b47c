//! Query language: a SMARTS subset without recursion or component grouping.

use crate::chem::Element;

use super::matcher::{self, Plan};

/// Maximum nesting depth of a predicate tree.
pub const MAX_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("pattern error at position {position}: {message}")]
pub struct PatternError {
    pub position: usize,
    pub message: String,
}

fn perr(position: usize, message: impl Into<String>) -> PatternError {
    PatternError {
        position,
        message: message.into(),
    }
}

/// Logical predicate tree over primitives of type `P`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr<P> {
    Prim(P),
    Not(Box<Expr<P>>),
    And(Vec<Expr<P>>),
    Or(Vec<Expr<P>>),
}

impl<P> Expr<P> {
    pub fn eval(&self, f: &impl Fn(&P) -> bool) -> bool {
        match self {
            Expr::Prim(p) => f(p),
            Expr::Not(e) => !e.eval(f),
            Expr::And(v) => v.iter().all(|e| e.eval(f)),
            Expr::Or(v) => v.iter().any(|e| e.eval(f)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Prim(_) => 1,
            Expr::Not(e) => 1 + e.depth(),
            Expr::And(v) | Expr::Or(v) => 1 + v.iter().map(Expr::depth).max().unwrap_or(0),
        }
    }

    /// Primitives that must hold for the whole expression to hold.
    pub(crate) fn required(&self) -> Vec<&P> {
        match self {
            Expr::Prim(p) => vec![p],
            Expr::And(v) => v.iter().flat_map(Expr::required).collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomPrim {
    Any,
    Aromatic,
    Aliphatic,
    /// Element with an optional aromaticity requirement (`C`, `c`, `Cl`).
    Element(Element, Option<bool>),
    AtomicNumber(u8),
    /// `H<n>`: total attached hydrogens.
    HydrogenCount(u8),
    /// `D<n>`: explicit connections.
    Degree(u8),
    /// `X<n>`: total connections including hydrogens.
    Connectivity(u8),
    /// `R` without a number.
    InRing,
    /// `R<n>`: number of basis rings containing the atom.
    RingCount(u8),
    /// `r<n>`: size of the smallest ring containing the atom.
    RingSize(u8),
    /// `x<n>`: number of ring bonds.
    RingBonds(u8),
    /// `v<n>`: total bond order including hydrogens.
    Valence(u8),
    Charge(i8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BondPrim {
    /// Unspecified bond: single or aromatic.
    Implicit,
    Single,
    Double,
    Triple,
    Aromatic,
    Any,
    Ring,
}

pub type AtomExpr = Expr<AtomPrim>;
pub type BondExpr = Expr<BondPrim>;

#[derive(Debug, Clone, PartialEq)]
pub struct QueryBond {
    pub begin: usize,
    pub end: usize,
    pub expr: BondExpr,
}

/// A parsed substructure query.
#[derive(Debug, Clone)]
pub struct Pattern {
    pub(crate) text: String,
    pub(crate) atoms: Vec<AtomExpr>,
    pub(crate) bonds: Vec<QueryBond>,
    /// Minimum number of atoms per atomic number any match needs.
    pub(crate) required_elements: Vec<(u8, u16)>,
    pub(crate) free_plan: Plan,
    pub(crate) anchored_plan: Plan,
}

impl Pattern {
    pub fn text(&self) -> &str {
        &self.text
    }
    pub fn atoms(&self) -> &[AtomExpr] {
        &self.atoms
    }
    pub fn bonds(&self) -> &[QueryBond] {
        &self.bonds
    }
    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }
    /// Whether any query atom can only match a hydrogen atom, so the target
    /// needs explicit hydrogens.
    pub fn names_hydrogen(&self) -> bool {
        self.atoms.iter().any(|a| {
            a.required().iter().any(|p| {
                matches!(p, AtomPrim::AtomicNumber(1)) || matches!(p, AtomPrim::Element(e, _) if *e == Element::H)
            })
        })
    }
}

impl std::str::FromStr for Pattern {
    type Err = PatternError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pattern(s)
    }
}

pub fn parse_pattern(text: &str) -> Result<Pattern, PatternError> {
    if text.is_empty() {
        return Err(perr(0, "empty pattern"));
    }
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        atoms: Vec::new(),
        bonds: Vec::new(),
        prev: None,
        pending: None,
        branches: Vec::new(),
        rings: vec![None; 100],
    };
    p.run()?;
    let mut adjacency = vec![Vec::new(); p.atoms.len()];
    for (i, b) in p.bonds.iter().enumerate() {
        adjacency[b.begin].push((b.end, i));
        adjacency[b.end].push((b.begin, i));
    }
    let mut need = std::collections::BTreeMap::new();
    for a in &p.atoms {
        let z = a.required().into_iter().find_map(|prim| match prim {
            AtomPrim::Element(e, _) => Some(e.atomic_number()),
            AtomPrim::AtomicNumber(z) => Some(*z),
            _ => None,
        });
        if let Some(z) = z {
            *need.entry(z).or_insert(0u16) += 1;
        }
    }
    let free_plan = matcher::plan(&p.atoms, &adjacency, matcher::choose_root(&p.atoms, &adjacency));
    let anchored_plan = matcher::plan(&p.atoms, &adjacency, 0);
    Ok(Pattern {
        text: text.to_string(),
        atoms: p.atoms,
        bonds: p.bonds,
        required_elements: need.into_iter().collect(),
        free_plan,
        anchored_plan,
    })
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    atoms: Vec<AtomExpr>,
    bonds: Vec<QueryBond>,
    prev: Option<usize>,
    pending: Option<(BondExpr, usize)>,
    branches: Vec<(Option<usize>, usize)>,
    rings: Vec<Option<(usize, Option<BondExpr>, usize)>>,
}

fn is_bond_char(c: u8) -> bool {
    matches!(c, b'-' | b'=' | b'#' | b':' | b'~' | b'@' | b'!' | b'&' | b',' | b';' | b'/' | b'\\')
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn end_pos(&self) -> usize {
        self.pos.min(self.s.len() - 1)
    }

    fn run(&mut self) -> Result<(), PatternError> {
        while let Some(c) = self.peek() {
            let start = self.pos;
            match c {
                b'[' => {
                    self.pos += 1;
                    let e = self.expr(&atom_prim, &|c| c != b']')?;
                    if self.peek() != Some(b']') {
                        return Err(perr(self.end_pos(), "expected ']'"));
                    }
                    self.pos += 1;
                    self.add_atom(e, start)?;
                }
                b'(' => {
                    if self.prev.is_none() || self.pending.is_some() {
                        return Err(perr(start, "misplaced '('"));
                    }
                    self.branches.push((self.prev, start));
                    self.pos += 1;
                }
                b')' => {
                    if self.pending.is_some() {
                        return Err(perr(start, "bond before ')'"));
                    }
                    let Some((prev, _)) = self.branches.pop() else {
                        return Err(perr(start, "unbalanced ')'"));
                    };
                    self.prev = prev;
                    self.pos += 1;
                }
                b'0'..=b'9' | b'%' => self.ring_closure(start)?,
                b'.' => return Err(perr(start, "disconnected patterns are not supported")),
                b'$' => return Err(perr(start, "recursive patterns are not supported")),
                c if is_bond_char(c) => {
                    if self.prev.is_none() || self.pending.is_some() {
                        return Err(perr(start, "misplaced bond"));
                    }
                    let e = self.expr(&bond_prim, &is_bond_char)?;
                    self.pending = Some((e, start));
                }
                _ => {
                    let e = self.bare_atom()?;
                    self.add_atom(e, start)?;
                }
            }
        }
        if let Some((_, p)) = self.pending {
            return Err(perr(p, "dangling bond"));
        }
        if let Some(&(_, p)) = self.branches.last() {
            return Err(perr(p, "unclosed branch"));
        }
        if let Some((_, _, p)) = self.rings.iter().flatten().min_by_key(|r| r.2) {
            return Err(perr(*p, "unmatched ring closure"));
        }
        if self.atoms.is_empty() {
            return Err(perr(0, "no atoms"));
        }
        Ok(())
    }

    fn add_atom(&mut self, e: AtomExpr, start: usize) -> Result<(), PatternError> {
        if e.depth() > MAX_DEPTH {
            return Err(perr(start, format!("predicate nesting deeper than {MAX_DEPTH}")));
        }
        let idx = self.atoms.len();
        self.atoms.push(e);
        if let Some(p) = self.prev {
            let expr = self
                .pending
                .take()
                .map(|b| b.0)
                .unwrap_or(Expr::Prim(BondPrim::Implicit));
            self.bonds.push(QueryBond {
                begin: p,
                end: idx,
                expr,
            });
        }
        self.prev = Some(idx);
        Ok(())
    }

    fn ring_closure(&mut self, start: usize) -> Result<(), PatternError> {
        let digit = if self.s[start] == b'%' {
            match self.s.get(start + 1..start + 3) {
                Some(&[a, b]) if a.is_ascii_digit() && b.is_ascii_digit() => {
                    self.pos += 3;
                    ((a - b'0') * 10 + (b - b'0')) as usize
                }
                _ => return Err(perr(start, "'%' needs two digits")),
            }
        } else {
            self.pos += 1;
            (self.s[start] - b'0') as usize
        };
        let Some(cur) = self.prev else {
            return Err(perr(start, "ring closure without an atom"));
        };
        let here = self.pending.take().map(|b| b.0);
        match self.rings[digit].take() {
            None => self.rings[digit] = Some((cur, here, start)),
            Some((other, there, _)) => {
                if other == cur {
                    return Err(perr(start, "ring closure to the same atom"));
                }
                let expr = match (there, here) {
                    (Some(a), Some(b)) if a == b => a,
                    (Some(a), Some(b)) => Expr::And(vec![a, b]),
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => Expr::Prim(BondPrim::Implicit),
                };
                self.bonds.push(QueryBond {
                    begin: other,
                    end: cur,
                    expr,
                });
            }
        }
        Ok(())
    }

    fn bare_atom(&mut self) -> Result<AtomExpr, PatternError> {
        let start = self.pos;
        let c = self.s[start];
        let next = self.s.get(start + 1).copied();
        let (prim, len) = match (c, next) {
            (b'C', Some(b'l')) => (AtomPrim::Element(Element::CL, Some(false)), 2),
            (b'B', Some(b'r')) => (AtomPrim::Element(Element::BR, Some(false)), 2),
            (b'*', _) => (AtomPrim::Any, 1),
            (b'a', _) => (AtomPrim::Aromatic, 1),
            (b'A', _) => (AtomPrim::Aliphatic, 1),
            (b'B' | b'C' | b'N' | b'O' | b'P' | b'S' | b'F' | b'I', _) => {
                let e = Element::from_symbol(std::str::from_utf8(&[c]).unwrap()).unwrap();
                (AtomPrim::Element(e, Some(false)), 1)
            }
            (b'b' | b'c' | b'n' | b'o' | b'p' | b's', _) => {
                let e = Element::from_symbol(&(c as char).to_ascii_uppercase().to_string()).unwrap();
                (AtomPrim::Element(e, Some(true)), 1)
            }
            _ => return Err(perr(start, format!("unexpected character '{}'", c as char))),
        };
        self.pos += len;
        Ok(Expr::Prim(prim))
    }

    /// Precedence: `!` binds tightest, then `&` and juxtaposition, then `,`,
    /// then `;`.
    fn expr<P>(
        &mut self,
        prim: &impl Fn(&mut Parser, bool) -> Result<P, PatternError>,
        inside: &impl Fn(u8) -> bool,
    ) -> Result<Expr<P>, PatternError> {
        let first = self.pos;
        let mut parts = vec![self.or_expr(prim, inside, first)?];
        while self.peek() == Some(b';') {
            self.pos += 1;
            parts.push(self.or_expr(prim, inside, first)?);
        }
        Ok(collapse(parts, Expr::And))
    }

    fn or_expr<P>(
        &mut self,
        prim: &impl Fn(&mut Parser, bool) -> Result<P, PatternError>,
        inside: &impl Fn(u8) -> bool,
        first: usize,
    ) -> Result<Expr<P>, PatternError> {
        let mut parts = vec![self.and_expr(prim, inside, first)?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            parts.push(self.and_expr(prim, inside, first)?);
        }
        Ok(collapse(parts, Expr::Or))
    }

    fn and_expr<P>(
        &mut self,
        prim: &impl Fn(&mut Parser, bool) -> Result<P, PatternError>,
        inside: &impl Fn(u8) -> bool,
        first: usize,
    ) -> Result<Expr<P>, PatternError> {
        let mut parts = vec![self.unary(prim, inside, first)?];
        loop {
            match self.peek() {
                Some(b'&') => {
                    self.pos += 1;
                    parts.push(self.unary(prim, inside, first)?);
                }
                Some(c) if inside(c) && c != b',' && c != b';' => {
                    parts.push(self.unary(prim, inside, first)?);
                }
                _ => break,
            }
        }
        Ok(collapse(parts, Expr::And))
    }

    fn unary<P>(
        &mut self,
        prim: &impl Fn(&mut Parser, bool) -> Result<P, PatternError>,
        inside: &impl Fn(u8) -> bool,
        first: usize,
    ) -> Result<Expr<P>, PatternError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Expr::Not(Box::new(self.unary(prim, inside, first)?)))
            }
            Some(c) if inside(c) && !matches!(c, b'&' | b',' | b';') => {
                let at_start = self.pos == first;
                Ok(Expr::Prim(prim(self, at_start)?))
            }
            _ => Err(perr(self.end_pos(), "expected a primitive")),
        }
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }
}

fn collapse<P>(mut parts: Vec<Expr<P>>, join: fn(Vec<Expr<P>>) -> Expr<P>) -> Expr<P> {
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        join(parts)
    }
}

fn bond_prim(p: &mut Parser, _first: bool) -> Result<BondPrim, PatternError> {
    let c = p.s[p.pos];
    let prim = match c {
        b'-' | b'/' | b'\\' => BondPrim::Single,
        b'=' => BondPrim::Double,
        b'#' => BondPrim::Triple,
        b':' => BondPrim::Aromatic,
        b'~' => BondPrim::Any,
        b'@' => BondPrim::Ring,
        _ => return Err(perr(p.pos, "unknown bond primitive")),
    };
    p.pos += 1;
    Ok(prim)
}

/// Two-letter element symbol at the cursor whose first letter is `c`.
fn two_letter(p: &Parser, c: u8) -> Option<Element> {
    let n = *p.s.get(p.pos + 1)?;
    if !n.is_ascii_lowercase() {
        return None;
    }
    Element::from_symbol(std::str::from_utf8(&[c, n]).ok()?)
}

fn small(p: &mut Parser, default: u32, at: usize) -> Result<u8, PatternError> {
    let v = p.number().unwrap_or(default);
    u8::try_from(v).map_err(|_| perr(at, "count out of range"))
}

fn atom_prim(p: &mut Parser, first: bool) -> Result<AtomPrim, PatternError> {
    let at = p.pos;
    let c = p.s[at];
    if c.is_ascii_uppercase() {
        if let Some(e) = two_letter(p, c) {
            p.pos += 2;
            return Ok(AtomPrim::Element(e, Some(false)));
        }
    }
    match c {
        b'*' => {
            p.pos += 1;
            Ok(AtomPrim::Any)
        }
        b'$' => Err(perr(at, "recursive patterns are not supported")),
        b'0'..=b'9' => {
            // Isotope: accepted and ignored.
            p.number();
            Ok(AtomPrim::Any)
        }
        b'@' => {
            while p.peek() == Some(b'@') {
                p.pos += 1;
            }
            Ok(AtomPrim::Any)
        }
        b'#' => {
            p.pos += 1;
            let z = p.number().ok_or_else(|| perr(at, "'#' needs an atomic number"))?;
            let z = u8::try_from(z)
                .ok()
                .filter(|&z| Element::from_atomic_number(z).is_some())
                .ok_or_else(|| perr(at, "unknown atomic number"))?;
            Ok(AtomPrim::AtomicNumber(z))
        }
        b'+' | b'-' => {
            p.pos += 1;
            let unit: i32 = if c == b'+' { 1 } else { -1 };
            let mut charge = unit;
            if let Some(n) = p.number() {
                charge = unit * n as i32;
            } else {
                while p.peek() == Some(c) {
                    p.pos += 1;
                    charge += unit;
                }
            }
            i8::try_from(charge)
                .map(AtomPrim::Charge)
                .map_err(|_| perr(at, "charge out of range"))
        }
        b'H' => {
            p.pos += 1;
            let hydrogen_atom = first && matches!(p.peek(), None | Some(b']' | b'+' | b'-' | b';' | b'&' | b','));
            if hydrogen_atom {
                Ok(AtomPrim::Element(Element::H, None))
            } else {
                Ok(AtomPrim::HydrogenCount(small(p, 1, at)?))
            }
        }
        b'D' => {
            p.pos += 1;
            Ok(AtomPrim::Degree(small(p, 1, at)?))
        }
        b'X' => {
            p.pos += 1;
            Ok(AtomPrim::Connectivity(small(p, 1, at)?))
        }
        b'v' => {
            p.pos += 1;
            Ok(AtomPrim::Valence(small(p, 1, at)?))
        }
        b'x' => {
            p.pos += 1;
            match p.number() {
                Some(n) => Ok(AtomPrim::RingBonds(n.min(255) as u8)),
                None => Ok(AtomPrim::InRing),
            }
        }
        b'R' => {
            p.pos += 1;
            match p.number() {
                Some(n) => Ok(AtomPrim::RingCount(n.min(255) as u8)),
                None => Ok(AtomPrim::InRing),
            }
        }
        b'r' => {
            p.pos += 1;
            match p.number() {
                Some(n) => Ok(AtomPrim::RingSize(n.min(255) as u8)),
                None => Ok(AtomPrim::InRing),
            }
        }
        b'a' if p.s.get(at + 1) == Some(&b's') => {
            p.pos += 2;
            Ok(AtomPrim::Element(Element::from_symbol("As").unwrap(), Some(true)))
        }
        b'a' => {
            p.pos += 1;
            Ok(AtomPrim::Aromatic)
        }
        b'A' => {
            p.pos += 1;
            Ok(AtomPrim::Aliphatic)
        }
        b's' if p.s.get(at + 1) == Some(&b'e') => {
            p.pos += 2;
            Ok(AtomPrim::Element(Element::SE, Some(true)))
        }
        b't' if p.s.get(at + 1) == Some(&b'e') => {
            p.pos += 2;
            Ok(AtomPrim::Element(Element::from_symbol("Te").unwrap(), Some(true)))
        }
        b'b' | b'c' | b'n' | b'o' | b'p' | b's' => {
            p.pos += 1;
            let e = Element::from_symbol(&(c as char).to_ascii_uppercase().to_string()).unwrap();
            Ok(AtomPrim::Element(e, Some(true)))
        }
        c if c.is_ascii_uppercase() => {
            let e = Element::from_symbol(std::str::from_utf8(&[c]).unwrap())
                .ok_or_else(|| perr(at, "unknown element symbol"))?;
            p.pos += 1;
            Ok(AtomPrim::Element(e, Some(false)))
        }
        _ => Err(perr(at, format!("unexpected character '{}'", c as char))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carbonyl_query() {
        let p = parse_pattern("[CX3]=[OX1]").unwrap();
        assert_eq!(p.num_atoms(), 2);
        assert_eq!(p.bonds()[0].expr, Expr::Prim(BondPrim::Double));
        assert_eq!(
            p.atoms()[0],
            Expr::And(vec![
                Expr::Prim(AtomPrim::Element(Element::C, Some(false))),
                Expr::Prim(AtomPrim::Connectivity(3)),
            ])
        );
    }

    #[test]
    fn aromatic_ring_query() {
        let p = parse_pattern("c1ccccc1").unwrap();
        assert_eq!(p.num_atoms(), 6);
        assert_eq!(p.bonds().len(), 6);
    }

    #[test]
    fn negated_ring_membership() {
        let p = parse_pattern("[N;!R]=[N;!R]").unwrap();
        let expected = Expr::And(vec![
            Expr::Prim(AtomPrim::Element(Element::N, Some(false))),
            Expr::Not(Box::new(Expr::Prim(AtomPrim::InRing))),
        ]);
        assert_eq!(p.atoms()[0], expected);
        assert_eq!(p.atoms()[1], expected);
    }

    #[test]
    fn operator_precedence() {
        let p = parse_pattern("[C,N;!H0]").unwrap();
        assert!(matches!(&p.atoms()[0], Expr::And(v) if matches!(v[0], Expr::Or(_))));
        let q = parse_pattern("[!#1!#6]").unwrap();
        assert!(matches!(&q.atoms()[0], Expr::And(v) if v.len() == 2));
        let r = parse_pattern("C=&!@C").unwrap();
        assert!(matches!(&r.bonds()[0].expr, Expr::And(v) if v.len() == 2));
    }

    #[test]
    fn hydrogen_atom_versus_count() {
        let p = parse_pattern("[H]C([H])").unwrap();
        assert!(p.names_hydrogen());
        let q = parse_pattern("[CH2]").unwrap();
        assert!(!q.names_hydrogen());
    }

    #[test]
    fn rejections_carry_positions() {
        for (s, pos) in [("C.C", 1), ("[$(C)]", 1), ("C(", 1), ("[C", 1), ("C1CC", 1), ("C=", 1)] {
            let e = parse_pattern(s).unwrap_err();
            assert_eq!(e.position, pos, "{s}: {e}");
        }
    }

    #[test]
    fn depth_is_bounded() {
        assert!(parse_pattern("[!!!!!!!!C]").is_err());
        assert!(parse_pattern("[!!!C]").is_ok());
    }
}
