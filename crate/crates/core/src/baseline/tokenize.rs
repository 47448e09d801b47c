//! SMILES tokens for the n-gram model.

/// Splits a SMILES string into tokens. Bracket atoms, `Cl`, `Br` and `%nn`
/// ring closures are single tokens; everything else is one character.
/// An unterminated bracket becomes one token running to the end.
pub fn tokenize(smiles: &str) -> Vec<&str> {
    let b = smiles.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let end = match b[i] {
            b'[' => b[i..].iter().position(|&c| c == b']').map_or(b.len(), |p| i + p + 1),
            b'C' if b.get(i + 1) == Some(&b'l') => i + 2,
            b'B' if b.get(i + 1) == Some(&b'r') => i + 2,
            b'%' if b.len() >= i + 3 && b[i + 1].is_ascii_digit() && b[i + 2].is_ascii_digit() => i + 3,
            _ => i + smiles[i..].chars().next().map_or(1, char::len_utf8),
        };
        out.push(&smiles[i..end]);
        i = end;
    }
    out
}
