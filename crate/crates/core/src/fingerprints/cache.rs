//! Binary fingerprint cache.
//!
//! Layout (little-endian): magic `MOLFP001`, u8 kind code, u32 width in
//! bits, u64 row count, then `width / 64` u64 words per row.

use std::io::{Read, Write};

use super::bits::{BitFingerprint, FingerprintError, FingerprintKind};

const MAGIC: &[u8; 8] = b"MOLFP001";

/// Writes a batch of same-kind, same-width fingerprints.
pub fn write_cache<W: Write>(mut w: W, fps: &[BitFingerprint]) -> Result<(), FingerprintError> {
    let (kind, width) = match fps.first() {
        Some(f) => (f.kind(), f.width()),
        None => (FingerprintKind::Morgan, 64),
    };
    for f in fps {
        if f.kind() != kind {
            return Err(FingerprintError::KindMismatch(kind, f.kind()));
        }
        if f.width() != width {
            return Err(FingerprintError::WidthMismatch(width, f.width()));
        }
    }
    let width32 = u32::try_from(width).map_err(|_| FingerprintError::BadWidth(width))?;
    w.write_all(MAGIC)?;
    w.write_all(&[kind.code()])?;
    w.write_all(&width32.to_le_bytes())?;
    w.write_all(&(fps.len() as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(width / 8);
    for f in fps {
        buf.clear();
        for word in f.words() {
            buf.extend_from_slice(&word.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    w.flush()?;
    Ok(())
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<(), FingerprintError> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => FingerprintError::Format(format!("truncated {what}")),
        _ => FingerprintError::Io(e),
    })
}

pub fn read_cache<R: Read>(mut r: R) -> Result<Vec<BitFingerprint>, FingerprintError> {
    let mut header = [0u8; 21];
    read_exact(&mut r, &mut header, "header")?;
    if &header[..8] != MAGIC {
        return Err(FingerprintError::Format("bad magic".to_string()));
    }
    let kind = FingerprintKind::from_code(header[8])
        .ok_or_else(|| FingerprintError::Format(format!("unknown kind code {}", header[8])))?;
    let width = u32::from_le_bytes(header[9..13].try_into().expect("4 bytes")) as usize;
    if width == 0 || !width.is_multiple_of(64) {
        return Err(FingerprintError::BadWidth(width));
    }
    let count = u64::from_le_bytes(header[13..21].try_into().expect("8 bytes"));
    let nwords = width / 64;
    let mut row = vec![0u8; width / 8];
    let mut out = Vec::with_capacity(count.min(1 << 20) as usize);
    for _ in 0..count {
        read_exact(&mut r, &mut row, "row")?;
        let words = row
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect::<Vec<_>>();
        debug_assert_eq!(words.len(), nwords);
        out.push(BitFingerprint::from_words(kind, words));
    }
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(FingerprintError::Format("trailing bytes".to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(bits: &[usize]) -> BitFingerprint {
        let mut f = BitFingerprint::new(FingerprintKind::Morgan, 128).unwrap();
        for &b in bits {
            f.set(b);
        }
        f
    }

    #[test]
    fn round_trip() {
        let fps = vec![fp(&[0, 5, 127]), fp(&[]), fp(&[64])];
        let mut buf = Vec::new();
        write_cache(&mut buf, &fps).unwrap();
        assert_eq!(buf.len(), 21 + 3 * 16);
        assert_eq!(read_cache(&buf[..]).unwrap(), fps);
    }

    #[test]
    fn rejects_corruption() {
        let mut buf = Vec::new();
        write_cache(&mut buf, &[fp(&[1])]).unwrap();
        assert!(matches!(read_cache(&buf[..buf.len() - 1]), Err(FingerprintError::Format(_))));
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_cache(&bad[..]), Err(FingerprintError::Format(_))));
        let mut long = buf.clone();
        long.push(0);
        assert!(matches!(read_cache(&long[..]), Err(FingerprintError::Format(_))));
    }

    #[test]
    fn mixed_widths_rejected() {
        let other = BitFingerprint::new(FingerprintKind::Morgan, 64).unwrap();
        assert!(write_cache(Vec::new(), &[fp(&[]), other]).is_err());
    }
}
