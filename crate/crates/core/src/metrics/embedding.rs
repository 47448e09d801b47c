//! Externally computed embedding vectors, stored as
//! `MOLEMB01 | u32 dim | u64 count | count*dim f32`, little-endian.

use std::io::{Read, Write};
use std::path::Path;

use super::frechet::GaussianSummary;
use super::MetricsError;

pub const EMBEDDING_MAGIC: &[u8; 8] = b"MOLEMB01";

#[derive(Debug, Clone, PartialEq)]
pub struct Embeddings {
    dim: usize,
    data: Vec<f32>,
}

impl Embeddings {
    pub fn new(dim: usize, data: Vec<f32>) -> Result<Self, MetricsError> {
        if dim == 0 || !data.len().is_multiple_of(dim) {
            return Err(MetricsError::Format(format!(
                "{} values do not form rows of dimension {dim}",
                data.len()
            )));
        }
        Ok(Embeddings { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn summary(&self) -> Result<GaussianSummary, MetricsError> {
        let rows: Vec<Vec<f64>> = self
            .data
            .chunks_exact(self.dim)
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect();
        GaussianSummary::fit(&rows)
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<(), MetricsError> {
        w.write_all(EMBEDDING_MAGIC)?;
        w.write_all(&(self.dim as u32).to_le_bytes())?;
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        for x in &self.data {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read<R: Read>(mut r: R) -> Result<Self, MetricsError> {
        let mut header = [0u8; 20];
        r.read_exact(&mut header)
            .map_err(|_| MetricsError::Format("truncated embedding header".into()))?;
        if &header[..8] != EMBEDDING_MAGIC {
            return Err(MetricsError::Format("not an embedding file".into()));
        }
        let dim = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
        let count = u64::from_le_bytes(header[12..20].try_into().unwrap());
        if dim == 0 {
            return Err(MetricsError::Format("zero embedding dimension".into()));
        }
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let expected = (count as u128) * (dim as u128) * 4;
        if bytes.len() as u128 != expected {
            return Err(MetricsError::Format(format!(
                "expected {expected} bytes of rows, found {}",
                bytes.len()
            )));
        }
        let data = bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Embeddings { dim, data })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MetricsError> {
        Self::read(std::io::BufReader::new(std::fs::File::open(path)?))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), MetricsError> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write(&mut w)?;
        w.flush()?;
        Ok(())
    }
}
