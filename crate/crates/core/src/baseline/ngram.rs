//! Maximum-likelihood token n-gram model.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::tokenize::tokenize;
use super::BaselineError;

pub const MODEL_MAGIC: &[u8; 8] = b"MOLNGRAM";
pub const MODEL_VERSION: u32 = 1;
pub const MAX_ORDER: usize = 8;

/// Reserved token ids.
pub const BEGIN: u32 = 0;
pub const END: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Successors {
    tokens: Vec<u32>,
    /// Running totals of the counts, for inverse-CDF draws.
    cumulative: Vec<u64>,
}

impl Successors {
    fn from_counts(counts: &BTreeMap<u32, u64>) -> Self {
        let mut total = 0;
        let (tokens, cumulative) = counts
            .iter()
            .map(|(&t, &c)| {
                total += c;
                (t, total)
            })
            .unzip();
        Successors { tokens, cumulative }
    }

    fn total(&self) -> u64 {
        *self.cumulative.last().unwrap_or(&0)
    }

    fn counts(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        let mut prev = 0;
        self.tokens.iter().zip(&self.cumulative).map(move |(&t, &c)| {
            let n = c - prev;
            prev = c;
            (t, n)
        })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> u32 {
        let x = rng.random_range(0..self.total());
        let k = self.cumulative.partition_point(|&c| c <= x);
        self.tokens[k]
    }
}

/// Token n-gram counts. Contexts are the previous `order - 1` tokens, padded
/// with [`BEGIN`] at the start of a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NgramModel {
    order: usize,
    /// Token strings by id; ids 0 and 1 are the begin and end markers.
    alphabet: Vec<String>,
    table: HashMap<Vec<u32>, Successors>,
    seed: u64,
}

fn check_order(n: usize) -> Result<(), BaselineError> {
    if (1..=MAX_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(BaselineError::BadOrder(n))
    }
}

/// Counts n-grams over the non-empty strings of `corpus`.
pub fn train_ngram<S: AsRef<str>>(corpus: &[S], n: usize, seed: u64) -> Result<NgramModel, BaselineError> {
    check_order(n)?;
    let mut symbols: Vec<&str> = corpus.iter().flat_map(|s| tokenize(s.as_ref())).collect();
    symbols.sort_unstable();
    symbols.dedup();
    if symbols.is_empty() {
        return Err(BaselineError::EmptyCorpus);
    }
    let mut alphabet = vec!["^".to_string(), "$".to_string()];
    alphabet.extend(symbols.iter().map(|s| s.to_string()));
    let ids: HashMap<&str, u32> = symbols.iter().enumerate().map(|(i, s)| (*s, i as u32 + 2)).collect();
    let mut counts: HashMap<Vec<u32>, BTreeMap<u32, u64>> = HashMap::new();
    for s in corpus {
        let toks = tokenize(s.as_ref());
        if toks.is_empty() {
            continue;
        }
        let mut seq = vec![BEGIN; n - 1];
        seq.extend(toks.iter().map(|t| ids[t]));
        seq.push(END);
        for w in seq.windows(n) {
            *counts.entry(w[..n - 1].to_vec()).or_default().entry(w[n - 1]).or_default() += 1;
        }
    }
    let table = counts.iter().map(|(k, v)| (k.clone(), Successors::from_counts(v))).collect();
    Ok(NgramModel {
        order: n,
        alphabet,
        table,
        seed,
    })
}

fn put_u32(w: &mut impl Write, x: u32) -> std::io::Result<()> {
    w.write_all(&x.to_le_bytes())
}

fn put_u64(w: &mut impl Write, x: u64) -> std::io::Result<()> {
    w.write_all(&x.to_le_bytes())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], BaselineError> {
        if self.bytes.len() - self.pos < n {
            return Err(BaselineError::Format("truncated model file".into()));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u16(&mut self) -> Result<u16, BaselineError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32, BaselineError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64, BaselineError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

impl NgramModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
    }

    /// Corpus tokens, without the begin and end markers.
    pub fn tokens(&self) -> &[String] {
        &self.alphabet[2..]
    }

    pub fn num_contexts(&self) -> usize {
        self.table.len()
    }

    /// Successor counts after `context` (token strings; `^` for padding).
    pub fn successor_counts(&self, context: &[&str]) -> Option<Vec<(String, u64)>> {
        let key: Option<Vec<u32>> = context
            .iter()
            .map(|t| self.alphabet.iter().position(|a| a == t).map(|i| i as u32))
            .collect();
        let succ = self.table.get(&key?)?;
        Some(succ.counts().map(|(t, c)| (self.alphabet[t as usize].clone(), c)).collect())
    }

    /// One string from substream `index`. Generation stops at the end marker
    /// or once the string reaches `max_len` bytes, in which case it is cut
    /// to `max_len`.
    pub fn sample_one(&self, index: u64, max_len: usize) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let k = self.order - 1;
        let mut ctx = vec![BEGIN; k];
        let mut out = String::new();
        while out.len() < max_len {
            let Some(succ) = self.table.get(&ctx) else { break };
            let t = succ.draw(&mut rng);
            if t == END {
                break;
            }
            out.push_str(&self.alphabet[t as usize]);
            if k > 0 {
                ctx.remove(0);
                ctx.push(t);
            }
        }
        if out.len() > max_len {
            let mut cut = max_len;
            while !out.is_char_boundary(cut) {
                cut -= 1;
            }
            out.truncate(cut);
        }
        out
    }

    /// `count` strings; string `i` is drawn from ChaCha8 seeded with the
    /// model seed, stream `i`, so output does not depend on thread count.
    pub fn sample(&self, count: usize, max_len: usize) -> Vec<String> {
        (0..count as u64)
            .into_par_iter()
            .map(|i| self.sample_one(i, max_len))
            .collect()
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<(), BaselineError> {
        w.write_all(MODEL_MAGIC)?;
        put_u32(&mut w, MODEL_VERSION)?;
        put_u32(&mut w, self.order as u32)?;
        put_u64(&mut w, self.seed)?;
        put_u32(&mut w, self.alphabet.len() as u32)?;
        for t in &self.alphabet {
            w.write_all(&(t.len() as u16).to_le_bytes())?;
            w.write_all(t.as_bytes())?;
        }
        let mut contexts: Vec<&Vec<u32>> = self.table.keys().collect();
        contexts.sort();
        put_u64(&mut w, contexts.len() as u64)?;
        for c in contexts {
            for &t in c {
                put_u32(&mut w, t)?;
            }
            let succ = &self.table[c];
            put_u32(&mut w, succ.tokens.len() as u32)?;
            for (t, n) in succ.counts() {
                put_u32(&mut w, t)?;
                put_u64(&mut w, n)?;
            }
        }
        Ok(())
    }

    pub fn read<R: Read>(mut r: R) -> Result<Self, BaselineError> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let mut c = Cursor { bytes: &bytes, pos: 0 };
        if c.take(8)? != MODEL_MAGIC {
            return Err(BaselineError::Format("not an n-gram model file".into()));
        }
        let version = c.u32()?;
        if version != MODEL_VERSION {
            return Err(BaselineError::Format(format!("unsupported model version {version}")));
        }
        let order = c.u32()? as usize;
        check_order(order)?;
        let seed = c.u64()?;
        let n_tokens = c.u32()? as usize;
        let mut alphabet = Vec::with_capacity(n_tokens.min(1 << 16));
        for _ in 0..n_tokens {
            let len = c.u16()? as usize;
            let s = std::str::from_utf8(c.take(len)?)
                .map_err(|_| BaselineError::Format("token is not UTF-8".into()))?;
            alphabet.push(s.to_string());
        }
        if alphabet.len() < 3 {
            return Err(BaselineError::Format("empty alphabet".into()));
        }
        let bad_id = |t: u32| t as usize >= alphabet.len();
        let n_ctx = c.u64()?;
        let mut table = HashMap::new();
        for _ in 0..n_ctx {
            let ctx: Vec<u32> = (0..order - 1).map(|_| c.u32()).collect::<Result<_, _>>()?;
            let n = c.u32()?;
            let mut counts = BTreeMap::new();
            for _ in 0..n {
                let t = c.u32()?;
                let k = c.u64()?;
                if bad_id(t) || k == 0 {
                    return Err(BaselineError::Format("bad successor entry".into()));
                }
                counts.insert(t, k);
            }
            if ctx.iter().any(|&t| bad_id(t)) || counts.is_empty() {
                return Err(BaselineError::Format("bad context entry".into()));
            }
            table.insert(ctx, Successors::from_counts(&counts));
        }
        if c.pos != bytes.len() {
            return Err(BaselineError::Format("trailing bytes".into()));
        }
        Ok(NgramModel {
            order,
            alphabet,
            table,
            seed,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), BaselineError> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BaselineError> {
        Self::read(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}
