use std::collections::BTreeMap;

/// Occurrence counts of canonical strings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Profile {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl Profile {
    pub fn new() -> Self {
        Profile::default()
    }

    pub fn add(&mut self, key: impl Into<String>, n: u64) {
        if n == 0 {
            return;
        }
        *self.counts.entry(key.into()).or_insert(0) += n;
        self.total += n;
    }

    pub fn merge(&mut self, other: &Profile) {
        for (k, &v) in &other.counts {
            self.add(k.clone(), v);
        }
    }

    pub fn get(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl<S: Into<String>> FromIterator<S> for Profile {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut p = Profile::new();
        for s in iter {
            p.add(s, 1);
        }
        p
    }
}

pub fn build_profile<S: Into<String>>(strings: impl IntoIterator<Item = S>) -> Profile {
    strings.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty() {
        let p = build_profile(Vec::<String>::new());
        assert_eq!(p.total(), 0);
        assert!(p.is_empty());
    }

    #[test]
    fn counts() {
        let p = build_profile(["A", "A", "B"]);
        assert_eq!((p.get("A"), p.get("B"), p.total()), (2, 1, 3));
    }

    #[test]
    fn union_doubles() {
        let g = ["A", "B", "B", "C"];
        let p = build_profile(g);
        let pp = build_profile(g.iter().chain(g.iter()).copied());
        for (k, v) in p.iter() {
            assert_eq!(pp.get(k), 2 * v);
        }
        let mut m = p.clone();
        m.merge(&p);
        assert_eq!(m, pp);
    }
}
