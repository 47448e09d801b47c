//! Acceptance checks. Prints one line per criterion and exits non-zero if
//! any criterion fails. Criterion 3 needs the MOSES training set
//! (`MOLBENCH_MOSES_TRAIN` or `data/external/moses_train.smi`) and is
//! skipped when it is absent.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use molbench_core::chem::{BondOrder, Element, Molecule};
use molbench_core::dataset::{clean_leads_filter, deduplicate, split, FilterConfig, SplitSpec};
use molbench_core::decompose::scaffold_profile;
use molbench_core::descriptors::{train_contributions, train_np_contributions, Descriptor, ScoreTables};
use molbench_core::fingerprints::{morgan_fingerprint, tanimoto, BitFingerprint, FingerprintKind, DEFAULT_RADIUS, DEFAULT_WIDTH};
use molbench_core::metrics::{
    filters_fraction, frechet_distance, full_report, internal_diversity, internal_diversity_matrix, parse_valid,
    scaffold_similarity, snn, snn_matrix, EvalSets, FingerprintMatrix, GaussianSummary, ReportConfig, SimilarityForm,
    DEFAULT_BLOCK,
};
use molbench_core::substructure::{parse_pattern, FilterPack, Target};
use nalgebra::{DMatrix, DVector};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:.1?}, limit {limit:?}"))?;
    Ok(took)
}

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn fixture() -> Vec<String> {
    std::fs::read_to_string(fixture_path("reference_1k.smi"))
        .expect("fixture")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().to_string())
        .collect()
}

fn parse_all(smiles: &[String]) -> Vec<Molecule> {
    smiles.iter().map(|s| Molecule::from_smiles(s).expect("fixture molecule parses")).collect()
}

// 1. Identity suite

fn identity_suite() -> Check {
    let s = fixture();
    let mols = parse_all(&s);
    let sa = train_contributions(&mols).map_err(|e| e.to_string())?;
    let half = mols.len() / 2;
    let np = train_np_contributions(&mols[..half], &mols[half..]).map_err(|e| e.to_string())?;

    let start = Instant::now();
    let sets = EvalSets {
        generated: s.clone(),
        train: s.clone(),
        test: s.clone(),
        test_scaffolds: Some(s.clone()),
    };
    let config = ReportConfig {
        unique_k: vec![1000],
        properties: Descriptor::ALL.to_vec(),
        tables: ScoreTables {
            sa: Some(&sa),
            np: Some(&np),
        },
        ..ReportConfig::default()
    };
    let report = full_report(&sets, &config).map_err(|e| e.to_string())?;
    let took = within_time(start, Duration::from_secs(30), "full_report")?;

    let get = |name: &str| report.get(name).ok_or_else(|| format!("{name} missing from report"));
    let valid = get("Valid")?;
    ensure(valid == 1.0, || format!("Valid = {valid}"))?;
    let novelty = get("Novelty")?;
    ensure(novelty == 0.0, || format!("Novelty = {novelty}"))?;
    for name in ["Frag/Test", "Frag/TestSF", "Scaf/Test", "Scaf/TestSF"] {
        let v = get(name)?;
        ensure((v - 1.0).abs() <= 1e-9, || format!("{name} = {v}"))?;
    }
    for name in ["SNN/Test", "SNN/TestSF"] {
        let v = get(name)?;
        ensure(v == 1.0, || format!("{name} = {v}"))?;
    }
    for d in Descriptor::ALL {
        let name = format!("PropFD/{}", d.name());
        let v = get(&name)?;
        ensure(v.abs() <= 1e-9, || format!("{name} = {v}"))?;
    }
    Ok(format!(
        "{} metrics, IntDiv {:.4}, {took:.1?}",
        report.metrics.len(),
        get("IntDiv")?
    ))
}

// 2. Scaffold split

fn enumerated_dataset(base: &[String], target: usize) -> Vec<String> {
    let prefixes = [
        "", "C", "CC", "CCC", "CCCC", "CC(C)", "CC(C)C", "CO", "CCO", "COC", "CN", "CCN", "CN(C)", "CS", "CCS", "OCC",
        "NCC", "FC", "FCC", "ClC", "ClCC", "BrC", "C#CC", "C=CC", "N#CC", "CC(=O)", "OC(=O)C", "CCOC(=O)", "NC(=O)",
        "CNC(=O)", "CC(=O)N", "CS(=O)(=O)", "COCC", "CCOCC", "C1CC1", "C1CCC1", "C1CCCC1", "C1CCCCC1", "C1CCOC1",
        "C1CCNC1", "C1CCOCC1", "C1CCNCC1", "C1CSC1", "C1COC1", "c1ccccc1", "c1ccncc1", "c1cccnc1", "c1ccoc1",
        "c1ccsc1", "c1cnoc1", "c1cn[nH]c1", "c1ccc(F)cc1", "c1ccc(Cl)cc1", "c1ccc(C)cc1", "c1ccc(OC)cc1",
        "C1CC1C", "C1CCC1C", "C1CCCCC1C", "c1ccccc1C", "c1ccccc1CC", "c1ccncc1C", "C1CCOC1C", "C1CCN(C)CC1",
        "CC1CCCCC1", "OC1CCCC1", "NC1CCCC1", "FC1CCC1", "CC1CC1", "CCC1CC1", "C1CC2CCC1C2", "C1CC2CC2C1",
        "c1ccc2ccccc2c1", "c1ccc2[nH]ccc2c1", "c1ccc2occc2c1", "c1cc2ccccc2s1", "C1CC(C)CCC1", "c1cc(C)ccc1",
        "c1cc(F)ccc1", "c1cc(O)ccc1", "c1cc(N)ccc1", "c1cc(Cl)ccc1", "C1=CCCC1", "C1=CCCCC1", "C1CCC=C1",
        "COc1ccccc1", "Cc1ccccc1", "Fc1ccccc1", "Clc1ccccc1", "Oc1ccccc1", "Nc1ccccc1", "CCc1ccccc1",
        "CC(C)c1ccccc1", "C1CCOC1CC", "CC1CCOC1", "CC(F)(F)", "FC(F)(F)", "CC(C)(C)", "CCC(C)", "CCCCC",
        "OCCO", "NCCN", "CCOCCO", "CSCC", "CC#C", "C=C", "C=CC=C", "CC=CC", "O=CC", "N#C", "CN1CCCC1", "CN1CCCCC1",
        "C1CN(C)C1", "c1ccn(C)c1", "c1cnn(C)c1", "c1nccn1C", "c1ccc(C#N)cc1", "c1ccc(C(F)(F)F)cc1",
        "CCCCCC", "CCOC", "CCCO", "CCCN", "CC(O)", "CC(N)", "CC(F)", "CC(Cl)", "COCCO", "CCSC", "CC(C)CC",
        "C1CCCCCC1", "C1CCSCC1", "C1CCCOC1", "C1CCCNC1", "c1ccnnc1", "c1cncnc1", "c1cscn1", "c1cocn1",
        "c1ccc(Br)cc1", "c1ccc(O)cc1", "c1ccc(N)cc1", "c1ccc(CC)cc1", "C1CCN(CC)CC1", "CCN1CCCC1",
    ];
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(target);
    'outer: for p in prefixes {
        for s in base {
            let text = format!("{p}{s}");
            if let Ok(m) = Molecule::from_smiles(&text) {
                let c = m.canonical_smiles().to_string();
                if seen.insert(c.clone()) {
                    out.push(c);
                    if out.len() == target {
                        break 'outer;
                    }
                }
            }
        }
    }
    out
}

fn assert_disjoint_scaffolds(train: &[String], sf: &[String], label: &str) -> Result<(), String> {
    ensure(!sf.is_empty(), || format!("{label}: scaffold test set is empty"))?;
    let train = parse_all(train);
    let sf = parse_all(sf);
    let v = scaffold_similarity(&train, &sf, SimilarityForm::Similarity).map_err(|e| e.to_string())?;
    ensure(v == 0.0, || format!("{label}: Scaf(train, TestSF) = {v}"))?;
    let tp = scaffold_profile(&train);
    let sp = scaffold_profile(&sf);
    let shared = sp.iter().filter(|(k, _)| tp.get(k) > 0).count();
    ensure(shared == 0, || format!("{label}: {shared} scaffolds shared"))
}

fn scaffold_split() -> Check {
    let cfg = FilterConfig::default();
    let raw = std::fs::read(fixture_path("reference_1k.smi")).map_err(|e| e.to_string())?;
    let mut accepted = Vec::new();
    clean_leads_filter(&raw[..], &cfg, |s| {
        accepted.push(s);
        Ok(())
    }, |_| Ok(())).map_err(|e| e.to_string())?;
    let prepared = deduplicate(&accepted);
    let small = split(&prepared, &SplitSpec::default()).map_err(|e| e.to_string())?;
    assert_disjoint_scaffolds(&small.train, &small.scaffold_test, "fixture")?;

    let large = enumerated_dataset(&fixture(), 100_000);
    ensure(large.len() == 100_000, || format!("enumerated only {} molecules", large.len()))?;
    let start = Instant::now();
    let splits = split(&large, &SplitSpec::default()).map_err(|e| e.to_string())?;
    assert_disjoint_scaffolds(&splits.train, &splits.scaffold_test, "100k")?;
    let took = within_time(start, Duration::from_secs(60), "100k split + Scaf")?;
    Ok(format!(
        "fixture {}/{}/{}, 100k {}/{}/{}, Scaf = 0 exactly, {took:.1?}",
        small.train.len(),
        small.test.len(),
        small.scaffold_test.len(),
        splits.train.len(),
        splits.test.len(),
        splits.scaffold_test.len()
    ))
}

// 3. IntDiv on MOSES train

fn moses_train_path() -> Option<PathBuf> {
    if let Ok(p) = std::env::var("MOLBENCH_MOSES_TRAIN") {
        return Some(PathBuf::from(p));
    }
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/external/moses_train.smi");
    p.exists().then_some(p)
}

fn intdiv_moses() -> Outcome {
    let Some(path) = moses_train_path() else {
        return Outcome::Skip("MOSES train set not found; run scripts/fetch_moses.sh".into());
    };
    let run = || -> Check {
        let file = std::fs::File::open(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let lines: Vec<String> = BufReader::new(file)
            .lines()
            .map_while(Result::ok)
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty() && l != "SMILES")
            .collect();
        ensure(lines.len() >= 10_000, || format!("only {} molecules in {}", lines.len(), path.display()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(857);
        let sample: Vec<&String> = lines.choose_multiple(&mut rng, 10_000).collect();
        let mols = parse_valid(&sample);
        ensure(mols.len() == 10_000, || format!("{} of 10000 sampled molecules parse", mols.len()))?;

        let start = Instant::now();
        let fps: Vec<BitFingerprint> = mols
            .iter()
            .map(|m| morgan_fingerprint(m, DEFAULT_RADIUS, DEFAULT_WIDTH))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let matrix = FingerprintMatrix::new(&fps).map_err(|e| e.to_string())?;
        let d1 = internal_diversity_matrix(&matrix, 1, DEFAULT_BLOCK).map_err(|e| e.to_string())?;
        let d2 = internal_diversity_matrix(&matrix, 2, DEFAULT_BLOCK).map_err(|e| e.to_string())?;
        let took = within_time(start, Duration::from_secs(300), "IntDiv 10k")?;
        let detail = format!("IntDiv1 {d1:.4} (0.857 +/- 0.010), IntDiv2 {d2:.4} (0.851 +/- 0.010), {took:.1?}");
        ensure((d1 - 0.857).abs() <= 0.010 && (d2 - 0.851).abs() <= 0.010, || detail.clone())?;
        Ok(detail)
    };
    match run() {
        Ok(d) => Outcome::Pass(d),
        Err(d) => Outcome::Fail(d),
    }
}

// 4. Parser round trip

/// Building block of generated SMILES: text, free valence at the first and
/// last atom, atom count, whether the end atoms are aromatic, and whether
/// the block must end its chain (charged terminals with a fixed valence).
struct Unit {
    text: &'static str,
    head: u8,
    tail: u8,
    atoms: usize,
    aromatic: bool,
    terminal: bool,
}

const fn unit(text: &'static str, head: u8, tail: u8, atoms: usize, aromatic: bool) -> Unit {
    Unit {
        text,
        head,
        tail,
        atoms,
        aromatic,
        terminal: false,
    }
}

const fn terminal(text: &'static str, atoms: usize) -> Unit {
    Unit {
        text,
        head: 1,
        tail: 0,
        atoms,
        aromatic: false,
        terminal: true,
    }
}

const ATOM_UNITS: [Unit; 14] = [
    unit("C", 4, 4, 1, false),
    unit("C", 4, 4, 1, false),
    unit("C", 4, 4, 1, false),
    unit("C", 4, 4, 1, false),
    unit("N", 3, 3, 1, false),
    unit("N", 3, 3, 1, false),
    unit("O", 2, 2, 1, false),
    unit("S", 2, 2, 1, false),
    terminal("F", 1),
    terminal("Cl", 1),
    terminal("Br", 1),
    terminal("[NH3+]", 1),
    terminal("[O-]", 1),
    terminal("[N+](=O)[O-]", 3),
];

const RING_UNITS: [Unit; 14] = [
    unit("c1ccccc1", 1, 1, 6, true),
    unit("c1ccncc1", 1, 1, 6, true),
    unit("c1ccsc1", 1, 1, 5, true),
    unit("c1ccoc1", 1, 1, 5, true),
    unit("c1cc[nH]c1", 1, 1, 5, true),
    unit("c1cnn(C)c1", 1, 1, 6, true),
    unit("c1ccc2ccccc2c1", 1, 1, 10, true),
    unit("c1nc2ccccc2o1", 1, 0, 9, true),
    unit("C1CCCCC1", 2, 2, 6, false),
    unit("C1CCNCC1", 2, 2, 6, false),
    unit("C1CC1", 2, 2, 3, false),
    unit("C1CCOC1", 2, 2, 5, false),
    unit("C1=CCCC1", 1, 2, 5, false),
    unit("N1CCOCC1", 1, 2, 6, false),
];

struct SmilesGen {
    rng: ChaCha8Rng,
    out: String,
    atoms: usize,
    next_digit: u32,
    /// Open cross-unit ring bonds: digit, text range, unit serial.
    open: Vec<(u32, std::ops::Range<usize>, usize)>,
    closed: Vec<u32>,
    serial: usize,
}

impl SmilesGen {
    fn new(seed: u64) -> Self {
        SmilesGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            out: String::new(),
            atoms: 0,
            next_digit: 1,
            open: Vec::new(),
            closed: Vec::new(),
            serial: 0,
        }
    }

    fn pick(&mut self, room: usize, first: bool) -> Option<&'static Unit> {
        for _ in 0..20 {
            let u = if self.rng.random_bool(0.3) {
                &RING_UNITS[self.rng.random_range(0..RING_UNITS.len())]
            } else {
                &ATOM_UNITS[self.rng.random_range(0..ATOM_UNITS.len())]
            };
            let early_stop = u.terminal && room > 2 && self.rng.random_bool(0.7);
            if u.atoms <= room && !(first && u.terminal) && !early_stop {
                return Some(u);
            }
        }
        None
    }

    fn bond_text(&mut self, order: u8, aromatic_pair: bool) -> &'static str {
        match order {
            2 => "=",
            3 => "#",
            _ if aromatic_pair || self.rng.random_bool(0.1) => "-",
            _ => "",
        }
    }

    fn renumbered(&mut self, text: &str) -> String {
        let mut map = HashMap::new();
        let mut s = String::new();
        let mut bracket = false;
        for ch in text.chars() {
            bracket = (bracket || ch == '[') && ch != ']';
            if let Some(d) = ch.to_digit(10).filter(|_| !bracket) {
                let next = &mut self.next_digit;
                let n = *map.entry(d).or_insert_with(|| {
                    let v = *next;
                    *next += 1;
                    v
                });
                push_digit(&mut s, n);
            } else {
                s.push(ch);
            }
        }
        s
    }

    /// Writes a chain attached to an atom with the given free valence and
    /// aromatic flag (`None` for the start of the molecule).
    fn chain(&mut self, budget: usize, mut prev: Option<(u8, bool)>, depth: usize) {
        let start = self.atoms;
        loop {
            let room = budget.saturating_sub(self.atoms - start);
            if room == 0 {
                return;
            }
            let Some(u) = self.pick(room, prev.is_none()) else {
                return;
            };
            if let Some((free, arom)) = prev {
                let limit = free.min(u.head).min(3);
                let order = if !arom && !u.aromatic && limit >= 2 && self.rng.random_bool(0.2) {
                    self.rng.random_range(2..=limit)
                } else {
                    1
                };
                let bond = self.bond_text(order, arom && u.aromatic);
                self.out.push_str(bond);
                let text = self.renumbered(u.text);
                self.out.push_str(&text);
                self.atoms += u.atoms;
                self.serial += 1;
                let single_atom = u.atoms == 1 || u.terminal;
                let tail = if single_atom { u.head.saturating_sub(order) } else { u.tail };
                prev = Some((tail, u.aromatic));
            } else {
                let text = self.renumbered(u.text);
                self.out.push_str(&text);
                self.atoms += u.atoms;
                self.serial += 1;
                prev = Some((u.tail, u.aromatic));
            }
            if u.terminal {
                return;
            }
            let (mut free, arom) = prev.unwrap();
            if free >= 1 && self.rng.random_bool(0.1) {
                self.ring_bond(&mut free);
            }
            if depth < 3 && free >= 2 && self.rng.random_bool(0.3) {
                self.out.push('(');
                let before = self.atoms;
                let len = self.rng.random_range(1..=4);
                self.chain(len, Some((1, arom)), depth + 1);
                if self.atoms == before {
                    self.out.pop();
                } else {
                    self.out.push(')');
                    free -= 1;
                }
            }
            prev = Some((free, arom));
            if free == 0 || self.rng.random_bool(0.04) {
                return;
            }
        }
    }

    /// Opens or closes a single ring bond on the current atom.
    fn ring_bond(&mut self, free: &mut u8) {
        let closable = self.open.iter().position(|(_, _, s)| self.serial > s + 1);
        if let Some(i) = closable {
            let (d, _, _) = self.open.remove(i);
            self.out.push('-');
            push_digit(&mut self.out, d);
            self.closed.push(d);
        } else {
            let d = self.next_digit;
            self.next_digit += 1;
            let begin = self.out.len();
            push_digit(&mut self.out, d);
            self.open.push((d, begin..self.out.len(), self.serial));
        }
        *free -= 1;
    }

    fn smiles(&mut self) -> String {
        self.out.clear();
        self.atoms = 0;
        self.next_digit = 1;
        self.open.clear();
        self.closed.clear();
        self.serial = 0;
        let budget = self.rng.random_range(4..=20);
        self.chain(budget, None, 0);
        let mut text = std::mem::take(&mut self.out);
        let mut unclosed: Vec<_> = self.open.drain(..).map(|(_, r, _)| r).collect();
        unclosed.sort_by_key(|r| std::cmp::Reverse(r.start));
        for r in unclosed {
            text.replace_range(r, "");
        }
        text
    }
}

fn push_digit(out: &mut String, d: u32) {
    if d < 10 {
        write!(out, "{d}").unwrap();
    } else {
        write!(out, "%{d}").unwrap();
    }
}

fn atom_invariant(m: &Molecule, i: usize) -> (Element, i8, u8, bool, usize) {
    let a = m.atom(i);
    (a.element(), a.formal_charge(), a.total_h(), a.is_aromatic(), m.degree(i))
}

/// Brute-force graph isomorphism with element, charge, hydrogen, aromatic
/// and bond-order labels.
fn isomorphic(a: &Molecule, b: &Molecule) -> bool {
    let n = a.num_atoms();
    if n != b.num_atoms() || a.num_bonds() != b.num_bonds() {
        return false;
    }
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut q = std::collections::VecDeque::from([root]);
        while let Some(x) = q.pop_front() {
            order.push(x);
            for nb in a.neighbors(x) {
                let y = nb.atom as usize;
                if !seen[y] {
                    seen[y] = true;
                    q.push_back(y);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_iso(a, b, &order, 0, &mut map, &mut used)
}

fn extend_iso(a: &Molecule, b: &Molecule, order: &[usize], k: usize, map: &mut [usize], used: &mut [bool]) -> bool {
    if k == order.len() {
        return true;
    }
    let x = order[k];
    for y in 0..b.num_atoms() {
        if used[y] || atom_invariant(a, x) != atom_invariant(b, y) {
            continue;
        }
        let consistent = a.neighbors(x).iter().all(|nb| {
            let u = nb.atom as usize;
            if map[u] == usize::MAX {
                return true;
            }
            match b.bond_between(y, map[u]) {
                Some(bb) => b.bond(bb).order() == a.bond(nb.bond as usize).order(),
                None => false,
            }
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if extend_iso(a, b, order, k + 1, map, used) {
            return true;
        }
        map[x] = usize::MAX;
        used[y] = false;
    }
    false
}

fn random_molecules(count: usize, seed: u64) -> Vec<(String, Molecule)> {
    let mut generator = SmilesGen::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = generator.smiles();
        if let Ok(m) = Molecule::from_smiles(&s) {
            if m.num_atoms() <= 20 {
                out.push((s, m));
            }
        }
    }
    out
}

fn parser_round_trip() -> Check {
    let start = Instant::now();
    let cases = random_molecules(10_000, 4);
    let distinct: HashSet<&str> = cases.iter().map(|(_, m)| m.canonical_smiles()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut perm: Vec<usize> = Vec::new();
    for (input, m) in &cases {
        let canon = m.canonical_smiles();
        let again = Molecule::from_smiles(canon).map_err(|e| format!("{input}: canonical '{canon}' fails to parse: {e}"))?;
        ensure(isomorphic(m, &again), || format!("{input}: '{canon}' is not isomorphic to the input"))?;
        ensure(again.canonical_smiles() == canon, || {
            format!("{input}: canonical form not idempotent: {canon} vs {}", again.canonical_smiles())
        })?;
        perm.clear();
        perm.extend(0..m.num_atoms());
        for _ in 0..100 {
            perm.shuffle(&mut rng);
            let p = m.renumbered(&perm);
            ensure(p.canonical_smiles() == canon, || {
                format!("{input}: permutation {perm:?} gives {} instead of {canon}", p.canonical_smiles())
            })?;
        }
    }
    Ok(format!(
        "10000 cases ({} distinct), 1e6 permutations, {:.1?}",
        distinct.len(),
        start.elapsed()
    ))
}

// 5. Oracle equivalence

fn random_fp(rng: &mut ChaCha8Rng, width: usize, density: f64) -> BitFingerprint {
    let mut fp = BitFingerprint::new(FingerprintKind::Morgan, width).unwrap();
    for bit in 0..width {
        if rng.random_bool(density) {
            fp.set(bit);
        }
    }
    fp
}

fn oracle_tanimoto(a: &BitFingerprint, b: &BitFingerprint) -> f64 {
    let (mut both, mut either) = (0u32, 0u32);
    for i in 0..a.width() {
        let (x, y) = (a.get(i), b.get(i));
        both += (x && y) as u32;
        either += (x || y) as u32;
    }
    if either == 0 {
        1.0
    } else {
        both as f64 / either as f64
    }
}

fn oracle_snn(g: &[BitFingerprint], r: &[BitFingerprint]) -> f64 {
    let total: f64 = g
        .iter()
        .map(|x| r.iter().map(|y| oracle_tanimoto(x, y)).fold(f64::NEG_INFINITY, f64::max))
        .sum();
    total / g.len() as f64
}

fn oracle_intdiv(g: &[BitFingerprint], p: u32) -> f64 {
    let total: f64 = g
        .iter()
        .map(|x| g.iter().map(|y| oracle_tanimoto(x, y).powi(p as i32)).sum::<f64>())
        .sum();
    let mean = total / (g.len() * g.len()) as f64;
    1.0 - mean.powf(1.0 / p as f64)
}

#[derive(Clone, Copy)]
enum AtomSpec {
    Any,
    Elem(Element),
    Aromatic(Element),
    Aliphatic(Element),
}

#[derive(Clone, Copy)]
enum BondSpec {
    Default,
    Any,
    Exact(BondOrder),
}

impl AtomSpec {
    fn accepts(self, m: &Molecule, i: usize) -> bool {
        let a = m.atom(i);
        match self {
            AtomSpec::Any => true,
            AtomSpec::Elem(e) => a.element() == e,
            AtomSpec::Aromatic(e) => a.element() == e && a.is_aromatic(),
            AtomSpec::Aliphatic(e) => a.element() == e && !a.is_aromatic(),
        }
    }

    fn smarts(self) -> String {
        match self {
            AtomSpec::Any => "*".into(),
            AtomSpec::Elem(e) => format!("[#{}]", e.atomic_number()),
            AtomSpec::Aromatic(e) => format!("[{}]", e.symbol().to_lowercase()),
            AtomSpec::Aliphatic(e) => format!("[{}]", e.symbol()),
        }
    }
}

impl BondSpec {
    fn accepts(self, order: BondOrder) -> bool {
        match self {
            BondSpec::Default => matches!(order, BondOrder::Single | BondOrder::Aromatic),
            BondSpec::Any => true,
            BondSpec::Exact(o) => o == order,
        }
    }

    fn smarts(self) -> &'static str {
        match self {
            BondSpec::Default => "",
            BondSpec::Any => "~",
            BondSpec::Exact(BondOrder::Single) => "-",
            BondSpec::Exact(BondOrder::Double) => "=",
            BondSpec::Exact(BondOrder::Triple) => "#",
            BondSpec::Exact(BondOrder::Aromatic) => ":",
        }
    }
}

struct QueryGraph {
    atoms: Vec<AtomSpec>,
    bonds: Vec<(usize, usize, BondSpec)>,
}

const QUERY_ELEMENTS: [Element; 6] = [Element::C, Element::N, Element::O, Element::S, Element::F, Element::CL];

fn random_atom_spec(rng: &mut ChaCha8Rng, m: &Molecule, i: usize) -> AtomSpec {
    let a = m.atom(i);
    let e = if rng.random_bool(0.15) {
        QUERY_ELEMENTS[rng.random_range(0..QUERY_ELEMENTS.len())]
    } else {
        a.element()
    };
    let aromatic_ok = matches!(e, Element::C | Element::N | Element::O | Element::S);
    match rng.random_range(0..10) {
        0 => AtomSpec::Any,
        1..=3 => AtomSpec::Elem(e),
        4..=6 if aromatic_ok && (a.is_aromatic() || rng.random_bool(0.2)) => AtomSpec::Aromatic(e),
        _ => AtomSpec::Aliphatic(e),
    }
}

fn random_bond_spec(rng: &mut ChaCha8Rng, order: BondOrder) -> BondSpec {
    const ORDERS: [BondOrder; 4] = [BondOrder::Single, BondOrder::Double, BondOrder::Triple, BondOrder::Aromatic];
    match rng.random_range(0..10) {
        0..=3 => BondSpec::Default,
        4 => BondSpec::Any,
        5 => BondSpec::Exact(ORDERS[rng.random_range(0..4)]),
        _ => BondSpec::Exact(order),
    }
}

/// Connected query grown from a random atom of `m`, written in DFS order.
fn random_query(rng: &mut ChaCha8Rng, m: &Molecule) -> QueryGraph {
    let size = rng.random_range(1..=6).min(m.num_atoms());
    let mut chosen = vec![rng.random_range(0..m.num_atoms())];
    while chosen.len() < size {
        let frontier: Vec<usize> = chosen
            .iter()
            .flat_map(|&x| m.neighbors(x).iter().map(|nb| nb.atom as usize))
            .filter(|y| !chosen.contains(y))
            .collect();
        if frontier.is_empty() {
            break;
        }
        chosen.push(frontier[rng.random_range(0..frontier.len())]);
    }
    let index = |x: usize| chosen.iter().position(|&c| c == x);
    let atoms = chosen.iter().map(|&x| random_atom_spec(rng, m, x)).collect();
    let mut bonds = Vec::new();
    for b in m.bonds() {
        let (u, v) = b.endpoints();
        if let (Some(i), Some(j)) = (index(u), index(v)) {
            if rng.random_bool(0.85) {
                bonds.push((i, j, random_bond_spec(rng, b.order())));
            }
        }
    }
    let mut q = QueryGraph { atoms, bonds };
    keep_connected(&mut q);
    q
}

fn keep_connected(q: &mut QueryGraph) {
    let n = q.atoms.len();
    let mut reach = vec![false; n];
    reach[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for &(i, j, _) in &q.bonds {
            if reach[i] != reach[j] {
                reach[i] = true;
                reach[j] = true;
                changed = true;
            }
        }
    }
    if reach.iter().all(|&r| r) {
        return;
    }
    let keep: Vec<usize> = (0..n).filter(|&i| reach[i]).collect();
    let new_index = |i: usize| keep.iter().position(|&k| k == i);
    q.bonds = q
        .bonds
        .iter()
        .filter_map(|&(i, j, s)| Some((new_index(i)?, new_index(j)?, s)))
        .collect();
    q.atoms = keep.iter().map(|&i| q.atoms[i]).collect();
}

struct SmartsWriter<'q> {
    q: &'q QueryGraph,
    adj: Vec<Vec<(usize, BondSpec)>>,
    tree: HashSet<(usize, usize)>,
    closures: Vec<Vec<(u32, BondSpec)>>,
    done: Vec<bool>,
    text: String,
}

impl SmartsWriter<'_> {
    fn is_tree(&self, x: usize, y: usize) -> bool {
        self.tree.contains(&(x.min(y), x.max(y)))
    }

    fn spanning_tree(&mut self, x: usize, order: &mut Vec<usize>) {
        self.done[x] = true;
        order.push(x);
        for k in 0..self.adj[x].len() {
            let y = self.adj[x][k].0;
            if !self.done[y] {
                self.tree.insert((x.min(y), x.max(y)));
                self.spanning_tree(y, order);
            }
        }
    }

    fn emit(&mut self, x: usize, from: Option<BondSpec>) {
        self.done[x] = true;
        if let Some(s) = from {
            self.text.push_str(s.smarts());
        }
        self.text.push_str(&self.q.atoms[x].smarts());
        for &(d, s) in &self.closures[x] {
            self.text.push_str(s.smarts());
            push_digit(&mut self.text, d);
        }
        let children: Vec<(usize, BondSpec)> = self.adj[x]
            .iter()
            .copied()
            .filter(|&(y, _)| !self.done[y] && self.is_tree(x, y))
            .collect();
        for (k, &(y, s)) in children.iter().enumerate() {
            let last = k + 1 == children.len();
            if !last {
                self.text.push('(');
            }
            self.emit(y, Some(s));
            if !last {
                self.text.push(')');
            }
        }
    }
}

/// SMARTS text for the query and the query-atom order of that text.
fn write_smarts(q: &QueryGraph) -> (String, Vec<usize>) {
    let n = q.atoms.len();
    let mut adj: Vec<Vec<(usize, BondSpec)>> = vec![Vec::new(); n];
    for &(i, j, s) in &q.bonds {
        adj[i].push((j, s));
        adj[j].push((i, s));
    }
    let mut w = SmartsWriter {
        q,
        adj,
        tree: HashSet::new(),
        closures: vec![Vec::new(); n],
        done: vec![false; n],
        text: String::new(),
    };
    let mut order = Vec::new();
    w.spanning_tree(0, &mut order);
    let mut digit = 1;
    for &(i, j, s) in &q.bonds {
        if !w.is_tree(i, j) {
            w.closures[i].push((digit, s));
            w.closures[j].push((digit, s));
            digit += 1;
        }
    }
    w.done = vec![false; n];
    w.emit(0, None);
    (w.text, order)
}

/// Every injective map of query atoms onto molecule atoms satisfying all
/// atom and bond predicates, reduced to the set of matched atoms.
fn oracle_matches(q: &QueryGraph, m: &Molecule) -> BTreeSet<Vec<usize>> {
    fn extend(q: &QueryGraph, m: &Molecule, map: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        let k = map.len();
        if k == q.atoms.len() {
            let mut set = map.clone();
            set.sort_unstable();
            out.insert(set);
            return;
        }
        for y in 0..m.num_atoms() {
            if map.contains(&y) || !q.atoms[k].accepts(m, y) {
                continue;
            }
            let ok = q.bonds.iter().all(|&(i, j, s)| {
                let (other, this) = if i == k && j < k {
                    (j, y)
                } else if j == k && i < k {
                    (i, y)
                } else {
                    return true;
                };
                match m.bond_between(this, map[other]) {
                    Some(b) => s.accepts(m.bond(b).order()),
                    None => false,
                }
            });
            if ok {
                map.push(y);
                extend(q, m, map, out);
                map.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    extend(q, m, &mut Vec::new(), &mut out);
    out
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let mut tanimoto_cases = 0;
    for width in [64, 128] {
        for density in [0.0, 0.05, 0.3, 0.7, 1.0] {
            for _ in 0..200 {
                let a = random_fp(&mut rng, width, density);
                let other = rng.random_range(0.0..=1.0);
                let b = random_fp(&mut rng, width, other);
                let t = tanimoto(&a, &b).map_err(|e| e.to_string())?;
                ensure(t == oracle_tanimoto(&a, &b), || format!("tanimoto {t} vs oracle {}", oracle_tanimoto(&a, &b)))?;
                tanimoto_cases += 1;
            }
        }
    }

    let mut set_cases = 0;
    for width in [64, 128] {
        for ng in 1..=8 {
            for nr in 1..=8 {
                for _ in 0..10 {
                    let density = rng.random_range(0.02..0.6);
                    let g: Vec<_> = (0..ng).map(|_| random_fp(&mut rng, width, density)).collect();
                    let r: Vec<_> = (0..nr).map(|_| random_fp(&mut rng, width, density)).collect();
                    let s = snn(&g, &r).map_err(|e| e.to_string())?;
                    ensure(s == oracle_snn(&g, &r), || format!("snn {s} vs oracle {} ({ng}x{nr})", oracle_snn(&g, &r)))?;
                    for p in [1, 2] {
                        let d = internal_diversity(&g, p).map_err(|e| e.to_string())?;
                        let o = oracle_intdiv(&g, p);
                        ensure(d == o, || format!("IntDiv{p} {d} vs oracle {o} (|G| = {ng})"))?;
                    }
                    set_cases += 1;
                }
            }
        }
    }

    let mut targets: Vec<Molecule> = random_molecules(300, 55).into_iter().map(|(_, m)| m).collect();
    targets.extend(parse_all(&fixture()).into_iter().filter(|m| m.num_atoms() <= 24).take(200));
    let mut pattern_cases = 0;
    let mut hits = 0;
    for _ in 0..3000 {
        let source = &targets[rng.random_range(0..targets.len())];
        let q = random_query(&mut rng, source);
        let (text, order) = write_smarts(&q);
        let pattern = parse_pattern(&text).map_err(|e| format!("generated pattern '{text}': {e}"))?;
        for _ in 0..4 {
            let target = &targets[rng.random_range(0..targets.len())];
            for m in [source, target] {
                let reordered = QueryGraph {
                    atoms: order.iter().map(|&i| q.atoms[i]).collect(),
                    bonds: q
                        .bonds
                        .iter()
                        .map(|&(i, j, s)| {
                            let p = |x| order.iter().position(|&o| o == x).unwrap();
                            (p(i), p(j), s)
                        })
                        .collect(),
                };
                let expected = oracle_matches(&reordered, m);
                let got: BTreeSet<Vec<usize>> = pattern
                    .find_matches_in(&Target::new(m))
                    .into_iter()
                    .map(|mut v| {
                        v.sort_unstable();
                        v
                    })
                    .collect();
                ensure(got == expected, || {
                    format!(
                        "pattern '{text}' on {}: {} match sets vs oracle {}",
                        m.canonical_smiles(),
                        got.len(),
                        expected.len()
                    )
                })?;
                hits += !expected.is_empty() as usize;
                pattern_cases += 1;
            }
        }
    }
    Ok(format!(
        "{tanimoto_cases} tanimoto, {set_cases} snn/intdiv sets, {pattern_cases} pattern/molecule pairs ({hits} matching), {:.1?}",
        start.elapsed()
    ))
}

// 6. Fréchet numerics

fn random_psd(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    let rank = rng.random_range(1..=dim);
    let a = DMatrix::from_fn(dim, rank, |_, _| rng.sample::<f64, _>(StandardNormal));
    &a * a.transpose() / rank as f64
}

fn random_orthogonal(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    a.qr().q()
}

fn sample_gaussian(rng: &mut ChaCha8Rng, mean: &DVector<f64>, q: &DMatrix<f64>, var: &[f64], n: usize) -> Vec<Vec<f64>> {
    let dim = mean.len();
    let scale = DMatrix::from_diagonal(&DVector::from_iterator(dim, var.iter().map(|v| v.sqrt())));
    let transform = q * scale;
    (0..n)
        .map(|_| {
            let z = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
            (mean + &transform * z).iter().copied().collect()
        })
        .collect()
}

fn frechet_numerics() -> Check {
    let scalar = |m: f64, v: f64| {
        GaussianSummary::new(DVector::from_element(1, m), DMatrix::from_element(1, 1, v), 10).unwrap()
    };
    let fd = |a: &GaussianSummary, b: &GaussianSummary| frechet_distance(a, b).map_err(|e| e.to_string());
    for (a, b, expected) in [
        (scalar(0.0, 1.0), scalar(1.0, 1.0), 1.0),
        (scalar(0.0, 4.0), scalar(0.0, 1.0), 1.0),
        (scalar(2.5, 3.0), scalar(2.5, 3.0), 0.0),
        (scalar(-1.0, 9.0), scalar(2.0, 0.25), 9.0 + (3.0f64 - 0.5).powi(2)),
        (scalar(0.0, 0.0), scalar(0.0, 2.0), 2.0),
    ] {
        let v = fd(&a, &b)?;
        ensure((v - expected).abs() <= 1e-10, || format!("1-D case gave {v}, expected {expected}"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_asym = 0.0f64;
    for case in 0..100 {
        let dim = if case < 10 { 64 } else { rng.random_range(1..=64) };
        let mk = |rng: &mut ChaCha8Rng| {
            let mean = DVector::from_fn(dim, |_, _| rng.random_range(-2.0..2.0));
            GaussianSummary::new(mean, random_psd(rng, dim), 100).unwrap()
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let ab = fd(&a, &b)?;
        let ba = fd(&b, &a)?;
        worst_asym = worst_asym.max((ab - ba).abs());
        ensure((ab - ba).abs() <= 1e-8, || format!("dim {dim}: FD(a,b) = {ab}, FD(b,a) = {ba}"))?;
        ensure(ab >= 0.0, || format!("dim {dim}: negative distance {ab}"))?;
    }

    // Commuting covariances Q D1 Q^T and Q D2 Q^T give the closed form
    // |m1 - m2|^2 + sum (sqrt d1 - sqrt d2)^2.
    let mut worst_rel = 0.0f64;
    for dim in [1, 2, 4, 8] {
        let q = random_orthogonal(&mut rng, dim);
        let d1: Vec<f64> = (0..dim).map(|_| rng.random_range(0.5..4.0)).collect();
        let d2: Vec<f64> = (0..dim).map(|_| rng.random_range(0.5..4.0)).collect();
        let m1 = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
        let m2 = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0) + 1.5);
        let exact = (&m1 - &m2).norm_squared()
            + d1.iter().zip(&d2).map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2)).sum::<f64>();
        let xa = sample_gaussian(&mut rng, &m1, &q, &d1, 200_000);
        let xb = sample_gaussian(&mut rng, &m2, &q, &d2, 200_000);
        let fa = GaussianSummary::fit(&xa).map_err(|e| e.to_string())?;
        let fb = GaussianSummary::fit(&xb).map_err(|e| e.to_string())?;
        let v = fd(&fa, &fb)?;
        let rel = (v - exact).abs() / exact;
        worst_rel = worst_rel.max(rel);
        ensure(rel <= 0.02, || format!("dim {dim}: sampled {v}, closed form {exact}"))?;
    }
    Ok(format!(
        "1-D closed forms exact, max asymmetry {worst_asym:.1e}, Monte-Carlo max rel. error {:.2}%",
        worst_rel * 100.0
    ))
}

// 7. Filter pipeline

const MCF_EXAMPLES: [(&str, &str, &str); 22] = [
    ("MCF1", "C=CC#N", "CCC#N"),
    ("MCF2", "C=CS(=O)(=O)C", "CCS(=O)(=O)C"),
    ("MCF3", "C=CC(=O)N", "CCC(=O)N"),
    ("MCF4", "CCCl", "CC(C)Cl"),
    ("MCF5", "CC1CO1", "CC1CCO1"),
    ("MCF6", "CN=C=O", "CN=C=S"),
    ("MCF7", "CCC=O", "CC(C)=O"),
    ("MCF8", "CC(=N)C", "CC(=NC)C"),
    ("MCF9", "CC1CN1", "CC1CCN1"),
    ("MCF10", "CNNC", "CNC"),
    ("MCF11", "CN=NC", "c1ccnnc1"),
    ("MCF12", "Cc1ccco1", "Cc1ccc(C)o1"),
    ("MCF13", "Cc1cccs1", "Cc1ccc(C)s1"),
    ("MCF14", "Clc1ccccn1", "Clc1ccccc1"),
    ("MCF15", "ONc1ccccc1", "Nc1ccccc1"),
    ("MCF16", "CSSC", "CSCSC"),
    ("MCF17", "CN=[N+]=[N-]", "CN=NC"),
    ("MCF18", "CNCNC", "CNC(C)NC"),
    ("MCF19", "COC(C)OC", "COCCOC"),
    ("MCF20", "Fc1cc(F)cc(F)c1", "FC(F)(F)c1ccccc1"),
    ("MCF21", "Clc1cc(Cl)cc(Cl)c1", "Clc1ccc(Cl)cc1"),
    ("MCF22", "Brc1cc(Br)cc(Br)c1", "Brc1ccc(Br)cc1"),
];

fn filter_pipeline() -> Check {
    let cfg = FilterConfig::default();
    let mut input = fixture().join("\n");
    input.push_str("\nCN=[N+]=[N-]\nnot-a-smiles\nCC.CC\n");
    let mut accepted = Vec::new();
    let stats = clean_leads_filter(input.as_bytes(), &cfg, |s| {
        accepted.push(s);
        Ok(())
    }, |_| Ok(())).map_err(|e| e.to_string())?;
    ensure(!accepted.is_empty(), || "no molecules accepted".into())?;
    let mols = parse_valid(&accepted);
    ensure(mols.len() == accepted.len(), || "emitted molecules fail to parse".into())?;
    let fraction = filters_fraction(&mols, &cfg).map_err(|e| e.to_string())?;
    ensure(fraction == 1.0, || format!("filters_fraction of emitted set = {fraction}"))?;

    let mcf = FilterPack::mcf();
    ensure(mcf.rules.len() == 22, || format!("MCF pack has {} rules", mcf.rules.len()))?;
    for (name, pos, neg) in MCF_EXAMPLES {
        let rule = mcf.find(name).ok_or_else(|| format!("{name} missing from pack"))?;
        for (smiles, expect) in [(pos, true), (neg, false)] {
            let m = Molecule::from_smiles(smiles).map_err(|e| format!("{smiles}: {e}"))?;
            let fires = rule.fires(&Target::new(&m));
            ensure(fires == expect, || format!("{name} on {smiles}: fires = {fires}, expected {expect}"))?;
        }
    }
    Ok(format!(
        "{} of {} accepted, filters_fraction 1.0, 22 MCF positive/negative pairs",
        stats.accepted, stats.records
    ))
}

// 8. Throughput

fn throughput() -> Check {
    let smiles = fixture();
    let heavy: usize = parse_all(&smiles).iter().map(|m| m.heavy_atom_count()).sum();
    let reps = 10;
    let start = Instant::now();
    let mut bits = 0u64;
    for _ in 0..reps {
        for s in &smiles {
            let m = Molecule::from_smiles(s).map_err(|e| e.to_string())?;
            std::hint::black_box(m.canonical_smiles());
            let fp = morgan_fingerprint(&m, DEFAULT_RADIUS, DEFAULT_WIDTH).map_err(|e| e.to_string())?;
            bits += fp.count_ones() as u64;
        }
    }
    std::hint::black_box(bits);
    let rate = (reps * smiles.len()) as f64 / start.elapsed().as_secs_f64();
    ensure(rate >= 5000.0, || format!("{rate:.0} molecules/s single-threaded"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mols = parse_all(&smiles);
    let fps: Vec<BitFingerprint> = mols
        .iter()
        .map(|m| morgan_fingerprint(m, DEFAULT_RADIUS, DEFAULT_WIDTH).unwrap())
        .collect();
    let make = |rng: &mut ChaCha8Rng| -> Vec<BitFingerprint> {
        (0..10_000)
            .map(|_| {
                let mut fp = fps[rng.random_range(0..fps.len())].clone();
                for _ in 0..8 {
                    fp.set(rng.random_range(0..DEFAULT_WIDTH));
                }
                fp
            })
            .collect()
    };
    let g = FingerprintMatrix::new(&make(&mut rng)).map_err(|e| e.to_string())?;
    let r = FingerprintMatrix::new(&make(&mut rng)).map_err(|e| e.to_string())?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(8).build().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let v = pool.install(|| snn_matrix(&g, &r, DEFAULT_BLOCK)).map_err(|e| e.to_string())?;
    let took = within_time(start, Duration::from_secs(60), "SNN 10k x 10k")?;
    Ok(format!(
        "{rate:.0} molecules/s (mean {:.1} heavy atoms), SNN 10k x 10k = {v:.4} in {took:.1?} on 8 workers",
        heavy as f64 / smiles.len() as f64
    ))
}

fn main() -> ExitCode {
    type Criterion = fn() -> Outcome;
    let criteria: [(&str, Criterion); 8] = [
        ("identity suite", || identity_suite().into()),
        ("scaffold split", || scaffold_split().into()),
        ("IntDiv on MOSES train", intdiv_moses),
        ("parser round trip", || parser_round_trip().into()),
        ("oracle equivalence", || oracle_equivalence().into()),
        ("Frechet numerics", || frechet_numerics().into()),
        ("filter pipeline", || filter_pipeline().into()),
        ("throughput", || throughput().into()),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (tag, detail) = match check() {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        println!("criterion {} {name}: {tag} ({detail})", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

impl From<Check> for Outcome {
    fn from(c: Check) -> Self {
        match c {
            Ok(d) => Outcome::Pass(d),
            Err(d) => Outcome::Fail(d),
        }
    }
}
