use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use molbench_core::fingerprints::FingerprintSpec;
use molbench_core::metrics::{internal_diversity_matrix, snn_matrix, FingerprintMatrix, DEFAULT_BLOCK};
use molbench_core::substructure::FilterPack;
use molbench_core::Molecule;

const DRUGS: &[&str] = &[
    "CC(=O)Nc1ccc(O)cc1",
    "CN1CCC[C@H]1c1cccnc1",
    "COc1ccc2[nH]cc(CCN(C)C)c2c1",
    "O=C(O)c1ccccc1OC(=O)C",
    "CC(C)Cc1ccc(C(C)C(=O)O)cc1",
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
    "O=C1CN=C(c2ccccc2)c2cc(Cl)ccc2N1C",
    "CCN(CC)CC(=O)Nc1c(C)cccc1C",
    "Cc1ccc(S(=O)(=O)NC(=O)NN2CCCCCC2)cc1",
    "CC1(C)SC2C(NC(=O)Cc3ccccc3)C(=O)N2C1C(=O)O",
];

fn corpus(n: usize) -> Vec<Molecule> {
    DRUGS
        .iter()
        .cycle()
        .take(n)
        .map(|s| Molecule::from_smiles(s).unwrap())
        .collect()
}

fn parse_and_canonicalize(c: &mut Criterion) {
    c.bench_function("parse+canonical", |b| {
        b.iter(|| {
            for s in DRUGS {
                let m = Molecule::from_smiles(black_box(s)).unwrap();
                black_box(m.canonical_smiles());
            }
        })
    });
}

fn morgan(c: &mut Criterion) {
    let mols = corpus(DRUGS.len());
    let spec = FingerprintSpec::default();
    c.bench_function("morgan r2 1024", |b| {
        b.iter(|| {
            for m in &mols {
                black_box(spec.compute(m).unwrap());
            }
        })
    });
}

fn pairwise(c: &mut Criterion) {
    let spec = FingerprintSpec::default();
    let fps = spec.compute_all(&corpus(1000)).unwrap();
    let g = FingerprintMatrix::new(&fps).unwrap();
    c.bench_function("snn 1k x 1k", |b| {
        b.iter(|| black_box(snn_matrix(&g, &g, DEFAULT_BLOCK).unwrap()))
    });
    c.bench_function("intdiv 1k", |b| {
        b.iter(|| black_box(internal_diversity_matrix(&g, 1, DEFAULT_BLOCK).unwrap()))
    });
}

fn alerts(c: &mut Criterion) {
    let mols = corpus(DRUGS.len());
    let packs = [FilterPack::mcf(), FilterPack::pains()];
    c.bench_function("mcf+pains", |b| {
        b.iter_batched(
            || mols.clone(),
            |ms| {
                for m in &ms {
                    for p in &packs {
                        black_box(p.first_violation(m));
                    }
                }
            },
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, parse_and_canonicalize, morgan, pairwise, alerts);
criterion_main!(benches);
