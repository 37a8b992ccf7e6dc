//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use binrel::brwt::Brwt;
use binrel::format::{AnyRelation, EdgeList, Kind};
use binrel::rel_gwt::BinRelGwt;
use binrel::rel_wt::BinRelWt;
use binrel::relation::Param;
use binrel::seq::{BandMode, WaveletTree};
use binrel::space::{brwt_bound, brwt_ideal_bits};
use binrel::verify::{random_query, random_relation};
use binrel::{NaiveRelation, Op, OpSet, Pair, Query, Relation, RelationDims, Strategy, Trace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const RELATIONS: usize = 500;
const SMALL: usize = 60;
const ARITIES: [usize; 4] = [2, 4, 8, 16];

fn relations() -> Vec<EdgeList> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..RELATIONS)
        .map(|i| {
            let max = if i < SMALL { 8 } else { 64 };
            random_relation(&mut rng, max, max)
        })
        .collect()
}

/// Smallest `h` with `base^h >= x`.
fn lg_ceil(x: usize, base: usize) -> usize {
    let (mut h, mut reach) = (0, 1);
    while reach < x {
        reach *= base;
        h += 1;
    }
    h
}

/// Every representation of `e`, completed by the reduction engine.
fn all_representations(e: &EdgeList) -> Vec<(String, Relation<AnyRelation>)> {
    let mut out = Vec::new();
    for kind in Kind::ALL {
        let arities: &[usize] = if kind == Kind::Gwt { &ARITIES } else { &[2] };
        for &mu in arities {
            let name = if kind == Kind::Gwt { format!("gwt{mu}") } else { kind.to_string() };
            let rel = AnyRelation::build(kind, &e.pairs, e.n, e.sigma, mu).unwrap();
            out.push((name, Relation::new(rel).unwrap()));
        }
    }
    out
}

/// Every argument tuple of `op` over the universes widened by one on each
/// side, ordinals up to `max(t, n, sigma) + 2`.
fn exhaustive(op: Op, d: RelationDims) -> Vec<Query> {
    let bounds: Vec<(usize, usize)> = op
        .params()
        .iter()
        .map(|p| match p {
            Param::Label => (0, d.sigma + 1),
            Param::Object => (0, d.n + 1),
            Param::Ordinal => (1, d.t.max(d.n).max(d.sigma) + 2),
        })
        .collect();
    let mut out = Vec::new();
    let mut args: Vec<usize> = bounds.iter().map(|b| b.0).collect();
    loop {
        out.push(Query::new(op, &args).unwrap());
        let mut i = 0;
        loop {
            if i == args.len() {
                return out;
            }
            if args[i] < bounds[i].1 {
                args[i] += 1;
                break;
            }
            args[i] = bounds[i].0;
            i += 1;
        }
    }
}

fn queries_for(e: &EdgeList, rng: &mut ChaCha8Rng, per_op: usize) -> Vec<Query> {
    let d = RelationDims::new(e.n, e.sigma, e.pairs.len()).unwrap();
    if e.n <= 8 && e.sigma <= 8 {
        return Op::ALL.into_iter().flat_map(|op| exhaustive(op, d)).collect();
    }
    Op::ALL
        .into_iter()
        .flat_map(|op| (0..per_op).filter_map(|_| random_query(rng, op, d)).collect::<Vec<_>>())
        .collect()
}

fn oracle_equivalence(rels: &[EdgeList]) -> String {
    let checked: usize = rels
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
            let oracle = NaiveRelation::new(&e.pairs, e.n, e.sigma).unwrap();
            let reprs = all_representations(e);
            let queries = queries_for(e, &mut rng, 12);
            for q in &queries {
                let want = oracle.answer(q);
                for (name, r) in &reprs {
                    assert_eq!(r.query(q).unwrap(), want, "{name} on relation {i}, {q}");
                }
            }
            queries.len() * reprs.len()
        })
        .sum();
    format!("{} relations, {checked} answers", rels.len())
}

fn reduction_suite() -> String {
    let total: usize = (0..200u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(10_000 + seed);
            let e = random_relation(&mut rng, 12, 12);
            let oracle = NaiveRelation::new(&e.pairs, e.n, e.sigma).unwrap();
            let mut asked = 0;
            for &s in Strategy::DERIVED {
                let op = s.target().unwrap();
                let rel = Relation::new(oracle.clone())
                    .unwrap()
                    .with_natives(OpSet::all().without(op))
                    .unwrap()
                    .with_strategy(op, s)
                    .unwrap();
                for _ in 0..20 {
                    if let Some(q) = random_query(&mut rng, op, oracle.dims()) {
                        assert_eq!(rel.query(&q).unwrap(), oracle.answer(&q), "{s:?} on {q}");
                        asked += 1;
                    }
                }
            }
            asked
        })
        .sum();
    format!("{} strategies, 200 relations, {total} answers", Strategy::DERIVED.len())
}

fn wt_space(rels: &[EdgeList]) -> String {
    for e in rels {
        let r = BinRelWt::new(&e.pairs, e.n, e.sigma).unwrap();
        let t = e.pairs.len();
        assert_eq!(r.payload_bits(), t * lg_ceil(e.sigma, 2) + e.n + t, "n={} sigma={}", e.n, e.sigma);
    }
    format!("{} relations, payload exact", rels.len())
}

fn brwt_space(rels: &[EdgeList]) -> String {
    let mut worst: f64 = 0.0;
    for e in rels {
        let b = Brwt::new(&e.pairs, e.n, e.sigma).unwrap();
        let ideal: f64 = brwt_ideal_bits(&b);
        let bound: f64 = brwt_bound(b.dims()).unwrap();
        assert!(ideal <= bound, "ideal {ideal} above bound {bound}");
        assert_eq!(b.leaf_ones(), e.pairs.len());
        worst = worst.max(ideal / bound);
    }
    format!("{} relations, largest ideal/bound ratio {worst:.3}", rels.len())
}

fn visit_shadows() -> String {
    let sigma = 1024;
    let n = 256;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let pairs: Vec<Pair> = (0..20_000)
        .map(|_| Pair::new(rng.gen_range(1..=sigma), rng.gen_range(1..=n)))
        .collect();
    let wt = BinRelWt::new(&pairs, n, sigma).unwrap();
    let gwts: Vec<BinRelGwt> = ARITIES
        .iter()
        .map(|&mu| BinRelGwt::new(&pairs, n, sigma, mu, BandMode::AllBands).unwrap())
        .collect();
    let tree: &WaveletTree = wt.tree();
    for _ in 0..10_000 {
        let (a, x) = (rng.gen_range(1..=sigma), rng.gen_range(1..=n));
        let mut tr = Trace::new();
        wt.rel_rnk(a, x, &mut tr);
        assert!(tr.nodes as usize <= lg_ceil(sigma, 2) + 1);
        for g in &gwts {
            let mut tr = Trace::new();
            g.rel_rnk(a, x, &mut tr);
            assert!(tr.nodes as usize <= lg_ceil(sigma, g.mu()) + 1);
        }
        let b = rng.gen_range(a..=sigma);
        let cover = tree.cover(a, b).unwrap();
        assert!(cover.len() <= 2 * lg_ceil(b - a + 1, 2) + 2, "cover of [{a}, {b}]");
        let y = rng.gen_range(x..=n);
        let z = rng.gen_range(x..=y);
        for g in &gwts {
            let mut tr = Trace::new();
            g.rel_min_lab_fst(a, x, y, z, &mut tr);
            assert!(tr.child_searches <= 1);
            assert!(tr.search_steps as usize <= lg_ceil(g.mu(), 2));
        }
    }
    "10000 queries at sigma = 1024".into()
}

fn degenerate_cases() -> String {
    let cases: Vec<(&str, usize, usize, Vec<Pair>)> = vec![
        ("empty", 6, 5, vec![]),
        ("full", 5, 6, (1..=6).flat_map(|a| (1..=5).map(move |x| Pair::new(a, x))).collect()),
        ("single row", 7, 5, (1..=7).step_by(2).map(|x| Pair::new(3, x)).collect()),
        ("single column", 5, 7, (1..=7).step_by(3).map(|a| Pair::new(a, 2)).collect()),
        ("sigma = 1", 6, 1, vec![Pair::new(1, 2), Pair::new(1, 6)]),
        ("n = 1", 1, 6, vec![Pair::new(2, 1), Pair::new(5, 1)]),
        ("sigma = 10", 4, 10, (1..=10).map(|a| Pair::new(a, a % 4 + 1)).collect()),
    ];
    for (name, n, sigma, pairs) in &cases {
        let e = EdgeList {
            n: *n,
            sigma: *sigma,
            pairs: pairs.clone(),
        };
        let oracle = NaiveRelation::new(&e.pairs, e.n, e.sigma).unwrap();
        let reprs = all_representations(&e);
        for op in Op::ALL {
            for q in exhaustive(op, oracle.dims()) {
                let want = oracle.answer(&q);
                for (repr, r) in &reprs {
                    assert_eq!(r.query(&q).unwrap(), want, "{name}: {repr} on {q}");
                }
            }
        }
    }
    format!("{} cases, all representations", cases.len())
}

fn serialization(rels: &[EdgeList]) -> String {
    rels[..100].par_iter().enumerate().for_each(|(i, e)| {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + i as u64);
        for (name, rel) in all_representations(e) {
            let mut buf = Vec::new();
            rel.repr().store(&mut buf).unwrap();
            let back = AnyRelation::load(&mut buf.as_slice()).unwrap();
            assert_eq!(&back, rel.repr(), "{name}");
            let back = Relation::new(back).unwrap();
            for op in Op::ALL {
                for _ in 0..5 {
                    if let Some(q) = random_query(&mut rng, op, rel.dims()) {
                        assert_eq!(back.query(&q).unwrap(), rel.query(&q).unwrap(), "{name} on {q}");
                    }
                }
            }
        }
    });
    "100 relations per representation".into()
}

fn cli_determinism() -> String {
    let dir = tempfile::TempDir::new().unwrap();
    let input = dir.path().join("r0.txt");
    std::fs::write(&input, "% 5 4\n1 2\n1 5\n2 1\n2 4\n3 1\n3 3\n3 5\n4 5\n").unwrap();
    let oracle = NaiveRelation::new(&input_pairs(), 5, 4).unwrap();
    let script: Vec<Query> = Op::ALL.into_iter().flat_map(|op| exhaustive(op, oracle.dims()).into_iter().step_by(37)).collect();
    let mut outputs = Vec::new();
    for repr in ["str", "wt", "gwt", "brwt"] {
        let file = dir.path().join(format!("{repr}.brel"));
        let status = Command::new(env!("CARGO_BIN_EXE_binrel"))
            .args(["build", input.to_str().unwrap(), "--repr", repr, "-o", file.to_str().unwrap()])
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        let mut all = Vec::new();
        for q in &script {
            let mut args = vec!["query".to_string(), file.to_str().unwrap().to_string(), q.op.name().to_string()];
            args.extend(q.args().iter().map(|a| a.to_string()));
            let o = Command::new(env!("CARGO_BIN_EXE_binrel")).args(&args).output().unwrap();
            assert!(o.status.success(), "{repr}: {q}");
            all.extend(o.stdout);
        }
        outputs.push(all);
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    format!("{} queries, {} bytes each", script.len(), outputs[0].len())
}

fn input_pairs() -> Vec<Pair> {
    [(1, 2), (1, 5), (2, 1), (2, 4), (3, 1), (3, 3), (3, 5), (4, 5)]
        .into_iter()
        .map(Pair::from)
        .collect()
}

fn main() -> ExitCode {
    let rels = relations();
    let criteria: Vec<(&str, Box<dyn Fn() -> String + '_>)> = vec![
        ("oracle equivalence", Box::new(|| oracle_equivalence(&rels))),
        ("reduction suite", Box::new(reduction_suite)),
        ("wavelet tree payload", Box::new(|| wt_space(&rels))),
        ("relation wavelet tree space", Box::new(|| brwt_space(&rels))),
        ("node visit shadows", Box::new(visit_shadows)),
        ("degenerate cases", Box::new(degenerate_cases)),
        ("serialization", Box::new(|| serialization(&rels))),
        ("cli determinism", Box::new(cli_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(_) => {
                failed += 1;
                println!("criterion {}: {name}: FAIL ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
