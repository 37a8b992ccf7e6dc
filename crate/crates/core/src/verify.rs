//! Randomized comparison of representations against the naive oracle.

use std::fmt;

use rand::seq::index::sample;
use rand::Rng;

use crate::format::EdgeList;
use crate::relation::{Answer, NaiveRelation, NativeOps, Op, Pair, Param, Query, Relation, RelationDims};

/// A relation with `n` and `sigma` drawn from `[1, max]` and `t` uniform in
/// `[0, n sigma]`.
pub fn random_relation<G: Rng>(rng: &mut G, max_n: usize, max_sigma: usize) -> EdgeList {
    let n = rng.gen_range(1..=max_n);
    let sigma = rng.gen_range(1..=max_sigma);
    let t = rng.gen_range(0..=n * sigma);
    let mut pairs: Vec<Pair> = sample(rng, n * sigma, t)
        .into_iter()
        .map(|c| Pair::new(c / n + 1, c % n + 1))
        .collect();
    pairs.sort_unstable();
    EdgeList { n, sigma, pairs }
}

/// Random arguments within the universes. Ranges may come out reversed,
/// which is a valid empty query. `None` when a universe is empty.
pub fn random_query<G: Rng>(rng: &mut G, op: Op, dims: RelationDims) -> Option<Query> {
    if dims.n == 0 || dims.sigma == 0 {
        return None;
    }
    let ordinals = dims.t.max(dims.n).max(dims.sigma) + 1;
    let args: Vec<usize> = op
        .params()
        .iter()
        .map(|p| match p {
            Param::Label => rng.gen_range(1..=dims.sigma),
            Param::Object => rng.gen_range(1..=dims.n),
            Param::Ordinal => rng.gen_range(1..=ordinals),
        })
        .collect();
    Query::new(op, &args).ok()
}

/// A query on which a representation disagrees with the oracle.
#[derive(Clone, Debug)]
pub struct Mismatch {
    pub repr: String,
    pub relation: EdgeList,
    pub query: Query,
    pub expected: Answer,
    pub got: String,
}

fn one_line(s: &str) -> String {
    s.trim_end().replace('\n', ";")
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.relation.pairs.iter().map(|p| format!("{}:{}", p.label, p.object)).collect();
        write!(
            f,
            "repro: repr={} n={} sigma={} pairs={} query=\"{}\" expected=\"{}\" got=\"{}\"",
            self.repr,
            self.relation.n,
            self.relation.sigma,
            pairs.join(","),
            self.query,
            one_line(&self.expected.to_string()),
            one_line(&self.got),
        )
    }
}

/// Passed queries per operation, in [`Op::ALL`] order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    passed: Vec<usize>,
}

impl Tally {
    pub fn new() -> Self {
        Self {
            passed: vec![0; Op::ALL.len()],
        }
    }

    fn bump(&mut self, op: Op) {
        let i = Op::ALL.iter().position(|&o| o == op).unwrap();
        self.passed[i] += 1;
    }

    pub fn passed(&self, op: Op) -> usize {
        let i = Op::ALL.iter().position(|&o| o == op).unwrap();
        self.passed.get(i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.passed.iter().sum()
    }

    pub fn merge(&mut self, other: &Tally) {
        for (a, b) in self.passed.iter_mut().zip(&other.passed) {
            *a += b;
        }
    }
}

/// Asks `rounds` random queries of every operation and stops at the first
/// disagreement.
pub fn check<R: NativeOps, G: Rng>(
    repr: &str,
    rel: &Relation<R>,
    oracle: &NaiveRelation,
    relation: &EdgeList,
    rng: &mut G,
    rounds: usize,
    tally: &mut Tally,
) -> Result<(), Box<Mismatch>> {
    for _ in 0..rounds {
        for op in Op::ALL {
            let Some(q) = random_query(rng, op, oracle.dims()) else {
                continue;
            };
            let expected = oracle.answer(&q);
            let got = rel.query(&q);
            if got.as_ref().ok() != Some(&expected) {
                return Err(Box::new(Mismatch {
                    repr: repr.to_string(),
                    relation: relation.clone(),
                    query: q,
                    expected,
                    got: match got {
                        Ok(a) => a.to_string(),
                        Err(e) => format!("error: {e}"),
                    },
                }));
            }
            tally.bump(op);
        }
    }
    Ok(())
}
