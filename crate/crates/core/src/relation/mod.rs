//! Binary relation domain model: pairs, dimensions, orders, the query
//! algebra and the reduction engine that completes partial native sets.

mod engine;
mod ops;
mod oracle;

use std::cmp::Ordering;

pub use engine::{NativeOps, Plan, Relation, Strategy};
pub use ops::{Answer, Op, OpSet, Param, Query};
pub use oracle::NaiveRelation;

use crate::error::{Error, Result};

/// One related `(label, object)` element. The derived order is label-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub label: usize,
    pub object: usize,
}

impl Pair {
    pub const fn new(label: usize, object: usize) -> Self {
        Self { label, object }
    }
}

impl From<(usize, usize)> for Pair {
    fn from((label, object): (usize, usize)) -> Self {
        Self { label, object }
    }
}

/// Object universe `[1, n]`, label universe `[1, sigma]` and pair count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RelationDims {
    pub n: usize,
    pub sigma: usize,
    pub t: usize,
}

impl RelationDims {
    pub fn new(n: usize, sigma: usize, t: usize) -> Result<Self> {
        if n.checked_mul(sigma).is_some_and(|cells| t > cells) {
            return Err(Error::Format(format!(
                "{t} pairs do not fit a {sigma} x {n} relation"
            )));
        }
        Ok(Self { n, sigma, t })
    }
}

/// `(a, x) <= (b, y)` iff `a < b`, or `a == b` and `x <= y`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LabelMajorOrder;

impl LabelMajorOrder {
    pub fn cmp(a: &Pair, b: &Pair) -> Ordering {
        (a.label, a.object).cmp(&(b.label, b.object))
    }
}

/// `(a, x) <= (b, y)` iff `x < y`, or `x == y` and `a <= b`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ObjectMajorOrder;

impl ObjectMajorOrder {
    pub fn cmp(a: &Pair, b: &Pair) -> Ordering {
        (a.object, a.label).cmp(&(b.object, b.label))
    }
}

/// Checks bounds, removes duplicates and sorts object-major.
pub fn normalize_pairs(pairs: &[Pair], n: usize, sigma: usize) -> Result<Vec<Pair>> {
    let mut out = pairs.to_vec();
    if let Some(p) = out
        .iter()
        .find(|p| p.label == 0 || p.label > sigma || p.object == 0 || p.object > n)
    {
        return Err(Error::PairOutOfBounds {
            label: p.label,
            object: p.object,
            sigma,
            n,
        });
    }
    out.sort_unstable_by(ObjectMajorOrder::cmp);
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let a = Pair::new(1, 5);
        let b = Pair::new(2, 1);
        assert_eq!(LabelMajorOrder::cmp(&a, &b), Ordering::Less);
        assert_eq!(ObjectMajorOrder::cmp(&a, &b), Ordering::Greater);
        assert_eq!(a.cmp(&b), Ordering::Less);
    }

    #[test]
    fn normalize() {
        let p = normalize_pairs(&[Pair::new(2, 1), Pair::new(1, 2), Pair::new(2, 1)], 2, 2).unwrap();
        assert_eq!(p, vec![Pair::new(2, 1), Pair::new(1, 2)]);
        assert!(normalize_pairs(&[Pair::new(3, 1)], 2, 2).is_err());
        assert!(normalize_pairs(&[Pair::new(1, 0)], 2, 2).is_err());
    }

    #[test]
    fn dims_bound() {
        assert!(RelationDims::new(5, 4, 20).is_ok());
        assert!(RelationDims::new(5, 4, 21).is_err());
    }
}
