//! Brute-force reference implementation of every operation.

use super::engine::NativeOps;
use super::ops::{Answer, Op, OpSet, Query};
use super::{normalize_pairs, ObjectMajorOrder, Pair, RelationDims};
use crate::error::Result;
use crate::trace::Trace;

/// Direct enumeration over explicit pair lists and a membership matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveRelation {
    dims: RelationDims,
    /// Row-major by object: `matrix[(x - 1) * sigma + (a - 1)]`.
    matrix: Vec<bool>,
    label_major: Vec<Pair>,
    object_major: Vec<Pair>,
}

impl NaiveRelation {
    pub fn new(pairs: &[Pair], n: usize, sigma: usize) -> Result<Self> {
        let object_major = normalize_pairs(pairs, n, sigma)?;
        let mut label_major = object_major.clone();
        label_major.sort_unstable();
        let mut matrix = vec![false; n * sigma];
        for p in &object_major {
            matrix[(p.object - 1) * sigma + p.label - 1] = true;
        }
        Ok(Self {
            dims: RelationDims {
                n,
                sigma,
                t: object_major.len(),
            },
            matrix,
            label_major,
            object_major,
        })
    }

    pub fn dims(&self) -> RelationDims {
        self.dims
    }

    /// Pairs in label-major order.
    pub fn pairs(&self) -> &[Pair] {
        &self.label_major
    }

    pub fn pairs_object_major(&self) -> &[Pair] {
        &self.object_major
    }

    pub fn contains(&self, label: usize, object: usize) -> bool {
        label >= 1
            && label <= self.dims.sigma
            && object >= 1
            && object <= self.dims.n
            && self.matrix[(object - 1) * self.dims.sigma + label - 1]
    }

    /// Signed bounds so that `alpha - 1` and `x - 1` at zero denote empty ranges.
    fn acc(&self, a: i64, b: i64, x: i64, y: i64) -> impl Iterator<Item = Pair> + '_ {
        self.label_major.iter().copied().filter(move |p| {
            let (l, o) = (p.label as i64, p.object as i64);
            a <= l && l <= b && x <= o && o <= y
        })
    }

    fn num(&self, a: i64, b: i64, x: i64, y: i64) -> usize {
        self.acc(a, b, x, y).count()
    }

    fn labels(&self, a: i64, b: i64, x: i64, y: i64) -> Vec<usize> {
        let mut v: Vec<usize> = self.acc(a, b, x, y).map(|p| p.label).collect();
        v.dedup();
        v
    }

    fn objects(&self, a: i64, b: i64, x: i64, y: i64) -> Vec<usize> {
        let mut v: Vec<usize> = self.acc(a, b, x, y).map(|p| p.object).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Answers `q` straight from the definitions. Arguments are not
    /// validated; out-of-universe values simply select nothing.
    pub fn answer(&self, q: &Query) -> Answer {
        let [_, a1, a2, a3] = q.args;
        let [s0, s1, s2, s3] = q.args.map(|v| v as i64);
        let sigma = self.dims.sigma as i64;
        let n = self.dims.n as i64;
        let nth = |v: Vec<usize>, j: usize| v.get(j.wrapping_sub(1)).copied();
        match q.op {
            Op::RelAcc => Answer::Pairs(self.acc(s0, s1, s2, s3).collect()),
            Op::RelSelLabFst => Answer::Pair(self.acc(s0, sigma, s2, s3).nth(a1.wrapping_sub(1))),
            Op::RelMinLabFst => {
                let (a, x, y, z) = (s0, s1, s2, s3);
                let first = self.acc(a, a, z, y).next();
                Answer::Pair(first.or_else(|| self.acc(a + 1, sigma, x, y).next()))
            }
            Op::RelSelObjFst => {
                let mut v: Vec<Pair> = self.acc(s0, s1, s2, n).collect();
                v.sort_unstable_by(ObjectMajorOrder::cmp);
                Answer::Pair(v.get(a3.wrapping_sub(1)).copied())
            }
            Op::RelMinObjFst => {
                let (a, b, g, x) = (s0, s1, s2, s3);
                Answer::Pair(
                    self.acc(g, b, x, x)
                        .chain(self.acc(a, b, x + 1, n))
                        .min_by(ObjectMajorOrder::cmp),
                )
            }
            Op::RelNum => Answer::Count(self.num(s0, s1, s2, s3)),
            Op::RelRnk => Answer::Count(self.num(1, s0, 1, s1)),
            Op::RelRnkLabFst => {
                let (a, x, y, z) = (s0, s1, s2, s3);
                Answer::Count(self.num(1, a - 1, x, y) + self.num(a, a, x, z))
            }
            Op::RelRnkObjFst => {
                let (a, b, g, x) = (s0, s1, s2, s3);
                Answer::Count(self.num(a, b, 1, x - 1) + self.num(a, g, x, x))
            }
            Op::LabAcc => Answer::Labels(self.labels(s0, s1, s2, s3)),
            Op::LabAccOne => Answer::Labels(self.labels(s0, s1, s2, s2)),
            Op::LabSel => Answer::Label(nth(self.labels(s0, sigma, s2, s3), a1)),
            Op::LabSelOne => Answer::Label(nth(self.labels(s0, sigma, s2, s2), a1)),
            Op::LabMin => Answer::Label(nth(self.labels(s0, sigma, s1, s2), 1)),
            Op::LabMinOne => Answer::Label(nth(self.labels(s0, sigma, s1, s1), 1)),
            Op::LabNum => Answer::Count(self.labels(s0, s1, s2, s3).len()),
            Op::LabRnk => Answer::Count(self.labels(1, s0, s1, s2).len()),
            Op::LabRnkOne => Answer::Count(self.labels(1, s0, s1, s1).len()),
            Op::ObjAcc => Answer::Objects(self.objects(s0, s1, s2, s3)),
            Op::ObjAccOne => Answer::Objects(self.objects(s0, s0, s1, s2)),
            Op::ObjSel => Answer::Object(nth(self.objects(s0, s1, s2, n), a3)),
            Op::ObjSelOne => Answer::Object(nth(self.objects(s0, s0, s1, n), a2)),
            Op::ObjMin => Answer::Object(nth(self.objects(s0, s1, s2, n), 1)),
            Op::ObjMinOne => Answer::Object(nth(self.objects(s0, s0, s1, n), 1)),
            Op::ObjNum => Answer::Count(self.objects(s0, s1, s2, s3).len()),
            Op::ObjRnk => Answer::Count(self.objects(s0, s1, 1, s2).len()),
            Op::ObjRnkOne => Answer::Count(self.objects(s0, s0, 1, s1).len()),
        }
    }
}

impl NativeOps for NaiveRelation {
    fn dims(&self) -> RelationDims {
        self.dims
    }

    fn native_ops(&self) -> OpSet {
        OpSet::all()
    }

    fn native(&self, q: &Query, _trace: &mut Trace) -> Answer {
        self.answer(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r0() -> NaiveRelation {
        let pairs: Vec<Pair> = [(1, 2), (1, 5), (2, 1), (2, 4), (3, 1), (3, 3), (3, 5), (4, 5), (2, 4)]
            .into_iter()
            .map(Pair::from)
            .collect();
        NaiveRelation::new(&pairs, 5, 4).unwrap()
    }

    fn q(op: Op, args: &[usize]) -> Answer {
        r0().answer(&Query::new(op, args).unwrap())
    }

    #[test]
    fn fixture_examples() {
        assert_eq!(r0().dims().t, 8);
        assert_eq!(q(Op::RelNum, &[2, 3, 1, 3]).count(), 3);
        assert_eq!(q(Op::RelSelLabFst, &[2, 2, 1, 5]).pair(), Some(Pair::new(2, 4)));
        assert_eq!(q(Op::RelMinObjFst, &[2, 3, 3, 1]).pair(), Some(Pair::new(3, 1)));
        assert_eq!(q(Op::LabMin, &[2, 3, 5]).label(), Some(2));
        assert_eq!(q(Op::RelMinLabFst, &[2, 1, 5, 3]).pair(), Some(Pair::new(2, 4)));
        // Both bands are empty: row 4 from object 6 on, and rows above 4.
        assert_eq!(q(Op::RelMinLabFst, &[4, 1, 5, 6]).pair(), None);
        assert_eq!(q(Op::RelMinLabFst, &[4, 1, 5, 5]).pair(), Some(Pair::new(4, 5)));
        assert_eq!(q(Op::RelMinObjFst, &[3, 4, 3, 2]).pair(), Some(Pair::new(3, 3)));
        assert_eq!(q(Op::RelMinObjFst, &[4, 4, 4, 5]).pair(), Some(Pair::new(4, 5)));
        assert_eq!(q(Op::ObjSelOne, &[3, 2, 2]).object(), Some(5));
        assert_eq!(q(Op::LabSelOne, &[2, 1, 1]).label(), Some(2));
        assert_eq!(q(Op::ObjRnkOne, &[3, 4]).count(), 2);
        assert_eq!(q(Op::ObjRnkOne, &[4, 5]).count(), 1);
        assert_eq!(q(Op::LabNum, &[3, 4, 2, 4]).count(), 1);
        assert_eq!(q(Op::ObjNum, &[4, 4, 1, 4]).count(), 0);
        assert_eq!(q(Op::RelRnk, &[2, 4]).count(), 3);
        assert_eq!(q(Op::RelRnk, &[4, 5]).count(), 8);
        assert_eq!(q(Op::RelSelObjFst, &[1, 4, 1, 1]).pair(), Some(Pair::new(2, 1)));
        assert_eq!(q(Op::RelSelObjFst, &[2, 3, 2, 2]).pair(), Some(Pair::new(2, 4)));
        assert_eq!(q(Op::LabNum, &[1, 2, 3, 3]).count(), 0);
        assert_eq!(q(Op::RelAcc, &[2, 1, 1, 5]).into_pairs(), Vec::<Pair>::new());
    }

    #[test]
    fn definitional_identities() {
        let r = r0();
        let d = r.dims();
        let a = |op, args: &[usize]| r.answer(&Query::new(op, args).unwrap());
        for al in 0..=d.sigma + 1 {
            for x in 0..=d.n + 1 {
                assert_eq!(a(Op::RelRnk, &[al, x]), a(Op::RelNum, &[1, al, 1, x]));
                assert_eq!(
                    a(Op::LabRnkOne, &[al, x]).count(),
                    a(Op::RelNum, &[1, al, x, x]).count()
                );
                for y in 0..=d.n + 1 {
                    assert_eq!(a(Op::LabMin, &[al, x, y]), a(Op::LabSel, &[al, 1, x, y]));
                    for z in 0..=d.n + 1 {
                        let want = a(Op::RelNum, &[1, al.saturating_sub(1), x, y]).count()
                            + a(Op::RelNum, &[al, al, x, z]).count();
                        assert_eq!(a(Op::RelRnkLabFst, &[al, x, y, z]).count(), want);
                    }
                }
                for j in 1..=4 {
                    assert_eq!(
                        a(Op::ObjSelOne, &[al, x, j]).object(),
                        a(Op::RelSelObjFst, &[al, al, x, j]).pair().map(|p| p.object)
                    );
                }
            }
        }
    }

    #[test]
    fn empty_and_full() {
        let e = NaiveRelation::new(&[], 5, 4).unwrap();
        assert_eq!(e.dims().t, 0);
        for op in Op::ALL {
            let args: Vec<usize> = op.params().iter().map(|_| 1).collect();
            assert_eq!(e.answer(&Query::new(op, &args).unwrap()), Answer::empty(op));
        }
        let all: Vec<Pair> = (1..=4)
            .flat_map(|l| (1..=5).map(move |o| Pair::new(l, o)))
            .collect();
        let f = NaiveRelation::new(&all, 5, 4).unwrap();
        assert_eq!(f.dims().t, 20);
        assert_eq!(f.answer(&Query::new(Op::RelNum, &[1, 4, 1, 5]).unwrap()).count(), 20);
    }
}
