//! The column bitmap plus label string layout, over any sequence backend.
//!
//! Pairs are listed object-major. `B` holds, for each object, one 1 per pair
//! followed by a terminating 0; `S` holds the labels in the same order, so
//! every object's labels form a strictly increasing run of `S` (its area).

use std::collections::BinaryHeap;
use std::cmp::Reverse;
use std::io::{Read, Write};

use crate::bitvec::{BitVector, BitVectorBuilder};
use crate::error::{Error, Result};
use crate::relation::{normalize_pairs, Answer, NativeOps, Op, OpSet, Pair, Query, RelationDims};
use crate::seq::{ceil_log2, Sequence, StoredSequence, WaveletTree};
use crate::trace::Trace;

/// Unary column cardinalities and the object/position conversions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Columns {
    n: usize,
    t: usize,
    b: BitVector,
}

impl Columns {
    pub fn from_degrees(degrees: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = BitVectorBuilder::new();
        let (mut n, mut t) = (0, 0);
        for d in degrees {
            for _ in 0..d {
                bits.push(true);
            }
            bits.push(false);
            n += 1;
            t += d;
        }
        Self { n, t, b: bits.finish() }
    }

    pub fn bits(&self) -> &BitVector {
        &self.b
    }

    /// Pairs of objects `1..=x`; `map(0) == 0`.
    #[inline]
    pub fn map(&self, x: usize) -> usize {
        if x == 0 {
            return 0;
        }
        self.b.rank1(self.b.select0(x).expect("object within universe"))
    }

    /// Object of the pair at position `m` of `S`.
    #[inline]
    pub fn unmap(&self, m: usize) -> usize {
        self.b.rank0(self.b.select1(m).expect("position within pairs")) + 1
    }

    /// Positions of objects `[x, y]` in `S`, as `(first, last)`; empty when
    /// `first > last`.
    #[inline]
    pub fn span(&self, x: usize, y: usize) -> (usize, usize) {
        (self.map(x - 1) + 1, self.map(y))
    }

    pub fn payload_bits(&self) -> usize {
        self.b.payload_bits()
    }

    pub fn directory_bits(&self) -> usize {
        self.b.directory_bits()
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        self.b.write_to(w)
    }

    /// Reads a column bitmap and checks it against `n` objects and `t` pairs.
    pub fn read_from<R: Read>(r: &mut R, n: usize, t: usize) -> Result<Self> {
        let b = BitVector::read_from(r)?;
        if b.len() != n + t || b.count_ones() != t || (n > 0 && b.access(b.len())) {
            return Err(Error::Format("column bitmap does not match the dimensions".into()));
        }
        Ok(Self { n, t, b })
    }
}

/// Dimensions, column bitmap and object-major label string of a pair set.
pub(crate) fn layout(pairs: &[Pair], n: usize, sigma: usize) -> Result<(RelationDims, Columns, Vec<usize>)> {
    let sorted = normalize_pairs(pairs, n, sigma)?;
    let mut degrees = vec![0; n];
    for p in &sorted {
        degrees[p.object - 1] += 1;
    }
    let labels = sorted.iter().map(|p| p.label).collect();
    let dims = RelationDims::new(n, sigma, sorted.len())?;
    Ok((dims, Columns::from_degrees(degrees), labels))
}

/// Native set of [`BinRelStr`].
pub const STR_NATIVES: [Op; 8] = [
    Op::RelNum,
    Op::LabNum,
    Op::ObjNum,
    Op::RelSelLabFst,
    Op::RelSelObjFst,
    Op::LabSelOne,
    Op::ObjSelOne,
    Op::ObjRnkOne,
];

/// Which of two equivalent algorithms answered a query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Iterate over the labels of the query range.
    Labels,
    /// Iterate over the objects (column areas) of the query range.
    Objects,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinRelStr<S = WaveletTree> {
    dims: RelationDims,
    cols: Columns,
    seq: S,
}

impl BinRelStr<WaveletTree> {
    pub fn new(pairs: &[Pair], n: usize, sigma: usize) -> Result<Self> {
        Self::with_backend(pairs, n, sigma, WaveletTree::new)
    }
}

impl<S: Sequence> BinRelStr<S> {
    /// Builds with the sequence produced by `build(labels, sigma)`.
    pub fn with_backend(
        pairs: &[Pair],
        n: usize,
        sigma: usize,
        build: impl FnOnce(&[usize], usize) -> Result<S>,
    ) -> Result<Self> {
        let (dims, cols, labels) = layout(pairs, n, sigma)?;
        let seq = build(&labels, sigma)?;
        Ok(Self { dims, cols, seq })
    }

    pub fn dims(&self) -> RelationDims {
        self.dims
    }

    pub fn columns(&self) -> &Columns {
        &self.cols
    }

    pub fn sequence(&self) -> &S {
        &self.seq
    }

    pub fn map(&self, x: usize) -> usize {
        self.cols.map(x)
    }

    pub fn unmap(&self, m: usize) -> usize {
        self.cols.unmap(m)
    }

    /// Decodes the pairs back, object-major.
    pub fn pairs(&self) -> Vec<Pair> {
        let mut out = Vec::with_capacity(self.dims.t);
        let (mut object, mut m) = (1, 0);
        for bit in self.cols.bits().iter() {
            if bit {
                m += 1;
                out.push(Pair::new(self.seq.access(m), object));
            } else {
                object += 1;
            }
        }
        out
    }

    /// First position of `[s, e + 1]` whose label is `>= a`, by galloping
    /// from `s` through a strictly increasing area.
    fn lower_bound(&self, a: usize, s: usize, e: usize) -> usize {
        if s > e || self.seq.access(s) >= a {
            return s;
        }
        // Invariant: S[lo] < a, and the answer is in (lo, hi].
        let mut lo = s;
        let mut step = 1;
        let mut hi = loop {
            let probe = lo + step;
            if probe > e {
                break e + 1;
            }
            if self.seq.access(probe) >= a {
                break probe;
            }
            lo = probe;
            step *= 2;
        };
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.seq.access(mid) >= a {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Positions of the area of `x` holding labels in `[a, b]`.
    fn area_band(&self, x: usize, a: usize, b: usize) -> (usize, usize) {
        let (s, e) = self.cols.span(x, x);
        (self.lower_bound(a, s, e), self.lower_bound(b + 1, s, e))
    }

    fn mean_area_log(&self, x: usize, y: usize) -> usize {
        let (p, q) = self.cols.span(x, y);
        1 + ceil_log2((q + 1 - p) / (y - x + 1) + 1)
    }

    pub fn rel_num_by_labels(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        let (p, q) = self.cols.span(x, y);
        if a == 1 && b == self.dims.sigma {
            return (q + 1).saturating_sub(p);
        }
        (a..=b).map(|g| self.seq.range_rank(g, p, q)).sum()
    }

    pub fn rel_num_by_objects(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        (x..=y)
            .map(|z| {
                let (lo, hi) = self.area_band(z, a, b);
                hi - lo
            })
            .sum()
    }

    pub fn rel_num_side(&self, a: usize, b: usize, x: usize, y: usize) -> Side {
        let by_labels = if a == 1 && b == self.dims.sigma { 1 } else { 2 * (b - a + 1) };
        let by_objects = 2 * (y - x + 1) * self.mean_area_log(x, y);
        if by_labels <= by_objects {
            Side::Labels
        } else {
            Side::Objects
        }
    }

    pub fn lab_num_by_labels(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        let (p, q) = self.cols.span(x, y);
        (a..=b).filter(|&g| self.seq.range_rank(g, p, q) > 0).count()
    }

    /// Scans `S` over the objects' areas with a presence array over `[a, b]`.
    pub fn lab_num_by_objects(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        let (p, q) = self.cols.span(x, y);
        let mut seen = vec![false; b - a + 1];
        let mut count = 0;
        for m in p..=q {
            let g = self.seq.access(m);
            if a <= g && g <= b && !seen[g - a] {
                seen[g - a] = true;
                count += 1;
            }
        }
        count
    }

    pub fn lab_num_side(&self, a: usize, b: usize, x: usize, y: usize) -> Side {
        let (p, q) = self.cols.span(x, y);
        if 2 * (b - a + 1) <= (q + 1).saturating_sub(p) {
            Side::Labels
        } else {
            Side::Objects
        }
    }

    /// Walks every occurrence of each label in the objects' span, marking
    /// the objects hit.
    pub fn obj_num_by_labels(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        let (p, q) = self.cols.span(x, y);
        let mut seen = vec![false; y - x + 1];
        let mut count = 0;
        for g in a..=b {
            let mut j = self.seq.rank(g, p - 1) + 1;
            while let Some(m) = self.seq.select(g, j).filter(|&m| m <= q) {
                let z = self.cols.unmap(m);
                if !seen[z - x] {
                    seen[z - x] = true;
                    count += 1;
                }
                j += 1;
            }
        }
        count
    }

    pub fn obj_num_by_objects(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        (x..=y)
            .filter(|&z| {
                let (lo, hi) = self.area_band(z, a, b);
                lo < hi
            })
            .count()
    }

    pub fn obj_num_side(&self, a: usize, b: usize, x: usize, y: usize) -> Side {
        let (p, q) = self.cols.span(x, y);
        let expected = (q + 1).saturating_sub(p) * (b - a + 1) / self.dims.sigma.max(1);
        if (b - a + 1) + 2 * expected <= 2 * (y - x + 1) * self.mean_area_log(x, y) {
            Side::Labels
        } else {
            Side::Objects
        }
    }

    /// Accumulates label counts from `a` until the `j`-th pair falls inside
    /// one label.
    pub fn rel_sel_lab_fst_by_labels(&self, a: usize, j: usize, x: usize, y: usize) -> Option<Pair> {
        let (p, q) = self.cols.span(x, y);
        let mut j = j;
        for g in a..=self.dims.sigma {
            let c = self.seq.range_rank(g, p, q);
            if j <= c {
                let m = self.seq.select(g, self.seq.rank(g, p - 1) + j)?;
                return Some(Pair::new(g, self.cols.unmap(m)));
            }
            j -= c;
        }
        None
    }

    /// Merges the objects' areas, each from its first label `>= a`.
    pub fn rel_sel_lab_fst_by_objects(&self, a: usize, j: usize, x: usize, y: usize) -> Option<Pair> {
        let mut heap = BinaryHeap::new();
        for z in x..=y {
            let (s, e) = self.cols.span(z, z);
            let m = self.lower_bound(a, s, e);
            if m <= e {
                heap.push(Reverse((self.seq.access(m), z, m, e)));
            }
        }
        for _ in 1..j {
            let Reverse((_, z, m, e)) = heap.pop()?;
            if m < e {
                heap.push(Reverse((self.seq.access(m + 1), z, m + 1, e)));
            }
        }
        heap.pop().map(|Reverse((g, z, _, _))| Pair::new(g, z))
    }

    pub fn rel_sel_lab_fst_side(&self, a: usize, j: usize, x: usize, y: usize) -> Side {
        let by_labels = 2 * (self.dims.sigma - a + 1);
        let width = y - x + 1;
        let by_objects = width * self.mean_area_log(x, y) + j * (1 + ceil_log2(width));
        if by_labels <= by_objects {
            Side::Labels
        } else {
            Side::Objects
        }
    }

    /// Counts each object's labels in `[a, b]` until the `j`-th pair falls
    /// inside one area.
    pub fn rel_sel_obj_fst_by_objects(&self, a: usize, b: usize, x: usize, j: usize) -> Option<Pair> {
        let mut j = j;
        for z in x..=self.dims.n {
            let (lo, hi) = self.area_band(z, a, b);
            if j <= hi - lo {
                let m = lo + j - 1;
                return Some(Pair::new(self.seq.access(m), z));
            }
            j -= hi - lo;
        }
        None
    }

    /// Merges the occurrence lists of every label in `[a, b]` by position,
    /// which is object-major order.
    pub fn rel_sel_obj_fst_by_labels(&self, a: usize, b: usize, x: usize, j: usize) -> Option<Pair> {
        let before = self.cols.map(x - 1);
        let mut heap = BinaryHeap::new();
        for g in a..=b {
            let r = self.seq.rank(g, before) + 1;
            if let Some(m) = self.seq.select(g, r) {
                heap.push(Reverse((m, g, r)));
            }
        }
        for _ in 1..j {
            let Reverse((_, g, r)) = heap.pop()?;
            if let Some(m) = self.seq.select(g, r + 1) {
                heap.push(Reverse((m, g, r + 1)));
            }
        }
        heap.pop().map(|Reverse((m, g, _))| Pair::new(g, self.cols.unmap(m)))
    }

    pub fn rel_sel_obj_fst_side(&self, a: usize, b: usize, x: usize, j: usize) -> Side {
        let width = b - a + 1;
        let sigma = self.dims.sigma.max(1);
        let objects = (self.dims.n - x + 1).min(j.saturating_mul(sigma) / width + 1);
        let by_objects = 2 * objects * self.mean_area_log(x, self.dims.n);
        let by_labels = 2 * width + j * (1 + ceil_log2(width));
        if by_objects <= by_labels {
            Side::Objects
        } else {
            Side::Labels
        }
    }

    pub fn lab_sel_one(&self, a: usize, j: usize, x: usize) -> Option<usize> {
        let (s, e) = self.cols.span(x, x);
        let m = self.lower_bound(a, s, e) + j - 1;
        (m <= e).then(|| self.seq.access(m))
    }

    pub fn obj_sel_one(&self, a: usize, x: usize, j: usize) -> Option<usize> {
        let r = self.seq.rank(a, self.cols.map(x - 1));
        self.seq.select(a, r + j).map(|m| self.cols.unmap(m))
    }

    pub fn obj_rnk_one(&self, a: usize, x: usize) -> usize {
        self.seq.rank(a, self.cols.map(x))
    }

    pub fn payload_bits(&self) -> usize
    where
        S: Payload,
    {
        self.cols.payload_bits() + self.seq.payload_bits()
    }

    pub fn directory_bits(&self) -> usize
    where
        S: Payload,
    {
        self.cols.directory_bits() + self.seq.directory_bits()
    }
}

/// Space accounting of a sequence backend.
pub trait Payload {
    fn payload_bits(&self) -> usize;

    fn directory_bits(&self) -> usize;
}

impl Payload for WaveletTree {
    fn payload_bits(&self) -> usize {
        WaveletTree::payload_bits(self)
    }

    fn directory_bits(&self) -> usize {
        WaveletTree::directory_bits(self)
    }
}

impl Payload for crate::seq::GeneralizedWaveletTree {
    fn payload_bits(&self) -> usize {
        crate::seq::GeneralizedWaveletTree::payload_bits(self)
    }

    fn directory_bits(&self) -> usize {
        crate::seq::GeneralizedWaveletTree::directory_bits(self)
    }
}

impl<S: StoredSequence> BinRelStr<S> {
    /// Column bitmap, then the label sequence.
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        self.cols.write_to(w)?;
        self.seq.write_to(w)
    }

    pub fn read_from<R: Read>(r: &mut R, dims: RelationDims) -> Result<Self> {
        let cols = Columns::read_from(r, dims.n, dims.t)?;
        let seq = S::read_from(r)?;
        check_sequence(&seq, dims)?;
        let rel = Self { dims, cols, seq };
        rel.check_areas()?;
        Ok(rel)
    }

    /// Labels must increase strictly within every area.
    fn check_areas(&self) -> Result<()> {
        let mut m = 0;
        let mut last = 0;
        for bit in self.cols.bits().iter() {
            if bit {
                m += 1;
                let g = self.seq.access(m);
                if g <= last {
                    return Err(Error::Format("labels of an object are not increasing".into()));
                }
                last = g;
            } else {
                last = 0;
            }
        }
        Ok(())
    }
}

pub(crate) fn check_sequence<S: Sequence>(seq: &S, dims: RelationDims) -> Result<()> {
    if seq.len() != dims.t || seq.sigma() != dims.sigma {
        return Err(Error::Format(format!(
            "label sequence of length {} over {} symbols in a relation with t = {}, sigma = {}",
            seq.len(),
            seq.sigma(),
            dims.t,
            dims.sigma
        )));
    }
    Ok(())
}

impl<S: Sequence> NativeOps for BinRelStr<S> {
    fn dims(&self) -> RelationDims {
        self.dims
    }

    fn native_ops(&self) -> OpSet {
        OpSet::of(&STR_NATIVES)
    }

    fn native(&self, q: &Query, _trace: &mut Trace) -> Answer {
        let [a0, a1, a2, a3] = q.args;
        match q.op {
            Op::RelNum => Answer::Count(match self.rel_num_side(a0, a1, a2, a3) {
                Side::Labels => self.rel_num_by_labels(a0, a1, a2, a3),
                Side::Objects => self.rel_num_by_objects(a0, a1, a2, a3),
            }),
            Op::LabNum => Answer::Count(match self.lab_num_side(a0, a1, a2, a3) {
                Side::Labels => self.lab_num_by_labels(a0, a1, a2, a3),
                Side::Objects => self.lab_num_by_objects(a0, a1, a2, a3),
            }),
            Op::ObjNum => Answer::Count(match self.obj_num_side(a0, a1, a2, a3) {
                Side::Labels => self.obj_num_by_labels(a0, a1, a2, a3),
                Side::Objects => self.obj_num_by_objects(a0, a1, a2, a3),
            }),
            Op::RelSelLabFst => Answer::Pair(match self.rel_sel_lab_fst_side(a0, a1, a2, a3) {
                Side::Labels => self.rel_sel_lab_fst_by_labels(a0, a1, a2, a3),
                Side::Objects => self.rel_sel_lab_fst_by_objects(a0, a1, a2, a3),
            }),
            Op::RelSelObjFst => Answer::Pair(match self.rel_sel_obj_fst_side(a0, a1, a2, a3) {
                Side::Labels => self.rel_sel_obj_fst_by_labels(a0, a1, a2, a3),
                Side::Objects => self.rel_sel_obj_fst_by_objects(a0, a1, a2, a3),
            }),
            Op::LabSelOne => Answer::Label(self.lab_sel_one(a0, a1, a2)),
            Op::ObjSelOne => Answer::Object(self.obj_sel_one(a0, a1, a2)),
            Op::ObjRnkOne => Answer::Count(self.obj_rnk_one(a0, a1)),
            op => unreachable!("{op} is not native to the string layout"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{NaiveRelation, Relation};
    use crate::seq::{BandMode, GeneralizedWaveletTree};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn r0_pairs() -> Vec<Pair> {
        [(1, 2), (1, 5), (2, 1), (2, 4), (3, 1), (3, 3), (3, 5), (4, 5)]
            .into_iter()
            .map(Pair::from)
            .collect()
    }

    fn random_pairs(rng: &mut ChaCha8Rng, n: usize, sigma: usize) -> Vec<Pair> {
        let t = rng.gen_range(0..=n * sigma);
        let mut cells: Vec<usize> = (0..n * sigma).collect();
        for i in 0..t {
            let k = rng.gen_range(i..cells.len());
            cells.swap(i, k);
        }
        cells[..t]
            .iter()
            .map(|&c| Pair::new(c % sigma + 1, c / sigma + 1))
            .collect()
    }

    #[test]
    fn r0_layout() {
        let r = BinRelStr::new(&r0_pairs(), 5, 4).unwrap();
        let b: String = r.columns().bits().iter().map(|b| if b { '1' } else { '0' }).collect();
        assert_eq!(b, "1101010101110");
        let s: Vec<usize> = (1..=8).map(|m| r.sequence().access(m)).collect();
        assert_eq!(s, [2, 3, 1, 3, 2, 1, 3, 4]);
        assert_eq!(r.map(1), 2);
        assert_eq!(r.map(0), 0);
        assert_eq!(r.map(5), 8);
        assert_eq!(r.unmap(6), 5);
        for m in 1..=8 {
            let x = r.unmap(m);
            assert!(r.map(x - 1) < m && m <= r.map(x));
        }
        let mut want = r0_pairs();
        want.sort_by(crate::relation::ObjectMajorOrder::cmp);
        assert_eq!(r.pairs(), want);
    }

    #[test]
    fn r0_examples() {
        let r = BinRelStr::new(&r0_pairs(), 5, 4).unwrap();
        assert_eq!(r.rel_num_by_labels(2, 3, 1, 3), 3);
        assert_eq!(r.rel_num_by_objects(2, 3, 1, 3), 3);
        assert_eq!(r.rel_num_by_labels(1, 4, 1, 5), 8);
        assert_eq!(r.lab_num_by_labels(1, 4, 1, 5), 4);
        assert_eq!(r.lab_num_by_objects(3, 4, 2, 4), 1);
        assert_eq!(r.obj_num_by_labels(1, 4, 1, 5), 5);
        assert_eq!(r.obj_num_by_objects(4, 4, 1, 4), 0);
        assert_eq!(r.rel_sel_lab_fst_by_labels(2, 2, 1, 5), Some(Pair::new(2, 4)));
        assert_eq!(r.rel_sel_lab_fst_by_objects(1, 1, 1, 5), Some(Pair::new(1, 2)));
        assert_eq!(r.rel_sel_lab_fst_by_objects(1, 9, 1, 5), None);
        assert_eq!(r.rel_sel_obj_fst_by_objects(2, 3, 2, 2), Some(Pair::new(2, 4)));
        assert_eq!(r.rel_sel_obj_fst_by_labels(1, 4, 1, 1), Some(Pair::new(2, 1)));
        assert_eq!(r.obj_sel_one(3, 2, 2), Some(5));
        assert_eq!(r.lab_sel_one(2, 1, 1), Some(2));
        assert_eq!(r.lab_sel_one(2, 3, 1), None);
        assert_eq!(r.obj_rnk_one(3, 4), 2);
        assert_eq!(r.obj_rnk_one(4, 5), 1);
    }

    #[test]
    fn both_sides_agree_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let (n, sigma) = (rng.gen_range(1..=7), rng.gen_range(1..=7));
            let pairs = random_pairs(&mut rng, n, sigma);
            let r = BinRelStr::new(&pairs, n, sigma).unwrap();
            let o = NaiveRelation::new(&pairs, n, sigma).unwrap();
            let ask = |op, args: &[usize]| o.answer(&Query::new(op, args).unwrap());
            for a in 1..=sigma {
                for b in a..=sigma {
                    for x in 1..=n {
                        for y in x..=n {
                            let num = ask(Op::RelNum, &[a, b, x, y]).count();
                            assert_eq!(r.rel_num_by_labels(a, b, x, y), num);
                            assert_eq!(r.rel_num_by_objects(a, b, x, y), num);
                            let lab = ask(Op::LabNum, &[a, b, x, y]).count();
                            assert_eq!(r.lab_num_by_labels(a, b, x, y), lab);
                            assert_eq!(r.lab_num_by_objects(a, b, x, y), lab);
                            let obj = ask(Op::ObjNum, &[a, b, x, y]).count();
                            assert_eq!(r.obj_num_by_labels(a, b, x, y), obj);
                            assert_eq!(r.obj_num_by_objects(a, b, x, y), obj);
                        }
                        for j in 1..=sigma + 1 {
                            let want = ask(Op::RelSelObjFst, &[a, b, x, j]).pair();
                            assert_eq!(r.rel_sel_obj_fst_by_labels(a, b, x, j), want);
                            assert_eq!(r.rel_sel_obj_fst_by_objects(a, b, x, j), want);
                        }
                    }
                }
                for x in 1..=n {
                    for y in x..=n {
                        for j in 1..=n * sigma + 1 {
                            let want = ask(Op::RelSelLabFst, &[a, j, x, y]).pair();
                            assert_eq!(r.rel_sel_lab_fst_by_labels(a, j, x, y), want);
                            assert_eq!(r.rel_sel_lab_fst_by_objects(a, j, x, y), want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn completed_contract_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..20 {
            let (n, sigma) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            let pairs = random_pairs(&mut rng, n, sigma);
            let o = NaiveRelation::new(&pairs, n, sigma).unwrap();
            // The backend is pluggable; odd rounds use a ternary tree.
            let rel: Box<dyn Fn(&Query) -> Answer> = if round % 2 == 0 {
                let rel = Relation::new(BinRelStr::new(&pairs, n, sigma).unwrap()).unwrap();
                Box::new(move |q| rel.query(q).unwrap())
            } else {
                let r = BinRelStr::with_backend(&pairs, n, sigma, |s, sigma| {
                    GeneralizedWaveletTree::new(s, sigma, 3, BandMode::AllBands)
                })
                .unwrap();
                let rel = Relation::new(r).unwrap();
                Box::new(move |q| rel.query(q).unwrap())
            };
            for op in Op::ALL {
                let mut rng2 = ChaCha8Rng::seed_from_u64(round);
                for _ in 0..200 {
                    let args: Vec<usize> = op
                        .params()
                        .iter()
                        .map(|p| match p {
                            crate::relation::Param::Label => rng2.gen_range(0..=sigma + 1),
                            crate::relation::Param::Object => rng2.gen_range(0..=n + 1),
                            crate::relation::Param::Ordinal => rng2.gen_range(1..=n * sigma + 1),
                        })
                        .collect();
                    let q = Query::new(op, &args).unwrap();
                    assert_eq!(rel(&q), o.answer(&q), "{q}");
                }
            }
        }
    }

    #[test]
    fn serialization_roundtrip() {
        let r = BinRelStr::new(&r0_pairs(), 5, 4).unwrap();
        let mut buf = Vec::new();
        r.write_to(&mut buf).unwrap();
        let back = BinRelStr::<WaveletTree>::read_from(&mut buf.as_slice(), r.dims()).unwrap();
        assert_eq!(back, r);
        let wrong = RelationDims { n: 5, sigma: 4, t: 7 };
        assert!(BinRelStr::<WaveletTree>::read_from(&mut buf.as_slice(), wrong).is_err());
    }
}
