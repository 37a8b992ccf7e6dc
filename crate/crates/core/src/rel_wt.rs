//! The string layout with `S` in a binary wavelet tree, answering the
//! label-range operations by tree descents.

use std::io::{Read, Write};

use crate::error::Result;
use crate::rel_str::{BinRelStr, Columns};
use crate::relation::{Answer, NativeOps, Op, OpSet, Pair, Query, RelationDims};
use crate::seq::{Sequence, WaveletTree, WtNode};
use crate::trace::Trace;

/// Native set of [`BinRelWt`].
pub const WT_NATIVES: [Op; 7] = [
    Op::RelRnk,
    Op::RelSelLabFst,
    Op::RelSelObjFst,
    Op::RelMinObjFst,
    Op::ObjSelOne,
    Op::LabNum,
    Op::ObjRnkOne,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinRelWt {
    inner: BinRelStr<WaveletTree>,
}

impl BinRelWt {
    pub fn new(pairs: &[Pair], n: usize, sigma: usize) -> Result<Self> {
        Ok(Self {
            inner: BinRelStr::new(pairs, n, sigma)?,
        })
    }

    pub fn dims(&self) -> RelationDims {
        self.inner.dims()
    }

    /// The same data viewed through the generic string algorithms.
    pub fn as_str(&self) -> &BinRelStr<WaveletTree> {
        &self.inner
    }

    pub fn tree(&self) -> &WaveletTree {
        self.inner.sequence()
    }

    fn cols(&self) -> &Columns {
        self.inner.columns()
    }

    pub fn pairs(&self) -> Vec<Pair> {
        self.inner.pairs()
    }

    /// Column bitmap plus wavelet tree levels: `n + t + t * ceil(lg sigma)`.
    pub fn payload_bits(&self) -> usize {
        self.inner.payload_bits()
    }

    pub fn directory_bits(&self) -> usize {
        self.inner.directory_bits()
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        self.inner.write_to(w)
    }

    pub fn read_from<R: Read>(r: &mut R, dims: RelationDims) -> Result<Self> {
        Ok(Self {
            inner: BinRelStr::read_from(r, dims)?,
        })
    }

    pub fn rel_rnk(&self, a: usize, x: usize, tr: &mut Trace) -> usize {
        self.tree().rank_le_traced(a, self.cols().map(x), tr)
    }

    /// `k`-th smallest element of `S[p, q]` (ties by position) as its label
    /// and root position.
    fn quantile(&self, p: usize, q: usize, k: usize, tr: &mut Trace) -> (usize, usize) {
        let wt = self.tree();
        let mut node = wt.root();
        tr.visit();
        let mut path = vec![node];
        let (mut lo, mut hi, mut k) = (p - 1, q, k);
        while !node.is_leaf() {
            let zeros = (hi - lo) - (wt.local_rank(&node, true, hi) - wt.local_rank(&node, true, lo));
            let right = k > zeros;
            if right {
                k -= zeros;
            }
            lo = wt.local_rank(&node, right, lo);
            hi = wt.local_rank(&node, right, hi);
            node = wt.child(&node, right);
            tr.visit();
            path.push(node);
        }
        (node.lo, wt.map_up_path(&path, lo + k))
    }

    /// Elements of `S[p, q]` with label `< a`.
    fn below(&self, a: usize, p: usize, q: usize, tr: &mut Trace) -> usize {
        self.tree().range_rank_le_traced(a - 1, p, q, tr)
    }

    pub fn rel_sel_lab_fst(&self, a: usize, j: usize, x: usize, y: usize, tr: &mut Trace) -> Option<Pair> {
        let (p, q) = self.cols().span(x, y);
        if p > q {
            return None;
        }
        let k = self.below(a, p, q, tr) + j;
        if k > q - p + 1 {
            return None;
        }
        let (label, m) = self.quantile(p, q, k, tr);
        Some(Pair::new(label, self.cols().unmap(m)))
    }

    /// Pairs with labels in `[a, b]` over the root span `[p, q]`.
    fn band_count(&self, a: usize, b: usize, p: usize, q: usize, tr: &mut Trace) -> usize {
        let wt = self.tree();
        wt.range_rank_le_traced(b, p, q, tr) - wt.range_rank_le_traced(a - 1, p, q, tr)
    }

    /// Binary search for the first object `y` at which the pairs of
    /// `[a, b] x [x, y]` reach `j`, then a selection inside its area.
    pub fn rel_sel_obj_fst_by_columns(&self, a: usize, b: usize, x: usize, j: usize, tr: &mut Trace) -> Option<Pair> {
        let n = self.dims().n;
        let start = self.cols().map(x - 1) + 1;
        let count = |y: usize, tr: &mut Trace| self.band_count(a, b, start, self.cols().map(y), tr);
        if count(n, tr) < j {
            return None;
        }
        let (mut lo, mut hi) = (x, n);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if count(mid, tr) >= j {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let k = j - count(lo - 1, tr);
        self.rel_sel_lab_fst(a, k, lo, lo, tr)
    }

    /// Selects the `j`-th position after `map(x - 1)` among the cover nodes
    /// of `[a, b]` by shrinking one node interval per round.
    pub fn rel_sel_obj_fst_by_cover(&self, a: usize, b: usize, x: usize, j: usize, tr: &mut Trace) -> Option<Pair> {
        let wt = self.tree();
        let before = self.cols().map(x - 1);
        let paths: Vec<Vec<WtNode>> = wt
            .cover(a, b)
            .expect("normalized label range")
            .into_iter()
            .map(|v| path_to(wt, &v))
            .collect();
        for path in &paths {
            tr.nodes += path.len() as u64;
        }
        let lists: Vec<(usize, usize)> = paths
            .iter()
            .map(|path| (down(wt, path, before), path.last().unwrap().len))
            .collect();
        let m = select_in_union(
            &lists,
            j,
            |i, idx| wt.map_up_path(&paths[i], idx),
            |i, root| down(wt, &paths[i], root),
        )?;
        Some(Pair::new(wt.access(m), self.cols().unmap(m)))
    }

    pub fn rel_sel_obj_fst(&self, a: usize, b: usize, x: usize, j: usize, tr: &mut Trace) -> Option<Pair> {
        let d = self.dims();
        if a == 1 && b == d.sigma {
            let m = self.cols().map(x - 1) + j;
            return (m <= d.t).then(|| Pair::new(self.tree().access(m), self.cols().unmap(m)));
        }
        let lg = |v: usize| (v as f64).log2();
        if lg(d.n) <= lg(j) * lg(b - a + 1) {
            self.rel_sel_obj_fst_by_columns(a, b, x, j, tr)
        } else {
            self.rel_sel_obj_fst_by_cover(a, b, x, j, tr)
        }
    }

    /// First root position after `p` whose label lies in `[a, b]`.
    fn next_in_band(&self, a: usize, b: usize, p: usize, tr: &mut Trace) -> Option<usize> {
        self.next_below(&self.tree().root(), a, b, p, tr)
    }

    fn next_below(&self, node: &WtNode, a: usize, b: usize, p: usize, tr: &mut Trace) -> Option<usize> {
        if node.hi < a || b < node.lo || p >= node.len {
            return None;
        }
        tr.visit();
        if a <= node.lo && node.hi <= b {
            return Some(p + 1);
        }
        let wt = self.tree();
        // Left first, so equal positions keep the left candidate.
        let mut best: Option<usize> = None;
        for right in [false, true] {
            let child = wt.child(node, right);
            let cp = wt.local_rank(node, right, p);
            if let Some(r) = self.next_below(&child, a, b, cp, tr) {
                let up = wt.local_select(node, right, r).expect("child position maps up");
                if best.is_none_or(|m| up < m) {
                    best = Some(up);
                }
            }
        }
        best
    }

    pub fn rel_min_obj_fst(&self, a: usize, b: usize, g: usize, x: usize, tr: &mut Trace) -> Option<Pair> {
        let (s, e) = self.cols().span(x, x);
        if s <= e {
            let k = self.below(g, s, e, tr) + 1;
            if k <= e - s + 1 {
                let (label, _) = self.quantile(s, e, k, tr);
                if label <= b {
                    return Some(Pair::new(label, x));
                }
            }
        }
        let m = self.next_in_band(a, b, e, tr)?;
        Some(Pair::new(self.tree().access(m), self.cols().unmap(m)))
    }

    pub fn obj_sel_one(&self, a: usize, x: usize, j: usize) -> Option<usize> {
        self.inner.obj_sel_one(a, x, j)
    }

    pub fn obj_rnk_one(&self, a: usize, x: usize) -> usize {
        self.inner.obj_rnk_one(a, x)
    }

    /// Descends into every child still holding part of the mapped span,
    /// counting one per leaf reached.
    pub fn lab_num(&self, a: usize, b: usize, x: usize, y: usize, tr: &mut Trace) -> usize {
        let (p, q) = self.cols().span(x, y);
        if p > q {
            return 0;
        }
        self.lab_num_below(&self.tree().root(), a, b, p - 1, q, tr)
    }

    fn lab_num_below(&self, node: &WtNode, a: usize, b: usize, lo: usize, hi: usize, tr: &mut Trace) -> usize {
        if lo >= hi || node.hi < a || b < node.lo {
            return 0;
        }
        tr.visit();
        if node.is_leaf() {
            return 1;
        }
        let wt = self.tree();
        [false, true]
            .into_iter()
            .map(|right| {
                let child = wt.child(node, right);
                let (clo, chi) = (wt.local_rank(node, right, lo), wt.local_rank(node, right, hi));
                self.lab_num_below(&child, a, b, clo, chi, tr)
            })
            .sum()
    }
}

/// Root-to-`node` path.
pub(crate) fn path_to(wt: &WaveletTree, node: &WtNode) -> Vec<WtNode> {
    let mut cur = wt.root();
    let mut path = vec![cur];
    while cur != *node {
        cur = wt.child(&cur, node.lo > cur.mid());
        path.push(cur);
    }
    path
}

/// Maps a root prefix boundary down `path` to its last node.
pub(crate) fn down(wt: &WaveletTree, path: &[WtNode], mut p: usize) -> usize {
    for w in path.windows(2) {
        p = wt.local_rank(&w[0], w[1].lo > w[0].mid(), p);
    }
    p
}

/// `j`-th smallest value of the union of disjoint increasing lists.
///
/// List `i` is addressed by local index; only indices in `(from_i, to_i]`
/// take part. `value(i, idx)` reads an element and `count_le(i, v)` returns
/// the number of elements of list `i` that are `<= v` over the whole list.
/// Each round probes the middle of one list's live interval and trims every
/// list by the probe's rank.
pub(crate) fn select_in_union(
    lists: &[(usize, usize)],
    j: usize,
    value: impl Fn(usize, usize) -> usize,
    count_le: impl Fn(usize, usize) -> usize,
) -> Option<usize> {
    let total: usize = lists.iter().map(|&(from, to)| to - from).sum();
    if j == 0 || j > total {
        return None;
    }
    let mut live: Vec<(usize, usize)> = lists.iter().map(|&(from, to)| (from + 1, to)).collect();
    let mut i = 0;
    loop {
        if !live.iter().any(|&(lo, hi)| lo <= hi) {
            return None;
        }
        while live[i].0 > live[i].1 {
            i = (i + 1) % live.len();
        }
        let (lo, hi) = live[i];
        let mid = lo + (hi - lo) / 2;
        let v = value(i, mid);
        let counts: Vec<usize> = (0..lists.len()).map(|k| count_le(k, v)).collect();
        let rank: usize = counts.iter().zip(lists).map(|(&c, &(from, _))| c.saturating_sub(from)).sum();
        if rank == j {
            return Some(v);
        }
        for (k, range) in live.iter_mut().enumerate() {
            if rank < j {
                range.0 = range.0.max(counts[k] + 1);
            } else {
                range.1 = range.1.min(counts[k]);
            }
        }
        if rank > j {
            live[i].1 = mid - 1;
        }
        i = (i + 1) % live.len();
    }
}

impl NativeOps for BinRelWt {
    fn dims(&self) -> RelationDims {
        self.inner.dims()
    }

    fn native_ops(&self) -> OpSet {
        OpSet::of(&WT_NATIVES)
    }

    fn native(&self, q: &Query, tr: &mut Trace) -> Answer {
        let [a0, a1, a2, a3] = q.args;
        match q.op {
            Op::RelRnk => Answer::Count(self.rel_rnk(a0, a1, tr)),
            Op::RelSelLabFst => Answer::Pair(self.rel_sel_lab_fst(a0, a1, a2, a3, tr)),
            Op::RelSelObjFst => Answer::Pair(self.rel_sel_obj_fst(a0, a1, a2, a3, tr)),
            Op::RelMinObjFst => Answer::Pair(self.rel_min_obj_fst(a0, a1, a2, a3, tr)),
            Op::ObjSelOne => Answer::Object(self.obj_sel_one(a0, a1, a2)),
            Op::LabNum => Answer::Count(self.lab_num(a0, a1, a2, a3, tr)),
            Op::ObjRnkOne => Answer::Count(self.obj_rnk_one(a0, a1)),
            op => unreachable!("{op} is not native to the wavelet tree layout"),
        }
    }
}
