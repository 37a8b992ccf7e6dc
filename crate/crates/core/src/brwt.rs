//! Binary relation wavelet tree.
//!
//! Every internal node over `[lo, hi]` keeps two bitmaps over its local
//! objects: whether the object has some label in the left half `[lo, mid]`
//! and whether it has one in the right half. The objects marked in a
//! bitmap form the local sequence of that child, so one object may appear
//! in both subtrees. Leaves store nothing; the local objects of leaf `a`
//! are the objects related to `a`.
//!
//! Label ranges split at `mid = (lo + hi) / 2`. A relation with a single
//! label is built over `[1, 2]` so that the root is always internal.

use std::collections::VecDeque;
use std::io::{Read, Write};

use crate::bitvec::{BitVector, BitVectorBuilder};
use crate::codec::{read_len, write_u64};
use crate::error::{Error, Result};
use crate::relation::{normalize_pairs, Answer, NativeOps, Op, OpSet, Pair, Query, RelationDims};
use crate::trace::Trace;

/// Native set of [`Brwt`]. Selection is left to the engine, which iterates
/// the two minimum operations.
pub const BRWT_NATIVES: [Op; 5] = [
    Op::RelNum,
    Op::LabNum,
    Op::RelMinLabFst,
    Op::RelMinObjFst,
    Op::ObjSelOne,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrwtNode {
    pub lo: usize,
    pub hi: usize,
    left: BitVector,
    right: BitVector,
    kids: [Option<usize>; 2],
}

impl BrwtNode {
    pub fn mid(&self) -> usize {
        (self.lo + self.hi) / 2
    }

    pub fn left(&self) -> &BitVector {
        &self.left
    }

    pub fn right(&self) -> &BitVector {
        &self.right
    }

    fn side(&self, right: bool) -> &BitVector {
        if right {
            &self.right
        } else {
            &self.left
        }
    }

    /// Local objects per bit pair, indexed by `2 * left + right`.
    pub fn symbol_counts(&self) -> [usize; 4] {
        let mut counts = [0; 4];
        for (l, r) in self.left.iter().zip(self.right.iter()) {
            counts[2 * usize::from(l) + usize::from(r)] += 1;
        }
        counts
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Brwt {
    dims: RelationDims,
    rows: BitVector,
    nodes: Vec<BrwtNode>,
}

/// A node of the tree, leaves included, with its local length.
#[derive(Clone, Copy, Debug)]
struct Cursor {
    node: Option<usize>,
    lo: usize,
    hi: usize,
    len: usize,
}

/// Label ranges of the internal nodes in breadth-first order, with the
/// index of every internal child.
fn shape(sigma: usize) -> Vec<(usize, usize, [Option<usize>; 2])> {
    let mut out = Vec::new();
    let mut queue = VecDeque::from([(1, sigma.max(2))]);
    let mut next = 1;
    while let Some((lo, hi)) = queue.pop_front() {
        let mid = (lo + hi) / 2;
        let mut kids = [None; 2];
        for (k, (clo, chi)) in [(lo, mid), (mid + 1, hi)].into_iter().enumerate() {
            if clo < chi {
                kids[k] = Some(next);
                next += 1;
                queue.push_back((clo, chi));
            }
        }
        out.push((lo, hi, kids));
    }
    out
}

impl Brwt {
    pub fn new(pairs: &[Pair], n: usize, sigma: usize) -> Result<Self> {
        let sorted = normalize_pairs(pairs, n, sigma)?;
        let dims = RelationDims::new(n, sigma, sorted.len())?;
        let mut rows = BitVectorBuilder::with_capacity(sigma + sorted.len());
        let mut degree = vec![0; sigma + 1];
        for p in &sorted {
            degree[p.label] += 1;
        }
        for &d in &degree[1..] {
            for _ in 0..d {
                rows.push(true);
            }
            rows.push(false);
        }
        let mut columns = vec![Vec::new(); n];
        for p in &sorted {
            columns[p.object - 1].push(p.label);
        }

        let shape = shape(sigma);
        // Local sequence of each internal node, as label lists per object.
        let mut local: Vec<Option<Vec<Vec<usize>>>> = vec![None; shape.len()];
        local[0] = Some(columns);
        let mut nodes = Vec::with_capacity(shape.len());
        for (i, &(lo, hi, kids)) in shape.iter().enumerate() {
            let seq = local[i].take().expect("parent precedes child");
            let mid = (lo + hi) / 2;
            let mut left = BitVectorBuilder::with_capacity(seq.len());
            let mut right = BitVectorBuilder::with_capacity(seq.len());
            let (mut lseq, mut rseq) = (Vec::new(), Vec::new());
            for labels in seq {
                let split = labels.partition_point(|&a| a <= mid);
                left.push(split > 0);
                right.push(split < labels.len());
                if split > 0 {
                    lseq.push(labels[..split].to_vec());
                }
                if split < labels.len() {
                    rseq.push(labels[split..].to_vec());
                }
            }
            if let Some(k) = kids[0] {
                local[k] = Some(lseq);
            }
            if let Some(k) = kids[1] {
                local[k] = Some(rseq);
            }
            nodes.push(BrwtNode {
                lo,
                hi,
                left: left.finish(),
                right: right.finish(),
                kids,
            });
        }
        Ok(Self {
            dims,
            rows: rows.finish(),
            nodes,
        })
    }

    pub fn dims(&self) -> RelationDims {
        self.dims
    }

    /// Internal nodes in breadth-first order; the root comes first.
    pub fn nodes(&self) -> &[BrwtNode] {
        &self.nodes
    }

    /// Unary pair counts per label: `n_a` ones then a zero, for every label.
    pub fn rows(&self) -> &BitVector {
        &self.rows
    }

    /// Label of the `r`-th pair in label-major order.
    pub fn lab(&self, r: usize) -> Option<usize> {
        Some(1 + self.rows.rank0(self.rows.select1(r)?))
    }

    /// Pairs with label at most `a`, i.e. the traversal position where the
    /// run of `a` ends.
    pub fn poslab(&self, a: usize) -> Option<usize> {
        Some(self.rows.rank1(self.rows.select0(a)?))
    }

    /// One bits in the bitmaps whose child is a leaf. Every pair owns
    /// exactly one of them.
    pub fn leaf_ones(&self) -> usize {
        self.nodes
            .iter()
            .flat_map(|v| [false, true].map(|right| (v, right)))
            .filter(|(v, right)| v.kids[usize::from(*right)].is_none())
            .map(|(v, right)| v.side(right).count_ones())
            .sum()
    }

    pub fn payload_bits(&self) -> usize {
        self.rows.payload_bits()
            + self
                .nodes
                .iter()
                .map(|v| v.left.payload_bits() + v.right.payload_bits())
                .sum::<usize>()
    }

    pub fn directory_bits(&self) -> usize {
        self.rows.directory_bits()
            + self
                .nodes
                .iter()
                .map(|v| v.left.directory_bits() + v.right.directory_bits())
                .sum::<usize>()
    }

    fn root(&self) -> Cursor {
        Cursor {
            node: Some(0),
            lo: self.nodes[0].lo,
            hi: self.nodes[0].hi,
            len: self.dims.n,
        }
    }

    fn child(&self, c: &Cursor, right: bool) -> (Cursor, &BitVector) {
        let v = &self.nodes[c.node.expect("internal node")];
        let bv = v.side(right);
        let (lo, hi) = if right { (v.mid() + 1, v.hi) } else { (v.lo, v.mid()) };
        let child = Cursor {
            node: v.kids[usize::from(right)],
            lo,
            hi,
            len: bv.count_ones(),
        };
        (child, bv)
    }

    /// Sums `leaf(q - p + 1)` over the leaves in `[a, b]` where the local
    /// range `[p, q]` is not empty.
    fn over_leaves(
        &self,
        c: &Cursor,
        a: usize,
        b: usize,
        p: usize,
        q: usize,
        leaf: &dyn Fn(usize) -> usize,
        tr: &mut Trace,
    ) -> usize {
        if p > q || c.hi < a || b < c.lo {
            return 0;
        }
        tr.visit();
        if c.node.is_none() {
            return leaf(q - p + 1);
        }
        [false, true]
            .into_iter()
            .map(|right| {
                let (child, bv) = self.child(c, right);
                self.over_leaves(&child, a, b, bv.rank1(p - 1) + 1, bv.rank1(q), leaf, tr)
            })
            .sum()
    }

    pub fn rel_num(&self, a: usize, b: usize, x: usize, y: usize, tr: &mut Trace) -> usize {
        self.over_leaves(&self.root(), a, b, x, y, &|len| len, tr)
    }

    pub fn lab_num(&self, a: usize, b: usize, x: usize, y: usize, tr: &mut Trace) -> usize {
        self.over_leaves(&self.root(), a, b, x, y, &|_| 1, tr)
    }

    /// Smallest label in `[a, b]` whose leaf receives part of the local
    /// range `[p, q]`, with the first such position mapped back to `c`.
    fn leftmost(&self, c: &Cursor, a: usize, b: usize, p: usize, q: usize, tr: &mut Trace) -> Option<(usize, usize)> {
        if p > q || c.hi < a || b < c.lo {
            return None;
        }
        tr.visit();
        if c.node.is_none() {
            return Some((c.lo, p));
        }
        [false, true].into_iter().find_map(|right| {
            let (child, bv) = self.child(c, right);
            let (label, r) = self.leftmost(&child, a, b, bv.rank1(p - 1) + 1, bv.rank1(q), tr)?;
            Some((label, bv.select1(r).expect("child position maps up")))
        })
    }

    /// First local position `>= p` of `c` holding some label in `[a, b]`.
    fn next_object(&self, c: &Cursor, a: usize, b: usize, p: usize, tr: &mut Trace) -> Option<usize> {
        if p > c.len || c.hi < a || b < c.lo {
            return None;
        }
        tr.visit();
        // Below the root every local object has a label in the node's range.
        if c.node != Some(0) && a <= c.lo && c.hi <= b {
            return Some(p);
        }
        [false, true]
            .into_iter()
            .filter_map(|right| {
                let (child, bv) = self.child(c, right);
                let r = self.next_object(&child, a, b, bv.rank1(p - 1) + 1, tr)?;
                bv.select1(r)
            })
            .min()
    }

    pub fn rel_min_lab_fst(&self, a: usize, x: usize, y: usize, z: usize, tr: &mut Trace) -> Option<Pair> {
        let root = self.root();
        if let Some((label, object)) = self.leftmost(&root, a, a, z, y, tr) {
            return Some(Pair::new(label, object));
        }
        if a >= self.dims.sigma {
            return None;
        }
        let (label, object) = self.leftmost(&root, a + 1, self.dims.sigma, x, y, tr)?;
        Some(Pair::new(label, object))
    }

    pub fn rel_min_obj_fst(&self, a: usize, b: usize, gamma: usize, x: usize, tr: &mut Trace) -> Option<Pair> {
        let root = self.root();
        if let Some((label, _)) = self.leftmost(&root, gamma, b, x, x, tr) {
            return Some(Pair::new(label, x));
        }
        let y = self.next_object(&root, a, b, x + 1, tr)?;
        let (label, _) = self.leftmost(&root, a, b, y, y, tr)?;
        Some(Pair::new(label, y))
    }

    /// `j`-th object `>= x` related to `a`.
    pub fn obj_sel_one(&self, a: usize, x: usize, j: usize, tr: &mut Trace) -> Option<usize> {
        let mut c = self.root();
        let mut p = x - 1;
        let mut path = Vec::new();
        tr.visit();
        while c.node.is_some() {
            let v = &self.nodes[c.node.unwrap()];
            let right = a > v.mid();
            let (child, bv) = self.child(&c, right);
            p = bv.rank1(p);
            path.push(bv);
            c = child;
            tr.visit();
        }
        let mut r = p + j;
        if r > c.len {
            return None;
        }
        for bv in path.into_iter().rev() {
            r = bv.select1(r).expect("leaf position maps up");
        }
        Some(r)
    }

    /// Decodes the pairs in label-major order.
    pub fn pairs(&self) -> Vec<Pair> {
        let mut out = Vec::with_capacity(self.dims.t);
        let mut tr = Trace::new();
        for a in 1..=self.dims.sigma {
            let mut j = 1;
            while let Some(x) = self.obj_sel_one(a, 1, j, &mut tr) {
                out.push(Pair::new(a, x));
                j += 1;
            }
        }
        out
    }

    /// Writes the label rows, the node count and both bitmaps of every
    /// internal node in breadth-first order. Dimensions are not repeated.
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        self.rows.write_to(w)?;
        write_u64(w, self.nodes.len() as u64)?;
        for v in &self.nodes {
            v.left.write_to(w)?;
            v.right.write_to(w)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R, dims: RelationDims) -> Result<Self> {
        let bad = |msg: &str| Error::Format(msg.to_string());
        let rows = BitVector::read_from(r)?;
        if rows.len() != dims.sigma + dims.t || rows.count_ones() != dims.t || (dims.sigma > 0 && rows.access(rows.len())) {
            return Err(bad("label rows do not match the dimensions"));
        }
        let shape = shape(dims.sigma);
        if read_len(r, "node count")? != shape.len() {
            return Err(bad("node count does not match the label range"));
        }
        let mut expected = vec![0; shape.len()];
        expected[0] = dims.n;
        let mut nodes = Vec::with_capacity(shape.len());
        for (i, &(lo, hi, kids)) in shape.iter().enumerate() {
            let left = BitVector::read_from(r)?;
            let right = BitVector::read_from(r)?;
            if left.len() != expected[i] || right.len() != expected[i] {
                return Err(bad("node bitmap length does not match its parent"));
            }
            if i > 0 && left.iter().zip(right.iter()).any(|(l, r)| !l && !r) {
                return Err(bad("object below the root without labels"));
            }
            let node = BrwtNode { lo, hi, left, right, kids };
            for right in [false, true] {
                let ones = node.side(right).count_ones();
                match kids[usize::from(right)] {
                    Some(k) => expected[k] = ones,
                    None => {
                        let a = if right { hi } else { lo };
                        let rows_of = |a: usize| rows.select0(a).map_or(0, |e| rows.rank1(e));
                        let count = if a <= dims.sigma { rows_of(a) - rows_of(a - 1) } else { 0 };
                        if ones != count {
                            return Err(bad("leaf size does not match the label rows"));
                        }
                    }
                }
            }
            nodes.push(node);
        }
        Ok(Self { dims, rows, nodes })
    }
}

impl NativeOps for Brwt {
    fn dims(&self) -> RelationDims {
        self.dims
    }

    fn native_ops(&self) -> OpSet {
        OpSet::of(&BRWT_NATIVES)
    }

    fn native(&self, q: &Query, tr: &mut Trace) -> Answer {
        let [a0, a1, a2, a3] = q.args;
        match q.op {
            Op::RelNum => Answer::Count(self.rel_num(a0, a1, a2, a3, tr)),
            Op::LabNum => Answer::Count(self.lab_num(a0, a1, a2, a3, tr)),
            Op::RelMinLabFst => Answer::Pair(self.rel_min_lab_fst(a0, a1, a2, a3, tr)),
            Op::RelMinObjFst => Answer::Pair(self.rel_min_obj_fst(a0, a1, a2, a3, tr)),
            Op::ObjSelOne => Answer::Object(self.obj_sel_one(a0, a1, a2, tr)),
            op => unreachable!("{op} is not native to the relation wavelet tree"),
        }
    }
}
