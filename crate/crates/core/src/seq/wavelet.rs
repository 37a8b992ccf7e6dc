//! Balanced binary wavelet tree with levelwise bitvector storage.
//!
//! The node over `[lo, hi]` splits at `mid = (lo + hi) / 2`; the left child
//! takes `[lo, mid]`. Every level holds exactly `len` bits: the elements of a
//! leaf reached above the last level are carried down as zero bits, so a
//! node's elements always occupy the same slice at every level below the
//! root and child offsets follow from the parent's zero count.

use std::io::{Read, Write};

use super::{ceil_log2, Sequence};
use crate::bitvec::BitVector;
use crate::codec::{read_len, write_u64};
use crate::error::{check_range, Error, Result};
use crate::trace::Trace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveletTree {
    sigma: usize,
    len: usize,
    levels: Vec<BitVector>,
}

/// A wavelet tree node: its depth, alphabet range and slice of its level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WtNode {
    pub depth: usize,
    pub lo: usize,
    pub hi: usize,
    /// Elements of the level that precede this node.
    pub start: usize,
    /// Length of the node's local sequence.
    pub len: usize,
}

impl WtNode {
    #[inline]
    pub fn is_leaf(&self) -> bool {
        self.lo >= self.hi
    }

    #[inline]
    pub fn mid(&self) -> usize {
        (self.lo + self.hi) / 2
    }

    #[inline]
    pub fn contains(&self, a: usize) -> bool {
        self.lo <= a && a <= self.hi
    }
}

impl WaveletTree {
    /// Builds over `seq`, whose symbols must lie in `[1, sigma]`.
    pub fn new(seq: &[usize], sigma: usize) -> Result<Self> {
        if let Some(&bad) = seq.iter().find(|&&s| s == 0 || s > sigma) {
            return Err(Error::InvalidSymbol { symbol: bad, sigma });
        }
        let len = seq.len();
        let height = ceil_log2(sigma);
        let mut words = vec![vec![0u64; len.div_ceil(64)]; height];
        let symbols: Vec<u32> = seq.iter().map(|&s| s as u32).collect();
        if sigma >= 1 {
            fill(&mut words, symbols, 0, 1, sigma, 0);
        }
        let levels = words
            .into_iter()
            .map(|w| BitVector::from_words(len, w))
            .collect();
        Ok(Self { sigma, len, levels })
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[BitVector] {
        &self.levels
    }

    pub fn root(&self) -> WtNode {
        WtNode {
            depth: 0,
            lo: 1,
            hi: self.sigma.max(1),
            start: 0,
            len: self.len,
        }
    }

    /// Number of `bit`s among the first `p` elements of `node`.
    #[inline]
    pub fn local_rank(&self, node: &WtNode, bit: bool, p: usize) -> usize {
        let bv = &self.levels[node.depth];
        bv.rank(bit, node.start + p) - bv.rank(bit, node.start)
    }

    /// Node-local position of the `j`-th `bit` of `node`.
    #[inline]
    pub fn local_select(&self, node: &WtNode, bit: bool, j: usize) -> Option<usize> {
        let bv = &self.levels[node.depth];
        let pos = bv.select(bit, bv.rank(bit, node.start) + j)? - node.start;
        (pos <= node.len).then_some(pos)
    }

    #[inline]
    pub fn local_bit(&self, node: &WtNode, p: usize) -> bool {
        self.levels[node.depth].access(node.start + p)
    }

    /// Left (`right == false`) or right child of an internal node.
    #[inline]
    pub fn child(&self, node: &WtNode, right: bool) -> WtNode {
        debug_assert!(!node.is_leaf());
        let zeros = self.local_rank(node, false, node.len);
        let mid = node.mid();
        if right {
            WtNode {
                depth: node.depth + 1,
                lo: mid + 1,
                hi: node.hi,
                start: node.start + zeros,
                len: node.len - zeros,
            }
        } else {
            WtNode {
                depth: node.depth + 1,
                lo: node.lo,
                hi: mid,
                start: node.start,
                len: zeros,
            }
        }
    }

    /// Nodes from the root down to the leaf of `a`, inclusive.
    pub fn path_to_leaf(&self, a: usize) -> Vec<WtNode> {
        self.path_to(a, a)
    }

    /// Nodes from the root down to the node spanning exactly `[lo, hi]`.
    fn path_to(&self, lo: usize, hi: usize) -> Vec<WtNode> {
        let mut node = self.root();
        let mut path = vec![node];
        while !(node.lo == lo && node.hi == hi) && !node.is_leaf() {
            node = self.child(&node, lo > node.mid());
            path.push(node);
        }
        path
    }

    /// Maps a node-local position up to the root through `path`, whose last
    /// element is the node holding `p`.
    pub fn map_up_path(&self, path: &[WtNode], mut p: usize) -> usize {
        for w in path.windows(2).rev() {
            let (parent, child) = (&w[0], &w[1]);
            let right = child.lo > parent.mid();
            p = self
                .local_select(parent, right, p)
                .expect("position within child maps into parent");
        }
        p
    }

    /// Converts a root prefix boundary `p` to the prefix boundary of `node`.
    pub fn map_down(&self, node: &WtNode, p: usize) -> Result<usize> {
        check_range("root position", p, 0, self.len)?;
        let path = self.checked_path(node)?;
        let mut p = p;
        for w in path.windows(2) {
            let right = w[1].lo > w[0].mid();
            p = self.local_rank(&w[0], right, p);
        }
        Ok(p)
    }

    /// Converts a position of `node`'s local sequence to its root position.
    pub fn map_up(&self, node: &WtNode, p: usize) -> Result<usize> {
        check_range("node position", p, 1, node.len)?;
        let path = self.checked_path(node)?;
        Ok(self.map_up_path(&path, p))
    }

    fn checked_path(&self, node: &WtNode) -> Result<Vec<WtNode>> {
        let path = self.path_to(node.lo, node.hi);
        if path.last() != Some(node) {
            return Err(Error::InvalidRange {
                lo: node.lo,
                hi: node.hi,
            });
        }
        Ok(path)
    }

    /// Leaf node of symbol `a`.
    pub fn leaf(&self, a: usize) -> Result<WtNode> {
        self.check_symbol(a)?;
        Ok(*self.path_to_leaf(a).last().unwrap())
    }

    fn check_symbol(&self, a: usize) -> Result<()> {
        if a == 0 || a > self.sigma {
            Err(Error::InvalidSymbol {
                symbol: a,
                sigma: self.sigma,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_access(&self, i: usize) -> Result<usize> {
        check_range("position", i, 1, self.len)?;
        Ok(self.access(i))
    }

    pub fn checked_rank(&self, a: usize, i: usize) -> Result<usize> {
        self.check_symbol(a)?;
        check_range("position", i, 0, self.len)?;
        Ok(self.rank(a, i))
    }

    pub fn checked_select(&self, a: usize, j: usize) -> Result<Option<usize>> {
        self.check_symbol(a)?;
        if j == 0 {
            return Err(Error::ZeroOrdinal);
        }
        Ok(self.select(a, j))
    }

    /// Number of symbols `<= a` in `S[1, i]`.
    pub fn rank_le(&self, a: usize, i: usize) -> usize {
        self.rank_le_traced(a, i, &mut Trace::new())
    }

    pub fn checked_rank_le(&self, a: usize, i: usize) -> Result<usize> {
        self.check_symbol(a)?;
        check_range("position", i, 0, self.len)?;
        Ok(self.rank_le(a, i))
    }

    /// Root-to-leaf descent along `a`, adding the left-side count whenever
    /// the path turns right.
    pub fn rank_le_traced(&self, a: usize, i: usize, trace: &mut Trace) -> usize {
        if a == 0 || i == 0 {
            return 0;
        }
        if a >= self.sigma {
            return i;
        }
        let mut node = self.root();
        trace.visit();
        let (mut c, mut p) = (0, i);
        while !node.is_leaf() {
            let right = a > node.mid();
            let ones = self.local_rank(&node, true, p);
            if right {
                c += p - ones;
                p = ones;
            } else {
                p -= ones;
            }
            node = self.child(&node, right);
            trace.visit();
        }
        c + p
    }

    /// Number of symbols `<= a` in `S[p, q]`, both boundaries mapped in one
    /// descent.
    pub fn range_rank_le_traced(&self, a: usize, p: usize, q: usize, trace: &mut Trace) -> usize {
        if a == 0 || p > q {
            return 0;
        }
        if a >= self.sigma {
            return q - p + 1;
        }
        let mut node = self.root();
        trace.visit();
        let (mut c, mut lo, mut hi) = (0, p - 1, q);
        while !node.is_leaf() {
            let right = a > node.mid();
            let (ones_lo, ones_hi) = (
                self.local_rank(&node, true, lo),
                self.local_rank(&node, true, hi),
            );
            if right {
                c += (hi - ones_hi) - (lo - ones_lo);
                lo = ones_lo;
                hi = ones_hi;
            } else {
                lo -= ones_lo;
                hi -= ones_hi;
            }
            node = self.child(&node, right);
            trace.visit();
        }
        c + (hi - lo)
    }

    /// Canonical cover of `[alpha, beta]`: the maximal nodes whose ranges
    /// partition it, left to right.
    pub fn cover(&self, alpha: usize, beta: usize) -> Result<Vec<WtNode>> {
        if alpha == 0 || alpha > beta || beta > self.sigma {
            return Err(Error::InvalidRange {
                lo: alpha,
                hi: beta,
            });
        }
        let mut out = Vec::new();
        self.cover_into(&self.root(), alpha, beta, &mut out);
        Ok(out)
    }

    fn cover_into(&self, node: &WtNode, alpha: usize, beta: usize, out: &mut Vec<WtNode>) {
        if beta < node.lo || node.hi < alpha {
            return;
        }
        if alpha <= node.lo && node.hi <= beta {
            out.push(*node);
            return;
        }
        self.cover_into(&self.child(node, false), alpha, beta, out);
        self.cover_into(&self.child(node, true), alpha, beta, out);
    }

    /// Total payload bits: `len * ceil(lg sigma)`.
    pub fn payload_bits(&self) -> usize {
        self.levels.iter().map(BitVector::payload_bits).sum()
    }

    pub fn directory_bits(&self) -> usize {
        self.levels.iter().map(BitVector::directory_bits).sum()
    }

    /// `sigma` and `len` as little-endian u64, then each level root first.
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        write_u64(w, self.sigma as u64)?;
        write_u64(w, self.len as u64)?;
        for level in &self.levels {
            level.write_to(w)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let sigma = read_len(r, "alphabet size")?;
        let len = read_len(r, "sequence length")?;
        let mut levels = Vec::new();
        for _ in 0..ceil_log2(sigma) {
            let level = BitVector::read_from(r)?;
            if level.len() != len {
                return Err(Error::Format(format!(
                    "wavelet level of length {} in a sequence of length {len}",
                    level.len()
                )));
            }
            levels.push(level);
        }
        let wt = Self { sigma, len, levels };
        // Every element must land on a symbol within the alphabet.
        if len > 0 && sigma == 0 {
            return Err(Error::Format("nonempty sequence over an empty alphabet".into()));
        }
        Ok(wt)
    }
}

fn fill(words: &mut [Vec<u64>], seq: Vec<u32>, depth: usize, lo: usize, hi: usize, start: usize) {
    if lo >= hi || depth == words.len() {
        return;
    }
    let mid = (lo + hi) / 2;
    let mut left = Vec::with_capacity(seq.len());
    let mut right = Vec::new();
    for (i, &s) in seq.iter().enumerate() {
        if s as usize > mid {
            let pos = start + i;
            words[depth][pos / 64] |= 1u64 << (pos % 64);
            right.push(s);
        } else {
            left.push(s);
        }
    }
    drop(seq);
    let split = start + left.len();
    fill(words, left, depth + 1, lo, mid, start);
    fill(words, right, depth + 1, mid + 1, hi, split);
}

impl Sequence for WaveletTree {
    fn len(&self) -> usize {
        self.len
    }

    fn sigma(&self) -> usize {
        self.sigma
    }

    fn access(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.len, "position {i} outside [1, {}]", self.len);
        let mut node = self.root();
        let mut p = i;
        while !node.is_leaf() {
            let bit = self.local_bit(&node, p);
            p = self.local_rank(&node, bit, p);
            node = self.child(&node, bit);
        }
        node.lo
    }

    fn rank(&self, a: usize, i: usize) -> usize {
        assert!(i <= self.len, "position {i} beyond length {}", self.len);
        if a == 0 || a > self.sigma {
            return 0;
        }
        let mut node = self.root();
        let mut p = i;
        while !node.is_leaf() && p > 0 {
            let right = a > node.mid();
            p = self.local_rank(&node, right, p);
            node = self.child(&node, right);
        }
        p
    }

    fn select(&self, a: usize, j: usize) -> Option<usize> {
        if a == 0 || a > self.sigma || j == 0 {
            return None;
        }
        let path = self.path_to_leaf(a);
        if j > path.last().unwrap().len {
            return None;
        }
        Some(self.map_up_path(&path, j))
    }
}
