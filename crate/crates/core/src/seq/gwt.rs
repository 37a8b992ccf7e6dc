//! Generalized (arity-`mu`) wavelet tree.
//!
//! A node over `[lo, hi]` splits its range into `min(mu, hi - lo + 1)`
//! contiguous children of near-equal size, the first `(hi - lo + 1) mod c`
//! of them one symbol larger. Each node stores, for every element of its
//! local sequence, the 1-based index of the child it descends into.
//!
//! Storage is levelwise as in [`WaveletTree`](super::WaveletTree): each level
//! is one [`SmallAlphabetSequence`] of the full length with an [`Rmq`] over
//! it. Leaves that end above the last level keep their slice and store
//! child index 1 below themselves.

use std::io::{Read, Write};

use super::{ceil_log, BandMode, Rmq, Sequence, SmallAlphabetSequence};
use crate::codec::{read_len, read_u8, write_u64, write_u8};
use crate::error::{check_range, Error, Result};
use crate::trace::Trace;

/// Largest supported arity. Every node keeps a directory per child band,
/// which grows quadratically with the arity.
pub const MAX_ARITY: usize = 64;

#[derive(Clone, Debug)]
pub struct GeneralizedWaveletTree {
    sigma: usize,
    len: usize,
    mu: usize,
    mode: BandMode,
    levels: Vec<SmallAlphabetSequence>,
    rmqs: Vec<Rmq>,
}

impl PartialEq for GeneralizedWaveletTree {
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma
            && self.len == other.len
            && self.mu == other.mu
            && self.levels == other.levels
    }
}

impl Eq for GeneralizedWaveletTree {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GwtNode {
    pub depth: usize,
    pub lo: usize,
    pub hi: usize,
    pub start: usize,
    pub len: usize,
}

impl GwtNode {
    #[inline]
    pub fn is_leaf(&self) -> bool {
        self.lo >= self.hi
    }

    #[inline]
    pub fn contains(&self, a: usize) -> bool {
        self.lo <= a && a <= self.hi
    }

    #[inline]
    fn shape(&self, mu: usize) -> (usize, usize, usize) {
        let size = self.hi - self.lo + 1;
        let c = mu.min(size);
        (c, size / c, size % c)
    }

    /// Number of children under arity `mu`.
    #[inline]
    pub fn arity(&self, mu: usize) -> usize {
        mu.min(self.hi - self.lo + 1)
    }

    /// `g(a)`: index of the child whose range holds `a`.
    #[inline]
    pub fn child_of(&self, mu: usize, a: usize) -> usize {
        debug_assert!(self.contains(a));
        let (_, base, extra) = self.shape(mu);
        let off = a - self.lo;
        let big = extra * (base + 1);
        if off < big {
            off / (base + 1) + 1
        } else {
            extra + (off - big) / base + 1
        }
    }

    /// Alphabet range of child `k`; its first symbol is `g^{-1}(k)`.
    #[inline]
    pub fn child_range(&self, mu: usize, k: usize) -> (usize, usize) {
        let (_, base, extra) = self.shape(mu);
        let lo = self.lo + (k - 1) * base + (k - 1).min(extra);
        let size = base + usize::from(k <= extra);
        (lo, lo + size - 1)
    }
}

impl GeneralizedWaveletTree {
    pub fn new(seq: &[usize], sigma: usize, mu: usize, mode: BandMode) -> Result<Self> {
        if !(2..=MAX_ARITY).contains(&mu) {
            return Err(Error::OutOfRange {
                what: "arity",
                value: mu,
                lo: 2,
                hi: MAX_ARITY,
            });
        }
        if let Some(&bad) = seq.iter().find(|&&s| s == 0 || s > sigma) {
            return Err(Error::InvalidSymbol { symbol: bad, sigma });
        }
        let len = seq.len();
        let height = ceil_log(mu, sigma);
        let mut raw = vec![vec![1u8; len]; height];
        if sigma >= 1 {
            let root = GwtNode {
                depth: 0,
                lo: 1,
                hi: sigma,
                start: 0,
                len,
            };
            fill(&mut raw, mu, seq.iter().map(|&s| s as u32).collect(), root);
        }
        let mut levels = Vec::with_capacity(height);
        for level in &raw {
            levels.push(SmallAlphabetSequence::new(level, mu, mode)?);
        }
        let rmqs = raw.iter().map(|l| Rmq::new(l.iter().copied())).collect();
        Ok(Self {
            sigma,
            len,
            mu,
            mode,
            levels,
            rmqs,
        })
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn band_mode(&self) -> BandMode {
        self.mode
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[SmallAlphabetSequence] {
        &self.levels
    }

    pub fn root(&self) -> GwtNode {
        GwtNode {
            depth: 0,
            lo: 1,
            hi: self.sigma.max(1),
            start: 0,
            len: self.len,
        }
    }

    /// Elements among the first `p` of `node` whose child index is `<= k`.
    #[inline]
    pub fn local_rank_le(&self, node: &GwtNode, k: usize, p: usize) -> usize {
        let s = &self.levels[node.depth];
        s.rank_le(k, node.start + p) - s.rank_le(k, node.start)
    }

    /// Elements among the first `p` of `node` whose child index is in `[k, l]`.
    #[inline]
    pub fn local_band_rank(&self, node: &GwtNode, k: usize, l: usize, p: usize) -> usize {
        if k > l {
            return 0;
        }
        self.local_rank_le(node, l, p) - self.local_rank_le(node, k - 1, p)
    }

    /// Child index of the `p`-th element of `node`.
    #[inline]
    pub fn local_access(&self, node: &GwtNode, p: usize) -> usize {
        self.levels[node.depth].access(node.start + p)
    }

    /// Local position of the `j`-th element of `node` going to child `k`.
    pub fn local_select(&self, node: &GwtNode, k: usize, j: usize) -> Option<usize> {
        let s = &self.levels[node.depth];
        let pos = s.band_select(k, k, s.rank(k, node.start) + j)? - node.start;
        (pos <= node.len).then_some(pos)
    }

    /// Local position of the `j`-th element of `node` whose child index lies
    /// in `[k, l]`.
    pub fn local_band_select(&self, node: &GwtNode, k: usize, l: usize, j: usize) -> Option<usize> {
        let s = &self.levels[node.depth];
        let pos = s.band_select(k, l, s.band_rank(k, l, node.start) + j)? - node.start;
        (pos <= node.len).then_some(pos)
    }

    /// First local position after `p` whose child index lies in `[k, l]`.
    pub fn local_band_select_next(
        &self,
        node: &GwtNode,
        k: usize,
        l: usize,
        p: usize,
        trace: &mut Trace,
    ) -> Option<usize> {
        if k > l {
            return None;
        }
        trace.band_probes += 1;
        let pos = self.levels[node.depth].band_select_next(k, l, node.start + p)? - node.start;
        (pos <= node.len).then_some(pos)
    }

    /// Leftmost local position of the smallest child index in `[p, q]`.
    pub fn local_rmq(&self, node: &GwtNode, p: usize, q: usize) -> usize {
        self.rmqs[node.depth].query(node.start + p, node.start + q) - node.start
    }

    /// Distinct child indices within `[k, l]` among local positions `[p, q]`.
    pub fn local_distinct(
        &self,
        node: &GwtNode,
        k: usize,
        l: usize,
        p: usize,
        q: usize,
        trace: &mut Trace,
    ) -> Vec<usize> {
        if p > q {
            return Vec::new();
        }
        self.levels[node.depth].distinct_in_range(k, l, node.start + p, node.start + q, trace)
    }

    /// Child `k` of an internal node.
    pub fn child(&self, node: &GwtNode, k: usize) -> GwtNode {
        debug_assert!(!node.is_leaf() && k >= 1 && k <= node.arity(self.mu));
        let (lo, hi) = node.child_range(self.mu, k);
        let before = self.local_rank_le(node, k - 1, node.len);
        let len = self.local_rank_le(node, k, node.len) - before;
        GwtNode {
            depth: node.depth + 1,
            lo,
            hi,
            start: node.start + before,
            len,
        }
    }

    /// Nodes from the root down to the leaf of `a`, inclusive.
    pub fn path_to_leaf(&self, a: usize) -> Vec<GwtNode> {
        let mut node = self.root();
        let mut path = vec![node];
        while !node.is_leaf() {
            node = self.child(&node, node.child_of(self.mu, a));
            path.push(node);
        }
        path
    }

    /// Maps a position local to the last node of `path` up to the root.
    pub fn map_up_path(&self, path: &[GwtNode], mut p: usize) -> usize {
        for w in path.windows(2).rev() {
            let k = w[0].child_of(self.mu, w[1].lo);
            p = self
                .local_select(&w[0], k, p)
                .expect("position within child maps into parent");
        }
        p
    }

    /// Maps a position of `node` one level up to its parent.
    pub fn map_to_parent(&self, parent: &GwtNode, node: &GwtNode, p: usize) -> usize {
        let k = parent.child_of(self.mu, node.lo);
        self.local_select(parent, k, p)
            .expect("position within child maps into parent")
    }

    /// Converts a root prefix boundary to the prefix boundary of the leaf of `a`.
    pub fn map_down_to_leaf(&self, a: usize, p: usize) -> Result<usize> {
        self.check_symbol(a)?;
        check_range("root position", p, 0, self.len)?;
        let mut node = self.root();
        let mut p = p;
        while !node.is_leaf() {
            let k = node.child_of(self.mu, a);
            p = self.local_band_rank(&node, k, k, p);
            node = self.child(&node, k);
        }
        Ok(p)
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

    pub fn rank_le(&self, a: usize, i: usize) -> usize {
        self.rank_le_traced(a, i, &mut Trace::new())
    }

    /// Descent along `a` adding, at each node, the elements that went to
    /// children before `g(a)`.
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
        while !node.is_leaf() && p > 0 {
            let k = node.child_of(self.mu, a);
            let below = self.local_rank_le(&node, k - 1, p);
            c += below;
            p = self.local_rank_le(&node, k, p) - below;
            node = self.child(&node, k);
            trace.visit();
        }
        c + p
    }

    pub fn payload_bits(&self) -> usize {
        self.levels.iter().map(SmallAlphabetSequence::payload_bits).sum()
    }

    /// Rank/select directories, band samples and RMQ tables.
    pub fn directory_bits(&self) -> usize {
        self.levels
            .iter()
            .map(SmallAlphabetSequence::directory_bits)
            .chain(self.rmqs.iter().map(Rmq::directory_bits))
            .sum()
    }

    /// `sigma`, `len`, `mu`, band mode, then each level root first.
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        write_u64(w, self.sigma as u64)?;
        write_u64(w, self.len as u64)?;
        write_u64(w, self.mu as u64)?;
        write_u8(w, matches!(self.mode, BandMode::PrefixOnly) as u8)?;
        for level in &self.levels {
            level.write_to(w)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let sigma = read_len(r, "alphabet size")?;
        let len = read_len(r, "sequence length")?;
        let mu = read_len(r, "arity")?;
        if !(2..=MAX_ARITY).contains(&mu) {
            return Err(Error::Format(format!("arity {mu} outside [2, {MAX_ARITY}]")));
        }
        let mode = match read_u8(r)? {
            0 => BandMode::AllBands,
            1 => BandMode::PrefixOnly,
            m => return Err(Error::Format(format!("unknown band mode {m}"))),
        };
        if len > 0 && sigma == 0 {
            return Err(Error::Format("nonempty sequence over an empty alphabet".into()));
        }
        let mut levels = Vec::new();
        for _ in 0..ceil_log(mu, sigma) {
            let level = SmallAlphabetSequence::read_from(r)?;
            if level.len() != len || level.mu() != mu || level.mode() != mode {
                return Err(Error::Format("generalized wavelet level does not match header".into()));
            }
            levels.push(level);
        }
        let rmqs = levels
            .iter()
            .map(|l| Rmq::new((1..=len).map(|i| l.access(i) as u64)))
            .collect();
        let tree = Self {
            sigma,
            len,
            mu,
            mode,
            levels,
            rmqs,
        };
        tree.check_shape(&tree.root())?;
        Ok(tree)
    }

    /// Child indices must stay within each node's arity.
    fn check_shape(&self, node: &GwtNode) -> Result<()> {
        if node.is_leaf() || node.len == 0 {
            return Ok(());
        }
        let c = node.arity(self.mu);
        if self.local_rank_le(node, c, node.len) != node.len {
            return Err(Error::Format("child index beyond node arity".into()));
        }
        for k in 1..=c {
            self.check_shape(&self.child(node, k))?;
        }
        Ok(())
    }
}

fn fill(raw: &mut [Vec<u8>], mu: usize, seq: Vec<u32>, node: GwtNode) {
    if node.is_leaf() || node.depth == raw.len() {
        return;
    }
    let c = node.arity(mu);
    let mut parts: Vec<Vec<u32>> = vec![Vec::new(); c];
    for (i, &s) in seq.iter().enumerate() {
        let k = node.child_of(mu, s as usize);
        raw[node.depth][node.start + i] = k as u8;
        parts[k - 1].push(s);
    }
    drop(seq);
    let mut start = node.start;
    for (k, part) in parts.into_iter().enumerate() {
        let (lo, hi) = node.child_range(mu, k + 1);
        let child = GwtNode {
            depth: node.depth + 1,
            lo,
            hi,
            start,
            len: part.len(),
        };
        start += part.len();
        fill(raw, mu, part, child);
    }
}

impl Sequence for GeneralizedWaveletTree {
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
            let k = self.local_access(&node, p);
            p = self.local_band_rank(&node, k, k, p);
            node = self.child(&node, k);
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
            let k = node.child_of(self.mu, a);
            p = self.local_band_rank(&node, k, k, p);
            node = self.child(&node, k);
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
