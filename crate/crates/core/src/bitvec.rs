//! Plain bitvector with constant-time rank and access, and select by a
//! directory binary search followed by a short word scan.
//!
//! Positions are 1-based: `access(1)` is the first bit and `rank1(i)` counts
//! the ones in `B[1, i]`, so `rank1(0) == 0`.
//!
//! The directory is two-level: one absolute count per 512-bit superblock and
//! one 16-bit relative count per 64-bit word. It is derived from the payload
//! alone and is never serialized.

use std::io::{Read, Write};

use crate::codec::{read_len, read_u64, write_u64};
use crate::error::{check_range, Error, Result};

const WORD_BITS: usize = 64;
const SUPER_WORDS: usize = 8;
const SUPER_BITS: usize = WORD_BITS * SUPER_WORDS;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
    /// Ones before each superblock, plus the grand total at the end.
    supers: Vec<u64>,
    /// Ones before each word, relative to its superblock.
    blocks: Vec<u16>,
}

/// Incremental construction of a [`BitVector`].
#[derive(Clone, Debug, Default)]
pub struct BitVectorBuilder {
    len: usize,
    words: Vec<u64>,
}

impl BitVectorBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            len: 0,
            words: Vec::with_capacity(bits.div_ceil(WORD_BITS)),
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD_BITS) {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1u64 << (self.len % WORD_BITS);
        }
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn finish(self) -> BitVector {
        BitVector::from_words(self.len, self.words)
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = BitVectorBuilder::new();
        for bit in iter {
            b.push(bit);
        }
        b.finish()
    }
}

impl BitVector {
    /// Builds from a 0/1 sequence; any nonzero value counts as a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        bits.iter().map(|&b| b != 0).collect()
    }

    /// Builds from packed LSB-first words. Bits past `len` must be zero.
    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), len.div_ceil(WORD_BITS));
        let mut supers = Vec::with_capacity(words.len().div_ceil(SUPER_WORDS) + 1);
        let mut blocks = Vec::with_capacity(words.len());
        let mut total = 0u64;
        let mut within = 0u64;
        for (w, word) in words.iter().enumerate() {
            if w % SUPER_WORDS == 0 {
                supers.push(total);
                within = 0;
            }
            blocks.push(within as u16);
            let c = u64::from(word.count_ones());
            within += c;
            total += c;
        }
        supers.push(total);
        Self {
            len,
            words,
            supers,
            blocks,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        *self.supers.last().unwrap() as usize
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Bit at 1-based position `i`. Panics when `i` is outside `[1, len]`.
    #[inline]
    pub fn access(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len, "bit position {i} outside [1, {}]", self.len);
        let p = i - 1;
        (self.words[p / WORD_BITS] >> (p % WORD_BITS)) & 1 == 1
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        (i >= 1 && i <= self.len).then(|| self.access(i))
    }

    pub fn checked_access(&self, i: usize) -> Result<bool> {
        check_range("bit position", i, 1, self.len)?;
        Ok(self.access(i))
    }

    /// Number of ones in `B[1, i]`. Panics when `i > len`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len, "rank position {i} beyond length {}", self.len);
        if i == self.len {
            return self.count_ones();
        }
        let w = i / WORD_BITS;
        let off = i % WORD_BITS;
        let below = self.words[w] & ((1u64 << off) - 1);
        (self.supers[w / SUPER_WORDS] + u64::from(self.blocks[w]) + u64::from(below.count_ones()))
            as usize
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    #[inline]
    pub fn rank(&self, bit: bool, i: usize) -> usize {
        if bit {
            self.rank1(i)
        } else {
            self.rank0(i)
        }
    }

    pub fn checked_rank(&self, bit: bool, i: usize) -> Result<usize> {
        check_range("rank position", i, 0, self.len)?;
        Ok(self.rank(bit, i))
    }

    /// `rank(bit, y) - rank(bit, x - 1)`, zero for an empty range.
    #[inline]
    pub fn range_rank(&self, bit: bool, x: usize, y: usize) -> usize {
        if x > y {
            return 0;
        }
        self.rank(bit, y) - self.rank(bit, x - 1)
    }

    pub fn checked_range_rank(&self, bit: bool, x: usize, y: usize) -> Result<usize> {
        check_range("range start", x, 1, self.len)?;
        check_range("range end", y, 1, self.len)?;
        Ok(self.range_rank(bit, x, y))
    }

    /// Position of the `j`-th one, or `None` when fewer than `j` exist.
    pub fn select1(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.count_ones() {
            return None;
        }
        let j = j as u64;
        // Last superblock whose preceding count is below j.
        let sb = self.supers.partition_point(|&c| c < j) - 1;
        let end = (sb * SUPER_WORDS + SUPER_WORDS).min(self.words.len());
        for w in sb * SUPER_WORDS..end {
            let before = self.supers[sb] + u64::from(self.blocks[w]);
            let here = u64::from(self.words[w].count_ones());
            if before + here >= j {
                let bit = select_in_word(self.words[w], (j - before) as u32);
                return Some(w * WORD_BITS + bit as usize + 1);
            }
        }
        unreachable!("directory inconsistent with payload")
    }

    /// Position of the `j`-th zero, or `None` when fewer than `j` exist.
    pub fn select0(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.count_zeros() {
            return None;
        }
        let j = j as u64;
        let zeros_before_super =
            |sb: usize| (sb * SUPER_BITS) as u64 - self.supers[sb];
        let nsupers = self.supers.len() - 1;
        // Last superblock whose preceding zero count is below j.
        let (mut lo, mut hi) = (0usize, nsupers);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if zeros_before_super(mid) < j {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let sb = lo;
        let end = (sb * SUPER_WORDS + SUPER_WORDS).min(self.words.len());
        for w in sb * SUPER_WORDS..end {
            let before = zeros_before_super(sb)
                + ((w - sb * SUPER_WORDS) * WORD_BITS) as u64
                - u64::from(self.blocks[w]);
            let word = !self.words[w] & self.valid_mask(w);
            let here = u64::from(word.count_ones());
            if before + here >= j {
                let bit = select_in_word(word, (j - before) as u32);
                return Some(w * WORD_BITS + bit as usize + 1);
            }
        }
        unreachable!("directory inconsistent with payload")
    }

    #[inline]
    pub fn select(&self, bit: bool, j: usize) -> Option<usize> {
        if bit {
            self.select1(j)
        } else {
            self.select0(j)
        }
    }

    fn valid_mask(&self, w: usize) -> u64 {
        let last = self.words.len() - 1;
        let tail = self.len % WORD_BITS;
        if w == last && tail != 0 {
            (1u64 << tail) - 1
        } else {
            u64::MAX
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |i| self.access(i))
    }

    /// Bits of raw payload.
    pub fn payload_bits(&self) -> usize {
        self.len
    }

    /// Bits spent on the rank/select directory.
    pub fn directory_bits(&self) -> usize {
        self.supers.len() * 64 + self.blocks.len() * 16
    }

    /// Length as a little-endian u64, then the payload in LSB-first
    /// little-endian u64 words, zero padded.
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        write_u64(w, self.len as u64)?;
        for &word in &self.words {
            write_u64(w, word)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let len = read_len(r, "bitvector length")?;
        let nwords = len.div_ceil(WORD_BITS);
        let mut words = Vec::with_capacity(nwords);
        for _ in 0..nwords {
            words.push(read_u64(r)?);
        }
        if let Some(&last) = words.last() {
            let tail = len % WORD_BITS;
            if tail != 0 && last >> tail != 0 {
                return Err(Error::Format("nonzero padding bits in bitvector".into()));
            }
        }
        Ok(Self::from_words(len, words))
    }
}

/// Offset of the `k`-th set bit of `word` (k is 1-based).
#[inline]
fn select_in_word(mut word: u64, k: u32) -> u32 {
    debug_assert!(k >= 1 && k <= word.count_ones());
    for _ in 1..k {
        word &= word - 1;
    }
    word.trailing_zeros()
}
