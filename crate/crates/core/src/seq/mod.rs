//! Sequence structures over integer alphabets `[1, sigma]`.
//!
//! * [`WaveletTree`]: balanced binary wavelet tree, one bitvector per level.
//! * [`SmallAlphabetSequence`]: packed sequence over a small alphabet with
//!   `rank_le` directories and band views `B_{k,l}`.
//! * [`Rmq`]: leftmost range-minimum positions.
//! * [`GeneralizedWaveletTree`]: arity-`mu` wavelet tree whose levels are
//!   small-alphabet sequences.

mod gwt;
mod rmq;
mod small;
mod wavelet;

pub use gwt::{GeneralizedWaveletTree, GwtNode, MAX_ARITY};
pub use rmq::Rmq;
pub use small::{BandMode, SmallAlphabetSequence};
pub use wavelet::{WaveletTree, WtNode};

/// Access, rank and select over a sequence with symbols in `[1, sigma]`.
///
/// Positions and ordinals are 1-based. `rank(a, 0) == 0`.
pub trait Sequence {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn sigma(&self) -> usize;

    fn access(&self, i: usize) -> usize;

    /// Occurrences of `a` in `S[1, i]`.
    fn rank(&self, a: usize, i: usize) -> usize;

    /// Position of the `j`-th `a`, if there are that many.
    fn select(&self, a: usize, j: usize) -> Option<usize>;

    /// Occurrences of `a` in `S[x, y]`; zero when `x > y`.
    fn range_rank(&self, a: usize, x: usize, y: usize) -> usize {
        if x > y {
            0
        } else {
            self.rank(a, y) - self.rank(a, x - 1)
        }
    }
}

/// A sequence with an on-disk format.
pub trait StoredSequence: Sequence + Sized {
    fn write_to<W: std::io::Write>(&self, w: &mut W) -> crate::Result<()>;

    fn read_from<R: std::io::Read>(r: &mut R) -> crate::Result<Self>;
}

impl StoredSequence for WaveletTree {
    fn write_to<W: std::io::Write>(&self, w: &mut W) -> crate::Result<()> {
        WaveletTree::write_to(self, w)
    }

    fn read_from<R: std::io::Read>(r: &mut R) -> crate::Result<Self> {
        WaveletTree::read_from(r)
    }
}

impl StoredSequence for GeneralizedWaveletTree {
    fn write_to<W: std::io::Write>(&self, w: &mut W) -> crate::Result<()> {
        GeneralizedWaveletTree::write_to(self, w)
    }

    fn read_from<R: std::io::Read>(r: &mut R) -> crate::Result<Self> {
        GeneralizedWaveletTree::read_from(r)
    }
}

pub(crate) fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Smallest `h` with `mu^h >= x`.
pub(crate) fn ceil_log(mu: usize, x: usize) -> usize {
    let mut h = 0;
    let mut cap = 1usize;
    while cap < x {
        cap = cap.saturating_mul(mu);
        h += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logs() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log(16, 256), 2);
        assert_eq!(ceil_log(16, 1024), 3);
        assert_eq!(ceil_log(4, 1), 0);
        assert_eq!(ceil_log(8, 9), 2);
    }
}
