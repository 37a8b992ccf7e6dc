//! Sequences over a small alphabet `[1, mu]`.
//!
//! Symbols are packed at `ceil(lg mu)` bits each. The bitmaps `B_{<=k}` and
//! `B_{k,l}` are never materialized: only their directories are stored and
//! their content is read off the packed payload.
//!
//! Every mode keeps cumulative `<= k` counts per 64-symbol block, which gives
//! `rank_le` and hence the rank of any band. [`BandMode::AllBands`] adds, for
//! each of the `mu(mu+1)/2` bands, the position of every 64th occurrence so
//! that band select starts from a narrow block window. [`BandMode::PrefixOnly`]
//! answers band select from the prefix counts alone.

use std::io::{Read, Write};

use super::ceil_log2;
use crate::codec::{read_len, read_u64, read_u8, write_u64, write_u8};
use crate::error::{check_range, Error, Result};
use crate::trace::Trace;

const BLOCK: usize = 64;
const SAMPLE: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BandMode {
    #[default]
    AllBands,
    PrefixOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallAlphabetSequence {
    mu: usize,
    len: usize,
    width: u32,
    payload: Vec<u64>,
    /// `le[b * mu + (k - 1)]` = symbols `<= k` before block `b`.
    le: Vec<u32>,
    mode: BandMode,
    /// Per band, 0-based positions of occurrences 1, 1 + SAMPLE, ...
    samples: Vec<Vec<u32>>,
}

impl SmallAlphabetSequence {
    pub fn new(symbols: &[u8], mu: usize, mode: BandMode) -> Result<Self> {
        if mu == 0 || mu > 255 {
            return Err(Error::OutOfRange {
                what: "arity",
                value: mu,
                lo: 1,
                hi: 255,
            });
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s == 0 || s as usize > mu) {
            return Err(Error::InvalidSymbol {
                symbol: bad as usize,
                sigma: mu,
            });
        }
        let width = ceil_log2(mu) as u32;
        let len = symbols.len();
        let mut payload = vec![0u64; (len * width as usize).div_ceil(64)];
        if width > 0 {
            for (i, &s) in symbols.iter().enumerate() {
                let v = u64::from(s - 1);
                let bit = i * width as usize;
                payload[bit / 64] |= v << (bit % 64);
                if bit % 64 + width as usize > 64 {
                    payload[bit / 64 + 1] |= v >> (64 - bit % 64);
                }
            }
        }
        Ok(Self::from_parts(mu, len, width, payload, mode))
    }

    fn from_parts(mu: usize, len: usize, width: u32, payload: Vec<u64>, mode: BandMode) -> Self {
        let mut s = Self {
            mu,
            len,
            width,
            payload,
            le: Vec::new(),
            mode,
            samples: Vec::new(),
        };
        s.build_directories();
        s
    }

    fn build_directories(&mut self) {
        let mu = self.mu;
        let nblocks = self.len / BLOCK + 1;
        let mut le = vec![0u32; nblocks * mu];
        let mut counts = vec![0u32; mu + 1];
        for b in 0..nblocks {
            let mut acc = 0;
            for k in 1..=mu {
                acc += counts[k];
                le[b * mu + k - 1] = acc;
            }
            let end = ((b + 1) * BLOCK).min(self.len);
            for i in b * BLOCK..end {
                counts[self.get0(i)] += 1;
            }
        }
        self.le = le;
        if self.mode == BandMode::AllBands {
            let mut samples = vec![Vec::new(); mu * (mu + 1) / 2];
            let mut seen = vec![0usize; samples.len()];
            for i in 0..self.len {
                let s = self.get0(i);
                for k in 1..=s {
                    for l in s..=mu {
                        let band = band_index(mu, k, l);
                        if seen[band] % SAMPLE == 0 {
                            samples[band].push(i as u32);
                        }
                        seen[band] += 1;
                    }
                }
            }
            self.samples = samples;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn mode(&self) -> BandMode {
        self.mode
    }

    /// Symbol at 0-based offset `i`.
    #[inline]
    fn get0(&self, i: usize) -> usize {
        if self.width == 0 {
            return 1;
        }
        let w = self.width as usize;
        let bit = i * w;
        let mask = (1u64 << w) - 1;
        let mut v = self.payload[bit / 64] >> (bit % 64);
        if bit % 64 + w > 64 {
            v |= self.payload[bit / 64 + 1] << (64 - bit % 64);
        }
        (v & mask) as usize + 1
    }

    /// Symbol at 1-based position `i`.
    #[inline]
    pub fn access(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.len, "position {i} outside [1, {}]", self.len);
        self.get0(i - 1)
    }

    /// Number of symbols `<= k` in `S[1, i]`.
    #[inline]
    pub fn rank_le(&self, k: usize, i: usize) -> usize {
        debug_assert!(i <= self.len);
        if k == 0 || i == 0 {
            return 0;
        }
        if k >= self.mu {
            return i;
        }
        let b = i / BLOCK;
        let mut c = self.le[b * self.mu + k - 1] as usize;
        for p in b * BLOCK..i {
            if self.get0(p) <= k {
                c += 1;
            }
        }
        c
    }

    pub fn checked_rank_le(&self, k: usize, i: usize) -> Result<usize> {
        check_range("symbol", k, 0, self.mu)?;
        check_range("position", i, 0, self.len)?;
        Ok(self.rank_le(k, i))
    }

    /// Occurrences of `k` in `S[1, i]`.
    #[inline]
    pub fn rank(&self, k: usize, i: usize) -> usize {
        self.band_rank(k, k, i)
    }

    /// Rank on the simulated bitmap `B_{k,l}`.
    #[inline]
    pub fn band_rank(&self, k: usize, l: usize, i: usize) -> usize {
        if k > l {
            return 0;
        }
        self.rank_le(l, i) - self.rank_le(k - 1, i)
    }

    fn band_rank_block(&self, k: usize, l: usize, b: usize) -> usize {
        let at = |kk: usize| -> usize {
            if kk == 0 {
                0
            } else if kk >= self.mu {
                (b * BLOCK).min(self.len)
            } else {
                self.le[b * self.mu + kk - 1] as usize
            }
        };
        at(l) - at(k - 1)
    }

    /// Select on the simulated bitmap `B_{k,l}`: position of the `j`-th
    /// symbol within `[k, l]`.
    pub fn band_select(&self, k: usize, l: usize, j: usize) -> Option<usize> {
        if j == 0 || k == 0 || k > l || l > self.mu {
            return None;
        }
        let nblocks = self.len / BLOCK + 1;
        // Window of blocks known to contain the answer.
        let (mut lo, mut hi) = (0usize, nblocks);
        if self.mode == BandMode::AllBands {
            let samples = &self.samples[band_index(self.mu, k, l)];
            let s = (j - 1) / SAMPLE;
            let first = *samples.get(s)? as usize;
            lo = first / BLOCK;
            if let Some(&next) = samples.get(s + 1) {
                hi = (next as usize / BLOCK + 1).min(nblocks);
            }
        }
        // Last block in [lo, hi) whose preceding band count is below j.
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.band_rank_block(k, l, mid) < j {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut c = self.band_rank_block(k, l, lo);
        let end = ((lo + 1) * BLOCK).min(self.len);
        for p in lo * BLOCK..end {
            let s = self.get0(p);
            if k <= s && s <= l {
                c += 1;
                if c == j {
                    return Some(p + 1);
                }
            }
        }
        None
    }

    /// Position of the `j`-th `k`.
    pub fn select(&self, k: usize, j: usize) -> Option<usize> {
        self.band_select(k, k, j)
    }

    /// Smallest `q > p` whose symbol lies in `[k, l]`.
    pub fn band_select_next(&self, k: usize, l: usize, p: usize) -> Option<usize> {
        self.band_select(k, l, self.band_rank(k, l, p) + 1)
    }

    pub fn checked_band_select_next(&self, k: usize, l: usize, p: usize) -> Result<Option<usize>> {
        if k == 0 || k > l || l > self.mu {
            return Err(Error::InvalidRange { lo: k, hi: l });
        }
        check_range("position", p, 0, self.len)?;
        Ok(self.band_select_next(k, l, p))
    }

    /// Distinct symbols of `[k, l]` occurring in `S[p, q]`, ascending.
    ///
    /// Each probe finds the first band hit after `p - 1`; its symbol splits
    /// the band into two smaller ones. Failed probes end a branch, so the
    /// probe count is at most twice the answer size plus one.
    pub fn distinct_in_range(
        &self,
        k: usize,
        l: usize,
        p: usize,
        q: usize,
        trace: &mut Trace,
    ) -> Vec<usize> {
        let mut out = Vec::new();
        if p <= q && q <= self.len && p >= 1 {
            self.distinct_into(k, l, p, q, trace, &mut out);
        }
        out
    }

    fn distinct_into(
        &self,
        k: usize,
        l: usize,
        p: usize,
        q: usize,
        trace: &mut Trace,
        out: &mut Vec<usize>,
    ) {
        if k > l {
            return;
        }
        trace.band_probes += 1;
        let Some(hit) = self.band_select_next(k, l, p - 1).filter(|&h| h <= q) else {
            return;
        };
        let s = self.access(hit);
        self.distinct_into(k, s - 1, p, q, trace, out);
        out.push(s);
        self.distinct_into(s + 1, l, p, q, trace, out);
    }

    pub fn payload_bits(&self) -> usize {
        self.len * self.width as usize
    }

    pub fn directory_bits(&self) -> usize {
        self.le.len() * 32 + self.samples.iter().map(|s| s.len() * 32).sum::<usize>()
    }

    /// `mu`, `len`, band mode byte, then the packed payload words.
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        write_u64(w, self.mu as u64)?;
        write_u64(w, self.len as u64)?;
        write_u8(
            w,
            match self.mode {
                BandMode::AllBands => 0,
                BandMode::PrefixOnly => 1,
            },
        )?;
        for &word in &self.payload {
            write_u64(w, word)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mu = read_len(r, "arity")?;
        if mu == 0 || mu > 255 {
            return Err(Error::Format(format!("arity {mu} outside [1, 255]")));
        }
        let len = read_len(r, "sequence length")?;
        let mode = match read_u8(r)? {
            0 => BandMode::AllBands,
            1 => BandMode::PrefixOnly,
            m => return Err(Error::Format(format!("unknown band mode {m}"))),
        };
        let width = ceil_log2(mu) as u32;
        let nwords = (len * width as usize).div_ceil(64);
        let mut payload = Vec::with_capacity(nwords);
        for _ in 0..nwords {
            payload.push(read_u64(r)?);
        }
        let s = Self::from_parts(mu, len, width, payload, mode);
        if (0..len).any(|i| s.get0(i) > mu) {
            return Err(Error::Format("packed symbol outside alphabet".into()));
        }
        Ok(s)
    }
}

#[inline]
fn band_index(mu: usize, k: usize, l: usize) -> usize {
    // Bands with first symbol below k come first.
    (k - 1) * (2 * mu + 2 - k) / 2 + (l - k)
}
