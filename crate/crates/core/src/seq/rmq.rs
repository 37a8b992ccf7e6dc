//! Leftmost range-minimum queries over a sparse table.

/// Answers `argmin` over ranges of a fixed value sequence, preferring the
/// leftmost position among equal minima.
///
/// Each table entry packs `value << 40 | position`, so the smaller key is
/// automatically the smaller value and then the earlier position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rmq {
    len: usize,
    table: Vec<Vec<u64>>,
}

const POS_BITS: u32 = 40;

impl Rmq {
    pub fn new<I>(values: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<u64>,
    {
        let base: Vec<u64> = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let v: u64 = v.into();
                debug_assert!(v < 1 << (64 - POS_BITS));
                (v << POS_BITS) | i as u64
            })
            .collect();
        let len = base.len();
        let mut table = vec![base];
        let mut width = 1;
        while 2 * width <= len {
            let prev = table.last().unwrap();
            let next = (0..=len - 2 * width)
                .map(|i| prev[i].min(prev[i + width]))
                .collect();
            table.push(next);
            width *= 2;
        }
        Self { len, table }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Leftmost position of the minimum of `values[i..=j]` (1-based).
    pub fn query(&self, i: usize, j: usize) -> usize {
        assert!(1 <= i && i <= j && j <= self.len, "invalid range [{i}, {j}]");
        let k = (usize::BITS - 1 - (j - i + 1).leading_zeros()) as usize;
        let level = &self.table[k];
        let key = level[i - 1].min(level[j - (1 << k)]);
        (key & ((1 << POS_BITS) - 1)) as usize + 1
    }

    pub fn checked_query(&self, i: usize, j: usize) -> Option<usize> {
        (1 <= i && i <= j && j <= self.len).then(|| self.query(i, j))
    }

    pub fn directory_bits(&self) -> usize {
        self.table.iter().map(|l| l.len() * 64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = Rmq::new([2u8, 3, 1, 3, 2, 1, 3, 4]);
        assert_eq!(r.query(3, 7), 3);
        assert_eq!(r.query(4, 8), 6);
        for i in 1..=8 {
            assert_eq!(r.query(i, i), i);
        }
        assert_eq!(r.checked_query(5, 4), None);
    }

    #[test]
    fn exhaustive_against_scan() {
        let mut state = 7u64;
        for len in 1..=256usize {
            let vals: Vec<u8> = (0..len)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state % 5) as u8
                })
                .collect();
            let r = Rmq::new(vals.iter().copied());
            for i in 1..=len {
                let mut best = i;
                for j in i..=len {
                    if vals[j - 1] < vals[best - 1] {
                        best = j;
                    }
                    assert_eq!(r.query(i, j), best);
                }
            }
        }
    }
}
