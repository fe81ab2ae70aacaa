//! Packed bit tables indexed by `0..len`, stored least-significant bit first in `u64` words.

use std::fmt;

const WORD_BITS: usize = 64;

/// Low-half masks for in-word butterfly strides 1, 2, 4, ..., 32.
const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitTable {
    len: usize,
    words: Vec<u64>,
}

impl BitTable {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut t = Self::zeros(len);
        for w in t.words.iter_mut() {
            *w = u64::MAX;
        }
        t.clear_tail();
        t
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut t = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                t.set(i, true);
            }
        }
        t
    }

    /// Builds a table of `len <= 64` entries from the low bits of `word`.
    pub fn from_word(word: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS);
        let mut t = Self::zeros(len);
        if len > 0 {
            t.words[0] = word;
            t.clear_tail();
        }
        t
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let m = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= m;
        } else {
            self.words[i / WORD_BITS] &= !m;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Pointwise XOR. Panics if lengths differ; callers check arity first.
    pub fn xor_assign(&mut self, other: &BitTable) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn not_any(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits in ascending order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    /// In-place binary Möbius transform over GF(2): for every index bit `b`,
    /// `t[x] ^= t[x ^ (1 << b)]` whenever bit `b` of `x` is set.
    ///
    /// `len` must be a power of two. The transform is its own inverse.
    pub fn mobius_in_place(&mut self) {
        assert!(
            self.len.is_power_of_two(),
            "Möbius transform needs a 2^n table"
        );
        let n = self.len.trailing_zeros() as usize;
        for (b, mask) in LOW_HALF.iter().enumerate().take(n.min(6)) {
            let shift = 1u32 << b;
            for w in self.words.iter_mut() {
                *w ^= (*w & mask) << shift;
            }
        }
        for b in 6..n {
            let stride = 1usize << (b - 6);
            for j in 0..self.words.len() {
                if j & stride != 0 {
                    self.words[j] ^= self.words[j ^ stride];
                }
            }
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitTable {
    /// `0`/`1` characters in index order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitTable({self})")
    }
}
