//! Packed bitvectors with sampled rank and select support.
//!
//! Positions are 1-based at the public surface: a vector of length `L` holds
//! bits `1..=L`, `rank1(i)` counts ones in `1..=i` and `select1(q)` returns the
//! position of the `q`-th one. `rank(0)` is 0.
//!
//! The support structure is the usual two-level rank directory (absolute
//! counts per superblock, relative counts per block) plus a sparse sample of
//! every `K`-th one and zero. Select jumps to the sample, narrows down to a
//! superblock and then a block using the rank directory, and finishes with
//! word-level popcounts.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::error::{check_range, Error, Result};
use crate::ser;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Position (0-based) of the `r`-th set bit of `w`, `r` 1-based.
#[inline]
fn select_in_word(mut w: u64, r: usize) -> usize {
    debug_assert!(r >= 1 && r <= w.count_ones() as usize);
    for _ in 1..r {
        w &= w - 1;
    }
    w.trailing_zeros() as usize
}

/// An immutable packed sequence of bits.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn builder() -> BitVectorBuilder {
        BitVectorBuilder::default()
    }

    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// Builds a vector from raw words; bits past `len` are cleared.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Result<Self> {
        if words.len() != words_for(len) {
            return Err(Error::Format(format!(
                "{} words cannot hold exactly {len} bits",
                words.len()
            )));
        }
        if !len.is_multiple_of(WORD) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % WORD)) - 1;
            }
        }
        Ok(BitVector { words, len })
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

    /// Bit at 1-based position `p`.
    pub fn get(&self, p: usize) -> Result<bool> {
        check_range("bit position", p, 1, self.len)?;
        Ok(self.bit(p - 1))
    }

    #[inline]
    pub(crate) fn bit(&self, idx: usize) -> bool {
        (self.words[idx / WORD] >> (idx % WORD)) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.bit(i))
    }

    /// Payload bits, excluding padding of the last word.
    pub fn size_in_bits(&self) -> usize {
        self.len
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        ser::write_u64(w, self.len as u64)?;
        ser::write_words(w, &self.words)
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let len = ser::read_usize(r)?;
        let words = ser::read_words(r, words_for(len))?;
        BitVector::from_words(words, len)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({}, \"{}\")", self.len, self)
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut b = BitVector::builder();
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => b.push(false),
                '1' => b.push(true),
                _ => {
                    return Err(Error::Format(format!(
                        "unexpected {c:?} at offset {i} in bit string"
                    )))
                }
            }
        }
        Ok(b.finish())
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = BitVector::builder();
        for bit in iter {
            b.push(bit);
        }
        b.finish()
    }
}

/// Append-only construction of a [`BitVector`].
#[derive(Default)]
pub struct BitVectorBuilder {
    words: Vec<u64>,
    len: usize,
}

impl BitVectorBuilder {
    pub fn with_capacity(bits: usize) -> Self {
        BitVectorBuilder {
            words: Vec::with_capacity(words_for(bits)),
            len: 0,
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1u64 << (self.len % WORD);
        }
        self.len += 1;
    }

    /// Appends `count` zeros.
    pub fn push_zeros(&mut self, count: usize) {
        self.len += count;
        self.words.resize(words_for(self.len), 0);
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn finish(self) -> BitVector {
        BitVector {
            words: self.words,
            len: self.len,
        }
    }
}

/// Sample spacings of a [`RankSelectSupport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportParams {
    /// Bits per superblock; a multiple of `block_bits`, at most 65536.
    pub superblock_bits: usize,
    /// Bits per block; a multiple of 64.
    pub block_bits: usize,
    /// Every `select_sample`-th one (and zero) has its position stored.
    pub select_sample: usize,
}

impl Default for SupportParams {
    fn default() -> Self {
        SupportParams {
            superblock_bits: 4096,
            block_bits: 64,
            select_sample: 8192,
        }
    }
}

impl SupportParams {
    pub fn validate(&self) -> Result<()> {
        if self.block_bits == 0 || !self.block_bits.is_multiple_of(WORD) {
            return Err(Error::Config(format!(
                "block size {} must be a positive multiple of 64",
                self.block_bits
            )));
        }
        if self.superblock_bits == 0
            || !self.superblock_bits.is_multiple_of(self.block_bits)
            || self.superblock_bits > 1 << 16
        {
            return Err(Error::Config(format!(
                "superblock size {} must be a multiple of the block size and at most 65536",
                self.superblock_bits
            )));
        }
        if self.select_sample == 0 {
            return Err(Error::Config("select sample rate must be positive".into()));
        }
        Ok(())
    }
}

/// Rank and select directories over a [`BitVector`] that is passed to every
/// query. The support must only be used with the vector it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankSelectSupport {
    params: SupportParams,
    len: usize,
    ones: usize,
    // rank1 at the start of each superblock
    superblock_ranks: Vec<u64>,
    // rank1 at the start of each block, relative to its superblock
    block_ranks: Vec<u16>,
    // select_ones[t] = position of the (t*K)-th one; select_ones[0] = 0
    select_ones: Vec<u64>,
    select_zeros: Vec<u64>,
}

impl RankSelectSupport {
    pub fn build(bits: &BitVector) -> Self {
        Self::with_params(bits, SupportParams::default()).expect("default parameters are valid")
    }

    pub fn with_params(bits: &BitVector, params: SupportParams) -> Result<Self> {
        params.validate()?;
        let len = bits.len();
        let words_per_block = params.block_bits / WORD;
        let blocks_per_super = params.superblock_bits / params.block_bits;
        let n_blocks = len / params.block_bits + 1;
        let n_supers = len / params.superblock_bits + 1;

        let mut superblock_ranks = Vec::with_capacity(n_supers);
        let mut block_ranks = Vec::with_capacity(n_blocks);
        let mut total = 0usize;
        let mut super_base = 0usize;
        for b in 0..n_blocks {
            if b % blocks_per_super == 0 {
                super_base = total;
                superblock_ranks.push(total as u64);
            }
            block_ranks.push((total - super_base) as u16);
            let lo = b * words_per_block;
            let hi = ((b + 1) * words_per_block).min(bits.words.len());
            if lo < hi {
                total += bits.words[lo..hi]
                    .iter()
                    .map(|w| w.count_ones() as usize)
                    .sum::<usize>();
            }
        }

        let k = params.select_sample;
        let mut select_ones = vec![0u64];
        let mut select_zeros = vec![0u64];
        let (mut seen1, mut seen0) = (0usize, 0usize);
        for (wi, &w) in bits.words.iter().enumerate() {
            let valid = (len - wi * WORD).min(WORD);
            let ones = w.count_ones() as usize;
            let zeros = valid - ones;
            // next sample targets fall inside this word?
            let next1 = select_ones.len() * k;
            if seen1 + ones >= next1 {
                let mut target = next1;
                while target <= seen1 + ones {
                    let p = wi * WORD + select_in_word(w, target - seen1) + 1;
                    select_ones.push(p as u64);
                    target += k;
                }
            }
            let next0 = select_zeros.len() * k;
            if seen0 + zeros >= next0 {
                let inv = !w
                    & if valid == WORD {
                        u64::MAX
                    } else {
                        (1u64 << valid) - 1
                    };
                let mut target = next0;
                while target <= seen0 + zeros {
                    let p = wi * WORD + select_in_word(inv, target - seen0) + 1;
                    select_zeros.push(p as u64);
                    target += k;
                }
            }
            seen1 += ones;
            seen0 += zeros;
        }

        Ok(RankSelectSupport {
            params,
            len,
            ones: total,
            superblock_ranks,
            block_ranks,
            select_ones,
            select_zeros,
        })
    }

    pub fn params(&self) -> SupportParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    /// Bits occupied by the directories, excluding the vector itself.
    pub fn size_in_bits(&self) -> usize {
        self.superblock_ranks.len() * 64
            + self.block_ranks.len() * 16
            + (self.select_ones.len() + self.select_zeros.len()) * 64
    }

    pub fn rank1(&self, bits: &BitVector, i: usize) -> Result<usize> {
        check_range("rank position", i, 0, self.len)?;
        Ok(self.rank1_unchecked(bits, i))
    }

    pub fn rank0(&self, bits: &BitVector, i: usize) -> Result<usize> {
        check_range("rank position", i, 0, self.len)?;
        Ok(i - self.rank1_unchecked(bits, i))
    }

    pub fn select1(&self, bits: &BitVector, q: usize) -> Result<usize> {
        check_range("select1 rank", q, 1, self.ones)?;
        Ok(self.select_unchecked(bits, q, true))
    }

    pub fn select0(&self, bits: &BitVector, q: usize) -> Result<usize> {
        check_range("select0 rank", q, 1, self.len - self.ones)?;
        Ok(self.select_unchecked(bits, q, false))
    }

    /// Ones in positions `1..=i`; `i <= len`.
    #[inline]
    pub(crate) fn rank1_unchecked(&self, bits: &BitVector, i: usize) -> usize {
        let p = self.params;
        let block = i / p.block_bits;
        let mut r = self.superblock_ranks[i / p.superblock_bits] as usize
            + self.block_ranks[block] as usize;
        let first_word = block * (p.block_bits / WORD);
        let last_word = i / WORD;
        for w in &bits.words[first_word..last_word] {
            r += w.count_ones() as usize;
        }
        if !i.is_multiple_of(WORD) {
            r += (bits.words[last_word] & ((1u64 << (i % WORD)) - 1)).count_ones() as usize;
        }
        r
    }

    /// Position of the `q`-th `one`-bit; `1 <= q <= count`.
    pub(crate) fn select_unchecked(&self, bits: &BitVector, q: usize, one: bool) -> usize {
        let p = self.params;
        let samples = if one {
            &self.select_ones
        } else {
            &self.select_zeros
        };
        let t = q / p.select_sample;
        if t > 0 && t * p.select_sample == q {
            return samples[t] as usize;
        }
        let lo_pos = samples[t] as usize;
        let hi_pos = samples.get(t + 1).map_or(self.len, |&x| x as usize);

        let super_count = |s: usize| -> usize {
            let r = self.superblock_ranks[s] as usize;
            if one {
                r
            } else {
                s * p.superblock_bits - r
            }
        };
        // last superblock whose preceding count is < q
        let s_lo = lo_pos / p.superblock_bits;
        let s_hi = (hi_pos / p.superblock_bits).min(self.superblock_ranks.len() - 1);
        let s = partition_point(s_lo, s_hi + 1, |s| super_count(s) < q) - 1;
        let base = super_count(s);

        let blocks_per_super = p.superblock_bits / p.block_bits;
        let b_lo = s * blocks_per_super;
        let b_hi = ((s + 1) * blocks_per_super).min(self.block_ranks.len());
        let block_count = |b: usize| -> usize {
            let rel = self.block_ranks[b] as usize;
            if one {
                base + rel
            } else {
                b * p.block_bits - (self.superblock_ranks[s] as usize + rel)
            }
        };
        let b = partition_point(b_lo, b_hi, |b| block_count(b) < q) - 1;

        let mut remaining = q - block_count(b);
        let mut wi = b * (p.block_bits / WORD);
        loop {
            let mut w = bits.words[wi];
            if !one {
                w = !w;
            }
            let c = w.count_ones() as usize;
            if c >= remaining {
                return wi * WORD + select_in_word(w, remaining) + 1;
            }
            remaining -= c;
            wi += 1;
        }
    }
}

/// First index in `lo..hi` for which `pred` fails; `pred` must be monotone.
fn partition_point<F: Fn(usize) -> bool>(mut lo: usize, mut hi: usize, pred: F) -> usize {
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// A bitvector bundled with its rank/select support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankSelect {
    bits: BitVector,
    support: RankSelectSupport,
}

impl RankSelect {
    pub fn new(bits: BitVector) -> Self {
        let support = RankSelectSupport::build(&bits);
        RankSelect { bits, support }
    }

    pub fn with_params(bits: BitVector, params: SupportParams) -> Result<Self> {
        let support = RankSelectSupport::with_params(&bits, params)?;
        Ok(RankSelect { bits, support })
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn support(&self) -> &RankSelectSupport {
        &self.support
    }

    pub fn into_bits(self) -> BitVector {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.support.count_ones()
    }

    pub fn count_zeros(&self) -> usize {
        self.support.count_zeros()
    }

    pub fn get(&self, p: usize) -> Result<bool> {
        self.bits.get(p)
    }

    pub fn rank1(&self, i: usize) -> Result<usize> {
        self.support.rank1(&self.bits, i)
    }

    pub fn rank0(&self, i: usize) -> Result<usize> {
        self.support.rank0(&self.bits, i)
    }

    pub fn select1(&self, q: usize) -> Result<usize> {
        self.support.select1(&self.bits, q)
    }

    pub fn select0(&self, q: usize) -> Result<usize> {
        self.support.select0(&self.bits, q)
    }

    #[inline]
    pub(crate) fn rank1_unchecked(&self, i: usize) -> usize {
        self.support.rank1_unchecked(&self.bits, i)
    }
}

/// Fixed-width unsigned integers packed back to back into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PackedInts {
    words: Vec<u64>,
    width: usize,
    len: usize,
}

impl PackedInts {
    /// `width` in `0..=64`; a zero width stores only zeros.
    pub fn new(width: usize) -> Self {
        assert!(width <= 64, "packed width {width} exceeds 64");
        PackedInts {
            words: Vec::new(),
            width,
            len: 0,
        }
    }

    /// Smallest width able to hold `max_value`.
    pub fn width_for(max_value: u64) -> usize {
        (64 - max_value.leading_zeros()) as usize
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, value: u64) {
        assert!(
            self.width == 64 || value >> self.width == 0,
            "value {value} does not fit in {} bits",
            self.width
        );
        let start = self.len * self.width;
        self.len += 1;
        self.words.resize(words_for(self.len * self.width), 0);
        if self.width == 0 {
            return;
        }
        let (wi, off) = (start / WORD, start % WORD);
        self.words[wi] |= value << off;
        if off + self.width > WORD {
            self.words[wi + 1] |= value >> (WORD - off);
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        if self.width == 0 {
            return 0;
        }
        let start = i * self.width;
        let (wi, off) = (start / WORD, start % WORD);
        let mask = if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        };
        let mut v = self.words[wi] >> off;
        if off + self.width > WORD {
            v |= self.words[wi + 1] << (WORD - off);
        }
        v & mask
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub fn size_in_bits(&self) -> usize {
        self.len * self.width
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        ser::write_u64(w, self.width as u64)?;
        ser::write_u64(w, self.len as u64)?;
        ser::write_words(w, &self.words)
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let width = ser::read_usize(r)?;
        if width > 64 {
            return Err(Error::Format(format!("packed width {width} exceeds 64")));
        }
        let len = ser::read_usize(r)?;
        let total = len
            .checked_mul(width)
            .ok_or_else(|| Error::Format("packed table size overflows".into()))?;
        let words = ser::read_words(r, words_for(total))?;
        Ok(PackedInts { words, width, len })
    }
}

impl FromIterator<u64> for PackedInts {
    /// Packs with the narrowest width that fits every value.
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let values: Vec<u64> = iter.into_iter().collect();
        let width = PackedInts::width_for(values.iter().copied().max().unwrap_or(0));
        let mut p = PackedInts::new(width);
        for v in values {
            p.push(v);
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_S: &str = "00001111000110011101";

    fn rs(s: &str) -> RankSelect {
        RankSelect::new(s.parse().unwrap())
    }

    fn scan_rank1(v: &BitVector, i: usize) -> usize {
        v.iter().take(i).filter(|&b| b).count()
    }

    fn scan_select(v: &BitVector, q: usize, one: bool) -> Option<usize> {
        v.iter()
            .enumerate()
            .filter(|&(_, b)| b == one)
            .nth(q - 1)
            .map(|(i, _)| i + 1)
    }

    #[test]
    fn example_vector_matches_scan() {
        let v = rs(EXAMPLE_S);
        assert_eq!(v.rank1(8).unwrap(), 4);
        assert_eq!(v.rank1(20).unwrap(), 10);
        assert_eq!(v.rank0(8).unwrap(), 4);
        assert_eq!(v.rank0(20).unwrap(), 10);
        assert_eq!(v.select1(1).unwrap(), 5);
        assert_eq!(v.select1(4).unwrap(), 8);
        assert_eq!(v.select0(5).unwrap(), 9);
        assert_eq!(v.select0(10).unwrap(), 19);
        for i in 0..=20 {
            assert_eq!(v.rank1(i).unwrap(), scan_rank1(v.bits(), i));
        }
    }

    #[test]
    fn trivial_vectors() {
        let one = rs("1");
        assert_eq!(one.rank1(1).unwrap(), 1);
        assert_eq!(one.select1(1).unwrap(), 1);
        assert_eq!(one.rank1(0).unwrap(), 0);

        let zeros = RankSelect::new(BitVector::zeros(64));
        assert_eq!(zeros.rank1(64).unwrap(), 0);
        assert_eq!(zeros.select0(64).unwrap(), 64);
        assert!(zeros.select1(1).is_err());

        assert_eq!(rs("01").select0(1).unwrap(), 1);
        let empty = RankSelect::new(BitVector::default());
        assert_eq!(empty.rank1(0).unwrap(), 0);
        assert_eq!(empty.rank0(0).unwrap(), 0);
    }

    #[test]
    fn range_errors() {
        let v = rs(EXAMPLE_S);
        assert!(matches!(v.rank1(21), Err(Error::Range { .. })));
        assert!(v.select1(0).is_err());
        assert!(v.select1(11).is_err());
        assert!(v.select0(11).is_err());
        assert!(v.get(0).is_err());
        assert!(v.get(21).is_err());
    }

    #[test]
    fn small_params_cross_many_samples() {
        let params = SupportParams {
            superblock_bits: 256,
            block_bits: 128,
            select_sample: 3,
        };
        let bits: BitVector = (0..3000).map(|i| (i * 7919) % 13 < 4).collect();
        let v = RankSelect::with_params(bits.clone(), params).unwrap();
        for q in 1..=v.count_ones() {
            assert_eq!(v.select1(q).unwrap(), scan_select(&bits, q, true).unwrap());
        }
        for q in 1..=v.count_zeros() {
            assert_eq!(v.select0(q).unwrap(), scan_select(&bits, q, false).unwrap());
        }
        for i in 0..=bits.len() {
            assert_eq!(v.rank1(i).unwrap(), scan_rank1(&bits, i));
        }
    }

    #[test]
    fn bad_params_rejected() {
        let bits = BitVector::zeros(10);
        for p in [
            SupportParams {
                block_bits: 65,
                ..Default::default()
            },
            SupportParams {
                superblock_bits: 100,
                ..Default::default()
            },
            SupportParams {
                superblock_bits: 1 << 17,
                ..Default::default()
            },
            SupportParams {
                select_sample: 0,
                ..Default::default()
            },
        ] {
            assert!(matches!(
                RankSelect::with_params(bits.clone(), p),
                Err(Error::Config(_))
            ));
        }
    }

    #[test]
    fn serialization_layout() {
        let v: BitVector = EXAMPLE_S.parse().unwrap();
        let mut buf = Vec::new();
        v.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..8], &20u64.to_le_bytes());
        assert_eq!(buf.len(), 16);
        // bit 1 is the least significant bit of the first word
        let word = u64::from_le_bytes(buf[8..16].try_into().unwrap());
        assert_eq!(word, 0b1011_1001_1000_1111_0000);
        assert_eq!(BitVector::read_from(&mut buf.as_slice()).unwrap(), v);
    }

    #[test]
    fn packed_ints_straddle_words() {
        let mut p = PackedInts::new(13);
        let values: Vec<u64> = (0..200).map(|i| (i * 2654435761u64) & 0x1fff).collect();
        for &x in &values {
            p.push(x);
        }
        assert_eq!(p.iter().collect::<Vec<_>>(), values);
        assert_eq!(p.size_in_bits(), 200 * 13);
        let mut buf = Vec::new();
        p.write_to(&mut buf).unwrap();
        assert_eq!(PackedInts::read_from(&mut buf.as_slice()).unwrap(), p);

        let full: PackedInts = [u64::MAX, 0, 5].into_iter().collect();
        assert_eq!(full.width(), 64);
        assert_eq!(full.get(0), u64::MAX);
        assert_eq!(PackedInts::width_for(0), 0);
        assert_eq!(PackedInts::width_for(16), 5);
    }
}
