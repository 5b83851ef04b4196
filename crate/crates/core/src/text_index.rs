//! Sentinel-terminated texts, suffix arrays and plain LCP arrays.
//!
//! All public indices are 1-based: `A[1..=n]`, `H[1..=n]`, `T[1..=n]`, where
//! `T[n]` is the sentinel byte `0x00`.

use std::hint;
use std::io::{Read, Write};
use std::time::{Duration, Instant};

use crate::error::{check_range, Error, Result};
use crate::ser;

pub const SENTINEL: u8 = 0x00;

/// Extra zero bytes kept after the sentinel so that word-sized reads starting
/// at any text position stay in bounds.
const PAD: usize = 7;

/// A byte text terminated by a unique, lexicographically smallest sentinel.
#[derive(Clone, PartialEq, Eq)]
pub struct Text {
    // T[1..=n] followed by PAD zero bytes
    padded: Vec<u8>,
    n: usize,
    sigma: usize,
}

impl Text {
    /// Appends the sentinel to `raw`. Fails if `raw` already contains 0x00.
    pub fn load(raw: &[u8]) -> Result<Self> {
        if let Some(offset) = raw.iter().position(|&b| b == SENTINEL) {
            return Err(Error::EmbeddedSentinel { offset });
        }
        let n = raw.len() + 1;
        let mut padded = Vec::with_capacity(n + PAD);
        padded.extend_from_slice(raw);
        padded.resize(n + PAD, SENTINEL);

        let mut seen = [false; 256];
        for &b in &padded[..n] {
            seen[b as usize] = true;
        }
        let sigma = seen.iter().filter(|&&s| s).count();
        Ok(Text { padded, n, sigma })
    }

    /// Length including the sentinel.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: a text holds at least the sentinel.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of distinct bytes, sentinel included.
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// `T[1..=n]` as a 0-based slice, sentinel included.
    pub fn as_bytes(&self) -> &[u8] {
        &self.padded[..self.n]
    }

    /// The original input, without the sentinel.
    pub fn raw(&self) -> &[u8] {
        &self.padded[..self.n - 1]
    }

    /// `T[p]`.
    pub fn get(&self, p: usize) -> Result<u8> {
        check_range("text position", p, 1, self.n)?;
        Ok(self.padded[p - 1])
    }

    #[inline]
    pub(crate) fn byte(&self, p: usize) -> u8 {
        self.padded[p - 1]
    }

    /// Eight bytes starting at `T[p]`, little-endian; bytes past the sentinel
    /// read as zero.
    #[inline]
    pub(crate) fn word_at(&self, p: usize) -> u64 {
        let bytes: [u8; 8] = self.padded[p - 1..p + 7].try_into().unwrap();
        u64::from_le_bytes(bytes)
    }
}

impl std::fmt::Debug for Text {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Text")
            .field("n", &self.n)
            .field("sigma", &self.sigma)
            .field("raw", &String::from_utf8_lossy(self.raw()))
            .finish()
    }
}

/// Read access to suffix array entries `A[i]`, `1 <= i <= len()`.
///
/// Implemented by the plain [`SuffixArray`] and by [`DelayedAccess`], which
/// emulates the slower lookups of a compressed suffix array.
pub trait SuffixAccess {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `A[i]`; panics when `i` is outside `1..=len()`.
    fn sa(&self, i: usize) -> usize;
}

/// A suffix array together with its inverse permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixArray {
    // 1-based values stored 0-based: sa[i - 1] = A[i]
    sa: Vec<usize>,
    inv: Vec<usize>,
}

impl SuffixArray {
    /// Wraps a 1-based permutation, computing the inverse.
    pub fn from_positions(sa: Vec<usize>) -> Result<Self> {
        let n = sa.len();
        let mut inv = vec![0usize; n];
        for (i, &p) in sa.iter().enumerate() {
            if p == 0 || p > n || inv[p - 1] != 0 {
                return Err(Error::Format(format!(
                    "suffix array entry {} = {p} breaks the permutation of 1..={n}",
                    i + 1
                )));
            }
            inv[p - 1] = i + 1;
        }
        Ok(SuffixArray { sa, inv })
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    /// `A[i]`.
    pub fn get(&self, i: usize) -> Result<usize> {
        check_range("suffix array index", i, 1, self.sa.len())?;
        Ok(self.sa[i - 1])
    }

    /// `A⁻¹[p]`: the lexicographic rank of the suffix starting at `p`.
    pub fn inverse(&self, p: usize) -> Result<usize> {
        check_range("text position", p, 1, self.inv.len())?;
        Ok(self.inv[p - 1])
    }

    #[inline]
    pub(crate) fn inv_unchecked(&self, p: usize) -> usize {
        self.inv[p - 1]
    }

    pub fn positions(&self) -> &[usize] {
        &self.sa
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(SA_MAGIC)?;
        ser::write_u64(w, self.sa.len() as u64)?;
        for &p in &self.sa {
            ser::write_u64(w, p as u64)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        ser::expect_magic(r, SA_MAGIC)?;
        let n = ser::read_usize(r)?;
        let values = ser::read_words(r, n)?;
        SuffixArray::from_positions(values.into_iter().map(|v| v as usize).collect())
    }
}

impl SuffixAccess for SuffixArray {
    fn len(&self) -> usize {
        self.sa.len()
    }

    #[inline]
    fn sa(&self, i: usize) -> usize {
        self.sa[i - 1]
    }
}

const SA_MAGIC: &[u8; 8] = b"WLSUFARR";
const LCP_MAGIC: &[u8; 8] = b"WLLCPARR";

/// Busy-waits for a fixed delay on every lookup of the wrapped suffix array.
pub struct DelayedAccess<'a, S: ?Sized> {
    inner: &'a S,
    delay: Duration,
}

impl<'a, S: SuffixAccess + ?Sized> DelayedAccess<'a, S> {
    pub fn new(inner: &'a S, delay: Duration) -> Self {
        DelayedAccess { inner, delay }
    }
}

impl<S: SuffixAccess + ?Sized> SuffixAccess for DelayedAccess<'_, S> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn sa(&self, i: usize) -> usize {
        if !self.delay.is_zero() {
            let start = Instant::now();
            while start.elapsed() < self.delay {
                hint::spin_loop();
            }
        }
        self.inner.sa(i)
    }
}

/// Plain LCP array `H[1..=n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcpArray {
    h: Vec<usize>,
}

impl LcpArray {
    pub fn from_values(h: Vec<usize>) -> Self {
        LcpArray { h }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// `H[i]`.
    pub fn get(&self, i: usize) -> Result<usize> {
        check_range("lcp index", i, 1, self.h.len())?;
        Ok(self.h[i - 1])
    }

    #[inline]
    pub(crate) fn at(&self, i: usize) -> usize {
        self.h[i - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.h
    }

    /// `n * ceil(log2 n)` bits, the cost of storing every entry in a minimal
    /// fixed-width array.
    pub fn size_in_bits(&self) -> usize {
        let n = self.h.len();
        n * (usize::BITS - n.saturating_sub(1).leading_zeros()) as usize
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(LCP_MAGIC)?;
        ser::write_u64(w, self.h.len() as u64)?;
        for &v in &self.h {
            ser::write_u64(w, v as u64)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        ser::expect_magic(r, LCP_MAGIC)?;
        let n = ser::read_usize(r)?;
        let values = ser::read_words(r, n)?;
        Ok(LcpArray::from_values(
            values.into_iter().map(|v| v as usize).collect(),
        ))
    }
}

/// Suffix array by prefix doubling with counting sorts, `O(n log n)`.
pub fn build_suffix_array(text: &Text) -> SuffixArray {
    let t = text.as_bytes();
    let n = t.len();

    let mut sa: Vec<usize> = (0..n).collect();
    sa.sort_by_key(|&i| t[i]);
    let mut rank = vec![0usize; n];
    for w in 1..n {
        rank[sa[w]] = rank[sa[w - 1]] + usize::from(t[sa[w]] != t[sa[w - 1]]);
    }

    let mut order = vec![0usize; n];
    let mut next_rank = vec![0usize; n];
    let mut counts = vec![0usize; n + 1];
    let mut k = 1;
    while n > 0 && rank[sa[n - 1]] < n - 1 {
        // order by second key: suffixes shorter than k first, then by rank of i + k
        order.clear();
        order.extend(n - k.min(n)..n);
        order.extend(sa.iter().filter(|&&p| p >= k).map(|&p| p - k));

        // stable counting sort by first key
        counts.iter_mut().for_each(|c| *c = 0);
        for &p in &order {
            counts[rank[p] + 1] += 1;
        }
        for c in 1..=n {
            counts[c] += counts[c - 1];
        }
        for &p in &order {
            sa[counts[rank[p]]] = p;
            counts[rank[p]] += 1;
        }

        let second = |p: usize| if p + k < n { Some(rank[p + k]) } else { None };
        next_rank[sa[0]] = 0;
        for w in 1..n {
            let (a, b) = (sa[w - 1], sa[w]);
            let differs = rank[a] != rank[b] || second(a) != second(b);
            next_rank[b] = next_rank[a] + usize::from(differs);
        }
        std::mem::swap(&mut rank, &mut next_rank);
        k *= 2;
    }

    SuffixArray::from_positions(sa.into_iter().map(|p| p + 1).collect())
        .expect("prefix doubling yields a permutation")
}

/// Kasai et al.'s linear-time LCP construction.
pub fn build_lcp_kasai(text: &Text, sa: &SuffixArray) -> LcpArray {
    build_lcp_kasai_counted(text, sa).0
}

/// As [`build_lcp_kasai`], also returning the number of character comparisons
/// made (at most `2n`).
pub fn build_lcp_kasai_counted(text: &Text, sa: &SuffixArray) -> (LcpArray, usize) {
    let t = text.as_bytes();
    let n = t.len();
    assert_eq!(n, sa.len(), "suffix array does not belong to this text");
    let mut h = vec![0usize; n];
    let mut matched = 0usize;
    let mut comparisons = 0usize;
    for p in 0..n {
        let r = sa.inv[p] - 1;
        if r == 0 {
            matched = 0;
            continue;
        }
        let q = sa.sa[r - 1] - 1;
        while p + matched < n && q + matched < n {
            comparisons += 1;
            if t[p + matched] != t[q + matched] {
                break;
            }
            matched += 1;
        }
        h[r] = matched;
        matched = matched.saturating_sub(1);
    }
    (LcpArray::from_values(h), comparisons)
}

/// Length of the longest common prefix of the suffixes starting at `j` and
/// `j2`, by direct comparison. For `j == j2` this is the suffix length.
pub fn naive_lcp(text: &Text, j: usize, j2: usize) -> Result<usize> {
    let n = text.len();
    check_range("suffix position", j, 1, n)?;
    check_range("suffix position", j2, 1, n)?;
    let t = text.as_bytes();
    Ok(t[j - 1..]
        .iter()
        .zip(&t[j2 - 1..])
        .take_while(|(a, b)| a == b)
        .count())
}

/// Suffix array by comparison sort of the suffixes themselves.
pub fn naive_suffix_sort(text: &Text) -> SuffixArray {
    let t = text.as_bytes();
    let mut sa: Vec<usize> = (0..t.len()).collect();
    sa.sort_by(|&a, &b| t[a..].cmp(&t[b..]));
    SuffixArray::from_positions(sa.into_iter().map(|p| p + 1).collect())
        .expect("sorting yields a permutation")
}

/// First text position `i > 1` where `H[A⁻¹[i]] >= H[A⁻¹[i-1]] - 1` fails.
pub fn find_decrease_violation(h: &LcpArray, sa: &SuffixArray) -> Option<usize> {
    (2..=sa.len()).find(|&i| h.at(sa.inv_unchecked(i)) + 1 < h.at(sa.inv_unchecked(i - 1)))
}
