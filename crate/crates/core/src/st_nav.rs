//! Range-minimum and previous/next-smaller-value queries over any LCP
//! representation, and the LCP-interval parent step built from them.
//!
//! Queries use a square-root decomposition: the minimum of every block of
//! `⌈√n⌉` entries is precomputed and the rest is scanned through the
//! accessor, so a query touches `O(√n)` LCP values.

use crate::error::{check_range, Result};
use crate::lcp_sadakane::SadakaneLcp;
use crate::lcp_wee::WeeLcp;
use crate::text_index::{LcpArray, SuffixAccess, Text};

/// Read access to `H[1..=n]`.
pub trait LcpAccessor {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `H[i]`; panics when `i` is out of range or the backing data is corrupt.
    fn lcp(&self, i: usize) -> usize;
}

impl LcpAccessor for LcpArray {
    fn len(&self) -> usize {
        LcpArray::len(self)
    }

    fn lcp(&self, i: usize) -> usize {
        self.at(i)
    }
}

pub struct SadakaneAccessor<'a, A: ?Sized> {
    pub lcp: &'a SadakaneLcp,
    pub sa: &'a A,
}

impl<A: SuffixAccess + ?Sized> LcpAccessor for SadakaneAccessor<'_, A> {
    fn len(&self) -> usize {
        self.lcp.len()
    }

    fn lcp(&self, i: usize) -> usize {
        self.lcp
            .get(self.sa, i)
            .expect("consistent 2n-bit encoding")
    }
}

pub struct WeeAccessor<'a, A: ?Sized> {
    pub lcp: &'a WeeLcp,
    pub sa: &'a A,
    pub text: &'a Text,
}

impl<A: SuffixAccess + ?Sized> LcpAccessor for WeeAccessor<'_, A> {
    fn len(&self) -> usize {
        self.lcp.len()
    }

    fn lcp(&self, i: usize) -> usize {
        self.lcp
            .get(self.sa, self.text, i)
            .expect("consistent sampled LCP")
    }
}

/// A suffix-tree node as a rank interval `[left, right]` of the suffix array.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalNode {
    pub left: usize,
    pub right: usize,
    pub depth: usize,
}

/// RMQ/PSV/NSV over an LCP accessor.
pub struct NavIndex<L> {
    acc: L,
    block: usize,
    // (value, leftmost index) of each block's minimum
    block_min: Vec<(usize, usize)>,
}

impl<L: LcpAccessor> NavIndex<L> {
    pub fn new(acc: L) -> Self {
        let n = acc.len();
        let block = ((n as f64).sqrt().ceil() as usize).max(1);
        let block_min = (0..n.div_ceil(block))
            .map(|b| {
                let lo = b * block + 1;
                let hi = ((b + 1) * block).min(n);
                (lo..=hi)
                    .map(|i| (acc.lcp(i), i))
                    .min()
                    .expect("blocks are non-empty")
            })
            .collect();
        NavIndex {
            acc,
            block,
            block_min,
        }
    }

    pub fn accessor(&self) -> &L {
        &self.acc
    }

    pub fn len(&self) -> usize {
        self.acc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.acc.is_empty()
    }

    fn block_of(&self, i: usize) -> usize {
        (i - 1) / self.block
    }

    fn block_range(&self, b: usize) -> (usize, usize) {
        (b * self.block + 1, ((b + 1) * self.block).min(self.len()))
    }

    /// Leftmost index of the minimum of `H[l..=r]`, `2 <= l <= r <= n`.
    pub fn rmq(&self, l: usize, r: usize) -> Result<usize> {
        let n = self.len();
        check_range("rmq left end", l, 2, n)?;
        check_range("rmq right end", r, l, n)?;
        let scan = |lo: usize, hi: usize, best: &mut (usize, usize)| {
            for i in lo..=hi {
                let v = self.acc.lcp(i);
                if v < best.0 {
                    *best = (v, i);
                }
            }
        };
        let mut best = (usize::MAX, 0);
        let (bl, br) = (self.block_of(l), self.block_of(r));
        if bl == br {
            scan(l, r, &mut best);
        } else {
            scan(l, self.block_range(bl).1, &mut best);
            for &m in &self.block_min[bl + 1..br] {
                if m.0 < best.0 {
                    best = m;
                }
            }
            scan(self.block_range(br).0, r, &mut best);
        }
        Ok(best.1)
    }

    /// Largest `j < i` with `H[j] < H[i]`.
    pub fn psv(&self, i: usize) -> Result<Option<usize>> {
        check_range("psv index", i, 2, self.len())?;
        Ok(self.prev_below(i, self.acc.lcp(i)))
    }

    /// Smallest `j > i` with `H[j] < H[i]`.
    pub fn nsv(&self, i: usize) -> Result<Option<usize>> {
        check_range("nsv index", i, 2, self.len())?;
        Ok(self.next_below(i, self.acc.lcp(i)))
    }

    fn prev_below(&self, i: usize, v: usize) -> Option<usize> {
        let b = self.block_of(i);
        let lo = self.block_range(b).0;
        if let Some(j) = (lo..i).rev().find(|&j| self.acc.lcp(j) < v) {
            return Some(j);
        }
        let c = (0..b).rev().find(|&c| self.block_min[c].0 < v)?;
        let (lo, hi) = self.block_range(c);
        (lo..=hi).rev().find(|&j| self.acc.lcp(j) < v)
    }

    fn next_below(&self, i: usize, v: usize) -> Option<usize> {
        let b = self.block_of(i);
        let hi = self.block_range(b).1;
        if let Some(j) = (i + 1..=hi).find(|&j| self.acc.lcp(j) < v) {
            return Some(j);
        }
        let c = (b + 1..self.block_min.len()).find(|&c| self.block_min[c].0 < v)?;
        let (lo, hi) = self.block_range(c);
        (lo..=hi).find(|&j| self.acc.lcp(j) < v)
    }

    /// The whole suffix array, `[1, n]` at depth 0.
    pub fn root(&self) -> IntervalNode {
        IntervalNode {
            left: 1,
            right: self.len(),
            depth: 0,
        }
    }

    /// The node `[left, right]`, `left < right`, with depth `min H[left+1..=right]`.
    pub fn interval(&self, left: usize, right: usize) -> Result<IntervalNode> {
        check_range("interval left end", left, 1, self.len().saturating_sub(1))?;
        check_range("interval right end", right, left + 1, self.len())?;
        let depth = self.acc.lcp(self.rmq(left + 1, right)?);
        Ok(IntervalNode { left, right, depth })
    }

    /// The enclosing LCP interval of `node`, or `None` for the root.
    ///
    /// Its depth is the larger of the two LCP values at the node's borders;
    /// each side is then widened past every entry not smaller than that depth.
    pub fn parent_interval(&self, node: IntervalNode) -> Option<IntervalNode> {
        let n = self.len();
        let (l, r) = (node.left, node.right);
        let left_border = (l > 1).then(|| self.acc.lcp(l));
        let right_border = (r < n).then(|| self.acc.lcp(r + 1));
        let depth = match (left_border, right_border) {
            (None, None) => return None,
            (a, b) => a.max(b).expect("at least one border"),
        };
        let left = match left_border {
            Some(v) if v == depth => self.prev_below(l, depth).unwrap_or(1),
            _ => l,
        };
        let right = match right_border {
            Some(v) if v == depth => self.next_below(r + 1, depth).map_or(n, |k| k - 1),
            _ => r,
        };
        Some(IntervalNode { left, right, depth })
    }
}
