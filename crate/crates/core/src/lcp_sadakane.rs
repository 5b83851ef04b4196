//! The `2n + o(n)`-bit LCP encoding.
//!
//! Listed in text order, LCP values drop by at most one per step, so
//! `H[A⁻¹[i]] + i` is non-decreasing. Writing each difference
//! `I[i] = H[A⁻¹[i]] - H[A⁻¹[i-1]] + 1` in unary as `0^I[i] 1` gives a
//! bitvector `S` with exactly `n` ones and, for a sentinel-terminated text,
//! exactly `n` zeros. Then
//!
//! ```text
//! H[i] = rank0(S, select1(S, A[i])) - A[i]      (two queries)
//!      = select1(S, A[i]) - 2 A[i]              (one query)
//! ```

use std::io::{Read, Write};

use crate::bitvec::{BitVector, RankSelect};
use crate::error::{check_range, Error, Result};
use crate::ser;
use crate::space::SpaceReport;
use crate::text_index::{LcpArray, SuffixAccess, SuffixArray};

/// Writes the differential unary code of `H` in text order.
///
/// The value preceding text position 1 is taken as 0.
pub fn encode_differential(h: &LcpArray, sa: &SuffixArray) -> Result<BitVector> {
    let n = sa.len();
    if h.len() != n {
        return Err(Error::Construction(format!(
            "LCP array has {} entries but the suffix array has {n}",
            h.len()
        )));
    }
    let mut out = BitVector::builder();
    let mut prev = 0usize;
    for p in 1..=n {
        let cur = h.at(sa.inv_unchecked(p));
        if cur + 1 < prev {
            return Err(Error::Construction(format!(
                "negative unary difference at text position {p}: H drops from {prev} to {cur}"
            )));
        }
        out.push_zeros(cur + 1 - prev);
        out.push(true);
        prev = cur;
    }
    Ok(out.finish())
}

/// `H` encoded as a bitvector with rank/select support; lookups need `A[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SadakaneLcp {
    s: RankSelect,
    n: usize,
}

impl SadakaneLcp {
    pub fn build(h: &LcpArray, sa: &SuffixArray) -> Result<Self> {
        let bits = encode_differential(h, sa)?;
        Ok(SadakaneLcp {
            s: RankSelect::new(bits),
            n: sa.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The encoded bitvector `S`.
    pub fn bits(&self) -> &BitVector {
        self.s.bits()
    }

    /// `H[i] = rank0(S, select1(S, A[i])) - A[i]`.
    pub fn access_eq1<A: SuffixAccess + ?Sized>(&self, sa: &A, i: usize) -> Result<usize> {
        check_range("lcp index", i, 1, self.n)?;
        let j = sa.sa(i);
        let end = self.s.select1(j)?;
        let zeros = self.s.rank0(end)?;
        zeros.checked_sub(j).ok_or_else(|| corrupt(i))
    }

    /// `H[i] = select1(S, A[i]) - 2 A[i]`.
    pub fn access_eq2<A: SuffixAccess + ?Sized>(&self, sa: &A, i: usize) -> Result<usize> {
        check_range("lcp index", i, 1, self.n)?;
        let j = sa.sa(i);
        let end = self.s.select1(j)?;
        end.checked_sub(2 * j).ok_or_else(|| corrupt(i))
    }

    /// Default lookup path, [`Self::access_eq2`].
    pub fn get<A: SuffixAccess + ?Sized>(&self, sa: &A, i: usize) -> Result<usize> {
        self.access_eq2(sa, i)
    }

    /// Scans `S` and returns `H[A⁻¹[p]]` for `p = 1..=n`.
    pub fn decode_text_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n);
        // zeros before the p-th one = H[A⁻¹[p]] + p
        let mut zeros = 0usize;
        for bit in self.s.bits().iter() {
            if bit {
                let p = out.len() + 1;
                out.push(zeros.saturating_sub(p));
            } else {
                zeros += 1;
            }
        }
        out
    }

    pub fn space_report(&self) -> SpaceReport {
        SpaceReport::new(self.n)
            .with("S", self.s.bits().size_in_bits())
            .with("rank_select", self.s.support().size_in_bits())
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        ser::write_u64(w, self.n as u64)?;
        self.s.bits().write_to(w)
    }

    /// Loads the payload and rebuilds the rank/select support.
    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let n = ser::read_usize(r)?;
        let bits = BitVector::read_from(r)?;
        if bits.len() < n {
            return Err(Error::Format(format!(
                "encoding has {} bits, fewer than n = {n}",
                bits.len()
            )));
        }
        Ok(SadakaneLcp {
            s: RankSelect::new(bits),
            n,
        })
    }
}

fn corrupt(i: usize) -> Error {
    Error::Format(format!("encoding yields a negative LCP value at index {i}"))
}
