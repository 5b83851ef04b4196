//! LCP access in `o(n)` bits on top of the text and the suffix array.
//!
//! The structure answers `select1(S, j)` over the differential unary code `S`
//! of [`crate::lcp_sadakane`] without storing `S`:
//!
//! * `N` samples every `κ`-th answer, cutting the argument range into blocks.
//!   A block spanning more than `κ²` positions of `S` is *long* and all of its
//!   answers are kept verbatim in `P`.
//! * Short blocks are cut into miniblocks of `λ` arguments whose boundaries are
//!   sampled in `N'`, relative to the block start. A miniblock spanning more
//!   than `s` positions is long and keeps all of its answers in `P'`.
//! * In a short miniblock the sample at its left boundary, `a`, is returned
//!   as an approximation: the true answer lies in `a..a + s`.
//!
//! An approximate answer gives a lower bound `m = max(a - 2j, 0)` on the LCP
//! value; the rest is found by comparing the two suffixes character by
//! character from offset `m`, which stops after at most `s` comparisons.
//!
//! Miniblocks are laid out from the start of each block, so the last
//! miniblock of a block may hold fewer than `λ` arguments when `λ ∤ κ`.

use std::io::{Read, Write};

use crate::bitvec::{BitVector, PackedInts, RankSelect};
use crate::error::{check_range, Error, Result};
use crate::lcp_sadakane::encode_differential;
use crate::ser;
use crate::space::SpaceReport;
use crate::text_index::{LcpArray, SuffixAccess, SuffixArray, Text};

const MAGIC: &[u8; 8] = b"WEEIDX01";

/// Sampling parameters: `kappa` ones per block, `lambda` ones per miniblock,
/// and `s`, the longest span (in bits of `S`) a miniblock may have while still
/// being answered approximately.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeeParams {
    pub kappa: usize,
    pub lambda: usize,
    pub s: usize,
    pub delta: f64,
}

impl WeeParams {
    pub const DEFAULT_DELTA: f64 = 0.5;

    /// Defaults for a text of length `n`:
    /// `κ = max(⌊log² n⌋, 4)`, `λ = min(max(⌊log² κ⌋, 2), κ)` and
    /// `s = λ · max(⌈log^δ n⌉, 1)`.
    ///
    /// A miniblock of `λ` ones spans at least `λ` bits (about `2λ` on typical
    /// text), so a threshold below that would classify every miniblock as
    /// long; `s` is therefore measured in units of `λ`.
    pub fn for_len(n: usize, delta: f64) -> Result<Self> {
        Self::with_overrides(n, delta, None, None, None)
    }

    /// As [`Self::for_len`], with any of `κ`, `λ`, `s` fixed by the caller.
    /// Derived values follow the overridden ones.
    pub fn with_overrides(
        n: usize,
        delta: f64,
        kappa: Option<usize>,
        lambda: Option<usize>,
        s: Option<usize>,
    ) -> Result<Self> {
        check_delta(delta)?;
        let log_n = (n.max(1) as f64).log2();
        let kappa = kappa.unwrap_or_else(|| ((log_n * log_n).floor() as usize).max(4));
        let lambda = lambda.unwrap_or_else(|| {
            let log_k = (kappa.max(1) as f64).log2();
            ((log_k * log_k).floor() as usize).max(2).min(kappa.max(1))
        });
        let s = s.unwrap_or_else(|| lambda.max(1) * (log_n.powf(delta).ceil() as usize).max(1));
        let p = WeeParams {
            kappa,
            lambda,
            s,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_delta(self.delta)?;
        if self.lambda == 0 || self.kappa < self.lambda {
            return Err(Error::Config(format!(
                "need kappa >= lambda >= 1, got kappa = {}, lambda = {}",
                self.kappa, self.lambda
            )));
        }
        if self.s == 0 {
            return Err(Error::Config("s must be at least 1".into()));
        }
        if self.kappa > 1 << 31 {
            return Err(Error::Config(format!(
                "kappa = {} is too large",
                self.kappa
            )));
        }
        Ok(())
    }

    /// Miniblocks per block, `⌈κ/λ⌉`.
    fn minis_per_block(&self) -> usize {
        self.kappa.div_ceil(self.lambda)
    }

    /// Bits per relative entry in `N'` and `P'`, enough for `0..κ²`.
    fn relative_width(&self) -> usize {
        PackedInts::width_for((self.kappa * self.kappa - 1) as u64)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Config(format!(
            "delta must lie in (0, 1], got {delta}"
        )));
    }
    Ok(())
}

/// A lower bound on `select1(S, j)`: `value <= true <= value + slack`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApproxSelect {
    pub value: usize,
    pub exact: bool,
    pub slack: usize,
}

impl ApproxSelect {
    fn exact(value: usize) -> Self {
        ApproxSelect {
            value,
            exact: true,
            slack: 0,
        }
    }
}

/// Result of one LCP lookup together with the work spent verifying it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LcpLookup {
    pub lcp: usize,
    /// Character comparisons (bytewise) or word comparisons (packed); zero
    /// when the select answer was exact.
    pub comparisons: usize,
}

/// Where a stored select answer lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    N,
    P,
    NPrime,
    PPrime,
}

/// The sampled-select LCP structure.
#[derive(Clone, Debug, PartialEq)]
pub struct WeeLcp {
    params: WeeParams,
    n: usize,
    s_len: usize,
    // N[b] = select1(S, (b+1)κ) for b < ⌊n/κ⌋
    block_samples: Vec<u64>,
    long_blocks: RankSelect,
    // P: κ-1 interior answers per long block, absolute
    long_block_answers: Vec<u64>,
    // N': ⌈κ/λ⌉-1 interior boundaries per short block, stored as (pos - start - 1)
    mini_samples: PackedInts,
    // one flag per miniblock slot b·⌈κ/λ⌉ + t
    long_minis: RankSelect,
    // P': λ-1 interior answers per long miniblock, stored as (pos - start - 1)
    long_mini_answers: PackedInts,
}

impl WeeLcp {
    /// Builds the tables from a transient copy of `S`, which is dropped.
    pub fn build(h: &LcpArray, sa: &SuffixArray, params: WeeParams) -> Result<Self> {
        params.validate()?;
        let s_ref = encode_differential(h, sa)?;
        Self::from_reference(&s_ref, params)
    }

    /// Builds the tables for an explicit bitvector with `n` ones.
    pub fn from_reference(s_ref: &BitVector, params: WeeParams) -> Result<Self> {
        params.validate()?;
        let s_len = s_ref.len();
        let ones: Vec<usize> = (0..s_len)
            .filter(|&i| s_ref.bit(i))
            .map(|i| i + 1)
            .collect();
        let n = ones.len();
        let (kappa, lambda) = (params.kappa, params.lambda);
        let minis = params.minis_per_block();
        let sel = |x: usize| -> usize {
            match x {
                0 => 0,
                x if x > n => s_len + 1,
                x => ones[x - 1],
            }
        };

        let n_blocks = n.div_ceil(kappa);
        let mut block_samples = Vec::with_capacity(n / kappa);
        let mut long_block_flags = BitVector::builder();
        let mut long_block_answers = Vec::new();
        let mut mini_samples = PackedInts::new(params.relative_width());
        let mut long_mini_flags = BitVector::builder();
        let mut long_mini_answers = PackedInts::new(params.relative_width());

        for b in 0..n_blocks {
            let first = b * kappa;
            let last = first + kappa;
            let start = sel(first);
            let end = sel(last);
            if last <= n {
                block_samples.push(end as u64);
            }
            let long = end - start > kappa * kappa;
            long_block_flags.push(long);
            if long {
                long_block_answers.extend((first + 1..last.min(n + 1)).map(|x| sel(x) as u64));
                long_mini_flags.push_zeros(minis);
                continue;
            }
            for t in 1..minis {
                let x = first + t * lambda;
                if x <= n {
                    mini_samples.push((sel(x) - start - 1) as u64);
                }
            }
            for t in 0..minis {
                let q = first + t * lambda;
                let q_end = (q + lambda).min(last);
                let long_mini = q < n && sel(q_end) - sel(q) > params.s;
                long_mini_flags.push(long_mini);
                if long_mini {
                    for r in 1..lambda {
                        let x = q + r;
                        let v = if x < q_end && x <= n {
                            sel(x) - start - 1
                        } else {
                            0
                        };
                        long_mini_answers.push(v as u64);
                    }
                }
            }
        }

        Ok(WeeLcp {
            params,
            n,
            s_len,
            block_samples,
            long_blocks: RankSelect::new(long_block_flags.finish()),
            long_block_answers,
            mini_samples,
            long_minis: RankSelect::new(long_mini_flags.finish()),
            long_mini_answers,
        })
    }

    pub fn params(&self) -> WeeParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `|S|`, the length of the bitvector that is not stored.
    pub fn encoded_len(&self) -> usize {
        self.s_len
    }

    pub fn long_block_count(&self) -> usize {
        self.long_blocks.count_ones()
    }

    pub fn long_miniblock_count(&self) -> usize {
        self.long_minis.count_ones()
    }

    fn block_start(&self, b: usize) -> usize {
        if b == 0 {
            0
        } else {
            self.block_samples[b - 1] as usize
        }
    }

    /// `select1(S, j)` exactly, or a lower bound within `s` of it.
    pub fn approx_select(&self, j: usize) -> Result<ApproxSelect> {
        check_range("select argument", j, 1, self.n)?;
        let WeeParams {
            kappa, lambda, s, ..
        } = self.params;
        if j.is_multiple_of(kappa) {
            return Ok(ApproxSelect::exact(
                self.block_samples[j / kappa - 1] as usize,
            ));
        }
        let b = j / kappa;
        let first = b * kappa;
        if self.long_blocks.bits().bit(b) {
            let off = self.long_blocks.rank1_unchecked(b) * (kappa - 1) + (j - first - 1);
            return Ok(ApproxSelect::exact(self.long_block_answers[off] as usize));
        }

        let start = self.block_start(b);
        let minis = self.params.minis_per_block();
        let short_idx = b - self.long_blocks.rank1_unchecked(b);
        let boundary = |t: usize| -> usize {
            start + self.mini_samples.get(short_idx * (minis - 1) + t - 1) as usize + 1
        };

        let t = (j - first) / lambda;
        let q = first + t * lambda;
        let a = if t == 0 { start } else { boundary(t) };
        if j == q {
            return Ok(ApproxSelect::exact(a));
        }
        let q_end = (q + lambda).min(first + kappa);
        let b_pos = if q_end > self.n {
            self.s_len + 1
        } else if q_end == first + kappa {
            self.block_samples[b] as usize
        } else {
            boundary(t + 1)
        };

        if b_pos - a > s {
            let slot = b * minis + t;
            debug_assert!(self.long_minis.bits().bit(slot));
            let off = self.long_minis.rank1_unchecked(slot) * (lambda - 1) + (j - q - 1);
            let rel = self.long_mini_answers.get(off) as usize;
            return Ok(ApproxSelect::exact(start + rel + 1));
        }
        Ok(ApproxSelect {
            value: a,
            exact: false,
            slack: b_pos - a - 1,
        })
    }

    /// `H[i]`, comparing suffixes one byte at a time where needed.
    pub fn lcp_access<A: SuffixAccess + ?Sized>(
        &self,
        sa: &A,
        text: &Text,
        i: usize,
    ) -> Result<LcpLookup> {
        self.access_with(sa, text, i, compare_bytes)
    }

    /// `H[i]`, comparing suffixes eight bytes at a time where needed.
    /// `comparisons` then counts word comparisons.
    pub fn lcp_access_packed<A: SuffixAccess + ?Sized>(
        &self,
        sa: &A,
        text: &Text,
        i: usize,
    ) -> Result<LcpLookup> {
        self.access_with(sa, text, i, compare_words)
    }

    /// `H[i]` without instrumentation.
    pub fn get<A: SuffixAccess + ?Sized>(&self, sa: &A, text: &Text, i: usize) -> Result<usize> {
        Ok(self.lcp_access_packed(sa, text, i)?.lcp)
    }

    fn access_with<A, F>(&self, sa: &A, text: &Text, i: usize, compare: F) -> Result<LcpLookup>
    where
        A: SuffixAccess + ?Sized,
        F: Fn(&Text, usize, usize) -> (usize, usize),
    {
        check_range("lcp index", i, 1, self.n)?;
        if text.len() != self.n {
            return Err(Error::Format(format!(
                "text has length {} but the index was built for {}",
                text.len(),
                self.n
            )));
        }
        if i == 1 {
            return Ok(LcpLookup {
                lcp: 0,
                comparisons: 0,
            });
        }
        let j = sa.sa(i);
        let r = self.approx_select(j)?;
        if r.exact {
            let lcp = r.value.checked_sub(2 * j).ok_or_else(|| {
                Error::Format(format!(
                    "select answer {} below 2·{j} at index {i}",
                    r.value
                ))
            })?;
            return Ok(LcpLookup {
                lcp,
                comparisons: 0,
            });
        }
        let j_prev = sa.sa(i - 1);
        let m = r.value.saturating_sub(2 * j);
        if m > self.n + 1 - j.max(j_prev) {
            return Err(Error::Format(format!(
                "lower bound {m} exceeds the suffixes at index {i}"
            )));
        }
        let (matched, comparisons) = compare(text, j + m, j_prev + m);
        Ok(LcpLookup {
            lcp: m + matched,
            comparisons,
        })
    }

    /// Every select answer held in the tables as `(argument, position, table)`,
    /// in increasing argument order.
    pub fn stored_answers(&self) -> Vec<(usize, usize, Table)> {
        let WeeParams { kappa, lambda, .. } = self.params;
        let minis = self.params.minis_per_block();
        let mut out = Vec::new();
        let (mut p_off, mut np_off, mut pp_off) = (0, 0, 0);
        for b in 0..self.n.div_ceil(kappa) {
            let first = b * kappa;
            let last = first + kappa;
            let start = self.block_start(b);
            if self.long_blocks.bits().bit(b) {
                for x in first + 1..last.min(self.n + 1) {
                    out.push((x, self.long_block_answers[p_off] as usize, Table::P));
                    p_off += 1;
                }
            } else {
                let mut boundaries = Vec::new();
                for t in 1..minis {
                    let x = first + t * lambda;
                    if x <= self.n {
                        boundaries.push((x, start + self.mini_samples.get(np_off) as usize + 1));
                        np_off += 1;
                    }
                }
                for t in 0..minis {
                    if self.long_minis.bits().bit(b * minis + t) {
                        let q = first + t * lambda;
                        let q_end = (q + lambda).min(last);
                        for r in 1..lambda {
                            let x = q + r;
                            if x < q_end && x <= self.n {
                                let rel = self.long_mini_answers.get(pp_off) as usize;
                                out.push((x, start + rel + 1, Table::PPrime));
                            }
                            pp_off += 1;
                        }
                    }
                }
                out.extend(boundaries.into_iter().map(|(x, p)| (x, p, Table::NPrime)));
            }
            if last <= self.n {
                out.push((last, self.block_samples[b] as usize, Table::N));
            }
        }
        out.sort_unstable_by_key(|&(x, _, _)| x);
        out
    }

    pub fn space_report(&self) -> SpaceReport {
        SpaceReport::new(self.n)
            .with("header", 6 * 64)
            .with("N", self.block_samples.len() * 64)
            .with("P", self.long_block_answers.len() * 64)
            .with("N'", self.mini_samples.size_in_bits())
            .with("P'", self.long_mini_answers.size_in_bits())
            .with(
                "long_block_dir",
                self.long_blocks.len() + self.long_blocks.support().size_in_bits(),
            )
            .with(
                "long_mini_dir",
                self.long_minis.len() + self.long_minis.support().size_in_bits(),
            )
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        let p = self.params;
        for v in [
            p.kappa as u64,
            p.lambda as u64,
            p.s as u64,
            p.delta.to_bits(),
        ] {
            ser::write_u64(w, v)?;
        }
        ser::write_u64(w, self.n as u64)?;
        ser::write_u64(w, self.s_len as u64)?;
        ser::write_u64(w, self.block_samples.len() as u64)?;
        ser::write_words(w, &self.block_samples)?;
        self.long_blocks.bits().write_to(w)?;
        ser::write_u64(w, self.long_block_answers.len() as u64)?;
        ser::write_words(w, &self.long_block_answers)?;
        self.mini_samples.write_to(w)?;
        self.long_minis.bits().write_to(w)?;
        self.long_mini_answers.write_to(w)
    }

    /// Loads and validates table shapes and the monotonicity of every stored
    /// answer.
    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        ser::expect_magic(r, MAGIC)?;
        let params = WeeParams {
            kappa: ser::read_usize(r)?,
            lambda: ser::read_usize(r)?,
            s: ser::read_usize(r)?,
            delta: f64::from_bits(ser::read_u64(r)?),
        };
        params.validate()?;
        let n = ser::read_usize(r)?;
        let s_len = ser::read_usize(r)?;
        let count = ser::read_usize(r)?;
        let block_samples = ser::read_words(r, count)?;
        let long_blocks = RankSelect::new(BitVector::read_from(r)?);
        let count = ser::read_usize(r)?;
        let long_block_answers = ser::read_words(r, count)?;
        let mini_samples = PackedInts::read_from(r)?;
        let long_minis = RankSelect::new(BitVector::read_from(r)?);
        let long_mini_answers = PackedInts::read_from(r)?;

        let w = WeeLcp {
            params,
            n,
            s_len,
            block_samples,
            long_blocks,
            long_block_answers,
            mini_samples,
            long_minis,
            long_mini_answers,
        };
        w.validate()?;
        Ok(w)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Format(msg));
        let WeeParams { kappa, lambda, .. } = self.params;
        let n_blocks = self.n.div_ceil(kappa);
        let minis = self.params.minis_per_block();
        if self.block_samples.len() != self.n / kappa {
            return bad(format!(
                "N has {} entries, expected {}",
                self.block_samples.len(),
                self.n / kappa
            ));
        }
        if self.long_blocks.len() != n_blocks || self.long_minis.len() != n_blocks * minis {
            return bad("directory lengths do not match the block layout".into());
        }
        let width = self.params.relative_width();
        if self.mini_samples.width() != width || self.long_mini_answers.width() != width {
            return bad("relative table width does not match kappa".into());
        }
        let (mut p_len, mut np_len) = (0, 0);
        for b in 0..n_blocks {
            let first = b * kappa;
            let last = (first + kappa).min(self.n + 1);
            if self.long_blocks.bits().bit(b) {
                p_len += last - first - 1;
                if (0..minis).any(|t| self.long_minis.bits().bit(b * minis + t)) {
                    return bad(format!("long block {b} has long miniblocks"));
                }
            } else {
                np_len += (1..minis).filter(|t| first + t * lambda <= self.n).count();
            }
        }
        if self.long_block_answers.len() != p_len {
            return bad(format!(
                "P has {} entries, expected {p_len}",
                self.long_block_answers.len()
            ));
        }
        if self.mini_samples.len() != np_len {
            return bad(format!(
                "N' has {} entries, expected {np_len}",
                self.mini_samples.len()
            ));
        }
        if self.long_mini_answers.len() != self.long_minis.count_ones() * (lambda - 1) {
            return bad("P' size does not match the long miniblock directory".into());
        }
        let mut prev = 0usize;
        for (x, pos, table) in self.stored_answers() {
            if pos <= prev || pos > self.s_len || pos < 2 * x {
                return bad(format!(
                    "stored answer {pos} for argument {x} in table {table:?} breaks monotonicity"
                ));
            }
            prev = pos;
        }
        Ok(())
    }
}

/// Byte-at-a-time suffix comparison from `T[p]` and `T[q]`: returns
/// `(matched, comparisons)`.
fn compare_bytes(text: &Text, p: usize, q: usize) -> (usize, usize) {
    let mut matched = 0;
    loop {
        if text.byte(p + matched) != text.byte(q + matched) {
            return (matched, matched + 1);
        }
        matched += 1;
    }
}

/// Eight-bytes-at-a-time comparison; the first differing byte of the first
/// differing word is located from the XOR's trailing zeros.
fn compare_words(text: &Text, p: usize, q: usize) -> (usize, usize) {
    let mut matched = 0;
    let mut ops = 0;
    loop {
        ops += 1;
        let diff = text.word_at(p + matched) ^ text.word_at(q + matched);
        if diff != 0 {
            return (matched + diff.trailing_zeros() as usize / 8, ops);
        }
        matched += 8;
    }
}
