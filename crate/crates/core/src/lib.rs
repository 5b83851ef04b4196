//! Succinct LCP arrays over a plain text and suffix array.
//!
//! Three interchangeable representations of the LCP array `H` are provided:
//!
//! * [`LcpArray`]: one word per entry.
//! * [`SadakaneLcp`]: a `2n`-bit differential unary code with rank/select
//!   support; lookups need the suffix array.
//! * [`WeeLcp`]: `o(n)` bits of sampled select answers; lookups need the
//!   suffix array and the text, and finish with a bounded number of
//!   character comparisons.
//!
//! ```
//! use weelcp::{build_lcp_kasai, build_suffix_array, Text, WeeLcp, WeeParams};
//!
//! let text = Text::load(b"CACAACCAC").unwrap();
//! let sa = build_suffix_array(&text);
//! let h = build_lcp_kasai(&text, &sa);
//! let wee = WeeLcp::build(&h, &sa, WeeParams::for_len(text.len(), 0.5).unwrap()).unwrap();
//! assert_eq!(wee.get(&sa, &text, 9).unwrap(), 3);
//! ```

pub mod bitvec;
pub mod error;
pub mod lcp_sadakane;
pub mod lcp_wee;
mod ser;
pub mod space;
pub mod st_nav;
pub mod text_index;

pub use bitvec::{BitVector, PackedInts, RankSelect, RankSelectSupport, SupportParams};
pub use error::{Error, Result};
pub use lcp_sadakane::{encode_differential, SadakaneLcp};
pub use lcp_wee::{ApproxSelect, LcpLookup, WeeLcp, WeeParams};
pub use space::SpaceReport;
pub use st_nav::{IntervalNode, LcpAccessor, NavIndex, SadakaneAccessor, WeeAccessor};
pub use text_index::{
    build_lcp_kasai, build_lcp_kasai_counted, build_suffix_array, find_decrease_violation,
    naive_lcp, naive_suffix_sort, DelayedAccess, LcpArray, SuffixAccess, SuffixArray, Text,
};
