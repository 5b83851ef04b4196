//! Building, querying, verifying and profiling LCP index bundles.

pub mod bundle;
pub mod commands;

pub use bundle::{locate_section, Bundle, Repr};
pub use commands::{
    build_bundle, cmd_bench, cmd_build, cmd_lcp, cmd_space, cmd_verify, verify_bundle,
    BenchOptions, BuildOptions, LcpQuery, Mismatch,
};
