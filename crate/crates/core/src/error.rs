use std::io;

use thiserror::Error;

/// Errors produced while building, querying or loading an index.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} {value} out of range {lo}..={hi}")]
    Range {
        what: &'static str,
        value: usize,
        lo: usize,
        hi: usize,
    },

    #[error("input contains a 0x00 byte at offset {offset}; 0x00 is reserved for the sentinel")]
    EmbeddedSentinel { offset: usize },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("invalid parameters: {0}")]
    Config(String),

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &'static str, value: usize, lo: usize, hi: usize) -> Result<()> {
    if value < lo || value > hi {
        Err(Error::Range {
            what,
            value,
            lo,
            hi,
        })
    } else {
        Ok(())
    }
}
