//! Little-endian primitives shared by the on-disk formats.

use std::io::{Read, Write};

use crate::error::{Error, Result};

pub fn write_u64<W: Write>(w: &mut W, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

pub fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

pub fn read_usize<R: Read>(r: &mut R) -> Result<usize> {
    let v = read_u64(r)?;
    usize::try_from(v).map_err(|_| Error::Format(format!("value {v} does not fit in usize")))
}

pub fn write_words<W: Write>(w: &mut W, words: &[u64]) -> Result<()> {
    for &x in words {
        write_u64(w, x)?;
    }
    Ok(())
}

/// Reads `count` words, refusing absurd counts before allocating.
pub fn read_words<R: Read>(r: &mut R, count: usize) -> Result<Vec<u64>> {
    const MAX_WORDS: usize = 1 << 34;
    if count > MAX_WORDS {
        return Err(Error::Format(format!(
            "word count {count} is implausibly large"
        )));
    }
    let mut out = Vec::with_capacity(count.min(1 << 20));
    for _ in 0..count {
        out.push(read_u64(r)?);
    }
    Ok(out)
}

pub fn expect_magic<R: Read>(r: &mut R, magic: &[u8; 8]) -> Result<()> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    if &buf != magic {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&buf),
            String::from_utf8_lossy(magic)
        )));
    }
    Ok(())
}
