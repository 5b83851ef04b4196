//! On-disk index bundle.
//!
//! Layout: the magic `WEELCP01`, then sections of a 4-byte tag, a
//! little-endian `u64` payload length and the payload. `TEXT` (raw bytes, no
//! sentinel) and `SARR` are mandatory; `PLCP`, `SADK` and `WEEL` hold the
//! LCP representations, at least one of which must be present.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use weelcp::{LcpArray, SadakaneLcp, SuffixArray, Text, WeeLcp};

pub const MAGIC: &[u8; 8] = b"WEELCP01";

pub const TAG_TEXT: [u8; 4] = *b"TEXT";
pub const TAG_SA: [u8; 4] = *b"SARR";
pub const TAG_PLAIN: [u8; 4] = *b"PLCP";
pub const TAG_SADAKANE: [u8; 4] = *b"SADK";
pub const TAG_WEE: [u8; 4] = *b"WEEL";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Repr {
    Plain,
    Sadakane,
    Wee,
}

impl Repr {
    pub const ALL: [Repr; 3] = [Repr::Plain, Repr::Sadakane, Repr::Wee];

    pub fn name(self) -> &'static str {
        match self {
            Repr::Plain => "plain",
            Repr::Sadakane => "sadakane",
            Repr::Wee => "wee",
        }
    }

    fn tag(self) -> [u8; 4] {
        match self {
            Repr::Plain => TAG_PLAIN,
            Repr::Sadakane => TAG_SADAKANE,
            Repr::Wee => TAG_WEE,
        }
    }
}

impl fmt::Display for Repr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Repr {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Repr::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| {
                format!("unknown representation {s:?} (expected plain, sadakane or wee)")
            })
    }
}

/// A text with its suffix array and one or more LCP representations.
#[derive(Debug)]
pub struct Bundle {
    pub text: Text,
    pub sa: SuffixArray,
    pub plain: Option<LcpArray>,
    pub sadakane: Option<SadakaneLcp>,
    pub wee: Option<WeeLcp>,
}

impl Bundle {
    pub fn reprs(&self) -> Vec<Repr> {
        Repr::ALL.into_iter().filter(|&r| self.has(r)).collect()
    }

    pub fn has(&self, r: Repr) -> bool {
        match r {
            Repr::Plain => self.plain.is_some(),
            Repr::Sadakane => self.sadakane.is_some(),
            Repr::Wee => self.wee.is_some(),
        }
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        write_section(w, TAG_TEXT, self.text.raw())?;
        let mut buf = Vec::new();
        self.sa.write_to(&mut buf)?;
        write_section(w, TAG_SA, &buf)?;
        for r in self.reprs() {
            buf.clear();
            match r {
                Repr::Plain => self.plain.as_ref().map(|x| x.write_to(&mut buf)),
                Repr::Sadakane => self.sadakane.as_ref().map(|x| x.write_to(&mut buf)),
                Repr::Wee => self.wee.as_ref().map(|x| x.write_to(&mut buf)),
            }
            .transpose()?;
            write_section(w, r.tag(), &buf)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).context("reading bundle header")?;
        ensure!(
            &magic == MAGIC,
            "not an index bundle (magic {:?})",
            String::from_utf8_lossy(&magic)
        );

        let (mut text, mut sa, mut plain, mut sadakane, mut wee) = (None, None, None, None, None);
        while let Some((tag, payload)) = read_section(r)? {
            let name = String::from_utf8_lossy(&tag).into_owned();
            let mut p = payload.as_slice();
            let dup = match tag {
                TAG_TEXT => text.replace(Text::load(&payload)?).is_some(),
                TAG_SA => sa.replace(SuffixArray::read_from(&mut p)?).is_some(),
                TAG_PLAIN => plain.replace(LcpArray::read_from(&mut p)?).is_some(),
                TAG_SADAKANE => sadakane.replace(SadakaneLcp::read_from(&mut p)?).is_some(),
                TAG_WEE => wee.replace(WeeLcp::read_from(&mut p)?).is_some(),
                _ => bail!("unknown section {name:?}"),
            };
            ensure!(!dup, "duplicate section {name:?}");
            ensure!(
                p.is_empty() || tag == TAG_TEXT,
                "section {name:?} has {} trailing bytes",
                p.len()
            );
        }
        let bundle = Bundle {
            text: text.context("bundle has no TEXT section")?,
            sa: sa.context("bundle has no SARR section")?,
            plain,
            sadakane,
            wee,
        };
        bundle.check_lengths()?;
        Ok(bundle)
    }

    fn check_lengths(&self) -> Result<()> {
        let n = self.text.len();
        ensure!(
            self.sa.len() == n,
            "suffix array has {} entries, text has {n}",
            self.sa.len()
        );
        ensure!(
            !self.reprs().is_empty(),
            "bundle holds no LCP representation"
        );
        let lens = [
            self.plain.as_ref().map(|x| x.len()),
            self.sadakane.as_ref().map(|x| x.len()),
            self.wee.as_ref().map(|x| x.len()),
        ];
        for (r, len) in Repr::ALL.into_iter().zip(lens) {
            if let Some(len) = len {
                ensure!(
                    len == n,
                    "{r} representation has length {len}, text has {n}"
                );
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(f);
        self.write_to(&mut w)?;
        w.flush()
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        Self::read_from(&mut BufReader::new(f))
            .with_context(|| format!("reading {}", path.display()))
    }
}

fn write_section<W: Write>(w: &mut W, tag: [u8; 4], payload: &[u8]) -> Result<()> {
    w.write_all(&tag)?;
    w.write_all(&(payload.len() as u64).to_le_bytes())?;
    w.write_all(payload)?;
    Ok(())
}

fn read_section<R: Read>(r: &mut R) -> Result<Option<([u8; 4], Vec<u8>)>> {
    let mut tag = [0u8; 4];
    match r.read(&mut tag[..1])? {
        0 => return Ok(None),
        _ => r
            .read_exact(&mut tag[1..])
            .context("truncated section tag")?,
    }
    let mut len = [0u8; 8];
    r.read_exact(&mut len).context("truncated section length")?;
    let len = u64::from_le_bytes(len);
    let mut payload = Vec::new();
    let got = r.take(len).read_to_end(&mut payload)?;
    ensure!(
        got as u64 == len,
        "section {:?} truncated: {got} of {len} bytes",
        String::from_utf8_lossy(&tag)
    );
    Ok(Some((tag, payload)))
}

/// Byte offset and length of the payload of the first section tagged `tag`
/// in a serialized bundle.
pub fn locate_section(bytes: &[u8], tag: [u8; 4]) -> Option<(usize, usize)> {
    let mut at = MAGIC.len();
    while at + 12 <= bytes.len() {
        let len = u64::from_le_bytes(bytes[at + 4..at + 12].try_into().ok()?) as usize;
        if bytes[at..at + 4] == tag {
            return Some((at + 12, len));
        }
        at = at.checked_add(12 + len)?;
    }
    None
}
