//! Index file container and read-set input.
//!
//! Index file layout (all integers little-endian):
//!
//! | offset | size | field                                   |
//! |--------|------|-----------------------------------------|
//! | 0      | 8    | magic `KATKAIDX`                        |
//! | 8      | 4    | format version (`u32`, currently 1)     |
//! | 12     | 1    | sentinel byte                           |
//! | 13     | 3    | reserved, zero                          |
//! | 16     | 8    | payload length in bytes (`u64`)         |
//! | 24     | ...  | payload: bincode, fixed-width LE ints   |
//!
//! The payload is the serialized [`KatkaIndex`]: tree, both sides (text,
//! parse, tries, grid) and the LCA structure.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use bincode::Options;

use crate::engine::KatkaIndex;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 8] = *b"KATKAIDX";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 24;

fn codec() -> impl Options {
    bincode::DefaultOptions::new()
        .with_fixint_encoding()
        .with_little_endian()
        .reject_trailing_bytes()
}

impl KatkaIndex {
    pub fn save<W: Write>(&self, mut out: W) -> Result<()> {
        let payload = codec().serialize(self)?;
        let mut header = [0u8; HEADER_LEN];
        header[..8].copy_from_slice(&MAGIC);
        header[8..12].copy_from_slice(&FORMAT_VERSION.to_le_bytes());
        header[12] = self.sentinel();
        header[16..24].copy_from_slice(&(payload.len() as u64).to_le_bytes());
        out.write_all(&header)?;
        out.write_all(&payload)?;
        out.flush()?;
        Ok(())
    }

    pub fn load<R: Read>(mut input: R) -> Result<Self> {
        let mut header = [0u8; HEADER_LEN];
        input.read_exact(&mut header).map_err(|e| match e.kind() {
            std::io::ErrorKind::UnexpectedEof => Error::BadMagic,
            _ => Error::Io(e),
        })?;
        if header[..8] != MAGIC {
            return Err(Error::BadMagic);
        }
        let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(version));
        }
        let len = u64::from_le_bytes(header[16..24].try_into().unwrap());
        let mut payload = Vec::new();
        input.take(len).read_to_end(&mut payload)?;
        if payload.len() as u64 != len {
            return Err(Error::Io(std::io::Error::new(
                std::io::ErrorKind::UnexpectedEof,
                "truncated index payload",
            )));
        }
        let index: KatkaIndex = codec().deserialize(&payload)?;
        if index.sentinel() != header[12] {
            return Err(Error::Codec(Box::new(bincode::ErrorKind::Custom(
                "sentinel in header disagrees with payload".into(),
            ))));
        }
        Ok(index)
    }

    pub fn save_to_path(&self, path: impl AsRef<Path>) -> Result<()> {
        self.save(BufWriter::new(File::create(path)?))
    }

    pub fn load_from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::load(BufReader::new(File::open(path)?))
    }
}

/// A sequencing read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadRecord {
    pub id: String,
    pub sequence: Vec<u8>,
}

/// Reads FASTQ (four-line records, qualities ignored) or, when the first
/// record starts with `>`, FASTA. Sequences are upper-cased.
pub fn parse_reads<R: BufRead>(source: R) -> Result<Vec<ReadRecord>> {
    let mut lines = source
        .split(b'\n')
        .enumerate()
        .map(|(i, l)| {
            l.map(|mut l| {
                if l.last() == Some(&b'\r') {
                    l.pop();
                }
                (i + 1, l)
            })
        })
        .peekable();
    let mut reads = Vec::new();
    let err = |line, msg: &str| Error::Fastq {
        line,
        msg: msg.to_owned(),
    };
    let id_of = |header: &[u8]| {
        String::from_utf8_lossy(header)
            .split_whitespace()
            .next()
            .unwrap_or("")
            .to_owned()
    };
    let clean = |s: &[u8]| -> Vec<u8> {
        s.iter()
            .filter(|b| !b.is_ascii_whitespace())
            .map(u8::to_ascii_uppercase)
            .collect()
    };

    while let Some(line) = lines.next() {
        let (lineno, line) = line?;
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        match line[0] {
            b'@' => {
                let id = id_of(&line[1..]);
                let (_, seq) = lines.next().transpose()?.ok_or_else(|| err(lineno, "missing sequence"))?;
                let (plus_no, plus) =
                    lines.next().transpose()?.ok_or_else(|| err(lineno, "missing '+' line"))?;
                if plus.first() != Some(&b'+') {
                    return Err(err(plus_no, "expected '+' separator"));
                }
                let (qual_no, qual) =
                    lines.next().transpose()?.ok_or_else(|| err(lineno, "missing quality line"))?;
                let sequence = clean(&seq);
                if clean(&qual).len() != sequence.len() {
                    return Err(err(qual_no, "quality length differs from sequence length"));
                }
                reads.push(ReadRecord { id, sequence });
            }
            b'>' => {
                let id = id_of(&line[1..]);
                let mut sequence = Vec::new();
                while let Some(Ok((_, next))) = lines.peek() {
                    if next.first() == Some(&b'>') {
                        break;
                    }
                    sequence.extend(clean(next));
                    lines.next();
                }
                reads.push(ReadRecord { id, sequence });
            }
            _ => return Err(err(lineno, "expected a '@' or '>' record header")),
        }
    }
    Ok(reads)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fastq() {
        let src = "@r1 desc\nTAGaca\n+\nIIIIII\n\n@r2\nGG\n+r2\n##\n";
        let reads = parse_reads(src.as_bytes()).unwrap();
        assert_eq!(reads.len(), 2);
        assert_eq!(reads[0].id, "r1");
        assert_eq!(reads[0].sequence, b"TAGACA");
        assert_eq!(reads[1].sequence, b"GG");
    }

    #[test]
    fn fasta_reads() {
        let reads = parse_reads(">a\nTA\nGA\n>b\nC\n".as_bytes()).unwrap();
        assert_eq!(reads[0].sequence, b"TAGA");
        assert_eq!(reads[1].id, "b");
    }

    #[test]
    fn malformed() {
        assert!(parse_reads("@r\nACG\n+\nII\n".as_bytes()).is_err());
        assert!(parse_reads("@r\nACG\n".as_bytes()).is_err());
        assert!(parse_reads("@r\nACG\n-\nIII\n".as_bytes()).is_err());
        assert!(parse_reads("ACG\n".as_bytes()).is_err());
    }

    #[test]
    fn header_checks() {
        assert!(matches!(
            KatkaIndex::load(&b"NOTANIDX\x01\0\0\0$\0\0\0\0\0\0\0\0\0\0\0"[..]),
            Err(Error::BadMagic)
        ));
        assert!(matches!(KatkaIndex::load(&b"KATKA"[..]), Err(Error::BadMagic)));
        let mut bad_version = Vec::from(MAGIC);
        bad_version.extend_from_slice(&7u32.to_le_bytes());
        bad_version.extend_from_slice(&[b'$', 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert!(matches!(
            KatkaIndex::load(&bad_version[..]),
            Err(Error::UnsupportedVersion(7))
        ));
    }
}
