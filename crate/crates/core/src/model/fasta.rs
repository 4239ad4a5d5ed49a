use std::collections::HashSet;
use std::io::BufRead;

use crate::error::{Error, Result};

/// A named genome sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenomeRecord {
    pub name: String,
    pub sequence: Vec<u8>,
}

impl GenomeRecord {
    pub fn new(name: impl Into<String>, sequence: impl Into<Vec<u8>>) -> Self {
        Self {
            name: name.into(),
            sequence: sequence.into(),
        }
    }
}

/// Reads multi-record FASTA. Names are the first whitespace-separated token of
/// the header; sequence lines are upper-cased and stripped of whitespace.
pub fn parse_fasta<R: BufRead>(source: R, sentinel: u8) -> Result<Vec<GenomeRecord>> {
    let mut records: Vec<GenomeRecord> = Vec::new();
    let mut names = HashSet::new();
    let mut header_line = 0;
    let mut last_line = 0;

    for (idx, line) in source.split(b'\n').enumerate() {
        let line = line?;
        let lineno = idx + 1;
        last_line = lineno;
        let line = line.strip_suffix(b"\r").unwrap_or(&line);

        if let Some(header) = line.strip_prefix(b">") {
            if let Some(prev) = records.last() {
                if prev.sequence.is_empty() {
                    return Err(Error::Fasta {
                        line: header_line,
                        msg: format!("record `{}` has no sequence", prev.name),
                    });
                }
            }
            let header = String::from_utf8_lossy(header);
            let name = header.split_whitespace().next().unwrap_or("").to_owned();
            if name.is_empty() {
                return Err(Error::Fasta {
                    line: lineno,
                    msg: "header without a name".into(),
                });
            }
            if !names.insert(name.clone()) {
                return Err(Error::Fasta {
                    line: lineno,
                    msg: format!("duplicate record name `{name}`"),
                });
            }
            header_line = lineno;
            records.push(GenomeRecord {
                name,
                sequence: Vec::new(),
            });
            continue;
        }
        if line.starts_with(b";") {
            continue;
        }
        let Some(rec) = records.last_mut() else {
            if line.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            return Err(Error::Fasta {
                line: lineno,
                msg: "sequence data before the first header".into(),
            });
        };
        for &b in line {
            if b.is_ascii_whitespace() {
                continue;
            }
            if b == sentinel {
                return Err(Error::Fasta {
                    line: lineno,
                    msg: format!(
                        "record `{}` contains the sentinel byte '{}'",
                        rec.name,
                        sentinel.escape_ascii()
                    ),
                });
            }
            rec.sequence.push(b.to_ascii_uppercase());
        }
    }

    match records.last() {
        None => Err(Error::Fasta {
            line: last_line,
            msg: "no records".into(),
        }),
        Some(r) if r.sequence.is_empty() => Err(Error::Fasta {
            line: header_line,
            msg: format!("record `{}` has no sequence", r.name),
        }),
        Some(_) => Ok(records),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Vec<GenomeRecord>> {
        parse_fasta(s.as_bytes(), b'$')
    }

    #[test]
    fn sample_genomes() {
        let src = ">GATTACAT\nGATTACAT\n>AGATACAT\nAGATACAT\n>GATACAT\nGATACAT\n\
                   >GATTAGAT\nGATTAGAT\n>GATTAGATA\nGATTAGATA\n";
        let recs = parse(src).unwrap();
        assert_eq!(recs.len(), 5);
        for r in &recs {
            assert_eq!(r.name.as_bytes(), &r.sequence[..]);
        }
    }

    #[test]
    fn wrapped_lowercase_and_crlf() {
        let recs = parse(">g1 some description\r\ngatt\r\n  aCat \r\n\n>g2\nA\n").unwrap();
        assert_eq!(recs[0].name, "g1");
        assert_eq!(recs[0].sequence, b"GATTACAT");
        assert_eq!(recs[1].sequence, b"A");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse(""), Err(Error::Fasta { .. })));
        assert!(matches!(parse("\n\n"), Err(Error::Fasta { .. })));
        match parse(">a\nAC\n>b\nA$C\n") {
            Err(Error::Fasta { line, msg }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("sentinel"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse(">a\nAC\n>a\nGG\n").is_err());
        assert!(parse("ACGT\n>a\nAC\n").is_err());
        assert!(parse(">a\n>b\nAC\n").is_err());
        assert!(parse(">a\nAC\n>b\n").is_err());
        assert!(parse(">\nAC\n").is_err());
    }

    #[test]
    fn custom_sentinel() {
        assert!(parse_fasta(">a\nA$C\n".as_bytes(), b'#').is_ok());
        assert!(parse_fasta(">a\nA#C\n".as_bytes(), b'#').is_err());
    }
}
