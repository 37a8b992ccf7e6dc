//! Text edge lists and the binary container for built relations.
//!
//! An edge list holds one `label object` pair per line. A first line
//! `% n sigma` fixes the universes; otherwise they are the largest values
//! seen. Lines starting with `#` are comments.
//!
//! The container starts with `BREL`, a `u16` version, a one-byte
//! representation tag and `n`, `sigma`, `t` as `u64`, all little-endian,
//! followed by the payload of the representation.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::brwt::Brwt;
use crate::codec::{read_len, read_u16, read_u8, write_u16, write_u64, write_u8};
use crate::error::{Error, Result};
use crate::rel_gwt::BinRelGwt;
use crate::rel_str::BinRelStr;
use crate::rel_wt::BinRelWt;
use crate::relation::{Answer, NativeOps, OpSet, Pair, Query, RelationDims};
use crate::seq::BandMode;
use crate::trace::Trace;

pub const MAGIC: &[u8; 4] = b"BREL";
pub const VERSION: u16 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub sigma: usize,
    pub pairs: Vec<Pair>,
}

fn parse_field(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("{what} `{tok}` is not a non-negative integer"),
    })
}

impl FromStr for EdgeList {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut header = None;
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            if let Some(rest) = s.strip_prefix('%') {
                if header.is_some() || !pairs.is_empty() {
                    return Err(Error::Parse {
                        line,
                        msg: "header must precede all pairs".into(),
                    });
                }
                let mut toks = rest.split_whitespace();
                let n = parse_field(toks.next(), line, "object count")?;
                let sigma = parse_field(toks.next(), line, "label count")?;
                header = Some((n, sigma));
                continue;
            }
            let mut toks = s.split_whitespace();
            let label = parse_field(toks.next(), line, "label")?;
            let object = parse_field(toks.next(), line, "object")?;
            if toks.next().is_some() {
                return Err(Error::Parse {
                    line,
                    msg: "expected two fields".into(),
                });
            }
            if label == 0 || object == 0 {
                return Err(Error::Parse {
                    line,
                    msg: "labels and objects start at 1".into(),
                });
            }
            if let Some((n, sigma)) = header {
                if label > sigma || object > n {
                    return Err(Error::Parse {
                        line,
                        msg: format!("pair ({label}, {object}) outside [1, {sigma}] x [1, {n}]"),
                    });
                }
            }
            pairs.push(Pair::new(label, object));
        }
        let (n, sigma) = header.unwrap_or_else(|| {
            (
                pairs.iter().map(|p| p.object).max().unwrap_or(0),
                pairs.iter().map(|p| p.label).max().unwrap_or(0),
            )
        });
        Ok(Self { n, sigma, pairs })
    }
}

impl fmt::Display for EdgeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "% {} {}", self.n, self.sigma)?;
        for p in &self.pairs {
            writeln!(f, "{} {}", p.label, p.object)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Str,
    Wt,
    Gwt,
    Brwt,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Str, Kind::Wt, Kind::Gwt, Kind::Brwt];

    pub fn tag(self) -> u8 {
        match self {
            Kind::Str => 1,
            Kind::Wt => 2,
            Kind::Gwt => 3,
            Kind::Brwt => 4,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.tag() == tag)
            .ok_or_else(|| Error::Format(format!("unknown representation tag {tag}")))
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Str => "str",
            Kind::Wt => "wt",
            Kind::Gwt => "gwt",
            Kind::Brwt => "brwt",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown representation `{s}`")))
    }
}

/// Any of the four representations, as stored in a container.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyRelation {
    Str(BinRelStr),
    Wt(BinRelWt),
    Gwt(BinRelGwt),
    Brwt(Brwt),
}

macro_rules! dispatch {
    ($self:expr, $r:ident => $e:expr) => {
        match $self {
            AnyRelation::Str($r) => $e,
            AnyRelation::Wt($r) => $e,
            AnyRelation::Gwt($r) => $e,
            AnyRelation::Brwt($r) => $e,
        }
    };
}

impl AnyRelation {
    /// Builds `kind`; `mu` is only read for the generalized wavelet tree.
    pub fn build(kind: Kind, pairs: &[Pair], n: usize, sigma: usize, mu: usize) -> Result<Self> {
        Ok(match kind {
            Kind::Str => AnyRelation::Str(BinRelStr::new(pairs, n, sigma)?),
            Kind::Wt => AnyRelation::Wt(BinRelWt::new(pairs, n, sigma)?),
            Kind::Gwt => AnyRelation::Gwt(BinRelGwt::new(pairs, n, sigma, mu, BandMode::AllBands)?),
            Kind::Brwt => AnyRelation::Brwt(Brwt::new(pairs, n, sigma)?),
        })
    }

    pub fn kind(&self) -> Kind {
        match self {
            AnyRelation::Str(_) => Kind::Str,
            AnyRelation::Wt(_) => Kind::Wt,
            AnyRelation::Gwt(_) => Kind::Gwt,
            AnyRelation::Brwt(_) => Kind::Brwt,
        }
    }

    /// Decoded pairs, label-major.
    pub fn pairs(&self) -> Vec<Pair> {
        let mut pairs = dispatch!(self, r => r.pairs());
        pairs.sort_unstable();
        pairs
    }

    pub fn payload_bits(&self) -> usize {
        dispatch!(self, r => r.payload_bits())
    }

    pub fn directory_bits(&self) -> usize {
        dispatch!(self, r => r.directory_bits())
    }

    pub fn store<W: Write>(&self, w: &mut W) -> Result<()> {
        let d = NativeOps::dims(self);
        w.write_all(MAGIC)?;
        write_u16(w, VERSION)?;
        write_u8(w, self.kind().tag())?;
        for v in [d.n, d.sigma, d.t] {
            write_u64(w, v as u64)?;
        }
        dispatch!(self, r => r.write_to(w))
    }

    pub fn load<R: Read>(r: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("not a stored relation".into()));
        }
        let version = read_u16(r)?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported format version {version}")));
        }
        let kind = Kind::from_tag(read_u8(r)?)?;
        let n = read_len(r, "object count")?;
        let sigma = read_len(r, "label count")?;
        let t = read_len(r, "pair count")?;
        let dims = RelationDims::new(n, sigma, t)?;
        let rel = match kind {
            Kind::Str => AnyRelation::Str(BinRelStr::read_from(r, dims)?),
            Kind::Wt => AnyRelation::Wt(BinRelWt::read_from(r, dims)?),
            Kind::Gwt => AnyRelation::Gwt(BinRelGwt::read_from(r, dims)?),
            Kind::Brwt => AnyRelation::Brwt(Brwt::read_from(r, dims)?),
        };
        let mut rest = [0u8; 1];
        if r.read(&mut rest)? != 0 {
            return Err(Error::Format("trailing bytes after the payload".into()));
        }
        Ok(rel)
    }
}

impl NativeOps for AnyRelation {
    fn dims(&self) -> RelationDims {
        dispatch!(self, r => NativeOps::dims(r))
    }

    fn native_ops(&self) -> OpSet {
        dispatch!(self, r => r.native_ops())
    }

    fn native(&self, q: &Query, tr: &mut Trace) -> Answer {
        dispatch!(self, r => r.native(q, tr))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{NaiveRelation, Op, Relation};

    const R0: &str = "% 5 4\n# R0\n1 2\n1 5\n2 1\n2 4\n3 1\n3 3\n3 5\n4 5\n";

    #[test]
    fn parses_headers_comments_and_inferred_bounds() {
        let e: EdgeList = R0.parse().unwrap();
        assert_eq!((e.n, e.sigma, e.pairs.len()), (5, 4, 8));
        let e: EdgeList = "2 7\n\n 3 1 \n".parse().unwrap();
        assert_eq!((e.n, e.sigma), (7, 3));
        let e: EdgeList = "% 5 4\n".parse().unwrap();
        assert_eq!((e.n, e.sigma, e.pairs.len()), (5, 4, 0));
        assert_eq!(e.to_string().parse::<EdgeList>().unwrap(), e);
    }

    #[test]
    fn reports_the_offending_line() {
        let line = |s: &str| match s.parse::<EdgeList>() {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("1 1\n0 3\n"), 2);
        assert_eq!(line("% 2 2\n1 1\n# c\n3 1\n"), 4);
        assert_eq!(line("1 x\n"), 1);
        assert_eq!(line("1 2 3\n"), 1);
        assert_eq!(line("1 2\n% 3 3\n"), 2);
        assert_eq!(line("% 3\n"), 1);
    }

    #[test]
    fn container_roundtrip_for_every_kind() {
        let e: EdgeList = R0.parse().unwrap();
        let oracle = NaiveRelation::new(&e.pairs, e.n, e.sigma).unwrap();
        for kind in Kind::ALL {
            let rel = AnyRelation::build(kind, &e.pairs, e.n, e.sigma, 3).unwrap();
            let mut buf = Vec::new();
            rel.store(&mut buf).unwrap();
            assert_eq!(&buf[..4], MAGIC);
            assert_eq!(&buf[4..6], &VERSION.to_le_bytes());
            assert_eq!(buf[6], kind.tag());
            assert_eq!(&buf[7..15], &5u64.to_le_bytes());
            let back = AnyRelation::load(&mut buf.as_slice()).unwrap();
            assert_eq!(back, rel);
            assert_eq!(back.pairs(), oracle.pairs());
            let r = Relation::new(back).unwrap();
            let q = Query::new(Op::RelNum, &[2, 3, 1, 3]).unwrap();
            assert_eq!(r.query(&q).unwrap(), Answer::Count(3));
        }
    }

    #[test]
    fn container_rejects_damage() {
        let e: EdgeList = R0.parse().unwrap();
        let rel = AnyRelation::build(Kind::Wt, &e.pairs, e.n, e.sigma, 2).unwrap();
        let mut buf = Vec::new();
        rel.store(&mut buf).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(AnyRelation::load(&mut bad.as_slice()).is_err());
        let mut bad = buf.clone();
        bad[6] = 9;
        assert!(AnyRelation::load(&mut bad.as_slice()).is_err());
        let mut bad = buf.clone();
        bad.push(0);
        assert!(AnyRelation::load(&mut bad.as_slice()).is_err());
        assert!(AnyRelation::load(&mut &buf[..buf.len() - 3]).is_err());
    }
}
