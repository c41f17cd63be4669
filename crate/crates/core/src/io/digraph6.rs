//! digraph6: `&`, one size byte `n + 63`, then the `n^2` row-major adjacency
//! bits packed six to a byte (most significant first), each byte offset by
//! 63, with zero padding in the last byte.

use crate::hosts::{tournament_from_pairs, Host};
use crate::patterns::LabelKind;

use super::CodecError;

pub const DIGRAPH6_HEADER: &str = ">>digraph6<<";
/// Largest order representable with the one-byte size field.
pub const MAX_SHORT_ORDER: usize = 62;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph6Record {
    pub n: usize,
    /// `adjacency[i * n + j]` is true iff there is an arc `i -> j`
    pub adjacency: Vec<bool>,
    /// 1-based source line, 0 when unknown
    pub line: usize,
}

impl Digraph6Record {
    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n + j]
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|i| (0..self.n).map(move |j| (i, j))).filter(|&(i, j)| self.has_arc(i, j)).collect()
    }

    /// The tournament with these arcs; every pair must carry exactly one arc.
    pub fn to_tournament(&self, provenance: &str) -> Result<Host, CodecError> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_arc(i, j) == self.has_arc(j, i) {
                    return Err(CodecError::NotTournament { i, j });
                }
            }
        }
        let host = tournament_from_pairs(self.n, &self.arcs()).map_err(|_| CodecError::NotTournament { i: 0, j: 0 })?;
        Ok(host.with_provenance(provenance))
    }

    pub fn from_host(host: &Host) -> Result<Self, CodecError> {
        if host.kind() != &LabelKind::Antisymmetric {
            return Err(CodecError::NotOriented);
        }
        let n = host.order();
        let mut adjacency = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                adjacency[i * n + j] = i != j && host.beats(i, j);
            }
        }
        Ok(Digraph6Record { n, adjacency, line: 0 })
    }
}

pub(crate) fn strip_line<'a>(line: &'a [u8], header: &str) -> &'a [u8] {
    let mut line = line;
    while let Some((last, rest)) = line.split_last() {
        if *last == b'\n' || *last == b'\r' {
            line = rest;
        } else {
            break;
        }
    }
    line.strip_prefix(header.as_bytes()).unwrap_or(line)
}

/// Reads the size byte and the packed bits that follow, checking range,
/// length and zero padding.
pub(crate) fn unpack(body: &[u8], bits_for: impl Fn(usize) -> usize) -> Result<(usize, Vec<bool>), CodecError> {
    let (&size, data) = body.split_first().ok_or(CodecError::Empty)?;
    if size == 126 {
        return Err(CodecError::LongSize);
    }
    if !(63..=126).contains(&size) {
        return Err(CodecError::ByteOutOfRange { position: 0, byte: size });
    }
    let n = (size - 63) as usize;
    let bits = bits_for(n);
    let needed = bits.div_ceil(6);
    if data.len() != needed {
        return Err(CodecError::Length { expected: needed, found: data.len() });
    }
    let mut out = Vec::with_capacity(needed * 6);
    for (p, &b) in data.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(CodecError::ByteOutOfRange { position: p + 1, byte: b });
        }
        let v = b - 63;
        for s in (0..6).rev() {
            out.push(v >> s & 1 == 1);
        }
    }
    if out[bits.min(out.len())..].iter().any(|&b| b) {
        return Err(CodecError::NonzeroPadding);
    }
    out.truncate(bits);
    Ok((n, out))
}

pub(crate) fn pack(n: usize, bits: &[bool], out: &mut String) -> Result<(), CodecError> {
    if n > MAX_SHORT_ORDER {
        return Err(CodecError::TooLarge(n));
    }
    out.push((n as u8 + 63) as char);
    for group in bits.chunks(6) {
        let mut v = 0u8;
        for s in 0..6 {
            v = v << 1 | u8::from(group.get(s).copied().unwrap_or(false));
        }
        out.push((v + 63) as char);
    }
    Ok(())
}

pub fn decode_digraph6(line: &[u8]) -> Result<Digraph6Record, CodecError> {
    let body = strip_line(line, DIGRAPH6_HEADER);
    if body.is_empty() {
        return Err(CodecError::Empty);
    }
    let body = body.strip_prefix(b"&").ok_or(CodecError::BadPrefix)?;
    let (n, adjacency) = unpack(body, |n| n * n)?;
    if let Some(i) = (0..n).find(|&i| adjacency[i * n + i]) {
        return Err(CodecError::DiagonalBit(i));
    }
    Ok(Digraph6Record { n, adjacency, line: 0 })
}

pub fn encode_record(record: &Digraph6Record) -> Result<String, CodecError> {
    let mut out = String::with_capacity(2 + (record.n * record.n).div_ceil(6));
    out.push('&');
    pack(record.n, &record.adjacency, &mut out)?;
    Ok(out)
}

pub fn encode_digraph6(host: &Host) -> Result<String, CodecError> {
    encode_record(&Digraph6Record::from_host(host)?)
}
