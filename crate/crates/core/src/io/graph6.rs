//! graph6: one size byte `n + 63`, then the upper triangle in column-major
//! order (`x(0,1), x(0,2), x(1,2), x(0,3), ...`) packed like digraph6.

use crate::hosts::{graph_to_bicolored, Host};
use crate::patterns::LabelKind;

use super::digraph6::{pack, strip_line, unpack};
use super::CodecError;

pub const GRAPH6_HEADER: &str = ">>graph6<<";

/// A simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph6 {
    pub n: usize,
    /// edges `(i, j)` with `i < j`, column-major order
    pub edges: Vec<(usize, usize)>,
}

impl Graph6 {
    /// Two-colored complete host: edges blue, non-edges red.
    pub fn to_bicolored(&self, provenance: &str) -> Result<Host, CodecError> {
        let host = graph_to_bicolored(self.n, &self.edges).map_err(|e| CodecError::Host(e.to_string()))?;
        Ok(host.with_provenance(provenance))
    }

    /// Graph of the pairs carrying the edge label of a binary or two-color host.
    pub fn from_host(host: &Host) -> Result<Self, CodecError> {
        let edge = match host.kind() {
            LabelKind::Binary => 1,
            kind => kind.edge_label().ok_or(CodecError::NotGraph)?,
        };
        let n = host.order();
        let mut edges = Vec::new();
        for j in 1..n {
            for i in 0..j {
                if host.label(i, j) == Some(edge) {
                    edges.push((i, j));
                }
            }
        }
        Ok(Graph6 { n, edges })
    }
}

fn triangle_bits(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn decode_graph6(line: &[u8]) -> Result<Graph6, CodecError> {
    let body = strip_line(line, GRAPH6_HEADER);
    if body.first() == Some(&b'&') || body.first() == Some(&b':') {
        return Err(CodecError::BadPrefix);
    }
    let (n, bits) = unpack(body, triangle_bits)?;
    let mut edges = Vec::new();
    let mut p = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[p] {
                edges.push((i, j));
            }
            p += 1;
        }
    }
    Ok(Graph6 { n, edges })
}

pub fn encode_graph6(graph: &Graph6) -> Result<String, CodecError> {
    let n = graph.n;
    let mut bits = vec![false; triangle_bits(n)];
    for &(a, b) in &graph.edges {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        if i == j || j >= n {
            return Err(CodecError::BadEdge(a, b));
        }
        bits[j * (j - 1) / 2 + i] = true;
    }
    let mut out = String::new();
    pack(n, &bits, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_complete() {
        let g = decode_graph6(b"D??").unwrap();
        assert_eq!((g.n, g.edges.len()), (5, 0));
        let k5 = Graph6 { n: 5, edges: (1..5).flat_map(|j| (0..j).map(move |i| (i, j))).collect() };
        let text = encode_graph6(&k5).unwrap();
        assert_eq!(text, "D~{");
        assert_eq!(decode_graph6(text.as_bytes()).unwrap(), k5);
    }

    #[test]
    fn bipartite_golden() {
        // K_{3,4}: parts {0,1,2} and {3,4,5,6}
        let edges: Vec<(usize, usize)> = (0..3).flat_map(|i| (3..7).map(move |j| (i, j))).collect();
        let mut sorted = edges.clone();
        sorted.sort_by_key(|&(i, j)| (j, i));
        let g = Graph6 { n: 7, edges: sorted };
        let text = encode_graph6(&g).unwrap();
        assert_eq!(text, "FFzf?");
        assert_eq!(decode_graph6(text.as_bytes()).unwrap(), g);
        let host = g.to_bicolored("k34").unwrap();
        assert_eq!(Graph6::from_host(&host).unwrap(), g);
    }

    #[test]
    fn validation() {
        assert_eq!(decode_graph6(b"&BP_"), Err(CodecError::BadPrefix));
        assert_eq!(decode_graph6(b"D?"), Err(CodecError::Length { expected: 2, found: 1 }));
        assert_eq!(decode_graph6(b"A`"), Err(CodecError::NonzeroPadding));
        assert_eq!(decode_graph6(b"A_").unwrap().edges, vec![(0, 1)]);
        assert!(encode_graph6(&Graph6 { n: 3, edges: vec![(1, 1)] }).is_err());
        assert!(encode_graph6(&Graph6 { n: 3, edges: vec![(1, 3)] }).is_err());
    }
}
