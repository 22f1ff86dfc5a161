//! Graph interchange: graph6 text and JSON edge lists.
//!
//! graph6 is the McKay format used by the standard small-graph corpora:
//! a size header followed by the upper triangle of the adjacency matrix,
//! read column by column, packed six bits per printable character. The
//! JSON document is `{"n": ..., "edges": [[u, v], ...]}` with `u < v`
//! required for every edge.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("byte {offset}: {message}")]
    Graph6 { offset: usize, message: String },
    #[error("graph6 encoding supports at most 258047 vertices, got {0}")]
    TooLargeForGraph6(usize),
    #[error("json parse error at line {line}, column {column}: {message}")]
    JsonSyntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    JsonValue { path: String, message: String },
}

fn g6_err(offset: usize, message: impl Into<String>) -> CodecError {
    CodecError::Graph6 {
        offset,
        message: message.into(),
    }
}

/// Encodes a graph as a graph6 line (without trailing newline).
pub fn to_graph6(g: &Graph) -> Result<String, CodecError> {
    let n = g.n();
    let mut bytes: Vec<u8> = Vec::new();
    if n <= 62 {
        bytes.push(63 + n as u8);
    } else if n <= 258047 {
        bytes.push(126);
        for shift in [12, 6, 0] {
            bytes.push(63 + ((n >> shift) & 0x3f) as u8);
        }
    } else {
        return Err(CodecError::TooLargeForGraph6(n));
    }
    // Upper triangle, column-major: pairs (i, j) with i < j ordered by j.
    let mut bit_buf = 0u8;
    let mut bit_count = 0;
    for j in 1..n {
        for i in 0..j {
            bit_buf = (bit_buf << 1) | u8::from(g.has_edge(i, j));
            bit_count += 1;
            if bit_count == 6 {
                bytes.push(63 + bit_buf);
                bit_buf = 0;
                bit_count = 0;
            }
        }
    }
    if bit_count > 0 {
        bytes.push(63 + (bit_buf << (6 - bit_count)));
    }
    Ok(String::from_utf8(bytes).expect("graph6 bytes are printable ascii"))
}

/// Decodes a graph6 line. Errors carry the byte offset of the offending
/// character.
pub fn from_graph6(text: &str) -> Result<Graph, CodecError> {
    let bytes = text.trim_end().as_bytes();
    if bytes.is_empty() {
        return Err(g6_err(0, "empty graph6 string"));
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(g6_err(1, "8-byte graph6 size header not supported"));
        }
        if bytes.len() < 4 {
            return Err(g6_err(bytes.len(), "truncated extended size header"));
        }
        let mut n = 0usize;
        for (k, &b) in bytes[1..4].iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(g6_err(1 + k, format!("invalid size byte 0x{b:02x}")));
            }
            n = (n << 6) | (b - 63) as usize;
        }
        (n, 4)
    } else {
        if !(63..=126).contains(&bytes[0]) {
            return Err(g6_err(0, format!("invalid header byte 0x{:02x}", bytes[0])));
        }
        ((bytes[0] - 63) as usize, 1)
    };

    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() < pos + nbytes {
        return Err(g6_err(
            bytes.len(),
            format!("expected {} data bytes, found {}", nbytes, bytes.len() - pos),
        ));
    }
    if bytes.len() > pos + nbytes {
        return Err(g6_err(pos + nbytes, "trailing bytes after graph data"));
    }

    let mut edges = Vec::new();
    let mut bit_index = 0;
    let mut current = 0u8;
    let mut remaining = 0;
    for j in 1..n {
        for i in 0..j {
            if remaining == 0 {
                let b = bytes[pos];
                if !(63..=126).contains(&b) {
                    return Err(g6_err(pos, format!("invalid data byte 0x{b:02x}")));
                }
                current = b - 63;
                remaining = 6;
                pos += 1;
            }
            let bit = (current >> (remaining - 1)) & 1;
            remaining -= 1;
            if bit == 1 {
                edges.push((i, j));
            }
            bit_index += 1;
        }
    }
    debug_assert_eq!(bit_index, nbits);
    Graph::new(n, &edges).map_err(|e| g6_err(0, format!("inconsistent graph data: {e}")))
}

/// Serde shape of the JSON graph document.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDoc {
            n: g.n(),
            edges: g.edges(),
        }
    }
}

/// Parses the JSON graph document, enforcing `u < v` on every edge.
pub fn graph_from_json(text: &str) -> Result<Graph, CodecError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| CodecError::JsonSyntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    graph_from_doc(&doc)
}

pub fn graph_from_doc(doc: &GraphDoc) -> Result<Graph, CodecError> {
    for (i, &(u, v)) in doc.edges.iter().enumerate() {
        if u >= v {
            return Err(CodecError::JsonValue {
                path: format!("edges[{i}]"),
                message: format!("expected u < v, got [{u}, {v}]"),
            });
        }
        if v >= doc.n {
            return Err(CodecError::JsonValue {
                path: format!("edges[{i}]"),
                message: format!("vertex {v} out of range for n = {}", doc.n),
            });
        }
    }
    Graph::new(doc.n, &doc.edges).map_err(|e| CodecError::JsonValue {
        path: "edges".to_string(),
        message: e.to_string(),
    })
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string_pretty(&GraphDoc::from_graph(g)).expect("graph serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{family, FamilySpec};

    /// Independent reference encoder: writes the size header and the
    /// column-major upper-triangle bitstream directly, bit by bit, with
    /// no shared code with the production encoder.
    fn reference_graph6(g: &Graph) -> String {
        assert!(g.n() <= 62);
        let mut bits: Vec<u8> = Vec::new();
        for j in 1..g.n() {
            for i in 0..j {
                bits.push(u8::from(g.has_edge(i, j)));
            }
        }
        while !bits.len().is_multiple_of(6) {
            bits.push(0);
        }
        let mut out = vec![63 + g.n() as u8];
        for chunk in bits.chunks(6) {
            let val = chunk.iter().fold(0u8, |acc, &b| (acc << 1) | b);
            out.push(63 + val);
        }
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn k4_is_c_tilde() {
        let k4 = family(&FamilySpec::Complete(4)).unwrap();
        assert_eq!(to_graph6(&k4).unwrap(), "C~");
        assert_eq!(reference_graph6(&k4), "C~");
    }

    #[test]
    fn five_vertex_strings_round_trip_and_match_reference() {
        for spec in [
            FamilySpec::Cycle(5),
            FamilySpec::Complete(5),
            FamilySpec::Path(5),
            FamilySpec::Hourglass,
            FamilySpec::C5Plus,
        ] {
            let g = family(&spec).unwrap();
            let encoded = to_graph6(&g).unwrap();
            assert_eq!(encoded, reference_graph6(&g), "{spec:?}");
            let decoded = from_graph6(&encoded).unwrap();
            assert_eq!(decoded, g, "{spec:?}");
        }
    }

    #[test]
    fn empty_graph_on_zero_vertices_round_trips() {
        let g = Graph::empty(0);
        let encoded = to_graph6(&g).unwrap();
        assert_eq!(encoded, "?");
        assert_eq!(from_graph6(&encoded).unwrap().n(), 0);
    }

    #[test]
    fn extended_header_round_trips() {
        let edges: Vec<(usize, usize)> = (0..99).map(|i| (i, i + 1)).collect();
        let g = Graph::new(100, &edges).unwrap();
        let encoded = to_graph6(&g).unwrap();
        assert!(encoded.starts_with('~'));
        assert_eq!(from_graph6(&encoded).unwrap(), g);
    }

    #[test]
    fn graph6_errors_name_byte_offsets() {
        match from_graph6("") {
            Err(CodecError::Graph6 { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected graph6 error, got {other:?}"),
        }
        // Header says 5 vertices (10 bits = 2 data bytes), give 1.
        match from_graph6("D?") {
            Err(CodecError::Graph6 { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected graph6 error, got {other:?}"),
        }
        // Trailing garbage after complete data.
        match from_graph6("C~X") {
            Err(CodecError::Graph6 { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected graph6 error, got {other:?}"),
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let g = family(&FamilySpec::Petersen).unwrap();
        let json = graph_to_json(&g);
        assert_eq!(graph_from_json(&json).unwrap(), g);

        let dup = r#"{"n": 2, "edges": [[0, 1], [1, 0]]}"#;
        match graph_from_json(dup) {
            Err(CodecError::JsonValue { path, .. }) => assert_eq!(path, "edges[1]"),
            other => panic!("expected validation error, got {other:?}"),
        }

        let out_of_range = r#"{"n": 2, "edges": [[0, 5]]}"#;
        match graph_from_json(out_of_range) {
            Err(CodecError::JsonValue { path, .. }) => assert_eq!(path, "edges[0]"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    proptest::proptest! {
        #[test]
        fn graph6_round_trip(n in 0usize..12, seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            let encoded = to_graph6(&g).unwrap();
            proptest::prop_assert_eq!(from_graph6(&encoded).unwrap(), g);
        }
    }
}
