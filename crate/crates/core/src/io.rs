//! Graph text format and graph6.
//!
//! Text format: the first non-comment line holds the vertex count `n`, every
//! further line one edge `u v` (0-based, whitespace separated). Lines whose
//! first non-blank character is `#` are comments. Loops, out-of-range ids and
//! repeated edges are rejected with the offending line number.

use sha2::{Digest, Sha256};

use crate::error::ParseError;
use crate::graph::Graph;

pub const GRAPH6_HEADER: &str = ">>graph6<<";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    /// Graph6 when the first line carries the `>>graph6<<` header, text otherwise.
    #[default]
    Auto,
    Text,
    Graph6,
}

pub fn parse_graph(input: &str, format: Format) -> Result<Graph, ParseError> {
    match format {
        Format::Text => parse_text(input),
        Format::Graph6 => {
            let line = first_content_line(input).ok_or(ParseError::Empty)?;
            parse_graph6(line)
        }
        Format::Auto => match first_content_line(input) {
            // Text input opens with a bare vertex count.
            Some(line) if line.bytes().all(|b| b.is_ascii_digit()) => parse_text(input),
            Some(line) => parse_graph6(line),
            None => Err(ParseError::Empty),
        },
    }
}

fn first_content_line(input: &str) -> Option<&str> {
    input
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_text(input: &str) -> Result<Graph, ParseError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (first, header) = lines.next().ok_or(ParseError::Empty)?;
    let n: usize = header.parse().map_err(|_| ParseError::Text {
        line: first,
        message: format!("expected vertex count, found {header:?}"),
    })?;
    if n == 0 {
        return Err(ParseError::Text {
            line: first,
            message: "vertex count must be at least 1".into(),
        });
    }

    let mut g = Graph::empty(n);
    for (line, text) in lines {
        let err = |message: String| ParseError::Text { line, message };
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(format!("expected `u v`, found {text:?}")));
        }
        let mut ends = [0usize; 2];
        for (slot, field) in ends.iter_mut().zip(&fields) {
            *slot = field
                .parse()
                .map_err(|_| err(format!("invalid vertex id {field:?}")))?;
            if *slot >= n {
                return Err(err(format!("vertex {slot} out of range 0..{n}")));
            }
        }
        let [u, v] = ends;
        if u == v {
            return Err(err(format!("self-loop at vertex {u}")));
        }
        if g.has_edge(u, v) {
            return Err(err(format!("duplicate edge {u} {v}")));
        }
        g.set_edge(u, v);
    }
    Ok(g)
}

pub fn to_text(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Decode one graph6 line, with or without the `>>graph6<<` header.
pub fn parse_graph6(line: &str) -> Result<Graph, ParseError> {
    let line = line.trim_end_matches(['\r', '\n']);
    let (skip, body) = match line.strip_prefix(GRAPH6_HEADER) {
        Some(rest) => (GRAPH6_HEADER.len(), rest.as_bytes()),
        None => (0, line.as_bytes()),
    };
    let err = |pos: usize, message: &str| ParseError::Graph6 {
        byte: skip + pos,
        message: message.to_string(),
    };
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(i, "byte outside 63..=126"));
        }
    }
    let six = |i: usize| -> Result<u64, ParseError> {
        body.get(i)
            .map(|&b| u64::from(b - 63))
            .ok_or_else(|| err(i, "truncated size field"))
    };

    let (n, mut pos) = match body.first() {
        None => return Err(err(0, "missing size byte")),
        Some(&126) if body.get(1) == Some(&126) => {
            let mut n = 0u64;
            for i in 2..8 {
                n = (n << 6) | six(i)?;
            }
            (n as usize, 8)
        }
        Some(&126) => {
            let mut n = 0u64;
            for i in 1..4 {
                n = (n << 6) | six(i)?;
            }
            (n as usize, 4)
        }
        Some(&b) => (usize::from(b - 63), 1),
    };
    if n == 0 {
        return Err(err(0, "graph has no vertices"));
    }

    let pairs = n * (n - 1) / 2;
    let needed = pairs.div_ceil(6);
    if body.len() - pos != needed {
        let at = (pos + needed).min(body.len());
        return Err(err(
            at,
            &format!("expected {needed} edge bytes, found {}", body.len() - pos),
        ));
    }

    let mut g = Graph::empty(n);
    let mut bit = 0usize;
    let mut current = 0u8;
    for j in 1..n {
        for i in 0..j {
            if bit.is_multiple_of(6) {
                current = body[pos] - 63;
                pos += 1;
            }
            if current >> (5 - bit % 6) & 1 == 1 {
                g.set_edge(i, j);
            }
            bit += 1;
        }
    }
    if !bit.is_multiple_of(6) && current & ((1 << (6 - bit % 6)) - 1) != 0 {
        return Err(err(pos - 1, "non-zero padding bits"));
    }
    Ok(g)
}

/// Encode without the optional header.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

/// One graph6 graph per non-empty, non-comment line.
pub fn parse_graph6_corpus(input: &str) -> Result<Vec<Graph>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_graph6(line).map_err(|e| match e {
            ParseError::Graph6 { byte, message } => ParseError::Text {
                line: i + 1,
                message: format!("graph6 byte {byte}: {message}"),
            },
            other => other,
        })?);
    }
    Ok(out)
}

/// Stable content hash of the labelled graph: leading 64 bits of the SHA-256
/// of its graph6 encoding, as hex.
pub fn content_hash(g: &Graph) -> String {
    let digest = Sha256::digest(to_graph6(g).as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let g = Graph::cycle(5);
        assert_eq!(parse_text(&to_text(&g)).unwrap(), g);
        assert_eq!(to_text(&Graph::path(3)), "3\n0 1\n1 2\n");
    }

    #[test]
    fn text_comments_and_errors() {
        let g = parse_text("# a square\n4\n0 1\n# mid comment\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!(g, Graph::cycle(4));

        let e = parse_text("3\n0 1\n1 0\n").unwrap_err();
        assert_eq!(
            e,
            ParseError::Text {
                line: 3,
                message: "duplicate edge 1 0".into()
            }
        );
        assert!(matches!(
            parse_text("3\n0 3\n"),
            Err(ParseError::Text { line: 2, .. })
        ));
        assert!(matches!(
            parse_text("3\n2 2\n"),
            Err(ParseError::Text { line: 2, .. })
        ));
        assert!(matches!(
            parse_text("3\n0 1 2\n"),
            Err(ParseError::Text { line: 2, .. })
        ));
        assert!(matches!(parse_text("x\n"), Err(ParseError::Text { line: 1, .. })));
        assert!(matches!(parse_text("0\n"), Err(ParseError::Text { line: 1, .. })));
        assert_eq!(parse_text("# nothing\n"), Err(ParseError::Empty));
    }

    #[test]
    fn graph6_known_encodings() {
        // Standard reference strings.
        assert_eq!(to_graph6(&Graph::empty(1)), "@");
        assert_eq!(to_graph6(&Graph::complete(2)), "A_");
        assert_eq!(to_graph6(&Graph::complete(4)), "C~");
        assert_eq!(to_graph6(&Graph::cycle(5)), "Dhc");
        assert_eq!(to_graph6(&Graph::path(3)), "Bg");
        assert_eq!(parse_graph6("Dhc").unwrap(), Graph::cycle(5));
        assert_eq!(parse_graph6(">>graph6<<C~").unwrap(), Graph::complete(4));
    }

    #[test]
    fn graph6_large_size_field() {
        let g = Graph::cycle(100);
        let s = to_graph6(&g);
        assert_eq!(&s.as_bytes()[..4], &[126, 63, 64, 99]);
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn graph6_errors() {
        assert!(matches!(parse_graph6("C"), Err(ParseError::Graph6 { .. })));
        assert!(matches!(parse_graph6("C~~"), Err(ParseError::Graph6 { .. })));
        assert!(matches!(
            parse_graph6("C\x10"),
            Err(ParseError::Graph6 { byte: 1, .. })
        ));
        // "A" + 0b111111: padding bits set.
        assert!(matches!(parse_graph6("A~"), Err(ParseError::Graph6 { .. })));
    }

    #[test]
    fn auto_format_detects_header() {
        let g = parse_graph(">>graph6<<Bg\n", Format::Auto).unwrap();
        assert_eq!(g, Graph::path(3));
        assert_eq!(parse_graph("Bg\n", Format::Graph6).unwrap(), Graph::path(3));
        assert_eq!(
            parse_graph("3\n0 1\n1 2\n", Format::Auto).unwrap(),
            Graph::path(3)
        );
    }

    #[test]
    fn hash_is_stable_per_labelling() {
        let a = content_hash(&Graph::cycle(4));
        assert_eq!(a.len(), 16);
        assert_eq!(a, content_hash(&Graph::cycle(4)));
        assert_ne!(a, content_hash(&Graph::complete(4)));
    }
}
