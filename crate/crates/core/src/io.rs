//! Graph file formats: graph6, DIMACS / plain edge lists, edge weights.

use num_rational::Rational64;

use crate::dp::WeightedGraph;
use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses one graph6 line. Short (`n ≤ 62`), 4-byte and 8-byte headers are
/// accepted; padding bits in the last byte must be zero.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let line = text.trim_end_matches(['\n', '\r']);
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(parse_err("empty graph6 string"));
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(format!(
                "byte {b:#x} at offset {i} outside graph6 range"
            )));
        }
    }
    let (n, body) = if bytes[0] != 126 {
        (usize::from(bytes[0] - 63), &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] != 126 {
        if bytes.len() < 4 {
            return Err(parse_err("truncated 4-byte header"));
        }
        (decode_n(&bytes[1..4]), &bytes[4..])
    } else {
        if bytes.len() < 8 {
            return Err(parse_err("truncated 8-byte header"));
        }
        (decode_n(&bytes[2..8]), &bytes[8..])
    };
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    if body.len() != need {
        return Err(parse_err(format!(
            "expected {need} adjacency bytes for n = {n}, found {}",
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (bits..need * 6).any(bit) {
        return Err(parse_err("nonzero padding bits"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges)
}

fn decode_n(chunk: &[u8]) -> usize {
    chunk
        .iter()
        .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63))
}

pub fn serialize_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(63 + ((n >> shift) & 63) as u8);
        }
    } else {
        out.extend_from_slice(&[126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(63 + ((n >> shift) & 63) as u8);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

/// Parses DIMACS (`p edge n m` / `e u v`) or a plain list of `u v` lines.
/// Ids are 1-based in the file and 0-based in the result. Without a header,
/// `n` is the largest id seen. Lines starting with `c` or `#` are comments.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty()
            || line.starts_with('c')
            || line.starts_with('#')
            || line.starts_with('%')
        {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let at = |msg: String| parse_err(format!("line {}: {msg}", lineno + 1));
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| at(format!("expected a non-negative integer, got {s:?}")))
        };
        match fields.as_slice() {
            ["p", _kind, vs, _es] => {
                if n.is_some() {
                    return Err(at("second problem line".into()));
                }
                n = Some(num(vs)?);
            }
            ["e", u, v] | [u, v] => {
                let (u, v) = (num(u)?, num(v)?);
                if u == 0 || v == 0 {
                    return Err(at("vertex ids are 1-based".into()));
                }
                if let Some(n) = n {
                    if u > n || v > n {
                        return Err(at(format!("vertex id out of range 1..={n}")));
                    }
                }
                if u == v {
                    return Err(Error::SelfLoop(u - 1));
                }
                edges.push((u - 1, v - 1));
            }
            _ => return Err(at(format!("unrecognised line {line:?}"))),
        }
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Graph::from_edges(n, edges)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    parse_dimacs(text)
}

/// Writes DIMACS with a `p edge` header and 1-based ids.
pub fn serialize_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.m());
    for e in g.edges() {
        out.push_str(&format!("e {} {}\n", e.0 + 1, e.1 + 1));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Graph6,
    Dimacs,
}

/// Guesses the format: graph6 is a single token of printable bytes in
/// `63..=126`; anything with whitespace-separated fields is DIMACS.
pub fn detect_format(text: &str) -> Format {
    let trimmed = text.trim();
    let single_token = !trimmed.contains(char::is_whitespace);
    if trimmed.starts_with(">>graph6<<")
        || (single_token && !trimmed.chars().all(|c| c.is_ascii_digit()))
    {
        Format::Graph6
    } else {
        Format::Dimacs
    }
}

pub fn parse_graph(text: &str, format: Option<Format>) -> Result<Graph> {
    match format.unwrap_or_else(|| detect_format(text)) {
        Format::Graph6 => parse_graph6(text.trim()),
        Format::Dimacs => parse_dimacs(text),
    }
}

/// Parses a weight: integer, decimal (`2.5`) or fraction (`3/4`).
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || parse_err(format!("invalid weight {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = frac.len() as u32;
        if digits > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let part: i64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let scale = 10i64.pow(digits);
        let mag = whole.abs() * scale + part;
        return Ok(Rational64::new(if negative { -mag } else { mag }, scale));
    }
    s.parse::<i64>()
        .map(Rational64::from_integer)
        .map_err(|_| bad())
}

/// Reads `u v w` lines (1-based ids) and attaches the weights to `g`. Every
/// edge must receive exactly one weight.
pub fn parse_weights(g: Graph, text: &str) -> Result<WeightedGraph> {
    let mut weights = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, w] = fields.as_slice() else {
            return Err(parse_err(format!(
                "line {}: expected `u v weight`",
                lineno + 1
            )));
        };
        let id = |s: &str| match s.parse::<usize>() {
            Ok(x) if x >= 1 => Ok(x - 1),
            _ => Err(parse_err(format!(
                "line {}: bad vertex id {s:?}",
                lineno + 1
            ))),
        };
        weights.push(((id(u)?, id(v)?), parse_rational(w)?));
    }
    WeightedGraph::new(g, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn graph6_examples() {
        assert_eq!(parse_graph6("@").unwrap(), Graph::empty(1));
        assert_eq!(parse_graph6("?").unwrap(), Graph::empty(0));
        assert_eq!(serialize_graph6(&complete(4)), "C~");
        assert_eq!(parse_graph6("C~").unwrap(), complete(4));
        // parts {1,2} and {3,4}, i.e. 0-based {0,1} and {2,3}
        assert_eq!(serialize_graph6(&complete_bipartite(2, 2)), "C]");
        assert_eq!(parse_graph6("C]").unwrap(), complete_bipartite(2, 2));
    }

    #[test]
    fn graph6_long_header() {
        let g = path(70);
        let s = serialize_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn graph6_rejects_malformed() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("C").is_err());
        assert!(parse_graph6("C~~").is_err());
        // n = 2 has one bit; 'A' = 65 sets a padding bit
        assert!(parse_graph6("AA").is_err());
        assert!(parse_graph6("A_").is_ok());
        assert!(parse_graph6("~?").is_err());
    }

    #[test]
    fn dimacs_examples() {
        assert_eq!(parse_dimacs("p edge 2 1\ne 1 2\n").unwrap(), complete(2));
        assert_eq!(parse_dimacs("p edge 2 1\ne 1 1\n"), Err(Error::SelfLoop(0)));
        let c4 = parse_edge_list("1 2\n2 3\n3 4\n4 1\n").unwrap();
        assert_eq!(c4, cycle(4));
        assert_eq!(c4.m(), 4);
        assert!(parse_dimacs("1 2\n2 1\n").is_err());
        assert!(parse_dimacs("p edge 2 1\ne 1 3\n").is_err());
        assert!(parse_dimacs("c comment\np edge 3 0\n").unwrap().n() == 3);
    }

    #[test]
    fn dimacs_round_trip() {
        let g = petersen();
        assert_eq!(parse_dimacs(&serialize_dimacs(&g)).unwrap(), g);
    }

    #[test]
    fn format_detection() {
        assert_eq!(detect_format("C~\n"), Format::Graph6);
        assert_eq!(detect_format("p edge 2 1\ne 1 2"), Format::Dimacs);
        assert_eq!(detect_format("1 2\n"), Format::Dimacs);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("5").unwrap(), Rational64::from_integer(5));
        assert_eq!(parse_rational("-2.5").unwrap(), Rational64::new(-5, 2));
        assert_eq!(parse_rational("3/4").unwrap(), Rational64::new(3, 4));
        assert_eq!(parse_rational("0.125").unwrap(), Rational64::new(1, 8));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn weights_cover_every_edge() {
        let g = path(4);
        let w = parse_weights(g.clone(), "1 2 5\n2 3 9\n3 4 5\n").unwrap();
        assert_eq!(w.weight(1, 2).unwrap(), Rational64::from_integer(9));
        assert!(parse_weights(g.clone(), "1 2 5\n").is_err());
        assert!(parse_weights(g, "1 3 5\n1 2 1\n2 3 1\n3 4 1\n").is_err());
    }
}
