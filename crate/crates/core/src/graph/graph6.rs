use crate::error::{Error, Result};
use crate::graph::Graph;

fn err(offset: usize, msg: impl Into<String>) -> Error {
    Error::Graph6 { offset, msg: msg.into() }
}

/// Decodes one graph6 record. An optional `>>graph6<<` header and a
/// trailing line break are accepted.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let mut bytes = text.as_bytes();
    let mut base = 0;
    if let Some(rest) = bytes.strip_prefix(b">>graph6<<") {
        bytes = rest;
        base = 10;
    }
    while let [rest @ .., b'\n' | b'\r'] = bytes {
        bytes = rest;
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(base + i, format!("byte 0x{b:02x} outside the graph6 range")));
        }
    }
    let (n, header) = match bytes {
        [] => return Err(err(base, "missing length header")),
        [126, 126, ..] => {
            if bytes.len() < 8 {
                return Err(err(base, "truncated 8-byte length header"));
            }
            let n = bytes[2..8].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, 8)
        }
        [126, ..] => {
            if bytes.len() < 4 {
                return Err(err(base, "truncated 4-byte length header"));
            }
            let n = bytes[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, 4)
        }
        [b, ..] => ((b - 63) as usize, 1),
    };
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    let body = &bytes[header..];
    if body.len() < need {
        return Err(err(base + bytes.len(), format!("expected {need} data bytes, found {}", body.len())));
    }
    if body.len() > need {
        return Err(err(base + header + need, "trailing garbage"));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(u, v)?;
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Encodes the edge relation as graph6 (labels are dropped).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    }
    let mut acc = 0u8;
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((acc << (6 - k % 6)) + 63);
    }
    String::from_utf8(out).expect("ascii")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_records() {
        let k3 = parse_graph6("Bw").unwrap();
        assert_eq!((k3.n(), k3.edge_count()), (3, 3));
        let e = parse_graph6("B?").unwrap();
        assert_eq!((e.n(), e.edge_count()), (3, 0));
        let p = parse_graph6("Bg\n").unwrap();
        assert_eq!(p.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(parse_graph6("?").unwrap().n(), 0);
        assert_eq!(parse_graph6(">>graph6<<Bw").unwrap(), k3);
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse_graph6("").unwrap_err(), Error::Graph6 { offset: 0, msg: "missing length header".into() });
        assert!(matches!(parse_graph6("Bw?"), Err(Error::Graph6 { offset: 2, .. })));
        assert!(matches!(parse_graph6("B w"), Err(Error::Graph6 { offset: 1, .. })));
        assert!(matches!(parse_graph6("C"), Err(Error::Graph6 { offset: 1, .. })));
        assert!(matches!(parse_graph6("~?"), Err(Error::Graph6 { offset: 0, .. })));
    }

    #[test]
    fn encode_roundtrip() {
        for s in ["Bw", "B?", "Bg", "?", "@", "Ch", "E~~w"] {
            assert_eq!(to_graph6(&parse_graph6(s).unwrap()), s);
        }
        let mut g = Graph::empty(70);
        for v in 1..70 {
            g.add_edge(v - 1, v).unwrap();
        }
        let s = to_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }
}
