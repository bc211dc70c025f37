use super::{Graph, GraphError, MAX_ORDER};

/// graph6 encoding (orders up to 62 use the single-byte size prefix).
pub fn graph6_encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = vec![(n + 63) as u8];
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            k += 1;
            if k == 6 {
                out.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((acc << (6 - k)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

pub fn graph6_decode(s: &str) -> Result<Graph, GraphError> {
    let s = s.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    let bad = |m: &str| GraphError::MalformedGraph6(format!("{m}: {s:?}"));
    let first = *bytes.first().ok_or_else(|| bad("empty string"))?;
    if !(63..=126).contains(&first) {
        return Err(bad("size byte out of range"));
    }
    if first == 126 {
        return Err(bad("orders above 62 are not supported"));
    }
    let n = (first - 63) as usize;
    if n == 0 || n > MAX_ORDER {
        return Err(GraphError::BadOrder(n));
    }
    let bits = n * (n - 1) / 2;
    let need = bits.div_ceil(6);
    let body = &bytes[1..];
    if body.len() != need {
        return Err(bad("wrong length"));
    }
    if body.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(bad("byte out of range"));
    }
    let mut g = Graph::empty(n);
    let mut idx = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[idx / 6] - 63;
            if byte >> (5 - idx % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            idx += 1;
        }
    }
    if !bits.is_multiple_of(6) {
        let last = body[need - 1] - 63;
        if last & ((1u8 << (6 - bits % 6)) - 1) != 0 {
            return Err(bad("nonzero padding"));
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_strings() {
        assert_eq!(graph6_encode(&Graph::complete(3)), "Bw");
        assert_eq!(graph6_decode("Bw").unwrap(), Graph::complete(3));
        assert_eq!(graph6_encode(&Graph::cycle(5)), "Dhc");
        assert_eq!(graph6_encode(&Graph::empty(1)), "@");
        assert_eq!(graph6_encode(&Graph::path(4)), "Ch");
    }

    #[test]
    fn malformed() {
        assert!(graph6_decode("").is_err());
        assert!(graph6_decode("Bww").is_err());
        assert!(graph6_decode("B").is_err());
        assert!(graph6_decode("B\x7f").is_err());
        assert!(graph6_decode("Bx").is_err());
    }
}
