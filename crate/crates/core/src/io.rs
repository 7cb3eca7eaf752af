//! Text formats. Everything here is 1-indexed; conversion to the 0-indexed
//! in-memory form happens only in this module.
//!
//! Network file:
//! ```text
//! rsm v1 N=<n> S=<s> C=<c>
//! <src> <dst> <type>
//! ```
//! Partition file: `<vertex> <subgraph>` per line. Labels file:
//! `<vertex> <cluster>` per line. Blank lines and lines starting with `#`
//! are ignored on input.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Result, RsmError};
use crate::network::TypedNetwork;
use crate::params::RsmParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkHeader {
    pub n_vertices: usize,
    pub n_subgraphs: usize,
    pub n_types: usize,
}

fn parse_err(path: &str, line: usize, message: impl Into<String>) -> RsmError {
    RsmError::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_fields<const N: usize>(path: &str, line: usize, text: &str) -> Result<[usize; N]> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != N {
        return Err(parse_err(
            path,
            line,
            format!("expected {N} fields, found {}", fields.len()),
        ));
    }
    let mut out = [0usize; N];
    for (slot, field) in out.iter_mut().zip(fields) {
        *slot = field
            .parse()
            .map_err(|_| parse_err(path, line, format!("not a non-negative integer: {field:?}")))?;
    }
    Ok(out)
}

fn parse_header(path: &str, line: usize, text: &str) -> Result<NetworkHeader> {
    let mut fields = text.split_whitespace();
    if fields.next() != Some("rsm") || fields.next() != Some("v1") {
        return Err(parse_err(path, line, "header must start with `rsm v1`"));
    }
    let mut values = [None; 3];
    for field in fields {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(path, line, format!("bad header field {field:?}")))?;
        let slot = match key {
            "N" => 0,
            "S" => 1,
            "C" => 2,
            _ => return Err(parse_err(path, line, format!("unknown header key {key:?}"))),
        };
        let v: usize = value
            .parse()
            .map_err(|_| parse_err(path, line, format!("bad value for {key}: {value:?}")))?;
        values[slot] = Some(v);
    }
    match values {
        [Some(n_vertices), Some(n_subgraphs), Some(n_types)] => {
            if n_subgraphs == 0 || n_types == 0 {
                return Err(parse_err(path, line, "S and C must be >= 1"));
            }
            Ok(NetworkHeader {
                n_vertices,
                n_subgraphs,
                n_types,
            })
        }
        _ => Err(parse_err(path, line, "header needs N=, S= and C=")),
    }
}

/// Parses a network file into its header and dense type matrix.
pub fn parse_network(text: &str, path: &str) -> Result<(NetworkHeader, Array2<u32>)> {
    let mut lines = content_lines(text);
    let (hline, htext) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "missing header"))?;
    let header = parse_header(path, hline, htext)?;
    let n = header.n_vertices;
    let mut x = Array2::<u32>::zeros((n, n));
    for (line, text) in lines {
        let [src, dst, code] = parse_fields::<3>(path, line, text)?;
        if src == 0 || src > n || dst == 0 || dst > n {
            return Err(parse_err(path, line, format!("vertex outside 1..={n}")));
        }
        if src == dst {
            return Err(parse_err(path, line, "self loops are not allowed"));
        }
        if code == 0 || code > header.n_types {
            return Err(parse_err(
                path,
                line,
                format!("type {code} outside 1..={}", header.n_types),
            ));
        }
        if x[[src - 1, dst - 1]] != 0 {
            return Err(parse_err(
                path,
                line,
                format!("duplicate edge {src} -> {dst}"),
            ));
        }
        x[[src - 1, dst - 1]] = code as u32;
    }
    Ok((header, x))
}

/// Parses `vertex value` lines covering every vertex in `1..=n` exactly
/// once, with values in `1..=max_value`. Returns 0-indexed values.
fn parse_assignment(
    text: &str,
    path: &str,
    n: usize,
    max_value: usize,
    what: &str,
) -> Result<Vec<usize>> {
    let mut out = vec![None; n];
    let mut last = 0;
    for (line, text) in content_lines(text) {
        last = line;
        let [vertex, value] = parse_fields::<2>(path, line, text)?;
        if vertex == 0 || vertex > n {
            return Err(parse_err(
                path,
                line,
                format!("vertex {vertex} outside 1..={n}"),
            ));
        }
        if value == 0 || value > max_value {
            return Err(parse_err(
                path,
                line,
                format!("{what} {value} outside 1..={max_value}"),
            ));
        }
        if out[vertex - 1].replace(value - 1).is_some() {
            return Err(parse_err(
                path,
                line,
                format!("vertex {vertex} listed twice"),
            ));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| parse_err(path, last, format!("vertex {} missing", i + 1))))
        .collect()
}

/// Parses a partition file for `n` vertices and `s` subgraphs.
pub fn parse_partition(text: &str, path: &str, n: usize, s: usize) -> Result<Vec<usize>> {
    parse_assignment(text, path, n, s, "subgraph")
}

/// Parses a labels file; the vertex set must be exactly `1..=n` for some n.
pub fn parse_labels(text: &str, path: &str) -> Result<Vec<usize>> {
    let n = content_lines(text).count();
    parse_assignment(text, path, n, usize::MAX, "cluster")
}

pub fn parse_network_pair(
    network_text: &str,
    network_path: &str,
    partition_text: &str,
    partition_path: &str,
) -> Result<TypedNetwork> {
    let (header, x) = parse_network(network_text, network_path)?;
    let labels = parse_partition(
        partition_text,
        partition_path,
        header.n_vertices,
        header.n_subgraphs,
    )?;
    TypedNetwork::new(header.n_types, header.n_subgraphs, x, labels)
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| RsmError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| RsmError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_network(network: &Path, partition: &Path) -> Result<TypedNetwork> {
    parse_network_pair(
        &read_file(network)?,
        &network.display().to_string(),
        &read_file(partition)?,
        &partition.display().to_string(),
    )
}

pub fn format_network(net: &TypedNetwork) -> String {
    let mut out = format!(
        "rsm v1 N={} S={} C={}\n",
        net.n_vertices(),
        net.n_subgraphs(),
        net.n_types()
    );
    for e in net.edges() {
        let _ = writeln!(out, "{} {} {}", e.src + 1, e.dst + 1, e.edge_type);
    }
    out
}

pub fn format_partition(net: &TypedNetwork) -> String {
    format_labels(net.subgraph_labels())
}

/// `vertex label` lines, both 1-indexed.
pub fn format_labels(labels: &[usize]) -> String {
    let mut out = String::new();
    for (i, &l) in labels.iter().enumerate() {
        let _ = writeln!(out, "{} {}", i + 1, l + 1);
    }
    out
}

pub fn format_elbo_trace(trace: &[f64]) -> String {
    let mut out = String::from("iteration,elbo\n");
    for (i, v) in trace.iter().enumerate() {
        let _ = writeln!(out, "{i},{v:.12}");
    }
    out
}

/// Posterior-mean report: alpha rows, gamma (natural and log10 scale)
/// and one pi vector per cluster pair.
pub fn format_params_report(means: &RsmParams<f64>) -> String {
    let mut out = String::new();
    let row = |out: &mut String, label: String, values: &mut dyn Iterator<Item = f64>| {
        let cells: Vec<String> = values.map(|v| format!("{v:.9}")).collect();
        let _ = writeln!(out, "{label} {}", cells.join(" "));
    };
    let _ = writeln!(
        out,
        "# posterior means: S={} K={} C={}",
        means.n_subgraphs(),
        means.n_clusters(),
        means.n_types()
    );
    let _ = writeln!(out, "[alpha] # row s: cluster proportions in subgraph s");
    for (s, r) in means.alpha.outer_iter().enumerate() {
        row(&mut out, format!("s={}", s + 1), &mut r.iter().copied());
    }
    let _ = writeln!(
        out,
        "[gamma] # row r: edge probability from subgraph r to s"
    );
    for (s, r) in means.gamma.outer_iter().enumerate() {
        row(&mut out, format!("r={}", s + 1), &mut r.iter().copied());
    }
    let _ = writeln!(out, "[log10_gamma]");
    for (s, r) in means.gamma.outer_iter().enumerate() {
        row(
            &mut out,
            format!("r={}", s + 1),
            &mut r.iter().map(|v| v.log10()),
        );
    }
    let _ = writeln!(out, "[pi] # type distribution from cluster k to cluster l");
    let (k, _, _) = means.pi.dim();
    for a in 0..k {
        for b in 0..k {
            let slice = means.pi.slice(ndarray::s![a, b, ..]);
            row(
                &mut out,
                format!("k={} l={}", a + 1, b + 1),
                &mut slice.iter().copied(),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_network;

    #[test]
    fn network_round_trip() {
        let net = random_network(12, 3, 3, 0.3, 5);
        let back =
            parse_network_pair(&format_network(&net), "n", &format_partition(&net), "p").unwrap();
        assert_eq!(back, net);
    }

    #[test]
    fn header_errors() {
        assert!(parse_network("", "f").is_err());
        assert!(parse_network("rsm v2 N=1 S=1 C=1\n", "f").is_err());
        assert!(parse_network("rsm v1 N=1 S=1\n", "f").is_err());
        assert!(parse_network("rsm v1 N=1 S=1 C=0\n", "f").is_err());
    }

    #[test]
    fn edge_errors_name_the_line() {
        let text = "rsm v1 N=3 S=1 C=2\n1 2 1\n\n2 3 5\n";
        match parse_network(text, "net.txt") {
            Err(RsmError::Parse { line, path, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(path, "net.txt");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_network("rsm v1 N=3 S=1 C=2\n1 2 1\n1 2 2\n", "f").is_err());
        assert!(parse_network("rsm v1 N=3 S=1 C=2\n1 1 1\n", "f").is_err());
        assert!(parse_network("rsm v1 N=3 S=1 C=2\n1 4 1\n", "f").is_err());
    }

    #[test]
    fn partition_errors() {
        let err = parse_partition("1 1\n0 1\n", "part.txt", 2, 1).unwrap_err();
        assert!(err.to_string().contains("part.txt:2"), "{err}");
        assert!(parse_partition("1 1\n2 3\n", "p", 2, 2).is_err());
        assert!(parse_partition("1 1\n1 1\n", "p", 2, 1).is_err());
        assert!(parse_partition("1 1\n", "p", 2, 1).is_err());
        assert_eq!(
            parse_partition("# c\n2 2\n1 1\n", "p", 2, 2).unwrap(),
            vec![0, 1]
        );
    }

    #[test]
    fn labels_round_trip() {
        let labels = vec![2, 0, 1, 1];
        assert_eq!(parse_labels(&format_labels(&labels), "l").unwrap(), labels);
        assert!(parse_labels("1 1\n3 1\n", "l").is_err());
    }
}
