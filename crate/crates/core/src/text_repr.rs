//! The seven textual encodings and parsers for three of them.
//!
//! Every rendering opens with a header sentence naming all vertices and
//! hyperedges, followed by a format-specific body. Lines are joined with `\n`
//! and there is no trailing newline. Matrix rows are written `[a,b,...]` and
//! joined by `",\n"` inside the outer brackets.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{HyperedgeId, Hypergraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TextFormat {
    #[serde(rename = "LO-Inc")]
    LoInc,
    #[serde(rename = "N-Pair")]
    NPair,
    #[serde(rename = "Adj-Mat")]
    AdjMat,
    #[serde(rename = "HO-Neigh")]
    HoNeigh,
    #[serde(rename = "HO-Inc")]
    HoInc,
    #[serde(rename = "N-Set")]
    NSet,
    #[serde(rename = "Inc-Mat")]
    IncMat,
}

impl TextFormat {
    pub const ALL: [TextFormat; 7] = [
        TextFormat::LoInc,
        TextFormat::NPair,
        TextFormat::AdjMat,
        TextFormat::HoNeigh,
        TextFormat::HoInc,
        TextFormat::NSet,
        TextFormat::IncMat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TextFormat::LoInc => "LO-Inc",
            TextFormat::NPair => "N-Pair",
            TextFormat::AdjMat => "Adj-Mat",
            TextFormat::HoNeigh => "HO-Neigh",
            TextFormat::HoInc => "HO-Inc",
            TextFormat::NSet => "N-Set",
            TextFormat::IncMat => "Inc-Mat",
        }
    }

    /// Lowercase name, used in file names and sample ids.
    pub fn slug(self) -> String {
        self.name().to_ascii_lowercase()
    }
}

impl fmt::Display for TextFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TextFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TextFormat::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::parse(0, format!("unknown text format `{s}`")))
    }
}

/// `oxford`: "a, b, and c" (two items: "a and b"); otherwise "a, b, c".
pub fn english_join<S: AsRef<str>>(items: &[S], oxford: bool) -> Result<String> {
    let items: Vec<&str> = items.iter().map(AsRef::as_ref).collect();
    Ok(match items.as_slice() {
        [] => return Err(Error::contract("cannot join an empty list")),
        [one] => one.to_string(),
        _ if !oxford => items.join(", "),
        [a, b] => format!("{a} and {b}"),
        [init @ .., last] => format!("{}, and {last}", init.join(", ")),
    })
}

fn names<T: fmt::Display>(ids: impl IntoIterator<Item = T>) -> Vec<String> {
    ids.into_iter().map(|x| x.to_string()).collect()
}

#[derive(Clone, Copy)]
enum HeaderStyle {
    Plain,
    Among,
    CommaAmong,
}

fn header(h: &Hypergraph, name: &str, style: HeaderStyle) -> String {
    let vertices = english_join(&names(h.vertices()), true).expect("at least one vertex");
    let edges = match english_join(&names(h.edge_ids()), true) {
        Ok(list) => format!("hyperedges {list}"),
        Err(_) => "no hyperedges".to_string(),
    };
    let joiner = match style {
        HeaderStyle::Plain => " and ",
        HeaderStyle::Among => " and among ",
        HeaderStyle::CommaAmong => ", and among ",
    };
    format!("{name} describes a hypergraph among vertices {vertices}{joiner}{edges}.")
}

const N_PAIR_PREAMBLE: &str =
    "In an undirected hypergraph, (i,j) means that vertex i and vertex j are connected with an undirected hyperedge. ";
const N_SET_PREAMBLE: &str = "In an undirected hypergraph, (i, j, k) means that vertex i, vertex j, and vertex k are connected with an undirected hyperedge. ";

pub fn render_text(h: &Hypergraph, fmt: TextFormat) -> String {
    render_text_named(h, fmt, "G")
}

/// Same as [`render_text`] with a different graph name (`H` for the first
/// hypergraph of an isomorphism question).
pub fn render_text_named(h: &Hypergraph, fmt: TextFormat, name: &str) -> String {
    let mut lines: Vec<String> = Vec::new();
    match fmt {
        TextFormat::LoInc => {
            lines.push(header(h, name, HeaderStyle::Plain));
            lines.push("In this hypergraph:".into());
            for v in h.vertices() {
                let nb = h.neighbors(v).expect("vertex in range");
                lines.push(format!("Vertex {v} is connected to {}.", vertex_list(nb)));
            }
        }
        TextFormat::NPair => {
            lines.push(format!("{N_PAIR_PREAMBLE}{}", header(h, name, HeaderStyle::Plain)));
            let pairs: Vec<String> = h
                .co_occurrences()
                .keys()
                .map(|&(u, v)| format!("({}, {})", VertexId(u), VertexId(v)))
                .collect();
            let body = if pairs.is_empty() { "none".to_string() } else { pairs.join(" ") };
            lines.push(format!("The connection relation between vertices in {name} are: {body}."));
        }
        TextFormat::AdjMat => {
            lines.push(header(h, name, HeaderStyle::Among));
            lines.push("The adjacency matrix between the vertices of the hypergraph is".into());
            let co = h.co_occurrences();
            let n = h.num_vertices();
            let rows = (0..n).map(|u| {
                (0..n)
                    .map(|v| co.contains_key(&(u.min(v), u.max(v))) as u8)
                    .collect::<Vec<_>>()
            });
            lines.push(matrix(rows));
        }
        TextFormat::HoNeigh => {
            lines.push(header(h, name, HeaderStyle::Plain));
            lines.push("In this hypergraph:".into());
            for v in h.vertices() {
                let inc = h.incident_edges(v).expect("vertex in range");
                let list = match inc {
                    [] => "no hyperedges".to_string(),
                    [e] => format!("hyperedge {}", HyperedgeId(*e)),
                    _ => format!("hyperedges {}", plain_join(inc.iter().map(|&e| HyperedgeId(e)))),
                };
                lines.push(format!("Vertex {v} is connected to {list}."));
            }
            for (j, e) in h.edges().iter().enumerate() {
                lines.push(format!(
                    "Hyperedge {} is connected to vertices {}.",
                    HyperedgeId(j),
                    plain_join(e.iter().map(|&v| VertexId(v)))
                ));
            }
        }
        TextFormat::HoInc => {
            lines.push(header(h, name, HeaderStyle::Among));
            lines.push("In this hypergraph:".into());
            for v in h.vertices() {
                let inc = h.incident_edges(v).expect("vertex in range");
                if inc.is_empty() {
                    lines.push(format!("Vertex {v} is connected to no vertices."));
                    continue;
                }
                let clauses: Vec<String> = inc
                    .iter()
                    .map(|&j| {
                        let others = h.edges()[j].iter().filter(|&&x| x != v.0).map(|&x| VertexId(x));
                        format!("to {} with hyperedge {}", vertex_list(others), HyperedgeId(j))
                    })
                    .collect();
                lines.push(format!("Vertex {v} is connected {}.", clauses.join(", ")));
            }
        }
        TextFormat::NSet => {
            lines.push(format!("{N_SET_PREAMBLE}{}", header(h, name, HeaderStyle::CommaAmong)));
            let tuples: Vec<String> = h
                .edges()
                .iter()
                .map(|e| format!("({})", plain_join(e.iter().map(|&v| VertexId(v)))))
                .collect();
            let body = if tuples.is_empty() { "none".to_string() } else { tuples.join(", ") };
            lines.push(format!("The hyperedges in {name} are: {body}."));
        }
        TextFormat::IncMat => {
            lines.push(header(h, name, HeaderStyle::Plain));
            lines.push("The incidence matrix of the hypergraph is".into());
            let rows = h.vertices().map(|v| {
                (0..h.num_edges())
                    .map(|j| h.edge_contains(j, v.0) as u8)
                    .collect::<Vec<_>>()
            });
            lines.push(matrix(rows));
        }
    }
    lines.join("\n")
}

fn plain_join<T: fmt::Display>(ids: impl IntoIterator<Item = T>) -> String {
    names(ids).join(", ")
}

/// "vertex v3", "vertices v1, v2" or "no vertices".
fn vertex_list(vs: impl IntoIterator<Item = VertexId>) -> String {
    let vs: Vec<String> = names(vs);
    match vs.len() {
        0 => "no vertices".into(),
        1 => format!("vertex {}", vs[0]),
        _ => format!("vertices {}", vs.join(", ")),
    }
}

fn matrix(rows: impl Iterator<Item = Vec<u8>>) -> String {
    let rows: Vec<String> = rows
        .map(|r| format!("[{}]", r.iter().map(u8::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(",\n"))
}

static HEADER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(\w+) describes a hypergraph among vertices (.+?),? and (?:among )?(?:hyperedges (.+?)|no hyperedges)\.")
        .unwrap()
});
static VERTEX_TOKEN: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\bv(\d+)\b").unwrap());
static EDGE_TOKEN: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\be(\d+)\b").unwrap());

/// Graph name, vertex count and hyperedge count read from the header
/// sentence of any rendering.
pub fn parse_header(text: &str) -> Result<(String, usize, usize)> {
    let caps = HEADER
        .captures(text)
        .ok_or_else(|| Error::parse(0, "missing `describes a hypergraph among vertices` header"))?;
    let vlist = caps.get(2).unwrap();
    let n = dense_ids(&VERTEX_TOKEN, vlist.as_str(), vlist.start())?;
    let m = match caps.get(3) {
        Some(elist) => dense_ids(&EDGE_TOKEN, elist.as_str(), elist.start())?,
        None => 0,
    };
    Ok((caps[1].to_string(), n, m))
}

/// Checks that the tokens read `0, 1, ..., k-1` and returns `k`.
fn dense_ids(token: &Regex, list: &str, offset: usize) -> Result<usize> {
    let mut count = 0;
    for cap in token.captures_iter(list) {
        let id: usize = cap[1].parse().map_err(|_| Error::parse(offset, "id out of range"))?;
        if id != count {
            return Err(Error::parse(
                offset + cap.get(0).unwrap().start(),
                format!("expected id {count}, found {id}"),
            ));
        }
        count += 1;
    }
    if count == 0 {
        return Err(Error::parse(offset, "empty id list"));
    }
    Ok(count)
}

fn build(n: usize, edges: Vec<Vec<usize>>, at: usize) -> Result<Hypergraph> {
    Hypergraph::new(n, edges).map_err(|e| Error::parse(at, e.to_string()))
}

static NSET_BODY: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"The hyperedges in \w+ are: (.*)\.$").unwrap());
static TUPLE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\(([^()]*)\)").unwrap());

pub fn parse_nset(text: &str) -> Result<Hypergraph> {
    let (_, n, m) = parse_header(text)?;
    let line = text.lines().last().unwrap_or_default();
    let at = text.len() - line.len();
    let body = NSET_BODY
        .captures(line)
        .ok_or_else(|| Error::parse(at, "missing `The hyperedges in G are:` line"))?
        .get(1)
        .unwrap();
    let mut edges = Vec::new();
    if body.as_str() != "none" {
        let mut expect = 0;
        for cap in TUPLE.captures_iter(body.as_str()) {
            let whole = cap.get(0).unwrap();
            let gap = &body.as_str()[expect..whole.start()];
            if !(gap.is_empty() && expect == 0 || gap == ", ") {
                return Err(Error::parse(at + body.start() + expect, "expected `, ` between tuples"));
            }
            edges.push(vertex_tokens(&cap[1], at + body.start() + whole.start())?);
            expect = whole.end();
        }
        if expect != body.len() {
            return Err(Error::parse(at + body.start() + expect, "trailing text after tuples"));
        }
    }
    if edges.len() != m {
        return Err(Error::parse(at, format!("header names {m} hyperedges, body lists {}", edges.len())));
    }
    build(n, edges, at)
}

/// Parses a comma list of `v<i>` tokens.
fn vertex_tokens(list: &str, at: usize) -> Result<Vec<usize>> {
    list.split(',')
        .map(|tok| {
            tok.trim()
                .strip_prefix('v')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::parse(at, format!("expected `v<i>`, found `{}`", tok.trim())))
        })
        .collect()
}

static MATRIX_ROW: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[([01](?:,[01])*)?\]").unwrap());

pub fn parse_incmat(text: &str) -> Result<Hypergraph> {
    let (_, n, m) = parse_header(text)?;
    let marker = "The incidence matrix of the hypergraph is\n";
    let start = text
        .find(marker)
        .ok_or_else(|| Error::parse(0, "missing incidence matrix line"))?
        + marker.len();
    let body = &text[start..];
    let inner = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| Error::parse(start, "matrix must be wrapped in `[...]`"))?;
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut expect = 0;
    for cap in MATRIX_ROW.captures_iter(inner) {
        let whole = cap.get(0).unwrap();
        let gap = &inner[expect..whole.start()];
        if !(gap.is_empty() && expect == 0 || gap == ",\n") {
            return Err(Error::parse(start + 1 + expect, "expected `,\\n` between rows"));
        }
        let row: Vec<u8> = cap
            .get(1)
            .map(|c| c.as_str().split(',').map(|x| if x == "1" { 1 } else { 0 }).collect())
            .unwrap_or_default();
        if row.len() != m {
            return Err(Error::parse(start + 1 + whole.start(), format!("row has {} entries, expected {m}", row.len())));
        }
        rows.push(row);
        expect = whole.end();
    }
    if expect != inner.len() || rows.len() != n {
        return Err(Error::parse(start + 1 + expect, format!("expected {n} matrix rows")));
    }
    let edges = (0..m).map(|j| (0..n).filter(|&v| rows[v][j] == 1).collect()).collect();
    build(n, edges, start)
}

static HYPEREDGE_LINE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^Hyperedge e(\d+) is connected to vertices (.+)\.$").unwrap());
static VERTEX_LINE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^Vertex v(\d+) is connected to (?:no hyperedges|hyperedge (e\d+)|hyperedges (.+))\.$").unwrap()
});

/// Reads the hyperedge block and cross-checks it against the vertex block.
pub fn parse_honeigh(text: &str) -> Result<Hypergraph> {
    let (_, n, m) = parse_header(text)?;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut incidence: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut offset = 0;
    for (i, line) in text.split('\n').enumerate() {
        let at = offset;
        offset += line.len() + 1;
        if i < 2 {
            continue;
        }
        if let Some(cap) = HYPEREDGE_LINE.captures(line) {
            if cap[1].parse::<usize>().ok() != Some(edges.len()) {
                return Err(Error::parse(at, format!("expected hyperedge e{}", edges.len())));
            }
            edges.push(vertex_tokens(&cap[2], at)?);
        } else if let Some(cap) = VERTEX_LINE.captures(line) {
            let v: usize = cap[1].parse().map_err(|_| Error::parse(at, "bad vertex id"))?;
            if v >= n || incidence[v].is_some() {
                return Err(Error::parse(at, format!("unexpected line for v{v}")));
            }
            let list = cap.get(2).or(cap.get(3)).map(|c| c.as_str()).unwrap_or("");
            let ids = list
                .split(", ")
                .filter(|s| !s.is_empty())
                .map(|tok| {
                    tok.strip_prefix('e')
                        .and_then(|d| d.parse().ok())
                        .ok_or_else(|| Error::parse(at, format!("expected `e<j>`, found `{tok}`")))
                })
                .collect::<Result<Vec<usize>>>()?;
            incidence[v] = Some(ids);
        } else {
            return Err(Error::parse(at, format!("unrecognised line `{line}`")));
        }
    }
    if edges.len() != m {
        return Err(Error::parse(0, format!("header names {m} hyperedges, found {}", edges.len())));
    }
    let h = build(n, edges, 0)?;
    for v in h.vertices() {
        let listed = incidence[v.0].as_deref();
        if listed != Some(h.incident_edges(v)?) {
            return Err(Error::parse(0, format!("vertex block disagrees with hyperedge block at {v}")));
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::{arb_hypergraph, h_star};
    use proptest::prelude::*;

    #[test]
    fn join_examples() {
        assert_eq!(english_join(&["e0", "e1", "e2"], true).unwrap(), "e0, e1, and e2");
        assert_eq!(english_join(&["v2", "v3"], false).unwrap(), "v2, v3");
        assert_eq!(english_join(&["e0", "e1"], true).unwrap(), "e0 and e1");
        assert_eq!(english_join(&["v0"], true).unwrap(), "v0");
        assert!(english_join::<&str>(&[], true).is_err());
    }

    #[test]
    fn spot_checks_on_reference() {
        let h = h_star();
        assert!(render_text(&h, TextFormat::NSet)
            .ends_with("The hyperedges in G are: (v0, v1, v2), (v1, v2, v3), (v2, v3, v4)."));
        assert!(render_text(&h, TextFormat::HoNeigh).contains("Vertex v2 is connected to hyperedges e0, e1, e2."));
        let inc = render_text(&h, TextFormat::IncMat);
        assert!(inc.ends_with("[[1,0,0],\n[1,1,0],\n[1,1,1],\n[0,1,1],\n[0,0,1]]"));
    }

    #[test]
    fn singular_and_isolated_phrasing() {
        let h = Hypergraph::new(4, vec![vec![0, 1], vec![1, 2, 3]]).unwrap();
        let lo = render_text(&h, TextFormat::LoInc);
        assert!(lo.contains("Vertex v0 is connected to vertex v1."));
        let ho = render_text(&h, TextFormat::HoInc);
        assert!(ho.contains("Vertex v1 is connected to vertex v0 with hyperedge e0, to vertices v2, v3 with hyperedge e1."));
        let iso = Hypergraph::new(3, vec![vec![0, 1]]).unwrap();
        assert!(render_text(&iso, TextFormat::LoInc).ends_with("Vertex v2 is connected to no vertices."));
        assert!(render_text(&iso, TextFormat::HoNeigh).contains("Vertex v2 is connected to no hyperedges."));
        assert!(render_text(&iso, TextFormat::HoInc).ends_with("Vertex v2 is connected to no vertices."));
        assert_eq!(parse_honeigh(&render_text(&iso, TextFormat::HoNeigh)).unwrap(), iso);
    }

    #[test]
    fn two_hyperedge_header() {
        let h = Hypergraph::new(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert!(render_text(&h, TextFormat::LoInc)
            .starts_with("G describes a hypergraph among vertices v0 and v1 and hyperedges e0 and e1."));
        assert_eq!(parse_header(&render_text(&h, TextFormat::NSet)).unwrap(), ("G".into(), 2, 2));
    }

    #[test]
    fn named_rendering() {
        let text = render_text_named(&h_star(), TextFormat::NSet, "H");
        assert!(text.contains("H describes a hypergraph"));
        assert!(text.contains("The hyperedges in H are:"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_nset("garbage"), Err(Error::Parse { .. })));
        let good = render_text(&h_star(), TextFormat::NSet);
        assert!(parse_nset(&good.replace("(v1, v2, v3)", "(v1, v2, v3")).is_err());
        assert!(parse_nset(&good.replace("(v2, v3, v4)", "(v2, v9, v4)")).is_err());
        let inc = render_text(&h_star(), TextFormat::IncMat);
        assert!(parse_incmat(&inc.replace("[1,1,0]", "[1,1]")).is_err());
        let ho = render_text(&h_star(), TextFormat::HoNeigh);
        assert!(parse_honeigh(&ho.replace("Vertex v4 is connected to hyperedge e2.", "Vertex v4 is connected to hyperedge e1."))
            .is_err());
    }

    #[test]
    fn formats_round_trip_names() {
        for f in TextFormat::ALL {
            assert_eq!(f.name().parse::<TextFormat>().unwrap(), f);
            assert_eq!(serde_json::to_string(&f).unwrap(), format!("\"{}\"", f.name()));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn parsers_round_trip(h in arb_hypergraph(12, 14)) {
            prop_assert_eq!(parse_nset(&render_text(&h, TextFormat::NSet)).unwrap(), h.clone());
            prop_assert_eq!(parse_incmat(&render_text(&h, TextFormat::IncMat)).unwrap(), h.clone());
            prop_assert_eq!(parse_honeigh(&render_text(&h, TextFormat::HoNeigh)).unwrap(), h);
        }

        #[test]
        fn headers_recover_counts(h in arb_hypergraph(12, 14)) {
            for f in TextFormat::ALL {
                let (_, n, m) = parse_header(&render_text(&h, f)).unwrap();
                prop_assert_eq!((n, m), (h.num_vertices(), h.num_edges()));
            }
        }

        #[test]
        fn npair_matches_clique_expansion(h in arb_hypergraph(10, 10)) {
            let text = render_text(&h, TextFormat::NPair);
            let body = text.lines().last().unwrap();
            let pairs: Vec<(usize, usize)> = TUPLE
                .captures_iter(body)
                .map(|c| {
                    let vs = vertex_tokens(&c[1], 0).unwrap();
                    (vs[0], vs[1])
                })
                .collect();
            let expected: Vec<(usize, usize)> = h.co_occurrences().keys().copied().collect();
            prop_assert_eq!(pairs, expected);
        }
    }
}

#[cfg(test)]
mod golden {
    use super::*;
    use crate::hypergraph::tests::h_star;

    #[test]
    fn reference_renderings_match_fixtures() {
        for f in TextFormat::ALL {
            let path = format!("{}/fixtures/text/{}.txt", env!("CARGO_MANIFEST_DIR"), f.slug());
            let expected = std::fs::read_to_string(&path).unwrap();
            assert_eq!(render_text(&h_star(), f), expected, "{path}");
        }
    }
}
