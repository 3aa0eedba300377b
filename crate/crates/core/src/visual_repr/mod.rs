//! The five visual encodings, written as SVG.
//!
//! Elements carry CSS classes so drawings can be audited mechanically:
//! `vertex`/`vlabel` for vertices, `hnode`/`elabel` for hyperedge squares and
//! labels, `incidence` for membership lines, `hull` and `pair-edge` for
//! enclosures, `clique`/`plabel` for clique-expansion segments and their
//! labels.

mod hull;
mod layout;

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use hull::{centroid, convex_hull, is_convex_ccw};
pub use layout::{fit, layout_rows, layout_shell, layout_spring, layout_star, layout_stress, Layout, Point};

use crate::error::{Error, Result};
use crate::hypergraph::{HyperedgeId, Hypergraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VisualFormat {
    #[serde(rename = "Enc-Hy")]
    EncHy,
    #[serde(rename = "Bi-Inc")]
    BiInc,
    #[serde(rename = "Sh-Inc")]
    ShInc,
    #[serde(rename = "St-Inc")]
    StInc,
    #[serde(rename = "Cli-Exp")]
    CliExp,
}

impl VisualFormat {
    pub const ALL: [VisualFormat; 5] = [
        VisualFormat::EncHy,
        VisualFormat::BiInc,
        VisualFormat::ShInc,
        VisualFormat::StInc,
        VisualFormat::CliExp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VisualFormat::EncHy => "Enc-Hy",
            VisualFormat::BiInc => "Bi-Inc",
            VisualFormat::ShInc => "Sh-Inc",
            VisualFormat::StInc => "St-Inc",
            VisualFormat::CliExp => "Cli-Exp",
        }
    }

    pub fn slug(self) -> String {
        self.name().to_ascii_lowercase()
    }
}

impl fmt::Display for VisualFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VisualFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VisualFormat::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::parse(0, format!("unknown visual format `{s}`")))
    }
}

pub const PALETTE: [&str; 12] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#9a6324", "#469990", "#800000",
    "#808000", "#000075",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RenderConfig {
    pub width: f64,
    pub height: f64,
    pub seed: u64,
    pub palette: Vec<String>,
}

impl RenderConfig {
    pub fn new(seed: u64) -> Self {
        RenderConfig {
            width: 1400.0,
            height: 1100.0,
            seed,
            palette: PALETTE.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn color(&self, edge: usize) -> &str {
        &self.palette[edge % self.palette.len()]
    }

    fn check(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0) || self.palette.is_empty() {
            return Err(Error::contract("render config needs positive size and a nonempty palette"));
        }
        Ok(())
    }
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig::new(0)
    }
}

const VERTEX_RADIUS: f64 = 20.0;
const SQUARE_HALF: f64 = 18.0;
const FONT_SIZE: u32 = 14;
const MARGIN: f64 = 80.0;
const SPRING_K: f64 = 2.0;
const SPRING_ITERATIONS: usize = 100;
const SPRING_SCALE: f64 = 3.0;

/// Two-decimal coordinate without a negative zero.
fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn header(out: &mut String, cfg: &RenderConfig) {
    let (w, h) = (num(cfg.width), num(cfg.height));
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
}

pub fn render_svg(h: &Hypergraph, fmt: VisualFormat, cfg: &RenderConfig) -> Result<String> {
    cfg.check()?;
    let mut out = String::new();
    header(&mut out, cfg);
    draw(&mut out, h, fmt, cfg, (0.0, 0.0, cfg.width, cfg.height));
    out.push_str("</svg>\n");
    Ok(out)
}

/// Two hypergraphs side by side (left titled `H`, right titled `G`), laid out
/// with the same seed.
pub fn render_svg_pair(a: &Hypergraph, b: &Hypergraph, fmt: VisualFormat, cfg: &RenderConfig) -> Result<String> {
    cfg.check()?;
    let mut out = String::new();
    header(&mut out, cfg);
    let half = cfg.width / 2.0;
    for (i, (graph, title)) in [(a, "H"), (b, "G")].into_iter().enumerate() {
        let x0 = half * i as f64;
        let _ = writeln!(out, "<g class=\"panel\" id=\"panel-{title}\">");
        let _ = writeln!(
            out,
            "<text class=\"title\" x=\"{}\" y=\"40.00\" font-size=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\">{title}</text>",
            num(x0 + half / 2.0)
        );
        draw(&mut out, graph, fmt, cfg, (x0, 0.0, half, cfg.height));
        out.push_str("</g>\n");
    }
    let _ = writeln!(
        out,
        "<line class=\"divider\" x1=\"{0}\" y1=\"0.00\" x2=\"{0}\" y2=\"{1}\" stroke=\"#cccccc\" stroke-width=\"2\"/>",
        num(half),
        num(cfg.height)
    );
    out.push_str("</svg>\n");
    Ok(out)
}

type Frame = (f64, f64, f64, f64);

fn draw(out: &mut String, h: &Hypergraph, fmt: VisualFormat, cfg: &RenderConfig, frame: Frame) {
    match fmt {
        VisualFormat::EncHy => draw_enclosures(out, h, cfg, frame),
        VisualFormat::CliExp => draw_clique(out, h, cfg, frame),
        VisualFormat::BiInc | VisualFormat::ShInc | VisualFormat::StInc => draw_incidence(out, h, fmt, cfg, frame),
    }
}

fn clique_pairs(h: &Hypergraph) -> Vec<(usize, usize)> {
    h.co_occurrences().keys().copied().collect()
}

fn vertex_nodes(out: &mut String, pos: &[Point]) {
    for (v, p) in pos.iter().enumerate() {
        let _ = writeln!(
            out,
            "<circle class=\"vertex\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>",
            num(p.0),
            num(p.1),
            num(VERTEX_RADIUS)
        );
        label(out, "vlabel", &VertexId(v).to_string(), *p, "white");
    }
}

fn label(out: &mut String, class: &str, text: &str, p: Point, fill: &str) {
    let _ = writeln!(
        out,
        "<text class=\"{class}\" x=\"{}\" y=\"{}\" font-size=\"{FONT_SIZE}\" font-family=\"sans-serif\" text-anchor=\"middle\" dominant-baseline=\"central\" fill=\"{fill}\">{text}</text>",
        num(p.0),
        num(p.1)
    );
}

/// White box with a dark border behind a hyperedge label.
fn boxed_label(out: &mut String, text: &str, p: Point, stroke: &str) {
    let w = 10.0 + 8.0 * text.len() as f64;
    let _ = writeln!(
        out,
        "<rect class=\"elabel-box\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"22.00\" fill=\"white\" stroke=\"{stroke}\" stroke-width=\"1.5\"/>",
        num(p.0 - w / 2.0),
        num(p.1 - 11.0),
        num(w)
    );
    label(out, "elabel", text, p, "black");
}

fn line(out: &mut String, class: &str, a: Point, b: Point, stroke: &str, width: f64, opacity: f64) {
    let _ = writeln!(
        out,
        "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{}\" stroke-opacity=\"{}\" stroke-linecap=\"round\"/>",
        num(a.0),
        num(a.1),
        num(b.0),
        num(b.1),
        num(width),
        num(opacity)
    );
}

fn midpoint(a: Point, b: Point) -> Point {
    ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
}

fn draw_enclosures(out: &mut String, h: &Hypergraph, cfg: &RenderConfig, frame: Frame) {
    let raw = layout_stress(h.num_vertices(), &clique_pairs(h), cfg.seed);
    let pos = fit(&raw, frame.0, frame.1, frame.2, frame.3, MARGIN);
    let mut labels = Vec::new();
    for (j, e) in h.edges().iter().enumerate() {
        let color = cfg.color(j);
        let pts: Vec<Point> = e.iter().map(|&v| pos[v]).collect();
        let anchor = if e.len() >= 3 {
            let hull = convex_hull(&pts).expect("at least three points");
            let coords: Vec<String> = hull.iter().map(|p| format!("{},{}", num(p.0), num(p.1))).collect();
            let _ = writeln!(
                out,
                "<polygon class=\"hull\" points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"{color}\" stroke-width=\"40.00\" stroke-opacity=\"0.15\" stroke-linejoin=\"round\"/>",
                coords.join(" ")
            );
            centroid(&hull)
        } else {
            line(out, "pair-edge", pts[0], pts[1], color, 40.0, 0.3);
            midpoint(pts[0], pts[1])
        };
        labels.push((HyperedgeId(j).to_string(), anchor, color));
    }
    vertex_nodes(out, &pos);
    for (text, p, color) in labels {
        boxed_label(out, &text, p, color);
    }
}

fn draw_clique(out: &mut String, h: &Hypergraph, cfg: &RenderConfig, frame: Frame) {
    let co = h.co_occurrences();
    let pairs: Vec<(usize, usize)> = co.keys().copied().collect();
    let raw = layout_spring(h.num_vertices(), &pairs, SPRING_K, SPRING_ITERATIONS, SPRING_SCALE, cfg.seed);
    let pos = fit(&raw, frame.0, frame.1, frame.2, frame.3, MARGIN);
    for (&(u, v), ids) in &co {
        line(out, "clique", pos[u], pos[v], "#555555", 2.0, 1.0);
        let text: Vec<String> = ids.iter().map(|&j| HyperedgeId(j).to_string()).collect();
        let m = midpoint(pos[u], pos[v]);
        let _ = writeln!(
            out,
            "<text class=\"plabel\" x=\"{}\" y=\"{}\" font-size=\"{FONT_SIZE}\" font-family=\"sans-serif\" text-anchor=\"middle\" fill=\"#b00000\">{}</text>",
            num(m.0),
            num(m.1 - 4.0),
            text.join(",")
        );
    }
    vertex_nodes(out, &pos);
}

fn draw_incidence(out: &mut String, h: &Hypergraph, fmt: VisualFormat, cfg: &RenderConfig, frame: Frame) {
    let (n, m) = (h.num_vertices(), h.num_edges());
    let (vpos, epos): (Vec<Point>, Vec<Point>) = match fmt {
        VisualFormat::BiInc => {
            let rows = layout_rows(n, m, frame.2, frame.3).positions;
            let shifted: Vec<Point> = rows.iter().map(|p| (p.0 + frame.0, p.1 + frame.1)).collect();
            (shifted[..n].to_vec(), shifted[n..].to_vec())
        }
        VisualFormat::ShInc => split(&fit(&layout_shell(n, m), frame.0, frame.1, frame.2, frame.3, MARGIN), n),
        _ => split(&fit(&layout_star(n, m), frame.0, frame.1, frame.2, frame.3, MARGIN), n),
    };
    for (j, e) in h.edges().iter().enumerate() {
        for &v in e {
            line(out, "incidence", epos[j], vpos[v], cfg.color(j), 2.0, 0.8);
        }
    }
    vertex_nodes(out, &vpos);
    for (j, p) in epos.iter().enumerate() {
        let _ = writeln!(
            out,
            "<rect class=\"hnode\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
            num(p.0 - SQUARE_HALF),
            num(p.1 - SQUARE_HALF),
            num(2.0 * SQUARE_HALF),
            num(2.0 * SQUARE_HALF),
            cfg.color(j)
        );
        label(out, "elabel", &HyperedgeId(j).to_string(), *p, "white");
    }
}

fn split(pos: &[Point], n: usize) -> (Vec<Point>, Vec<Point>) {
    (pos[..n].to_vec(), pos[n..].to_vec())
}

/// Counts elements with `class="<class>"` in an SVG produced here.
pub fn count_class(svg: &str, class: &str) -> usize {
    svg.matches(&format!("class=\"{class}\"")).count()
}

/// Text content of every `<text class="<class>">` element, in document order.
pub fn texts_of_class(svg: &str, class: &str) -> Vec<String> {
    let open = format!("<text class=\"{class}\"");
    svg.match_indices(&open)
        .filter_map(|(i, _)| {
            let rest = &svg[i..];
            let start = rest.find('>')? + 1;
            let end = rest.find("</text>")?;
            Some(rest[start..end].to_string())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::{arb_hypergraph, h_star};
    use proptest::prelude::*;

    #[test]
    fn reference_clique_has_seven_segments() {
        let svg = render_svg(&h_star(), VisualFormat::CliExp, &RenderConfig::new(1)).unwrap();
        assert_eq!(count_class(&svg, "clique"), 7);
        let labels = texts_of_class(&svg, "plabel");
        assert!(labels.contains(&"e0,e1".to_string()));
        assert!(labels.contains(&"e1,e2".to_string()));
        assert!(labels.contains(&"e0".to_string()));
    }

    #[test]
    fn reference_enclosures() {
        let svg = render_svg(&h_star(), VisualFormat::EncHy, &RenderConfig::new(1)).unwrap();
        assert_eq!(count_class(&svg, "hull"), 3);
        assert_eq!(texts_of_class(&svg, "elabel"), vec!["e0", "e1", "e2"]);
        assert!(svg.contains("fill-opacity=\"0.15\""));
    }

    #[test]
    fn reference_bipartite() {
        let svg = render_svg(&h_star(), VisualFormat::BiInc, &RenderConfig::new(1)).unwrap();
        assert_eq!(count_class(&svg, "vertex"), 5);
        assert_eq!(count_class(&svg, "hnode"), 3);
        assert_eq!(count_class(&svg, "incidence"), 9);
        assert!(svg.contains("width=\"1400.00\" height=\"1100.00\""));
    }

    #[test]
    fn order_two_edges_are_segments() {
        let h = Hypergraph::new(3, vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        let svg = render_svg(&h, VisualFormat::EncHy, &RenderConfig::new(2)).unwrap();
        assert_eq!(count_class(&svg, "pair-edge"), 1);
        assert_eq!(count_class(&svg, "hull"), 1);
    }

    #[test]
    fn pair_rendering_has_two_panels() {
        let h = h_star();
        let svg = render_svg_pair(&h, &h, VisualFormat::StInc, &RenderConfig::new(3)).unwrap();
        assert_eq!(count_class(&svg, "panel"), 2);
        assert_eq!(count_class(&svg, "incidence"), 18);
    }

    #[test]
    fn bad_config_rejected() {
        let mut cfg = RenderConfig::new(0);
        cfg.palette.clear();
        assert!(render_svg(&h_star(), VisualFormat::BiInc, &cfg).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn drawings_are_complete_and_deterministic(h in arb_hypergraph(12, 12), seed in 0u64..1000) {
            let cfg = RenderConfig::new(seed);
            let incidences: usize = h.edges().iter().map(Vec::len).sum();
            for fmt in VisualFormat::ALL {
                let svg = render_svg(&h, fmt, &cfg).unwrap();
                prop_assert_eq!(&svg, &render_svg(&h, fmt, &cfg).unwrap());
                let vlabels = texts_of_class(&svg, "vlabel");
                let expected: Vec<String> = h.vertices().map(|v| v.to_string()).collect();
                prop_assert_eq!(vlabels, expected);
                match fmt {
                    VisualFormat::CliExp => {
                        prop_assert_eq!(count_class(&svg, "clique"), h.co_occurrences().len());
                    }
                    VisualFormat::EncHy => {
                        let elabels = texts_of_class(&svg, "elabel");
                        let expected: Vec<String> = h.edge_ids().map(|e| e.to_string()).collect();
                        prop_assert_eq!(elabels, expected);
                    }
                    _ => {
                        prop_assert_eq!(count_class(&svg, "incidence"), incidences);
                        prop_assert_eq!(count_class(&svg, "hnode"), h.num_edges());
                    }
                }
            }
        }
    }
}
