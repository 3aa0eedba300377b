//! Answer extraction, judging, accuracy tables and the best-representation
//! (PRM) dataset.
//!
//! Parsing first tries the exact answer grammar of the task. In lenient mode
//! a failed exact parse falls back to looser extraction, and every fallback
//! leaves a [`Flag`] on the record.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::sync::LazyLock;

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::bench::{self, AnswerSpec, GroundTruth, QaSample, RepCombo};
use crate::error::{Error, Result};
use crate::hypergraph::VertexId;
use crate::task::Task;
use crate::text_repr::TextFormat;
use crate::verify::{parse_coloring, parse_sequence, verify_3cl, verify_hhm, verify_shc, Color, HyperedgeSequence, VertexColoring};
use crate::visual_repr::VisualFormat;

static MARKER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bans:").unwrap());
static INTEGER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\d+$").unwrap());
static ANY_INTEGER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\d+").unwrap());
static SET: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\{\s*(v\d+(\s*,\s*v\d+)*)?\s*\}$").unwrap());
static ANY_SET: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\{([^}]*)\}").unwrap());
static VERTEX: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bv(\d+)\b").unwrap());
static NO_NEIGHBORS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bno\s+(n-)?neighbou?rs\b").unwrap());
static NO_PATH_OR_INT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bno\s+path\b|\d+").unwrap());
static YES_NO: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\[?(Yes|No)\]?$").unwrap());
static ANY_YES_NO: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\b(yes|no)\b").unwrap());
static ASSIGNMENT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\bv(\d+)\s*[:=]\s*c([0-2])\b").unwrap());
static BRACKETED: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[([^\]]*)\]").unwrap());
static EDGE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)\be(\d+)\b").unwrap());

/// A parsed answer, before comparison with the truth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Answer {
    Integer(u64),
    NoPath,
    VertexSet(BTreeSet<VertexId>),
    YesNo(bool),
    Coloring(VertexColoring),
    Sequence(HyperedgeSequence),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// Lenient: the payload had text around the answer.
    Prose,
    /// Lenient: a vertex set without braces.
    MissingBraces,
    /// Lenient: a keyword in a different case or spelling.
    CaseVariant,
    ParseFailure,
    /// The parsed answer has the wrong shape for the task.
    TypeMismatch,
    /// The certificate referenced ids outside the hypergraph or was partial.
    InvalidCertificate,
    /// A valid strict hypercycle of only two hyperedges.
    DegenerateCycle,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkerChoice {
    First,
    #[default]
    Last,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    pub lenient: bool,
    pub marker: MarkerChoice,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            lenient: true,
            marker: MarkerChoice::Last,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub answer: Option<Answer>,
    pub flags: Vec<Flag>,
}

impl Parsed {
    fn ok(answer: Answer, flags: Vec<Flag>) -> Self {
        Parsed {
            answer: Some(answer),
            flags,
        }
    }

    fn failure() -> Self {
        Parsed {
            answer: None,
            flags: vec![Flag::ParseFailure],
        }
    }
}

fn empty_set_phrase(task: Task) -> &'static str {
    if task == Task::OrderNeighbors {
        "No n-neighbors"
    } else {
        "No neighbors"
    }
}

fn vertex_set(text: &str) -> BTreeSet<VertexId> {
    VERTEX
        .captures_iter(text)
        .filter_map(|c| c[1].parse().ok().map(VertexId))
        .collect()
}

fn exact(task: Task, payload: &str) -> Option<Answer> {
    match task {
        Task::VertexCount | Task::HyperedgeCount | Task::DegreeVertexCount | Task::OrderEdgeCount | Task::MaxFlow => {
            INTEGER.is_match(payload).then(|| payload.parse().ok().map(Answer::Integer))?
        }
        Task::ShortestPath if payload == "No path" => Some(Answer::NoPath),
        Task::ShortestPath => INTEGER.is_match(payload).then(|| payload.parse().ok().map(Answer::Integer))?,
        Task::Neighbors | Task::OrderNeighbors => {
            if payload == empty_set_phrase(task) {
                Some(Answer::VertexSet(BTreeSet::new()))
            } else {
                SET.is_match(payload).then(|| Answer::VertexSet(vertex_set(payload)))
            }
        }
        Task::Isomorphism => YES_NO.captures(payload).map(|c| Answer::YesNo(&c[1] == "Yes")),
        Task::ThreeColoring => parse_coloring(payload).ok().map(Answer::Coloring),
        Task::StrictHypercycle => parse_sequence(payload, "Cycle:").ok().map(Answer::Sequence),
        Task::HamiltonianPath => parse_sequence(payload, "Path:").ok().map(Answer::Sequence),
    }
}

fn loose(task: Task, payload: &str) -> Option<(Answer, Vec<Flag>)> {
    let prose = vec![Flag::Prose];
    match task {
        Task::VertexCount | Task::HyperedgeCount | Task::DegreeVertexCount | Task::OrderEdgeCount | Task::MaxFlow => {
            let m = ANY_INTEGER.find(payload)?;
            Some((Answer::Integer(m.as_str().parse().ok()?), prose))
        }
        Task::ShortestPath => {
            let m = NO_PATH_OR_INT.find(payload)?;
            match m.as_str().parse() {
                Ok(x) => Some((Answer::Integer(x), prose)),
                Err(_) => {
                    let mut flags = prose;
                    if m.as_str() != "No path" {
                        flags.push(Flag::CaseVariant);
                    }
                    Some((Answer::NoPath, flags))
                }
            }
        }
        Task::Neighbors | Task::OrderNeighbors => {
            let brace = ANY_SET.captures(payload);
            let none = NO_NEIGHBORS.find(payload);
            let brace_at = brace.as_ref().map(|c| c.get(0).unwrap().start());
            if let Some(m) = none.filter(|m| brace_at.is_none_or(|b| m.start() < b)) {
                let mut flags = prose;
                if m.as_str() != empty_set_phrase(task) {
                    flags.push(Flag::CaseVariant);
                }
                return Some((Answer::VertexSet(BTreeSet::new()), flags));
            }
            if let Some(c) = brace {
                return Some((Answer::VertexSet(vertex_set(&c[1])), prose));
            }
            let set = vertex_set(payload);
            (!set.is_empty()).then(|| (Answer::VertexSet(set), vec![Flag::MissingBraces]))
        }
        Task::Isomorphism => {
            let c = ANY_YES_NO.captures(payload)?;
            let word = &c[1];
            let mut flags = prose;
            if word != "Yes" && word != "No" {
                flags.push(Flag::CaseVariant);
            }
            Some((Answer::YesNo(word.eq_ignore_ascii_case("yes")), flags))
        }
        Task::ThreeColoring => {
            let mut map = BTreeMap::new();
            for c in ASSIGNMENT.captures_iter(payload) {
                let v = VertexId(c[1].parse().ok()?);
                let color = Color::from_index(c[2].parse().ok()?)?;
                if map.insert(v, color).is_some_and(|old| old != color) {
                    return None;
                }
            }
            (!map.is_empty()).then_some((Answer::Coloring(VertexColoring(map)), prose))
        }
        Task::StrictHypercycle | Task::HamiltonianPath => {
            let scope = BRACKETED.captures(payload).map_or(payload, |c| c.get(1).unwrap().as_str());
            let ids: Option<Vec<usize>> = EDGE.captures_iter(scope).map(|c| c[1].parse().ok()).collect();
            let ids = ids?;
            (!ids.is_empty()).then(|| (Answer::Sequence(HyperedgeSequence::from_indices(ids)), prose))
        }
    }
}

/// Extracts the answer after the chosen `Ans:` marker (case-insensitive).
pub fn parse_answer(task: Task, raw: &str, opts: &ParseOptions) -> Parsed {
    let marker = match opts.marker {
        MarkerChoice::Last => MARKER.find_iter(raw).last(),
        MarkerChoice::First => MARKER.find(raw),
    };
    let Some(marker) = marker else {
        return Parsed::failure();
    };
    let payload = raw[marker.end()..].trim();
    if let Some(a) = exact(task, payload) {
        return Parsed::ok(a, Vec::new());
    }
    if !opts.lenient {
        return Parsed::failure();
    }
    // markdown emphasis, quotes and a closing period are common wrappers
    let cleaned = payload
        .trim_matches(|c: char| c.is_whitespace() || matches!(c, '*' | '`' | '"' | '\'' | '.'))
        .trim();
    if let Some(a) = exact(task, cleaned) {
        return Parsed::ok(a, vec![Flag::Prose]);
    }
    match loose(task, payload) {
        Some((a, flags)) => Parsed::ok(a, flags),
        None => Parsed::failure(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub correct: bool,
    pub flags: Vec<Flag>,
}

fn certificate_check(result: Result<bool>, flags: &mut Vec<Flag>) -> bool {
    result.unwrap_or_else(|_| {
        flags.push(Flag::InvalidCertificate);
        false
    })
}

/// Compares a parsed answer with the expected one. Certificates are judged by
/// the verifiers, so any valid certificate counts.
pub fn judge(spec: &AnswerSpec, answer: &Answer) -> Verdict {
    let mut flags = Vec::new();
    let graph = spec.graph.as_ref();
    let correct = match (&spec.truth, answer) {
        (GroundTruth::Count(n), Answer::Integer(x)) => *x == *n as u64,
        (GroundTruth::PathLength(w), Answer::Integer(x)) => *w == Some(*x),
        (GroundTruth::PathLength(w), Answer::NoPath) => w.is_none(),
        (GroundTruth::Flow(f), Answer::Integer(x)) => f == x,
        (GroundTruth::VertexSet(s), Answer::VertexSet(a)) => s == a,
        (GroundTruth::YesNo(b), Answer::YesNo(a)) => a == b,
        (GroundTruth::Coloring(_), Answer::Coloring(c)) => match graph {
            Some(h) => certificate_check(verify_3cl(h, c), &mut flags),
            None => certificate_check(Err(Error::contract("answer spec lacks the hypergraph")), &mut flags),
        },
        (GroundTruth::Cycle(_), Answer::Sequence(seq)) => {
            let ok = match graph {
                Some(h) => certificate_check(verify_shc(h, seq), &mut flags),
                None => certificate_check(Err(Error::contract("answer spec lacks the hypergraph")), &mut flags),
            };
            if ok && seq.len() == 2 {
                flags.push(Flag::DegenerateCycle);
            }
            ok
        }
        (GroundTruth::Path(_), Answer::Sequence(seq)) => match (graph, spec.endpoints) {
            (Some(h), Some((s, t))) => certificate_check(verify_hhm(h, seq, s, t), &mut flags),
            _ => certificate_check(Err(Error::contract("answer spec lacks hypergraph or endpoints")), &mut flags),
        },
        _ => {
            flags.push(Flag::TypeMismatch);
            false
        }
    };
    Verdict { correct, flags }
}

/// The exact answer a perfect responder would give, with its marker.
pub fn canonical_response(task: Task, spec: &AnswerSpec) -> String {
    let body = match &spec.truth {
        GroundTruth::Count(n) => n.to_string(),
        GroundTruth::VertexSet(s) if s.is_empty() => empty_set_phrase(task).to_string(),
        GroundTruth::VertexSet(s) => {
            let items: Vec<String> = s.iter().map(ToString::to_string).collect();
            format!("{{{}}}", items.join(","))
        }
        GroundTruth::PathLength(None) => "No path".to_string(),
        GroundTruth::PathLength(Some(w)) => w.to_string(),
        GroundTruth::Flow(f) => f.to_string(),
        GroundTruth::YesNo(b) => if *b { "Yes" } else { "No" }.to_string(),
        GroundTruth::Coloring(c) => c.to_string(),
        GroundTruth::Cycle(c) => c.cycle_text(),
        GroundTruth::Path(c) => c.path_text(),
    };
    format!("Ans: {body}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelResponse {
    pub sample_id: String,
    pub raw_text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeRecord {
    pub sample_id: String,
    pub answer: Option<Answer>,
    pub parse_failure: bool,
    pub correct: bool,
    pub flags: Vec<Flag>,
}

fn index(manifest: &[QaSample]) -> HashMap<&str, &QaSample> {
    manifest.iter().map(|s| (s.sample_id.as_str(), s)).collect()
}

fn resolve<'a, I: IntoIterator<Item = &'a str>>(ids: I, index: &HashMap<&str, &QaSample>) -> Result<()> {
    let unknown: BTreeSet<&str> = ids.into_iter().filter(|id| !index.contains_key(id)).collect();
    if unknown.is_empty() {
        Ok(())
    } else {
        let list: Vec<&str> = unknown.into_iter().collect();
        Err(Error::contract(format!("unknown sample ids: {}", list.join(", "))))
    }
}

pub fn grade_one(sample: &QaSample, raw: &str, opts: &ParseOptions) -> GradeRecord {
    let parsed = parse_answer(sample.task, raw, opts);
    let mut flags = parsed.flags;
    let correct = match &parsed.answer {
        Some(a) => {
            let v = judge(&sample.answer_spec, a);
            flags.extend(v.flags);
            v.correct
        }
        None => false,
    };
    GradeRecord {
        sample_id: sample.sample_id.clone(),
        parse_failure: parsed.answer.is_none(),
        answer: parsed.answer,
        correct,
        flags,
    }
}

/// Grades every response; fails listing any ids the manifest lacks.
pub fn grade_responses(responses: &[ModelResponse], manifest: &[QaSample], opts: &ParseOptions) -> Result<Vec<GradeRecord>> {
    let index = index(manifest);
    resolve(responses.iter().map(|r| r.sample_id.as_str()), &index)?;
    Ok(responses
        .par_iter()
        .map(|r| grade_one(index[r.sample_id.as_str()], &r.raw_text, opts))
        .collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub correct: usize,
    pub total: usize,
}

impl Tally {
    fn add(&mut self, correct: bool) {
        self.total += 1;
        self.correct += correct as usize;
    }

    pub fn accuracy(&self) -> Option<f64> {
        (self.total > 0).then(|| self.correct as f64 / self.total as f64)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AccuracyRow {
    pub label: String,
    pub cells: BTreeMap<Task, Tally>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let v: Vec<f64> = values.collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

impl AccuracyRow {
    /// `None` when the row has no record for `task`.
    pub fn accuracy(&self, task: Task) -> Option<f64> {
        self.cells.get(&task).and_then(Tally::accuracy)
    }

    fn average(&self, understanding: bool) -> Option<f64> {
        mean(
            Task::ALL
                .iter()
                .filter(|t| t.is_understanding() == understanding)
                .filter_map(|&t| self.accuracy(t)),
        )
    }

    /// Mean over the understanding tasks present in the row.
    pub fn avg_u(&self) -> Option<f64> {
        self.average(true)
    }

    /// Mean over the reasoning tasks present in the row.
    pub fn avg_r(&self) -> Option<f64> {
        self.average(false)
    }
}

/// Rows: overall, then one per textual format (pooled over visual formats),
/// then one per visual format (pooled over textual formats).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccuracyTable {
    pub rows: Vec<AccuracyRow>,
}

impl AccuracyTable {
    pub fn row(&self, label: &str) -> Option<&AccuracyRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Percentages with two decimals; absent cells are left empty.
    pub fn to_csv(&self) -> String {
        let cell = |x: Option<f64>| x.map_or(String::new(), |a| format!("{:.2}", a * 100.0));
        let mut out = String::from("row");
        for t in Task::ALL {
            let _ = write!(out, ",{t}");
        }
        out.push_str(",Avg.U,Avg.R\n");
        for r in &self.rows {
            out.push_str(&r.label);
            for t in Task::ALL {
                let _ = write!(out, ",{}", cell(r.accuracy(t)));
            }
            let _ = writeln!(out, ",{},{}", cell(r.avg_u()), cell(r.avg_r()));
        }
        out
    }
}

pub const OVERALL: &str = "Overall";

pub fn aggregate(records: &[GradeRecord], manifest: &[QaSample]) -> Result<AccuracyTable> {
    if records.is_empty() {
        return Err(Error::contract("no grade records to aggregate"));
    }
    let index = index(manifest);
    resolve(records.iter().map(|r| r.sample_id.as_str()), &index)?;
    let labels: Vec<String> = std::iter::once(OVERALL.to_string())
        .chain(TextFormat::ALL.iter().map(|f| f.name().to_string()))
        .chain(VisualFormat::ALL.iter().map(|f| f.name().to_string()))
        .collect();
    let mut rows: Vec<AccuracyRow> = labels
        .into_iter()
        .map(|label| AccuracyRow {
            label,
            cells: BTreeMap::new(),
        })
        .collect();
    for r in records {
        let s = index[r.sample_id.as_str()];
        let text_row = 1 + TextFormat::ALL.iter().position(|&f| f == s.text_format).expect("listed format");
        let visual_row = 1 + TextFormat::ALL.len() + VisualFormat::ALL.iter().position(|&f| f == s.visual_format).expect("listed format");
        for i in [0, text_row, visual_row] {
            rows[i].cells.entry(s.task).or_default().add(r.correct);
        }
    }
    Ok(AccuracyTable { rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrmPair {
    pub meta_id: String,
    pub combo: RepCombo,
}

/// Export row for router training.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrmRow {
    pub meta_id: String,
    pub input_text: String,
    pub label_combo: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrmOutcome {
    pub pairs: Vec<PrmPair>,
    pub rows: Vec<PrmRow>,
    /// Metas lacking a graded sample for some combination.
    pub skipped: Vec<String>,
    /// Metas where every combination tied.
    pub degenerate: Vec<String>,
}

/// Per meta, the combinations with the highest mean accuracy (all of them on
/// ties). The router input is the meta's HO-Neigh prompt.
pub fn build_prm(records: &[GradeRecord], manifest: &[QaSample]) -> Result<PrmOutcome> {
    let index = index(manifest);
    resolve(records.iter().map(|r| r.sample_id.as_str()), &index)?;
    let mut by_meta: BTreeMap<&str, BTreeMap<RepCombo, Tally>> = BTreeMap::new();
    for r in records {
        let s = index[r.sample_id.as_str()];
        by_meta.entry(&s.meta_id).or_default().entry(s.combo()).or_default().add(r.correct);
    }
    let mut prompts: HashMap<&str, &str> = HashMap::new();
    for s in manifest {
        if s.text_format == TextFormat::HoNeigh {
            prompts.entry(&s.meta_id).or_insert(&s.prompt);
        }
    }
    let all = RepCombo::all();
    let mut out = PrmOutcome::default();
    for (meta_id, tallies) in by_meta {
        if all.iter().any(|c| !tallies.contains_key(c)) {
            log::warn!("{meta_id}: only {} of {} combinations graded, skipped", tallies.len(), all.len());
            out.skipped.push(meta_id.to_string());
            continue;
        }
        // exact comparison of correct/total fractions
        let best = tallies
            .values()
            .copied()
            .max_by(|a, b| (a.correct * b.total).cmp(&(b.correct * a.total)))
            .expect("35 combinations");
        let winners: Vec<RepCombo> = tallies
            .iter()
            .filter(|(_, t)| t.correct * best.total == best.correct * t.total)
            .map(|(&c, _)| c)
            .collect();
        if winners.len() == all.len() {
            log::warn!("{meta_id}: all combinations tie");
            out.degenerate.push(meta_id.to_string());
        }
        let input = prompts.get(meta_id).copied().unwrap_or_default();
        for combo in winners {
            out.pairs.push(PrmPair {
                meta_id: meta_id.to_string(),
                combo,
            });
            out.rows.push(PrmRow {
                meta_id: meta_id.to_string(),
                input_text: input.to_string(),
                label_combo: combo.to_string(),
            });
        }
    }
    Ok(out)
}

pub fn read_responses(path: &Path) -> Result<Vec<ModelResponse>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::parse(i + 1, format!("{}: {e}", path.display()))))
        .collect()
}

pub fn records_to_jsonl(records: &[GradeRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&bench::to_jsonl_line(r)?);
        out.push('\n');
    }
    Ok(out)
}
