//! Meta problems, prompt assembly and corpus emission.
//!
//! A meta problem is one task instance. It expands into one QA sample per
//! (textual, visual) representation pair. The corpus is a `manifest.jsonl`
//! with one sample per line, a `metas.jsonl` with the meta problems, and an
//! `images/` directory with one SVG per (meta, visual format).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::{self, Certificate, GenSpec, ScaleClass, Source, SourcePool};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::seed;
use crate::solve::{self, solve_ism};
use crate::task::Task;
use crate::text_repr::{render_text, render_text_named, TextFormat};
use crate::verify::{verify_3cl, verify_hhm, verify_shc, HyperedgeSequence, VertexColoring};
use crate::visual_repr::{render_svg, render_svg_pair, RenderConfig, VisualFormat};

pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const METAS_FILE: &str = "metas.jsonl";
pub const IMAGES_DIR: &str = "images";

// metas rendered per parallel batch; bounds memory on large runs
const EMIT_BATCH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RepCombo {
    pub text: TextFormat,
    pub visual: VisualFormat,
}

impl RepCombo {
    /// All 35 pairs, text-major.
    pub fn all() -> Vec<RepCombo> {
        TextFormat::ALL
            .iter()
            .flat_map(|&text| VisualFormat::ALL.iter().map(move |&visual| RepCombo { text, visual }))
            .collect()
    }
}

impl fmt::Display for RepCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.text, self.visual)
    }
}

/// Task parameters; only the fields a task uses are set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<VertexId>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParamOptions {
    /// Pick DVC/OEC values absent from the graph, so the answer is 0.
    pub zero_probe: bool,
    /// Hamiltonian path endpoints from the constructor; required for HHM.
    pub endpoints: Option<(VertexId, VertexId)>,
}

/// Expected answer, typed per task. Level-4 tasks store a reference
/// certificate; any certificate the verifier accepts is also correct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum GroundTruth {
    Count(usize),
    VertexSet(BTreeSet<VertexId>),
    /// `None` means no path.
    PathLength(Option<u64>),
    Flow(u64),
    YesNo(bool),
    Coloring(VertexColoring),
    Cycle(HyperedgeSequence),
    Path(HyperedgeSequence),
}

/// What a grader needs to judge one sample without the meta file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerSpec {
    #[serde(flatten)]
    pub truth: GroundTruth,
    pub format: String,
    /// The hypergraph certificates are checked against (Level-4 only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<Hypergraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoints: Option<(VertexId, VertexId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaProblem {
    pub id: String,
    pub task: Task,
    pub level: u8,
    pub scale: ScaleClass,
    pub source: Source,
    pub seed: u64,
    pub graph: Hypergraph,
    /// `G` of an isomorphism pair; `graph` is `H`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<Hypergraph>,
    pub params: Params,
    pub ground_truth: GroundTruth,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaSample {
    pub sample_id: String,
    pub meta_id: String,
    pub task: Task,
    pub level: u8,
    pub scale: ScaleClass,
    pub source: Source,
    pub text_format: TextFormat,
    pub visual_format: VisualFormat,
    pub prompt: String,
    pub image_path: String,
    pub answer_spec: AnswerSpec,
}

impl QaSample {
    pub fn combo(&self) -> RepCombo {
        RepCombo {
            text: self.text_format,
            visual: self.visual_format,
        }
    }
}

fn pick<T: Copy>(rng: &mut impl Rng, items: &[T], what: &str) -> Result<T> {
    items
        .choose(rng)
        .copied()
        .ok_or_else(|| Error::contract(format!("no candidate {what} in this hypergraph")))
}

/// Values in `lo..=hi` that are absent from `present`, for zero probes.
fn absent(present: &BTreeSet<usize>, lo: usize) -> Vec<usize> {
    let hi = present.iter().next_back().map_or(lo, |&m| m + 1);
    (lo..=hi).filter(|x| !present.contains(x)).collect()
}

/// Draws the parameters a task needs from `h`.
pub fn sample_params(h: &Hypergraph, task: Task, seed: u64, opts: &ParamOptions) -> Result<Params> {
    let mut rng = seed::rng(seed);
    let profile = h.degree_profile();
    let degrees: BTreeSet<usize> = profile.degrees.iter().copied().collect();
    let orders: BTreeSet<usize> = profile.orders.iter().copied().collect();
    let vertices: Vec<VertexId> = h.vertices().collect();
    let mut p = Params::default();
    match task {
        Task::Neighbors => p.vertex = Some(pick(&mut rng, &vertices, "vertex")?),
        Task::DegreeVertexCount => {
            let pool: Vec<usize> = if opts.zero_probe { absent(&degrees, 1) } else { degrees.into_iter().collect() };
            p.degree = Some(pick(&mut rng, &pool, "degree")?);
        }
        Task::OrderEdgeCount => {
            let pool: Vec<usize> = if opts.zero_probe { absent(&orders, 2) } else { orders.into_iter().collect() };
            p.order = Some(pick(&mut rng, &pool, "order")?);
        }
        Task::OrderNeighbors => {
            p.vertex = Some(pick(&mut rng, &vertices, "vertex")?);
            let pool: Vec<usize> = orders.into_iter().filter(|&k| k >= 2).collect();
            p.order = Some(pick(&mut rng, &pool, "order")?);
        }
        Task::ShortestPath | Task::MaxFlow => {
            let mut component = vec![0; h.num_vertices()];
            for (c, members) in h.components().iter().enumerate() {
                for &v in members {
                    component[v] = c;
                }
            }
            let pairs: Vec<(usize, usize)> = (0..h.num_vertices())
                .flat_map(|s| (0..h.num_vertices()).map(move |t| (s, t)))
                .filter(|&(s, t)| s != t && component[s] == component[t])
                .collect();
            let (s, t) = pick(&mut rng, &pairs, "connected vertex pair")?;
            p.source = Some(VertexId(s));
            p.target = Some(VertexId(t));
        }
        Task::HamiltonianPath => {
            let (s, t) = opts
                .endpoints
                .ok_or_else(|| Error::contract("HHM parameters come from the constructor's endpoints"))?;
            h.check_vertex(s)?;
            h.check_vertex(t)?;
            p.source = Some(s);
            p.target = Some(t);
        }
        _ => {}
    }
    Ok(p)
}

fn need<T>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| Error::contract(format!("missing parameter: {what}")))
}

/// Recomputes the ground truth of a polynomial task from scratch. Level-4
/// truths are certificates and come from generation instead.
pub fn compute_truth(task: Task, h: &Hypergraph, second: Option<&Hypergraph>, p: &Params) -> Result<GroundTruth> {
    Ok(match task {
        Task::VertexCount => GroundTruth::Count(solve::solve_vc(h)),
        Task::HyperedgeCount => GroundTruth::Count(solve::solve_hec(h)),
        Task::Neighbors => GroundTruth::VertexSet(solve::solve_ne(h, need(p.vertex, "vertex")?)?),
        Task::DegreeVertexCount => GroundTruth::Count(solve::solve_dvc(h, need(p.degree, "degree")?)),
        Task::OrderEdgeCount => GroundTruth::Count(solve::solve_oec(h, need(p.order, "order")?)),
        Task::OrderNeighbors => {
            GroundTruth::VertexSet(solve::solve_one(h, need(p.vertex, "vertex")?, need(p.order, "order")?)?)
        }
        Task::ShortestPath => GroundTruth::PathLength(
            solve::solve_osp(h, need(p.source, "source")?, need(p.target, "target")?)?.total_weight(),
        ),
        Task::MaxFlow => GroundTruth::Flow(solve::solve_omf(h, need(p.source, "source")?, need(p.target, "target")?)?.value),
        Task::Isomorphism => GroundTruth::YesNo(solve_ism(h, need(second, "second hypergraph")?)),
        Task::ThreeColoring | Task::StrictHypercycle | Task::HamiltonianPath => {
            return Err(Error::contract(format!("{task} ground truth is a certificate, not computed")))
        }
    })
}

impl MetaProblem {
    /// Generates instance, parameters and ground truth for one meta problem.
    pub fn build(
        id: impl Into<String>,
        task: Task,
        scale: ScaleClass,
        source: Source,
        seed: u64,
        pool: Option<&SourcePool>,
        zero_probe: bool,
    ) -> Result<MetaProblem> {
        let id = id.into();
        let spec = GenSpec {
            task,
            scale,
            source,
            seed: seed::derive(seed, &[0]),
        };
        let inst = generate::generate(&spec, pool).map_err(|e| match e {
            Error::GenerationFailure(msg) => Error::GenerationFailure(format!("{id}: {msg}")),
            other => other,
        })?;
        let opts = ParamOptions {
            zero_probe,
            endpoints: inst.endpoints,
        };
        let params = sample_params(&inst.graph, task, seed::derive(seed, &[1]), &opts)?;
        let ground_truth = match (task, inst.certificate) {
            (Task::ThreeColoring, Some(Certificate::Coloring(c))) => GroundTruth::Coloring(c),
            (Task::StrictHypercycle, Some(Certificate::Cycle(c))) => GroundTruth::Cycle(c),
            (Task::HamiltonianPath, Some(Certificate::Path(c))) => GroundTruth::Path(c),
            (Task::ThreeColoring | Task::StrictHypercycle | Task::HamiltonianPath, _) => {
                return Err(Error::GenerationFailure(format!("{id}: instance has no {task} certificate")))
            }
            _ => compute_truth(task, &inst.graph, inst.second.as_ref(), &params)?,
        };
        if let (Some(label), GroundTruth::YesNo(truth)) = (inst.isomorphic, &ground_truth) {
            if label != *truth {
                return Err(Error::GenerationFailure(format!("{id}: isomorphism label disagrees with solver")));
            }
        }
        Ok(MetaProblem {
            id,
            task,
            level: task.level(),
            scale,
            source,
            seed,
            graph: inst.graph,
            second: inst.second,
            params,
            ground_truth,
        })
    }

    /// Re-checks the stored ground truth: polynomial truths are recomputed,
    /// certificates re-verified.
    pub fn revalidate(&self) -> Result<bool> {
        let h = &self.graph;
        match &self.ground_truth {
            GroundTruth::Coloring(c) => verify_3cl(h, c),
            GroundTruth::Cycle(c) => verify_shc(h, c),
            GroundTruth::Path(c) => verify_hhm(h, c, need(self.params.source, "source")?, need(self.params.target, "target")?),
            truth => Ok(compute_truth(self.task, h, self.second.as_ref(), &self.params)? == *truth),
        }
    }

    pub fn answer_spec(&self) -> AnswerSpec {
        let level4 = self.task.level() == 4;
        AnswerSpec {
            truth: self.ground_truth.clone(),
            format: answer_format(self.task).to_string(),
            graph: level4.then(|| self.graph.clone()),
            endpoints: match (self.task, self.params.source, self.params.target) {
                (Task::HamiltonianPath, Some(s), Some(t)) => Some((s, t)),
                _ => None,
            },
        }
    }

    pub fn sample_id(&self, combo: RepCombo) -> String {
        format!("{}-{}-{}", self.id, combo.text.slug(), combo.visual.slug())
    }

    pub fn image_path(&self, visual: VisualFormat) -> String {
        format!("{IMAGES_DIR}/{}-{}.svg", self.id, visual.slug())
    }
}

/// Expected answer shape, as shown to graders.
pub fn answer_format(task: Task) -> &'static str {
    match task {
        Task::VertexCount | Task::HyperedgeCount | Task::DegreeVertexCount | Task::OrderEdgeCount => "integer",
        Task::Neighbors => "{v1,v2,...} or No neighbors",
        Task::OrderNeighbors => "{v1,v2,...} or No n-neighbors",
        Task::ShortestPath => "integer or No path",
        Task::MaxFlow => "integer",
        Task::Isomorphism => "Yes or No",
        Task::ThreeColoring => "Coloring:[v0:c0,v1:c1,...]",
        Task::StrictHypercycle => "Cycle:[e0,e1,...]",
        Task::HamiltonianPath => "Path:[e0,e1,...]",
    }
}

/// The question sentence with parameters filled in, prefixed `Q: `.
pub fn question(meta: &MetaProblem) -> Result<String> {
    let p = &meta.params;
    let ans = "List the answer after \"Ans:\"";
    let q = match meta.task {
        Task::VertexCount => format!("How many vertices are in the hypergraph G? {ans}."),
        Task::HyperedgeCount => format!("How many hyperedges are in the hypergraph G? {ans}."),
        Task::Neighbors => {
            let u = need(p.vertex, "vertex")?;
            format!(
                "What are the direct neighbors of vertex {u} in hypergraph G? (Neighbors = vertices sharing at least one hyperedge with {u}). {ans} in the format {{v1,v2,...}} or \"No neighbors\"."
            )
        }
        Task::DegreeVertexCount => format!(
            "How many vertices have degree {} in hypergraph G? (Degree = number of hyperedges the vertex belongs to). {ans}.",
            need(p.degree, "degree")?
        ),
        Task::OrderEdgeCount => format!(
            "How many hyperedges have order {} in hypergraph G? (Order = number of vertices in the hyperedge). {ans}.",
            need(p.order, "order")?
        ),
        Task::OrderNeighbors => format!(
            "What are the neighbors of vertex {} when only considering hyperedges with order >= {} in hypergraph G? {ans} in the format {{v1,v2,...}} or \"No n-neighbors\".",
            need(p.vertex, "vertex")?,
            need(p.order, "order")?
        ),
        Task::ShortestPath => format!(
            "What is the shortest path length from vertex {} to vertex {} in hypergraph G, where each hyperedge's weight equals its order (number of vertices)? If no path exists, answer \"No path\". {ans}.",
            need(p.source, "source")?,
            need(p.target, "target")?
        ),
        Task::MaxFlow => format!(
            "What is the estimated maximum flow from vertex {} to vertex {} in hypergraph G, where each hyperedge's capacity equals its order? If no flow exists, answer \"0\". {ans}.",
            need(p.source, "source")?,
            need(p.target, "target")?
        ),
        Task::Isomorphism => format!(
            "Are these two hypergraphs isomorphic? (Two hypergraphs are isomorphic if there exists a vertex relabeling that transforms one into the other). {ans} in the format [Yes/No]."
        ),
        Task::ThreeColoring => format!(
            "Please provide a 3-coloring strategy such that each hyperedge contains nodes with at least 2 different colors (assign each vertex a color from {{c0, c1, c2}}). {ans} as \"Coloring:[v0:c0,v1:c1,...]\"."
        ),
        Task::StrictHypercycle => "Please identify a strict hypercycle in the hypergraph G (A strict hypercycle is a sequence of hyperedges e1,e2,...,ek where adjacent hyperedges share exactly one vertex, i.e., |ei ∩ ei+1| = 1, and |ek ∩ e1| = 1, forming a closed loop). List the hypercycle after \"Ans:\" as \"Cycle:[e0,e1,...]\".".to_string(),
        Task::HamiltonianPath => format!(
            "Please provide a valid Hamiltonian path from {} to {}.\n(Hamiltonian path = path visiting all vertices exactly once). {ans} as \"Path:[e0,e1,...]\".",
            need(p.source, "source")?,
            need(p.target, "target")?
        ),
    };
    Ok(format!("Q: {q}"))
}

/// Full prompt: textual rendering(s), then the question. The visual half of
/// the combo travels as the image and does not change the text.
pub fn format_question(meta: &MetaProblem, combo: RepCombo) -> Result<String> {
    let q = question(meta)?;
    Ok(match &meta.second {
        Some(g) if meta.task == Task::Isomorphism => format!(
            "There are two hypergraphs: H and G.\nThe description of H is: \n{}\nThe description of G is: \n{}\n\n{q}",
            render_text_named(&meta.graph, combo.text, "H"),
            render_text_named(g, combo.text, "G"),
        ),
        _ => format!("{}\n\n{q}", render_text(&meta.graph, combo.text)),
    })
}

pub fn render_image(meta: &MetaProblem, visual: VisualFormat) -> Result<String> {
    let cfg = RenderConfig::new(seed::derive(meta.seed, &[2]));
    match &meta.second {
        Some(g) => render_svg_pair(&meta.graph, g, visual, &cfg),
        None => render_svg(&meta.graph, visual, &cfg),
    }
}

/// The 35 samples of one meta problem, in [`RepCombo::all`] order.
pub fn expand(meta: &MetaProblem) -> Result<Vec<QaSample>> {
    let spec = meta.answer_spec();
    RepCombo::all()
        .into_iter()
        .map(|combo| {
            Ok(QaSample {
                sample_id: meta.sample_id(combo),
                meta_id: meta.id.clone(),
                task: meta.task,
                level: meta.level,
                scale: meta.scale,
                source: meta.source,
                text_format: combo.text,
                visual_format: combo.visual,
                prompt: format_question(meta, combo)?,
                image_path: meta.image_path(combo.visual),
                answer_spec: spec.clone(),
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct EmitConfig {
    pub seed: u64,
    pub counts: BTreeMap<Task, usize>,
    pub scale_weights: [u32; 3],
    pub source_weights: [u32; 2],
    pub zero_probes: bool,
    /// Worker threads; `None` uses the global pool. Output does not depend on it.
    pub jobs: Option<usize>,
}

impl EmitConfig {
    /// `per_task` metas for each of the twelve tasks, mixes 1:2:1 and 1:1.
    pub fn uniform(seed: u64, per_task: usize) -> Self {
        EmitConfig {
            seed,
            counts: Task::ALL.iter().map(|&t| (t, per_task)).collect(),
            scale_weights: [1, 2, 1],
            source_weights: [1, 1],
            zero_probes: false,
            jobs: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmitSummary {
    pub metas: usize,
    pub samples: usize,
    pub manifest: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlannedMeta {
    pub id: String,
    pub task: Task,
    pub scale: ScaleClass,
    pub source: Source,
    pub seed: u64,
}

/// Plans every meta problem in task order.
pub fn plan(cfg: &EmitConfig) -> Result<Vec<PlannedMeta>> {
    let mut out = Vec::new();
    for (&task, &count) in &cfg.counts {
        if count == 0 {
            return Err(Error::contract(format!("count for {task} must be at least 1")));
        }
        let task_seed = seed::derive(cfg.seed, &[task.index() as u64]);
        let tags = generate::mix_assignments(count, cfg.scale_weights, cfg.source_weights, seed::derive(task_seed, &[0]));
        for (i, (scale, source)) in tags.into_iter().enumerate() {
            out.push(PlannedMeta {
                id: format!("{}-{i:04}", task.slug()),
                task,
                scale,
                source,
                seed: seed::derive(task_seed, &[1, i as u64]),
            });
        }
    }
    Ok(out)
}

/// Builds all meta problems in plan order.
pub fn build_metas(cfg: &EmitConfig, pool: &SourcePool) -> Result<Vec<MetaProblem>> {
    let planned = plan(cfg)?;
    with_jobs(cfg.jobs, || {
        planned
            .par_iter()
            .map(|p| MetaProblem::build(&p.id, p.task, p.scale, p.source, p.seed, Some(pool), cfg.zero_probes))
            .collect()
    })?
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::contract(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Serializes with sorted keys on one line.
pub fn to_jsonl_line<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(&serde_json::to_value(value)?)?)
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

/// Generates and writes a full corpus under `outdir`.
pub fn emit_corpus(cfg: &EmitConfig, pool: &SourcePool, outdir: &Path) -> Result<EmitSummary> {
    let images = outdir.join(IMAGES_DIR);
    fs::create_dir_all(&images).map_err(|e| Error::io(&images, e))?;
    let metas = build_metas(cfg, pool)?;
    let manifest_path = outdir.join(MANIFEST_FILE);
    let metas_path = outdir.join(METAS_FILE);
    let open = |p: &Path| File::create(p).map(BufWriter::new).map_err(|e| Error::io(p, e));
    let mut manifest = open(&manifest_path)?;
    let mut meta_out = open(&metas_path)?;
    let mut samples = 0;
    for batch in metas.chunks(EMIT_BATCH) {
        let rendered: Vec<Result<Vec<String>>> = with_jobs(cfg.jobs, || {
            batch
                .par_iter()
                .map(|meta| {
                    for visual in VisualFormat::ALL {
                        let path = outdir.join(meta.image_path(visual));
                        write_file(&path, &render_image(meta, visual)?)?;
                    }
                    expand(meta)?.iter().map(to_jsonl_line).collect()
                })
                .collect()
        })?;
        for (meta, lines) in batch.iter().zip(rendered) {
            for line in lines? {
                writeln!(manifest, "{line}").map_err(|e| Error::io(&manifest_path, e))?;
                samples += 1;
            }
            writeln!(meta_out, "{}", to_jsonl_line(meta)?).map_err(|e| Error::io(&metas_path, e))?;
        }
    }
    manifest.flush().map_err(|e| Error::io(&manifest_path, e))?;
    meta_out.flush().map_err(|e| Error::io(&metas_path, e))?;
    Ok(EmitSummary {
        metas: metas.len(),
        samples,
        manifest: manifest_path,
    })
}

fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::parse(i + 1, format!("{}: {e}", path.display()))))
        .collect()
}

pub fn read_manifest(path: &Path) -> Result<Vec<QaSample>> {
    read_jsonl(path)
}

pub fn read_metas(path: &Path) -> Result<Vec<MetaProblem>> {
    read_jsonl(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::tests::h_star;
    use proptest::prelude::*;

    fn meta_on(h: Hypergraph, task: Task, params: Params) -> MetaProblem {
        let ground_truth = compute_truth(task, &h, None, &params).unwrap();
        MetaProblem {
            id: format!("{}-0000", task.slug()),
            task,
            level: task.level(),
            scale: ScaleClass::Small,
            source: Source::Synthetic,
            seed: 1,
            graph: h,
            second: None,
            params,
            ground_truth,
        }
    }

    const NO_OPTS: ParamOptions = ParamOptions {
        zero_probe: false,
        endpoints: None,
    };

    #[test]
    fn thirty_five_combos() {
        let all = RepCombo::all();
        assert_eq!(all.len(), 35);
        assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), 35);
    }

    #[test]
    fn params_on_h_star() {
        let h = h_star();
        for s in 0..50 {
            let d = sample_params(&h, Task::DegreeVertexCount, s, &NO_OPTS).unwrap().degree.unwrap();
            assert!((1..=3).contains(&d));
            assert_eq!(sample_params(&h, Task::OrderEdgeCount, s, &NO_OPTS).unwrap().order, Some(3));
            let p = sample_params(&h, Task::ShortestPath, s, &NO_OPTS).unwrap();
            assert_ne!(p.source, p.target);
        }
        let seen: BTreeSet<usize> = (0..200)
            .map(|s| sample_params(&h, Task::DegreeVertexCount, s, &NO_OPTS).unwrap().degree.unwrap())
            .collect();
        assert_eq!(seen, BTreeSet::from([1, 2, 3]));
        assert_eq!(
            sample_params(&h, Task::OrderNeighbors, 9, &NO_OPTS).unwrap(),
            sample_params(&h, Task::OrderNeighbors, 9, &NO_OPTS).unwrap()
        );
    }

    #[test]
    fn zero_probes_miss() {
        let h = h_star();
        let opts = ParamOptions {
            zero_probe: true,
            endpoints: None,
        };
        for s in 0..20 {
            let d = sample_params(&h, Task::DegreeVertexCount, s, &opts).unwrap().degree.unwrap();
            assert_eq!(solve::solve_dvc(&h, d), 0);
            let k = sample_params(&h, Task::OrderEdgeCount, s, &opts).unwrap().order.unwrap();
            assert_eq!(solve::solve_oec(&h, k), 0);
        }
    }

    #[test]
    fn hhm_params_need_endpoints() {
        assert!(matches!(
            sample_params(&h_star(), Task::HamiltonianPath, 0, &NO_OPTS),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn prompt_templates() {
        let vc = meta_on(h_star(), Task::VertexCount, Params::default());
        let prompt = format_question(&vc, RepCombo::all()[0]).unwrap();
        assert!(prompt.starts_with(&render_text(&h_star(), TextFormat::ALL[0])));
        assert!(prompt.ends_with("Q: How many vertices are in the hypergraph G? List the answer after \"Ans:\"."));
        let q = question(&meta_on(h_star(), Task::Neighbors, Params { vertex: Some(VertexId(4)), ..Params::default() })).unwrap();
        assert!(q.contains("sharing at least one hyperedge with v4)"));
        assert!(q.ends_with("in the format {v1,v2,...} or \"No neighbors\"."));
        let mut shc = vc.clone();
        shc.task = Task::StrictHypercycle;
        assert!(question(&shc).unwrap().contains("List the hypercycle after \"Ans:\" as \"Cycle:[e0,e1,...]\""));
        let mut hhm = vc.clone();
        hhm.task = Task::HamiltonianPath;
        hhm.params = Params { source: Some(VertexId(1)), target: Some(VertexId(0)), ..Params::default() };
        let q = question(&hhm).unwrap();
        assert!(q.starts_with("Q: Please provide a valid Hamiltonian path from v1 to v0.\n"));
        assert!(q.contains("(Hamiltonian path = path visiting all vertices exactly once)"));
    }

    #[test]
    fn ism_prompt_embeds_both() {
        let m = MetaProblem::build("ism-0000", Task::Isomorphism, ScaleClass::Small, Source::Synthetic, 3, None, false).unwrap();
        let combo = RepCombo { text: TextFormat::NSet, visual: VisualFormat::EncHy };
        let prompt = format_question(&m, combo).unwrap();
        assert!(prompt.starts_with("There are two hypergraphs: H and G.\nThe description of H is: \n"));
        assert!(prompt.contains(&render_text_named(&m.graph, TextFormat::NSet, "H")));
        assert!(prompt.contains(&render_text_named(m.second.as_ref().unwrap(), TextFormat::NSet, "G")));
    }

    #[test]
    fn osp_truth_on_h_star() {
        let m = meta_on(h_star(), Task::ShortestPath, Params { source: Some(VertexId(0)), target: Some(VertexId(4)), ..Params::default() });
        assert_eq!(m.ground_truth, GroundTruth::PathLength(Some(6)));
    }

    #[test]
    fn answer_spec_round_trips() {
        let pool = SourcePool::builtin();
        for task in Task::ALL {
            let m = MetaProblem::build("x", task, ScaleClass::Medium, Source::Real, 11, Some(&pool), false).unwrap();
            let spec = m.answer_spec();
            let line = to_jsonl_line(&spec).unwrap();
            let back: AnswerSpec = serde_json::from_str(&line).unwrap();
            assert_eq!(back, spec, "{task}");
            let meta_back: MetaProblem = serde_json::from_str(&to_jsonl_line(&m).unwrap()).unwrap();
            assert_eq!(meta_back, m);
        }
    }

    #[test]
    fn expand_gives_35_distinct_samples() {
        let m = MetaProblem::build("ne-0000", Task::Neighbors, ScaleClass::Small, Source::Synthetic, 5, None, false).unwrap();
        let samples = expand(&m).unwrap();
        assert_eq!(samples.len(), 35);
        let combos: BTreeSet<RepCombo> = samples.iter().map(QaSample::combo).collect();
        assert_eq!(combos.len(), 35);
        for s in &samples {
            assert!(s.prompt.contains(&render_text(&m.graph, s.text_format)));
        }
    }

    #[test]
    fn plan_is_stratified() {
        let cfg = EmitConfig::uniform(7, 8);
        let planned = plan(&cfg).unwrap();
        assert_eq!(planned.len(), 96);
        let mediums = planned.iter().filter(|p| p.task == Task::MaxFlow && p.scale == ScaleClass::Medium).count();
        assert_eq!(mediums, 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn built_metas_revalidate(task_ix in 0usize..12, seed in any::<u64>(), real in any::<bool>(), scale_ix in 0usize..3) {
            let pool = SourcePool::builtin();
            let source = if real { Source::Real } else { Source::Synthetic };
            let m = MetaProblem::build("p", Task::ALL[task_ix], ScaleClass::ALL[scale_ix], source, seed, Some(&pool), false).unwrap();
            prop_assert!(m.revalidate().unwrap());
            prop_assert_eq!(m.level, m.task.level());
        }
    }
}
