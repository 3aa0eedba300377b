//! Scale-controlled instance generation.
//!
//! Synthetic instances come from random hyperedges plus bridging repair, or
//! from task-specific constructors that plant a certificate (strict
//! hypercycle, Hamiltonian path, proper 3-colouring). Real instances are
//! random-walk subsamples of a [`SourcePool`]. Every function is a pure
//! function of its [`GenSpec`] (and pool): all randomness comes from
//! `spec.seed`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{check_permutation, Hypergraph, VertexId};
use crate::seed;
use crate::solve::solve_ism;
use crate::task::Task;
use crate::verify::{
    find_3cl_bounded, find_any_hhm_bounded, find_shc_bounded, Color, HyperedgeSequence, SearchOutcome,
    VertexColoring,
};

pub const MAX_SYNTHETIC_ORDER: usize = 6;
pub const ISM_RETRY_BUDGET: usize = 1_000;
pub const ISM_BASE_REDRAWS: u64 = 100;
pub const WALK_BUDGET: usize = 10_000;
/// Node budget for each feasibility search on a real subsample.
const FEASIBILITY_BUDGET: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleClass {
    Small,
    Medium,
    Large,
}

impl ScaleClass {
    pub const ALL: [ScaleClass; 3] = [ScaleClass::Small, ScaleClass::Medium, ScaleClass::Large];

    /// Inclusive vertex-count range. 10 and 15 belong to the lower class.
    pub fn range(self) -> (usize, usize) {
        match self {
            ScaleClass::Small => (5, 10),
            ScaleClass::Medium => (11, 15),
            ScaleClass::Large => (16, 20),
        }
    }

    pub fn classify(n: usize) -> Option<ScaleClass> {
        ScaleClass::ALL.into_iter().find(|c| {
            let (lo, hi) = c.range();
            (lo..=hi).contains(&n)
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ScaleClass::Small => "small",
            ScaleClass::Medium => "medium",
            ScaleClass::Large => "large",
        }
    }
}

impl fmt::Display for ScaleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScaleClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScaleClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::parse(0, format!("unknown scale class `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Synthetic,
    Real,
}

impl Source {
    pub const ALL: [Source; 2] = [Source::Synthetic, Source::Real];

    pub fn name(self) -> &'static str {
        match self {
            Source::Synthetic => "synthetic",
            Source::Real => "real",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Source::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::parse(0, format!("unknown source `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub task: Task,
    pub scale: ScaleClass,
    pub source: Source,
    pub seed: u64,
}

/// A large ingested hypergraph that real instances are cut from.
#[derive(Clone, Debug)]
pub struct SourcePool {
    full: Hypergraph,
    provenance: String,
}

impl SourcePool {
    /// Rejects pools with isolated vertices; every component must have at
    /// least two vertices.
    pub fn new(full: Hypergraph, provenance: impl Into<String>) -> Result<Self> {
        if let Some(v) = full.vertices().find(|&v| full.degree(v).unwrap_or(0) == 0) {
            return Err(Error::InvalidHypergraph(format!("source pool has isolated vertex {v}")));
        }
        Ok(SourcePool {
            full,
            provenance: provenance.into(),
        })
    }

    /// Loads `.json` files in the canonical JSON shape and anything else as
    /// hMETIS text.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let full = if path.extension().is_some_and(|x| x == "json") {
            Hypergraph::from_json(&text)?
        } else {
            Hypergraph::parse_hmetis(&text)?
        };
        SourcePool::new(full, path.display().to_string())
    }

    /// A fixed co-authorship-like pool used when no pool file is given:
    /// 600 authors in 20 research groups, 900 papers of 2 to 6 authors drawn
    /// mostly from one group, a few prolific authors per group.
    pub fn builtin() -> Self {
        let mut rng = seed::rng(0x0062_7569_6c74_696e);
        let (authors, groups, papers) = (600usize, 20usize, 900usize);
        let group_size = authors / groups;
        let mut edges: Vec<Vec<usize>> = Vec::with_capacity(papers);
        let pick = |rng: &mut ChaCha8Rng, group: usize| -> usize {
            if rng.gen_bool(0.1) {
                rng.gen_range(0..authors)
            } else if rng.gen_bool(0.3) {
                // prolific authors: the first three of each group
                group * group_size + rng.gen_range(0..3)
            } else {
                group * group_size + rng.gen_range(0..group_size)
            }
        };
        for p in 0..papers {
            let group = p % groups;
            let size = *[2usize, 2, 3, 3, 3, 4, 4, 5, 6].choose(&mut rng).unwrap();
            let mut members = Vec::with_capacity(size);
            // the first 600 papers each guarantee one author a paper
            if p < authors {
                members.push(p / groups + (p % groups) * group_size);
            }
            while members.len() < size {
                let a = pick(&mut rng, group);
                if !members.contains(&a) {
                    members.push(a);
                }
            }
            edges.push(members);
        }
        let full = Hypergraph::new(authors, edges).expect("builtin pool is valid");
        SourcePool::new(full, "builtin:coauthor").expect("builtin pool has no isolated vertices")
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.full
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }
}

/// A planted or discovered solution for the Level-4 tasks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Certificate {
    Coloring(VertexColoring),
    Cycle(HyperedgeSequence),
    Path(HyperedgeSequence),
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Coloring(c) => write!(f, "{c}"),
            Certificate::Cycle(s) => f.write_str(&s.cycle_text()),
            Certificate::Path(s) => f.write_str(&s.path_text()),
        }
    }
}

/// Everything generation produces for one meta problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Hypergraph,
    /// The second hypergraph of an isomorphism pair.
    pub second: Option<Hypergraph>,
    pub isomorphic: Option<bool>,
    /// Hamiltonian path endpoints.
    pub endpoints: Option<(VertexId, VertexId)>,
    pub certificate: Option<Certificate>,
}

impl Instance {
    fn plain(graph: Hypergraph) -> Self {
        Instance {
            graph,
            second: None,
            isomorphic: None,
            endpoints: None,
            certificate: None,
        }
    }
}

/// `[ceil(0.2 n), floor(1.5 n)]`.
pub fn density_range(n: usize) -> (usize, usize) {
    (n.div_ceil(5), n * 3 / 2)
}

fn max_order(n: usize) -> usize {
    MAX_SYNTHETIC_ORDER.min(n)
}

fn draw_vertex_count(scale: ScaleClass, rng: &mut ChaCha8Rng) -> usize {
    let (lo, hi) = scale.range();
    rng.gen_range(lo..=hi)
}

fn random_edge(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let order = rng.gen_range(2..=max_order(n));
    rand::seq::index::sample(rng, n, order).into_vec()
}

/// Adds bridging hyperedges until the hypergraph is connected. `bridge` picks
/// the new hyperedge given two components.
fn repair_connectivity(
    n: usize,
    edges: &mut Vec<Vec<usize>>,
    rng: &mut ChaCha8Rng,
    mut bridge: impl FnMut(&[usize], &[usize], &mut ChaCha8Rng) -> Vec<usize>,
) {
    loop {
        let h = Hypergraph::new(n, edges.clone()).expect("generated edges are valid");
        let comps = h.components();
        if comps.len() <= 1 {
            return;
        }
        let picked = rand::seq::index::sample(rng, comps.len(), 2);
        let edge = bridge(&comps[picked.index(0)], &comps[picked.index(1)], rng);
        edges.push(edge);
    }
}

fn require_synthetic(spec: &GenSpec) -> Result<()> {
    if spec.source != Source::Synthetic {
        return Err(Error::contract("this constructor needs a synthetic spec"));
    }
    Ok(())
}

/// Random hyperedges, then bridging 2-edges between components until
/// connected. Draws whose repaired edge count leaves the density band are
/// redrawn from the same stream.
pub fn gen_random_connected(spec: &GenSpec) -> Result<Hypergraph> {
    require_synthetic(spec)?;
    let mut rng = seed::rng(spec.seed);
    let n = draw_vertex_count(spec.scale, &mut rng);
    Ok(random_connected(n, &mut rng))
}

fn random_connected(n: usize, rng: &mut ChaCha8Rng) -> Hypergraph {
    let (lo, hi) = density_range(n);
    loop {
        let m = rng.gen_range(lo..=hi);
        let mut edges: Vec<Vec<usize>> = (0..m).map(|_| random_edge(n, rng)).collect();
        repair_connectivity(n, &mut edges, rng, |a, b, rng| {
            vec![*a.choose(rng).unwrap(), *b.choose(rng).unwrap()]
        });
        if edges.len() <= hi {
            return Hypergraph::new(n, edges).expect("generated edges are valid");
        }
    }
}

/// Shuffles hyperedge order and returns `(shuffled edges, map[old] = new)`.
fn shuffle_edges(edges: Vec<Vec<usize>>, rng: &mut ChaCha8Rng) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(rng);
    let mut map = vec![0; edges.len()];
    for (new, &old) in order.iter().enumerate() {
        map[old] = new;
    }
    let shuffled = order.iter().map(|&old| edges[old].clone()).collect();
    (shuffled, map)
}

/// Plants a strict hypercycle of length `L ≥ 3`: hyperedge `i` holds ring
/// vertices `r_i, r_{i+1}` plus private extras, so consecutive backbone
/// hyperedges meet in exactly one vertex. Remaining vertices are attached by
/// distractor hyperedges that never alter the backbone.
pub fn gen_shc_instance(spec: &GenSpec) -> Result<(Hypergraph, HyperedgeSequence)> {
    require_synthetic(spec)?;
    let mut rng = seed::rng(spec.seed);
    let n = draw_vertex_count(spec.scale, &mut rng);
    Ok(shc_for(n, &mut rng))
}

fn shc_for(n: usize, rng: &mut ChaCha8Rng) -> (Hypergraph, HyperedgeSequence) {
    let (lo, hi) = density_range(n);
    loop {
        let m = rng.gen_range(lo.max(3)..=hi);
        let len = rng.gen_range(3..=m.min(n));
        let slots = m - len;
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(rng);
        let (ring, rest) = verts.split_at(len);
        let mut backbone: Vec<Vec<usize>> = (0..len).map(|i| vec![ring[i], ring[(i + 1) % len]]).collect();

        // leftover vertices either join a backbone edge privately or wait for a distractor
        let cap = max_order(n) - 1;
        let mut waiting = Vec::new();
        for &v in rest {
            let roomy: Vec<usize> = (0..len).filter(|&i| backbone[i].len() < max_order(n)).collect();
            let must_place = waiting.len() >= cap * slots;
            if !roomy.is_empty() && (must_place || rng.gen_bool(0.3)) {
                backbone[*roomy.choose(rng).unwrap()].push(v);
            } else {
                waiting.push(v);
            }
        }
        if waiting.len() > cap * slots {
            continue;
        }

        let mut covered: Vec<usize> = backbone.iter().flatten().copied().collect();
        covered.sort_unstable();
        covered.dedup();
        let mut edges = backbone;
        for chunk in split_into_slots(&waiting, slots, cap, rng) {
            if chunk.is_empty() {
                edges.push(random_edge_within(&covered, n, rng));
            } else {
                let mut e = chunk.clone();
                e.push(*covered.choose(rng).unwrap());
                covered.extend(chunk);
                edges.push(e);
            }
        }
        let (edges, map) = shuffle_edges(edges, rng);
        let cert = HyperedgeSequence::from_indices(0..len).remap(&map);
        let h = Hypergraph::new(n, edges).expect("constructed edges are valid");
        return (h, cert);
    }
}

/// Splits `items` over `slots` groups of at most `cap` items each, in random
/// sizes. The caller guarantees `items.len() <= slots * cap`.
fn split_into_slots(items: &[usize], slots: usize, cap: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut groups = vec![Vec::new(); slots];
    for &x in items {
        let open: Vec<usize> = (0..slots).filter(|&i| groups[i].len() < cap).collect();
        groups[*open.choose(rng).expect("enough slot capacity")].push(x);
    }
    groups
}

/// Random hyperedge on already-connected vertices.
fn random_edge_within(pool: &[usize], n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let order = rng.gen_range(2..=max_order(n).min(pool.len()));
    pool.choose_multiple(rng, order).copied().collect()
}

/// Plants a Hamiltonian path along a random vertex permutation, covered by
/// overlapping segment hyperedges of 2 to 6 consecutive path vertices; then
/// adds random distractors. Returns `(h, start, end, certificate)`.
pub fn gen_hhm_instance(spec: &GenSpec) -> Result<(Hypergraph, VertexId, VertexId, HyperedgeSequence)> {
    require_synthetic(spec)?;
    let mut rng = seed::rng(spec.seed);
    let n = draw_vertex_count(spec.scale, &mut rng);
    Ok(hhm_for(n, &mut rng))
}

fn hhm_for(n: usize, rng: &mut ChaCha8Rng) -> (Hypergraph, VertexId, VertexId, HyperedgeSequence) {
    let (lo, hi) = density_range(n);
    let steps = n - 1;
    let max_steps = max_order(n) - 1;
    let min_segments = steps.div_ceil(max_steps);
    let m = rng.gen_range(lo.max(min_segments)..=hi);
    let k = rng.gen_range(min_segments..=m.min(steps));
    // segment sizes (in steps) sum to n-1, each in [1, max_steps]
    let mut sizes = vec![1usize; k];
    for _ in k..steps {
        let open: Vec<usize> = (0..k).filter(|&i| sizes[i] < max_steps).collect();
        sizes[*open.choose(rng).unwrap()] += 1;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let (mut edges, steps_cert) = hhm_backbone(&perm, &sizes);
    while edges.len() < m {
        edges.push(random_edge(n, rng));
    }
    let (edges, map) = shuffle_edges(edges, rng);
    let cert = steps_cert.remap(&map);
    let h = Hypergraph::new(n, edges).expect("constructed edges are valid");
    (h, VertexId(perm[0]), VertexId(perm[n - 1]), cert)
}

/// Segment hyperedges along `perm`: segment `j` spans `sizes[j]` steps and
/// shares its last vertex with segment `j + 1`. The certificate names, for
/// each step, the segment covering it.
fn hhm_backbone(perm: &[usize], sizes: &[usize]) -> (Vec<Vec<usize>>, HyperedgeSequence) {
    let mut edges = Vec::with_capacity(sizes.len());
    let mut cert = Vec::with_capacity(perm.len() - 1);
    let mut start = 0;
    for (j, &len) in sizes.iter().enumerate() {
        edges.push(perm[start..=start + len].to_vec());
        cert.extend(std::iter::repeat_n(j, len));
        start += len;
    }
    (edges, HyperedgeSequence::from_indices(cert))
}

/// True when the hyperedge would not be monochromatic.
pub fn admits_edge(colors: &[Color], edge: &[usize]) -> bool {
    edge.iter().any(|&v| colors[v] != colors[edge[0]])
}

/// Pre-assigns three nonempty colour classes and only ever adds hyperedges
/// that meet at least two classes, so the assignment stays proper.
pub fn gen_3cl_instance(spec: &GenSpec) -> Result<(Hypergraph, VertexColoring)> {
    require_synthetic(spec)?;
    let mut rng = seed::rng(spec.seed);
    let n = draw_vertex_count(spec.scale, &mut rng);
    Ok(three_color_for(n, &mut rng))
}

fn three_color_for(n: usize, rng: &mut ChaCha8Rng) -> (Hypergraph, VertexColoring) {
    let (lo, hi) = density_range(n);
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(rng);
    let mut colors = vec![Color::C0; n];
    for (i, &v) in verts.iter().enumerate() {
        colors[v] = if i < 3 { Color::ALL[i] } else { *Color::ALL.choose(rng).unwrap() };
    }
    loop {
        let m = rng.gen_range(lo..=hi);
        let mut edges = Vec::with_capacity(m);
        while edges.len() < m {
            let e = random_edge(n, rng);
            if admits_edge(&colors, &e) {
                edges.push(e);
            }
        }
        repair_connectivity(n, &mut edges, rng, |a, b, rng| {
            let (x, y) = (*a.choose(rng).unwrap(), *b.choose(rng).unwrap());
            if colors[x] != colors[y] {
                return vec![x, y];
            }
            let others: Vec<usize> = (0..n).filter(|&z| colors[z] != colors[x]).collect();
            vec![x, y, *others.choose(rng).unwrap()]
        });
        if edges.len() <= hi {
            let h = Hypergraph::new(n, edges).expect("generated edges are valid");
            return (h, VertexColoring::from_colors(&colors));
        }
    }
}

/// With probability 1/2 a relabelled copy; otherwise a one-step mutation
/// (move a vertex between hyperedges, or grow/shrink a hyperedge) that stays
/// connected and is confirmed non-isomorphic.
pub fn gen_ism_pair(spec: &GenSpec, pool: Option<&SourcePool>) -> Result<(Hypergraph, Hypergraph, bool)> {
    let base = match spec.source {
        Source::Synthetic => {
            let mut rng = seed::rng(seed::derive(spec.seed, &[0]));
            let n = draw_vertex_count(spec.scale, &mut rng);
            random_connected(n, &mut rng)
        }
        Source::Real => {
            let pool = pool.ok_or_else(|| Error::contract("real source needs a source pool"))?;
            subsample_real(pool, &GenSpec { task: Task::VertexCount, ..*spec })?
        }
    };
    let mut rng = seed::rng(seed::derive(spec.seed, &[1]));
    let positive = rng.gen_bool(0.5);
    if positive {
        let other = scramble(&base, &mut rng);
        return Ok((base, other, true));
    }
    for _ in 0..ISM_RETRY_BUDGET {
        let Some(mutant) = mutate(&base, &mut rng) else { continue };
        let other = scramble(&mutant, &mut rng);
        if !solve_ism(&base, &other) {
            return Ok((base, other, false));
        }
    }
    Err(Error::GenerationFailure(format!(
        "no non-isomorphic mutation found in {ISM_RETRY_BUDGET} attempts"
    )))
}

/// Random vertex relabelling plus hyperedge shuffle.
fn scramble(h: &Hypergraph, rng: &mut ChaCha8Rng) -> Hypergraph {
    let mut map: Vec<usize> = (0..h.num_vertices()).collect();
    map.shuffle(rng);
    let relabelled = h.relabel(&map).expect("a shuffle is a permutation");
    let (edges, _) = shuffle_edges(relabelled.edges().to_vec(), rng);
    Hypergraph::new(h.num_vertices(), edges).expect("edges stay valid")
}

fn mutate(h: &Hypergraph, rng: &mut ChaCha8Rng) -> Option<Hypergraph> {
    let n = h.num_vertices();
    let mut edges = h.edges().to_vec();
    let j = rng.gen_range(0..edges.len());
    if rng.gen_bool(0.5) {
        // move one vertex from hyperedge j to another hyperedge
        if edges[j].len() <= 2 || edges.len() < 2 {
            return None;
        }
        let f = (j + rng.gen_range(1..edges.len())) % edges.len();
        let v = *edges[j].choose(rng).unwrap();
        if edges[f].contains(&v) || edges[f].len() >= max_order(n) {
            return None;
        }
        edges[j].retain(|&x| x != v);
        edges[f].push(v);
    } else if rng.gen_bool(0.5) {
        let outside: Vec<usize> = (0..n).filter(|v| !edges[j].contains(v)).collect();
        if edges[j].len() >= max_order(n) || outside.is_empty() {
            return None;
        }
        edges[j].push(*outside.choose(rng).unwrap());
    } else {
        if edges[j].len() <= 2 {
            return None;
        }
        let v = *edges[j].choose(rng).unwrap();
        edges[j].retain(|&x| x != v);
    }
    let mutant = Hypergraph::new(n, edges).ok()?;
    mutant.is_connected().then_some(mutant)
}

/// Renumbers vertices by position in `order` (`order[k]` is the k-th visited
/// vertex) and hyperedges by first appearance: ascending smallest new vertex
/// id, then lexicographically, ties by original position.
pub fn reindex_canonical(h: &Hypergraph, order: &[usize]) -> Result<Hypergraph> {
    check_permutation(order, h.num_vertices())?;
    let mut map = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        map[old] = new;
    }
    let relabelled = h.relabel(&map)?;
    let mut edges: Vec<(usize, &Vec<usize>)> = relabelled.edges().iter().enumerate().collect();
    edges.sort_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)));
    Hypergraph::new(h.num_vertices(), edges.into_iter().map(|(_, e)| e.clone()).collect())
}

/// Random-walk subsample: start uniformly among vertices whose component is
/// large enough, step vertex → random incident hyperedge → random member until
/// the target count is visited, then take the induced hyperedges (restricted
/// to the visited set, size ≥ 2, duplicates dropped) and reindex by visit
/// order. For Level-4 tasks the sample is redrawn until a certificate exists.
pub fn subsample_real(pool: &SourcePool, spec: &GenSpec) -> Result<Hypergraph> {
    real_instance(pool, spec).map(|inst| inst.graph)
}

fn real_instance(pool: &SourcePool, spec: &GenSpec) -> Result<Instance> {
    let full = pool.hypergraph();
    let mut rng = seed::rng(spec.seed);
    let target = draw_vertex_count(spec.scale, &mut rng);
    let starts: Vec<usize> = full
        .components()
        .into_iter()
        .filter(|c| c.len() >= target)
        .flatten()
        .collect();
    if starts.is_empty() {
        return Err(Error::GenerationFailure(format!(
            "source pool `{}` has no component with {target} vertices",
            pool.provenance()
        )));
    }
    for _ in 0..WALK_BUDGET {
        let Some(visited) = random_walk(full, *starts.choose(&mut rng).unwrap(), target, &mut rng) else {
            continue;
        };
        let h = induced(full, &visited);
        if let Some(inst) = certify(h, spec.task, &mut rng) {
            return Ok(inst);
        }
    }
    Err(Error::GenerationFailure(format!(
        "{} subsample budget of {WALK_BUDGET} walks exhausted on `{}`",
        spec.task,
        pool.provenance()
    )))
}

fn random_walk(full: &Hypergraph, start: usize, target: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let mut visited = vec![start];
    let mut at = start;
    for _ in 0..100 * target {
        if visited.len() == target {
            return Some(visited);
        }
        let incident = full.incident_edges(VertexId(at)).expect("vertex in range");
        let edge = &full.edges()[*incident.choose(rng)?];
        at = *edge.choose(rng).unwrap();
        if !visited.contains(&at) {
            visited.push(at);
        }
    }
    (visited.len() == target).then_some(visited)
}

/// Induced sub-hypergraph on `visited`, reindexed so `visited[k]` becomes `v<k>`.
fn induced(full: &Hypergraph, visited: &[usize]) -> Hypergraph {
    let mut local = vec![usize::MAX; full.num_vertices()];
    for (k, &v) in visited.iter().enumerate() {
        local[v] = k;
    }
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for e in full.edges() {
        let mut restricted: Vec<usize> = e.iter().filter(|&&v| local[v] != usize::MAX).map(|&v| local[v]).collect();
        restricted.sort_unstable();
        if restricted.len() >= 2 && !edges.contains(&restricted) {
            edges.push(restricted);
        }
    }
    let h = Hypergraph::new(visited.len(), edges).expect("restricted edges are valid");
    let identity: Vec<usize> = (0..visited.len()).collect();
    reindex_canonical(&h, &identity).expect("identity is a permutation")
}

fn certify(h: Hypergraph, task: Task, rng: &mut ChaCha8Rng) -> Option<Instance> {
    let mut inst = Instance::plain(h);
    match task {
        Task::ThreeColoring => {
            let c = find_3cl_bounded(&inst.graph, FEASIBILITY_BUDGET).found()?;
            inst.certificate = Some(Certificate::Coloring(c));
        }
        Task::StrictHypercycle => {
            let c = find_shc_bounded(&inst.graph, FEASIBILITY_BUDGET).found()?;
            if c.len() < 3 {
                return None;
            }
            inst.certificate = Some(Certificate::Cycle(c));
        }
        Task::HamiltonianPath => {
            let mut starts: Vec<usize> = (0..inst.graph.num_vertices()).collect();
            starts.shuffle(rng);
            let (s, t, p) = match find_any_hhm_bounded(&inst.graph, &starts, FEASIBILITY_BUDGET) {
                SearchOutcome::Found(x) => x,
                _ => return None,
            };
            inst.endpoints = Some((s, t));
            inst.certificate = Some(Certificate::Path(p));
        }
        _ => {}
    }
    Some(inst)
}

/// Dispatches on task and source. `pool` is required for real specs.
pub fn generate(spec: &GenSpec, pool: Option<&SourcePool>) -> Result<Instance> {
    if spec.task == Task::Isomorphism {
        // some bases admit no connected mutation; redraw the base from a derived seed
        let mut attempt = *spec;
        let mut result = gen_ism_pair(&attempt, pool);
        for k in 0..ISM_BASE_REDRAWS {
            if !matches!(result, Err(Error::GenerationFailure(_))) {
                break;
            }
            attempt.seed = seed::derive(spec.seed, &[k]);
            result = gen_ism_pair(&attempt, pool);
        }
        let (a, b, label) = result?;
        let mut inst = Instance::plain(a);
        inst.second = Some(b);
        inst.isomorphic = Some(label);
        return Ok(inst);
    }
    if spec.source == Source::Real {
        let pool = pool.ok_or_else(|| Error::contract("real source needs a source pool"))?;
        return real_instance(pool, spec);
    }
    Ok(match spec.task {
        Task::StrictHypercycle => {
            let (h, c) = gen_shc_instance(spec)?;
            Instance {
                certificate: Some(Certificate::Cycle(c)),
                ..Instance::plain(h)
            }
        }
        Task::HamiltonianPath => {
            let (h, s, t, c) = gen_hhm_instance(spec)?;
            Instance {
                endpoints: Some((s, t)),
                certificate: Some(Certificate::Path(c)),
                ..Instance::plain(h)
            }
        }
        Task::ThreeColoring => {
            let (h, c) = gen_3cl_instance(spec)?;
            Instance {
                certificate: Some(Certificate::Coloring(c)),
                ..Instance::plain(h)
            }
        }
        _ => Instance::plain(gen_random_connected(spec)?),
    })
}

/// Splits `total` into integer counts proportional to `weights` by largest
/// remainder; ties go to the earlier entry.
pub fn allocate(total: usize, weights: &[u32]) -> Vec<usize> {
    let sum: u64 = weights.iter().map(|&w| w as u64).sum();
    assert!(sum > 0, "weights must not all be zero");
    let exact: Vec<u64> = weights.iter().map(|&w| w as u64 * total as u64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|&x| (x / sum) as usize).collect();
    let mut rest = total - counts.iter().sum::<usize>();
    let mut by_remainder: Vec<usize> = (0..weights.len()).collect();
    by_remainder.sort_by_key(|&i| (std::cmp::Reverse(exact[i] % sum), i));
    for &i in by_remainder.iter().cycle() {
        if rest == 0 {
            break;
        }
        counts[i] += 1;
        rest -= 1;
    }
    counts
}

/// Stratified (scale, source) tags for `count` instances: each axis is split
/// by largest remainder, then the tags are shuffled with `seed`.
pub fn mix_assignments(
    count: usize,
    scale_weights: [u32; 3],
    source_weights: [u32; 2],
    seed: u64,
) -> Vec<(ScaleClass, Source)> {
    let scales: Vec<ScaleClass> = allocate(count, &scale_weights)
        .into_iter()
        .zip(ScaleClass::ALL)
        .flat_map(|(c, s)| std::iter::repeat_n(s, c))
        .collect();
    let mut sources: Vec<Source> = allocate(count, &source_weights)
        .into_iter()
        .zip(Source::ALL)
        .flat_map(|(c, s)| std::iter::repeat_n(s, c))
        .collect();
    let mut rng = seed::rng(seed);
    sources.shuffle(&mut rng);
    let mut tags: Vec<(ScaleClass, Source)> = scales.into_iter().zip(sources).collect();
    tags.shuffle(&mut rng);
    tags
}
