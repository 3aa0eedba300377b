//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line is printed; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hyperbench::bench::{build_metas, expand, EmitConfig, GroundTruth, MetaProblem, QaSample};
use hyperbench::generate::{self, GenSpec, ScaleClass, Source, SourcePool};
use hyperbench::grade::{canonical_response, grade_one, judge, Answer, ParseOptions};
use hyperbench::selfcheck::{self, h_star};
use hyperbench::text_repr::{parse_honeigh, parse_incmat, parse_nset, render_text, TextFormat};
use hyperbench::verify::{verify_3cl, verify_hhm, verify_shc, Color, HyperedgeSequence};
use hyperbench::visual_repr::{count_class, render_svg, texts_of_class, RenderConfig, VisualFormat};
use hyperbench::{seed, Hypergraph, Task, VertexId};

const MASTER: u64 = 20_240_601;
const ORACLE_GRAPHS: usize = 500;
const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const CONSTRUCTOR_RUNS: usize = 1_000;
const STRUCTURAL_RUNS: usize = 4_000;
const SIGMAS: f64 = 3.0;
const ROUND_TRIPS: u64 = 1_000;
const EMIT_SMALL_LIMIT: Duration = Duration::from_secs(300);
const VISUAL_SAMPLES: usize = 200;

type Outcome = Result<String, String>;
type Parser = fn(&str) -> hyperbench::Result<Hypergraph>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(failures: Vec<String>, ok: impl Into<String>) -> Outcome {
    match failures.first() {
        None => Ok(ok.into()),
        Some(first) => Err(format!("{} failures, first: {first}", failures.len())),
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mismatches = selfcheck::oracle_mismatches(ORACLE_GRAPHS, MASTER).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    if took > ORACLE_LIMIT {
        return Err(format!("took {took:?}, limit {ORACLE_LIMIT:?}"));
    }
    check(mismatches, format!("{ORACLE_GRAPHS} graphs, 0 mismatches in {took:.1?}"))
}

fn constructor_soundness() -> Outcome {
    let failures = selfcheck::constructor_failures(CONSTRUCTOR_RUNS, MASTER).map_err(|e| e.to_string())?;
    check(failures, format!("{CONSTRUCTOR_RUNS} each of SHC, HHM, 3-CL and ISM"))
}

/// `|observed - n p| <= 3 sqrt(n p (1 - p))` for every category.
fn within_band(counts: &[usize], weights: &[f64]) -> Result<(), String> {
    let n: usize = counts.iter().sum();
    let total: f64 = weights.iter().sum();
    for (i, (&c, &w)) in counts.iter().zip(weights).enumerate() {
        let p = w / total;
        let mean = n as f64 * p;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        if (c as f64 - mean).abs() > SIGMAS * sd {
            return Err(format!("category {i}: {c} vs expected {mean:.1} (sd {sd:.1})"));
        }
    }
    Ok(())
}

fn structural_constraints() -> Outcome {
    let pool = SourcePool::builtin();
    let tags = generate::mix_assignments(STRUCTURAL_RUNS, [1, 2, 1], [1, 1], seed::derive(MASTER, &[3]));
    let mut failures = Vec::new();
    let mut scales = [0usize; 3];
    let mut sources = [0usize; 2];
    for (i, &(scale, source)) in tags.iter().enumerate() {
        scales[ScaleClass::ALL.iter().position(|&s| s == scale).unwrap()] += 1;
        sources[Source::ALL.iter().position(|&s| s == source).unwrap()] += 1;
        let spec = GenSpec {
            task: Task::ALL[i % Task::ALL.len()],
            scale,
            source,
            seed: seed::derive(MASTER, &[3, i as u64]),
        };
        let inst = match generate::generate(&spec, Some(&pool)) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("{i}: {e}"));
                continue;
            }
        };
        for h in std::iter::once(&inst.graph).chain(inst.second.as_ref()) {
            let n = h.num_vertices();
            if !h.is_connected() {
                failures.push(format!("{i} ({}): disconnected", spec.task));
            }
            if ScaleClass::classify(n) != Some(scale) {
                failures.push(format!("{i} ({}): {n} vertices outside {scale}", spec.task));
            }
            let (lo, hi) = generate::density_range(n);
            if source == Source::Synthetic && !(lo..=hi).contains(&h.num_edges()) {
                failures.push(format!("{i} ({}): {} hyperedges outside [{lo}, {hi}]", spec.task, h.num_edges()));
            }
        }
    }
    within_band(&scales, &[1.0, 2.0, 1.0]).map_err(|e| format!("scale mix: {e}"))?;
    within_band(&sources, &[1.0, 1.0]).map_err(|e| format!("source mix: {e}"))?;
    check(
        failures,
        format!("{STRUCTURAL_RUNS} instances connected and in band; scales {scales:?}, sources {sources:?}"),
    )
}

fn serializer_fidelity() -> Outcome {
    let mut failures = selfcheck::golden_mismatches();
    for s in 0..ROUND_TRIPS {
        let h = selfcheck::random_small(seed::derive(MASTER, &[4, s]), 20, 30);
        let checks: [(TextFormat, Parser); 3] = [
            (TextFormat::NSet, parse_nset),
            (TextFormat::IncMat, parse_incmat),
            (TextFormat::HoNeigh, parse_honeigh),
        ];
        for (fmt, parse) in checks {
            match parse(&render_text(&h, fmt)) {
                Ok(back) if back == h => {}
                Ok(_) => failures.push(format!("{fmt} graph {s}: different hypergraph")),
                Err(e) => failures.push(format!("{fmt} graph {s}: {e}")),
            }
        }
    }
    check(failures, format!("7 golden files; {ROUND_TRIPS} round trips each for N-Set, Inc-Mat, HO-Neigh"))
}

fn run_emit(per_task: usize, out: &Path, jobs: usize) -> Result<Duration, String> {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_hyperbench"))
        .args(["emit", "--seed", "7", "--per-task", &per_task.to_string(), "--jobs", &jobs.to_string(), "--out"])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(String::from_utf8_lossy(&status.stderr).into_owned());
    }
    Ok(start.elapsed())
}

fn lines(path: &Path) -> Result<usize, String> {
    Ok(std::fs::read_to_string(path).map_err(|e| e.to_string())?.lines().count())
}

fn corpus_arithmetic() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b, big) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("big"));
    let took = run_emit(10, &a, 4)?;
    run_emit(10, &b, 1)?;
    let small = lines(&a.join("manifest.jsonl"))?;
    if small != 4_200 || took > EMIT_SMALL_LIMIT {
        return Err(format!("--per-task 10 gave {small} samples in {took:?}"));
    }
    let (x, y) = (std::fs::read(a.join("manifest.jsonl")), std::fs::read(b.join("manifest.jsonl")));
    if x.map_err(|e| e.to_string())? != y.map_err(|e| e.to_string())? {
        return Err("same seed gave different manifest bytes".into());
    }
    run_emit(200, &big, 8)?;
    let (metas, samples) = (lines(&big.join("metas.jsonl"))?, lines(&big.join("manifest.jsonl"))?);
    if (metas, samples) != (2_400, 84_000) {
        return Err(format!("--per-task 200 gave {metas} metas and {samples} samples"));
    }
    Ok(format!("200/task: 2400 metas, 84000 samples; 10/task: 4200 samples in {took:.1?}; reruns byte-identical"))
}

fn numbered(prefix: char, count: usize) -> BTreeSet<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

fn visual_invariants() -> Outcome {
    let pool = SourcePool::builtin();
    let metas = build_metas(&EmitConfig::uniform(MASTER, VISUAL_SAMPLES.div_ceil(12)), &pool)
        .map_err(|e| e.to_string())?;
    let mut failures = Vec::new();
    for meta in metas.iter().take(VISUAL_SAMPLES) {
        let h = &meta.graph;
        let cfg = RenderConfig::new(seed::derive(meta.seed, &[2]));
        let incidences: usize = h.edges().iter().map(Vec::len).sum();
        let edge_ids: BTreeSet<String> = numbered('e', h.num_edges());
        for fmt in VisualFormat::ALL {
            let (Ok(svg), Ok(again)) = (render_svg(h, fmt, &cfg), render_svg(h, fmt, &cfg)) else {
                failures.push(format!("{} {fmt}: render error", meta.id));
                continue;
            };
            if svg != again {
                failures.push(format!("{} {fmt}: not deterministic", meta.id));
            }
            let vlabels: BTreeSet<String> = texts_of_class(&svg, "vlabel").into_iter().collect();
            if vlabels != numbered('v', h.num_vertices()) {
                failures.push(format!("{} {fmt}: vertex labels incomplete", meta.id));
            }
            let elabels: BTreeSet<String> = match fmt {
                VisualFormat::CliExp => texts_of_class(&svg, "plabel")
                    .iter()
                    .flat_map(|t| t.split(',').map(str::to_string).collect::<Vec<_>>())
                    .collect(),
                _ => texts_of_class(&svg, "elabel").into_iter().collect(),
            };
            if elabels != edge_ids {
                failures.push(format!("{} {fmt}: hyperedge labels incomplete", meta.id));
            }
            match fmt {
                VisualFormat::CliExp => {
                    let segments = count_class(&svg, "clique");
                    let pairs = h.co_occurrences().len();
                    let npair = render_text(h, TextFormat::NPair).matches("(v").count();
                    if segments != pairs || segments != npair {
                        failures.push(format!("{}: {segments} segments, {pairs} pairs, {npair} in N-Pair", meta.id));
                    }
                }
                VisualFormat::BiInc | VisualFormat::ShInc | VisualFormat::StInc => {
                    let lines = count_class(&svg, "incidence");
                    if lines != incidences {
                        failures.push(format!("{} {fmt}: {lines} incidence lines vs {incidences}", meta.id));
                    }
                }
                VisualFormat::EncHy => {}
            }
        }
    }
    let star = render_svg(&h_star(), VisualFormat::CliExp, &RenderConfig::new(0)).map_err(|e| e.to_string())?;
    if count_class(&star, "clique") != 7 {
        failures.push(format!("reference graph Cli-Exp has {} segments", count_class(&star, "clique")));
    }
    check(failures, format!("{VISUAL_SAMPLES} metas x 5 formats; reference Cli-Exp has 7 segments"))
}

/// A wrong answer one step away from the truth.
fn corrupt(meta: &MetaProblem) -> Answer {
    let h = &meta.graph;
    match &meta.ground_truth {
        GroundTruth::Count(n) => Answer::Integer(*n as u64 + 1),
        GroundTruth::PathLength(w) => Answer::Integer(w.map_or(0, |w| w + 1)),
        GroundTruth::Flow(f) => Answer::Integer(f + 1),
        GroundTruth::YesNo(b) => Answer::YesNo(!b),
        GroundTruth::VertexSet(s) => {
            let mut wrong = s.clone();
            let outsider = h.vertices().find(|v| !s.contains(v)).expect("some vertex is not a neighbor of itself");
            if let Some(&first) = s.iter().next() {
                wrong.remove(&first);
            }
            wrong.insert(outsider);
            Answer::VertexSet(wrong)
        }
        GroundTruth::Coloring(c) => {
            // recolour one vertex so that some hyperedge becomes monochromatic
            for e in h.edges() {
                let colors: BTreeSet<Color> = e.iter().map(|&v| c.get(VertexId(v)).unwrap()).collect();
                if colors.len() == 2 {
                    let target = c.get(VertexId(e[0])).unwrap();
                    if let Some(&v) = e.iter().find(|&&v| c.get(VertexId(v)).unwrap() != target) {
                        let mut wrong = c.clone();
                        wrong.0.insert(VertexId(v), target);
                        if !verify_3cl(h, &wrong).unwrap() {
                            return Answer::Coloring(wrong);
                        }
                    }
                }
            }
            panic!("{}: no single-vertex violating recolouring", meta.id)
        }
        GroundTruth::Cycle(seq) | GroundTruth::Path(seq) => {
            let endpoints = (meta.params.source, meta.params.target);
            let valid = |s: &HyperedgeSequence| match (&meta.ground_truth, endpoints) {
                (GroundTruth::Cycle(_), _) => verify_shc(h, s).unwrap_or(false),
                (_, (Some(a), Some(b))) => verify_hhm(h, s, a, b).unwrap_or(false),
                _ => false,
            };
            for pos in 0..seq.len() {
                for e in 0..h.num_edges() {
                    let mut wrong = seq.clone();
                    wrong.0[pos] = hyperbench::HyperedgeId(e);
                    if wrong != *seq && !valid(&wrong) {
                        return Answer::Sequence(wrong);
                    }
                }
            }
            panic!("{}: no single-step violating mutation", meta.id)
        }
    }
}

fn grading_self_consistency() -> Outcome {
    let pool = SourcePool::builtin();
    let metas = build_metas(&EmitConfig::uniform(MASTER, 10), &pool)
        .map_err(|e| e.to_string())?;
    let strict = ParseOptions {
        lenient: false,
        ..ParseOptions::default()
    };
    let mut failures = Vec::new();
    let mut samples = 0;
    let mut corrupted = 0;
    for meta in &metas {
        let all: Vec<QaSample> = expand(meta).map_err(|e| e.to_string())?;
        let wrong = corrupt(meta);
        for s in &all {
            samples += 1;
            if !grade_one(s, &canonical_response(meta.task, &s.answer_spec), &strict).correct {
                failures.push(format!("{}: canonical answer graded wrong", s.sample_id));
            }
            corrupted += 1;
            if judge(&s.answer_spec, &wrong).correct {
                failures.push(format!("{}: corrupted answer graded right", s.sample_id));
            }
        }
    }
    if samples != 4_200 {
        failures.push(format!("{samples} samples instead of 4200"));
    }
    check(failures, format!("{samples} canonical answers 100% correct; {corrupted} corrupted answers 0% correct"))
}

fn prm_construction() -> Outcome {
    use hyperbench::bench::RepCombo;
    use hyperbench::grade::{build_prm, grade_responses, ModelResponse};
    // three metas, three responses per sample; hand-set correct counts per combo
    let combos = RepCombo::all();
    let mut manifest = Vec::new();
    let mut responses = Vec::new();
    let mut expected: Vec<(String, RepCombo)> = Vec::new();
    let mut graphs: Vec<(String, Hypergraph)> = Vec::new();
    for (k, id) in ["vc-0000", "vc-0001", "vc-0002"].into_iter().enumerate() {
        let meta = MetaProblem::build(id, Task::VertexCount, ScaleClass::Small, Source::Synthetic, k as u64, None, false)
            .map_err(|e| e.to_string())?;
        let GroundTruth::Count(n) = meta.ground_truth else { unreachable!() };
        graphs.push((id.to_string(), meta.graph.clone()));
        for (i, s) in expand(&meta).map_err(|e| e.to_string())?.into_iter().enumerate() {
            // meta 0: combo 4 scores 3/3, combo 9 scores 2/3, the rest 1/3
            // meta 1: combos 2 and 30 tie at 2/3, the rest 1/3
            // meta 2: nothing correct
            let right = match (k, i) {
                (0, 4) => 3,
                (0, 9) | (1, 2) | (1, 30) => 2,
                (2, _) => 0,
                _ => 1,
            };
            for r in 0..3 {
                let answer = if r < right { n } else { n + 1 };
                responses.push(ModelResponse {
                    sample_id: s.sample_id.clone(),
                    raw_text: format!("Counting... Ans: {answer}"),
                });
            }
            manifest.push(s);
        }
        match k {
            0 => expected.push((id.into(), combos[4])),
            1 => expected.extend([(id.into(), combos[2]), (id.into(), combos[30])]),
            _ => expected.extend(combos.iter().map(|&c| (id.to_string(), c))),
        }
    }
    let records = grade_responses(&responses, &manifest, &ParseOptions::default()).map_err(|e| e.to_string())?;
    let out = build_prm(&records, &manifest).map_err(|e| e.to_string())?;
    let mut got: Vec<(String, RepCombo)> = out.pairs.iter().map(|p| (p.meta_id.clone(), p.combo)).collect();
    got.sort();
    expected.sort();
    if got != expected {
        return Err(format!("got {} pairs, expected {}", got.len(), expected.len()));
    }
    if out.degenerate != vec!["vc-0002".to_string()] {
        return Err(format!("degenerate metas {:?}", out.degenerate));
    }
    let ho_neigh = out.rows.iter().all(|r| {
        let graph = &graphs.iter().find(|(id, _)| *id == r.meta_id).expect("known meta").1;
        r.input_text.starts_with(&render_text(graph, TextFormat::HoNeigh)) && r.input_text.ends_with("Ans:\".")
    });
    if !ho_neigh {
        return Err("router input is not the HO-Neigh prompt".into());
    }
    Ok("unique best, two-way tie and all-zero tie (35 rows) match hand computation".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 constructor soundness", constructor_soundness),
        ("3 structural constraints", structural_constraints),
        ("4 serializer fidelity", serializer_fidelity),
        ("5 corpus arithmetic", corpus_arithmetic),
        ("6 visual invariants", visual_invariants),
        ("7 grading self-consistency", grading_self_consistency),
        ("8 PRM construction", prm_construction),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{took:.1?}]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail} [{took:.1?}]");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
