use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyperbench::bench::{self, compute_truth, EmitConfig, GroundTruth, MetaProblem, Params};
use hyperbench::generate::{self, SourcePool};
use hyperbench::grade::{self, MarkerChoice, ParseOptions};
use hyperbench::selfcheck;
use hyperbench::text_repr::{render_text, TextFormat};
use hyperbench::verify::{self, find_3cl, find_hhm, find_shc};
use hyperbench::visual_repr::{render_svg, render_svg_pair, RenderConfig, VisualFormat};
use hyperbench::{seed, Error, Hypergraph, Result, Task, VertexId};

/// Hypergraph benchmark toolkit: generate instances, render them, compute
/// ground truth, emit QA corpora and grade model answers.
#[derive(Parser, Debug)]
#[command(name = "hyperbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate meta problems and write their hypergraphs as JSON.
    Generate(GenerateArgs),
    /// Render a hypergraph in a textual or visual format.
    Render(RenderArgs),
    /// Compute the ground truth of one task instance.
    Solve(SolveArgs),
    /// Check a certificate; prints VALID or INVALID.
    Verify(VerifyArgs),
    /// Emit a full corpus: manifest, metas and SVG images.
    Emit(EmitArgs),
    /// Grade model responses against a manifest.
    Grade(GradeArgs),
    /// Build the best-representation dataset from model responses.
    Prm(GradeArgs),
    /// Run the built-in consistency suites.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_mix<const N: usize>(s: &str) -> std::result::Result<[u32; N], String> {
    let parts: Vec<u32> = s
        .split(':')
        .map(|p| p.trim().parse::<u32>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let mix: [u32; N] = parts.try_into().map_err(|_| format!("expected {N} ratios separated by `:`"))?;
    if mix.iter().all(|&w| w == 0) {
        return Err("ratios must not all be zero".into());
    }
    Ok(mix)
}

fn parse_vertex(s: &str) -> std::result::Result<VertexId, String> {
    let digits = s.trim().strip_prefix('v').unwrap_or(s.trim());
    digits.parse().map(VertexId).map_err(|e| format!("vertex `{s}`: {e}"))
}

#[derive(Args, Debug)]
struct MixArgs {
    /// Small:medium:large ratio.
    #[arg(long, default_value = "1:2:1", value_parser = parse_mix::<3>)]
    scale_mix: [u32; 3],
    /// Synthetic:real ratio.
    #[arg(long, default_value = "1:1", value_parser = parse_mix::<2>)]
    source_mix: [u32; 2],
    /// Source pool for real instances (hMETIS or JSON); a built-in
    /// co-authorship pool otherwise.
    #[arg(long)]
    pool: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    task: Task,
    #[arg(long)]
    seed: u64,
    /// Number of meta problems.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[command(flatten)]
    mix: MixArgs,
    #[arg(long, env = "HYPERBENCH_OUT")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Second hypergraph, drawn or described next to the first.
    #[arg(long)]
    second: Option<PathBuf>,
    /// A textual (e.g. HO-Neigh) or visual (e.g. Enc-Hy) format name.
    #[arg(long)]
    format: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    task: Task,
    #[arg(long)]
    graph: PathBuf,
    /// `G` for isomorphism.
    #[arg(long)]
    second: Option<PathBuf>,
    #[arg(long, value_parser = parse_vertex)]
    vertex: Option<VertexId>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_parser = parse_vertex)]
    source: Option<VertexId>,
    #[arg(long, value_parser = parse_vertex)]
    target: Option<VertexId>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// 3cl, shc or hhm.
    #[arg(long)]
    task: Task,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    cert: String,
    #[arg(long, value_parser = parse_vertex)]
    source: Option<VertexId>,
    #[arg(long, value_parser = parse_vertex)]
    target: Option<VertexId>,
}

#[derive(Args, Debug)]
struct EmitArgs {
    #[arg(long)]
    seed: u64,
    /// Meta problems per task.
    #[arg(long)]
    per_task: usize,
    #[command(flatten)]
    mix: MixArgs,
    /// DVC/OEC ask about values absent from the graph (answer 0).
    #[arg(long)]
    zero_probes: bool,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, env = "HYPERBENCH_OUT")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GradeArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// JSONL of `{"sample_id", "raw_text"}`.
    #[arg(long)]
    responses: PathBuf,
    /// Accept answers with minor format deviations (flagged). The default.
    #[arg(long, conflicts_with = "strict")]
    lenient: bool,
    /// Accept only the exact answer format.
    #[arg(long)]
    strict: bool,
    /// Use the first `Ans:` marker instead of the last.
    #[arg(long)]
    first_marker: bool,
    #[arg(long, env = "HYPERBENCH_OUT")]
    out: PathBuf,
}

impl GradeArgs {
    fn options(&self) -> ParseOptions {
        ParseOptions {
            lenient: !self.strict,
            marker: if self.first_marker { MarkerChoice::First } else { MarkerChoice::Last },
        }
    }
}

enum Outcome {
    Done,
    Failed,
}

fn read_graph(path: &Path) -> Result<Hypergraph> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    if path.extension().is_some_and(|x| x == "json") {
        Hypergraph::from_json(&text)
    } else {
        Hypergraph::parse_hmetis(&text)
    }
}

fn write(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
    }
    fs::write(path, body).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn load_pool(path: Option<&Path>) -> Result<SourcePool> {
    match path {
        Some(p) => SourcePool::load(p),
        None => Ok(SourcePool::builtin()),
    }
}

fn generate(a: &GenerateArgs) -> Result<Outcome> {
    let pool = load_pool(a.mix.pool.as_deref())?;
    let tags = generate::mix_assignments(a.count, a.mix.scale_mix, a.mix.source_mix, seed::derive(a.seed, &[0]));
    let mut metas = String::new();
    for (i, (scale, source)) in tags.into_iter().enumerate() {
        let id = format!("{}-{i:04}", a.task.slug());
        let meta = MetaProblem::build(&id, a.task, scale, source, seed::derive(a.seed, &[1, i as u64]), Some(&pool), false)?;
        write(&a.out.join(format!("{id}.json")), &meta.graph.to_json())?;
        if let Some(g) = &meta.second {
            write(&a.out.join(format!("{id}-second.json")), &g.to_json())?;
        }
        metas.push_str(&bench::to_jsonl_line(&meta)?);
        metas.push('\n');
        println!("{id}: {} vertices, {} hyperedges ({scale}, {source})", meta.graph.num_vertices(), meta.graph.num_edges());
    }
    write(&a.out.join(bench::METAS_FILE), &metas)?;
    Ok(Outcome::Done)
}

fn render(a: &RenderArgs) -> Result<Outcome> {
    let h = read_graph(&a.graph)?;
    let second = a.second.as_deref().map(read_graph).transpose()?;
    let body = if let Ok(fmt) = a.format.parse::<TextFormat>() {
        match &second {
            Some(g) => format!("{}\n\n{}", hyperbench::text_repr::render_text_named(&h, fmt, "H"), render_text(g, fmt)),
            None => render_text(&h, fmt),
        }
    } else {
        let fmt: VisualFormat = a.format.parse()?;
        let cfg = RenderConfig::new(a.seed);
        match &second {
            Some(g) => render_svg_pair(&h, g, fmt, &cfg)?,
            None => render_svg(&h, fmt, &cfg)?,
        }
    };
    match &a.out {
        Some(path) => write(path, &body)?,
        None => println!("{body}"),
    }
    Ok(Outcome::Done)
}

fn solve(a: &SolveArgs) -> Result<Outcome> {
    let h = read_graph(&a.graph)?;
    let second = a.second.as_deref().map(read_graph).transpose()?;
    let params = Params {
        vertex: a.vertex,
        degree: a.degree,
        order: a.order,
        source: a.source,
        target: a.target,
    };
    let need = |v: Option<VertexId>, what: &str| v.ok_or_else(|| Error::Contract(format!("--{what} is required")));
    let truth = match a.task {
        Task::ThreeColoring => find_3cl(&h).map(GroundTruth::Coloring),
        Task::StrictHypercycle => find_shc(&h).map(GroundTruth::Cycle),
        Task::HamiltonianPath => find_hhm(&h, need(a.source, "source")?, need(a.target, "target")?).map(GroundTruth::Path),
        task => Some(compute_truth(task, &h, second.as_ref(), &params)?),
    };
    match truth {
        Some(t) => {
            let spec = bench::AnswerSpec {
                truth: t,
                format: bench::answer_format(a.task).to_string(),
                graph: None,
                endpoints: None,
            };
            let line = grade::canonical_response(a.task, &spec);
            println!("{}", line.trim_start_matches("Ans: "));
        }
        None => println!("none"),
    }
    Ok(Outcome::Done)
}

fn verify_cert(a: &VerifyArgs) -> Result<Outcome> {
    let h = read_graph(&a.graph)?;
    let valid = match a.task {
        Task::ThreeColoring => verify::verify_3cl(&h, &verify::parse_coloring(&a.cert)?)?,
        Task::StrictHypercycle => verify::verify_shc(&h, &verify::parse_sequence(&a.cert, "Cycle:")?)?,
        Task::HamiltonianPath => {
            let (Some(s), Some(t)) = (a.source, a.target) else {
                return Err(Error::Contract("hhm needs --source and --target".into()));
            };
            verify::verify_hhm(&h, &verify::parse_sequence(&a.cert, "Path:")?, s, t)?
        }
        other => return Err(Error::Contract(format!("{other} has no certificate verifier"))),
    };
    println!("{}", if valid { "VALID" } else { "INVALID" });
    Ok(if valid { Outcome::Done } else { Outcome::Failed })
}

fn emit(a: &EmitArgs) -> Result<Outcome> {
    let pool = load_pool(a.mix.pool.as_deref())?;
    let mut cfg = EmitConfig::uniform(a.seed, a.per_task);
    cfg.scale_weights = a.mix.scale_mix;
    cfg.source_weights = a.mix.source_mix;
    cfg.zero_probes = a.zero_probes;
    cfg.jobs = a.jobs;
    let summary = bench::emit_corpus(&cfg, &pool, &a.out)?;
    println!("{} meta problems, {} samples -> {}", summary.metas, summary.samples, summary.manifest.display());
    Ok(Outcome::Done)
}

fn grade_cmd(a: &GradeArgs) -> Result<Outcome> {
    let manifest = bench::read_manifest(&a.manifest)?;
    let responses = grade::read_responses(&a.responses)?;
    let records = grade::grade_responses(&responses, &manifest, &a.options())?;
    let table = grade::aggregate(&records, &manifest)?;
    write(&a.out.join("grades.jsonl"), &grade::records_to_jsonl(&records)?)?;
    write(&a.out.join("accuracy.csv"), &table.to_csv())?;
    let correct = records.iter().filter(|r| r.correct).count();
    println!("{correct}/{} correct", records.len());
    Ok(Outcome::Done)
}

fn prm(a: &GradeArgs) -> Result<Outcome> {
    let manifest = bench::read_manifest(&a.manifest)?;
    let responses = grade::read_responses(&a.responses)?;
    let records = grade::grade_responses(&responses, &manifest, &a.options())?;
    let out = grade::build_prm(&records, &manifest)?;
    let mut body = String::new();
    for row in &out.rows {
        body.push_str(&bench::to_jsonl_line(row)?);
        body.push('\n');
    }
    write(&a.out.join("prm.jsonl"), &body)?;
    println!(
        "{} pairs, {} metas skipped, {} all-tie metas",
        out.pairs.len(),
        out.skipped.len(),
        out.degenerate.len()
    );
    Ok(Outcome::Done)
}

fn run_selfcheck(seed: u64) -> Result<Outcome> {
    let checks = selfcheck::run_all(seed)?;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(if checks.iter().all(|c| c.passed) { Outcome::Done } else { Outcome::Failed })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Render(a) => render(a),
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify_cert(a),
        Command::Emit(a) => emit(a),
        Command::Grade(a) => grade_cmd(a),
        Command::Prm(a) => prm(a),
        Command::Selfcheck { seed } => run_selfcheck(*seed),
    };
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
