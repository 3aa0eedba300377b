//! Built-in consistency suites: solver/oracle equivalence, golden text
//! renderings, constructor soundness and grading of canonical answers.

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::bench::{expand, MetaProblem};
use crate::error::Result;
use crate::generate::{self, GenSpec, ScaleClass, Source, SourcePool};
use crate::grade::{canonical_response, grade_one, ParseOptions};
use crate::hypergraph::Hypergraph;
use crate::seed;
use crate::solve::oracle::{oracle_ism, oracle_omf, oracle_osp};
use crate::solve::{solve_ism, solve_omf, solve_osp};
use crate::task::Task;
use crate::text_repr::{render_text, TextFormat};
use crate::verify::{verify_3cl, verify_hhm, verify_shc};

/// The reference hypergraph of the golden files.
pub fn h_star() -> Hypergraph {
    Hypergraph::new(5, vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4]]).expect("valid")
}

pub const GOLDEN: [(TextFormat, &str); 7] = [
    (TextFormat::LoInc, include_str!("../fixtures/text/lo-inc.txt")),
    (TextFormat::NPair, include_str!("../fixtures/text/n-pair.txt")),
    (TextFormat::AdjMat, include_str!("../fixtures/text/adj-mat.txt")),
    (TextFormat::HoNeigh, include_str!("../fixtures/text/ho-neigh.txt")),
    (TextFormat::HoInc, include_str!("../fixtures/text/ho-inc.txt")),
    (TextFormat::NSet, include_str!("../fixtures/text/n-set.txt")),
    (TextFormat::IncMat, include_str!("../fixtures/text/inc-mat.txt")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from_failures(name: &str, runs: usize, failures: Vec<String>) -> Check {
        Check {
            name: name.to_string(),
            passed: failures.is_empty(),
            detail: match failures.first() {
                None => format!("{runs} cases"),
                Some(first) => format!("{} of {runs} failed, first: {first}", failures.len()),
            },
        }
    }
}

/// A random hypergraph with 2 to `max_n` vertices and up to `max_m`
/// hyperedges of order 2 to 6; it may be disconnected.
pub fn random_small(seed: u64, max_n: usize, max_m: usize) -> Hypergraph {
    let mut rng = seed::rng(seed);
    let n = rng.gen_range(2..=max_n);
    let m = rng.gen_range(0..=max_m);
    let edges = (0..m)
        .map(|_| {
            let k = rng.gen_range(2..=n.min(6));
            index::sample(&mut rng, n, k).into_vec()
        })
        .collect();
    Hypergraph::new(n, edges).expect("valid by construction")
}

/// A second graph for isomorphism checks: a relabelling of `h`, sometimes
/// with one hyperedge member moved.
fn partner(h: &Hypergraph, seed: u64) -> Hypergraph {
    let mut rng = seed::rng(seed);
    let mut perm: Vec<usize> = (0..h.num_vertices()).collect();
    perm.shuffle(&mut rng);
    let b = h.relabel(&perm).expect("permutation");
    if h.num_edges() == 0 || rng.gen_bool(0.5) {
        return b;
    }
    let mut edges = b.edges().to_vec();
    let j = rng.gen_range(0..edges.len());
    let outside: Vec<usize> = (0..h.num_vertices()).filter(|v| !edges[j].contains(v)).collect();
    if let Some(&w) = outside.choose(&mut rng) {
        let slot = rng.gen_range(0..edges[j].len());
        edges[j][slot] = w;
    }
    Hypergraph::new(h.num_vertices(), edges).expect("distinct members")
}

/// Solver/oracle disagreements over `count` seeded graphs with at most 8
/// vertices and 8 hyperedges: OSP and OMF over every ordered pair, ISM
/// against a partner graph.
pub fn oracle_mismatches(count: usize, master: u64) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for i in 0..count as u64 {
        let h = random_small(seed::derive(master, &[i, 0]), 8, 8);
        for s in h.vertices() {
            for t in h.vertices() {
                if s == t {
                    continue;
                }
                let (a, b) = (solve_osp(&h, s, t)?.total_weight(), oracle_osp(&h, s, t)?.total_weight());
                if a != b {
                    out.push(format!("graph {i}: osp {s}->{t} solver {a:?} oracle {b:?}"));
                }
                let (a, b) = (solve_omf(&h, s, t)?.value, oracle_omf(&h, s, t)?.value);
                if a != b {
                    out.push(format!("graph {i}: omf {s}->{t} solver {a} oracle {b}"));
                }
            }
        }
        let g = partner(&h, seed::derive(master, &[i, 1]));
        let (a, b) = (solve_ism(&h, &g), oracle_ism(&h, &g)?);
        if a != b {
            out.push(format!("graph {i}: ism solver {a} oracle {b}"));
        }
    }
    Ok(out)
}

pub fn golden_mismatches() -> Vec<String> {
    let h = h_star();
    GOLDEN
        .iter()
        .filter(|(fmt, expected)| render_text(&h, *fmt) != *expected)
        .map(|(fmt, _)| format!("{fmt} differs from its golden file"))
        .collect()
}

/// Certificates planted by the Level-4 constructors that fail verification.
pub fn constructor_failures(count: usize, master: u64) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for i in 0..count as u64 {
        let scale = ScaleClass::ALL[i as usize % 3];
        let spec = |task: Task| GenSpec {
            task,
            scale,
            source: Source::Synthetic,
            seed: seed::derive(master, &[task.index() as u64, i]),
        };
        let (h, c) = generate::gen_shc_instance(&spec(Task::StrictHypercycle))?;
        if !verify_shc(&h, &c)? {
            out.push(format!("shc {i}"));
        }
        let (h, s, t, c) = generate::gen_hhm_instance(&spec(Task::HamiltonianPath))?;
        if !verify_hhm(&h, &c, s, t)? {
            out.push(format!("hhm {i}"));
        }
        let (h, c) = generate::gen_3cl_instance(&spec(Task::ThreeColoring))?;
        if !verify_3cl(&h, &c)? {
            out.push(format!("3cl {i}"));
        }
        let pair = generate::generate(&spec(Task::Isomorphism), None)?;
        let (Some(b), Some(label)) = (&pair.second, pair.isomorphic) else {
            out.push(format!("ism {i}: no pair"));
            continue;
        };
        if solve_ism(&pair.graph, b) != label {
            out.push(format!("ism {i}"));
        }
    }
    Ok(out)
}

/// Metas whose canonical answers do not grade as correct on every sample.
pub fn grading_failures(per_task: usize, master: u64, pool: &SourcePool) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let opts = ParseOptions {
        lenient: false,
        ..ParseOptions::default()
    };
    for task in Task::ALL {
        for i in 0..per_task as u64 {
            let source = Source::ALL[i as usize % 2];
            let scale = ScaleClass::ALL[i as usize % 3];
            let meta = MetaProblem::build(
                format!("{}-{i:04}", task.slug()),
                task,
                scale,
                source,
                seed::derive(master, &[task.index() as u64, i]),
                Some(pool),
                false,
            )?;
            for s in expand(&meta)? {
                if !grade_one(&s, &canonical_response(task, &s.answer_spec), &opts).correct {
                    out.push(s.sample_id);
                }
            }
        }
    }
    Ok(out)
}

pub fn run_all(master: u64) -> Result<Vec<Check>> {
    let pool = SourcePool::builtin();
    Ok(vec![
        Check::from_failures("oracle equivalence", 200, oracle_mismatches(200, master)?),
        Check::from_failures("golden text renderings", GOLDEN.len(), golden_mismatches()),
        Check::from_failures("constructor soundness", 4 * 100, constructor_failures(100, master)?),
        Check::from_failures("canonical answers grade correct", 12 * 4 * 35, grading_failures(4, master, &pool)?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_files_match() {
        assert!(golden_mismatches().is_empty());
    }

    #[test]
    fn small_oracle_sweep() {
        assert_eq!(oracle_mismatches(30, 1).unwrap(), Vec::<String>::new());
    }

    #[test]
    fn random_small_is_bounded() {
        for s in 0..100 {
            let h = random_small(s, 8, 8);
            assert!(h.num_vertices() <= 8 && h.num_edges() <= 8);
        }
    }
}
