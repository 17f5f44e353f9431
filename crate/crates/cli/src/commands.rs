use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use cfreduce_core::conflict::build_conflict_graph;
use cfreduce_core::generate::{generate_planted, GeneratorSpec};
use cfreduce_core::graph::Graph;
use cfreduce_core::hypergraph::{happy_edges, Hypergraph};
use cfreduce_core::io::{self, ColoringDocument, TripleMap};
use cfreduce_core::reduction::{
    conflict_free_multicolor, verify_multicoloring, Outcome, ReductionConfig,
};
use cfreduce_core::slocal::{slocal_mis, SlocalSchedule};
use cfreduce_core::solvers::{
    measure_lambda, solver_by_name, ExactSolver, SolverReport, DEFAULT_CAP,
};
use cfreduce_core::Error;

use crate::manifest::RunManifest;
use crate::{Command, Failure};

type CmdResult = Result<(), Failure>;

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Build { hypergraph, k, out } => build(&hypergraph, k, &out),
        Command::Color {
            hypergraph,
            k,
            lambda,
            solver,
            seed,
            cap,
            max_phases,
            aggressive,
            timings,
            out,
        } => {
            let opts = ColorOptions {
                k,
                lambda,
                solver,
                seed,
                cap: resolve_cap(cap)?,
                max_phases,
                aggressive,
                timings,
            };
            color(&hypergraph, &opts, &out)
        }
        Command::Solve {
            graph,
            solver,
            cap,
            seed,
            measure,
            timings,
            out,
        } => solve(&graph, &solver, resolve_cap(cap)?, seed, measure, timings, &out),
        Command::Verify {
            hypergraph,
            coloring,
        } => verify(&hypergraph, &coloring),
        Command::Gen {
            n,
            m,
            k,
            eps,
            seed,
            out,
        } => gen(GeneratorSpec { n, m, k, eps, seed }, &out),
        Command::Slocal {
            graph,
            order,
            seed,
            out,
        } => slocal(&graph, &order, seed, out.as_deref()),
        Command::Bench {
            count,
            n,
            m,
            k,
            eps,
            seed,
            solver,
            cap,
            jobs,
            timings,
            out,
        } => {
            let spec = GeneratorSpec { n, m, k, eps, seed };
            bench(spec, count, &solver, resolve_cap(cap)?, jobs, timings, out.as_deref())
        }
    }
}

/// `--cap`, else `CFREDUCE_CAP`, else the library default.
fn resolve_cap(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("CFREDUCE_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("CFREDUCE_CAP='{v}' is not a vertex count"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| match e {
        Error::SizeLimit { .. } => Failure::Core(e),
        other => Failure::Usage(format!("{}: {other}", path.display())),
    }
}

fn load_hypergraph(path: &Path) -> Result<Hypergraph, Failure> {
    io::read_hypergraph(&read(path)?).map_err(with_path(path))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    io::read_dimacs(&read(path)?).map_err(with_path(path))
}

fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("record serializes") + "\n"
}

fn build(path: &Path, k: u32, out: &str) -> CmdResult {
    let h = load_hypergraph(path)?;
    let g = build_conflict_graph(&h, k)?;
    let mut manifest = RunManifest::new("build")
        .input(path.display())
        .set("k", k);
    manifest.write(format!("{out}.dimacs"), &io::write_dimacs(g.graph()))?;
    manifest.write(format!("{out}.triples.json"), &TripleMap::of(&g).to_json())?;
    manifest.save(out)?;
    Ok(())
}

struct ColorOptions {
    k: u32,
    lambda: f64,
    solver: String,
    seed: Option<u64>,
    cap: usize,
    max_phases: Option<usize>,
    aggressive: bool,
    timings: bool,
}

fn color(path: &Path, opts: &ColorOptions, out: &str) -> CmdResult {
    let h = load_hypergraph(path)?;
    let solver = solver_by_name(&opts.solver, opts.cap, opts.seed)?;
    let mut cfg = ReductionConfig::new(opts.k, opts.lambda, solver.as_ref());
    cfg.max_phases = opts.max_phases;
    cfg.aggressive_removal = opts.aggressive;
    let mut run = conflict_free_multicolor(&h, &cfg)?;

    let mut log = String::new();
    for record in &mut run.log {
        if !opts.timings {
            record.elapsed_ms = None;
        }
        log.push_str(&json_line(record));
    }
    let mut manifest = RunManifest::new("color")
        .input(path.display())
        .set("k", opts.k)
        .set("lambda", opts.lambda)
        .set("solver", opts.solver.as_str())
        .set("seed", opts.seed)
        .set("cap", opts.cap)
        .set("max_phases", opts.max_phases)
        .set("aggressive", opts.aggressive)
        .set("phase_budget", run.budget)
        .set("phases_used", run.log.len());
    manifest.write(format!("{out}.col.json"), &io::write_multicoloring(&run.assignment))?;
    manifest.write(format!("{out}.phases.jsonl"), &log)?;

    match &run.outcome {
        Outcome::PromiseViolation { surviving } => {
            let ids: Vec<String> = surviving.iter().map(|e| (e + 1).to_string()).collect();
            manifest = manifest.set("surviving_edges", surviving.iter().map(|e| e + 1).collect::<Vec<_>>());
            manifest.save(out)?;
            Err(Failure::PromiseViolation(format!(
                "{} edge(s) unhappy after {} phase(s): {}",
                surviving.len(),
                run.log.len(),
                ids.join(" ")
            )))
        }
        Outcome::Colored => {
            manifest.save(out)?;
            if verify_multicoloring(&h, &run.assignment)? {
                eprintln!(
                    "colored {} edges in {} phase(s) with {} colors",
                    h.m(),
                    run.log.len(),
                    run.assignment.colors_used()
                );
                Ok(())
            } else {
                Err(Failure::Rejected("multicoloring failed verification".into()))
            }
        }
    }
}

#[derive(Serialize)]
struct SolutionFile<'a> {
    solver: &'a str,
    size: usize,
    /// 1-based vertex ids.
    members: Vec<usize>,
}

fn solve(
    path: &Path,
    solver_name: &str,
    cap: usize,
    seed: Option<u64>,
    measure: bool,
    timings: bool,
    out: &str,
) -> CmdResult {
    let g = load_graph(path)?;
    let solver = solver_by_name(solver_name, cap, seed)?;
    let oracle = ExactSolver::with_cap(cap);
    let instance = path.display().to_string();

    let mut report = if measure || solver_name == "exact" {
        measure_lambda(&instance, &g, solver.as_ref(), &oracle)?
    } else {
        let start = std::time::Instant::now();
        let (s, stats) = solver.solve_with_stats(&g)?;
        SolverReport {
            instance: instance.clone(),
            solver: solver.name().to_string(),
            vertices: g.n(),
            edges: g.edge_count(),
            size: s.len(),
            alpha: None,
            ratio: None,
            elapsed_ms: Some(start.elapsed().as_secs_f64() * 1e3),
            nodes: stats.nodes,
        }
    };
    if !timings {
        report.elapsed_ms = None;
    }
    let s = solver.solve(&g)?;
    let solution = SolutionFile {
        solver: solver.name(),
        size: s.len(),
        members: s.members().iter().map(|v| v + 1).collect(),
    };

    let mut manifest = RunManifest::new("solve")
        .input(&instance)
        .set("solver", solver_name)
        .set("cap", cap)
        .set("seed", seed)
        .set("measure", measure);
    manifest.write(format!("{out}.is.json"), &json_line(&solution))?;
    manifest.write(format!("{out}.report.jsonl"), &json_line(&report))?;
    manifest.save(out)?;
    Ok(())
}

fn verify(hg_path: &Path, col_path: &Path) -> CmdResult {
    let h = load_hypergraph(hg_path)?;
    let doc = io::read_coloring_document(&read(col_path)?, h.n()).map_err(with_path(col_path))?;
    let ok = match &doc {
        ColoringDocument::Single(f) => happy_edges(&h, f)?.len() == h.m(),
        ColoringDocument::Multi(a) => verify_multicoloring(&h, a)?,
    };
    if ok {
        println!("conflict-free: all {} edges happy", h.m());
        Ok(())
    } else {
        let unhappy = match &doc {
            ColoringDocument::Single(f) => {
                let happy = happy_edges(&h, f)?;
                (0..h.m()).filter(|e| !happy.contains(e)).count()
            }
            ColoringDocument::Multi(a) => (0..h.m())
                .filter(|&e| {
                    let single = h.restrict(&[e]);
                    !verify_multicoloring(&single, a).unwrap_or(false)
                })
                .count(),
        };
        Err(Failure::Rejected(format!(
            "not conflict-free: {unhappy} of {} edges unhappy",
            h.m()
        )))
    }
}

fn gen(spec: GeneratorSpec, out: &str) -> CmdResult {
    let (h, f) = generate_planted(&spec)?;
    let mut manifest = RunManifest::new("gen")
        .set("n", spec.n)
        .set("m", spec.m)
        .set("k", spec.k)
        .set("eps", spec.eps)
        .set("seed", spec.seed);
    manifest.write(format!("{out}.hg"), &io::write_hypergraph(&h))?;
    manifest.write(format!("{out}.col.json"), &io::write_coloring(&f))?;
    manifest.save(out)?;
    Ok(())
}

#[derive(Serialize)]
struct Membership {
    order: String,
    size: usize,
    /// 1-based vertex ids.
    members: Vec<usize>,
}

fn parse_order(spec: &str, n: usize) -> Result<Vec<usize>, Failure> {
    spec.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
            _ => Err(Failure::Usage(format!("order entry '{t}' is not a vertex in 1..={n}"))),
        })
        .collect()
}

fn slocal(path: &Path, order: &str, seed: u64, out: Option<&str>) -> CmdResult {
    let g = load_graph(path)?;
    let (schedule, label) = match order {
        "identity" => (SlocalSchedule::identity(&g, 1), "identity".to_string()),
        "random" => (SlocalSchedule::random(&g, 1, seed), format!("random:{seed}")),
        list => (
            SlocalSchedule::new(&g, parse_order(list, g.n())?, 1)?,
            "explicit".to_string(),
        ),
    };
    let members = slocal_mis(&schedule)?;
    let text = json_line(&Membership {
        order: label,
        size: members.len(),
        members: members.iter().map(|v| v + 1).collect(),
    });
    match out {
        Some(prefix) => {
            let mut manifest = RunManifest::new("slocal")
                .input(path.display())
                .set("order", order)
                .set("seed", seed);
            manifest.write(format!("{prefix}.mis.json"), &text)?;
            manifest.save(prefix)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn bench(
    base: GeneratorSpec,
    count: u64,
    solver_name: &str,
    cap: usize,
    jobs: usize,
    timings: bool,
    out: Option<&str>,
) -> CmdResult {
    base.validate()?;
    let solver = solver_by_name(solver_name, cap, None)?;
    let oracle = ExactSolver::with_cap(cap);
    let measure_one = |i: u64| -> Result<Option<SolverReport>, Error> {
        let spec = GeneratorSpec {
            seed: base.seed.wrapping_add(i),
            ..base
        };
        let (h, _) = match generate_planted(&spec) {
            Ok(instance) => instance,
            Err(Error::Generation(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let g = build_conflict_graph(&h, base.k)?;
        if g.vertex_count() > cap {
            return Ok(None);
        }
        let mut report =
            measure_lambda(&format!("planted-{}", spec.seed), g.graph(), solver.as_ref(), &oracle)?;
        if !timings {
            report.elapsed_ms = None;
        }
        Ok(Some(report))
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let results: Vec<Result<Option<SolverReport>, Error>> =
        pool.install(|| (0..count).into_par_iter().map(measure_one).collect());

    let mut text = String::new();
    let mut skipped = 0;
    let mut worst: f64 = 1.0;
    for r in results {
        match r? {
            Some(report) => {
                worst = worst.max(report.ratio.unwrap_or(1.0));
                text.push_str(&json_line(&report));
            }
            None => skipped += 1,
        }
    }
    eprintln!(
        "{} instances measured, {skipped} skipped, worst ratio {worst:.4}",
        count - skipped
    );
    match out {
        Some(prefix) => {
            let mut manifest = RunManifest::new("bench")
                .set("n", base.n)
                .set("m", base.m)
                .set("k", base.k)
                .set("eps", base.eps)
                .set("seed", base.seed)
                .set("count", count)
                .set("solver", solver_name)
                .set("cap", cap)
                .set("jobs", jobs);
            manifest.write(format!("{prefix}.reports.jsonl"), &text)?;
            manifest.save(prefix)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}
