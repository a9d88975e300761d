//! `basp`: minimum-time routing under speed and acceleration bounds.
//!
//! Subcommands: `solve` an instance file with a chosen solver, `generate`
//! random instances, `bench` solver wall times over instance families,
//! `export-profile` a route's speed profile as CSV, and `oracle` to
//! cross-check the search against exhaustive enumeration.
//!
//! Exit codes: 0 success; 1 internal or input error; 2 no route or
//! infeasible profile; 3 saturation violation (fixed-window solver only);
//! 64 command-line usage error. `BASP_GRID_STEP` sets a default grid step
//! for `--grid-step`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use basp_cli::format::{load_instance, render_instance, save_instance};
use basp_cli::report::{Report, StatsDto, ViolationDto};
use basp_core::{
    adaptive_astar_opts, astar_k_opts, brute_force_with, concat_bounds, dijkstra_extended_opts,
    one_basp, plan_speed_with, random_instance, relaxed_arc_time, EndSpeed, Engine,
    GeneratorParams, NodeId, OracleError, RoadGraph, SearchError, SolveOptions, SpeedProfile,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const EXIT_ERROR: u8 = 1;
const EXIT_NO_PATH: u8 = 2;
const EXIT_SATURATION: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Agreement tolerance between a solver's reported time and the
/// independent replan of its route.
const SELF_CHECK_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(
    name = "basp",
    version,
    about = "Minimum-time routing under speed and acceleration bounds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance file and print the best route.
    Solve(SolveArgs),
    /// Generate a random instance file.
    Generate(GenerateArgs),
    /// Benchmark solver wall times over generated instance families.
    Bench(BenchArgs),
    /// Export a route's speed profile as CSV (lambda, w, v, t).
    ExportProfile(ExportArgs),
    /// Cross-check the adaptive solver against exhaustive enumeration.
    Oracle(OracleArgs),
}

/// Selectable solvers.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    /// Window-escalating heuristic search (the default).
    Adaptive,
    /// Heuristic search at a fixed suffix window; fails on saturation
    /// violations.
    AstarK,
    /// Uninformed search at a fixed suffix window, no saturation check.
    DijkstraK,
    /// Acceleration-free relaxation (a plain shortest path; its value is
    /// a lower bound on the true optimum).
    OneBasp,
    /// Exhaustive enumeration of bounded-length words.
    Brute,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Adaptive => "adaptive",
            Algo::AstarK => "astar-k",
            Algo::DijkstraK => "dijkstra-k",
            Algo::OneBasp => "one-basp",
            Algo::Brute => "brute",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (JSON).
    instance: PathBuf,
    /// Solver to run.
    #[arg(long, value_enum, default_value_t = Algo::Adaptive)]
    algo: Algo,
    /// Suffix window size; required by astar-k and dijkstra-k.
    #[arg(long)]
    k: Option<usize>,
    /// Longest word (in nodes) the brute solver enumerates.
    #[arg(long)]
    max_len: Option<usize>,
    /// Plan on a uniform grid with this step instead of exactly.
    #[arg(long)]
    grid_step: Option<f64>,
    /// Emit a machine-readable JSON report.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of waypoints (the graph gets two nodes per waypoint).
    #[arg(long)]
    n: usize,
    /// RNG seed; equal flags produce identical files.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Magnitude of both squared-speed slope bounds.
    #[arg(long, default_value_t = 0.1)]
    accel: f64,
    /// Largest turning radius a connection may assume.
    #[arg(long, default_value_t = 4.0)]
    max_radius: f64,
    /// Sample speed caps from local curvature along each connection.
    #[arg(long, visible_alias = "curvature-bounds")]
    curvature_caps: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Waypoint counts to benchmark, comma separated.
    #[arg(long = "n-list", value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    /// Connected instances per waypoint count.
    #[arg(long, default_value_t = 3)]
    instances: usize,
    /// Random queries per instance.
    #[arg(long, default_value_t = 10)]
    queries: usize,
    /// Base RNG seed for instances and queries.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds after which a query is marked as timed out (recorded
    /// post-hoc; the solver is not interrupted).
    #[arg(long, default_value_t = 100.0)]
    timeout: f64,
    /// Slope-bound magnitude passed to the generator.
    #[arg(long, default_value_t = 0.4)]
    accel: f64,
    /// Worker threads; per-query determinism is kept regardless.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output CSV file; stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    /// Instance file (JSON).
    instance: PathBuf,
    /// Route to export: space-separated node names or ids, e.g. "s 1 f".
    #[arg(long, conflicts_with = "solve")]
    path: Option<String>,
    /// Solve the instance and export the winning route instead.
    #[arg(long)]
    solve: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add this many uniformly spaced sample rows to the breakpoint rows.
    #[arg(long)]
    samples: Option<usize>,
    /// Plan on a uniform grid with this step instead of exactly.
    #[arg(long)]
    grid_step: Option<f64>,
}

#[derive(Args)]
struct OracleArgs {
    /// Instance file (JSON).
    instance: PathBuf,
    /// Longest word (in nodes) the enumeration considers.
    #[arg(long, default_value_t = 10)]
    max_len: usize,
    /// Enumeration budget in visited words.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Plan on a uniform grid with this step instead of exactly.
    #[arg(long)]
    grid_step: Option<f64>,
    /// Emit a machine-readable JSON report.
    #[arg(long)]
    json: bool,
}

/// A command failure: message for stderr plus the process exit code.
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn usage(message: impl Into<String>) -> Failure {
    fail(EXIT_USAGE, message)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.cmd {
        Cmd::Solve(a) => cmd_solve(&a),
        Cmd::Generate(a) => cmd_generate(&a),
        Cmd::Bench(a) => cmd_bench(&a),
        Cmd::ExportProfile(a) => cmd_export_profile(&a),
        Cmd::Oracle(a) => cmd_oracle(&a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("basp: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Loads an instance file, mapping format problems to exit code 1.
fn load(path: &Path) -> Result<RoadGraph, Failure> {
    load_instance(path).map_err(|e| fail(EXIT_ERROR, e.to_string()))
}

/// The grid-step override: the flag when given, else `BASP_GRID_STEP`.
fn engine_override(flag: Option<f64>) -> Result<Option<Engine>, Failure> {
    let step = match flag {
        Some(s) => Some(s),
        None => match std::env::var("BASP_GRID_STEP") {
            Ok(v) => Some(v.parse::<f64>().map_err(|_| {
                usage(format!("BASP_GRID_STEP: expected a number, found {v:?}"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(s) = step {
        if !(s.is_finite() && s > 0.0) {
            return Err(usage(format!("grid step must be finite and positive, got {s}")));
        }
    }
    Ok(step.map(|s| Engine::Grid { step: s }))
}

/// The query's exit-speed requirement as a planner boundary condition.
fn end_speed(g: &RoadGraph) -> EndSpeed {
    match g.w_target() {
        Some(w) => EndSpeed::At(w),
        None => EndSpeed::Free,
    }
}

/// Replans `word` under the query's boundary speeds and returns the
/// resulting travel time (`+inf` when infeasible).
fn replan_time(g: &RoadGraph, word: &[NodeId], engine: Option<Engine>) -> Result<f64, Failure> {
    let pb = concat_bounds(g, word)
        .map_err(|e| fail(EXIT_ERROR, format!("internal: returned route is invalid: {e}")))?;
    let engine = engine.unwrap_or_else(|| Engine::auto(&pb));
    let plan = plan_speed_with(&pb, g.w_source(), end_speed(g), engine)
        .map_err(|e| fail(EXIT_ERROR, format!("internal: returned route rejects replanning: {e}")))?;
    Ok(plan.time)
}

/// Enforces the report's self-check: the solver's time and the
/// independently recomputed time must agree to [`SELF_CHECK_TOL`].
fn self_check(reported: f64, recomputed: f64) -> Result<(), Failure> {
    if (reported - recomputed).abs() > SELF_CHECK_TOL {
        return Err(fail(
            EXIT_ERROR,
            format!(
                "internal: solver reported {reported} but replanning the route gives {recomputed}"
            ),
        ));
    }
    Ok(())
}

/// Prints a report as JSON or as aligned text lines.
fn emit(report: &Report, json: bool) {
    if json {
        print!("{}", report.render());
        return;
    }
    println!("algorithm: {}", report.algorithm);
    println!("status: {}", report.status);
    if let Some(path) = &report.path {
        println!("path: {}", path.join(" "));
    }
    if let Some(t) = report.time_s {
        println!("time_s: {t:.9}");
    }
    if let Some(t) = report.self_check_time_s {
        println!("self_check_time_s: {t:.9}");
    }
    if let Some(s) = &report.stats {
        println!(
            "final_k: {}  expanded: {}  generated: {}  queue_peak: {}",
            s.final_k, s.expanded, s.generated, s.queue_peak
        );
        println!("wall_time_s: {:.6}", s.wall_time_s);
    }
    if let Some(v) = &report.violation {
        println!(
            "violating state: {}{}",
            v.state.join(" "),
            if v.terminal { " (terminal)" } else { "" }
        );
    }
}

fn cmd_solve(a: &SolveArgs) -> Result<u8, Failure> {
    match a.algo {
        Algo::AstarK | Algo::DijkstraK => {
            if a.k.is_none() {
                return Err(usage(format!("--k is required for --algo {}", a.algo.name())));
            }
        }
        _ => {
            if a.k.is_some() {
                return Err(usage(format!("--k is not accepted by --algo {}", a.algo.name())));
            }
        }
    }
    if a.max_len.is_some() && a.algo != Algo::Brute {
        return Err(usage("--max-len is only accepted by --algo brute"));
    }
    let engine = engine_override(a.grid_step)?;
    let g = load(&a.instance)?;
    let opts = SolveOptions {
        engine,
        k_limit: None,
    };

    if a.algo == Algo::Brute {
        return match brute_force_with(&g, a.max_len.unwrap_or(10), 10_000_000) {
            Ok(b) => {
                let check = replan_time(&g, &b.word, engine)?;
                self_check(b.time, check)?;
                let mut r = Report::new("solve", "brute", "solved").with_path(&g, &b.word);
                r.time_s = Some(b.time);
                r.self_check_time_s = Some(check);
                emit(&r, a.json);
                Ok(0)
            }
            Err(OracleError::NoPath) => {
                emit(&Report::new("solve", "brute", "no_path"), a.json);
                Ok(EXIT_NO_PATH)
            }
            Err(e) => Err(fail(EXIT_ERROR, e.to_string())),
        };
    }

    let result = match a.algo {
        Algo::Adaptive => adaptive_astar_opts(&g, &opts),
        Algo::AstarK => astar_k_opts(&g, a.k.unwrap(), &opts),
        Algo::DijkstraK => dijkstra_extended_opts(&g, a.k.unwrap(), &opts),
        Algo::OneBasp => one_basp(&g),
        Algo::Brute => unreachable!("handled above"),
    };
    let name = a.algo.name();
    match result {
        Ok(sol) => {
            if !sol.time.is_finite() {
                emit(&Report::new("solve", name, "infeasible"), a.json);
                return Ok(EXIT_NO_PATH);
            }
            // The relaxation reports a lower bound, not a route time, so
            // its self-check resums the relaxed arc times instead of
            // replanning under the full bounds.
            let check = if a.algo == Algo::OneBasp {
                let arcs = g
                    .word_arcs(&sol.path)
                    .map_err(|e| fail(EXIT_ERROR, format!("internal: {e}")))?;
                arcs.iter().map(|arc| relaxed_arc_time(arc)).sum()
            } else {
                replan_time(&g, &sol.path, engine)?
            };
            self_check(sol.time, check)?;
            let mut r = Report::new("solve", name, "solved").with_path(&g, &sol.path);
            r.time_s = Some(sol.time);
            r.self_check_time_s = Some(check);
            r.stats = Some(StatsDto::from(&sol.stats));
            emit(&r, a.json);
            Ok(0)
        }
        Err(SearchError::NoPath) => {
            emit(&Report::new("solve", name, "no_path"), a.json);
            Ok(EXIT_NO_PATH)
        }
        Err(SearchError::SaturationViolation(state)) => {
            let mut r = Report::new("solve", name, "saturation_violation");
            r.violation = Some(ViolationDto {
                state: state.word.iter().map(|&n| g.label(n)).collect(),
                terminal: state.terminal,
            });
            emit(&r, a.json);
            Ok(EXIT_SATURATION)
        }
        Err(SearchError::KLimitExceeded { limit }) => Err(fail(
            EXIT_ERROR,
            format!("suffix window limit of {limit} exceeded; the instance needs a larger window"),
        )),
    }
}

fn cmd_generate(a: &GenerateArgs) -> Result<u8, Failure> {
    if a.n < 2 {
        return Err(usage(format!("--n must be at least 2, got {}", a.n)));
    }
    // One waypoint becomes two co-located nodes, one per travel direction.
    let params = GeneratorParams {
        n: 2 * a.n,
        seed: a.seed,
        accel: a.accel,
        max_radius: a.max_radius,
        curvature_caps: a.curvature_caps,
    };
    let g = random_instance(&params).map_err(|e| fail(EXIT_ERROR, e.to_string()))?;
    match &a.out {
        Some(path) => {
            save_instance(path, &g).map_err(|e| fail(EXIT_ERROR, e.to_string()))?;
            eprintln!(
                "wrote {} ({} nodes, {} arcs)",
                path.display(),
                g.node_count(),
                g.arc_count()
            );
        }
        None => print!("{}", render_instance(&g)),
    }
    Ok(0)
}

/// One benchmark measurement.
struct BenchRow {
    n: usize,
    instance_seed: u64,
    query: usize,
    source: u32,
    target: u32,
    time_s: f64,
    final_k: usize,
    solved: &'static str,
}

impl BenchRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}\n",
            self.n,
            self.instance_seed,
            self.query,
            self.source,
            self.target,
            self.time_s,
            self.final_k,
            self.solved
        )
    }
}

/// Node ids reachable from `start` by at least one arc hop.
fn reachable_from(g: &RoadGraph, start: NodeId) -> Vec<NodeId> {
    let mut seen = vec![false; g.node_count()];
    let mut queue = vec![start];
    seen[start.index()] = true;
    let mut found = Vec::new();
    while let Some(n) = queue.pop() {
        for arc in g.out_arcs(n) {
            if !seen[arc.to.index()] {
                seen[arc.to.index()] = true;
                found.push(arc.to);
                queue.push(arc.to);
            }
        }
    }
    found
}

/// Solves one random query on `g`, drawing the endpoints from a seed
/// derived only from `(instance_seed, query)` so results do not depend on
/// worker scheduling. Targets are drawn among nodes reachable from the
/// source, so rows measure actual solves rather than failed lookups.
fn bench_query(
    g: &RoadGraph,
    n: usize,
    instance_seed: u64,
    query: usize,
    timeout: f64,
) -> BenchRow {
    let mut rng =
        ChaCha8Rng::seed_from_u64(instance_seed ^ ((query as u64) << 32) ^ 0x6265_6e63_68u64);
    let count = g.node_count() as u64;
    let (source, target) = loop {
        let s = NodeId((rng.next_u64() % count) as u32);
        let out = reachable_from(g, s);
        if !out.is_empty() {
            break (s, out[(rng.next_u64() % out.len() as u64) as usize]);
        }
    };
    let mut inst = g.clone();
    inst.set_query(source, &[target], 0.0, None)
        .expect("generated node ids are valid");
    let t0 = Instant::now();
    let outcome = adaptive_astar_opts(&inst, &SolveOptions::default());
    let time_s = t0.elapsed().as_secs_f64();
    let (final_k, solved) = match &outcome {
        Ok(sol) => (
            sol.stats.final_k,
            if time_s > timeout { "timeout" } else { "true" },
        ),
        Err(SearchError::NoPath) => (0, "no_path"),
        Err(_) => (0, "error"),
    };
    BenchRow {
        n,
        instance_seed,
        query,
        source: source.0,
        target: target.0,
        time_s,
        final_k,
        solved,
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<u8, Failure> {
    if a.workers == 0 {
        return Err(usage("--workers must be at least 1"));
    }
    if a.n_list.iter().any(|&n| n < 2) {
        return Err(usage("--n-list entries must be at least 2"));
    }
    // Collect connected instances first; queries then run against shared
    // immutable graphs.
    let mut graphs: Vec<(usize, u64, RoadGraph)> = Vec::new();
    for &n in &a.n_list {
        let mut found = 0;
        let mut seed = a.seed;
        let give_up = a.seed + 50 * a.instances as u64;
        while found < a.instances && seed < give_up {
            let params = GeneratorParams {
                n: 2 * n,
                seed,
                accel: a.accel,
                ..GeneratorParams::default()
            };
            if let Ok(g) = random_instance(&params) {
                graphs.push((n, seed, g));
                found += 1;
            }
            seed += 1;
        }
        if found < a.instances {
            return Err(fail(
                EXIT_ERROR,
                format!("only {found} of {} instances connected for n={n}", a.instances),
            ));
        }
    }

    let jobs: Vec<(usize, u64, &RoadGraph, usize)> = graphs
        .iter()
        .flat_map(|(n, seed, g)| (0..a.queries).map(move |q| (*n, *seed, g, q)))
        .collect();
    let mut rows: Vec<Option<BenchRow>> = Vec::with_capacity(jobs.len());
    rows.resize_with(jobs.len(), || None);
    if a.workers == 1 {
        for (slot, job) in rows.iter_mut().zip(&jobs) {
            *slot = Some(bench_query(job.2, job.0, job.1, job.3, a.timeout));
        }
    } else {
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..a.workers {
                let jobs = &jobs;
                let timeout = a.timeout;
                handles.push(scope.spawn(move || {
                    let mut done = Vec::new();
                    for (i, job) in jobs.iter().enumerate().skip(w).step_by(a.workers) {
                        done.push((i, bench_query(job.2, job.0, job.1, job.3, timeout)));
                    }
                    done
                }));
            }
            for h in handles {
                for (i, row) in h.join().expect("bench workers do not panic") {
                    rows[i] = Some(row);
                }
            }
        });
    }

    let mut csv = String::from("n,instance_seed,query,source,target,time_s,final_k,solved\n");
    for row in rows {
        csv.push_str(&row.expect("all jobs ran").csv());
    }
    match &a.csv {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| fail(EXIT_ERROR, format!("{}: {e}", path.display())))?;
            eprintln!("wrote {} ({} rows)", path.display(), jobs.len());
        }
        None => print!("{csv}"),
    }
    Ok(0)
}

/// Resolves one route token: a node name first, a numeric id second.
fn resolve_node(g: &RoadGraph, token: &str) -> Result<NodeId, Failure> {
    if let Some(n) = g.node_by_name(token) {
        return Ok(n);
    }
    if let Ok(id) = token.parse::<u32>() {
        if (id as usize) < g.node_count() {
            return Ok(NodeId(id));
        }
    }
    Err(fail(
        EXIT_NO_PATH,
        format!("not a path: unknown node {token:?}"),
    ))
}

/// Renders profile rows (breakpoints plus optional uniform samples) as
/// `lambda,w,v,t` CSV.
fn profile_csv(profile: &SpeedProfile, samples: Option<usize>) -> String {
    let base: Vec<(f64, f64)> = profile
        .breakpoints()
        .iter()
        .copied()
        .zip(profile.values().iter().copied())
        .collect();
    let mut extra: Vec<(f64, f64)> = Vec::new();
    if let Some(m) = samples {
        let len = profile.len();
        for j in 0..=m {
            let lambda = len * j as f64 / m.max(1) as f64;
            if profile
                .breakpoints()
                .binary_search_by(|b| b.total_cmp(&lambda))
                .is_err()
            {
                extra.push((lambda, profile.value_at(lambda)));
            }
        }
    }
    // Merge the two sorted row sets; duplicated breakpoints (profile
    // jumps) stay adjacent and in order.
    let mut rows = Vec::with_capacity(base.len() + extra.len());
    let (mut i, mut j) = (0, 0);
    while i < base.len() || j < extra.len() {
        let take_base = j >= extra.len() || (i < base.len() && base[i].0 <= extra[j].0);
        if take_base {
            rows.push(base[i]);
            i += 1;
        } else {
            rows.push(extra[j]);
            j += 1;
        }
    }
    let mut csv = String::from("lambda,w,v,t\n");
    for (lambda, w) in rows {
        let t = profile.time_to(lambda);
        let v = w.sqrt();
        csv.push_str(&format!("{lambda},{w},{v},{t}\n"));
    }
    csv
}

fn cmd_export_profile(a: &ExportArgs) -> Result<u8, Failure> {
    if !a.solve && a.path.is_none() {
        return Err(usage("one of --path or --solve is required"));
    }
    if let Some(m) = a.samples {
        if m == 0 {
            return Err(usage("--samples must be at least 1"));
        }
    }
    let engine = engine_override(a.grid_step)?;
    let g = load(&a.instance)?;
    let word: Vec<NodeId> = if a.solve {
        let opts = SolveOptions {
            engine,
            k_limit: None,
        };
        match adaptive_astar_opts(&g, &opts) {
            Ok(sol) => sol.path,
            Err(SearchError::NoPath) => {
                return Err(fail(EXIT_NO_PATH, "no feasible route to any target"))
            }
            Err(e) => return Err(fail(EXIT_ERROR, e.to_string())),
        }
    } else {
        let tokens: Vec<&str> = a.path.as_deref().unwrap().split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(usage("--path needs at least two nodes"));
        }
        tokens
            .iter()
            .map(|t| resolve_node(&g, t))
            .collect::<Result<_, _>>()?
    };
    let pb = concat_bounds(&g, &word)
        .map_err(|e| fail(EXIT_NO_PATH, format!("not a path: {e}")))?;
    let engine = engine.unwrap_or_else(|| Engine::auto(&pb));
    let plan = plan_speed_with(&pb, g.w_source(), end_speed(&g), engine)
        .map_err(|e| fail(EXIT_NO_PATH, format!("infeasible: {e}")))?;
    if !plan.feasible {
        let span = plan
            .violation
            .map(|(a, b)| format!(" on [{a}, {b}]"))
            .unwrap_or_default();
        return Err(fail(
            EXIT_NO_PATH,
            format!("infeasible: profile violates the query's bounds{span}"),
        ));
    }
    let csv = profile_csv(&plan.profile, a.samples);
    match &a.out {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| fail(EXIT_ERROR, format!("{}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(0)
}

fn cmd_oracle(a: &OracleArgs) -> Result<u8, Failure> {
    let engine = engine_override(a.grid_step)?;
    let g = load(&a.instance)?;
    let opts = SolveOptions {
        engine,
        k_limit: None,
    };
    let brute = brute_force_with(&g, a.max_len, a.budget);
    let adaptive = adaptive_astar_opts(&g, &opts);
    match (brute, adaptive) {
        (Ok(b), Ok(sol)) => {
            let diff = (b.time - sol.time).abs();
            let agree = diff <= SELF_CHECK_TOL;
            let mut r = Report::new(
                "oracle",
                "brute+adaptive",
                if agree { "solved" } else { "mismatch" },
            )
            .with_path(&g, &b.word);
            r.time_s = Some(b.time);
            r.self_check_time_s = Some(sol.time);
            r.stats = Some(StatsDto::from(&sol.stats));
            emit(&r, a.json);
            if agree {
                Ok(0)
            } else {
                Err(fail(
                    EXIT_ERROR,
                    format!(
                        "solvers disagree: enumeration found {} but the search returned {} (diff {diff:e})",
                        b.time, sol.time
                    ),
                ))
            }
        }
        (Err(OracleError::NoPath), Err(SearchError::NoPath)) => {
            emit(&Report::new("oracle", "brute+adaptive", "no_path"), a.json);
            Ok(EXIT_NO_PATH)
        }
        (Err(OracleError::NoPath), Ok(sol)) => Err(fail(
            EXIT_ERROR,
            format!(
                "solvers disagree: enumeration (max_len {}) found no route but the search returned {}; raise --max-len",
                a.max_len, sol.time
            ),
        )),
        (Ok(b), Err(e)) => Err(fail(
            EXIT_ERROR,
            format!("solvers disagree: enumeration found {} but the search failed: {e}", b.time),
        )),
        (Err(e), _) => Err(fail(EXIT_ERROR, e.to_string())),
    }
}
