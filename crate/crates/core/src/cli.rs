//! Command-line front end. Every subcommand builds one serializable report;
//! `--json` prints it as JSON and the default output is a text rendering of it.
//!
//! Exit codes: 0 when every verdict passes, 1 when a verdict fails, 2 on invalid input.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::chevalley::{chevalley_mult, ChevalleyExpansion, ChevalleyTable, WindowPolicy};
use crate::error::{Error, Result};
use crate::graph::{build_graph, export_dot, period, strongly_connected};
use crate::operator::{
    c1_matrix_from_table, canonical_cycle, chain_point_to_zero, chain_to_point, chain_zero_to,
    verify_conjecture_t_positive, verify_theorem_positive, window_audit, ChevalleyChain, ConjectureReport,
    PositivityReport, WindowAudit,
};
use crate::partitions::{enumerate_basis, OddPartition, Shape};
use crate::spectrum::{analyze, eigenvalues, spectral_radius, Mode, PropertyOReport, Tolerances};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "oc-verifier", version, about = "Property O checks for odd-symplectic Grassmannians IG(k, 2n+1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ShapeArgs {
    /// Subspace dimension k (1 <= k <= n).
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    /// Ambient space is C^(2n+1).
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    #[arg(long, value_enum, default_value_t = WindowArg::Standard)]
    window: WindowArg,
    #[arg(long)]
    json: bool,
}

impl ShapeArgs {
    fn shape(&self) -> Result<Shape> {
        Shape::new(self.k, self.n)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WindowArg {
    Standard,
    PaperLiteral,
}

impl From<WindowArg> for WindowPolicy {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::Standard => WindowPolicy::Standard,
            WindowArg::PaperLiteral => WindowPolicy::PaperLiteral,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Numeric => Mode::Numeric,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChainKind {
    PointToZero,
    ZeroTo,
    ToPoint,
    Cycle,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Relative modulus-grouping tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Relative tolerance for matching roots of unity.
    #[arg(long, default_value_t = 1e-6)]
    root_tol: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            modulus: self.tol,
            root: self.root_tol,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the Schubert basis in canonical order.
    Enumerate(ShapeArgs),
    /// Expand [X(1)] * [X(lambda)].
    Chevalley {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Comma-separated parts, e.g. "3,-1".
        #[arg(long, allow_hyphen_values = true)]
        partition: String,
    },
    /// Quantum Bruhat graph: size, connectivity, period.
    Graph {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Exit 1 if the two window policies give different matrices.
        #[arg(long)]
        strict: bool,
    },
    /// Positivity of T at the point class and at (0).
    Positivity {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Also test T[X(lambda)] > 0 for every lambda.
        #[arg(long)]
        conjecture: bool,
    },
    /// Proof chains through the quantum Bruhat graph.
    Chains {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum)]
        kind: ChainKind,
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
    },
    /// Eigenvalues of the c_1 operator.
    Spectrum {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Property O verdict for one shape.
    Verify {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long)]
        strict: bool,
    },
    /// Verify every shape 1 <= k <= n with min_n <= n <= max_n.
    Sweep {
        #[arg(long, default_value_t = 1)]
        min_n: i64,
        #[arg(long)]
        max_n: i64,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, value_enum, default_value_t = WindowArg::Standard)]
        window: WindowArg,
        /// Worker threads; 0 uses every core.
        #[arg(long, env = "OC_VERIFIER_JOBS", default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub shape: Shape,
    pub dimension: usize,
    pub fano_index: usize,
    pub basis: Vec<OddPartition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphReport {
    pub shape: Shape,
    pub window: WindowPolicy,
    pub vertices: usize,
    pub edges: usize,
    pub quantum_edges: usize,
    pub strongly_connected: bool,
    pub components: usize,
    pub period: Option<usize>,
    pub fano_index: usize,
    pub window_audit: WindowAudit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub shape: Shape,
    pub window: WindowPolicy,
    /// Implementation-derived.
    pub delta0: f64,
    pub eigenvalues: Vec<num_complex::Complex64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityOutput {
    pub theorem: PositivityReport,
    pub conjecture: Option<ConjectureReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub shape: Shape,
    pub kind: String,
    /// Tie-break for single-box chains.
    pub rule: String,
    pub chain: ChevalleyChain,
    pub accumulated_coefficient: u128,
    pub q_degree: u32,
}

/// Positivity facts recorded per shape in a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivitySummary {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub longest_witness: Option<usize>,
    pub point_to_zero_chain_edges: Option<usize>,
    pub point_to_zero_bound: usize,
    pub canonical_cycle_edges: Option<usize>,
    pub conjecture_holds: bool,
}

impl PositivitySummary {
    pub fn holds(&self, shape: &Shape) -> bool {
        self.a
            && self.b
            && self.c
            && self.longest_witness.is_some_and(|l| l <= shape.dimension())
            && self
                .point_to_zero_chain_edges
                .is_some_and(|l| l <= self.point_to_zero_bound)
            && self.canonical_cycle_edges == Some(shape.fano_index())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub report: PropertyOReport,
    pub positivity: PositivitySummary,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub min_n: usize,
    pub max_n: usize,
    pub mode: Mode,
    pub rows: Vec<SweepRow>,
    pub window_disagreements: usize,
    pub all_pass: bool,
}

/// All shapes `1 <= k <= n`, `min_n <= n <= max_n`, ordered by `n` then `k`.
pub fn sweep_shapes(min_n: usize, max_n: usize) -> Vec<Shape> {
    (min_n.max(1)..=max_n)
        .flat_map(|n| (1..=n).map(move |k| Shape::new(k as i64, n as i64).expect("k <= n")))
        .collect()
}

pub fn positivity_summary(shape: Shape, policy: WindowPolicy) -> PositivitySummary {
    let table = ChevalleyTable::new(shape, policy);
    let m = c1_matrix_from_table(&table);
    let theorem = verify_theorem_positive(&m);
    let conj = verify_conjecture_t_positive(&m);
    PositivitySummary {
        a: theorem.a,
        b: theorem.b,
        c: theorem.c,
        longest_witness: theorem.longest_witness(),
        point_to_zero_chain_edges: chain_point_to_zero(&table).ok().map(|c| c.len()),
        point_to_zero_bound: shape.k() + shape.k() * (shape.k() - 1) / 2,
        canonical_cycle_edges: canonical_cycle(&table).ok().map(|c| c.len()),
        conjecture_holds: conj.holds,
    }
}

pub fn sweep_row(shape: Shape, mode: Mode, tol: Tolerances, policy: WindowPolicy) -> Result<SweepRow> {
    let start = Instant::now();
    let report = analyze(shape, mode, tol, policy)?;
    let positivity = positivity_summary(shape, policy);
    Ok(SweepRow {
        report,
        positivity,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn sweep(
    min_n: usize,
    max_n: usize,
    mode: Mode,
    tol: Tolerances,
    policy: WindowPolicy,
    jobs: usize,
) -> Result<SweepResult> {
    use rayon::prelude::*;
    let shapes = sweep_shapes(min_n, max_n);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let rows = pool.install(|| {
        shapes
            .par_iter()
            .map(|&s| sweep_row(s, mode, tol, policy))
            .collect::<Result<Vec<_>>>()
    })?;
    let window_disagreements = rows.iter().filter(|r| !r.report.window_audit.identical).count();
    let all_pass = rows
        .iter()
        .all(|r| r.report.verdict && r.positivity.holds(&r.report.shape));
    Ok(SweepResult {
        min_n,
        max_n,
        mode,
        rows,
        window_disagreements,
        all_pass,
    })
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn list(parts: &[OddPartition]) -> String {
    parts
        .iter()
        .map(|p| format!("({p})"))
        .collect::<Vec<_>>()
        .join(" -> ")
}

fn render_expansion(e: &ChevalleyExpansion) -> String {
    let mut terms: Vec<String> = e
        .classical
        .iter()
        .map(|t| {
            if t.coefficient == 1 {
                format!("[X({})]", t.partition)
            } else {
                format!("{}[X({})]", t.coefficient, t.partition)
            }
        })
        .collect();
    terms.extend(e.quantum.iter().map(|t| format!("q[X({})]", t.partition)));
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn render_verdict(out: &mut dyn Write, r: &PropertyOReport) -> Result<()> {
    writeln!(
        out,
        "{}: dim {}, rank {}, r = {}, window {}",
        r.shape, r.dimension, r.basis_size, r.fano_index, r.window
    )?;
    if let Some(e) = &r.exact {
        writeln!(
            out,
            "  exact:   strongly connected = {}, period = {}, holds = {}",
            e.strongly_connected,
            e.period.map_or("-".into(), |p| p.to_string()),
            e.holds
        )?;
    }
    if let Some(nv) = &r.numeric {
        writeln!(
            out,
            "  numeric: delta0 = {:.12} (power iteration {:.12}), max-modulus count = {}, condition1 = {}, condition2 = {}",
            nv.check.delta0, nv.perron_value, nv.check.max_modulus_count, nv.check.condition1, nv.check.condition2
        )?;
    }
    if let Some(agree) = r.paths_agree {
        writeln!(out, "  exact and numeric agree: {agree}")?;
    }
    if !r.window_audit.identical {
        writeln!(out, "  window policies disagree on {} entries:", r.window_audit.differences.len())?;
        for d in &r.window_audit.differences {
            writeln!(
                out,
                "    ({}) -> ({}): standard {}, paper-literal {}",
                d.from, d.to, d.standard, d.paper_literal
            )?;
        }
    }
    writeln!(out, "  verdict: {}", if r.verdict { "PASS" } else { "FAIL" })?;
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Enumerate(args) => {
            let shape = args.shape()?;
            let report = EnumerateReport {
                shape,
                dimension: shape.dimension(),
                fano_index: shape.fano_index(),
                basis: enumerate_basis(&shape),
            };
            if args.json {
                emit_json(out, &report)?;
            } else {
                writeln!(out, "{} (dim {}, rank {})", shape, report.dimension, report.basis.len())?;
                for p in &report.basis {
                    writeln!(out, "{:>4}  {p}", p.weight())?;
                }
            }
            Ok(EXIT_PASS)
        }
        Command::Chevalley { shape: args, partition } => {
            let shape = args.shape()?;
            let lambda = OddPartition::parse(&shape, &partition)?;
            let basis = crate::partitions::Basis::new(shape);
            let e = chevalley_mult(&basis, &lambda, args.window.into());
            if args.json {
                emit_json(out, &e)?;
            } else {
                writeln!(out, "[X(1)] * [X({lambda})] = {}", render_expansion(&e))?;
            }
            Ok(EXIT_PASS)
        }
        Command::Graph { shape: args, dot, strict } => {
            let shape = args.shape()?;
            let policy: WindowPolicy = args.window.into();
            let m = crate::operator::build_c1_matrix(shape, policy);
            let g = build_graph(&m);
            let conn = strongly_connected(&g);
            let report = GraphReport {
                shape,
                window: policy,
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                quantum_edges: (0..g.vertex_count())
                    .map(|v| g.out_edges(v).iter().filter(|e| e.quantum).count())
                    .sum(),
                strongly_connected: conn.strongly_connected,
                components: conn.components.len(),
                period: period(&g).ok(),
                fano_index: shape.fano_index(),
                window_audit: window_audit(shape),
            };
            if let Some(path) = dot {
                let mut w = BufWriter::new(File::create(path)?);
                export_dot(&g, &mut w)?;
                w.flush()?;
            }
            if args.json {
                emit_json(out, &report)?;
            } else {
                writeln!(
                    out,
                    "{}: {} vertices, {} edges ({} quantum), strongly connected = {}, period = {}, r = {}",
                    shape,
                    report.vertices,
                    report.edges,
                    report.quantum_edges,
                    report.strongly_connected,
                    report.period.map_or("-".into(), |p| p.to_string()),
                    report.fano_index
                )?;
                if !report.window_audit.identical {
                    writeln!(out, "window policies disagree on {} entries", report.window_audit.differences.len())?;
                }
            }
            let ok = report.strongly_connected
                && report.period == Some(report.fano_index)
                && (!strict || report.window_audit.identical);
            Ok(if ok { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Positivity { shape: args, conjecture } => {
            let shape = args.shape()?;
            let m = crate::operator::build_c1_matrix(shape, args.window.into());
            let report = PositivityOutput {
                theorem: verify_theorem_positive(&m),
                conjecture: conjecture.then(|| verify_conjecture_t_positive(&m)),
            };
            if args.json {
                emit_json(out, &report)?;
            } else {
                let t = &report.theorem;
                writeln!(out, "{shape}: (a) {} (b) {} (c) {}", t.a, t.b, t.c)?;
                if let Some(p) = &t.point_to_zero.path {
                    writeln!(out, "  point to zero: {}", list(p))?;
                }
                if let Some(len) = t.longest_witness() {
                    writeln!(out, "  longest witness: {len} edges (dim {})", t.dimension)?;
                }
                if let Some(c) = &report.conjecture {
                    writeln!(
                        out,
                        "  T[X(lambda)] > 0 for all lambda: {} ({} failing pairs, diameter {})",
                        c.holds,
                        c.failing_pairs.len(),
                        c.diameter.map_or("-".into(), |d| d.to_string())
                    )?;
                }
            }
            // The conjecture is reported, never required.
            Ok(if report.theorem.holds() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Chains { shape: args, kind, target } => {
            let shape = args.shape()?;
            let table = ChevalleyTable::new(shape, args.window.into());
            let target = match (kind, target) {
                (ChainKind::ZeroTo | ChainKind::ToPoint, None) => {
                    return Err(Error::ParsePartition {
                        input: String::new(),
                        reason: "--target is required for zero-to and to-point".into(),
                    })
                }
                (_, Some(t)) => Some(OddPartition::parse(&shape, &t)?),
                (_, None) => None,
            };
            let (name, rule, chain) = match kind {
                ChainKind::PointToZero => (
                    "point-to-zero",
                    "eta* when the first row is full, else add a box to row 1",
                    chain_point_to_zero(&table)?,
                ),
                ChainKind::ZeroTo => (
                    "zero-to",
                    "fill rows top to bottom; via (2n+1-k,-1,...,-1) when the last part is -1",
                    chain_zero_to(&table, target.as_ref().expect("checked"))?,
                ),
                ChainKind::ToPoint => (
                    "to-point",
                    "add one box to the topmost row that admits one",
                    chain_to_point(&table, target.as_ref().expect("checked"))?,
                ),
                ChainKind::Cycle => ("cycle", "single-row classes closed by lambda*", canonical_cycle(&table)?),
            };
            let report = ChainReport {
                shape,
                kind: name.into(),
                rule: rule.into(),
                accumulated_coefficient: chain.accumulated_coefficient(),
                q_degree: chain.q_degree(),
                chain,
            };
            if args.json {
                emit_json(out, &report)?;
            } else {
                let c = &report.chain;
                write!(out, "({})", c.vertices[0])?;
                for i in 0..c.len() {
                    let q = if c.q_degrees[i] > 0 { "q" } else { "" };
                    write!(out, " -[{}{}]-> ({})", c.edge_coefficients[i], q, c.vertices[i + 1])?;
                }
                writeln!(out)?;
                writeln!(
                    out,
                    "{} edges, accumulated coefficient {}, q-degree {}",
                    c.len(),
                    report.accumulated_coefficient,
                    report.q_degree
                )?;
            }
            Ok(EXIT_PASS)
        }
        Command::Spectrum { shape: args, csv, tol } => {
            let shape = args.shape()?;
            let policy: WindowPolicy = args.window.into();
            let m = crate::operator::build_c1_matrix(shape, policy);
            let mut eigs = eigenvalues(&m, tol)?;
            eigs.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.arg().total_cmp(&a.arg())));
            let report = SpectrumReport {
                shape,
                window: policy,
                delta0: spectral_radius(&eigs),
                eigenvalues: eigs,
            };
            if let Some(path) = csv {
                let mut w = BufWriter::new(File::create(path)?);
                write_csv(&mut w, &report.eigenvalues)?;
                w.flush()?;
            }
            if args.json {
                emit_json(out, &report)?;
            } else {
                writeln!(out, "{shape}: delta0 = {:.12} (computed)", report.delta0)?;
                write_csv(out, &report.eigenvalues)?;
            }
            Ok(EXIT_PASS)
        }
        Command::Verify {
            shape: args,
            mode,
            tol,
            strict,
        } => {
            let shape = args.shape()?;
            let report = analyze(shape, mode.into(), tol.tolerances(), args.window.into())?;
            if args.json {
                emit_json(out, &report)?;
            } else {
                render_verdict(out, &report)?;
            }
            let ok = report.verdict && (!strict || report.window_audit.identical);
            Ok(if ok { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Sweep {
            min_n,
            max_n,
            mode,
            tol,
            window,
            jobs,
            strict,
            json,
        } => {
            if min_n < 1 || max_n < min_n {
                return Err(Error::InvalidShape {
                    k: 0,
                    n: max_n,
                    reason: format!("sweep range {min_n}..={max_n} is empty"),
                });
            }
            let result = sweep(
                min_n as usize,
                max_n as usize,
                mode.into(),
                tol.tolerances(),
                window.into(),
                jobs,
            )?;
            if json {
                emit_json(out, &result)?;
            } else {
                for row in &result.rows {
                    let r = &row.report;
                    let p = &row.positivity;
                    writeln!(
                        out,
                        "{:<12} rank {:>5}  period {:>3}/{:<3} numeric {:<5} positivity {:<5} windows {:<9} {:>9.1} ms  {}",
                        r.shape.to_string(),
                        r.basis_size,
                        r.exact.as_ref().and_then(|e| e.period).map_or("-".into(), |p| p.to_string()),
                        r.fano_index,
                        r.numeric.as_ref().map_or("-".into(), |n| n.check.holds().to_string()),
                        p.holds(&r.shape),
                        if r.window_audit.identical { "identical" } else { "DIFFER" },
                        row.elapsed_ms,
                        if r.verdict { "PASS" } else { "FAIL" }
                    )?;
                }
                writeln!(
                    out,
                    "{} shapes, {} window disagreements, {}",
                    result.rows.len(),
                    result.window_disagreements,
                    if result.all_pass { "all pass" } else { "FAILURES" }
                )?;
            }
            let ok = result.all_pass && (!strict || result.window_disagreements == 0);
            Ok(if ok { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

/// CSV with header `re,im,modulus`.
pub fn write_csv(out: &mut dyn Write, eigs: &[num_complex::Complex64]) -> Result<()> {
    writeln!(out, "re,im,modulus")?;
    for z in eigs {
        writeln!(out, "{},{},{}", z.re, z.im, z.norm())?;
    }
    Ok(())
}

/// Parses `argv` (program name first) and runs the command against the given streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_PASS };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Io(_) | Error::Json(_) => EXIT_FAIL,
                Error::EigenNoConvergence { .. }
                | Error::PowerIterationNoConvergence { .. }
                | Error::ChainEdgeMissing { .. }
                | Error::ChainStalled { .. }
                | Error::NotStronglyConnected { .. } => EXIT_FAIL,
                _ => EXIT_INVALID,
            }
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
