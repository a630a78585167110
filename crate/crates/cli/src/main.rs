use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use listramsey::bounds::{
    bound_table, certificate, clique_upper_params, closed_form, list_bound, matching_ub_parameters, probe_upper,
    random_lists, table_row, BoundParams, CertificateParams, ClosedFamily,
};
use listramsey::cert::{
    overall, BoundTable, CertError, Certificate, LbProof, Payload, Status, UnionBound, UpperWitness,
};
use listramsey::decomp::{cycle_decompose, star_block_partition, verify_decomposition, walecki, Decomposition};
use listramsey::io::{format_lists, parse_lists, parse_pattern, read_file, ParseError};
use listramsey::listcolor::{clique_list_edge_color, galvin_color, BipartiteGraph};
use listramsey::solver::{
    decide_list_lb, decide_list_ub, ramsey_exact, Candidates, LowerDecision, SolverError, UpperDecision,
};
use listramsey::witness::{
    chromatic_partition_coloring, chromatic_partition_colors, matching_witness, star5_coloring, star_free_coloring,
    type_reduction, BaseColoring, MatchingPlan,
};
use listramsey::{complete_hypergraph, families, EdgeColoring, Hypergraph, ListAssignment, SearchBudget};

const EXIT_FAIL: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;

const PATTERN_HELP: &str = "K<r>, K<r>^<l>, S<r> (star K_{1,r}), M<r> (matching rK_2) or @file with one edge per line";

/// `println!` that exits quietly when stdout is closed early (e.g. piped into `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        if let Err(e) = writeln!(std::io::stdout().lock(), $($arg)*) {
            if e.kind() != std::io::ErrorKind::BrokenPipe {
                eprintln!("error: writing stdout: {e}");
            }
            std::process::exit(EXIT_FAIL.into());
        }
    }};
}

#[derive(Parser)]
#[command(name = "listramsey", version, about = "Exact values, witnesses and bounds for list Ramsey numbers")]
struct Cli {
    /// Worker threads for parallel sweeps and enumerations.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Node limit for each adversary search.
    #[arg(long, global = true, env = "LISTRAMSEY_BUDGET", default_value_t = 50_000_000)]
    node_limit: u64,
    /// Wall-clock limit in seconds for one top-level search.
    #[arg(long, global = true)]
    time_limit: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ordinary Ramsey number R(P, k) by exhaustive search.
    Exact {
        #[arg(long, help = PATTERN_HELP)]
        pattern: String,
        /// Number of colors k.
        #[arg(long)]
        colors: usize,
        /// Give up (exit 2) if no n up to this forces the pattern.
        #[arg(long, default_value_t = 11)]
        n_max: usize,
    },
    /// List Ramsey number by deciding both quantifier sides for growing n.
    ListExact {
        #[arg(long, help = PATTERN_HELP)]
        pattern: String,
        /// List size k.
        #[arg(long)]
        colors: usize,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 11)]
        n_max: usize,
        /// Write the upper witness and lower proof certificates here.
        #[arg(long)]
        cert_dir: Option<PathBuf>,
    },
    /// Build a lower-bound witness coloring and emit it as a certificate.
    Witness(WitnessArgs),
    /// Emit and verify an edge decomposition of a complete graph.
    Decompose {
        #[arg(long, value_enum)]
        kind: DecompKind,
        #[arg(long)]
        n: Option<usize>,
        /// Cycle length.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Proper list edge coloring of the host in a list file.
    Color {
        #[arg(long)]
        lists: PathBuf,
        #[arg(long, value_enum, default_value_t = ColorMethod::Auto)]
        method: ColorMethod,
    },
    /// Evaluate one bound family, or sweep the (r, k) grid.
    Bounds(BoundsArgs),
    /// Evaluate a union-bound certificate.
    Certificate {
        #[command(subcommand)]
        kind: CertCommand,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo failure rate of random lists against the adversary.
    Probe {
        #[arg(long, help = PATTERN_HELP)]
        pattern: String,
        /// List size.
        #[arg(long)]
        k: usize,
        /// Extra palette colors beyond k.
        #[arg(long, default_value_t = 0)]
        t: usize,
        /// Host size K_n.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Recheck a certificate file.
    Verify { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    StarCompose,
    Star5,
    TypeReduction,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    /// Cockayne–Lorimer coloring against rK_2.
    Matching,
    /// Recursive r-partition coloring against K_{r+1}^{(l)}.
    Chromatic,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long, value_enum)]
    strategy: Strategy,
    /// Pattern size: K_{1,r} for star-compose, rK_2 or K_{r+1}^{(l)} for type-reduction.
    #[arg(long)]
    r: Option<usize>,
    /// List size.
    #[arg(long)]
    k: Option<usize>,
    /// Host size (type-reduction with a chromatic base).
    #[arg(long)]
    n: Option<usize>,
    /// Uniformity (chromatic base).
    #[arg(long, default_value_t = 2)]
    l: usize,
    #[arg(long, value_enum, default_value_t = Base::Matching)]
    base: Base,
    /// List file; random lists are drawn when absent.
    #[arg(long)]
    lists: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Colors available to random lists (default 2k).
    #[arg(long)]
    palette: Option<usize>,
    /// Certificate path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecompKind {
    Walecki,
    Cycles,
    StarBlocks,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorMethod {
    Auto,
    Galvin,
    Clique,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Matching,
    Star2,
    StarK,
    MatchingList,
    CliqueHypergraph,
    HypergraphUpper,
    ChromaticLower,
    NonPartiteLower,
    LPartite,
}

#[derive(Args)]
struct BoundsArgs {
    /// Evaluate a single family; without it the grid is swept.
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    #[arg(long)]
    pi: Option<f64>,
    #[arg(long)]
    m_h: Option<f64>,
    #[arg(long, default_value_t = 2)]
    r_min: u64,
    #[arg(long, default_value_t = 100)]
    r_max: u64,
    #[arg(long, default_value_t = 2)]
    k_min: u64,
    #[arg(long, default_value_t = 100)]
    k_max: u64,
    /// Write the table as TSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a bound-table certificate.
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CertCommand {
    /// binom(n,l)(1-1/m)^k < 1.
    Types {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        k: u64,
    },
    /// Random-list failure bound for matchings; n and t default to the standard choice for (r, k).
    MatchingUb {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, requires = "t")]
        n: Option<u64>,
        #[arg(long, requires = "n")]
        t: Option<u64>,
    },
    /// Container feasibility condition.
    Container {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        pi: f64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        m_h: f64,
        #[arg(long)]
        log2_n: f64,
    },
    /// Supersaturation constant for K_r^{(l)}.
    Supersat {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        l: u64,
    },
}

/// Outcome classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Checked(anyhow::Error),
    Unknown(anyhow::Error),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn checked(msg: impl Into<String>) -> Failure {
    Failure::Checked(anyhow::anyhow!(msg.into()))
}

fn unknown(msg: impl Into<String>) -> Failure {
    Failure::Unknown(anyhow::anyhow!(msg.into()))
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::BudgetExhausted { .. } | SolverError::Unresolved(_) => Failure::Unknown(e.into()),
            SolverError::Canon(_) => Failure::Unknown(e.into()),
            _ => Failure::Usage(e.into()),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<CertError> for Failure {
    fn from(e: CertError) -> Self {
        match e {
            CertError::Format(_) | CertError::Version(_) => Failure::Usage(e.into()),
            CertError::Solver(s) => s.into(),
            _ => Failure::Checked(e.into()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let budget = SearchBudget {
        node_limit: cli.node_limit,
        time_limit: cli.time_limit.map(Duration::from_secs),
        ..SearchBudget::default()
    };
    let result = match cli.command {
        Command::Exact { pattern, colors, n_max } => exact(&pattern, colors, n_max, &budget),
        Command::ListExact { pattern, colors, n_min, n_max, cert_dir } => {
            list_exact(&pattern, colors, n_min, n_max, cert_dir.as_deref(), &budget)
        }
        Command::Witness(args) => witness(args, &budget),
        Command::Decompose { kind, n, m, r, k, out } => decompose(kind, n, m, r, k, out.as_deref()),
        Command::Color { lists, method } => color(&lists, method),
        Command::Bounds(args) => bounds(args, &budget),
        Command::Certificate { kind, out } => union_bound(kind, out.as_deref(), &budget),
        Command::Probe { pattern, k, t, n, samples, seed } => probe(&pattern, k, t, n, samples, seed, &budget),
        Command::Verify { file } => verify(&file, &budget),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {}", render(&e));
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Checked(e)) => {
            eprintln!("fail: {}", render(&e));
            ExitCode::from(EXIT_FAIL)
        }
        Err(Failure::Unknown(e)) => {
            eprintln!("unknown: {}", render(&e));
            ExitCode::from(EXIT_UNKNOWN)
        }
    }
}

/// The error chain, skipping causes whose text an outer message already includes.
fn render(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if !out.contains(&msg) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&msg);
        }
    }
    out
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Unknown => "unknown",
    }
}

/// Writes via a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Outcome {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let run = || -> anyhow::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(contents.as_bytes())?;
        tmp.persist(path)?;
        Ok(())
    };
    run().with_context(|| format!("writing {}", path.display())).map_err(usage)
}

/// Issues (self-verifies) a certificate and writes it; failing certificates are never written.
fn emit(payload: Payload, out: Option<&Path>, budget: &SearchBudget) -> Result<Certificate, Failure> {
    let cert = Certificate::issue(payload, budget)?;
    for c in &cert.checks {
        eprintln!("{}\t{}", status_word(c.status), c.name);
    }
    match overall(&cert.checks) {
        Status::Pass => {}
        Status::Fail => return Err(checked("certificate failed self-verification; not written")),
        Status::Unknown => return Err(unknown("certificate could not be verified within budget; not written")),
    }
    match out {
        Some(p) => write_atomic(p, &cert.to_json())?,
        None => out!("{}", cert.to_json()),
    }
    Ok(cert)
}

fn pattern(name: &str) -> Result<Hypergraph, Failure> {
    Ok(parse_pattern(name)?)
}

fn exact(p: &str, colors: usize, n_max: usize, budget: &SearchBudget) -> Outcome {
    let value = ramsey_exact(&pattern(p)?, colors, n_max, budget)?;
    out!("{value}");
    Ok(())
}

fn list_exact(p: &str, k: usize, n_min: usize, n_max: usize, dir: Option<&Path>, budget: &SearchBudget) -> Outcome {
    let h = pattern(p)?;
    for n in n_min.max(1)..=n_max {
        match decide_list_ub(&h, k, n, budget, Candidates::AllPatterns)? {
            UpperDecision::NoWitness { candidates } => {
                out!("n={n}: no undefeatable lists among {candidates} candidates")
            }
            UpperDecision::Unknown { unresolved, .. } => {
                return Err(unknown(format!("n={n}: {unresolved} candidate patterns unresolved")))
            }
            UpperDecision::Witness { lists, transcript, .. } => {
                out!("n={n}: undefeatable lists found");
                let below = n - 1;
                let lower = if below == 0 {
                    None
                } else {
                    match decide_list_lb(&h, k, below, budget)? {
                        LowerDecision::Proof { patterns } => Some(patterns),
                        LowerDecision::Counterexample { .. } => {
                            return Err(checked(format!("n={below} has undefeatable lists the upward sweep missed")))
                        }
                        LowerDecision::Unknown { unresolved, .. } => {
                            out!("R_l({p},{k}) <= {n}");
                            return Err(unknown(format!("n={below}: {unresolved} patterns unresolved")));
                        }
                    }
                };
                if let Some(dir) = dir {
                    let up = Payload::UpperWitness(UpperWitness { pattern: h.clone(), n, k, lists, transcript });
                    emit(up, Some(&dir.join(format!("upper-n{n}.json"))), budget)?;
                    if let Some(patterns) = lower {
                        let lb = Payload::LbProof(LbProof { pattern: h.clone(), n: below, k, patterns });
                        emit(lb, Some(&dir.join(format!("lower-n{below}.json"))), budget)?;
                    }
                }
                out!("R_l({p},{k}) = {n}");
                return Ok(());
            }
        }
    }
    Err(unknown(format!("no undefeatable lists up to n={n_max}")))
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(anyhow::anyhow!("--{flag} is required here")))
}

/// Lists from `--lists`, or seeded random lists on `host`.
fn witness_lists(args: &WitnessArgs, host: Hypergraph, k: usize) -> Result<ListAssignment, Failure> {
    if let Some(path) = &args.lists {
        let lists = parse_lists(&read_file(path)?, &path.display().to_string())?;
        if *lists.host() != host {
            return Err(usage(anyhow::anyhow!(
                "{}: host must be the complete graph on {} vertices",
                path.display(),
                host.vertex_count()
            )));
        }
        if lists.k() != k {
            return Err(usage(anyhow::anyhow!("{}: lists have size {}, expected {k}", path.display(), lists.k())));
        }
        return Ok(lists);
    }
    let seed = need(args.seed, "seed (or --lists)")?;
    let palette = args.palette.unwrap_or(2 * k);
    if palette < k {
        return Err(usage(anyhow::anyhow!("--palette must be at least k")));
    }
    Ok(random_lists(&Arc::new(host), k, palette, seed, 0))
}

fn star_decomposition(r: usize, k: usize) -> Result<Decomposition, Failure> {
    let d = match (k, r % 2) {
        (2, 0) if r >= 4 => walecki(2 * r - 2),
        (2, 1) if r >= 5 => cycle_decompose(2 * r - 1, r - 1),
        _ => star_block_partition(r, k),
    };
    d.map_err(|e| usage(anyhow::Error::from(e).context("no suitable decomposition")))
}

fn witness(args: WitnessArgs, budget: &SearchBudget) -> Outcome {
    let (pattern, strategy, lists, coloring) = match args.strategy {
        Strategy::StarCompose => {
            let (r, k) = (need(args.r, "r")?, need(args.k, "k")?);
            let d = star_decomposition(r, k)?;
            let lists = witness_lists(&args, d.host.clone(), k)?;
            let c = star_free_coloring(&d, &lists, k, r).map_err(|e| checked(e.to_string()))?;
            (families::star(r), "star-compose", lists, c)
        }
        Strategy::Star5 => {
            let host = complete_hypergraph(5, 2).map_err(usage)?;
            let lists = witness_lists(&args, host, 2)?;
            let c = star5_coloring(&lists).map_err(|e| checked(e.to_string()))?;
            (families::star(3), "star5", lists, c)
        }
        Strategy::TypeReduction => match args.base {
            Base::Matching => {
                let (r, k) = (need(args.r, "r")?, need(args.k, "k")?);
                let plan = MatchingPlan::new(r, k);
                eprintln!("matching plan: t={:?} n={}", plan.t, plan.n);
                let lists = witness_lists(&args, complete_hypergraph(plan.n, 2).map_err(usage)?, k)?;
                let c = matching_witness(&plan, &lists).map_err(|e| checked(e.to_string()))?;
                (families::matching(r), "type-reduction", lists, c)
            }
            Base::Chromatic => {
                let (r, k, n) = (need(args.r, "r")?, need(args.k, "k")?, need(args.n, "n")?);
                let target = families::clique(r + 1, args.l).map_err(usage)?;
                let base = chromatic_partition_coloring(n, r, args.l).map_err(|e| usage(anyhow::anyhow!(e)))?;
                let m = chromatic_partition_colors(n, r);
                let base = BaseColoring::new(base, target.clone(), m).map_err(|e| checked(e.to_string()))?;
                let lists = witness_lists(&args, base.coloring().host().clone(), k)?;
                let t = type_reduction(&base, &lists).map_err(|e| checked(e.to_string()))?;
                eprintln!("types: {m}, initial potential {:.6}", t.initial_potential);
                (target, "type-reduction", lists, t.coloring)
            }
        },
    };
    let payload = listramsey::cert::lower_witness(pattern, strategy, lists, coloring);
    emit(payload, args.out.as_deref(), budget)?;
    Ok(())
}

fn decompose(
    kind: DecompKind,
    n: Option<usize>,
    m: Option<usize>,
    r: Option<usize>,
    k: Option<usize>,
    out: Option<&Path>,
) -> Outcome {
    let d = match kind {
        DecompKind::Walecki => walecki(need(n, "n")?),
        DecompKind::Cycles => cycle_decompose(need(n, "n")?, need(m, "m")?),
        DecompKind::StarBlocks => star_block_partition(need(r, "r")?, need(k, "k")?),
    }
    .map_err(usage)?;
    let report = verify_decomposition(&d);
    eprintln!(
        "pieces: {}, partition: {}, max membership: {}",
        d.pieces.len(),
        report.is_partition(),
        report.max_membership()
    );
    let json = serde_json::to_string_pretty(&serde_json::json!({ "decomposition": d, "report": report }))
        .expect("decomposition serializes");
    match out {
        Some(p) => write_atomic(p, &json)?,
        None => out!("{json}"),
    }
    if report.is_partition() {
        Ok(())
    } else {
        Err(checked("pieces do not partition the host"))
    }
}

fn color(path: &Path, method: ColorMethod) -> Outcome {
    let lists = parse_lists(&read_file(path)?, &path.display().to_string())?;
    let host = lists.host_arc().clone();
    let m = host.vertex_count();
    let is_clique = host.uniformity() == 2 && host.edge_count() == m * m.saturating_sub(1) / 2;
    let c: EdgeColoring = match method {
        ColorMethod::Clique => clique_list_edge_color(m, &lists).map_err(|e| checked(e.to_string()))?,
        ColorMethod::Galvin => {
            let b = BipartiteGraph::detect(host).map_err(usage)?;
            galvin_color(&b, &lists).map_err(|e| checked(e.to_string()))?
        }
        ColorMethod::Auto => match BipartiteGraph::detect(host) {
            Ok(b) => galvin_color(&b, &lists).map_err(|e| checked(e.to_string()))?,
            Err(_) if is_clique => clique_list_edge_color(m, &lists).map_err(|e| checked(e.to_string()))?,
            Err(e) => return Err(usage(anyhow::Error::from(e).context("host is neither bipartite nor complete"))),
        },
    };
    if !c.is_proper() || !listramsey::verify_list_coloring(&lists, &c).map_err(usage)? {
        return Err(checked("colorer returned an invalid coloring"));
    }
    let colored = ListAssignment::new(c.host_arc().clone(), 1, c.colors().iter().map(|&x| vec![x]).collect())
        .expect("one color per edge");
    print!("{}", format_lists(&colored));
    Ok(())
}

fn bounds(a: BoundsArgs, budget: &SearchBudget) -> Outcome {
    let header = "family\tparams\tlower\tupper\tregime\tflags";
    if let Some(family) = a.family {
        let r = || need(a.r, "r");
        let k = || need(a.k, "k");
        let l = || need(a.l, "l");
        let res = match family {
            Family::Matching => closed_form(ClosedFamily::Matching, r()?, k()?),
            Family::Star2 => closed_form(ClosedFamily::Star2, r()?, 2),
            Family::StarK => closed_form(ClosedFamily::StarK, r()?, k()?),
            Family::MatchingList => list_bound(BoundParams::Matching { r: r()?, k: k()? }),
            Family::CliqueHypergraph => list_bound(BoundParams::CliqueHypergraph { r: r()?, l: l()?, k: k()? }),
            Family::HypergraphUpper => match (a.pi, a.m_h, a.r) {
                // H = K_r when only --r is given
                (None, None, Some(r)) => clique_upper_params(r, k()?).and_then(list_bound),
                (pi, m_h, _) => {
                    list_bound(BoundParams::HypergraphUpper { pi: need(pi, "pi")?, m_h: need(m_h, "m-h")?, k: k()? })
                }
            },
            Family::ChromaticLower => list_bound(BoundParams::ChromaticLower { r: r()?, l: l()?, k: k()? }),
            Family::NonPartiteLower => list_bound(BoundParams::NonPartiteLower { l: l()?, k: k()? }),
            Family::LPartite => list_bound(BoundParams::LPartite { r: r()?, l: l()?, k: k()? }),
        }
        .map_err(usage)?;
        out!("{header}\n{}", table_row(&res));
        for (name, v) in &res.extras {
            out!("# {name} = {}", serde_json::to_string(v).expect("magnitude serializes"));
        }
        return Ok(());
    }
    if a.r_min > a.r_max || a.k_min > a.k_max || a.r_min == 0 || a.k_min == 0 {
        return Err(usage(anyhow::anyhow!("empty or invalid grid")));
    }
    let rows = bound_table(a.r_min..=a.r_max, a.k_min..=a.k_max).map_err(usage)?;
    let mut text = String::from(header);
    text.push('\n');
    for row in &rows {
        text.push_str(&table_row(row));
        text.push('\n');
    }
    match &a.out {
        Some(p) => write_atomic(p, &text)?,
        None => print!("{text}"),
    }
    let bad = rows.iter().filter(|r| !r.is_consistent()).count();
    if let Some(p) = &a.cert {
        let table = BoundTable { r_min: a.r_min, r_max: a.r_max, k_min: a.k_min, k_max: a.k_max, rows };
        emit(Payload::BoundTable(table), Some(p), budget)?;
    }
    if bad > 0 {
        return Err(checked(format!("{bad} rows with lower > upper")));
    }
    Ok(())
}

fn union_bound(kind: CertCommand, out: Option<&Path>, budget: &SearchBudget) -> Outcome {
    let params = match kind {
        CertCommand::Types { n, l, m, k } => CertificateParams::Types { n, l, m, k },
        CertCommand::MatchingUb { r, k, n, t } => {
            let (n, t) = match (n, t) {
                (Some(n), Some(t)) => (n, t),
                _ => matching_ub_parameters(r, k).map_err(usage)?,
            };
            CertificateParams::MatchingUb { r, k, n, t }
        }
        CertCommand::Container { c, k, epsilon, pi, l, m_h, log2_n } => {
            CertificateParams::ContainerFeasibility { c, k, epsilon, pi, l, m_h, log2_n }
        }
        CertCommand::Supersat { r, l } => CertificateParams::SupersatDelta { r, l },
    };
    let value = certificate(&params).map_err(usage)?;
    eprintln!(
        "log value {:.12e} vs threshold {:.12e}: {}",
        value.log_value,
        value.log_threshold,
        if value.pass { "pass" } else { "fail" }
    );
    if !value.pass {
        return Err(checked("certificate condition does not hold"));
    }
    emit(Payload::UnionBound(UnionBound { params, value }), out, budget)?;
    Ok(())
}

fn probe(p: &str, k: usize, t: usize, n: usize, samples: u64, seed: u64, budget: &SearchBudget) -> Outcome {
    let h = pattern(p)?;
    let res = probe_upper(&h, k, t, n, samples, seed, budget).map_err(usage)?;
    let rate = res.rate().map_or("-".to_string(), |r| format!("{r:.6}"));
    out!("samples\tfailures\tsuccesses\tunknown\trate");
    out!("{}\t{}\t{}\t{}\t{rate}", res.samples, res.failures, res.successes, res.unknown);
    if res.unknown > 0 {
        return Err(unknown(format!("{} samples exhausted the budget", res.unknown)));
    }
    Ok(())
}

fn verify(path: &Path, budget: &SearchBudget) -> Outcome {
    let text = read_file(path)?;
    let cert = Certificate::from_json(&text).with_context(|| path.display().to_string()).map_err(usage)?;
    let checks = cert.verify(budget)?;
    for c in &checks {
        let status = status_word(c.status);
        match &c.detail {
            Some(d) => out!("{status}\t{}\t{d}", c.name),
            None => out!("{status}\t{}", c.name),
        }
    }
    match overall(&checks) {
        Status::Pass => Ok(()),
        Status::Fail => Err(checked("certificate does not verify")),
        Status::Unknown => Err(unknown("verification incomplete within budget")),
    }
}
