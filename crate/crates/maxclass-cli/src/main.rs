use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maxclass::analysis::{
    assign_types, check_branching, check_ramification, check_skelbottom, order_d_trees, partition_trees, GaloisTree,
};
use maxclass::equivalence::{check_fixed_points, check_local_to_global};
use maxclass::oracle::{brute_orbits, compare_with_skeleton, DEFAULT_BUDGET};
use maxclass::periodicity::{check_periodicity, check_slice_counts, period_records, root_shifts, slice_counts};
use maxclass::render::{to_dot, to_figure, SkeletonDoc};
use maxclass::report::{all_passed, Check, Status};
use maxclass::roots::{check_root_agreement, check_root_congruence, compare_roots};
use maxclass::session::{Session, SessionConfig};
use maxclass::skeleton::{build_skeleton, BuildOptions, Parallelism, SkeletonTree};
use maxclass::Error;

/// Skeleton trees of p-groups of maximal class.
///
/// Parallel sections use rayon; set RAYON_NUM_THREADS to fix the thread
/// count.
#[derive(Parser)]
#[command(name = "maxclass", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a skeleton and print it.
    Skeleton(SkeletonArgs),
    /// Run structural checks on a skeleton.
    Verify(VerifyArgs),
    /// Compare a skeleton level with exhaustive orbit enumeration.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct Instance {
    /// Prime, at least 7.
    #[arg(long)]
    p: u64,
    /// Branch index.
    #[arg(long)]
    n: u32,
    /// Keep only classes whose Galois order is a multiple of this.
    #[arg(long, default_value_t = 1)]
    min_gal: u32,
    /// Run single-threaded.
    #[arg(long)]
    sequential: bool,
}

impl Instance {
    fn skeleton_depth(&self) -> u32 {
        self.n.saturating_sub((2 * self.p).saturating_sub(8) as u32)
    }

    fn parallelism(&self) -> Parallelism {
        if self.sequential {
            Parallelism::Sequential
        } else {
            Parallelism::Auto
        }
    }

    fn build(&self, session_depth: u32, depth: u32, generator: Option<u64>) -> Result<(Session, SkeletonTree), Error> {
        let mut config = SessionConfig::new(self.p, self.n, session_depth);
        if let Some(g) = generator {
            config = config.with_generator(g);
        }
        let session = Session::new(config)?;
        if depth > session_depth {
            return Err(Error::InvalidParameters(format!("depth {depth} exceeds {session_depth}")));
        }
        let mut opts = BuildOptions::restricted(depth, self.min_gal);
        opts.parallelism = self.parallelism();
        let start = Instant::now();
        let tree = build_skeleton(&session, opts)?;
        log::info!("built {} nodes to depth {depth} in {:.2?}", tree.len(), start.elapsed());
        Ok((session, tree))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Figure,
}

#[derive(Args)]
struct SkeletonArgs {
    #[command(flatten)]
    instance: Instance,
    /// Depth to build; defaults to n - c.
    #[arg(long)]
    max_depth: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Generator of (Z/p)^* fixing σ and ω.
    #[arg(long)]
    generator: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Skelbottom,
    Ramification,
    Roots,
    Periodicity,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: Instance,
    /// Depth to build; defaults to n - c.
    #[arg(long)]
    max_depth: Option<u32>,
    #[arg(long, value_enum, default_value = "all")]
    check: CheckKind,
    /// Print the checks as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: Instance,
    /// Skeleton depth to compare.
    #[arg(long)]
    depth: u32,
    /// Largest number of points to enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameters(_) => 2,
        Error::PrecisionExhausted { .. } | Error::EnumerationBudget { .. } => 3,
        _ => 1,
    }
}

fn typed_trees(session: &Session, tree: &SkeletonTree, par: Parallelism) -> Result<Vec<GaloisTree>, Error> {
    let mut trees = partition_trees(tree);
    assign_types(session, tree, &mut trees, par)?;
    Ok(trees)
}

fn skeleton(args: &SkeletonArgs) -> Result<ExitCode, Error> {
    let inst = &args.instance;
    let depth = args.max_depth.unwrap_or(inst.skeleton_depth());
    let (session, tree) = inst.build(depth, depth, args.generator)?;
    let text = match args.format {
        Format::Json => SkeletonDoc::new(&tree, &typed_trees(&session, &tree, inst.parallelism())?).to_json() + "\n",
        Format::Dot => to_dot(&tree),
        Format::Figure => to_figure(&tree),
    };
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::InvalidParameters(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn order_d_check(session: &Session, tree: &SkeletonTree, trees: &[GaloisTree]) -> Check {
    let name = format!("order-d trees S_{}({})", session.p(), session.n());
    if tree.max_depth == 0 {
        return Check::new(name, Status::Vacuous, "depth 0");
    }
    let (count, depths) = order_d_trees(session, tree, trees);
    let ok = count == session.ell() && depths.iter().all(|&e| e == 1);
    Check::assert(name, ok, format!("{count} trees of order {}, root depths {depths:?}, ℓ = {}", session.d(), session.ell()))
}

fn verify(args: &VerifyArgs) -> Result<ExitCode, Error> {
    let inst = &args.instance;
    let par = inst.parallelism();
    let depth = args.max_depth.unwrap_or(inst.skeleton_depth());
    let wants = |k: CheckKind| args.check == k || args.check == CheckKind::All;
    // The shifted depths e + d need the full quotient level.
    let session_depth = if wants(CheckKind::Periodicity) { inst.skeleton_depth().max(depth) } else { depth };
    let (session, tree) = inst.build(session_depth, depth, None)?;
    let needs_types = wants(CheckKind::Ramification) || wants(CheckKind::Periodicity);
    let trees = if needs_types { typed_trees(&session, &tree, par)? } else { partition_trees(&tree) };

    let mut checks = Vec::new();
    if wants(CheckKind::Skelbottom) {
        checks.push(check_skelbottom(&session, &tree, &trees));
        checks.push(order_d_check(&session, &tree, &trees));
    }
    if wants(CheckKind::Ramification) {
        checks.push(check_ramification(&session, &tree, &trees)?.0);
        checks.extend(check_branching(&session, &tree, &trees, 3));
    }
    if wants(CheckKind::Roots) {
        let comparisons = compare_roots(&session, &tree, par)?;
        checks.push(check_root_agreement(&session, &comparisons));
        checks.push(check_root_congruence(&session, &comparisons));
        checks.push(check_fixed_points(&session, &tree, par)?);
    }
    if wants(CheckKind::Periodicity) {
        checks.extend(check_slice_counts(&session, &slice_counts(&session, &tree, &trees, 4, par)?));
        let periods = period_records(&session, &tree, &trees, par)?;
        let shifts = root_shifts(&session, &tree, par)?;
        checks.extend(check_periodicity(&session, &periods, &shifts));
    }

    if args.json {
        println!("{}", serde_json::to_string_pretty(&checks).expect("checks serialize"));
    } else {
        for c in &checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Report => "REPORT",
                Status::Vacuous => "VACUOUS",
            };
            println!("{tag:7} {}: {}", c.name, c.detail);
        }
    }
    Ok(if all_passed(&checks) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn oracle(args: &OracleArgs) -> Result<ExitCode, Error> {
    let inst = &args.instance;
    if inst.min_gal != 1 {
        return Err(Error::InvalidParameters("the oracle compares full skeletons".into()));
    }
    let (session, tree) = inst.build(args.depth, args.depth, None)?;
    let start = Instant::now();
    let partition = brute_orbits(&session, args.depth, args.budget)?;
    log::info!("enumerated {} points in {:.2?}", partition.space.size(), start.elapsed());
    if let Some(m) = compare_with_skeleton(&session, &tree, &partition)? {
        println!("mismatch at depth {}: {}", args.depth, serde_json::to_string(&m).expect("witness serializes"));
        return Ok(ExitCode::from(1));
    }
    let check = check_local_to_global(&session, &partition)?;
    println!(
        "identical: {} classes at depth {}, sizes and Galois orders agree",
        partition.classes.len(),
        args.depth
    );
    println!("{}: {}", check.name, check.detail);
    Ok(if check.failed() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Skeleton(a) => skeleton(a),
        Command::Verify(a) => verify(a),
        Command::Oracle(a) => oracle(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(exit_code(&e))
    })
}
