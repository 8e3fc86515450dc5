//! Command-line interface: braid-matroid Kazhdan-Lusztig polynomials,
//! enumeration tables, and the verification suites.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or limit error.
//! Long enumerations report progress on standard error; standard output
//! carries only the machine-readable result.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use braidkl::equivariant::verify_theorem_equivariant;
use braidkl::exactmath::IntPolynomial;
use braidkl::gfseries::{build_a, build_s_from_a, kl_poly_from_s, z_poly_from_a};
use braidkl::klcalc::{braid_kl, braid_kl_partition_lattice, verify_theorem_main, KlEngine};
use braidkl::matroid::{Matroid, Multigraph};
use braidkl::report::VerifyReport;
use braidkl::spenum::{
    self, cacti_count_formula, cactus_to_matroid, enum_family, enum_qsp, enum_simple_qsp,
    enum_triangular_cacti, matroid_to_cactus, relation_checks, tables_to_csv, CountTable, Family,
};

const JOBS_ENV: &str = "BRAIDKL_JOBS";
const GENFUN_MAX_N: usize = 13;
const GENERIC_MAX_N: usize = 7;

#[derive(Parser)]
#[command(name = "braidkl", version, about = "Kazhdan-Lusztig polynomials of braid matroids: exact engines, enumeration tables, verification suites")]
struct Cli {
    /// Worker threads for enumeration (default: BRAIDKL_JOBS or all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print P and Z of the braid matroid on n vertices
    Kl(KlArgs),
    /// P and Z of the cycle matroid of a multigraph file (lines: `u v label`)
    KlGraph(KlGraphArgs),
    /// Enumeration count tables, one column per ground-set size
    Tables(TablesArgs),
    /// Run a verification suite; exit 1 on any mismatch
    Verify(VerifyArgs),
}

#[derive(Args)]
struct KlArgs {
    /// Number of vertices, 1..=13
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Engine::All)]
    engine: Engine,
    /// Truncation order for the generating-function engine
    #[arg(long, default_value_t = 12)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args)]
struct KlGraphArgs {
    /// Path to the multigraph file
    file: std::path::PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long, value_enum)]
    family: FamilyOpt,
    #[arg(long)]
    max_n: usize,
    /// Allow the 8-element quasi series-parallel enumerations
    #[arg(long)]
    extended: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Largest braid index / ground size exercised (suite-specific default)
    #[arg(long)]
    max_n: Option<usize>,
    /// Truncation order for the generating-function checks
    #[arg(long, default_value_t = 10)]
    order: usize,
    /// Allow the 8-element enumerations
    #[arg(long)]
    extended: bool,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Engine {
    Generic,
    Stirling,
    Genfun,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyOpt {
    Sp,
    Qsp,
    SimpleQsp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Main,
    Equivariant,
    Genfun,
    Cacti,
    Relations,
    All,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Plain,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs.or_else(|| {
        std::env::var(JOBS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    });
    if let Some(jobs) = jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: cannot configure {jobs} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match cli.command {
        Command::Kl(args) => cmd_kl(args),
        Command::KlGraph(args) => cmd_kl_graph(args),
        Command::Tables(args) => cmd_tables(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn print_kl(
    label: &str,
    p: &IntPolynomial,
    z: &IntPolynomial,
    engines: &[&str],
    agreement: bool,
    format: Format,
) {
    match format {
        Format::Json => {
            let coeffs = |q: &IntPolynomial| -> Vec<String> {
                q.coeffs().iter().map(|c| c.to_string()).collect()
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "input": label,
                    "p": coeffs(p),
                    "z": coeffs(z),
                    "engines": engines,
                    "agreement": agreement,
                }))
                .unwrap()
            );
        }
        _ => {
            println!("P = {p}; Z = {z}");
            println!(
                "engines: {}; agreement: {}",
                engines.join(", "),
                if agreement { "ok" } else { "MISMATCH" }
            );
        }
    }
}

fn cmd_kl(args: KlArgs) -> ExitCode {
    let n = args.n;
    if n == 0 || n > GENFUN_MAX_N {
        return usage_error(format!("--n must be in 1..={GENFUN_MAX_N}"));
    }
    let mut results: Vec<(&str, IntPolynomial, IntPolynomial)> = Vec::new();
    let want = |e: Engine| args.engine == Engine::All || args.engine == e;

    if want(Engine::Stirling) {
        match braid_kl(n) {
            Ok(kl) => results.push(("stirling", kl.p, kl.z)),
            Err(e) => return usage_error(e),
        }
    }
    if want(Engine::Generic) {
        if n > GENERIC_MAX_N {
            if args.engine == Engine::Generic {
                return usage_error(format!("generic engine supports n <= {GENERIC_MAX_N}"));
            }
        } else if (2..=6).contains(&n) {
            let engine = KlEngine::new();
            match engine.kl_generic(&Matroid::braid(n).unwrap()) {
                Ok(kl) => results.push(("generic", kl.p, kl.z)),
                Err(e) => return usage_error(e),
            }
        } else {
            match braid_kl_partition_lattice(n) {
                Ok(kl) => results.push(("generic-partition", kl.p, kl.z)),
                Err(e) => return usage_error(e),
            }
        }
    }
    if want(Engine::Genfun) {
        let order = args.order.max(n.saturating_sub(1));
        let a = match build_a(order) {
            Ok(a) => a,
            Err(e) => return usage_error(e),
        };
        let s = match build_s_from_a(&a) {
            Ok(s) => s,
            Err(e) => return usage_error(e),
        };
        let p = kl_poly_from_s(&s, n - 1).expect("within order");
        let z = z_poly_from_a(&a, n - 1).expect("within order");
        results.push(("genfun", p, z));
    }
    let agreement = results
        .windows(2)
        .all(|w| w[0].1 == w[1].1 && w[0].2 == w[1].2);
    let engines: Vec<&str> = results.iter().map(|r| r.0).collect();
    let (_, p, z) = &results[0];
    print_kl(&format!("braid({n})"), p, z, &engines, agreement, args.format);
    if agreement {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_kl_graph(args: KlGraphArgs) -> ExitCode {
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("{}: {e}", args.file.display())),
    };
    let graph = match Multigraph::parse(&text) {
        Ok(g) => g,
        Err(e) => return usage_error(e),
    };
    let matroid = match Matroid::from_graph(&graph) {
        Ok(m) => m,
        Err(e) => return usage_error(e),
    };
    let engine = KlEngine::new();
    match engine.kl_generic(&matroid) {
        Ok(kl) => {
            print_kl(
                &format!("{}", args.file.display()),
                &kl.p,
                &kl.z,
                &["generic"],
                true,
                args.format,
            );
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(e),
    }
}

fn cmd_tables(args: TablesArgs) -> ExitCode {
    let family = match args.family {
        FamilyOpt::Sp => Family::SeriesParallel,
        FamilyOpt::Qsp => Family::QuasiSeriesParallel,
        FamilyOpt::SimpleQsp => Family::SimpleQuasiSeriesParallel,
    };
    let mut tables = Vec::new();
    for n in 1..=args.max_n {
        eprintln!("enumerating n = {n} ...");
        match enum_family(family, n, args.extended) {
            Ok(groups) => tables.push(CountTable::from_groups(&groups)),
            Err(e) => return usage_error(e),
        }
    }
    match args.format {
        Format::Json => {
            let obj: BTreeMap<usize, Vec<String>> = tables
                .iter()
                .map(|t| (t.n, t.counts.iter().map(|c| c.to_string()).collect()))
                .collect();
            println!("{}", serde_json::to_string_pretty(&json!(obj)).unwrap());
        }
        _ => print!("{}", tables_to_csv(&tables)),
    }
    ExitCode::SUCCESS
}

fn suite_main(max_n: usize, extended: bool) -> Result<VerifyReport, String> {
    let mut report = VerifyReport::new("main");
    for n in 2..=max_n {
        eprintln!("theorem check n = {n} ...");
        let simple = enum_simple_qsp(n - 1).map_err(|e| e.to_string())?;
        let all = enum_qsp(n - 1, extended).map_err(|e| e.to_string())?;
        let sub = verify_theorem_main(
            n,
            &CountTable::from_groups(&simple),
            &CountTable::from_groups(&all),
        )
        .map_err(|e| e.to_string())?;
        report.absorb(sub);
    }
    Ok(report)
}

fn suite_equivariant(max_n: usize) -> Result<VerifyReport, String> {
    let mut report = VerifyReport::new("equivariant");
    for n in 3..=max_n {
        eprintln!("equivariant check n = {n} ...");
        let sub = verify_theorem_equivariant(n).map_err(|e| e.to_string())?;
        report.absorb(sub);
    }
    Ok(report)
}

fn suite_genfun(order: usize) -> Result<VerifyReport, String> {
    let mut report = VerifyReport::new("genfun");
    let a = build_a(order).map_err(|e| e.to_string())?;
    let s = build_s_from_a(&a).map_err(|e| e.to_string())?;
    for n in 1..=order + 1 {
        let kl = braid_kl(n).map_err(|e| e.to_string())?;
        let p = kl_poly_from_s(&s, n - 1).map_err(|e| e.to_string())?;
        let z = z_poly_from_a(&a, n - 1).map_err(|e| e.to_string())?;
        report.check_eq(format!("P_K{n}: recursion vs series"), &kl.p, &p);
        report.check_eq(format!("Z_K{n}: recursion vs series"), &kl.z, &z);
    }
    Ok(report)
}

fn suite_cacti() -> Result<VerifyReport, String> {
    let mut report = VerifyReport::new("cacti");
    for k in 2..=4usize {
        let m = 2 * k - 1;
        let cacti = enum_triangular_cacti(m).map_err(|e| e.to_string())?;
        report.check_eq(
            format!("#cacti on [{m}] vs closed form"),
            cacti.len(),
            cacti_count_formula(k).map_err(|e| e.to_string())?,
        );
        let mut roundtrips = true;
        for c in &cacti {
            let matroid = cactus_to_matroid(c).map_err(|e| e.to_string())?;
            roundtrips &= matroid_to_cactus(&matroid).map_err(|e| e.to_string())? == *c;
        }
        report.check(
            format!("roundtrip through matroids on [{m}]"),
            roundtrips,
            format!("{} instances", cacti.len()),
        );
    }
    Ok(report)
}

fn suite_relations(max_n: usize) -> Result<VerifyReport, String> {
    let mut report = VerifyReport::new("relations");
    for n in 1..=max_n {
        eprintln!("relations n = {n} ...");
        report.absorb(relation_checks(n).map_err(|e| e.to_string())?);
    }
    report.absorb(spenum::e_sequence_report(3).map_err(|e| e.to_string())?);
    Ok(report)
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let run = |suite: Suite| -> Result<VerifyReport, String> {
        match suite {
            Suite::Main => suite_main(args.max_n.unwrap_or(6).min(8), args.extended),
            Suite::Equivariant => suite_equivariant(args.max_n.unwrap_or(5).min(6)),
            Suite::Genfun => suite_genfun(args.order),
            Suite::Cacti => suite_cacti(),
            Suite::Relations => suite_relations(args.max_n.unwrap_or(6).min(7)),
            Suite::All => unreachable!(),
        }
    };
    let result: Result<VerifyReport, String> = match args.suite {
        Suite::All => {
            let mut combined = VerifyReport::new("all");
            for suite in [
                Suite::Main,
                Suite::Equivariant,
                Suite::Genfun,
                Suite::Cacti,
                Suite::Relations,
            ] {
                match run(suite) {
                    Ok(r) => combined.absorb(r),
                    Err(e) => return usage_error(e),
                }
            }
            Ok(combined)
        }
        suite => run(suite),
    };
    match result {
        Ok(report) => {
            println!("{}", report.to_json());
            if report.pass {
                ExitCode::SUCCESS
            } else {
                let first = report.first_failure().unwrap();
                eprintln!(
                    "FAILED: {} (computed {}, expected {})",
                    first.name, first.lhs, first.rhs
                );
                ExitCode::from(1)
            }
        }
        Err(e) => usage_error(e),
    }
}
