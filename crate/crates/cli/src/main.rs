use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use monouf::generate::{generate_instance, GenParams, Mode};
use monouf::infer::UpdateFunctionTable;
use monouf::oracle::{count_solutions, oracle_inference, OracleVerdict, DEFAULT_BUDGET};
use monouf::problem_file::{parse_problem, write_problem};
use monouf::smt::SOLVER_ENV;
use monouf::{SolverCommand, Strategy};
use monouf_cli::{
    cumulative, instance_files, run_batch, run_single, solved_by, write_csv, RunConfig, Verdict,
};

const EXIT_SAT: u8 = 0;
const EXIT_UNSAT: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "monouf", version, about = "Monotone network inference via SMT")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem file.
    Solve(SolveArgs),
    /// Write seeded random problem files.
    Generate(GenerateArgs),
    /// Run every strategy on every problem file of a directory.
    Bench(BenchArgs),
    /// Decide a tiny problem by exhaustive enumeration.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct SolverArgs {
    /// Solver command line; defaults to $MONOUF_SOLVER, then `z3 -in`.
    #[arg(long, value_name = "CMD")]
    solver_cmd: Option<String>,
    /// Time limit per run, including parsing and encoding.
    #[arg(long, value_name = "MS", default_value_t = 600_000)]
    timeout_ms: u64,
    /// Decode and check the update functions of every sat answer.
    #[arg(long)]
    verify: bool,
    /// Disable value propagation and the Boolean essentiality shortcut.
    #[arg(long)]
    no_simplify: bool,
}

impl SolverArgs {
    fn config(&self, strategy: Strategy) -> anyhow::Result<RunConfig> {
        let solver = match &self.solver_cmd {
            Some(s) => SolverCommand::parse(s).context("empty --solver-cmd")?,
            None => SolverCommand::from_env(),
        };
        let mut c = RunConfig::new(strategy, solver);
        c.time_limit = Some(Duration::from_millis(self.timeout_ms));
        c.verify = self.verify;
        c.simplify = !self.no_simplify;
        Ok(c)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_name = "FILE")]
    problem: PathBuf,
    #[arg(long, default_value = "instantiated-lazy", value_parser = parse_strategy)]
    encoding: Strategy,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the SMT-LIB2 script to this file (first round for the lazy encoding).
    #[arg(long, value_name = "PATH")]
    emit_smt2: Option<PathBuf>,
    /// Print the run record (and decoded tables) as JSON.
    #[arg(long)]
    json: bool,
    /// Print the decoded update tables of a sat answer.
    #[arg(long)]
    tables: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of instances, with seeds `seed, seed+1, ...`; needs --out-dir when > 1.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, default_value_t = 5)]
    n_vars: usize,
    #[arg(long, default_value_t = 3)]
    max_arity: usize,
    /// 2 for Boolean variables, otherwise the number of levels.
    #[arg(long, default_value_t = 2)]
    domain_size: usize,
    #[arg(long, default_value_t = 0.7)]
    sign_ratio: f64,
    #[arg(long, default_value_t = 0.5)]
    essential_ratio: f64,
    #[arg(long, default_value_t = 2)]
    observations: usize,
    #[arg(long, default_value_t = 1.0)]
    observed_ratio: f64,
    #[arg(long, default_value = "planted")]
    mode: Mode,
    /// Single output file; stdout when absent.
    #[arg(long, value_name = "FILE", conflicts_with = "out_dir")]
    out: Option<PathBuf>,
    /// Directory receiving `<prefix><seed>.problem` files.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, default_value = "inst-")]
    prefix: String,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of problem files.
    dir: PathBuf,
    /// Comma-separated encodings.
    #[arg(long, value_delimiter = ',', value_parser = parse_strategy,
          default_value = "quantified-individual,quantified-aggregated,instantiated-eager,instantiated-lazy")]
    strategies: Vec<Strategy>,
    #[arg(long, default_value_t = 16)]
    parallel: usize,
    #[command(flatten)]
    solver: SolverArgs,
    /// Per-run CSV; stdout when absent.
    #[arg(long, value_name = "PATH")]
    csv_out: Option<PathBuf>,
    /// Cumulative CSV; defaults to the --csv-out path with a `.cumulative.csv` suffix.
    #[arg(long, value_name = "PATH")]
    cumulative_out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_name = "FILE")]
    problem: PathBuf,
    /// Largest number of candidate tables or combinations to enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Also count all solutions.
    #[arg(long)]
    count: bool,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

fn read_input(path: &Path) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_NO_INPUT)
    })
}

fn print_tables(out: &mut impl Write, tables: &[UpdateFunctionTable]) -> io::Result<()> {
    for t in tables {
        writeln!(out, "{}:", t.symbol.name())?;
        for (args, v) in &t.rows {
            let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
            writeln!(out, "  ({}) -> {v}", args.join(", "))?;
        }
    }
    Ok(())
}

fn tables_json(tables: &[UpdateFunctionTable]) -> serde_json::Value {
    tables
        .iter()
        .map(|t| {
            let rows: Vec<serde_json::Value> = t
                .rows
                .iter()
                .map(|(args, v)| {
                    serde_json::json!({
                        "args": args.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                        "value": v.to_string(),
                    })
                })
                .collect();
            serde_json::json!({ "symbol": t.symbol.name(), "rows": rows })
        })
        .collect()
}

fn solve(args: SolveArgs) -> anyhow::Result<ExitCode> {
    let text = match read_input(&args.problem) {
        Ok(t) => t,
        Err(code) => return Ok(code),
    };
    let mut config = args.solver.config(args.encoding)?;
    config.emit_script = args.emit_smt2.is_some();
    config.decode = args.tables || args.json;
    let id = args
        .problem
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let out = match run_single(&id, &text, &config) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {}: {e}", args.problem.display());
            return Ok(ExitCode::from(EXIT_DATA));
        }
    };
    if let (Some(path), Some(script)) = (&args.emit_smt2, &out.script) {
        if let Err(e) = fs::write(path, script) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return Ok(ExitCode::from(EXIT_IO));
        }
    }
    let r = &out.record;
    let mut stdout = io::stdout().lock();
    if args.json {
        let mut v = serde_json::to_value(r)?;
        if let Some(t) = &out.tables {
            v["tables"] = tables_json(t);
        }
        writeln!(stdout, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        writeln!(stdout, "{}", r.outcome())?;
        let mut line = format!(
            "strategy={} time_ms={:.1} lemmas={} check_sat={}",
            r.strategy, r.time_ms, r.lemma_count, r.check_sat_calls
        );
        if let Some(v) = r.verified {
            line.push_str(&format!(" verified={v}"));
        }
        eprintln!("{line}");
        if !r.detail.is_empty() {
            eprintln!("{}", r.detail);
        }
        if args.tables {
            if let Some(t) = &out.tables {
                print_tables(&mut stdout, t)?;
            }
        }
    }
    Ok(ExitCode::from(match r.verdict {
        Some(Verdict::Sat) => EXIT_SAT,
        Some(Verdict::Unsat) => EXIT_UNSAT,
        None => EXIT_UNKNOWN,
    }))
}

fn generate(args: GenerateArgs) -> anyhow::Result<ExitCode> {
    let params = GenParams {
        n_vars: args.n_vars,
        max_arity: args.max_arity,
        domain_size: args.domain_size,
        sign_ratio: args.sign_ratio,
        essential_ratio: args.essential_ratio,
        n_observations: args.observations,
        observed_ratio: args.observed_ratio,
        mode: args.mode,
    };
    if let Err(e) = params.validate() {
        eprintln!("error: {e}");
        return Ok(ExitCode::from(EXIT_USAGE));
    }
    if args.count > 1 && args.out_dir.is_none() {
        eprintln!("error: --count > 1 needs --out-dir");
        return Ok(ExitCode::from(EXIT_USAGE));
    }
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for k in 0..args.count {
        let seed = args.seed.wrapping_add(k);
        let text = write_problem(&generate_instance(seed, &params)?.problem);
        match (&args.out_dir, &args.out) {
            (Some(dir), _) => {
                let path = dir.join(format!("{}{seed}.problem", args.prefix));
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            (None, Some(path)) => {
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
            }
            (None, None) => io::stdout().write_all(text.as_bytes())?,
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs) -> anyhow::Result<ExitCode> {
    let files = match instance_files(&args.dir) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot list {}: {e}", args.dir.display());
            return Ok(ExitCode::from(EXIT_NO_INPUT));
        }
    };
    let config = args.solver.config(Strategy::InstEager)?;
    let records = run_batch(&files, &args.strategies, args.parallel, &config);
    let curve = cumulative(&records, &args.strategies);

    match &args.csv_out {
        Some(path) => {
            let file =
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(file, &records)?;
            let cum = args.cumulative_out.clone().unwrap_or_else(|| {
                let stem = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                path.with_file_name(format!("{stem}.cumulative.csv"))
            });
            let file =
                fs::File::create(&cum).with_context(|| format!("creating {}", cum.display()))?;
            write_csv(file, &curve)?;
        }
        None => {
            write_csv(io::stdout().lock(), &records)?;
            if let Some(cum) = &args.cumulative_out {
                let file =
                    fs::File::create(cum).with_context(|| format!("creating {}", cum.display()))?;
                write_csv(file, &curve)?;
            }
        }
    }
    for s in &args.strategies {
        let total = records.iter().filter(|r| r.strategy == s.name()).count();
        eprintln!(
            "{}: solved {}/{total}",
            s.name(),
            solved_by(&curve, s.name(), f64::INFINITY)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle(args: OracleArgs) -> anyhow::Result<ExitCode> {
    let text = match read_input(&args.problem) {
        Ok(t) => t,
        Err(code) => return Ok(code),
    };
    let p = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}: {e}", args.problem.display());
            return Ok(ExitCode::from(EXIT_DATA));
        }
    };
    let verdict = match oracle_inference(&p, args.budget) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(EXIT_UNKNOWN));
        }
    };
    let mut stdout = io::stdout().lock();
    match &verdict {
        OracleVerdict::Sat(tables) => {
            writeln!(stdout, "sat")?;
            print_tables(&mut stdout, tables)?;
        }
        OracleVerdict::Unsat => writeln!(stdout, "unsat")?,
    }
    if args.count {
        match count_solutions(&p, args.budget) {
            Ok(n) => writeln!(stdout, "solutions: {n}")?,
            Err(e) => eprintln!("count: {e}"),
        }
    }
    Ok(ExitCode::from(if verdict.is_sat() {
        EXIT_SAT
    } else {
        EXIT_UNSAT
    }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Generate(a) => generate(a),
        Command::Bench(a) => bench(a),
        Command::Oracle(a) => oracle(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        eprintln!("(solver: set --solver-cmd or {SOLVER_ENV})");
        ExitCode::from(EXIT_UNKNOWN)
    })
}
