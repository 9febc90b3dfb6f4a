use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use qcets::conditions::check_for_girth;
use qcets::ets::DEFAULT_MAX_STEPS;
use qcets::graph::lift;
use qcets::io::{parse_exponent_matrix, parse_raw, write_exponent_matrix, ParseError};
use qcets::matrix::{CodeProfile, ExponentMatrix, TargetGirth};
use qcets::oracle::{run_oracle, OracleOptions};
use qcets::report::{ItemReport, ItemStatus, RunReport, Verdict};
use qcets::search::{
    search_with_stats, SearchError, SearchMode, SearchSpec, SymmetryOptions, DEFAULT_SEARCH_MAX_STEPS,
};

/// Environment variable overriding the step ceiling of searches and
/// trapping-set enumeration.
const MAX_STEPS_ENV: &str = "QCETS_MAX_STEPS";

/// Trapping-set size bound of `--fast` girth-8 runs.
const FAST_A_MAX: usize = 6;

#[derive(Parser)]
#[command(name = "qcets", version, about = "Verify, search and export (3,n)-regular QC-LDPC exponent matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Girth {
    #[value(name = "6")]
    Six,
    #[value(name = "8")]
    Eight,
}

impl From<Girth> for TargetGirth {
    fn from(g: Girth) -> Self {
        match g {
            Girth::Six => TargetGirth::Six,
            Girth::Eight => TargetGirth::Eight,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    FirstFound,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "I")]
    One,
    #[value(name = "II")]
    Two,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Alist,
    ExpandedText,
}

#[derive(Subcommand)]
enum Command {
    /// Check one matrix against the girth-6 or girth-8 conditions.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        girth: Girth,
        #[arg(long, value_enum, default_value = "on")]
        oracle: Switch,
        /// Input omits the zero first row and column (header `2 m N`).
        #[arg(long)]
        table_style: bool,
        /// Girth 8: enumerate trapping sets only up to a=6.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        json: bool,
    },
    /// Search for matrices passing the conditions.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        girth: Girth,
        #[arg(long = "N-min")]
        lifting_min: u32,
        #[arg(long = "N-max")]
        lifting_max: u32,
        #[arg(long, value_enum, default_value = "first-found")]
        mode: Mode,
        /// Do not require row 1 to increase across columns.
        #[arg(long)]
        no_sort_columns: bool,
        /// Girth 6: fix row 2 to twice row 1.
        #[arg(long)]
        third_row_doubling: bool,
        /// Restrict the first free entry to divisors of N.
        #[arg(long)]
        unit_scaling: bool,
        #[arg(long, value_enum, default_value = "on")]
        oracle: Switch,
        #[arg(long)]
        max_steps: Option<u64>,
        /// Also write the matrices, in text form, to this file.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Re-verify the bundled table matrices.
    Tables {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        fixtures_dir: Option<PathBuf>,
        /// Girth 8: enumerate trapping sets only up to a=6.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write a matrix as an alist parity-check matrix or as canonical text.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        table_style: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Failure that maps to exit code 2.
struct UsageError(String);

impl From<ParseError> for UsageError {
    fn from(e: ParseError) -> Self {
        UsageError(e.to_string())
    }
}

impl From<SearchError> for UsageError {
    fn from(e: SearchError) -> Self {
        UsageError(e.to_string())
    }
}

fn max_steps_from_env(default: u64) -> Result<u64, UsageError> {
    match std::env::var(MAX_STEPS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("{MAX_STEPS_ENV}={v} is not a step count"))),
        Err(_) => Ok(default),
    }
}

fn read_text(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path, table_style: bool) -> Result<ExponentMatrix, UsageError> {
    let text = read_text(path)?;
    let b = if table_style {
        parse_raw(&text)?.into_matrix(true)?
    } else {
        parse_exponent_matrix(&text)?
    };
    Ok(b)
}

fn oracle_options(profile: &CodeProfile, fast: bool, max_steps: u64) -> OracleOptions {
    let opts = OracleOptions::for_profile(profile).with_max_steps(max_steps);
    if fast && profile.target_girth == TargetGirth::Eight {
        opts.with_a_max(FAST_A_MAX.min(profile.a_max))
    } else {
        opts
    }
}

/// Condition check plus optional oracle for one matrix.
fn check_item(
    label: String,
    b: &ExponentMatrix,
    girth: TargetGirth,
    oracle: Option<&OracleOptions>,
) -> Result<ItemReport, UsageError> {
    let profile = CodeProfile::for_girth(girth);
    let mut item = ItemReport::new(label);
    item.matrix = Some(write_exponent_matrix(b));
    // DD, and with it every condition, is unchanged by normalization
    let checked = if girth == TargetGirth::Eight && !b.is_normalized() {
        item.notes.push("normalized before checking the girth-8 conditions".into());
        b.normalized()
    } else {
        b.clone()
    };
    let condition = check_for_girth(&checked, girth).expect("matrix is normalized");
    let mut ok = condition.passed();
    item.condition = Some(condition);
    if let Some(opts) = oracle {
        if opts.a_max < profile.a_max {
            item.notes.push(format!(
                "trapping sets enumerated up to a={} only; excluded classes with larger a are not covered",
                opts.a_max
            ));
        }
        let report = run_oracle(b, &profile, opts).map_err(|e| UsageError(e.to_string()))?;
        ok &= report.passed;
        item.oracle = Some(report);
    }
    item.status = if ok { ItemStatus::Pass } else { ItemStatus::Fail };
    Ok(item)
}

fn cmd_verify(
    report: &mut RunReport,
    file: &Path,
    girth: TargetGirth,
    oracle: Switch,
    table_style: bool,
    fast: bool,
) -> Result<(), UsageError> {
    let b = load_matrix(file, table_style)?;
    let opts = oracle_options(&CodeProfile::for_girth(girth), fast, max_steps_from_env(DEFAULT_MAX_STEPS)?);
    let item = check_item(
        file.display().to_string(),
        &b,
        girth,
        matches!(oracle, Switch::On).then_some(&opts),
    )?;
    report.verdict = Verdict::from_bool(item.status == ItemStatus::Pass);
    report.items.push(item);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    report: &mut RunReport,
    n: usize,
    girth: TargetGirth,
    lifting: (u32, u32),
    mode: Mode,
    symmetry: SymmetryOptions,
    oracle: Switch,
    max_steps: Option<u64>,
    output: Option<&Path>,
) -> Result<String, UsageError> {
    let mode = match mode {
        Mode::FirstFound => SearchMode::FirstFound,
        Mode::Exhaustive => SearchMode::Exhaustive,
    };
    let max_steps = match max_steps {
        Some(s) => s,
        None => max_steps_from_env(DEFAULT_SEARCH_MAX_STEPS)?,
    };
    let mut spec = SearchSpec::new(n, girth, lifting.0, lifting.1, mode)
        .with_symmetry(symmetry)
        .with_oracle(matches!(oracle, Switch::On))
        .with_max_steps(max_steps);
    spec.oracle.max_steps = max_steps_from_env(DEFAULT_MAX_STEPS)?;
    report.search = Some(spec.clone());
    let outcome = search_with_stats(&spec)?;
    report.lifting_outcomes = outcome.per_lifting;
    let mut text = String::new();
    for (k, b) in outcome.matrices.iter().enumerate() {
        let condition = check_for_girth(b, girth).expect("search output is normalized");
        let mut item = ItemReport::new(format!("witness {} (N={})", k + 1, b.lifting_degree()));
        item.matrix = Some(write_exponent_matrix(b));
        let mut ok = condition.passed();
        item.condition = Some(condition);
        if let Some(o) = outcome.oracle_reports.get(k) {
            ok &= o.passed;
            item.oracle = Some(o.clone());
        }
        item.status = if ok { ItemStatus::Pass } else { ItemStatus::Fail };
        report.items.push(item);
        if k > 0 {
            text.push('\n');
        }
        text.push_str(&write_exponent_matrix(b));
    }
    if let Some(path) = output {
        fs::write(path, &text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    }
    report.verdict = Verdict::from_bool(!report.items.is_empty() && report.items.iter().all(|i| i.status == ItemStatus::Pass));
    Ok(text)
}

/// Table fixture files `table{which}_n{n}.txt`, ordered by `n`.
fn table_fixtures(dir: &Path, which: &str) -> Result<Vec<(usize, PathBuf)>, UsageError> {
    let entries = fs::read_dir(dir).map_err(|e| UsageError(format!("{}: {e}", dir.display())))?;
    let prefix = format!("table{which}_n");
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| UsageError(e.to_string()))?.path();
        let name = path.file_name().and_then(|s| s.to_str()).unwrap_or_default();
        if let Some(n) = name
            .strip_prefix(&prefix)
            .and_then(|rest| rest.strip_suffix(".txt"))
            .and_then(|n| n.parse::<usize>().ok())
        {
            files.push((n, path));
        }
    }
    if files.is_empty() {
        return Err(UsageError(format!("no table {which} fixtures in {}", dir.display())));
    }
    files.sort();
    Ok(files)
}

fn cmd_tables(report: &mut RunReport, which: Which, dir: &Path, fast: bool) -> Result<(), UsageError> {
    let (name, girth) = match which {
        Which::One => ("I", TargetGirth::Six),
        Which::Two => ("II", TargetGirth::Eight),
    };
    let opts = oracle_options(&CodeProfile::for_girth(girth), fast, max_steps_from_env(DEFAULT_MAX_STEPS)?);
    for (n, path) in table_fixtures(dir, name)? {
        let label = format!("table {name} n={n}");
        let raw = parse_raw(&read_text(&path)?)?;
        let problems = raw.source_inconsistencies(girth);
        if !problems.is_empty() {
            let mut item = ItemReport::new(label);
            item.status = ItemStatus::Skipped;
            item.notes.push("skipped: inconsistent in source".into());
            item.notes.extend(problems);
            report.items.push(item);
            continue;
        }
        let b = raw.into_matrix(false)?;
        report.items.push(check_item(label, &b, girth, Some(&opts))?);
    }
    report.verdict = Verdict::from_bool(report.items.iter().all(|i| i.status != ItemStatus::Fail));
    Ok(())
}

fn cmd_export(file: &Path, format: Format, table_style: bool, output: Option<&Path>) -> Result<(), UsageError> {
    let b = load_matrix(file, table_style)?;
    let text = match format {
        Format::Alist => lift(&b).to_alist(),
        Format::ExpandedText => write_exponent_matrix(&b),
    };
    match output {
        Some(path) => fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn default_fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("tables")
}

fn emit(report: &RunReport, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
}

fn exit_code(report: &RunReport) -> ExitCode {
    match report.verdict {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Fail => ExitCode::from(1),
    }
}

fn run(cli: Cli) -> Result<ExitCode, UsageError> {
    let start = Instant::now();
    let mut report = RunReport::new(std::env::args().collect());
    match cli.command {
        Command::Verify {
            file,
            girth,
            oracle,
            table_style,
            fast,
            json,
        } => {
            cmd_verify(&mut report, &file, girth.into(), oracle, table_style, fast)?;
            report.elapsed_ms = start.elapsed().as_millis();
            emit(&report, json);
        }
        Command::Search {
            n,
            girth,
            lifting_min,
            lifting_max,
            mode,
            no_sort_columns,
            third_row_doubling,
            unit_scaling,
            oracle,
            max_steps,
            output,
            json,
        } => {
            let symmetry = SymmetryOptions {
                sort_columns: !no_sort_columns,
                third_row_doubling,
                unit_scaling,
            };
            let text = cmd_search(
                &mut report,
                n,
                girth.into(),
                (lifting_min, lifting_max),
                mode,
                symmetry,
                oracle,
                max_steps,
                output.as_deref(),
            )?;
            report.elapsed_ms = start.elapsed().as_millis();
            if report.items.is_empty() {
                eprintln!("no matrix found for N in [{lifting_min}, {lifting_max}]");
            }
            if !json {
                print!("{text}");
                if !text.is_empty() {
                    println!();
                }
            }
            emit(&report, json);
        }
        Command::Tables {
            which,
            fixtures_dir,
            fast,
            json,
        } => {
            let dir = fixtures_dir.unwrap_or_else(default_fixtures_dir);
            cmd_tables(&mut report, which, &dir, fast)?;
            report.elapsed_ms = start.elapsed().as_millis();
            emit(&report, json);
        }
        Command::Export {
            file,
            format,
            table_style,
            output,
        } => {
            cmd_export(&file, format, table_style, output.as_deref())?;
            return Ok(ExitCode::SUCCESS);
        }
    }
    Ok(exit_code(&report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
