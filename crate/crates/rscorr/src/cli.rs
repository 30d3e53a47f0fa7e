//! Command-line front end: every library operation behind a subcommand,
//! emitting CSV or JSON tables with a provenance header (tool version,
//! command line, worker count) and no timestamps, so identical runs
//! produce byte-identical output.
//!
//! Exit codes: 0 on success, 1 when a `verify` suite reports a failure,
//! 2 on usage or runtime errors.

mod checks;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::congruence::{crt_solve, enumerate_delta_vectors, valuation_pattern_system, CongruenceSystem, ResidueClass};
use crate::corrmeasure::{
    correlation_measure, rs_window, subword_complexity, sup_norm_grid, SearchMode,
};
use crate::digital::{r01, r11, rudin_shapiro, s2, AlphaVector};
use crate::primecorr::{
    convergence_table, odd_integer_sum, psi_sum, s_alpha_sum, s_k_sum, CorrKind, DigitFunc,
    SumValue,
};
use crate::primes::{build_table, PrimeTable};

#[derive(Parser)]
#[command(
    name = "rscorr",
    version,
    about = "Digit-block calculus and prime-indexed correlation sums for the Rudin-Shapiro sequence",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads (default: RSCORR_WORKERS, then the core count)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,

    /// Write output to this file instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Sieve cache file: loaded when valid and large enough, otherwise
    /// rebuilt and saved back
    #[arg(long, global = true)]
    sieve_cache: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFunc {
    /// Sequence signs +1/-1
    Rs,
    /// Overlapping 11-block count
    R11,
    /// Overlapping 01-block count (leading zero included)
    R01,
    /// Binary digit sum
    S2,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    /// Offsets 0..=k
    Consecutive,
    /// Offsets {0, k}
    Pair,
}

impl From<KindArg> for CorrKind {
    fn from(kind: KindArg) -> CorrKind {
        match kind {
            KindArg::Consecutive => CorrKind::Consecutive,
            KindArg::Pair => CorrKind::Pair,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FuncArg {
    R11,
    S2,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightArg {
    /// Unit weight at primes
    Prime,
    /// Von Mangoldt weight at prime powers
    Mangoldt,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Bounded,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemmas,
    Oracles,
    Congruence,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Emit sequence or digit-statistic values
    Gen {
        #[arg(value_enum)]
        function: GenFunc,
        /// First index (scaled integers like 2^20 or 10^6 are accepted)
        start: String,
        /// Number of rows, at most 2^26
        count: String,
    },
    /// Search the order-k correlation measure of a sign window
    Corr {
        /// Window length
        #[arg(long)]
        n: String,
        /// Correlation order
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Largest delay (bounded mode); defaults to n in exact mode
        #[arg(long)]
        d_max: Option<String>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Cap on estimated inner operations
        #[arg(long)]
        budget: Option<String>,
    },
    /// Convergence table of prime-indexed sign sums
    PrimeCorr {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long)]
        k: usize,
        /// Grid of limits: one value, a comma list, or A..B:geometric[:R]
        #[arg(long)]
        grid: String,
    },
    /// Baseline sign sums over odd integers
    OddCorr {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long)]
        k: usize,
        /// Digit statistic driving the signs
        #[arg(long, value_enum, default_value = "r11")]
        func: FuncArg,
        #[arg(long)]
        grid: String,
    },
    /// Weighted exponential sum over primes or prime powers
    Expsum {
        /// Comma list of phase weights alpha_0,...,alpha_k
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: String,
        #[arg(long, value_enum, default_value = "prime")]
        weight: WeightArg,
    },
    /// Solve a congruence system (classes as residue:modulus), or a
    /// valuation-pattern system given by --pattern-u/--pattern-eps
    Crt {
        classes: Vec<String>,
        /// Comma list of valuations u_1,...,u_k
        #[arg(long)]
        pattern_u: Option<String>,
        /// Comma list of next-bit values e_1,...,e_k
        #[arg(long)]
        pattern_eps: Option<String>,
    },
    /// Enumerate the boundary-difference vectors attained at odd primes
    LambdaK {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        limit: String,
    },
    /// Sup of the sequence's trigonometric polynomial on a phase grid
    Supnorm {
        #[arg(long)]
        n: String,
        /// Grid size (default 8n, minimum 4n)
        #[arg(long)]
        grid: Option<String>,
    },
    /// Count distinct length-k factors of a sequence prefix
    Subword {
        /// Comma list of factor lengths
        #[arg(long)]
        k: String,
        #[arg(long)]
        prefix_len: String,
    },
    /// Run invariant suites and exit 1 on any failure
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Sweep bound for the lemmas suite (default 2^22); other suites
        /// run at fixed documented scales
        #[arg(long)]
        limit: Option<String>,
    },
    /// Timed reference runs of the main kernels (timings as comments)
    Bench,
}

/// Table cell; formats identically into CSV and JSON.
enum Cell {
    U64(u64),
    I64(i64),
    F64(f64),
    Str(String),
    Bool(bool),
    Null,
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    notes: Vec<String>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::U64(v) => v.to_string(),
            Cell::I64(v) => v.to_string(),
            Cell::F64(v) => format!("{v}"),
            Cell::Str(s) => csv_escape(s),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::U64(v) => serde_json::Value::from(*v),
            Cell::I64(v) => serde_json::Value::from(*v),
            Cell::F64(v) => serde_json::Number::from_f64(*v)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Cell::Str(s) => serde_json::Value::from(s.clone()),
            Cell::Bool(b) => serde_json::Value::from(*b),
            Cell::Null => serde_json::Value::Null,
        }
    }
}

/// Parse a nonnegative integer, accepting base^exponent shorthand.
fn parse_scaled(text: &str) -> Result<u64, String> {
    let text = text.trim();
    if let Some((base, exp)) = text.split_once('^') {
        let base: u64 = base
            .trim()
            .parse()
            .map_err(|_| format!("bad integer base in {text:?}"))?;
        let exp: u32 = exp
            .trim()
            .parse()
            .map_err(|_| format!("bad integer exponent in {text:?}"))?;
        base.checked_pow(exp)
            .ok_or_else(|| format!("{text:?} overflows 64 bits"))
    } else {
        text.parse()
            .map_err(|_| format!("bad integer {text:?} (use digits or base^exp)"))
    }
}

/// Parse a grid: one scaled value, a comma list, or `A..B:geometric[:R]`.
fn parse_grid(text: &str) -> Result<Vec<u64>, String> {
    let text = text.trim();
    let grid = if let Some((range, suffix)) = text.split_once(':') {
        let (a, b) = range
            .split_once("..")
            .ok_or_else(|| format!("grid {text:?} needs A..B before the colon"))?;
        let (mode, ratio) = match suffix.split_once(':') {
            Some((mode, ratio)) => (mode, parse_scaled(ratio)?),
            None => (suffix, 10),
        };
        if mode != "geometric" {
            return Err(format!("unknown grid mode {mode:?} (only geometric)"));
        }
        if ratio < 2 {
            return Err("geometric ratio must be at least 2".into());
        }
        let (a, b) = (parse_scaled(a)?, parse_scaled(b)?);
        if a < 1 || a > b {
            return Err(format!("bad geometric range {a}..{b}"));
        }
        let mut points = Vec::new();
        let mut x = a;
        loop {
            points.push(x);
            match x.checked_mul(ratio) {
                Some(next) if next <= b => x = next,
                _ => break,
            }
        }
        points
    } else {
        text.split(',')
            .map(parse_scaled)
            .collect::<Result<Vec<u64>, String>>()?
    };
    if grid.is_empty() {
        return Err("grid is empty".into());
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err("grid must be strictly increasing".into());
    }
    Ok(grid)
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>()
                .map_err(|_| format!("bad real number {part:?}"))
        })
        .collect()
}

fn resolve_workers(flag: Option<usize>) -> Result<usize, String> {
    if let Some(w) = flag {
        if w == 0 {
            return Err("--workers must be at least 1".into());
        }
        return Ok(w);
    }
    if let Ok(text) = std::env::var("RSCORR_WORKERS") {
        return text
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&w| w >= 1)
            .ok_or_else(|| format!("RSCORR_WORKERS={text:?} is not a positive integer"));
    }
    Ok(std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1))
}

/// Load the sieve cache when it is valid and covers `limit`; otherwise
/// build the table (and save it back when a cache path was given).
fn obtain_table(
    limit: u64,
    cache: Option<&PathBuf>,
    notes: &mut Vec<String>,
) -> Result<PrimeTable, String> {
    if let Some(path) = cache {
        match PrimeTable::load_cache(path) {
            Ok(table) if table.limit() >= limit => {
                notes.push(format!(
                    "sieve cache: loaded {} (limit {})",
                    path.display(),
                    table.limit()
                ));
                return Ok(table);
            }
            Ok(table) => notes.push(format!(
                "sieve cache: limit {} below required {limit}, rebuilding",
                table.limit()
            )),
            Err(err) => notes.push(format!("sieve cache: rebuilding ({err})")),
        }
        let table = build_table(limit).map_err(|e| e.to_string())?;
        table.save_cache(path).map_err(|e| e.to_string())?;
        notes.push(format!("sieve cache: saved {}", path.display()));
        Ok(table)
    } else {
        build_table(limit).map_err(|e| e.to_string())
    }
}

/// Binary entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<i32, String> {
    let workers = resolve_workers(cli.workers)?;
    let format = cli.format.unwrap_or(OutFormat::Csv);
    let command_line: String = {
        let args: Vec<String> = std::env::args().skip(1).collect();
        args.join(" ")
    };
    let cache = cli.sieve_cache.as_ref();

    let (table, exit_code) = match cli.command {
        Command::Gen {
            function,
            start,
            count,
        } => (cmd_gen(function, &start, &count)?, 0),
        Command::Corr {
            n,
            k,
            d_max,
            mode,
            budget,
        } => (cmd_corr(&n, k, d_max.as_deref(), mode, budget.as_deref())?, 0),
        Command::PrimeCorr { kind, k, grid } => {
            (cmd_prime_corr(kind, k, &grid, cache, workers)?, 0)
        }
        Command::OddCorr {
            kind,
            k,
            func,
            grid,
        } => (cmd_odd_corr(kind, k, func, &grid, workers)?, 0),
        Command::Expsum { alpha, n, weight } => {
            (cmd_expsum(&alpha, &n, weight, cache, workers)?, 0)
        }
        Command::Crt {
            classes,
            pattern_u,
            pattern_eps,
        } => (cmd_crt(&classes, pattern_u.as_deref(), pattern_eps.as_deref())?, 0),
        Command::LambdaK { k, limit } => (cmd_lambda_k(k, &limit, cache)?, 0),
        Command::Supnorm { n, grid } => (cmd_supnorm(&n, grid.as_deref(), workers)?, 0),
        Command::Subword { k, prefix_len } => (cmd_subword(&k, &prefix_len)?, 0),
        Command::Verify { suite, limit } => cmd_verify(suite, limit.as_deref(), cache, workers)?,
        Command::Bench => (cmd_bench(workers)?, 0),
    };

    let rendered = match format {
        OutFormat::Csv => render_csv(&table, &command_line, workers),
        OutFormat::Json => render_json(&table, &command_line, workers),
    };
    match cli.output {
        Some(path) => std::fs::write(&path, rendered)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(exit_code)
}

fn render_csv(table: &Table, command_line: &str, workers: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# rscorr {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# command: {command_line}");
    let _ = writeln!(out, "# workers: {workers}");
    for note in &table.notes {
        let _ = writeln!(out, "# {note}");
    }
    let _ = writeln!(out, "{}", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::to_csv).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

fn render_json(table: &Table, command_line: &str, workers: usize) -> String {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| serde_json::Value::from(row.iter().map(Cell::to_json).collect::<Vec<_>>()))
        .collect();
    let value = serde_json::json!({
        "meta": {
            "tool": "rscorr",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command_line,
            "workers": workers,
            "notes": table.notes,
        },
        "columns": table.columns,
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&value).expect("table serializes");
    text.push('\n');
    text
}

fn cmd_gen(function: GenFunc, start: &str, count: &str) -> Result<Table, String> {
    let start = parse_scaled(start)?;
    let count = parse_scaled(count)?;
    if count < 1 {
        return Err("count must be at least 1".into());
    }
    if count > 1 << 26 {
        return Err("count is capped at 2^26 rows".into());
    }
    if start.checked_add(count).is_none() {
        return Err("start + count overflows 64 bits".into());
    }
    let mut table = Table::new(vec!["n", "value"]);
    for n in start..start + count {
        let value = match function {
            GenFunc::Rs => Cell::I64(rudin_shapiro(n) as i64),
            GenFunc::R11 => Cell::U64(r11(n) as u64),
            GenFunc::R01 => Cell::U64(r01(n) as u64),
            GenFunc::S2 => Cell::U64(s2(n) as u64),
        };
        table.push(vec![Cell::U64(n), value]);
    }
    Ok(table)
}

fn cmd_corr(
    n: &str,
    k: usize,
    d_max: Option<&str>,
    mode: ModeArg,
    budget: Option<&str>,
) -> Result<Table, String> {
    let n = parse_scaled(n)? as usize;
    let budget = budget.map(parse_scaled).transpose()?;
    let (mode_name, search_mode) = match mode {
        ModeArg::Exact => ("exact", SearchMode::Exact),
        ModeArg::Bounded => ("bounded", SearchMode::Bounded),
    };
    let d_max = match d_max {
        Some(text) => parse_scaled(text)? as usize,
        None => match search_mode {
            SearchMode::Exact => n,
            SearchMode::Bounded => n.saturating_sub(1),
        },
    };
    let window = rs_window(n);
    let report = correlation_measure(&window, k, d_max, search_mode, budget)
        .map_err(|e| e.to_string())?;
    let mut table = Table::new(vec![
        "n",
        "k",
        "mode",
        "d_max",
        "value",
        "witness_delays",
        "witness_m",
    ]);
    let delays: Vec<String> = report.delays.iter().map(ToString::to_string).collect();
    table.push(vec![
        Cell::U64(n as u64),
        Cell::U64(k as u64),
        Cell::Str(mode_name.to_string()),
        Cell::U64(d_max as u64),
        Cell::U64(report.value),
        Cell::Str(delays.join(";")),
        Cell::U64(report.m as u64),
    ]);
    Ok(table)
}

fn cmd_prime_corr(
    kind: KindArg,
    k: usize,
    grid: &str,
    cache: Option<&PathBuf>,
    workers: usize,
) -> Result<Table, String> {
    let grid = parse_grid(grid)?;
    if grid[0] < 2 {
        return Err("grid limits must be at least 2".into());
    }
    let mut table = Table::new(vec!["N", "pi_N", "raw_sum", "ratio"]);
    let mut notes = Vec::new();
    let primes = obtain_table(*grid.last().unwrap(), cache, &mut notes)?;
    table.notes = notes;
    for row in convergence_table(&primes, k, kind.into(), &grid, workers) {
        table.push(vec![
            Cell::U64(row.n_limit),
            Cell::U64(row.pi_n),
            Cell::I64(row.raw),
            Cell::F64(row.ratio),
        ]);
    }
    Ok(table)
}

fn cmd_odd_corr(
    kind: KindArg,
    k: usize,
    func: FuncArg,
    grid: &str,
    workers: usize,
) -> Result<Table, String> {
    let grid = parse_grid(grid)?;
    let func = match func {
        FuncArg::R11 => DigitFunc::R11,
        FuncArg::S2 => DigitFunc::S2,
    };
    let mut table = Table::new(vec!["N", "odd_count", "raw_sum", "ratio"]);
    for &n in &grid {
        if n < 1 {
            return Err("grid limits must be at least 1".into());
        }
        let raw = odd_integer_sum(n, k, kind.into(), func, workers);
        let odd_count = n.div_ceil(2);
        table.push(vec![
            Cell::U64(n),
            Cell::U64(odd_count),
            Cell::I64(raw),
            Cell::F64(raw as f64 / odd_count as f64),
        ]);
    }
    Ok(table)
}

fn cmd_expsum(
    alpha: &str,
    n: &str,
    weight: WeightArg,
    cache: Option<&PathBuf>,
    workers: usize,
) -> Result<Table, String> {
    let weights = parse_f64_list(alpha)?;
    if weights.is_empty() || weights.iter().any(|w| !w.is_finite()) {
        return Err("--alpha needs a nonempty list of finite reals".into());
    }
    let alpha = AlphaVector::new(weights);
    let n = parse_scaled(n)?;
    if n < 2 {
        return Err("--n must be at least 2".into());
    }
    let mut notes = Vec::new();
    let primes = obtain_table(n, cache, &mut notes)?;
    let mut table = Table::new(vec![
        "N", "weight", "k", "raw_re", "raw_im", "norm", "ratio",
    ]);
    table.notes = notes;
    let (weight_name, raw_re, raw_im, magnitude, norm) = match weight {
        WeightArg::Prime => {
            let value = s_alpha_sum(&primes, n, &alpha, workers);
            let norm = primes.pi(n) as f64;
            match value {
                SumValue::Exact(v) => {
                    table.note("path: exact integer (all weights in (1/2)Z)");
                    ("prime", Cell::I64(v), Cell::I64(0), value.magnitude(), norm)
                }
                SumValue::Approx(z) => {
                    table.note("path: compensated complex summation");
                    ("prime", Cell::F64(z.re), Cell::F64(z.im), z.norm(), norm)
                }
            }
        }
        WeightArg::Mangoldt => {
            let z = psi_sum(&primes, n, &alpha);
            let norm: f64 = primes.prime_powers(n).iter().map(|&(_, w)| w).sum();
            table.note("path: compensated complex summation");
            ("mangoldt", Cell::F64(z.re), Cell::F64(z.im), z.norm(), norm)
        }
    };
    table.push(vec![
        Cell::U64(n),
        Cell::Str(weight_name.to_string()),
        Cell::U64(alpha.k() as u64),
        raw_re,
        raw_im,
        Cell::F64(norm),
        Cell::F64(magnitude / norm),
    ]);
    Ok(table)
}

fn cmd_crt(
    classes: &[String],
    pattern_u: Option<&str>,
    pattern_eps: Option<&str>,
) -> Result<Table, String> {
    let system = match (pattern_u, pattern_eps) {
        (Some(u_text), Some(eps_text)) => {
            if !classes.is_empty() {
                return Err("give either residue classes or a pattern, not both".into());
            }
            let u: Vec<u32> = u_text
                .split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| format!("bad valuation {p:?}")))
                .collect::<Result<_, String>>()?;
            let eps: Vec<u8> = eps_text
                .split(',')
                .map(|p| p.trim().parse::<u8>().map_err(|_| format!("bad bit {p:?}")))
                .collect::<Result<_, String>>()?;
            if u.len() != eps.len() || u.is_empty() {
                return Err("--pattern-u and --pattern-eps need equal nonzero lengths".into());
            }
            if u.iter().any(|&x| x > 60) {
                return Err("valuations above 60 overflow the solver".into());
            }
            if eps.iter().any(|&x| x > 1) {
                return Err("--pattern-eps entries must be bits".into());
            }
            valuation_pattern_system(&u, &eps)
        }
        (None, None) => {
            if classes.is_empty() {
                return Err("give residue classes like 2:6 5:9, or a pattern".into());
            }
            let parsed: Vec<ResidueClass> = classes
                .iter()
                .map(|text| {
                    let (r, m) = text
                        .split_once(':')
                        .ok_or_else(|| format!("class {text:?} is not residue:modulus"))?;
                    let r: i64 = r.trim().parse().map_err(|_| format!("bad residue in {text:?}"))?;
                    let m: i64 = m.trim().parse().map_err(|_| format!("bad modulus in {text:?}"))?;
                    if m < 1 {
                        return Err(format!("modulus in {text:?} must be positive"));
                    }
                    Ok(ResidueClass::new(r.rem_euclid(m) as u64, m as u64))
                })
                .collect::<Result<_, String>>()?;
            CongruenceSystem::new(parsed)
        }
        _ => return Err("--pattern-u and --pattern-eps must be given together".into()),
    };
    let mut table = Table::new(vec!["solvable", "residue", "modulus"]);
    let described: Vec<String> = system
        .classes()
        .iter()
        .map(|c| format!("{}:{}", c.residue(), c.modulus()))
        .collect();
    table.note(format!("system: {}", described.join(" ")));
    match crt_solve(&system).map_err(|e| e.to_string())? {
        Some(class) => table.push(vec![
            Cell::Bool(true),
            Cell::U64(class.residue()),
            Cell::U64(class.modulus()),
        ]),
        None => table.push(vec![Cell::Bool(false), Cell::Null, Cell::Null]),
    }
    Ok(table)
}

fn cmd_lambda_k(k: usize, limit: &str, cache: Option<&PathBuf>) -> Result<Table, String> {
    if !(1..=12).contains(&k) {
        return Err("--k must be in 1..=12".into());
    }
    let limit = parse_scaled(limit)?;
    if limit < 3 {
        return Err("--limit must be at least 3".into());
    }
    let mut notes = Vec::new();
    let primes = obtain_table(limit, cache, &mut notes)?;
    let vectors = enumerate_delta_vectors(&primes, k, limit);
    let mut table = Table::new(vec!["k", "n_limit", "index", "vector"]);
    table.notes = notes;
    table.note(format!("cardinality: {}", vectors.len()));
    for (index, vector) in vectors.iter().enumerate() {
        let parts: Vec<String> = vector.components().iter().map(ToString::to_string).collect();
        table.push(vec![
            Cell::U64(k as u64),
            Cell::U64(limit),
            Cell::U64(index as u64),
            Cell::Str(parts.join(";")),
        ]);
    }
    Ok(table)
}

fn cmd_supnorm(n: &str, grid: Option<&str>, workers: usize) -> Result<Table, String> {
    let n = parse_scaled(n)?;
    if n < 1 {
        return Err("--n must be at least 1".into());
    }
    let grid = match grid {
        Some(text) => parse_scaled(text)?,
        None => 8 * n,
    };
    if grid < 4 * n {
        return Err("--grid must be at least 4n".into());
    }
    let sup = sup_norm_grid(n, grid, workers);
    let mut table = Table::new(vec!["N", "grid", "sup_value", "sqrt_n_ratio"]);
    table.push(vec![
        Cell::U64(n),
        Cell::U64(grid),
        Cell::F64(sup),
        Cell::F64(sup / (n as f64).sqrt()),
    ]);
    Ok(table)
}

fn cmd_subword(k_list: &str, prefix_len: &str) -> Result<Table, String> {
    let prefix_len = parse_scaled(prefix_len)?;
    let ks: Vec<u64> = k_list
        .split(',')
        .map(parse_scaled)
        .collect::<Result<_, String>>()?;
    let mut table = Table::new(vec!["k", "prefix_len", "count", "stabilized"]);
    for &k in &ks {
        if !(1..=24).contains(&k) {
            return Err("factor lengths must be in 1..=24".into());
        }
        if prefix_len < 1 << (k + 4) {
            return Err(format!("--prefix-len must be at least 2^{} for k={k}", k + 4));
        }
        let report = subword_complexity(prefix_len, k as u32);
        table.push(vec![
            Cell::U64(k),
            Cell::U64(prefix_len),
            Cell::U64(report.count),
            Cell::Bool(report.stabilized),
        ]);
    }
    Ok(table)
}

fn cmd_verify(
    suite: SuiteArg,
    limit: Option<&str>,
    cache: Option<&PathBuf>,
    workers: usize,
) -> Result<(Table, i32), String> {
    let lemma_limit = match limit {
        Some(text) => parse_scaled(text)?,
        None => 1 << 22,
    };
    if lemma_limit < 1 << 10 || lemma_limit > 1 << 26 {
        return Err("--limit must be between 2^10 and 2^26".into());
    }
    let mut table = Table::new(vec!["suite", "check", "status", "detail"]);
    let mut outcomes = Vec::new();
    let run_lemmas = matches!(suite, SuiteArg::Lemmas | SuiteArg::All);
    let run_oracles = matches!(suite, SuiteArg::Oracles | SuiteArg::All);
    let run_congruence = matches!(suite, SuiteArg::Congruence | SuiteArg::All);
    if run_lemmas {
        table.note(format!("lemmas: sweep bound {lemma_limit}"));
        outcomes.extend(checks::lemma_checks(lemma_limit));
    }
    if run_oracles || run_congruence {
        if limit.is_some() && !run_lemmas {
            table.note("--limit applies to the lemmas suite only; running fixed scales");
        }
        let needed = if run_oracles { 10_000_000 } else { 1_000_000 };
        let mut notes = Vec::new();
        let primes = obtain_table(needed, cache, &mut notes)?;
        table.notes.extend(notes);
        if run_oracles {
            table.note("oracles: sieve table through 10^7");
            outcomes.extend(checks::oracle_checks(&primes, workers));
        }
        if run_congruence {
            table.note("congruence: sieve table through 10^6");
            outcomes.extend(checks::congruence_checks(&primes));
        }
    }
    let mut failures = 0u32;
    for outcome in outcomes {
        if !outcome.pass {
            failures += 1;
        }
        table.push(vec![
            Cell::Str(outcome.suite.to_string()),
            Cell::Str(outcome.name.to_string()),
            Cell::Str(if outcome.pass { "pass" } else { "fail" }.to_string()),
            Cell::Str(outcome.detail),
        ]);
    }
    table.note(format!("failures: {failures}"));
    Ok((table, if failures == 0 { 0 } else { 1 }))
}

fn cmd_bench(workers: usize) -> Result<Table, String> {
    use std::time::Instant;
    let mut table = Table::new(vec!["name", "n", "value"]);
    let mut timings = Vec::new();
    let record = |table: &mut Table, timings: &mut Vec<String>, name: &str, n: u64, started: Instant, value: Cell| {
        timings.push(format!(
            "timing_ms {name}: {:.1}",
            started.elapsed().as_secs_f64() * 1e3
        ));
        table.push(vec![Cell::Str(name.to_string()), Cell::U64(n), value]);
    };

    let started = Instant::now();
    let primes = build_table(1_000_000).map_err(|e| e.to_string())?;
    record(
        &mut table,
        &mut timings,
        "sieve_build",
        1_000_000,
        started,
        Cell::U64(primes.pi(1_000_000)),
    );

    let started = Instant::now();
    let digit_sum: u64 = (0..1u64 << 22).map(|n| r11(n) as u64).sum();
    record(
        &mut table,
        &mut timings,
        "digit_kernel",
        1 << 22,
        started,
        Cell::U64(digit_sum),
    );

    let started = Instant::now();
    let automaton = crate::dfao::rudin_shapiro_dfao();
    let plus_count = (0..1u64 << 18)
        .filter(|&n| crate::dfao::dfao_eval(&automaton, n) == 1)
        .count() as u64;
    record(
        &mut table,
        &mut timings,
        "automaton_eval",
        1 << 18,
        started,
        Cell::U64(plus_count),
    );

    let started = Instant::now();
    let sign_sum = s_k_sum(&primes, 1_000_000, 3, workers);
    record(
        &mut table,
        &mut timings,
        "prime_sign_sum",
        1_000_000,
        started,
        Cell::I64(sign_sum),
    );

    let started = Instant::now();
    let window = rs_window(1 << 10);
    let measure = correlation_measure(&window, 2, 1 << 10, SearchMode::Exact, None)
        .map_err(|e| e.to_string())?;
    record(
        &mut table,
        &mut timings,
        "exact_search",
        1 << 10,
        started,
        Cell::U64(measure.value),
    );

    let started = Instant::now();
    let sup = sup_norm_grid(1 << 10, 1 << 13, workers);
    record(
        &mut table,
        &mut timings,
        "supnorm_grid",
        1 << 10,
        started,
        Cell::F64(sup),
    );

    let started = Instant::now();
    let report = subword_complexity(1 << 20, 12);
    record(
        &mut table,
        &mut timings,
        "subword_scan",
        1 << 20,
        started,
        Cell::U64(report.count),
    );

    for line in timings {
        table.note(line);
    }
    Ok(table)
}
