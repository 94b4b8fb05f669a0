//! `xcsmd` command-line front end: single experiments, the benchmark suite,
//! maze oracles and aliasing analysis.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Arg, ArgAction, ArgMatches, Command};
use xcsmd::corpus::{self, Benchmark, BENCHMARKS};
use xcsmd::harness::{self, PerfSeries, Summary};
use xcsmd::{AliasKind, Config, Maze, Mode};

/// Prints to stdout, ignoring write errors so a closed pipe ends output quietly.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout().lock(), $($arg)*);
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_CHECK: u8 = 3;

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "XCSMD_OUT_DIR";

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

fn config_args() -> Vec<Arg> {
    Config::KEYS
        .iter()
        .map(|&key| {
            let arg = Arg::new(key)
                .long(key)
                .value_name("VALUE")
                .help_heading("Parameters");
            if key.contains('_') {
                // builder args want 'static names; the key table is small and fixed
                let dashed: &'static str = Box::leak(key.replace('_', "-").into_boxed_str());
                arg.alias(dashed)
            } else {
                arg
            }
        })
        .collect()
}

fn common_args() -> Vec<Arg> {
    vec![
        Arg::new("config")
            .long("config")
            .value_name("FILE")
            .help("Flat `key = value` parameter file; flags override it"),
        Arg::new("out-dir")
            .long("out-dir")
            .value_name("DIR")
            .help(format!(
                "Base output directory (default: ${OUT_DIR_ENV} or ./runs)"
            )),
        Arg::new("jobs")
            .long("jobs")
            .value_name("N")
            .value_parser(clap::value_parser!(usize))
            .help("Worker threads for parallel runs"),
    ]
}

fn cli() -> Command {
    Command::new("xcsmd")
        .about("XCS with memory and aliasing detection on maze benchmarks")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(
            Command::new("run")
                .about("Run one experiment (several seeds) on a maze")
                .arg(
                    Arg::new("maze")
                        .long("maze")
                        .required(true)
                        .value_name("NAME|FILE")
                        .help("Bundled maze name or path to a maze file"),
                )
                .arg(
                    Arg::new("dump-population")
                        .long("dump-population")
                        .action(ArgAction::SetTrue)
                        .help("Write each run's final population"),
                )
                .args(common_args())
                .args(config_args()),
        )
        .subcommand(
            Command::new("suite")
                .about("Run the benchmark table with both learners")
                .arg(
                    Arg::new("only")
                        .long("only")
                        .value_name("MAZE")
                        .action(ArgAction::Append)
                        .help("Restrict to the named maze(s)"),
                )
                .arg(
                    Arg::new("check")
                        .long("check")
                        .action(ArgAction::SetTrue)
                        .help("Exit with status 3 when a result misses its threshold"),
                )
                .args(common_args())
                .args(config_args()),
        )
        .subcommand(
            Command::new("oracle")
                .about("Print shortest-path optima of the bundled mazes")
                .arg(Arg::new("maze").long("maze").value_name("NAME|FILE")),
        )
        .subcommand(
            Command::new("analyze-maze")
                .about("Print the aliasing report of a maze")
                .arg(
                    Arg::new("maze")
                        .required_unless_present("maze-flag")
                        .value_name("NAME|FILE"),
                )
                .arg(
                    Arg::new("maze-flag")
                        .long("maze")
                        .value_name("NAME|FILE")
                        .conflicts_with("maze")
                        .help("Same as the positional maze"),
                ),
        )
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match matches.subcommand() {
        Some(("run", m)) => cmd_run(m),
        Some(("suite", m)) => cmd_suite(m),
        Some(("oracle", m)) => cmd_oracle(m),
        Some(("analyze-maze", m)) => cmd_analyze(m),
        _ => Err(CliError::Usage("unknown subcommand".into())),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn load_maze(spec: &str) -> Result<Maze, CliError> {
    if let Some(b) = corpus::find(spec) {
        return b
            .maze()
            .map_err(|e| CliError::Data(format!("{}: {e}", b.key)));
    }
    let path = Path::new(spec);
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{spec}: {e}")))?;
    let name = path
        .file_stem()
        .map_or_else(|| spec.to_string(), |s| s.to_string_lossy().into_owned());
    Maze::parse(name, &text).map_err(|e| CliError::Data(format!("{spec}: {e}")))
}

/// Defaults, then the config file, then flags.
fn build_config(m: &ArgMatches, base: Config) -> Result<Config, CliError> {
    let mut cfg = base;
    if let Some(path) = m.get_one::<String>("config") {
        let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{path}: {e}")))?;
        cfg.apply_text(&text)
            .map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    }
    apply_flags(m, &mut cfg)?;
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn apply_flags(m: &ArgMatches, cfg: &mut Config) -> Result<(), CliError> {
    for &key in Config::KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            cfg.set(key, v)
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
    }
    Ok(())
}

fn flag_given(m: &ArgMatches, key: &str) -> bool {
    m.get_one::<String>(key).is_some()
}

fn unix_stamp() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    // civil date from days since epoch
    let days = secs.div_euclid(86_400) as i64;
    let rem = secs.rem_euclid(86_400);
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let day = doy - (153 * mp + 2) / 5 + 1;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = yoe + era * 400 + i64::from(month <= 2);
    format!(
        "{year:04}{month:02}{day:02}-{:02}{:02}{:02}",
        rem / 3600,
        (rem % 3600) / 60,
        rem % 60
    )
}

fn output_dir(m: &ArgMatches, label: &str) -> Result<PathBuf, CliError> {
    let base = m
        .get_one::<String>("out-dir")
        .cloned()
        .or_else(|| std::env::var(OUT_DIR_ENV).ok())
        .unwrap_or_else(|| "runs".to_string());
    let mut dir = Path::new(&base).join(format!("{}-{label}", unix_stamp()));
    let mut k = 1;
    while dir.exists() {
        dir = Path::new(&base).join(format!("{}-{label}-{k}", unix_stamp()));
        k += 1;
    }
    fs::create_dir_all(&dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn write(dir: &Path, name: &str, body: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn pool(m: &ArgMatches) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(&jobs) = m.get_one::<usize>("jobs") {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        b = b.num_threads(jobs);
    }
    b.build().map_err(|e| CliError::Usage(e.to_string()))
}

struct Batch {
    series: Vec<PerfSeries>,
    summary: Summary,
    seconds: f64,
}

fn run_batch(pool: &rayon::ThreadPool, maze: &Maze, cfg: &Config) -> Result<Batch, CliError> {
    let t0 = Instant::now();
    let series = pool
        .install(|| harness::run_many(maze, cfg))
        .map_err(|e| CliError::Data(e.to_string()))?;
    let summary = harness::aggregate_runs(&series);
    Ok(Batch {
        series,
        summary,
        seconds: t0.elapsed().as_secs_f64(),
    })
}

fn write_batch(
    dir: &Path,
    maze: &Maze,
    cfg: &Config,
    batch: &Batch,
    dump: bool,
) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
    for s in &batch.series {
        write(
            dir,
            &format!("curve_run{}.csv", s.run),
            &harness::curve_csv(s),
        )?;
        if dump {
            write(
                dir,
                &format!("population_run{}.txt", s.run),
                &s.population_dump,
            )?;
        }
    }
    write(
        dir,
        "curve.csv",
        &harness::summary_curve_csv(&batch.summary),
    )?;
    write(dir, "asl_runs.csv", &harness::asl_csv(&batch.series))?;
    write(dir, "asl.csv", &harness::summary_asl_csv(&batch.summary))?;
    write(
        dir,
        "manifest.txt",
        &harness::manifest(cfg, maze.name(), batch.seconds, &batch.summary),
    )
}

fn cmd_run(m: &ArgMatches) -> Result<u8, CliError> {
    let spec = m
        .get_one::<String>("maze")
        .or_else(|| m.get_one::<String>("maze-flag"))
        .ok_or_else(|| CliError::Usage("--maze is required".into()))?;
    let maze = load_maze(spec)?;
    let mut base = Config::default();
    if let Some(b) = corpus::find(spec) {
        base.n = b.population;
    }
    let mut cfg = build_config(m, base)?;
    if cfg.mode == Mode::Xcs && !flag_given(m, "mes") && m.get_one::<String>("config").is_none() {
        if let Some(b) = corpus::find(spec) {
            cfg.mes = b.baseline_mes;
        }
    }
    let pool = pool(m)?;
    let batch = run_batch(&pool, &maze, &cfg)?;
    let dir = output_dir(m, &format!("run-{}", maze.name()))?;
    write_batch(&dir, &maze, &cfg, &batch, m.get_flag("dump-population"))?;
    outln!(
        "{} {} N={} runs={}: final mean {:.3} (stderr {:.3}), optimum {:.4}",
        maze.name(),
        cfg.mode,
        cfg.n,
        cfg.runs,
        batch.summary.final_mean,
        batch.summary.final_stderr,
        maze.optimal_average_steps().unwrap_or(f64::NAN)
    );
    outln!("outputs in {}", dir.display());
    Ok(0)
}

struct SuiteRow {
    bench: &'static Benchmark,
    oracle: f64,
    xcs: Option<Summary>,
    xcsmd: Option<Summary>,
    errors: Vec<String>,
}

impl SuiteRow {
    fn xcsmd_pass(&self) -> bool {
        self.xcsmd
            .as_ref()
            .is_some_and(|s| s.final_mean <= self.bench.ceiling)
    }

    /// Plain XCS must fail (more than twice the optimum) on the hard mazes.
    fn baseline_pass(&self) -> bool {
        let hard = matches!(self.bench.kind, AliasKind::TypeII | AliasKind::TypeIII);
        match (&self.xcs, hard) {
            (Some(s), true) => s.final_mean > 2.0 * self.bench.optimum,
            (Some(_), false) => true,
            (None, _) => false,
        }
    }
}

fn cmd_suite(m: &ArgMatches) -> Result<u8, CliError> {
    let only: Vec<String> = m
        .get_many::<String>("only")
        .map(|v| v.cloned().collect())
        .unwrap_or_default();
    for name in &only {
        if corpus::find(name).is_none() {
            return Err(CliError::Usage(format!("unknown maze {name:?}")));
        }
    }
    let selected: Vec<&'static Benchmark> = BENCHMARKS
        .iter()
        .filter(|b| only.is_empty() || only.iter().any(|o| o.eq_ignore_ascii_case(b.key)))
        .collect();
    let base = build_config(m, Config::default())?;
    let pool = pool(m)?;
    let dir = output_dir(m, "suite")?;
    let mut rows = Vec::new();
    for bench in selected {
        let maze = match bench.maze() {
            Ok(maze) => maze,
            Err(e) => {
                eprintln!("{}: {e}", bench.key);
                rows.push(SuiteRow {
                    bench,
                    oracle: f64::NAN,
                    xcs: None,
                    xcsmd: None,
                    errors: vec![e.to_string()],
                });
                continue;
            }
        };
        let oracle = maze.optimal_average_steps().unwrap_or(f64::NAN);
        let mut row = SuiteRow {
            bench,
            oracle,
            xcs: None,
            xcsmd: None,
            errors: vec![],
        };
        for mode in [Mode::Xcsmd, Mode::Xcs] {
            let mut cfg = base.clone();
            cfg.mode = mode;
            if !flag_given(m, "n") {
                cfg.n = bench.population;
            }
            if mode == Mode::Xcs && !flag_given(m, "mes") {
                cfg.mes = bench.baseline_mes;
            }
            match run_batch(&pool, &maze, &cfg) {
                Ok(batch) => {
                    write_batch(
                        &dir.join(format!("{}_{mode}", bench.key)),
                        &maze,
                        &cfg,
                        &batch,
                        false,
                    )?;
                    eprintln!(
                        "{} {mode}: final mean {:.3} ({:.1}s)",
                        bench.key, batch.summary.final_mean, batch.seconds
                    );
                    match mode {
                        Mode::Xcs => row.xcs = Some(batch.summary),
                        Mode::Xcsmd => row.xcsmd = Some(batch.summary),
                    }
                }
                Err(e) => {
                    eprintln!("{} {mode}: {e}", bench.key);
                    row.errors.push(e.to_string());
                }
            }
        }
        rows.push(row);
    }
    let table = suite_csv(&rows);
    write(&dir, "summary.csv", &table)?;
    out!("{table}");
    outln!("outputs in {}", dir.display());
    let failed = rows
        .iter()
        .any(|r| !r.errors.is_empty() || !r.xcsmd_pass() || !r.baseline_pass());
    if rows.iter().any(|r| !r.errors.is_empty()) {
        return Ok(EXIT_DATA);
    }
    Ok(if m.get_flag("check") && failed {
        EXIT_CHECK
    } else {
        0
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "failed".to_string(), |x| format!("{x:.2}"))
}

fn suite_csv(rows: &[SuiteRow]) -> String {
    let mut out = String::from(
        "maze,aliasing_type,optimum,oracle_optimum,xcs_final,xcs_stderr,xcs_published,\
         xcsmd_final,xcsmd_stderr,xcsmd_published,xcsmd_ceiling,xcsmd_pass,baseline_pass\n",
    );
    for r in rows {
        let b = r.bench;
        let (xf, xs) = r
            .xcs
            .as_ref()
            .map_or((f64::NAN, f64::NAN), |s| (s.final_mean, s.final_stderr));
        let (mf, ms) = r
            .xcsmd
            .as_ref()
            .map_or((f64::NAN, f64::NAN), |s| (s.final_mean, s.final_stderr));
        let _ = writeln!(
            out,
            "{},{},{},{:.4},{:.3},{:.3},{},{:.3},{:.3},{:.2},{:.2},{},{}",
            b.display,
            b.kind,
            b.optimum,
            r.oracle,
            xf,
            xs,
            fmt_opt(b.baseline_published),
            mf,
            ms,
            b.published,
            b.ceiling,
            r.xcsmd_pass(),
            r.baseline_pass()
        );
    }
    out
}

fn cmd_oracle(m: &ArgMatches) -> Result<u8, CliError> {
    let mazes: Vec<Maze> = match m.get_one::<String>("maze") {
        Some(spec) => vec![load_maze(spec)?],
        None => BENCHMARKS
            .iter()
            .map(|b| b.maze().map_err(|e| CliError::Data(e.to_string())))
            .collect::<Result<_, _>>()?,
    };
    outln!("maze,empty_cells,optimum");
    for maze in mazes {
        let opt = maze
            .optimal_average_steps()
            .map_err(|e| CliError::Data(format!("{}: {e}", maze.name())))?;
        outln!("{},{},{:.4}", maze.name(), maze.empty_cells().len(), opt);
    }
    Ok(0)
}

fn cmd_analyze(m: &ArgMatches) -> Result<u8, CliError> {
    let spec = m
        .get_one::<String>("maze")
        .or_else(|| m.get_one::<String>("maze-flag"))
        .ok_or_else(|| CliError::Usage("maze is required".into()))?;
    let maze = load_maze(spec)?;
    let report = maze
        .classify_aliasing()
        .map_err(|e| CliError::Data(format!("{}: {e}", maze.name())))?;
    let opt = maze
        .optimal_average_steps()
        .map_err(|e| CliError::Data(e.to_string()))?;
    out!("{maze}");
    outln!("{}: {}, optimum {:.4}", maze.name(), report.maze_kind, opt);
    for g in report.shared() {
        let squares: Vec<String> = g
            .squares
            .iter()
            .map(|s| {
                let acts: Vec<String> = s.optimal_actions.iter().map(|a| a.to_string()).collect();
                format!("{} d={} [{}]", s.pos, s.distance, acts.join(" "))
            })
            .collect();
        outln!("  {} {}: {}", g.sensation, g.kind, squares.join("; "));
    }
    outln!(
        "  conglomerates: {}, clone pairs: {}",
        report.conglomerates.len(),
        report.clones.len()
    );
    Ok(0)
}
