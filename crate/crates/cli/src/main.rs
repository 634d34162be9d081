//! Command-line surface: compute single counts, emit N(d, g) tables, list
//! qualifying paths with their multiplicities, and run the cross-engine
//! verification suite. Identical invocations produce byte-identical output.

use std::env;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use relgw::counts::PolygonClass;
use relgw::multiplicity::{MuRoute, MultiplicityContext};
use relgw::{
    enumerate_paths, has_column_skip, BigInt, CountKey, Counter, Engine, LatticePoint,
    LatticePolygon, Rational, Sequence, VerifyReport,
};

#[derive(Parser)]
#[command(
    name = "relgw",
    version,
    about = "Exact counts of plane curves with contact conditions to a line, \
             via lattice paths, closed-form multiplicities and degeneration recursions."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for path enumeration. The result is identical at
    /// every level; 1 keeps benchmark timings reproducible.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a single count N^{alpha,beta}(d, g).
    Compute {
        #[command(flatten)]
        key: KeyArgs,
        /// Counting engine.
        #[arg(long, value_enum, default_value_t = EngineArg::Paths)]
        engine: EngineArg,
    },
    /// Print the table N(d, g) = N^{(0),(d)}(d, g) for d = 1..=DMAX.
    Table {
        /// Largest degree row.
        dmax: u32,
        /// First genus column.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        gmin: i64,
        /// Last genus column; defaults to the interior-point bound of DMAX.
        #[arg(long, allow_hyphen_values = true)]
        gmax: Option<i64>,
        /// Counting engine for the cells.
        #[arg(long, value_enum, default_value_t = EngineArg::Ch)]
        engine: EngineArg,
    },
    /// List the qualifying paths of a key, one record per path with its
    /// positive, negative and total multiplicity, then a summary line.
    Paths {
        #[command(flatten)]
        key: KeyArgs,
        /// Also list zero-multiplicity paths that skip a column, flagged
        /// "skip": true.
        #[arg(long)]
        include_skips: bool,
    },
    /// Cross-check all engines up to degree DMAX (triangles; rectangles up
    /// to 2x2). Exits nonzero if any check fails.
    Verify {
        /// Largest triangle degree to check.
        dmax: u32,
        /// Safety cap on DMAX; raising it can make the run very long.
        #[arg(long, default_value_t = 4)]
        cap: u32,
    },
}

#[derive(Args)]
struct KeyArgs {
    /// Degree: the triangle size, or the rectangle height with --dprime.
    #[arg(long)]
    d: u32,

    /// Rectangle width d'; selects the rectangle region instead of the
    /// triangle.
    #[arg(long)]
    dprime: Option<u32>,

    /// Genus; negative values admit disconnected curves.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    g: i64,

    /// Fixed contact sequence in comma syntax: "0,1" is one fixed contact
    /// of order 2.
    #[arg(long, default_value = "0")]
    alpha: Sequence,

    /// Moving contact sequence; defaults to d - I*alpha simple contacts.
    #[arg(long)]
    beta: Option<Sequence>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    /// Path enumeration with recursive multiplicities.
    Paths,
    /// Path enumeration with closed-form multiplicities.
    Closed,
    /// Degeneration recursion (triangle or rectangle).
    Ch,
    /// Irreducible-curve recursion (triangle only).
    Irr,
}

impl EngineArg {
    fn tag(self) -> Engine {
        match self {
            EngineArg::Paths => Engine::Paths,
            EngineArg::Closed => Engine::Closed,
            EngineArg::Ch => Engine::Ch,
            EngineArg::Irr => Engine::Irr,
        }
    }
}

enum CliError {
    /// Parameter validation failure: message to stderr, exit 2.
    Usage(String),
    /// Anything else: message to stderr, exit 1.
    Other(String),
}

impl From<relgw::Error> for CliError {
    fn from(err: relgw::Error) -> Self {
        match err {
            relgw::Error::InvalidKey(_) => CliError::Usage(err.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Other(err.to_string())
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream consumer (head, jq) closes the pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let counter = Counter::new().with_jobs(cli.jobs);
    let cache_file = load_cache(&counter)?;
    let code = match &cli.command {
        Command::Compute { key, engine } => cmd_compute(&counter, key, *engine, cli.format)?,
        Command::Table {
            dmax,
            gmin,
            gmax,
            engine,
        } => cmd_table(&counter, *dmax, *gmin, *gmax, *engine, cli.format)?,
        Command::Paths { key, include_skips } => {
            cmd_paths(key, *include_skips, cli.format)?
        }
        Command::Verify { dmax, cap } => cmd_verify(&counter, *dmax, *cap, cli.format)?,
    };
    if let Some(path) = cache_file {
        let file = File::create(&path)?;
        counter.save_cache(BufWriter::new(file))?;
    }
    Ok(code)
}

/// With COUNT_CACHE_DIR set, loads `counts.kv` from that directory into the
/// memo table and returns the file path for saving on exit.
fn load_cache(counter: &Counter) -> Result<Option<PathBuf>, CliError> {
    let Some(dir) = env::var_os("COUNT_CACHE_DIR") else {
        return Ok(None);
    };
    let dir = PathBuf::from(dir);
    fs::create_dir_all(&dir)?;
    let path = dir.join("counts.kv");
    if path.exists() {
        counter.load_cache(BufReader::new(File::open(&path)?))?;
    }
    Ok(Some(path))
}

impl KeyArgs {
    fn to_key(&self) -> Result<CountKey, CliError> {
        if self.d < 1 {
            return Err(CliError::Usage("--d must be at least 1".into()));
        }
        let polygon = match self.dprime {
            Some(width) if width >= 1 => LatticePolygon::rectangle(width, self.d),
            Some(_) => return Err(CliError::Usage("--dprime must be at least 1".into())),
            None => LatticePolygon::triangle(self.d),
        };
        let beta = match &self.beta {
            Some(beta) => beta.clone(),
            None => {
                let free = (polygon.height() as u64).saturating_sub(self.alpha.weighted_sum());
                Sequence::new(vec![free])
            }
        };
        Ok(CountKey::new(polygon, self.g, self.alpha.clone(), beta)?)
    }
}

fn engine_value(counter: &Counter, key: &CountKey, engine: EngineArg) -> Result<BigInt, CliError> {
    let value = match engine {
        EngineArg::Paths => counter.n_path(key)?,
        EngineArg::Closed => counter.n_path_closed(key)?,
        EngineArg::Ch => match key.polygon() {
            LatticePolygon::Triangle { .. } => counter.ch_count(key)?,
            LatticePolygon::Rectangle { .. } => counter.ch_count_rect(key)?,
        },
        EngineArg::Irr => counter.irr_count(key)?,
    };
    Ok(value)
}

fn result_record(key: &CountKey, engine: Engine, value: &BigInt) -> serde_json::Value {
    let mut record = json!({
        "g": key.genus(),
        "alpha": key.alpha().to_string(),
        "beta": key.beta().to_string(),
        "engine": engine.as_str(),
        "value": value.to_string(),
    });
    match key.polygon() {
        LatticePolygon::Triangle { size } => {
            record["polygon"] = json!("triangle");
            record["d"] = json!(size);
        }
        LatticePolygon::Rectangle { width, height } => {
            record["polygon"] = json!("rectangle");
            record["dprime"] = json!(width);
            record["d"] = json!(height);
        }
    }
    record
}

fn cmd_compute(
    counter: &Counter,
    key_args: &KeyArgs,
    engine: EngineArg,
    format: Format,
) -> Result<ExitCode, CliError> {
    let key = key_args.to_key()?;
    let value = engine_value(counter, &key, engine)?;
    match format {
        Format::Text => println!("{value}"),
        Format::Json => println!("{}", result_record(&key, engine.tag(), &value)),
        Format::Csv => {
            let (dprime, d) = match key.polygon() {
                LatticePolygon::Triangle { size } => (String::new(), size),
                LatticePolygon::Rectangle { width, height } => (width.to_string(), height),
            };
            println!("polygon,dprime,d,g,alpha,beta,engine,value");
            println!(
                "{},{},{},{},\"{}\",\"{}\",{},{}",
                match key.polygon() {
                    LatticePolygon::Triangle { .. } => "triangle",
                    LatticePolygon::Rectangle { .. } => "rectangle",
                },
                dprime,
                d,
                key.genus(),
                key.alpha(),
                key.beta(),
                engine.tag(),
                value
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(
    counter: &Counter,
    dmax: u32,
    gmin: i64,
    gmax: Option<i64>,
    engine: EngineArg,
    format: Format,
) -> Result<ExitCode, CliError> {
    if dmax < 1 {
        return Err(CliError::Usage("DMAX must be at least 1".into()));
    }
    let gmax = gmax.unwrap_or_else(|| relgw::max_genus(LatticePolygon::triangle(dmax)));
    let genus_range: Vec<i64> = (gmin..=gmax).collect();
    let mut rows = Vec::new();
    for d in 1..=dmax {
        let mut cells = Vec::new();
        for &g in &genus_range {
            let key = CountKey::triangle(d, g, Sequence::zero(), Sequence::new(vec![d as u64]))?;
            cells.push(engine_value(counter, &key, engine)?);
        }
        rows.push((d, cells));
    }
    match format {
        Format::Json => {
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(d, cells)| {
                    json!({
                        "d": d,
                        "counts": cells.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "engine": engine.tag().as_str(),
                    "gmin": gmin,
                    "gmax": gmax,
                    "rows": json_rows,
                })
            );
        }
        Format::Csv => {
            if !genus_range.is_empty() {
                let header: Vec<String> = std::iter::once("d".to_string())
                    .chain(genus_range.iter().map(|g| g.to_string()))
                    .collect();
                println!("{}", header.join(","));
                for (d, cells) in &rows {
                    let line: Vec<String> = std::iter::once(d.to_string())
                        .chain(cells.iter().map(|v| v.to_string()))
                        .collect();
                    println!("{}", line.join(","));
                }
            }
        }
        Format::Text => {
            if !genus_range.is_empty() {
                let mut header = format!("{:>4}", "d\\g");
                for g in &genus_range {
                    header.push_str(&format!(" {g:>12}"));
                }
                println!("{header}");
                for (d, cells) in &rows {
                    let mut line = format!("{d:>4}");
                    for v in cells {
                        line.push_str(&format!(" {v:>12}"));
                    }
                    println!("{line}");
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn rational_string(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

fn cmd_paths(key_args: &KeyArgs, include_skips: bool, format: Format) -> Result<ExitCode, CliError> {
    if format == Format::Csv {
        return Err(CliError::Usage(
            "paths supports --format text or json only".into(),
        ));
    }
    let key = key_args.to_key()?;
    let polygon = key.polygon();
    let steps = key.step_count();
    let mut emitted = 0usize;
    let mut total = Rational::from_integer(BigInt::from(0));
    if steps >= 1 {
        let mut context =
            MultiplicityContext::new(polygon, key.alpha(), key.beta(), MuRoute::Recursive)?;
        let start = LatticePoint::new(0, key.beta().weighted_sum() as i64);
        for path in enumerate_paths(
            polygon,
            start,
            polygon.lambda_max(),
            steps as usize,
            !include_skips,
        ) {
            let mu = context.evaluate(&path)?;
            let skip = has_column_skip(&path);
            let qualifying = mu.total != Rational::from_integer(BigInt::from(0));
            if !qualifying && !(include_skips && skip) {
                continue;
            }
            total += &mu.total;
            emitted += 1;
            match format {
                Format::Json => {
                    let mut record = serde_json::to_value(&path).expect("path serializes");
                    record["mu_alpha_plus"] = json!(rational_string(&mu.positive));
                    record["mu_beta_minus"] = json!(mu.negative.to_string());
                    record["mu_alpha_beta"] = json!(rational_string(&mu.total));
                    record["skip"] = json!(skip);
                    println!("{record}");
                }
                Format::Text => {
                    let points: Vec<String> = path
                        .points()
                        .iter()
                        .map(|p| format!("({},{})", p.x, p.y))
                        .collect();
                    let mut line = format!(
                        "{}  mu_a+ {}  mu_b- {}  mu {}",
                        points.join(" "),
                        rational_string(&mu.positive),
                        mu.negative,
                        rational_string(&mu.total)
                    );
                    if skip {
                        line.push_str("  [skip]");
                    }
                    println!("{line}");
                }
                Format::Csv => unreachable!(),
            }
        }
    }
    if !total.is_integer() {
        return Err(CliError::Other(format!(
            "aggregated count for {key} is not an integer: {total}"
        )));
    }
    let total = total.to_integer();
    match format {
        Format::Json => println!("{}", json!({ "paths": emitted, "total": total.to_string() })),
        Format::Text => println!("total {total} from {emitted} paths"),
        Format::Csv => unreachable!(),
    }
    Ok(ExitCode::SUCCESS)
}

fn report_lines(label: &str, report: &VerifyReport) -> Vec<String> {
    let mut lines = Vec::new();
    for check in &report.checks {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        lines.push(format!("{status} [{label}] {}", check.name));
        for failure in &check.failures {
            lines.push(format!("  mismatch: {failure}"));
        }
    }
    lines.push(format!(
        "     [{label}] {} keys exercised",
        report.keys_exercised
    ));
    lines
}

fn cmd_verify(
    counter: &Counter,
    dmax: u32,
    cap: u32,
    format: Format,
) -> Result<ExitCode, CliError> {
    if dmax < 1 {
        return Err(CliError::Usage("DMAX must be at least 1".into()));
    }
    if dmax > cap {
        return Err(CliError::Usage(format!(
            "DMAX {dmax} exceeds the safety cap {cap}; pass --cap {dmax} to allow a long run"
        )));
    }
    let triangle = counter.verify_engines(dmax, PolygonClass::Triangle)?;
    let rectangle = counter.verify_engines(dmax.min(2), PolygonClass::Rectangle)?;
    let all_passed = triangle.all_passed() && rectangle.all_passed();
    match format {
        Format::Json => {
            println!(
                "{}",
                json!({
                    "dmax": dmax,
                    "triangle": triangle,
                    "rectangle": rectangle,
                    "all_passed": all_passed,
                })
            );
        }
        _ => {
            for line in report_lines("triangle", &triangle) {
                println!("{line}");
            }
            for line in report_lines("rectangle", &rectangle) {
                println!("{line}");
            }
            println!("{}", if all_passed { "all checks passed" } else { "CHECKS FAILED" });
        }
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
