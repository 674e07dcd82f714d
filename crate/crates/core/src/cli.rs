//! Command-line front end. The binary is a thin wrapper around [`run`].
//!
//! Every command prints `key=value` report lines: a `command=` echo, one
//! `input=` line with a SHA-256 digest per file read, the results, and a
//! final `wall_time_ms=` line. Apart from that last line the report is a
//! pure function of the arguments and input bytes.
//!
//! Exit codes: 0 when a verdict was produced (including `unknown`), 1 for
//! bad input, 2 when an internal invariant check fails.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cycles::{Algorithm, CycleSearch, Transition};
use crate::dynamics::{FiniteComponentMap, PolyMapDesc, SparsePoint};
use crate::life::{emit_rle, parse_rle, LifeConfig};
use crate::lifepoly::{self, Pattern9};
use crate::orbit::{self, GeneratorSet};
use crate::turing::{StepOutcome, TmDesc};

#[derive(Debug, Parser)]
#[command(name = "polyorbit", version, about = "Life, Turing machines and polynomial orbits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve Game of Life patterns
    #[command(subcommand)]
    Life(LifeCommand),
    /// Inspect the Life rule polynomial
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Run Turing machines and search for periodic trajectories
    #[command(subcommand)]
    Tm(TmCommand),
    /// Semi-decide orbit finiteness
    #[command(subcommand)]
    Orbit(OrbitCommand),
    /// Check the polynomial map against the Life engine on random soups
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum LifeCommand {
    /// Advance one generation
    Step(LifeArgs),
    /// Advance `--steps` generations
    Run {
        #[command(flatten)]
        args: LifeArgs,
        #[arg(long)]
        steps: u64,
    },
    /// Print a pattern as a `#`/`.` grid
    Show {
        pattern: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct LifeArgs {
    /// RLE file, or `-` for standard input
    pub pattern: PathBuf,
    /// Where to write the evolved RLE (`-` for standard output)
    #[arg(short, long, default_value = "-")]
    pub output: PathBuf,
    /// Report population and bounding box after every generation
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Subcommand)]
pub enum PolyCommand {
    /// Print the local rule and check it on all 512 neighbourhoods
    Rule {
        /// Print the expanded canonical form instead of the pattern sum
        #[arg(long)]
        expanded: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlgorithmArg {
    Hashset,
    Brent,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Hashset => Algorithm::HashSet,
            AlgorithmArg::Brent => Algorithm::Brent,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum TmCommand {
    /// Print the trajectory
    Run {
        machine: PathBuf,
        /// Input word: one symbol per character, or whitespace-separated names
        word: String,
        #[arg(long, default_value_t = 100)]
        max_steps: u64,
    },
    /// Search for a revisited configuration
    Periodicity {
        machine: PathBuf,
        word: String,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Hashset)]
        algorithm: AlgorithmArg,
        /// Report a halting run as periodic with period 1
        #[arg(long)]
        halting_as_fixed_point: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum OrbitCommand {
    /// Decide stability of a point, or report unknown within the budgets
    Check(OrbitArgs),
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    /// Sparse point file (`index:value` tokens)
    #[arg(required_unless_present = "encode", conflicts_with = "encode")]
    pub point: Option<PathBuf>,
    /// Start from an RLE pattern, encoded as a 0/1 point
    #[arg(long)]
    pub encode: Option<PathBuf>,
    /// Shift the pattern before encoding
    #[arg(long, num_args = 2, value_names = ["DX", "DY"], allow_negative_numbers = true, default_values_t = [1, 1])]
    pub translate: Vec<i64>,
    /// `gol` or a component-map file; repeat for several generators
    #[arg(long = "map", required = true)]
    pub maps: Vec<String>,
    /// Trajectory budget for a single map
    #[arg(long, default_value_t = 1000)]
    pub max_steps: u64,
    /// Breadth-first limits, used with several maps or `--closure`
    #[arg(long, default_value_t = 100_000)]
    pub max_points: u64,
    #[arg(long, default_value_t = 1000)]
    pub max_depth: u64,
    /// Use breadth-first closure even for a single map
    #[arg(long)]
    pub closure: bool,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Hashset)]
    pub algorithm: AlgorithmArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 16)]
    pub size: u32,
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Invariant(_) => 2,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Report lines accumulated by a command.
#[derive(Debug, Default)]
pub struct RunReport {
    lines: Vec<String>,
}

impl RunReport {
    pub fn line(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }
}

/// Where file arguments are read from; `-` means the provided stdin.
struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &PathBuf, report: &mut RunReport) -> Result<String, CliError> {
        let bytes = if path.as_os_str() == "-" {
            let mut buf = Vec::new();
            self.stdin.read_to_end(&mut buf).map_err(input_err)?;
            buf
        } else {
            fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        };
        let digest = Sha256::digest(&bytes);
        report.line(format!("input={} sha256={digest:x}", path.display()));
        String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let started = Instant::now();
    let mut report = RunReport::default();
    report.line(format!("command={}", echo.join(" ")));
    // life commands may stream RLE to stdout; their report then goes to stderr
    let report_to_stderr = matches!(
        &cli.command,
        Command::Life(LifeCommand::Step(a) | LifeCommand::Run { args: a, .. }) if a.output.as_os_str() == "-"
    );
    let mut io = Io { stdin, stdout };
    let result = execute(&cli.command, &mut io, &mut report);
    report.line(format!("wall_time_ms={}", started.elapsed().as_millis()));
    let sink: &mut dyn Write = if report_to_stderr { stderr } else { io.stdout };
    for line in report.lines() {
        let _ = writeln!(sink, "{line}");
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command, io: &mut Io<'_>, report: &mut RunReport) -> Result<(), CliError> {
    match command {
        Command::Life(cmd) => life_cmd(cmd, io, report),
        Command::Poly(PolyCommand::Rule { expanded }) => poly_rule_cmd(*expanded, report),
        Command::Tm(cmd) => tm_cmd(cmd, io, report),
        Command::Orbit(OrbitCommand::Check(args)) => orbit_cmd(args, io, report),
        Command::Verify(args) => verify_cmd(args, report),
    }
}

fn describe(c: &LifeConfig) -> String {
    match c.bounding_box() {
        Some(bb) => format!(
            "population={} bbox=({},{})-({},{})",
            c.population(),
            bb.min.x,
            bb.min.y,
            bb.max.x,
            bb.max.y
        ),
        None => "population=0 bbox=none".to_string(),
    }
}

fn life_cmd(cmd: &LifeCommand, io: &mut Io<'_>, report: &mut RunReport) -> Result<(), CliError> {
    let (args, steps) = match cmd {
        LifeCommand::Step(args) => (args, 1),
        LifeCommand::Run { args, steps } => (args, *steps),
        LifeCommand::Show { pattern } => {
            let config = parse_rle(&io.read(pattern, report)?).map_err(input_err)?;
            report.line(describe(&config));
            for row in config.render_grid().lines() {
                report.line(row);
            }
            return Ok(());
        }
    };
    let mut config = parse_rle(&io.read(&args.pattern, report)?).map_err(input_err)?;
    report.line(format!("generation=0 {}", describe(&config)));
    for generation in 1..=steps {
        config = config.step();
        if args.trace {
            report.line(format!("generation={generation} {}", describe(&config)));
        }
    }
    if !args.trace {
        report.line(format!("generation={steps} {}", describe(&config)));
    }
    let rle = emit_rle(&config) + "\n";
    if args.output.as_os_str() == "-" {
        io.stdout.write_all(rle.as_bytes()).map_err(input_err)?;
    } else {
        fs::write(&args.output, rle)
            .map_err(|e| CliError::Input(format!("{}: {e}", args.output.display())))?;
        report.line(format!("output={}", args.output.display()));
    }
    Ok(())
}

fn poly_rule_cmd(expanded: bool, report: &mut RunReport) -> Result<(), CliError> {
    let rule = lifepoly::local_rule();
    if expanded {
        report.line(format!("form=expanded terms={}", rule.expanded().term_count()));
        report.line(format!("rule={}", rule.expanded()));
    } else {
        let summands = rule.unexpanded().summand_count();
        report.line(format!("form=pattern_sum summands={summands}"));
        report.line(format!("rule={}", rule.unexpanded()));
    }
    let mut mismatches = 0;
    for p in Pattern9::all() {
        let v = p.values();
        let want = BigInt::from(u8::from(p.next_center_alive()));
        if rule.expanded().evaluate_slice(&v) != want || rule.unexpanded().evaluate_slice(&v) != want {
            mismatches += 1;
        }
    }
    if mismatches > 0 {
        report.line(format!("truth_table=failed mismatches={mismatches}"));
        return Err(CliError::Invariant("rule polynomial disagrees with the Life rule".into()));
    }
    report.line("truth_table=ok");
    let birth = Pattern9::new([0, 1, 1, 1, 0, 0, 0, 0, 0]).expect("0/1 bits");
    report.line(format!(
        "at=0,1,1,1,0,0,0,0,0 value={}",
        rule.expanded().evaluate_slice(&birth.values())
    ));
    Ok(())
}

fn tm_cmd(cmd: &TmCommand, io: &mut Io<'_>, report: &mut RunReport) -> Result<(), CliError> {
    let (path, word) = match cmd {
        TmCommand::Run { machine, word, .. } | TmCommand::Periodicity { machine, word, .. } => (machine, word),
    };
    let machine: TmDesc = io.read(path, report)?.parse().map_err(input_err)?;
    let start = machine
        .initial_config(&TmDesc::split_word(word))
        .map_err(input_err)?;
    match cmd {
        TmCommand::Run { max_steps, .. } => {
            let mut current = start;
            for k in 0..=*max_steps {
                report.line(format!("step={k} {}", machine.render(&current)));
                match machine.step(&current).map_err(input_err)? {
                    StepOutcome::Halted(h) => {
                        report.line(format!("halted={h} steps={k}"));
                        return Ok(());
                    }
                    StepOutcome::Next(next) => current = next,
                }
            }
            report.line(format!("truncated=true max_steps={max_steps}"));
            Ok(())
        }
        TmCommand::Periodicity {
            budget,
            algorithm,
            halting_as_fixed_point,
            ..
        } => {
            let search = CycleSearch::new(*budget)
                .with_algorithm((*algorithm).into())
                .with_halting_as_fixed_point(*halting_as_fixed_point);
            report.line(format!(
                "algorithm={} budget={budget} halting_as_fixed_point={halting_as_fixed_point}",
                search.algorithm
            ));
            let verdict = search
                .run(start, |c| {
                    machine.step(c).map(|o| match o {
                        StepOutcome::Next(n) => Transition::Next(n),
                        StepOutcome::Halted(_) => Transition::Halt,
                    })
                })
                .map_err(input_err)?;
            report.line(verdict.to_string());
            Ok(())
        }
    }
}

fn orbit_cmd(args: &OrbitArgs, io: &mut Io<'_>, report: &mut RunReport) -> Result<(), CliError> {
    let point = match (&args.point, &args.encode) {
        (_, Some(rle)) => {
            let (dx, dy) = (args.translate[0], args.translate[1]);
            let config = parse_rle(&io.read(rle, report)?).map_err(input_err)?.translate(dx, dy);
            report.line(format!(
                "translate={dx},{dy} quadrant_safe={} {}",
                lifepoly::quadrant_safe(&config),
                describe(&config)
            ));
            lifepoly::encode(&config).map_err(input_err)?
        }
        (Some(path), None) => io.read(path, report)?.parse::<SparsePoint>().map_err(input_err)?,
        (None, None) => return Err(CliError::Input("give a point file or --encode".into())),
    };
    let mut maps = Vec::new();
    for spec in &args.maps {
        if spec == "gol" {
            maps.push(lifepoly::build_gol_map());
        } else {
            let m: FiniteComponentMap = io
                .read(&PathBuf::from(spec), report)?
                .parse()
                .map_err(input_err)?;
            maps.push(PolyMapDesc::Components(m));
        }
    }
    report.line(format!("start_support={} generators={}", point.len(), maps.len()));
    let verdict = if maps.len() == 1 && !args.closure {
        report.line(format!("mode=trajectory max_steps={}", args.max_steps));
        orbit::is_stable_singleton_with(&maps[0], &point, args.max_steps, args.algorithm.into())
    } else {
        report.line(format!(
            "mode=closure max_points={} max_depth={}",
            args.max_points, args.max_depth
        ));
        let gens = GeneratorSet::new(maps).expect("clap requires at least one --map");
        orbit::orbit_closure(&gens, &point, args.max_points, args.max_depth)
    }
    .map_err(input_err)?;
    report.line(verdict.to_string());
    Ok(())
}

fn verify_cmd(args: &VerifyArgs, report: &mut RunReport) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&args.density) {
        return Err(CliError::Input(format!("density {} is not in [0, 1]", args.density)));
    }
    report.line(format!(
        "seed={} trials={} size={} density={}",
        args.seed, args.trials, args.size, args.density
    ));
    let check = lifepoly::check_commuting_square(
        &lifepoly::gol_grid_map(),
        args.trials,
        args.size,
        args.density,
        args.seed,
    );
    report.line(format!(
        "passes={} failures={}",
        check.trials - check.failures,
        check.failures
    ));
    match check.first_failure {
        None => Ok(()),
        Some(t) => Err(CliError::Invariant(format!(
            "{} of {} soups disagree (first at trial {t})",
            check.failures, check.trials
        ))),
    }
}
