//! Command implementations behind the `tnn` binary.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use tnn_core::state_prep::{reference_amplitudes, PrepCircuit};
use tnn_core::{
    default_max_updates, parse_function, train, BitTable, BooleanFunction, Direction, IdealBackend,
    IdealOptions, InputWord, QtMode, Ranking, Rounding, SampledOptions, ShotPolicy, Superposition,
    TnnError, TrainReport,
};

/// Environment variable holding the sweep worker count; unset or 0 uses every core.
pub const WORKERS_ENV: &str = "TNN_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

/// Largest arity `prep-dump` accepts; the amplitude table has `2^n` rows.
pub const MAX_DUMP_ARITY: usize = 12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] TnnError),
    #[error("{0}")]
    Invalid(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "tnn",
    version,
    about = "Train tunable MCX networks and dump their circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train one network and print its trace.
    Train(TrainArgs),
    /// Train every function of an arity and write one CSV row per function and mode.
    Sweep(SweepArgs),
    /// Print a state-preparation circuit and the amplitudes it produces.
    PrepDump(PrepDumpArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Mode {
    Ideal,
    Sampled,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Ideal => "ideal",
            Mode::Sampled => "sampled",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Uniform,
    Down,
    Up,
}

impl From<Source> for Superposition {
    fn from(s: Source) -> Self {
        match s {
            Source::Uniform => Superposition::Uniform,
            Source::Down => Superposition::PsiDown,
            Source::Up => Superposition::PsiUp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Sparse,
    Statevector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Down,
    Up,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Down => Direction::Down,
            DirectionArg::Up => Direction::Up,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RoundingArg {
    Nearest,
    Floor,
}

/// `exact`, `paper` or `fixed:<shots>`.
pub fn parse_policy(s: &str) -> std::result::Result<ShotPolicy, String> {
    match s {
        "exact" => Ok(ShotPolicy::Exact),
        "paper" => Ok(ShotPolicy::Paper),
        _ => s
            .strip_prefix("fixed:")
            .and_then(|n| n.parse::<u64>().ok())
            .filter(|&n| n > 0)
            .map(ShotPolicy::Fixed)
            .ok_or_else(|| format!("expected exact, paper or fixed:<shots>, got {s:?}")),
    }
}

/// Options shared by `train` and `sweep` that shape a training run.
#[derive(Clone, Debug, Args)]
pub struct TrainingOptions {
    /// Shot policy for sampled mode: exact, paper or fixed:<shots>.
    #[arg(long, default_value = "exact", value_parser = parse_policy)]
    pub policy: ShotPolicy,
    /// Input superposition [default: uniform when ideal, down when sampled].
    #[arg(long, value_enum)]
    pub source: Option<Source>,
    /// How ideal mode reads the error set.
    #[arg(long, value_enum, default_value = "sparse")]
    pub backend: Backend,
    /// Cap on gate-toggle rounds [default: 4(n+1)].
    #[arg(long)]
    pub max_updates: Option<usize>,
    /// Decode only the heaviest `k` weights of the sampled readout.
    #[arg(long)]
    pub mask_depth: Option<usize>,
    #[arg(long, value_enum, default_value = "nearest")]
    pub rounding: RoundingArg,
    /// Keep one superposition for the whole sampled run.
    #[arg(long)]
    pub single_phase: bool,
    /// Accept the first empty sampled error set without a second estimate.
    #[arg(long)]
    pub no_confirm: bool,
}

impl TrainingOptions {
    pub fn mode(&self, mode: Mode, seed: u64) -> QtMode {
        match mode {
            Mode::Ideal => QtMode::Ideal(IdealOptions {
                source: self.source.unwrap_or(Source::Uniform).into(),
                backend: match self.backend {
                    Backend::Sparse => IdealBackend::Sparse,
                    Backend::Statevector => IdealBackend::StateVector,
                },
            }),
            Mode::Sampled => {
                let mut o = SampledOptions::new(seed);
                o.policy = self.policy;
                o.source = self.source.unwrap_or(Source::Down).into();
                o.mask_depth = self.mask_depth;
                o.rounding = match self.rounding {
                    RoundingArg::Nearest => Rounding::Nearest,
                    RoundingArg::Floor => Rounding::Floor,
                };
                if self.single_phase {
                    o.two_phase = None;
                }
                o.confirm_empty = !self.no_confirm;
                QtMode::Sampled(o)
            }
        }
    }

    pub fn max_updates(&self, n: usize) -> usize {
        self.max_updates.unwrap_or_else(|| default_max_updates(n))
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(short = 'n')]
    pub n: usize,
    /// Truth table (`2^n` bits, input 0 first) or ANF such as `1^x1^x0.x1`.
    #[arg(short = 'f', long = "function")]
    pub function: String,
    #[arg(long, value_enum, default_value = "ideal")]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub training: TrainingOptions,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Comma-separated modes.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "ideal,sampled"
    )]
    pub mode: Vec<Mode>,
    /// Seed base; trial `t` of function `i` draws from stream `i` of seed `base + t`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of functions drawn at n = 4.
    #[arg(long, default_value_t = 100)]
    pub sample_count: usize,
    /// Output file; stdout when absent.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub training: TrainingOptions,
}

#[derive(Debug, Args)]
pub struct PrepDumpArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(long, value_enum, default_value = "down")]
    pub direction: DirectionArg,
}

/// Formats like C's `%.6g`.
pub fn fmt_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs());
    }
    trim_zeros(&format!("{x:.*}", (5 - exp) as usize)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn word_set(e: &[InputWord]) -> String {
    let inner: Vec<String> = e.iter().map(|w| w.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

pub fn render_report(f: &BooleanFunction, mode: &QtMode, r: &TrainReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "function: {f}");
    let kind = match mode {
        QtMode::Ideal(_) => "ideal",
        QtMode::Sampled(_) => "sampled",
    };
    let _ = writeln!(out, "mode: {kind}");
    for (k, e) in r.error_sets.iter().enumerate() {
        let shots = r.shots_per_update[k];
        if shots > 0 {
            let _ = writeln!(out, "E^({k}) = {}  shots={shots}", word_set(e));
        } else {
            let _ = writeln!(out, "E^({k}) = {}", word_set(e));
        }
    }
    let _ = writeln!(out, "converged: {}", if r.converged { "yes" } else { "no" });
    let _ = writeln!(out, "updates: {}", r.updates);
    let _ = writeln!(out, "config: {}", r.final_config);
    let _ = writeln!(out, "anf: {}", r.learned_anf);
    let _ = writeln!(out, "error_rate: {}", fmt_g6(r.error_rate));
    out
}

/// Runs `train` and returns the exit code.
pub fn cmd_train(args: &TrainArgs, out: &mut impl Write) -> Result<i32> {
    let f = parse_function(&args.function, args.n)?;
    let mode = args.training.mode(args.mode, args.seed);
    let report = train(&f, &mode, args.training.max_updates(args.n))?;
    out.write_all(render_report(&f, &mode, &report).as_bytes())?;
    Ok(if report.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub function_index: u64,
    pub mode: Mode,
    pub trials: u64,
    pub mean_updates: f64,
    pub mean_error_rate: f64,
    pub convergence_fraction: f64,
}

pub const SWEEP_HEADER: [&str; 6] = [
    "function_index",
    "mode",
    "trials",
    "mean_updates",
    "mean_error_rate",
    "convergence_fraction",
];

impl SweepRow {
    fn record(&self) -> [String; 6] {
        [
            self.function_index.to_string(),
            self.mode.name().to_string(),
            self.trials.to_string(),
            fmt_g6(self.mean_updates),
            fmt_g6(self.mean_error_rate),
            fmt_g6(self.convergence_fraction),
        ]
    }
}

/// Bit `x` of the index is `f(x)`, so index 1 is the function true only on `0...0`.
pub fn function_from_index(n: usize, index: u64) -> Result<BooleanFunction> {
    if n > 6 || (n < 6 && index >> (1u32 << n) != 0) {
        return Err(CliError::Invalid(format!(
            "function index {index} out of range for n = {n}"
        )));
    }
    Ok(BooleanFunction::new(n, BitTable::from_word(index, 1 << n))?)
}

/// Seed for one trial: stream `function_index` of ChaCha8 seeded with `base + trial`.
pub fn trial_seed(base: u64, trial: u64, function_index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base.wrapping_add(trial));
    rng.set_stream(function_index);
    rng.next_u64()
}

/// Function indices covered by a sweep: all of them for `n <= 3`, a seeded sample at `n = 4`.
pub fn sweep_indices(n: usize, sample_count: usize, seed: u64) -> Result<Vec<u64>> {
    match n {
        2 | 3 => Ok((0..1u64 << (1 << n)).collect()),
        4 => {
            let total = 1usize << 16;
            if sample_count == 0 || sample_count > total {
                return Err(CliError::Invalid(format!(
                    "sample count must be in 1..={total}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<u64> = rand::seq::index::sample(&mut rng, total, sample_count)
                .into_iter()
                .map(|i| i as u64)
                .collect();
            picked.sort_unstable();
            Ok(picked)
        }
        _ => Err(CliError::Invalid(format!(
            "sweep supports n in {{2, 3, 4}}, got {n}"
        ))),
    }
}

fn sweep_row(args: &SweepArgs, index: u64, mode: Mode) -> Result<SweepRow> {
    let f = function_from_index(args.n, index)?;
    let max_updates = args.training.max_updates(args.n);
    let (mut updates, mut errors, mut converged) = (0.0, 0.0, 0u64);
    for trial in 0..args.trials {
        let seed = trial_seed(args.seed, trial, index);
        let r = train(&f, &args.training.mode(mode, seed), max_updates)?;
        updates += r.updates as f64;
        errors += r.error_rate;
        converged += r.converged as u64;
    }
    let t = args.trials as f64;
    Ok(SweepRow {
        function_index: index,
        mode,
        trials: args.trials,
        mean_updates: updates / t,
        mean_error_rate: errors / t,
        convergence_fraction: converged as f64 / t,
    })
}

/// Worker count from [`WORKERS_ENV`]; `None` means let rayon decide.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(k) => Ok(Some(k)),
            Err(_) => Err(CliError::Invalid(format!(
                "{WORKERS_ENV}={v:?} is not a count"
            ))),
        },
    }
}

/// Computes the sweep rows sorted by `(function_index, mode)`.
pub fn sweep_rows(args: &SweepArgs, workers: Option<usize>) -> Result<Vec<SweepRow>> {
    if args.trials == 0 {
        return Err(CliError::Invalid("trials must be at least 1".into()));
    }
    let indices = sweep_indices(args.n, args.sample_count, args.seed)?;
    let mut modes = args.mode.clone();
    modes.sort();
    modes.dedup();
    let jobs: Vec<(u64, Mode)> = indices
        .iter()
        .flat_map(|&i| modes.iter().map(move |&m| (i, m)))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = workers {
        builder = builder.num_threads(k);
    }
    let pool = builder.build()?;
    let mut rows = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, m)| sweep_row(args, i, m))
            .collect::<Result<Vec<_>>>()
    })?;
    rows.sort_by_key(|r| (r.function_index, r.mode));
    Ok(rows)
}

pub fn write_sweep_csv(rows: &[SweepRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut impl Write) -> Result<i32> {
    let rows = sweep_rows(args, workers_from_env()?)?;
    match &args.output {
        Some(path) => write_sweep_csv(&rows, std::fs::File::create(path)?)?,
        None => write_sweep_csv(&rows, out)?,
    }
    Ok(EXIT_OK)
}

pub fn render_prep_dump(n: usize, direction: Direction) -> Result<String> {
    if n > MAX_DUMP_ARITY {
        return Err(CliError::Invalid(format!(
            "prep-dump supports n <= {MAX_DUMP_ARITY}, got {n}"
        )));
    }
    let circuit = PrepCircuit::<f64>::synthesize(n, direction)?;
    let state = circuit.run()?;
    let want = reference_amplitudes::<f64>(n, direction)?;
    let ranking = Ranking::new(n)?;
    let dir = match direction {
        Direction::Down => "down",
        Direction::Up => "up",
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# n={n} direction={dir} qubits={} rotation={} permutation={}",
        circuit.n_qubits(),
        circuit.rotation.len(),
        circuit.permutation.len()
    );
    out.push_str(&circuit.dump());
    let _ = writeln!(out, "# word rank amplitude probability expected");
    for (x, w) in want.iter().enumerate() {
        let a = state.amplitude(x << 1);
        let word = InputWord::new(x, n)?;
        let _ = writeln!(
            out,
            "{word} {} {} {} {}",
            ranking.rank(x),
            fmt_g6(a),
            fmt_g6(a * a),
            fmt_g6(w * w)
        );
    }
    Ok(out)
}

pub fn cmd_prep_dump(args: &PrepDumpArgs, out: &mut impl Write) -> Result<i32> {
    out.write_all(render_prep_dump(args.n, args.direction.into())?.as_bytes())?;
    Ok(EXIT_OK)
}

pub fn run(cli: &Cli, out: &mut impl Write) -> Result<i32> {
    match &cli.command {
        Command::Train(a) => cmd_train(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::PrepDump(a) => cmd_prep_dump(a, out),
    }
}
