use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cosetcap::capacity::{linspace, rates_at};
use cosetcap::code::{registry_names, resolve_code};
use cosetcap::tables::table_names;
use cosetcap::{
    optimize_channel, run_table, threshold, ChannelFamily, Error, Model, OptimizeOptions, RateRow, ThresholdOptions,
};

mod output;

use output::{Format, Sink};

const STACK_HELP: &str = "Code stack, layers joined by ` x `, inner first: A x B encodes with B first, so A sits \
next to the channel. Layers are registry names (see `codes list`), repZ(n)/repX(n), or paths to code files. \
An empty string or `none` means no encoding.";

#[derive(Parser, Debug)]
#[command(name = "cosetcap", version, about = "Coherent-information rates and thresholds of Pauli stabilizer codes")]
#[command(after_help = "Stacks are written inner first. A x B encodes with B first, so A is the layer next to the channel.\n\
Channels: depol, indxz, twopauli, custom:cX,cY,cZ.\n\
Exit status: 0 success, 1 regression mismatch (tables), 2 invalid input, 3 numerical failure.")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format [default: csv for sweeps, table otherwise].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "COSETCAP_THREADS")]
    threads: Option<usize>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bundled codes.
    Codes {
        #[command(subcommand)]
        action: CodesAction,
    },
    /// Rate of a stack at one channel parameter.
    Rate {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        p: f64,
    },
    /// Channel parameter where the rate crosses zero.
    Threshold {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        search: Search,
    },
    /// Rates over an evenly spaced range of channel parameters.
    Sweep {
        #[command(flatten)]
        target: Target,
        /// `a:b:steps`, endpoints included.
        #[arg(long)]
        range: Range,
    },
    /// Two repetition layers through the long-code estimator: threshold, or
    /// rates with `--p` / `--range`.
    Longrep {
        /// Length of the channel-side layer.
        #[arg(long)]
        inner: usize,
        /// Number of inner blocks (length of the second layer).
        #[arg(long)]
        outer: usize,
        /// Stabilizer type of the inner layer; the outer layer takes the other.
        #[arg(long, value_enum, default_value = "z")]
        inner_type: RepKind,
        #[arg(long, default_value = "depol")]
        channel: String,
        #[arg(long, conflicts_with = "range")]
        p: Option<f64>,
        #[arg(long)]
        range: Option<Range>,
        #[command(flatten)]
        search: Search,
    },
    /// Search the error split (cX, cY, cZ) maximizing the rate at the hashing point.
    Optimize {
        #[arg(long, help = STACK_HELP)]
        code: String,
        #[arg(long, default_value_t = 12)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo samples per evaluation (noisy objective).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Recompute a bundled table of published values and diff.
    Tables {
        /// Table name, or `all`.
        #[arg(long)]
        name: String,
        /// Override each row's tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum CodesAction {
    List,
    Show { name: String },
}

#[derive(Args, Debug)]
struct Target {
    #[arg(long, help = STACK_HELP)]
    code: String,
    #[arg(long, default_value = "depol")]
    channel: String,
    /// auto, closed (two rep layers), or longrep.
    #[arg(long, default_value = "auto")]
    method: String,
    /// Monte Carlo samples over inner syndromes.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct Search {
    /// Bracket width at which the search stops.
    #[arg(long)]
    tol: Option<f64>,
    /// Search interval `lo:hi`.
    #[arg(long, value_parser = parse_pair)]
    bracket: Option<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RepKind {
    Z,
    X,
}

#[derive(Clone, Copy, Debug)]
struct Range {
    a: f64,
    b: f64,
    steps: usize,
}

impl std::str::FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("{s:?}: expected a:b:steps, e.g. 0.05:0.07:21");
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else { return Err(bad()) };
        Ok(Range {
            a: a.parse().map_err(|_| bad())?,
            b: b.parse().map_err(|_| bad())?,
            steps: n.parse().map_err(|_| bad())?,
        })
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let bad = || format!("{s:?}: expected lo:hi");
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

enum Failure {
    Mismatch,
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Core(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Core(io::Error::other(e).into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Core(io::Error::other(e).into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Core(Error::Io(e))) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

fn open_output(cli: &Cli) -> Result<Box<dyn Write>, Failure> {
    Ok(match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

impl Target {
    fn model(&self) -> Result<Model, Error> {
        match self.samples {
            Some(n) => {
                if self.method != "auto" {
                    return Err(Error::Spec(format!("--samples with --method {}", self.method)));
                }
                Model::build(&self.code, &format!("mc:{n}:{}", self.seed))
            }
            None => Model::build(&self.code, &self.method),
        }
    }

    fn family(&self) -> Result<ChannelFamily, Error> {
        self.channel.parse()
    }
}

impl Search {
    fn options(&self) -> ThresholdOptions {
        ThresholdOptions {
            tol: self.tol,
            bracket: self.bracket,
            ..Default::default()
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Codes { action } => codes(cli, action, fmt(Format::Table)),
        Command::Rate { target, p } => {
            let model = target.model()?;
            let row = cosetcap::rate(&model, &target.family()?, *p)?;
            let mut sink = Sink::new(open_output(cli)?, fmt(Format::Table));
            sink.rows(&[row])?;
            sink.finish()
        }
        Command::Threshold { target, search } => {
            let res = threshold(&target.model()?, &target.family()?, &search.options())?;
            Sink::new(open_output(cli)?, fmt(Format::Table)).threshold(&res)
        }
        Command::Sweep { target, range } => sweep(cli, &target.model()?, &target.family()?, *range, fmt(Format::Csv)),
        Command::Longrep {
            inner,
            outer,
            inner_type,
            channel,
            p,
            range,
            search,
        } => {
            let stack = match inner_type {
                RepKind::Z => format!("repZ({inner}) x repX({outer})"),
                RepKind::X => format!("repX({inner}) x repZ({outer})"),
            };
            let model = Model::build(&stack, "longrep")?;
            let family: ChannelFamily = channel.parse()?;
            if let Some(r) = range {
                return sweep(cli, &model, &family, *r, fmt(Format::Csv));
            }
            if let Some(p) = p {
                let mut sink = Sink::new(open_output(cli)?, fmt(Format::Table));
                sink.rows(&[cosetcap::rate(&model, &family, *p)?])?;
                return sink.finish();
            }
            let res = threshold(&model, &family, &search.options())?;
            Sink::new(open_output(cli)?, fmt(Format::Table)).threshold(&res)
        }
        Command::Optimize {
            code,
            restarts,
            seed,
            samples,
        } => {
            let model = match samples {
                Some(n) => Model::build(code, &format!("mc:{n}:{seed}"))?,
                None => Model::build(code, "auto")?,
            };
            if *restarts == 0 {
                return Err(Error::OutOfRange("--restarts must be at least 1".into()).into());
            }
            let opts = OptimizeOptions {
                restarts: *restarts,
                seed: *seed,
                allow_mc: samples.is_some(),
                ..Default::default()
            };
            let res = optimize_channel(&model, &opts)?;
            Sink::new(open_output(cli)?, fmt(Format::Table)).optimization(&res)
        }
        Command::Tables { name, tol } => {
            if let Some(t) = tol {
                if !(*t > 0.0) {
                    return Err(Error::OutOfRange(format!("--tol {t} must be positive")).into());
                }
            }
            let names: Vec<&str> = if name == "all" {
                table_names().collect()
            } else {
                vec![name.as_str()]
            };
            let mut sink = Sink::new(open_output(cli)?, fmt(Format::Table));
            let mut all_pass = true;
            for n in names {
                let outcomes = run_table(n, *tol)?;
                all_pass &= outcomes.iter().all(|o| o.pass);
                sink.outcomes(n, &outcomes)?;
            }
            sink.finish()?;
            if all_pass {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
    }
}

fn codes(cli: &Cli, action: &CodesAction, format: Format) -> Result<(), Failure> {
    let mut sink = Sink::new(open_output(cli)?, format);
    match action {
        CodesAction::List => {
            let mut codes = Vec::new();
            for name in registry_names() {
                codes.push(resolve_code(name)?);
            }
            sink.code_list(&codes)?;
        }
        CodesAction::Show { name } => sink.code(&resolve_code(name)?)?,
    }
    sink.finish()
}

/// Evaluates in chunks of one point per worker, flushing after each chunk so
/// partial output survives interruption.
fn sweep(cli: &Cli, model: &Model, family: &ChannelFamily, r: Range, format: Format) -> Result<(), Failure> {
    let ps = linspace(r.a, r.b, r.steps)?;
    for &p in &[r.a, r.b] {
        family.eval(p)?;
    }
    let mut sink = Sink::new(open_output(cli)?, format);
    let chunk = rayon::current_num_threads().max(1);
    let mut all: Vec<RateRow> = Vec::new();
    for ps in ps.chunks(chunk) {
        let rows = rates_at(model, family, ps)?;
        sink.stream(&rows)?;
        all.extend(rows);
    }
    sink.end_stream(&all)?;
    sink.finish()
}
