use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dynmatch::{DeltaProfile, EngineKind};
use dynmatch_cli::bench::{bench, render_csv, render_table};
use dynmatch_cli::replay::{replay, verify, ReplayOptions, RunReport};
use dynmatch_cli::{generate, CliError, StreamKind, UpdateStream};

#[derive(Parser)]
#[command(name = "dynmatch", version, about = "Maximal matching under edge insertions and deletions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Naive,
    Sqrt,
    Arb,
    Compact,
}

impl From<Engine> for EngineKind {
    fn from(e: Engine) -> Self {
        match e {
            Engine::Naive => EngineKind::Naive,
            Engine::Sqrt => EngineKind::Sqrt,
            Engine::Arb => EngineKind::Arboricity,
            Engine::Compact => EngineKind::Compact,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    StarAdversary,
    Forest,
    DeleteHeavy,
}

impl From<Kind> for StreamKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Random => StreamKind::Random,
            Kind::StarAdversary => StreamKind::StarAdversary,
            Kind::Forest => StreamKind::Forest,
            Kind::DeleteHeavy => StreamKind::DeleteHeavy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    FiveC,
    LogLog,
}

#[derive(clap::Args)]
struct EngineArgs {
    /// Arboricity bound for the arb engine; derived from the stream if omitted.
    #[arg(long)]
    arboricity: Option<usize>,
    /// How the arb engine turns the arboricity bound into an out-degree cap.
    #[arg(long, value_enum, default_value = "five-c")]
    profile: Profile,
}

impl EngineArgs {
    fn options(&self, engine: EngineKind) -> ReplayOptions {
        let mut options = ReplayOptions::new(engine);
        options.config.profile = match self.profile {
            Profile::FiveC => DeltaProfile::FiveC,
            Profile::LogLog => DeltaProfile::LogLog,
        };
        if let Some(c) = self.arboricity {
            options.config.arboricity = c;
            options.auto_arboricity = false;
        }
        options
    }
}

#[derive(clap::Args)]
struct StreamSource {
    /// Stream file; if omitted a stream is generated from the flags below.
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "random")]
    kind: Kind,
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Number of updates; defaults to 10n.
    #[arg(long)]
    len: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl StreamSource {
    fn load(&self) -> Result<UpdateStream, CliError> {
        match &self.file {
            Some(path) => UpdateStream::read(path),
            None => {
                if self.n == 0 {
                    return Err(CliError::Usage("--n must be positive".into()));
                }
                Ok(generate(self.kind.into(), self.n, self.len.unwrap_or(10 * self.n), self.seed))
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Feed a stream through one engine, checking the matching as it goes.
    Replay {
        #[command(flatten)]
        source: StreamSource,
        #[arg(long, value_enum, default_value = "sqrt")]
        engine: Engine,
        /// Check every K updates (default 1 for n ≤ 64, else 32). The final
        /// state is always checked.
        #[arg(long, value_name = "K")]
        check_every: Option<usize>,
        #[command(flatten)]
        engine_args: EngineArgs,
        /// Print the report as one CSV row with a header.
        #[arg(long)]
        csv: bool,
    },
    /// Write a seeded synthetic stream.
    Generate {
        #[arg(long, value_enum, default_value = "random")]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Number of updates; defaults to 10n.
        #[arg(long)]
        len: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare op counts and wall time of engines on one stream.
    Bench {
        #[command(flatten)]
        source: StreamSource,
        /// Engines to run, in order; all of them if omitted.
        #[arg(long, value_enum)]
        engine: Vec<Engine>,
        #[command(flatten)]
        engine_args: EngineArgs,
        #[arg(long)]
        csv: bool,
    },
    /// Replay a stream on the naive engine with checks after every update.
    Verify {
        file: PathBuf,
        #[arg(long)]
        csv: bool,
    },
}

fn print_report(report: &RunReport, csv: bool) {
    if csv {
        println!("{}", RunReport::CSV_HEADER);
        println!("{}", report.csv_row());
    } else {
        print!("{}", report.render());
    }
}

fn report_code(report: &RunReport) -> ExitCode {
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Replay { source, engine, check_every, engine_args, csv } => {
            let stream = source.load()?;
            let mut options = engine_args.options(engine.into());
            options.check_every = check_every;
            let report = replay(&stream, &options)?;
            print_report(&report, csv);
            Ok(report_code(&report))
        }
        Command::Generate { kind, n, len, seed, output } => {
            if n == 0 {
                return Err(CliError::Usage("--n must be positive".into()));
            }
            let stream = generate(kind.into(), n, len.unwrap_or(10 * n), seed);
            match output {
                Some(path) => stream.write(&path)?,
                None => print!("{}", stream.render()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { source, engine, engine_args, csv } => {
            let stream = source.load()?;
            let engines: Vec<EngineKind> =
                if engine.is_empty() { EngineKind::ALL.to_vec() } else { engine.into_iter().map(Into::into).collect() };
            let rows = bench(&stream, &engines, &engine_args.options(EngineKind::Naive))?;
            print!("{}", if csv { render_csv(&rows) } else { render_table(&rows) });
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, csv } => {
            let report = verify(&UpdateStream::read(&file)?)?;
            print_report(&report, csv);
            Ok(report_code(&report))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                CliError::Usage(_) => 2,
                CliError::Parse { .. } => 3,
                CliError::Engine { .. } | CliError::Match(_) => 4,
                CliError::Io { .. } => 5,
            })
        }
    }
}
