use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use pcm_core::construction::{ConstructionMethod, ConstructionParams};
use pcm_core::demapper::DemapperKind;
use pcm_core::polar::CRC16_CCITT;
use pcm_core::rates::RateMethod;
use pcm_sim::construct::{construct, Budget};
use pcm_sim::fer::{prepare_code, run_fer, Decoder, ResultWriter, SimConfig, Sweep};
use pcm_sim::report::{estimate_rates, profile_csv, profile_json};
use pcm_sim::spec_file::{read_spec, write_spec};
use pcm_sim::tables::render_tables;

/// Polar-coded 8-ASK: achievable rates, code construction and FER simulation.
#[derive(Debug, Parser)]
#[command(name = "pcm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the polar label maps and label transform matrices.
    Tables {
        /// Bits per ASK symbol.
        #[arg(long, default_value_t = 3)]
        m: u32,
    },
    /// Estimate per-level achievable rates of a polar demapper.
    Rates(RatesArgs),
    /// Construct a multilevel polar code and write it as JSON.
    Construct(ConstructArgs),
    /// Simulate frame error rates over an SNR sweep and write CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DemapperArg {
    Sp,
    Mm,
    Mmsp,
}

impl From<DemapperArg> for DemapperKind {
    fn from(d: DemapperArg) -> Self {
        match d {
            DemapperArg::Sp => DemapperKind::Sp,
            DemapperArg::Mm => DemapperKind::Mm,
            DemapperArg::Mmsp => DemapperKind::MmSp,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RateArg {
    Lm,
    Gmi,
    MiHist,
    MiMatched,
    /// Matched MI of the auxiliary label bits (input of CGA).
    Cga,
}

impl From<RateArg> for RateMethod {
    fn from(r: RateArg) -> Self {
        match r {
            RateArg::Lm => RateMethod::Lm,
            RateArg::Gmi => RateMethod::Gmi,
            RateArg::MiHist => RateMethod::MiHist,
            RateArg::MiMatched => RateMethod::MiMatched,
            RateArg::Cga => RateMethod::AuxMi,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    LmDga,
    MiDga,
    Cga,
    Mc,
}

impl From<MethodArg> for ConstructionMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::LmDga => ConstructionMethod::LmDga,
            MethodArg::MiDga => ConstructionMethod::MiDga,
            MethodArg::Cga => ConstructionMethod::Cga,
            MethodArg::Mc => ConstructionMethod::Mc,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DecoderArg {
    Sc,
    Scl,
}

#[derive(Debug, Args)]
struct RatesArgs {
    #[arg(long, value_enum)]
    demapper: DemapperArg,
    #[arg(long, allow_negative_numbers = true)]
    snr_db: f64,
    #[arg(long, value_enum)]
    method: RateArg,
    /// Channel uses to sample.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    /// Print JSON (the default).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Print one CSV row per level.
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, value_enum)]
    demapper: DemapperArg,
    /// Design SNR in dB.
    #[arg(long, allow_negative_numbers = true)]
    snr_db: f64,
    /// Block length per level (power of two).
    #[arg(long)]
    n: usize,
    /// Number of unfrozen positions over all levels, CRC bits included.
    #[arg(long)]
    k: usize,
    /// Genie trials of the MC construction.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Channel uses sampled for the surrogate rates of the GA constructions.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    /// Record a 16-bit CRC in the spec.
    #[arg(long)]
    crc16: bool,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_enum)]
    demapper: DemapperArg,
    #[arg(long, value_enum)]
    decoder: DecoderArg,
    /// List size of the SCL decoder.
    #[arg(long, default_value_t = 32)]
    list: usize,
    /// Append a 16-bit CRC to the payload (taken from the k unfrozen bits).
    #[arg(long)]
    crc16: bool,
    #[arg(long, allow_negative_numbers = true)]
    snr_start: f64,
    #[arg(long, allow_negative_numbers = true)]
    snr_stop: f64,
    #[arg(long)]
    snr_step: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = 100)]
    target_errors: u64,
    #[arg(long)]
    seed: u64,
    /// Output CSV file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fill the `seconds` column with wall-clock times (output is then no
    /// longer reproducible byte for byte).
    #[arg(long)]
    timing: bool,
}

fn rates(args: RatesArgs) -> anyhow::Result<()> {
    let profile = estimate_rates(args.demapper.into(), args.snr_db, args.method.into(), args.samples, args.seed)?;
    let text = if args.csv {
        profile_csv(&profile)?
    } else {
        profile_json(&profile, args.seed)?
    };
    io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

fn construct_cmd(args: ConstructArgs) -> anyhow::Result<()> {
    let method: ConstructionMethod = args.method.into();
    let params = ConstructionParams {
        kind: args.demapper.into(),
        snr_db: args.snr_db,
        n: args.n,
        k: args.k,
        crc: args.crc16.then_some(CRC16_CCITT),
        seed: args.seed,
    };
    let budget = Budget {
        samples: args.samples,
        trials: args.trials,
    };
    let built = construct(method, &params, budget)?;
    if built.boundary_unresolved {
        eprintln!(
            "warning: {} trials do not resolve the selection boundary at 95% confidence",
            args.trials
        );
    }
    write_spec(&args.out, &built.spec)?;
    Ok(())
}

fn simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let spec = read_spec(&args.spec)?;
    let config = SimConfig {
        demapper: args.demapper.into(),
        decoder: match args.decoder {
            DecoderArg::Sc => Decoder::Sc,
            DecoderArg::Scl => Decoder::Scl { list: args.list },
        },
        crc: args.crc16,
        sweep: Sweep {
            start: args.snr_start,
            stop: args.snr_stop,
            step: args.snr_step,
        },
        max_frames: args.max_frames,
        target_errors: args.target_errors,
        seed: args.seed,
    };
    config.validate()?;
    let code = prepare_code(spec, &config)?;
    let out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    let mut writer = ResultWriter::new(out, args.timing)?;
    run_fer(&code, &config, |p| writer.write(p))?;
    writer.into_inner()?.flush()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Tables { m } => {
            print!("{}", render_tables(m)?);
            Ok(())
        }
        Command::Rates(a) => rates(a),
        Command::Construct(a) => construct_cmd(a),
        Command::Simulate(a) => simulate(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("pcm: {}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("pcm: {msg}");
            ExitCode::FAILURE
        }
    }
}
