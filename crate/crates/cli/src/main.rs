//! Command-line front end: Monte Carlo sweeps, validation CSVs, code
//! generation and basis dumps.

use clap::{Args, Parser, Subcommand};
use grandlab::finetune::PositionEval;
use grandlab::gf2::{bch_construct, write_alist_string, BchSpec, ParityCheckMatrix};
use grandlab::metrics::{csv_header, csv_row, jsonl_row, Variant};
use grandlab::pattern::{GammaWeights, PatternBasis};
use grandlab::sim::{
    apply_config_text, run_inversion_validation, run_partition_validation, run_sweep, CodeSpec,
    SimConfig,
};
use grandlab::channel::ChannelParams;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "grandlab", version, about = "GRAND decoding laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo BLER / test-count / eta sweep over decoder variants
    Simulate(SimulateArgs),
    /// Exact vs estimated pattern-position counts (CSV)
    ValidatePartition(ValidatePartitionArgs),
    /// Exact vs estimated reverse-pair counts (CSV)
    ValidateInversions(ValidateInversionsArgs),
    /// Construct a BCH code and write its matrices in alist format
    GenCode(GenCodeArgs),
    /// Dump the first T basis error patterns of an ORB-type ordering
    Patterns(PatternsArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, default_value = "csv", value_parser = ["csv", "jsonl"])]
    format: String,
}

#[derive(Args)]
struct SimulateArgs {
    /// Config file of `key = value` lines; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Code: bch:<n>:<k> or alist:<path>
    #[arg(long)]
    code: Option<String>,
    /// Comma-separated list: orb,cdf,sgrand,ft-cdf,ft-orb
    #[arg(long)]
    variants: Option<String>,
    /// Comma-separated Eb/N0 points in dB
    #[arg(long)]
    ebn0: Option<String>,
    /// Frames per (variant, Eb/N0) cell
    #[arg(long)]
    frames: Option<u64>,
    /// Maximum number of tests per frame
    #[arg(long, name = "t-max")]
    t_max: Option<usize>,
    /// Number of exact soft values used by fine-tuned variants (1 or 2)
    #[arg(long)]
    d: Option<usize>,
    /// Candidate window: positions of rank below this are eligible
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sample eta on every k-th frame (0 disables)
    #[arg(long, name = "eta-every")]
    eta_every: Option<u64>,
    /// Same message and noise across variants per frame index
    #[arg(long)]
    crn: bool,
    /// Record decode wall time (output becomes machine-dependent)
    #[arg(long)]
    timing: bool,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Evaluate re-sort targets with the continuous estimator instead of
    /// exact basis counts
    #[arg(long, name = "estimator-positions")]
    estimator_positions: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ValidatePartitionArgs {
    /// Largest weight for the integer-gamma table
    #[arg(long, name = "n-max", default_value_t = 2000)]
    n_max: usize,
    /// Weight vector: orb or cdf
    #[arg(long, default_value = "orb", value_parser = ["orb", "cdf"])]
    gamma: String,
    /// Eb/N0 in dB (sets the CDF weights)
    #[arg(long, default_value_t = 5.0)]
    ebn0: f64,
    /// Code length
    #[arg(long, default_value_t = 127)]
    n: usize,
    /// Code rate used for the Eb/N0 conversion
    #[arg(long, default_value_t = 113.0 / 127.0)]
    rate: f64,
    /// Basis size for the CDF path
    #[arg(long, name = "t-basis", default_value_t = 10_000)]
    t_basis: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ValidateInversionsArgs {
    /// Comma-separated Eb/N0 points in dB
    #[arg(long, default_value = "5,6")]
    ebn0: String,
    /// Channel draws per point
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// Number of selected positions (1 or 2)
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 127)]
    n: usize,
    #[arg(long, default_value_t = 113.0 / 127.0)]
    rate: f64,
    #[arg(long, name = "t-max", default_value_t = 10_000)]
    t_max: usize,
    #[arg(long, default_value_t = 16)]
    window: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GenCodeArgs {
    /// BCH parameters: field degree m and designed radius t
    #[arg(long, num_args = 2, value_names = ["M", "T"])]
    bch: Vec<u32>,
    /// Output path for H; the generator goes to `<stem>.gen.alist`
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PatternsArgs {
    /// Weight vector: orb or cdf
    #[arg(long, default_value = "orb", value_parser = ["orb", "cdf"])]
    gamma: String,
    /// Code length
    #[arg(long, default_value_t = 127)]
    n: usize,
    /// Number of basis patterns
    #[arg(long, default_value_t = 100)]
    t: usize,
    /// Eb/N0 in dB (CDF weights only)
    #[arg(long, default_value_t = 5.0)]
    ebn0: f64,
    #[arg(long, default_value_t = 113.0 / 127.0)]
    rate: f64,
    /// Emit the list (kept for compatibility; dumping is the default)
    #[arg(long)]
    dump: bool,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::ValidatePartition(args) => validate_partition(args),
        Command::ValidateInversions(args) => validate_inversions(args),
        Command::GenCode(args) => gen_code(args),
        Command::Patterns(args) => patterns(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> grandlab::Result<()> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> grandlab::Result<Vec<T>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<T>()
                .map_err(|_| grandlab::Error::InvalidInput(format!("{what}: bad entry {v:?}")))
        })
        .collect()
}

fn simulate(args: SimulateArgs) -> grandlab::Result<()> {
    let mut cfg = SimConfig::default();
    if let Some(path) = &args.config {
        apply_config_text(&mut cfg, &fs::read_to_string(path)?)?;
    }
    if let Some(code) = &args.code {
        cfg.code = CodeSpec::parse(code)?;
    }
    if let Some(v) = &args.variants {
        cfg.variants = v.split(',').map(Variant::parse).collect::<grandlab::Result<_>>()?;
    }
    if let Some(e) = &args.ebn0 {
        cfg.ebn0_db = parse_list(e, "ebn0")?;
    }
    if let Some(f) = args.frames {
        cfg.frames = f;
    }
    if let Some(t) = args.t_max {
        cfg.t_max = t;
    }
    if let Some(d) = args.d {
        cfg.d = d;
    }
    if let Some(w) = args.window {
        cfg.window = w;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(k) = args.eta_every {
        cfg.eta_every = k;
    }
    if args.crn {
        cfg.common_random_numbers = true;
    }
    if args.timing {
        cfg.timing = true;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    if args.estimator_positions {
        cfg.position_eval = PositionEval::Estimator;
    }

    let summary = run_sweep(&cfg)?;
    let mut text = String::new();
    if args.output.format == "csv" {
        text.push_str(csv_header());
        text.push('\n');
        for cell in &summary.cells {
            text.push_str(&csv_row(cell));
            text.push('\n');
        }
    } else {
        for cell in &summary.cells {
            text.push_str(&jsonl_row(cell));
            text.push('\n');
        }
    }
    write_output(&args.output.out, &text)
}

fn validate_partition(args: ValidatePartitionArgs) -> grandlab::Result<()> {
    let kind = if args.gamma == "orb" {
        Variant::Orbgrand
    } else {
        Variant::CdfOrbgrand
    };
    let rows =
        run_partition_validation(kind, args.n, args.n_max, args.ebn0, args.rate, args.t_basis)?;
    let mut text = String::new();
    if args.output.format == "csv" {
        text.push_str("m,o_exact,o_tilde,rel_error\n");
        for r in &rows {
            text.push_str(&format!(
                "{},{},{},{}\n",
                fmt(r.m),
                fmt(r.o_exact),
                fmt(r.o_tilde),
                fmt(r.rel_error)
            ));
        }
    } else {
        for r in &rows {
            text.push_str(&format!(
                "{{\"m\":{},\"o_exact\":{},\"o_tilde\":{},\"rel_error\":{}}}\n",
                fmt(r.m),
                fmt(r.o_exact),
                fmt(r.o_tilde),
                fmt(r.rel_error)
            ));
        }
    }
    write_output(&args.output.out, &text)
}

fn validate_inversions(args: ValidateInversionsArgs) -> grandlab::Result<()> {
    let ebn0 = parse_list::<f64>(&args.ebn0, "ebn0")?;
    let rows = run_inversion_validation(
        &ebn0,
        args.samples,
        args.d,
        args.n,
        args.rate,
        args.t_max,
        args.window,
        args.seed,
        args.workers,
    )?;
    let mut text = String::new();
    if args.output.format == "csv" {
        text.push_str("ebn0_db,mean_i_exact,mean_i_estimate,rel_error\n");
        for r in &rows {
            text.push_str(&format!(
                "{},{},{},{}\n",
                fmt(r.ebn0_db),
                fmt(r.mean_exact),
                fmt(r.mean_estimate),
                fmt(r.rel_error)
            ));
        }
    } else {
        for r in &rows {
            text.push_str(&format!(
                "{{\"ebn0_db\":{},\"mean_i_exact\":{},\"mean_i_estimate\":{},\"rel_error\":{}}}\n",
                fmt(r.ebn0_db),
                fmt(r.mean_exact),
                fmt(r.mean_estimate),
                fmt(r.rel_error)
            ));
        }
    }
    write_output(&args.output.out, &text)
}

fn gen_code(args: GenCodeArgs) -> grandlab::Result<()> {
    if args.bch.len() != 2 {
        return Err(grandlab::Error::InvalidInput(
            "--bch expects two values: m t".into(),
        ));
    }
    let spec = BchSpec::new(args.bch[0], args.bch[1])?;
    let code = bch_construct(&spec)?;
    fs::write(&args.out, write_alist_string(&code.parity))?;

    // companion generator file, same sparse format
    let g_rows: Vec<Vec<usize>> = code
        .generator
        .rows()
        .iter()
        .map(|r| r.support())
        .collect();
    let g_as_checks = ParityCheckMatrix::from_row_supports(code.n(), &g_rows)?;
    let gen_path = args.out.with_extension("gen.alist");
    fs::write(&gen_path, write_alist_string(&g_as_checks))?;
    eprintln!(
        "BCH({}, {}): H -> {}, G -> {}",
        code.n(),
        code.k(),
        args.out.display(),
        gen_path.display()
    );
    Ok(())
}

fn patterns(args: PatternsArgs) -> grandlab::Result<()> {
    let gamma = if args.gamma == "orb" {
        GammaWeights::orbgrand(args.n)
    } else {
        let params = ChannelParams::from_ebn0(args.ebn0, args.rate)?;
        GammaWeights::cdf(args.n, params.sigma)?
    };
    let basis = PatternBasis::build(gamma, args.t)?;
    let mut text = String::from("t,weight,support\n");
    for t in 0..basis.len() {
        let support = basis
            .support(t)
            .iter()
            .map(|&j| (j + 1).to_string())
            .collect::<Vec<_>>()
            .join(" ");
        text.push_str(&format!("{},{},{}\n", t + 1, fmt(basis.weight(t)), support));
    }
    write_output(&args.output.out, &text)
}

fn fmt(v: f64) -> String {
    let v = v + 0.0; // normalize -0.0
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v:.1}")
    } else {
        format!("{v:.9e}")
    }
}
