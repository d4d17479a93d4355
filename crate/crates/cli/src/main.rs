use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use vilenkin::construction::{Construction, NullSetSpec};
use vilenkin::io::{write_report_csv, write_trace_csv, ExperimentSpec, PlanFile};
use vilenkin::spectral::{
    dirichlet, fejer_kernel, forward, inverse, paley_dirichlet, write_coefficients_csv, SampledFunction,
};
use vilenkin::{Complex64, GroupPoint, RadixSequence, SpectralIndex};

/// Largest level size `M_N` the kernel table will enumerate.
const MAX_KERNEL_CELLS: usize = 100_000;

#[derive(Parser, Debug)]
#[command(name = "vilenkin", version, about = "Harmonic analysis on bounded Vilenkin groups")]
struct Cli {
    /// Experiment spec (JSON)
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Output directory; tables go to stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Re-verify an existing plan.json in --out instead of rebuilding it
    #[arg(long, global = true)]
    verify_only: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate a Dirichlet or Fejér kernel on every level-N cell
    Kernels(KernelArgs),
    /// Forward transform of a sample table `cell_index,re,im`
    Transform(TransformArgs),
    /// Build f for the spec, write plan.json, spectrum.json and report.csv
    Construct,
    /// Fejér means of f at one point of the spec along the certified index pairs
    Trace(TraceArgs),
}

#[derive(Args, Debug)]
struct RadixArgs {
    /// Non-repeating leading radices, comma separated
    #[arg(long, value_delimiter = ',', default_value = "")]
    prefix: Vec<String>,
    /// Repeating radices, comma separated
    #[arg(long, value_delimiter = ',', default_value = "2")]
    period: Vec<String>,
}

#[derive(Args, Debug)]
struct KernelArgs {
    #[command(flatten)]
    radix: RadixArgs,
    /// Level N of the cell grid
    #[arg(long)]
    depth: usize,
    #[arg(long, value_enum)]
    kind: KernelKind,
    /// Kernel index n (decimal)
    #[arg(long)]
    n: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KernelKind {
    Dirichlet,
    Fejer,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[command(flatten)]
    radix: RadixArgs,
    /// Sample table with header `cell_index,re,im`
    #[arg(long)]
    input: PathBuf,
    /// Invert the coefficients again and report the max error on stderr
    #[arg(long)]
    roundtrip: bool,
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// Leading digits of a point of the spec, comma separated (x_0 first)
    #[arg(long, value_delimiter = ',')]
    point: Vec<u32>,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

trait OrExit<T> {
    fn or_exit(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> OrExit<T> for Result<T, E> {
    fn or_exit(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure { code, error: e.into() })
    }
}

const BAD_INPUT: u8 = 2;
const NOT_CERTIFIED: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Kernels(args) => kernels(&cli, args),
        Command::Transform(args) => transform(&cli, args),
        Command::Construct => construct(&cli),
        Command::Trace(args) => trace(&cli, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn parse_radices(list: &[String]) -> anyhow::Result<Vec<u32>> {
    list.iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<u32>().with_context(|| format!("bad radix {s:?}")))
        .collect()
}

fn radix_from(args: &RadixArgs) -> anyhow::Result<RadixSequence> {
    Ok(RadixSequence::new(parse_radices(&args.prefix)?, parse_radices(&args.period)?)?)
}

fn emit(cli: &Cli, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
    match &cli.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(name);
            fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn kernels(cli: &Cli, args: &KernelArgs) -> Result<(), Failure> {
    let radix = radix_from(&args.radix).or_exit(BAD_INPUT)?;
    let cells = radix
        .scale_u64(args.depth)
        .filter(|&m| m <= MAX_KERNEL_CELLS as u64)
        .ok_or_else(|| anyhow!("M_{} exceeds the {MAX_KERNEL_CELLS}-cell limit", args.depth))
        .or_exit(BAD_INPUT)?;
    let n = SpectralIndex::parse(&radix, &args.n).or_exit(BAD_INPUT)?;
    let paley = (0..=args.depth).find(|&k| &radix.scale(k) == n.value());

    let mut values = Vec::with_capacity(cells as usize);
    for t in 0..cells {
        let x = GroupPoint::from_cell(&radix, args.depth, t);
        let v: Complex64 = match args.kind {
            KernelKind::Dirichlet => dirichlet(&radix, &n, &x),
            KernelKind::Fejer => fejer_kernel(&radix, &n, &x),
        }
        .or_exit(BAD_INPUT)?;
        if let (KernelKind::Dirichlet, Some(k)) = (args.kind, paley) {
            let closed: Complex64 = paley_dirichlet(&radix, k, &x);
            if (v - closed).norm() > 1e-10 {
                return Err(anyhow!("cell {t}: D_{n} = {v} but the closed form gives {closed}")).or_exit(NOT_CERTIFIED);
            }
        }
        values.push(v);
    }
    let table = SampledFunction::new(&radix, args.depth, values).or_exit(BAD_INPUT)?;
    let mut buf = Vec::new();
    table.write_csv(&mut buf).or_exit(BAD_INPUT)?;
    emit(cli, "kernel.csv", &buf).or_exit(BAD_INPUT)
}

fn transform(cli: &Cli, args: &TransformArgs) -> Result<(), Failure> {
    let radix = radix_from(&args.radix).or_exit(BAD_INPUT)?;
    let text = fs::read(&args.input).with_context(|| format!("reading {}", args.input.display())).or_exit(BAD_INPUT)?;
    let samples = SampledFunction::<f64>::read_csv(&radix, text.as_slice())
        .with_context(|| format!("loading {}", args.input.display()))
        .or_exit(BAD_INPUT)?;
    let coeffs = forward(&samples);
    if args.roundtrip {
        let back = inverse(&radix, samples.level(), &coeffs).or_exit(BAD_INPUT)?;
        let err = back.values().iter().zip(samples.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        eprintln!("max round-trip error: {err:e}");
    }
    let mut buf = Vec::new();
    write_coefficients_csv(&mut buf, &coeffs).or_exit(BAD_INPUT)?;
    emit(cli, "coefficients.csv", &buf).or_exit(BAD_INPUT)
}

fn load_spec(cli: &Cli) -> Result<(ExperimentSpec, NullSetSpec), Failure> {
    let path = cli.spec.as_deref().ok_or_else(|| anyhow!("--spec is required")).or_exit(BAD_INPUT)?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).or_exit(BAD_INPUT)?;
    let spec =
        ExperimentSpec::from_json(&text).with_context(|| format!("parsing {}", path.display())).or_exit(BAD_INPUT)?;
    let null_set = spec.null_set().with_context(|| format!("validating {}", path.display())).or_exit(BAD_INPUT)?;
    Ok((spec, null_set))
}

fn out_dir(cli: &Cli) -> Result<&Path, Failure> {
    cli.out.as_deref().ok_or_else(|| anyhow!("--out is required")).or_exit(BAD_INPUT)
}

fn construct(cli: &Cli) -> Result<(), Failure> {
    let (spec, null_set) = load_spec(cli)?;
    let dir = out_dir(cli)?;
    let construction = if cli.verify_only {
        let path = dir.join("plan.json");
        let text =
            fs::read_to_string(&path).with_context(|| format!("reading {}", path.display())).or_exit(BAD_INPUT)?;
        let plan =
            PlanFile::from_json(&text).with_context(|| format!("parsing {}", path.display())).or_exit(BAD_INPUT)?;
        let (cover, exponents) = plan.parts(&null_set).context("plan.json").or_exit(NOT_CERTIFIED)?;
        Construction::<f64>::from_plan(&null_set, cover, exponents).context("plan.json").or_exit(NOT_CERTIFIED)?
    } else {
        Construction::<f64>::build(&null_set).or_exit(NOT_CERTIFIED)?
    };

    let reports = construction.reports().or_exit(NOT_CERTIFIED)?;
    let mut failures = Vec::new();
    for r in &reports {
        match r.check() {
            Ok(()) => println!("stage {} point {}: gap {:.12} >= {:.12}", r.stage, r.point, r.gap, r.lower_bound()),
            Err(detail) => {
                eprintln!("stage {} point {}: {detail}", r.stage, r.point);
                failures.push((r.stage, r.point));
            }
        }
    }
    for cert in construction.flat_certificates(&[spec.p]).or_exit(NOT_CERTIFIED)? {
        let (p, norm) = cert.norms[0];
        println!("stage {}: mu(A) = {}, ||P||_{p}^{p} = {norm:.12}", cert.stage, cert.measure);
    }

    if cli.verify_only {
        let path = dir.join("spectrum.json");
        if let Ok(stored) = fs::read_to_string(&path) {
            if stored != construction.spectrum().to_json().or_exit(NOT_CERTIFIED)? {
                return Err(anyhow!("{} differs from the plan's spectrum", path.display())).or_exit(NOT_CERTIFIED);
            }
        }
    } else {
        let plan = PlanFile::from_construction(&construction).to_json().or_exit(BAD_INPUT)?;
        let spectrum = construction.spectrum().to_json().or_exit(BAD_INPUT)?;
        let mut report = Vec::new();
        write_report_csv(&mut report, &reports).or_exit(BAD_INPUT)?;
        emit(cli, "plan.json", plan.as_bytes()).or_exit(BAD_INPUT)?;
        emit(cli, "spectrum.json", spectrum.as_bytes()).or_exit(BAD_INPUT)?;
        emit(cli, "report.csv", &report).or_exit(BAD_INPUT)?;
    }

    match failures.first() {
        None => Ok(()),
        Some(&(stage, point)) => {
            Err(anyhow!("{} certificate(s) failed, first at stage {stage} point {point}", failures.len()))
                .or_exit(NOT_CERTIFIED)
        }
    }
}

fn trace(cli: &Cli, args: &TraceArgs) -> Result<(), Failure> {
    let (_, null_set) = load_spec(cli)?;
    let x = GroupPoint::new(null_set.radix(), args.point.clone()).or_exit(BAD_INPUT)?;
    let point = null_set.position_of(&x).ok_or(vilenkin::Error::PointNotInSet).context("--point").or_exit(BAD_INPUT)?;
    let construction = Construction::<f64>::build(&null_set).or_exit(NOT_CERTIFIED)?;
    let reports = (1..=null_set.stages())
        .map(|j| construction.divergence_gap(j, point))
        .collect::<Result<Vec<_>, _>>()
        .or_exit(NOT_CERTIFIED)?;
    let mut buf = Vec::new();
    write_trace_csv(&mut buf, &reports).or_exit(BAD_INPUT)?;
    emit(cli, "trace.csv", &buf).or_exit(BAD_INPUT)
}
