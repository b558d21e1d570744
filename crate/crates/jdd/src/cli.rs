//! The `jdd` command-line interface.
//!
//! Exit codes: 0 accept or success, 2 usage or input error, 3 the test
//! rejected `p = q`, 4 a bound that must hold was violated (a bug).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use jdd_core::mnist::sample_class;
use jdd_core::{
    rademacher_jensen_bound, run_test, threshold_grid, Calibration, GaussianNull, KernelSpec,
    PairedSample, RepeatedSample, TestReport, PAPER_BANDWIDTH,
};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{
    calibrate_parallel, rademacher_parallel, rotation_sweep, MnistNull, SweepConfig,
};
use crate::idx::load_idx;
use crate::manifest::RunManifest;
use crate::ranges::{parse_counts, parse_reals};
use crate::sample_csv::{load_sample, write_sample};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REJECT: i32 = 3;
pub const EXIT_BOUND_VIOLATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "jdd",
    version,
    about = "Kernel two-sample test for joint distributions"
)]
struct Cli {
    /// Add the wall-clock time to CSV manifests (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timestamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test whether two paired samples come from the same joint distribution.
    Test(TestArgs),
    /// Critical values over a grid of significance levels and sample sizes.
    Threshold(ThresholdArgs),
    /// Discrepancy between unrotated and rotated MNIST digits over a range of angles.
    MnistSweep(SweepArgs),
    /// Rejection rate under the null hypothesis.
    Calibrate(CalibrateArgs),
    /// Monte Carlo joint Rademacher average against its closed-form bounds.
    Rademacher(RademacherArgs),
    /// Write a projection-histogram sample of one MNIST digit as CSV.
    MnistSample(MnistSampleArgs),
}

#[derive(Debug, Clone, Copy, Args)]
struct Bandwidths {
    /// RBF bandwidth on the x coordinate.
    #[arg(long, default_value_t = PAPER_BANDWIDTH)]
    sigma_x: f64,
    /// RBF bandwidth on the y coordinate.
    #[arg(long, default_value_t = PAPER_BANDWIDTH)]
    sigma_y: f64,
}

impl Bandwidths {
    fn kernels(&self) -> Result<(KernelSpec, KernelSpec)> {
        Ok((
            KernelSpec::rbf(self.sigma_x)?,
            KernelSpec::rbf(self.sigma_y)?,
        ))
    }
}

#[derive(Debug, Clone, Args)]
struct Output {
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelChoice {
    Rbf,
    Linear,
}

#[derive(Debug, Args)]
struct TestArgs {
    /// First sample (paired-sample CSV).
    #[arg(long = "p")]
    p: PathBuf,
    /// Second sample (paired-sample CSV).
    #[arg(long = "q")]
    q: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[command(flatten)]
    bandwidths: Bandwidths,
    #[arg(long, value_enum, default_value_t = KernelChoice::Rbf)]
    kernel: KernelChoice,
    /// Kernel bound for --kernel linear; defaults to the largest squared norm in the data.
    #[arg(long)]
    k: Option<f64>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    /// Significance levels: `a,b,...` or `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    alphas: String,
    /// Sample sizes: `a,b,...` or `start:stop:step`.
    #[arg(long)]
    ms: String,
    /// Kernel bound.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Args)]
struct MnistFiles {
    /// IDX image file.
    #[arg(long)]
    images: PathBuf,
    /// IDX label file.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, default_value_t = 3)]
    digit: u8,
    /// Scale pixels by 1/255 instead of normalizing each histogram to sum one.
    #[arg(long)]
    raw: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    mnist: MnistFiles,
    #[arg(long, default_value_t = 1000)]
    m: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = -45.0, allow_hyphen_values = true)]
    rho_min: f64,
    #[arg(long, default_value_t = 45.0, allow_hyphen_values = true)]
    rho_max: f64,
    #[arg(long, default_value_t = 5.0)]
    rho_step: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repetitions per angle; adds mean/min/max columns.
    #[arg(long)]
    trials: Option<usize>,
    #[command(flatten)]
    bandwidths: Bandwidths,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GeneratorChoice {
    Gaussian,
    Mnist,
    /// One Gaussian sample used on both sides.
    Identical,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    #[arg(long, value_enum)]
    generator: GeneratorChoice,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Gaussian generator: x dimension.
    #[arg(long, default_value_t = 2)]
    dim_x: usize,
    /// Gaussian generator: y dimension.
    #[arg(long, default_value_t = 2)]
    dim_y: usize,
    /// Gaussian generator: correlation between x and y coordinates.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    coupling: f64,
    #[arg(long)]
    images: Option<PathBuf>,
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    digit: u8,
    #[arg(long)]
    raw: bool,
    #[command(flatten)]
    bandwidths: Bandwidths,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct RademacherArgs {
    /// Sample (paired-sample CSV).
    #[arg(long = "p")]
    p: PathBuf,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    bandwidths: Bandwidths,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct MnistSampleArgs {
    #[command(flatten)]
    mnist: MnistFiles,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    rho: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let recorded: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let stdout = io::stdout();
    match dispatch(cli, recorded, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli, args: Vec<String>, stdout: &mut dyn Write) -> Result<i32> {
    let stamp = cli.timestamp.then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let manifest = |name: &str| RunManifest {
        timestamp: stamp,
        ..RunManifest::new(name, args.clone())
    };
    match cli.command {
        Command::Test(a) => cmd_test(a, stdout),
        Command::Threshold(a) => cmd_threshold(a, manifest("threshold"), stdout),
        Command::MnistSweep(a) => cmd_mnist_sweep(a, manifest("mnist-sweep"), stdout),
        Command::Calibrate(a) => cmd_calibrate(a, manifest("calibrate"), stdout),
        Command::Rademacher(a) => cmd_rademacher(a, manifest("rademacher"), stdout),
        Command::MnistSample(a) => cmd_mnist_sample(a, manifest("mnist-sample"), stdout),
    }
}

/// Runs `body` against the `--out` file or standard output.
fn with_output(
    output: &Output,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<()> {
    match &output.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::io(path, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| Error::io(path, e))
        }
        None => body(stdout).map_err(|e| Error::io("<stdout>", e)),
    }
}

fn largest_squared_norm(samples: &[&PairedSample]) -> f64 {
    samples
        .iter()
        .flat_map(|s| s.xs().iter().chain(s.ys()))
        .map(|v| v.iter().map(|c| c * c).sum::<f64>())
        .fold(0.0, f64::max)
}

#[derive(Serialize)]
struct JsonReport<'a> {
    version: &'static str,
    p: &'a Path,
    q: &'a Path,
    report: &'a TestReport,
}

fn cmd_test(a: TestArgs, out: &mut dyn Write) -> Result<i32> {
    let p = load_sample(&a.p)?;
    let q = load_sample(&a.q)?;
    let (kx, ky) = match a.kernel {
        KernelChoice::Rbf => a.bandwidths.kernels()?,
        KernelChoice::Linear => {
            let bound =
                a.k.unwrap_or_else(|| largest_squared_norm(&[&p, &q]).max(f64::MIN_POSITIVE));
            (
                KernelSpec::linear(p.dim_x(), bound)?,
                KernelSpec::linear(p.dim_y(), bound)?,
            )
        }
    };
    let report = run_test(&kx, &ky, &p, &q, a.alpha)?;
    let write = |out: &mut dyn Write| -> io::Result<()> {
        if a.json {
            let doc = JsonReport {
                version: env!("CARGO_PKG_VERSION"),
                p: &a.p,
                q: &a.q,
                report: &report,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)
        } else {
            write_human_report(out, &report)
        }
    };
    write(out).map_err(|e| Error::io("<stdout>", e))?;
    Ok(if report.reject { EXIT_REJECT } else { EXIT_OK })
}

fn write_human_report(out: &mut dyn Write, r: &TestReport) -> io::Result<()> {
    let decision = if r.reject {
        "reject p = q (jdd > critical value)"
    } else {
        "accept p = q (jdd <= critical value)"
    };
    writeln!(out, "jdd             {}", r.jdd.value)?;
    writeln!(out, "critical value  {}", r.critical_value)?;
    writeln!(out, "decision        {decision}")?;
    writeln!(out, "alpha           {}", r.config.alpha())?;
    writeln!(out, "kernel bound K  {}", r.config.kernel_bound())?;
    writeln!(out, "m = n           {}", r.config.m())?;
    writeln!(out, "kernel x        {:?}", r.kernel_x.kind())?;
    writeln!(out, "kernel y        {:?}", r.kernel_y.kind())?;
    writeln!(out, "radicand        {}", r.jdd.squared_sum)?;
    if r.jdd.suspicious() {
        writeln!(out, "warning         radicand below -1e-9 was clamped to 0")?;
    }
    Ok(())
}

fn cmd_threshold(a: ThresholdArgs, manifest: RunManifest, out: &mut dyn Write) -> Result<i32> {
    let alphas = parse_reals(&a.alphas)?;
    let ms = parse_counts(&a.ms)?;
    let grid = threshold_grid(&alphas, &ms, a.k)?;
    with_output(&a.output, out, |w| {
        w.write_all(manifest.render().as_bytes())?;
        writeln!(w, "alpha,m,critical_value")?;
        for (alpha, m, v) in grid.cells() {
            writeln!(w, "{alpha},{m},{v}")?;
        }
        Ok(())
    })?;
    Ok(EXIT_OK)
}

fn load_mnist(files: &MnistFiles, manifest: &mut RunManifest) -> Result<jdd_core::mnist::ImageSet> {
    let set = load_idx(&files.images, &files.labels)?;
    manifest.add_input(&files.images)?;
    manifest.add_input(&files.labels)?;
    Ok(set)
}

fn cmd_mnist_sweep(a: SweepArgs, mut manifest: RunManifest, out: &mut dyn Write) -> Result<i32> {
    let set = load_mnist(&a.mnist, &mut manifest)?;
    let rhos = parse_reals(&format!("{}:{}:{}", a.rho_min, a.rho_max, a.rho_step))?;
    let (kx, ky) = a.bandwidths.kernels()?;
    let trials = a.trials.unwrap_or(1);
    if trials == 0 {
        return Err(Error::Usage("--trials must be at least 1".into()));
    }
    let cfg = SweepConfig {
        digit: a.mnist.digit,
        m: a.m,
        alpha: a.alpha,
        rhos,
        trials,
        seed: a.seed,
        kx,
        ky,
        normalize: !a.mnist.raw,
    };
    let rows = rotation_sweep(&set, &cfg)?;
    let manifest = manifest.with_seed(a.seed);
    with_output(&a.output, out, |w| {
        w.write_all(manifest.render().as_bytes())?;
        if a.trials.is_some() {
            writeln!(
                w,
                "rho,jdd,critical_value,reject,jdd_mean,jdd_min,jdd_max,rejections"
            )?;
        } else {
            writeln!(w, "rho,jdd,critical_value,reject")?;
        }
        for r in &rows {
            write!(
                w,
                "{},{},{},{}",
                r.rho,
                r.jdds[0],
                r.critical_value,
                r.jdds[0] > r.critical_value
            )?;
            if a.trials.is_some() {
                write!(
                    w,
                    ",{},{},{},{}",
                    r.mean(),
                    r.min(),
                    r.max(),
                    r.rejections()
                )?;
            }
            writeln!(w)?;
        }
        Ok(())
    })?;
    Ok(EXIT_OK)
}

fn cmd_calibrate(a: CalibrateArgs, mut manifest: RunManifest, out: &mut dyn Write) -> Result<i32> {
    let (kx, ky) = a.bandwidths.kernels()?;
    let gaussian = GaussianNull {
        m: a.m,
        dim_x: a.dim_x,
        dim_y: a.dim_y,
        coupling: a.coupling,
        seed: a.seed,
    };
    if a.m == 0 || a.dim_x == 0 || a.dim_y == 0 {
        return Err(Error::Usage(
            "--m, --dim-x and --dim-y must be at least 1".into(),
        ));
    }
    if !(-1.0..=1.0).contains(&a.coupling) {
        return Err(Error::Usage("--coupling must lie in [-1, 1]".into()));
    }
    let calibration: Calibration = match a.generator {
        GeneratorChoice::Gaussian => calibrate_parallel(&gaussian, &kx, &ky, a.alpha, a.trials)?,
        GeneratorChoice::Identical => {
            let (sample, _) = jdd_core::NullGenerator::draw(&gaussian, 0)?;
            calibrate_parallel(&RepeatedSample(sample), &kx, &ky, a.alpha, a.trials)?
        }
        GeneratorChoice::Mnist => {
            let (Some(images), Some(labels)) = (a.images.clone(), a.labels.clone()) else {
                return Err(Error::Usage(
                    "--generator mnist needs --images and --labels".into(),
                ));
            };
            let files = MnistFiles {
                images,
                labels,
                digit: a.digit,
                raw: a.raw,
            };
            let set = load_mnist(&files, &mut manifest)?;
            let generator = MnistNull {
                set: &set,
                digit: a.digit,
                m: a.m,
                seed: a.seed,
                normalize: !a.raw,
            };
            calibrate_parallel(&generator, &kx, &ky, a.alpha, a.trials)?
        }
    };
    let manifest = manifest.with_seed(a.seed);
    with_output(&a.output, out, |w| {
        w.write_all(manifest.render().as_bytes())?;
        writeln!(w, "trial,jdd,critical_value,reject")?;
        for o in &calibration.outcomes {
            writeln!(w, "{},{},{},{}", o.trial, o.jdd, o.critical_value, o.reject)?;
        }
        let threshold = calibration.outcomes[0].critical_value;
        writeln!(w, "rate,,{threshold},{}", calibration.rejection_rate())
    })?;
    Ok(EXIT_OK)
}

fn cmd_rademacher(
    a: RademacherArgs,
    mut manifest: RunManifest,
    out: &mut dyn Write,
) -> Result<i32> {
    let sample = load_sample(&a.p)?;
    manifest.add_input(&a.p)?;
    let (kx, ky) = a.bandwidths.kernels()?;
    let est = rademacher_parallel(&kx, &ky, &sample, a.trials, a.seed)?;
    let jensen = rademacher_jensen_bound(&kx, &ky, &sample)?;
    let uniform = kx.bound().max(ky.bound()) / (sample.len() as f64).sqrt();
    let holds = est.mean <= jensen + 3.0 * est.std_error && jensen <= uniform + 1e-12;
    let manifest = manifest.with_seed(a.seed);
    with_output(&a.output, out, |w| {
        w.write_all(manifest.render().as_bytes())?;
        writeln!(w, "m,mc_mean,mc_std_error,jensen_bound,k_over_sqrt_m")?;
        writeln!(
            w,
            "{},{},{},{},{}",
            sample.len(),
            est.mean,
            est.std_error,
            jensen,
            uniform
        )
    })?;
    if holds {
        Ok(EXIT_OK)
    } else {
        eprintln!("error: Rademacher bound chain violated");
        Ok(EXIT_BOUND_VIOLATION)
    }
}

fn cmd_mnist_sample(
    a: MnistSampleArgs,
    mut manifest: RunManifest,
    out: &mut dyn Write,
) -> Result<i32> {
    let set = load_mnist(&a.mnist, &mut manifest)?;
    let sample = sample_class(&set, a.mnist.digit, a.m, a.rho, a.seed, !a.mnist.raw)?;
    let manifest = manifest.with_seed(a.seed);
    let mut buf = Vec::new();
    write_sample(&mut buf, &sample)?;
    with_output(&a.output, out, |w| {
        w.write_all(manifest.render().as_bytes())?;
        w.write_all(&buf)
    })?;
    Ok(EXIT_OK)
}
