//! Command-line front end. Every command prints JSON (or CSV for `grid`)
//! to `--output`, stdout by default.
//!
//! Exit codes: 0 success, 2 bad input or parameters, 3 query point (nearly)
//! in the spectrum, 4 growth bound rejected, 5 path search failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use resolvent_growth::growth::{self, GrowthVerdict, SegmentReport};
use resolvent_growth::json;
use resolvent_growth::pseudospectrum::{self, GridBounds, PathOptions, PolyPath};
use resolvent_growth::zoo::{self, WeightSequence};
use resolvent_growth::{ComplexMatrix, Error, GrowthCase, Resolvent, RunConfig};

#[derive(Parser)]
#[command(name = "resolvent", version, about = "Growth of the resolvent norm |(A - zI)^-1| for complex matrices")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// JSON run configuration (tolerances, sampling, seed); missing keys take defaults
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Where to write the result; `-` or absent means stdout
    #[arg(short, long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Override `tol_zero` (growth-case classification threshold)
    #[arg(long, global = true)]
    tol_zero: Option<f64>,
    /// Override `s_seg` (path feasibility samples per segment)
    #[arg(long, global = true)]
    s_seg: Option<usize>,
    /// Override `s_cert` (path certificate samples per segment)
    #[arg(long, global = true)]
    s_cert: Option<usize>,
    /// Override `max_steps` of the path search
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Override the seed used by `examples random`
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Norm, norm-determining vector, alpha/beta/gamma and growth case at z
    Analyze {
        matrix: PathBuf,
        /// Query point as `re,im`
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
    },
    /// Sample a segment in the growth direction and check the growth bound
    Growth(GrowthArgs),
    /// Certified polygonal path inside the epsilon-pseudospectrum to an eigenvalue
    Path {
        matrix: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
    },
    /// sigma_min on a grid of cell centers (CSV) plus a metadata sidecar
    Grid(GridArgs),
    /// Write an example matrix in the matrix JSON format
    Examples {
        #[command(subcommand)]
        which: ExamplesCmd,
    },
    /// Probe a disk around z for a local minimum of the resolvent norm
    Localmin {
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        #[arg(long, default_value_t = 0.05)]
        r0: f64,
        #[arg(long, default_value_t = 6)]
        radii: usize,
        #[arg(long, default_value_t = 16)]
        angles: usize,
    },
    /// Compare |R(zeta) psi|^2 with its second-order model over halving steps
    Taylor {
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        /// Direction angle; defaults to the point's theta0 (0 at a local minimum)
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 1e-2)]
        h0: f64,
        /// Number of halvings plus one
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
}

#[derive(Args)]
struct GrowthArgs {
    matrix: PathBuf,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    z: Complex64,
    /// Segment length; defaults to a quarter of dist(z, spectrum)
    #[arg(long)]
    a0: Option<f64>,
    /// Number of subintervals (samples - 1)
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// Direction angle; required at a local minimum
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Growth case to test (`linear` or `quadratic`); defaults to the classified case
    #[arg(long)]
    expect: Option<GrowthCase>,
    /// Also write the samples as CSV
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    matrix: PathBuf,
    /// `re_min,re_max,im_min,im_max`
    #[arg(long, allow_hyphen_values = true)]
    bounds: String,
    #[arg(long, default_value_t = 200)]
    nx: usize,
    #[arg(long, default_value_t = 200)]
    ny: usize,
    /// Level used for component labeling
    #[arg(long)]
    epsilon: f64,
    /// Metadata path; defaults to `<output>.meta.json`, or stderr when the CSV goes to stdout
    #[arg(long, value_name = "FILE")]
    meta: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExamplesCmd {
    #[command(flatten)]
    Family(Family),
    /// Same families spelled `examples gen <name>`
    Gen {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Subcommand, Clone)]
enum Family {
    /// diag(j + i(-1)^j sqrt(3)/2), j = 1..n
    Remark42 {
        #[arg(long)]
        n: usize,
    },
    /// A = M^-1 for the circulant weighted shift M[j, j-1 mod N] = a_j
    Shift {
        /// Real weights `a_0,a_1,...`
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Vec<f64>,
    },
    /// n x n Jordan block
    Jordan {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true, value_parser = parse_complex)]
        lambda: Complex64,
    },
    /// Diagonal matrix from real parts and optional imaginary parts
    Diagonal {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        re: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        im: Vec<f64>,
    },
    /// Dense matrix with i.i.d. complex normal entries
    Random {
        #[arg(long)]
        n: usize,
        /// Defaults to the configured seed
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected `re,im`, got `{s}`"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("bad real part `{re}`: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("bad imaginary part `{im}`: {e}"))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err("complex value must be finite".into());
    }
    Ok(Complex64::new(re, im))
}

/// Failure carrying an exit code and an optional JSON diagnostic.
struct Failure {
    code: u8,
    message: String,
    diagnostic: Option<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::NearSingular { z, sigma_min } => Failure {
                code: 3,
                message,
                diagnostic: json::to_string(&NearSingularDiag { error: "near_singular", z, sigma_min }).ok(),
            },
            Error::SearchFailure { reason, partial } => Failure {
                code: 5,
                message,
                diagnostic: json::to_string(&SearchFailureDiag { error: "search_failure", reason, partial_path: *partial }).ok(),
            },
            _ => Failure { code: 2, message, diagnostic: None },
        }
    }
}

#[derive(Serialize)]
struct NearSingularDiag {
    error: &'static str,
    #[serde(with = "json::complex")]
    z: Complex64,
    sigma_min: f64,
}

#[derive(Serialize)]
struct SearchFailureDiag {
    error: &'static str,
    reason: String,
    partial_path: PolyPath,
}

#[derive(Serialize)]
struct GrowthOutput {
    #[serde(flatten)]
    report: SegmentReport,
    verdict: GrowthVerdict,
}

#[derive(Serialize)]
struct RandomSidecar {
    algorithm: &'static str,
    n: usize,
    seed: u64,
}

struct Output(Option<PathBuf>);

impl Output {
    fn path(&self) -> Option<&Path> {
        self.0.as_deref().filter(|p| p.as_os_str() != "-")
    }

    fn write(&self, text: &str) -> Result<(), Failure> {
        match self.path() {
            Some(p) => fs::write(p, text).map_err(|e| Failure::from(Error::from(e))),
            None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::from(Error::from(e))),
        }
    }
}

fn load_config(g: &GlobalOpts) -> Result<RunConfig, Error> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = g.tol_zero {
        cfg.tol_zero = v;
    }
    if let Some(v) = g.s_seg {
        cfg.s_seg = v;
    }
    if let Some(v) = g.s_cert {
        cfg.s_cert = v;
    }
    if let Some(v) = g.max_steps {
        cfg.max_steps = v;
    }
    if let Some(v) = g.seed {
        cfg.seed = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = load_config(&cli.global)?;
    let out = Output(cli.global.output);
    let tol = cfg.tolerances();
    match cli.command {
        Command::Analyze { matrix, z } => {
            let a = ComplexMatrix::read_json(matrix)?;
            let res = Resolvent::with_tolerances(&a, tol)?;
            out.write(&res.analyze(z)?.to_json()?)
        }
        Command::Growth(args) => {
            let a = ComplexMatrix::read_json(&args.matrix)?;
            let res = Resolvent::with_tolerances(&a, tol)?;
            let point = res.analyze(args.z)?;
            let theta = args.theta.or(point.theta0).or((point.case == GrowthCase::LocalMinimum).then_some(0.0));
            let report = match args.a0 {
                Some(a0) => growth::sample_segment(&res, &point, a0, args.samples, theta)?,
                None => growth::sample_segment_auto(&res, &point, args.samples, theta)?,
            };
            let expected = args.expect.unwrap_or(match point.case {
                GrowthCase::LinearGrowth => GrowthCase::LinearGrowth,
                _ => GrowthCase::QuadraticGrowth,
            });
            if expected == GrowthCase::LocalMinimum {
                return Err(Error::invalid("--expect takes `linear` or `quadratic`").into());
            }
            if let Some(p) = &args.csv {
                report.write_csv(fs::File::create(p).map_err(Error::from)?)?;
            }
            let verdict = growth::verify_growth_bound(&report, expected);
            let holds = verdict.holds;
            out.write(&json::to_string(&GrowthOutput { report, verdict })?)?;
            if holds {
                Ok(())
            } else {
                Err(Failure { code: 4, message: format!("{} growth bound does not hold on the sampled segment", expected.as_str()), diagnostic: None })
            }
        }
        Command::Path { matrix, epsilon, z } => {
            let a = ComplexMatrix::read_json(matrix)?;
            let res = Resolvent::with_tolerances(&a, tol)?;
            let report = pseudospectrum::find_path(&res, epsilon, z, &PathOptions::from(&cfg))?;
            out.write(&report.to_json()?)
        }
        Command::Grid(args) => {
            let a = ComplexMatrix::read_json(&args.matrix)?;
            let b: Vec<f64> = args
                .bounds
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Error::invalid(format!("bad --bounds `{}`: {e}", args.bounds)))?;
            if b.len() != 4 {
                return Err(Error::invalid("--bounds needs re_min,re_max,im_min,im_max").into());
            }
            let bounds = GridBounds::new(b[0], b[1], b[2], b[3])?;
            let grid = pseudospectrum::grid_sigma_min(&a, bounds, args.nx, args.ny)?;
            let meta = grid.metadata(args.epsilon)?.to_json()?;
            let mut csv = Vec::new();
            grid.write_csv(&mut csv)?;
            out.write(&String::from_utf8(csv).expect("CSV is ASCII"))?;
            let meta_path = args.meta.or_else(|| out.path().map(|p| sidecar(p, "meta.json")));
            match meta_path {
                Some(p) => fs::write(p, meta).map_err(Error::from)?,
                None => eprint!("{meta}"),
            }
            Ok(())
        }
        Command::Examples { which } => {
            let family = match which {
                ExamplesCmd::Family(f) | ExamplesCmd::Gen { family: f } => f,
            };
            let (m, random_meta) = build_example(family, cfg.seed)?;
            out.write(&m.to_json()?)?;
            if let (Some(meta), Some(p)) = (random_meta, out.path()) {
                fs::write(sidecar(p, "meta.json"), json::to_string(&meta)?).map_err(Error::from)?;
            }
            Ok(())
        }
        Command::Localmin { matrix, z, r0, radii, angles } => {
            let a = ComplexMatrix::read_json(matrix)?;
            let res = Resolvent::with_tolerances(&a, tol)?;
            out.write(&growth::local_min_probe(&res, z, r0, radii, angles)?.to_json()?)
        }
        Command::Taylor { matrix, z, theta, h0, count } => {
            let a = ComplexMatrix::read_json(matrix)?;
            let res = Resolvent::with_tolerances(&a, tol)?;
            let point = res.analyze(z)?;
            let theta = theta.or(point.theta0).unwrap_or(0.0);
            let steps = growth::halving_steps(h0, count);
            out.write(&growth::taylor_remainder_check(&res, z, &point.psi, theta, &steps)?.to_json()?)
        }
    }
}

fn build_example(family: Family, default_seed: u64) -> Result<(ComplexMatrix, Option<RandomSidecar>), Error> {
    Ok(match family {
        Family::Remark42 { n } => (zoo::remark42_diagonal(n)?, None),
        Family::Shift { weights } => (zoo::circulant_weighted_shift(&WeightSequence::from_real(&weights)?)?, None),
        Family::Jordan { n, lambda } => (zoo::jordan_block(n, lambda)?, None),
        Family::Diagonal { re, im } => {
            if !im.is_empty() && im.len() != re.len() {
                return Err(Error::invalid("--im must have as many entries as --re"));
            }
            let d: Vec<Complex64> = re.iter().enumerate().map(|(k, &x)| Complex64::new(x, im.get(k).copied().unwrap_or(0.0))).collect();
            (zoo::diagonal_normal(&d)?, None)
        }
        Family::Random { n, seed } => {
            let seed = seed.unwrap_or(default_seed);
            (zoo::random_dense(n, seed)?, Some(RandomSidecar { algorithm: zoo::RANDOM_ALGORITHM, n, seed }))
        }
    })
}

fn sidecar(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(d) = f.diagnostic {
                print!("{d}");
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
