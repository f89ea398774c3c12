//! `qplane`: file-based front end for series arithmetic, q-hulls, the model
//! operator pair and Koszul spectra.

mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qplane_core::catalog::{log_mixture, log_xy, log_xy_series};
use qplane_core::formats::{self, Plane};
use qplane_core::koszul::{self, ScanGrid};
use qplane_core::opcalc::{self, OperatorPair, QFunctionRep, SpectrumMode};
use qplane_core::qalgebra::{self, decompose, qmul, qmul_op, qpow, twist};
use qplane_core::qtopology::{self, QHull, QSet};
use qplane_core::sampling::{random_qseries, SeriesShape};
use qplane_core::{Axis, Complex64, Error, PowMethod, QSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use report::Csv;

#[derive(Parser, Debug)]
#[command(
    name = "qplane",
    version,
    about = "Quantum-plane series, q-hulls, operator calculus and Koszul spectra"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand.
#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Real part of q
    #[arg(long, global = true, default_value_t = 0.5, allow_negative_numbers = true)]
    q_re: f64,
    /// Imaginary part of q
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    q_im: f64,
    /// Truncation degree D of generated series
    #[arg(long, global = true, default_value_t = 32)]
    trunc: usize,
    /// Matrix dimension N of the model pair
    #[arg(long, global = true, default_value_t = 32)]
    n: usize,
    /// Radius for the one-parameter seminorm
    #[arg(long, global = true, default_value_t = 1.0)]
    rho: f64,
    /// x radius for the row seminorm (defaults to --rho)
    #[arg(long, global = true)]
    rho_x: Option<f64>,
    /// y radius for the row seminorm (defaults to --rho)
    #[arg(long, global = true)]
    rho_y: Option<f64>,
    /// Largest power in decay profiles
    #[arg(long, global = true, default_value_t = 8)]
    smax: usize,
    /// Slack allowed on decay ratios
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Relative singular-value threshold for numerical rank
    #[arg(long, global = true, default_value_t = koszul::DEFAULT_RANK_TOL)]
    rank_tol: f64,
    /// Seed for every random draw
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Output path (stdout when absent)
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

impl RunConfig {
    fn q(&self) -> Result<Complex64, Failure> {
        let q = Complex64::new(self.q_re, self.q_im);
        if q.norm() == 0.0 || !q.norm().is_finite() {
            return Err(Failure::input(format!("q must be finite and nonzero, got {q}")));
        }
        Ok(q)
    }

    fn radius(&self, name: &str, value: f64) -> Result<f64, Failure> {
        if value > 0.0 && value.is_finite() {
            Ok(value)
        } else {
            Err(Failure::input(format!("{name} must be positive, got {value}")))
        }
    }

    fn rho(&self) -> Result<f64, Failure> {
        self.radius("rho", self.rho)
    }

    fn rho_xy(&self) -> Result<(f64, f64), Failure> {
        Ok((
            self.radius("rho-x", self.rho_x.unwrap_or(self.rho))?,
            self.radius("rho-y", self.rho_y.unwrap_or(self.rho))?,
        ))
    }

    fn n(&self) -> Result<usize, Failure> {
        if self.n == 0 {
            return Err(Failure::input("n must be at least 1".into()));
        }
        Ok(self.n)
    }

    fn model_pair(&self) -> Result<OperatorPair, Failure> {
        Ok(OperatorPair::model(self.q()?, self.n()?)?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal-ordered product of two series files
    Mul { left: PathBuf, right: PathBuf },
    /// s-th power of a series file
    Pow {
        input: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Method::Repeated)]
        method: Method,
    },
    /// Split into x-part, mixed part and y-part; with --output P writes
    /// P.x.json, P.xy.json and P.y.json
    Decompose { input: PathBuf },
    /// Seminorm at --rho and row seminorm at (--rho-x, --rho-y) as CSV
    Norm { input: PathBuf },
    /// Decay profile of a mixed series as CSV
    Decay { input: PathBuf },
    /// Twisted series, tagged for the opposite plane
    Twist { input: PathBuf },
    /// Membership of points in the q-hull of a disk union, as CSV
    Qhull {
        #[arg(long)]
        disks: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Spiral neighbourhood of a point as a disk-union file
    Spiral {
        #[arg(long, allow_negative_numbers = true)]
        lambda_re: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda_im: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Model operator pair: q-commutation residual and spectrum
    Modelpair {
        #[arg(long, value_enum, default_value_t = Mode::Numerical)]
        mode: Mode,
    },
    /// f(T, S) on the model pair as CSV entries row,col,re,im
    Calc {
        #[command(flatten)]
        source: FunctionSource,
        /// Rows of the built-in example
        #[arg(long, default_value_t = 40)]
        terms: usize,
    },
    /// Eigenvalues of f(T, S) against f(0, q^m); last line max_distance,<v>
    Specmap {
        #[command(flatten)]
        source: FunctionSource,
        /// Rows of the built-in example
        #[arg(long, default_value_t = 40)]
        terms: usize,
        /// Also write the x-branch image f(z, 0), |z| = 1, to this CSV file
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        curve_samples: usize,
    },
    /// Koszul complex at one character: composite defect and homology
    Koszul {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gx_re: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gx_im: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gy_re: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gy_im: f64,
    },
    /// Homology over a grid on one axis, as CSV
    Scan {
        #[arg(long, value_enum)]
        axis: AxisArg,
        #[arg(long, allow_negative_numbers = true)]
        re_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        re_max: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        im_min: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        im_max: f64,
        /// Grid points per dimension
        #[arg(long)]
        steps: usize,
        /// Override of --steps for the real part
        #[arg(long)]
        re_steps: Option<usize>,
        /// Override of --steps for the imaginary part
        #[arg(long)]
        im_steps: Option<usize>,
    },
    /// Seeded random series
    Random {
        #[arg(long, default_value_t = 4)]
        support: usize,
        #[arg(long, default_value_t = 3)]
        max_exponent: usize,
        /// Only monomials x^i y^k with i, k >= 1
        #[arg(long)]
        mixed: bool,
    },
    /// Worked examples as input files
    Example {
        #[arg(value_enum)]
        which: ExampleArg,
        #[arg(long, default_value_t = 40)]
        terms: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct FunctionSource {
    /// Function file with fields q, r_x, r_y, f_list
    #[arg(long)]
    function: Option<PathBuf>,
    /// Polynomial series file, treated as entire
    #[arg(long)]
    series: Option<PathBuf>,
    /// Built-in example
    #[arg(long, value_enum)]
    example: Option<ExampleArg>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Repeated,
    Formula,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Analytic,
    Numerical,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AxisArg {
    X,
    Y,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum ExampleArg {
    /// ln(3/2 + xy)
    LogXy,
    /// ln(3/2 + x) + Σ (2/3)^n (ln(3/2 + 1/n + x) − ln(3/2 + 1/n)) y^n + y/(y − 3/2)
    LogMixture,
}

/// A failed run: exit code plus a one-line reason.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn input(message: String) -> Self {
        Self {
            code: 2,
            kind: "input",
            message,
        }
    }

    fn precondition(kind: &'static str, message: String) -> Self {
        Self { code: 3, kind, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Format(_) | Error::NonFinite(_) => (2, "format"),
            Error::NoConvergence { .. } => (4, "no_convergence"),
            Error::SpectrumOutsideDomain { .. } => (3, "spectrum_outside_domain"),
            Error::SingularResolvent(_) => (3, "singular_resolvent"),
            Error::OffAxis(..) => (3, "off_axis"),
            Error::NotQCommuting { .. } => (3, "not_q_commuting"),
            Error::CapExceeded { .. } => (3, "cap_exceeded"),
            Error::Incompatible(_) => (3, "incompatible"),
            Error::DimensionMismatch { .. } => (3, "dimension_mismatch"),
            Error::Sampling { .. } => (3, "sampling"),
            Error::InvalidArgument(_) => (3, "invalid_argument"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

type Run<T = ()> = Result<T, Failure>;

fn read_text(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn read_series(path: &Path) -> Run<QSeries> {
    Ok(formats::read_series(&read_text(path)?)?.0)
}

fn emit(config: &RunConfig, text: &str) -> Run {
    match &config.output {
        Some(path) => write_file(path, text),
        None => write_stdout(text),
    }
}

/// A closed pipe downstream (e.g. `| head`) is not an error.
fn write_stdout(text: &str) -> Run {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::input(format!("cannot write stdout: {e}"))),
        _ => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> Run {
    fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn emit_series(config: &RunConfig, f: &QSeries, plane: Option<Plane>) -> Run {
    let mut text = formats::write_series(f, plane)?;
    text.push('\n');
    emit(config, &text)
}

fn load_function(config: &RunConfig, source: &FunctionSource, terms: usize) -> Run<QFunctionRep> {
    if let Some(path) = &source.function {
        return Ok(formats::read_function(&read_text(path)?)?);
    }
    if let Some(path) = &source.series {
        let f = read_series(path)?;
        return Ok(QFunctionRep::from_qseries(&f, f64::INFINITY, f64::INFINITY)?);
    }
    let q = config.q()?;
    match source.example.expect("clap requires one source") {
        ExampleArg::LogXy => Ok(log_xy(q, terms)?),
        ExampleArg::LogMixture => Ok(log_mixture(q, terms, config.trunc)?),
    }
}

fn run(cli: Cli) -> Run {
    let cfg = &cli.config;
    match cli.command {
        Command::Mul { left, right } => {
            let (f, pf) = formats::read_series(&read_text(&left)?)?;
            let (g, pg) = formats::read_series(&read_text(&right)?)?;
            let plane = pf.unwrap_or(Plane::Standard);
            if plane != pg.unwrap_or(Plane::Standard) {
                return Err(Failure::precondition(
                    "incompatible",
                    "operands belong to different planes".into(),
                ));
            }
            let fg = match plane {
                Plane::Standard => qmul(&f, &g)?,
                Plane::Opposite => qmul_op(&f, &g)?,
            };
            warn_lossy(&fg);
            emit_series(cfg, &fg, pf)
        }
        Command::Pow { input, s, method } => {
            let method = match method {
                Method::Repeated => PowMethod::Repeated,
                Method::Formula => PowMethod::Formula,
            };
            let f = qpow(&read_series(&input)?, s, method)?;
            warn_lossy(&f);
            emit_series(cfg, &f, None)
        }
        Command::Decompose { input } => cmd_decompose(cfg, &read_series(&input)?),
        Command::Norm { input } => cmd_norm(cfg, &read_series(&input)?),
        Command::Decay { input } => cmd_decay(cfg, &read_series(&input)?),
        Command::Twist { input } => emit_series(cfg, &twist(&read_series(&input)?), Some(Plane::Opposite)),
        Command::Qhull { disks, points } => {
            let hull = QHull::new(formats::read_disks(&read_text(&disks)?)?, cfg.q()?)?;
            let mut csv = Csv::new(&["re", "im", "member"]);
            for z in formats::read_points(&read_text(&points)?)? {
                csv.row(&[z.re.to_string(), z.im.to_string(), hull.contains(z).to_string()]);
            }
            emit(cfg, &csv.finish())
        }
        Command::Spiral {
            lambda_re,
            lambda_im,
            eps,
            delta,
        } => {
            let eps = cfg.radius("eps", eps)?;
            let delta = cfg.radius("delta", delta)?;
            let u = qtopology::spiral_neighborhood(Complex64::new(lambda_re, lambda_im), eps, delta, cfg.q()?)?;
            emit(cfg, &(formats::write_disks(&u)? + "\n"))
        }
        Command::Modelpair { mode } => cmd_modelpair(cfg, mode),
        Command::Calc { source, terms } => {
            let f = load_function(cfg, &source, terms)?;
            for w in opcalc::analytic_domain_warnings(&f) {
                eprintln!("warning: {w}");
            }
            let a = opcalc::calc(&f, &cfg.model_pair()?)?;
            let mut csv = Csv::new(&["row", "col", "re", "im"]);
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    let z = a[(r, c)];
                    csv.row(&[r.to_string(), c.to_string(), z.re.to_string(), z.im.to_string()]);
                }
            }
            emit(cfg, &csv.finish())
        }
        Command::Specmap {
            source,
            terms,
            curve,
            curve_samples,
        } => cmd_specmap(
            cfg,
            &load_function(cfg, &source, terms)?,
            curve.as_deref(),
            curve_samples,
        ),
        Command::Koszul {
            gx_re,
            gx_im,
            gy_re,
            gy_im,
        } => cmd_koszul(cfg, Complex64::new(gx_re, gx_im), Complex64::new(gy_re, gy_im)),
        Command::Scan {
            axis,
            re_min,
            re_max,
            im_min,
            im_max,
            steps,
            re_steps,
            im_steps,
        } => {
            let grid = ScanGrid {
                re_min,
                re_max,
                re_steps: re_steps.unwrap_or(steps),
                im_min,
                im_max,
                im_steps: im_steps.unwrap_or(steps),
            };
            let axis = match axis {
                AxisArg::X => Axis::X,
                AxisArg::Y => Axis::Y,
            };
            let grid_points = grid.points().map_err(|e| Failure::input(e.to_string()))?;
            let rows = if grid_points.is_empty() {
                Vec::new()
            } else {
                koszul::spectrum_scan(&cfg.model_pair()?, axis, &grid, cfg.rank_tol)?
            };
            emit(cfg, &koszul::scan_to_csv(&rows))
        }
        Command::Random {
            support,
            max_exponent,
            mixed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let shape = if mixed { SeriesShape::Mixed } else { SeriesShape::Any };
            let f = random_qseries(&mut rng, cfg.q()?, cfg.trunc, support, max_exponent, shape);
            emit_series(cfg, &f, None)
        }
        Command::Example { which, terms } => {
            let q = cfg.q()?;
            let text = match which {
                ExampleArg::LogXy => formats::write_series(&log_xy_series(q, cfg.trunc)?, None)?,
                ExampleArg::LogMixture => formats::write_function(&log_mixture(q, terms, cfg.trunc)?)?,
            };
            emit(cfg, &(text + "\n"))
        }
    }
}

fn warn_lossy(f: &QSeries) {
    if f.is_lossy() {
        eprintln!("warning: terms beyond truncation degree {} were discarded", f.degree());
    }
}

#[derive(Serialize)]
struct Parts {
    x: formats::SeriesFile,
    xy: formats::SeriesFile,
    y: formats::SeriesFile,
}

fn cmd_decompose(cfg: &RunConfig, f: &QSeries) -> Run {
    let d = decompose(f);
    match &cfg.output {
        Some(prefix) => {
            for (suffix, part) in [("x", &d.x_part), ("xy", &d.mixed), ("y", &d.y_part)] {
                let mut name = prefix.clone().into_os_string();
                name.push(format!(".{suffix}.json"));
                write_file(Path::new(&name), &(formats::write_series(part, None)? + "\n"))?;
            }
            Ok(())
        }
        None => {
            let parts = Parts {
                x: formats::SeriesFile::from_series(&d.x_part, None),
                xy: formats::SeriesFile::from_series(&d.mixed, None),
                y: formats::SeriesFile::from_series(&d.y_part, None),
            };
            let text = serde_json::to_string_pretty(&parts).map_err(|e| Failure::input(e.to_string()))?;
            write_stdout(&(text + "\n"))
        }
    }
}

fn cmd_norm(cfg: &RunConfig, f: &QSeries) -> Run {
    let rho = cfg.rho()?;
    let (rx, ry) = cfg.rho_xy()?;
    let mut csv = Csv::new(&["norm", "rho_x", "rho_y", "value"]);
    csv.row(&[
        "seminorm".into(),
        rho.to_string(),
        rho.to_string(),
        qalgebra::seminorm(f, rho)?.to_string(),
    ]);
    csv.row(&[
        "p_seminorm".into(),
        rx.to_string(),
        ry.to_string(),
        qalgebra::p_seminorm(f, rx, ry)?.to_string(),
    ]);
    emit(cfg, &csv.finish())
}

fn cmd_decay(cfg: &RunConfig, f: &QSeries) -> Run {
    let offending: Vec<String> = f
        .terms()
        .filter(|&(i, k, _)| i == 0 || k == 0)
        .map(|(i, k, _)| format!("x^{i}y^{k}"))
        .collect();
    if !offending.is_empty() {
        return Err(Failure::precondition(
            "not_radical",
            format!("series has non-mixed monomials: {}", offending.join(" ")),
        ));
    }
    if f.q().norm() >= 1.0 {
        return Err(Failure::precondition(
            "not_contractive",
            format!("decay envelope needs |q| < 1, got {}", f.q().norm()),
        ));
    }
    let mut csv = Csv::new(&["s", "root_norm", "bound", "ratio"]);
    let mut worst = 0.0f64;
    if !f.is_zero() {
        let profile = qalgebra::decay_profile(f, cfg.rho()?, cfg.smax)?;
        if profile.lossy {
            eprintln!(
                "warning: powers exceeded truncation degree {}; norms are of truncated powers",
                f.degree()
            );
        }
        for row in &profile.rows {
            let bound = row.bound.expect("contractive q");
            let ratio = row.ratio().expect("contractive q");
            worst = worst.max(ratio);
            csv.row(&[
                row.s.to_string(),
                row.root_norm.to_string(),
                bound.to_string(),
                ratio.to_string(),
            ]);
        }
    }
    emit(cfg, &csv.finish())?;
    if worst > 1.0 + cfg.tol {
        return Err(Failure {
            code: 4,
            kind: "envelope_exceeded",
            message: format!("decay ratio {worst} exceeds 1 + {}", cfg.tol),
        });
    }
    Ok(())
}

fn cmd_modelpair(cfg: &RunConfig, mode: Mode) -> Run {
    let p = cfg.model_pair()?;
    let residual = opcalc::qcommutation_residual(p.t(), p.s(), p.q())?;
    let mut csv = Csv::new(&["branch", "re", "im"]);
    let mode = match mode {
        Mode::Analytic => SpectrumMode::Analytic,
        Mode::Numerical => SpectrumMode::Numerical,
    };
    match opcalc::harte_model_spectrum(p.q(), p.dim(), mode)? {
        s @ opcalc::ModelSpectrum::Analytic { x_disk_radius, .. } => {
            eprintln!("x-branch: closed disk of radius {x_disk_radius}; y-branch: orbit of 1 under q with 0");
            for z in s.y_orbit(p.dim()) {
                csv.row(&["y".into(), z.re.to_string(), z.im.to_string()]);
            }
        }
        opcalc::ModelSpectrum::Numerical { x_branch, y_branch } => {
            for (name, branch) in [("x", x_branch), ("y", y_branch)] {
                for z in branch {
                    csv.row(&[name.into(), z.re.to_string(), z.im.to_string()]);
                }
            }
        }
    }
    eprintln!("q-commutation residual: {residual:e}");
    emit(cfg, &csv.finish())
}

fn cmd_specmap(cfg: &RunConfig, f: &QFunctionRep, curve: Option<&Path>, samples: usize) -> Run {
    for w in opcalc::analytic_domain_warnings(f) {
        eprintln!("warning: {w}");
    }
    let r = opcalc::spectral_mapping_check(f, &cfg.model_pair()?, samples)?;
    let mut csv = Csv::new(&["actual_re", "actual_im", "predicted_re", "predicted_im", "distance"]);
    for row in &r.rows {
        csv.row(&[
            row.actual.re.to_string(),
            row.actual.im.to_string(),
            row.predicted.re.to_string(),
            row.predicted.im.to_string(),
            row.distance.to_string(),
        ]);
    }
    let mut text = csv.finish();
    text.push_str(&format!("max_distance,{}\n", r.max_distance));
    if let Some(path) = curve {
        let mut c = Csv::new(&["z_re", "z_im", "f_re", "f_im"]);
        for (z, v) in &r.x_curve {
            c.row(&[z.re.to_string(), z.im.to_string(), v.re.to_string(), v.im.to_string()]);
        }
        write_file(path, &c.finish())?;
    }
    emit(cfg, &text)
}

fn cmd_koszul(cfg: &RunConfig, gx: Complex64, gy: Complex64) -> Run {
    let p = cfg.model_pair()?;
    let k = koszul::build(&p, gx, gy)?;
    let defect = koszul::composite_defect(&k, p.q())?;
    let mut fields = vec![
        gx.re.to_string(),
        gx.im.to_string(),
        gy.re.to_string(),
        gy.im.to_string(),
        defect.to_string(),
        k.composite_scale().to_string(),
    ];
    if k.on_axis() {
        let h = koszul::homology_dims(&k, cfg.rank_tol)?;
        fields.extend([h.h0, h.h1, h.h2].map(|v| v.to_string()));
        fields.extend([h.member().to_string(), h.stable.to_string()]);
    } else {
        fields.extend(std::iter::repeat_n(String::new(), 5));
    }
    let mut csv = Csv::new(&[
        "gx_re", "gx_im", "gy_re", "gy_im", "defect", "scale", "h0", "h1", "h2", "member", "stable",
    ]);
    csv.row(&fields);
    emit(cfg, &csv.finish())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let message = f.message.replace('\n', " ");
            eprintln!("error kind={} exit={}: {message}", f.kind, f.code);
            ExitCode::from(f.code)
        }
    }
}
