//! `robin-stability` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or a solve
//! breaks down, 2 for invalid input or configuration.

mod args;
mod config;
mod plot;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use robin_core::ball_spectrum::{lambda1_ball, second_radial_mode, BallSpec, RobinParameter};
use robin_core::experiments::{
    load_domain_file, neumann_limit_check, run_corpus, sharpness_sweep, write_csv, CaseRow,
};
use robin_core::geometry::{triangulate, ModeMap, StarDomain2D};
use robin_core::special_fns::unit_ball_volume;
use robin_core::stability_constants::{delta_constant, gamma_constant, keypoint_gap, AsymmetryBudget};
use robin_core::{par, Error};

use args::{BallArgs, Cli, Command, ConstantsArgs, MeshArgs, NeumannArgs, SharpnessArgs, VerifyArgs};
use config::{discretisation, list, FileConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "ROBIN_STABILITY_THREADS";

const DEFAULT_ALPHAS: [f64; 3] = [-0.2, -0.5, -0.8];
const DEFAULT_EPS: [f64; 5] = [0.02, 0.03, 0.05, 0.07, 0.1];
const DEFAULT_NEUMANN_ALPHAS: [f64; 3] = [-1e-2, -1e-3, -1e-4];
const SLOPE_RANGE: (f64, f64) = (1.8, 2.2);
const NEUMANN_GAP: f64 = 1e-2;

/// Invalid input; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Self::Usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::OutOfRange { .. }
            | Error::Domain(_)
            | Error::ModeViolation(_)
            | Error::StarShape { .. }
            | Error::Parse { .. }
            | Error::Io(_) => Self::Usage(e.to_string()),
            _ => Self::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("computation failed: {msg}");
            EXIT_CHECK_FAILED
        }
    }
}

fn execute(cli: Cli) -> Outcome {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| UsageError(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")))?,
        ),
        Err(_) => file.threads,
    };
    par::init_threads(threads);
    match cli.command {
        Command::BallEig(a) => ball_eig(&a),
        Command::Constants(a) => constants(&a),
        Command::Verify(a) => verify(&a, &file),
        Command::Sharpness(a) => sharpness(&a, &file),
        Command::NeumannLimit(a) => neumann(&a, &file),
        Command::MeshDump(a) => mesh_dump(&a, &file),
    }
}

/// Six significant digits for the human-readable summary.
fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor();
    if (-3.0..6.0).contains(&mag) {
        format!("{:.*}", (5.0 - mag) as usize, v)
    } else {
        format!("{v:.5e}")
    }
}

fn ball_eig(a: &BallArgs) -> Outcome {
    let ball = BallSpec::new(a.n, a.radius)?;
    let alpha = RobinParameter::new(a.alpha)?;
    if alpha.value() > 0.0 {
        return Err(Failure::Usage(format!("alpha must be <= 0, got {}", alpha.value())));
    }
    let mode = second_radial_mode(a.n, a.radius * alpha.value())?;
    let lambda2 = mode.lambda / (a.radius * a.radius);
    let lambda1 = lambda1_ball(ball, alpha)?;
    println!("n = {}, R = {}, alpha = {}", a.n, a.radius, a.alpha);
    println!("lambda_1 = {}", sig6(lambda1));
    println!("lambda_2 = {}", sig6(lambda2));
    println!("branch = {:?}, wavenumber = {}", mode.branch, sig6(mode.wavenumber));
    Ok(true)
}

fn constants(a: &ConstantsArgs) -> Outcome {
    let alpha = RobinParameter::new(a.alpha)?;
    let budgets = a.beta.iter().map(|&b| AsymmetryBudget::new(b)).collect::<Result<Vec<_>, _>>()?;
    let c = gamma_constant(a.n, alpha, a.radius)?;
    let delta = delta_constant(a.n)?;
    let volume = unit_ball_volume(a.n) * a.radius.powi(a.n as i32);
    println!("n = {}, R = {}, alpha = {}", a.n, a.radius, a.alpha);
    println!("eta = {}", sig6(c.eta));
    println!("gamma = {}", sig6(c.gamma));
    println!("delta = {}", sig6(delta));
    println!("delta |Omega|^(-2/n) = {}", sig6(delta * volume.powf(-2.0 / a.n as f64)));
    let mut ok = true;
    for beta in budgets {
        let gap = keypoint_gap(a.n, alpha, a.radius, beta)?;
        ok &= gap.holds();
        println!(
            "beta = {}: lhs = {}, rhs = {}, {}",
            beta.value(),
            sig6(gap.lhs),
            sig6(gap.rhs),
            if gap.holds() { "holds" } else { "VIOLATED" }
        );
    }
    Ok(ok)
}

fn collect_domains(a: &VerifyArgs) -> Result<Vec<PathBuf>, Failure> {
    let mut paths = a.domain.clone();
    if let Some(dir) = &a.corpus {
        let mut found: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| UsageError(format!("cannot read corpus {}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect();
        found.sort();
        paths.extend(found);
    }
    if paths.is_empty() {
        return Err(Failure::Usage("no domains given; use --domain or --corpus".into()));
    }
    Ok(paths)
}

fn load(path: &Path) -> Result<StarDomain2D, Failure> {
    load_domain_file(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit_csv(rows: &[CaseRow], path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let f = std::fs::File::create(p)?;
            write_csv(rows, std::io::BufWriter::new(f))?;
        }
        None => {
            let stdout = std::io::stdout();
            write_csv(rows, stdout.lock())?;
        }
    }
    Ok(())
}

fn verify(a: &VerifyArgs, file: &FileConfig) -> Outcome {
    let paths = collect_domains(a)?;
    let alphas = list(&a.alpha, &file.alpha, &DEFAULT_ALPHAS);
    let disc = discretisation(&a.fem, file)?;
    for path in &paths {
        let dom = load(path)?;
        let r = dom.equivalent_ball().radius;
        triangulate(&dom, disc.h).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        for &alpha in &alphas {
            RobinParameter::new(alpha)?
                .check_stability_range(r)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
    }
    let report = run_corpus(&paths, &alphas, disc.h, &disc.settings)?;
    let csv_path = a.csv.as_deref().or(file.csv.as_deref());
    emit_csv(&report.to_rows(), csv_path)?;
    let mut err = std::io::stderr().lock();
    let _ = writeln!(
        err,
        "{} cases, {} failed, {} errors",
        report.rows.len(),
        report.failures(),
        report.errors()
    );
    for row in &report.rows {
        if let Err(msg) = &row.result {
            let _ = writeln!(err, "error: {} alpha = {}: {msg}", row.domain_id, row.alpha);
        }
    }
    if let Some(worst) = report.worst() {
        if let Ok(r) = &worst.result {
            let _ = writeln!(
                err,
                "smallest margin: {} at alpha = {}: margin {} (allowance {})",
                worst.domain_id,
                worst.alpha,
                sig6(r.margin),
                sig6(r.numerical_allowance)
            );
        }
    }
    Ok(report.all_pass())
}

fn parse_mode(spec: &str) -> Result<(u32, f64), UsageError> {
    let bad = || UsageError(format!("mode must look like `m` or `m=c`, got {spec:?}"));
    let (m, c) = match spec.split_once('=') {
        Some((m, c)) => (m.trim(), c.trim().parse::<f64>().map_err(|_| bad())?),
        None => (spec.trim(), 1.0),
    };
    Ok((m.parse().map_err(|_| bad())?, c))
}

fn sharpness(a: &SharpnessArgs, file: &FileConfig) -> Outcome {
    let mut coeffs = ModeMap::new();
    for spec in &a.mode {
        let (m, c) = parse_mode(spec)?;
        *coeffs.entry(m).or_insert(0.0) += c;
    }
    let radius = a.radius.or(file.radius).unwrap_or(1.0);
    let alpha = RobinParameter::new(a.alpha.or(file.alpha.as_ref().and_then(|v| v.first().copied())).unwrap_or(-0.5))?;
    let eps = list(&a.eps, &file.eps, &DEFAULT_EPS);
    let disc = discretisation(&a.fem, file)?;
    let table = sharpness_sweep(&coeffs, radius, alpha, &eps, disc.h, &disc.settings)?;

    let rows = table.to_rows("sharpness");
    emit_csv(&rows, a.csv.as_deref().or(file.csv.as_deref()))?;
    if let Some(path) = a.plot.as_deref().or(file.plot.as_deref()) {
        let points: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.eps, r.deficit)).collect();
        let fit = table.fitted_slope.zip(table.fitted_intercept);
        std::fs::write(path, plot::loglog_svg(&points, fit))?;
    }
    let mut err = std::io::stderr().lock();
    for note in &table.notes {
        let _ = writeln!(err, "note: {note}");
    }
    if let Some(f) = &table.failure {
        let _ = writeln!(err, "sweep stopped: {f}");
    }
    let slope_ok = table.fitted_slope.is_some_and(|s| (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&s));
    match table.fitted_slope {
        Some(s) => {
            let _ = writeln!(err, "fitted slope = {} (expected in [{}, {}])", sig6(s), SLOPE_RANGE.0, SLOPE_RANGE.1);
        }
        None => {
            let _ = writeln!(err, "fitted slope unavailable");
        }
    }
    let rows_ok = rows.iter().all(|r| r.outcome == Ok(true));
    Ok(table.is_complete() && rows_ok && slope_ok)
}

fn neumann(a: &NeumannArgs, file: &FileConfig) -> Outcome {
    let dom = load(&a.domain)?;
    let alphas = list(&a.alpha, &file.alpha, &DEFAULT_NEUMANN_ALPHAS);
    let disc = discretisation(&a.fem, file)?;
    let r = dom.equivalent_ball().radius;
    for &alpha in &alphas {
        RobinParameter::new(alpha)?.check_stability_range(r)?;
    }
    let rep = neumann_limit_check(&dom, &alphas, disc.h, &disc.settings)?;
    let n = &rep.neumann;
    println!("|Omega| = {}, A = {}", sig6(dom.volume()), sig6(n.asymmetry));
    println!("mu_2(B) = {}, mu_2(Omega) = {}", sig6(n.lambda2_ball), sig6(n.lambda2_domain));
    println!(
        "deficit = {}, delta |Omega|^(-2/n) A^2 = {}, allowance = {}",
        sig6(n.deficit),
        sig6(n.gamma * n.asymmetry * n.asymmetry),
        sig6(n.numerical_allowance)
    );
    for ((alpha, gamma), gap) in rep.gammas.iter().zip(&rep.relative_gaps) {
        println!("alpha = {alpha}: gamma = {}, relative gap to limit = {}", sig6(*gamma), sig6(*gap));
    }
    let closest = rep
        .gammas
        .iter()
        .zip(&rep.relative_gaps)
        .min_by(|x, y| x.0 .0.abs().total_cmp(&y.0 .0.abs()))
        .map(|(_, g)| *g)
        .unwrap_or(f64::INFINITY);
    Ok(rep.passes() && closest <= NEUMANN_GAP)
}

fn mesh_dump(a: &MeshArgs, file: &FileConfig) -> Outcome {
    let dom = load(&a.domain)?;
    let h = a.h.or(file.h).unwrap_or(config::DEFAULT_H);
    let mesh = triangulate(&dom, h)?;
    match &a.out {
        Some(p) => mesh.write_dump(std::io::BufWriter::new(std::fs::File::create(p)?))?,
        None => mesh.write_dump(std::io::stdout().lock())?,
    }
    eprintln!(
        "{} vertices, {} triangles, {} boundary edges, max edge {}, min angle {} deg",
        mesh.vertices.len(),
        mesh.triangles.len(),
        mesh.boundary_edges.len(),
        sig6(mesh.h),
        sig6(mesh.min_angle_deg())
    );
    Ok(true)
}
