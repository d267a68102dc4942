//! Command-line front end.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::certify::{catalog, exit_code, run_suite, Certificate, Suite, SuiteOptions, Verdict};
use crate::error::{Error, Result};
use crate::fields::parse_field;
use crate::frequency::{
    curve, d_boundary, d_d, d_solid, i_boundary, i_prime, i_solid, FrequencyCurve, Psi,
};
use crate::models::SolitonModel;
use crate::numerics::{richardson_diff, GridSpec, NumericsConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "driftfreq",
    version,
    about = "Frequency curves and growth certificates on Gaussian cylinder shrinkers"
)]
pub struct Cli {
    #[command(flatten)]
    pub numerics: NumericsArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct NumericsArgs {
    /// key=value configuration file, applied before the flags below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub quad_rtol: Option<f64>,
    #[arg(long, global = true)]
    pub quad_atol: Option<f64>,
    #[arg(long, global = true)]
    pub ode_tol: Option<f64>,
    /// Relative finite-difference step.
    #[arg(long, global = true)]
    pub fd_step: Option<f64>,
    /// Geometric radial grid lo:hi:points.
    #[arg(long, global = true)]
    pub grid: Option<GridSpec>,
}

impl NumericsArgs {
    pub fn config(&self) -> Result<NumericsConfig> {
        let mut cfg = NumericsConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_config_text(&fs::read_to_string(path)?)?;
        }
        if let Some(v) = self.quad_rtol {
            cfg.quad_rel_tol = v;
        }
        if let Some(v) = self.quad_atol {
            cfg.quad_abs_tol = v;
        }
        if let Some(v) = self.ode_tol {
            cfg.ode_tol = v;
        }
        if let Some(v) = self.fd_step {
            cfg.fd_step_scale = v;
        }
        if let Some(g) = self.grid {
            cfg.r_grid = g;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Model utilities.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Frequency curve as CSV.
    Curve(CurveArgs),
    /// Run certificate suites and print one JSON object per certificate.
    Certify(CertifyArgs),
    /// Identity residuals, boundary/solid equivalences and derivative checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Subcommand)]
pub enum ModelAction {
    /// Residuals of the soliton identities on the grid.
    Verify {
        #[arg(long, default_value = "gc:1:0")]
        model: String,
    },
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, default_value = "gc:1:0")]
    pub model: String,
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// zero | gauss | deficit | const:<c>
    #[arg(long)]
    pub psi: Option<Psi>,
    /// CSV destination; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, default_value = "gc:1:0")]
    pub model: String,
    #[arg(long, required_unless_present = "catalog")]
    pub field: Option<String>,
    /// Run over the built-in catalog instead of a single field.
    #[arg(long)]
    pub catalog: bool,
    /// `all` or a comma list of T11,T13,P31,P41,C42,T43,P53,C12,ASY.
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub psi: Option<Psi>,
    #[arg(long, default_value_t = 6.0)]
    pub r1: f64,
    #[arg(long = "big-r", default_value_t = 20.0)]
    pub big_r: f64,
    /// JSON-lines destination (also printed to stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Restrict to one model.
    #[arg(long)]
    pub model: Option<String>,
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}

pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::ParameterDomain(_)
        | Error::Incompatible { .. }
        | Error::BelowCriticalLevel { .. } => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    let cfg = cli.numerics.config()?;
    match &cli.command {
        Command::Model {
            action: ModelAction::Verify { model },
        } => cmd_model_verify(model, &cfg),
        Command::Curve(a) => cmd_curve(a, &cfg),
        Command::Certify(a) => cmd_certify(a, &cfg),
        Command::Selftest(a) => cmd_selftest(a, &cfg),
    }
}

fn grid_for(model: &SolitonModel, cfg: &NumericsConfig) -> Result<Vec<f64>> {
    crate::certify::certification_grid(model, cfg.r_grid)
}

fn write_sidecar(out: &Path, what: &str, code: i32) -> Result<()> {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let args: Vec<String> = std::env::args().collect();
    let mut path = out.as_os_str().to_owned();
    path.push(".log");
    fs::write(
        PathBuf::from(path),
        format!(
            "timestamp_unix={secs}\ncommand={}\n{what}\nexit_code={code}\n",
            args.join(" ")
        ),
    )?;
    Ok(())
}

fn cmd_model_verify(spec: &str, cfg: &NumericsConfig) -> Result<i32> {
    let model: SolitonModel = spec.parse()?;
    let grid = grid_for(&model, cfg)?;
    let res = model.verify_soliton_identities(&grid)?;
    let ok = res.max() <= 1e-10;
    println!(
        "model {} trace={:.3e} gradient={:.3e} b_laplacian={:.3e} grad_b={:.3e} {}",
        model.spec(),
        res.trace,
        res.gradient,
        res.b_laplacian,
        res.grad_b,
        if ok { "ok" } else { "FAIL" }
    );
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

fn summary_line(c: &FrequencyCurve) -> String {
    let s = c.summary();
    let f = |v: Option<f64>| {
        v.map(|x| format!("{x:.10}"))
            .unwrap_or_else(|| "undefined".into())
    };
    format!(
        "{} {} points={} failed={} U_min={} U_max={} I>0 beyond 2√(n+4λ)={:.6}: {}",
        c.model,
        c.field,
        s.points,
        s.failed,
        f(s.u_min),
        f(s.u_max),
        s.positivity_threshold,
        if s.positive_beyond_threshold {
            "yes"
        } else {
            "no"
        }
    )
}

fn cmd_curve(a: &CurveArgs, cfg: &NumericsConfig) -> Result<i32> {
    let model: SolitonModel = a.model.parse()?;
    let field = parse_field(&a.field, &model, cfg)?;
    let lambda = a.lambda.unwrap_or(field.lambda);
    let grid = grid_for(&model, cfg)?;
    let c = curve(&model, &field, lambda, a.delta, &grid, a.psi, cfg)?;
    let code = if c.failures() > 0 { EXIT_FAIL } else { EXIT_OK };
    let summary = summary_line(&c);
    match &a.out {
        Some(path) => {
            c.write_csv(fs::File::create(path)?)?;
            println!("{summary}");
            write_sidecar(path, &summary, code)?;
        }
        None => {
            c.write_csv(io::stdout().lock())?;
            eprintln!("{summary}");
        }
    }
    Ok(code)
}

fn cmd_certify(a: &CertifyArgs, cfg: &NumericsConfig) -> Result<i32> {
    let base = SuiteOptions {
        suite: a.suite.clone(),
        epsilon: a.epsilon,
        delta: a.delta,
        lambda: a.lambda,
        psi: a.psi,
        r1: a.r1,
        big_r: a.big_r,
        grid: Some(cfg.r_grid),
    };
    let certs: Vec<Certificate> = if a.catalog {
        let groups: Vec<Result<Vec<Certificate>>> = catalog()
            .par_iter()
            .map(|e| {
                let (model, field) = e.build(cfg)?;
                let opts = SuiteOptions {
                    psi: e.psi.or(base.psi),
                    ..base.clone()
                };
                run_suite(&model, &field, &opts, cfg)
            })
            .collect();
        let mut all = Vec::new();
        for g in groups {
            all.extend(g?);
        }
        all
    } else {
        let model: SolitonModel = a.model.parse()?;
        let spec = a
            .field
            .as_deref()
            .expect("clap requires --field without --catalog");
        let field = parse_field(spec, &model, cfg)?;
        run_suite(&model, &field, &base, cfg)?
    };
    let mut json = String::new();
    for c in &certs {
        json.push_str(&c.to_json());
        json.push('\n');
        if !a.catalog {
            eprintln!("{} {} {} {}", c.theorem_id, c.model, c.field, c.verdict());
        }
    }
    if a.catalog {
        let count = |v: Verdict| certs.iter().filter(|c| c.verdict() == v).count();
        eprintln!(
            "catalog: {} certificates, {} pass, {} vacuous, {} fail, {} inconclusive",
            certs.len(),
            count(Verdict::Pass),
            count(Verdict::Vacuous),
            count(Verdict::Fail),
            count(Verdict::Inconclusive)
        );
    }
    io::stdout().lock().write_all(json.as_bytes())?;
    let code = exit_code(&certs);
    if let Some(path) = &a.out {
        fs::write(path, &json)?;
        write_sidecar(path, &format!("certificates={}", certs.len()), code)?;
    }
    Ok(code)
}

const SELFTEST_MODELS: [&str; 5] = ["gc:1:0", "gc:3:0", "gc:5:0", "gc:3:2", "gc:4:1"];
const IDENTITY_TOL: f64 = 1e-10;
const FD_TOL: f64 = 1e-6;

fn selftest_field(model: &SolitonModel) -> String {
    let d = model.euclid_dim();
    if model.k == 0 && d == 1 {
        "hermite:3".into()
    } else if model.k == 0 {
        "radial:2".into()
    } else {
        let ones: Vec<&str> = (0..d).map(|_| "1").collect();
        format!("prod:{}", ones.join(","))
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn cmd_selftest(a: &SelftestArgs, cfg: &NumericsConfig) -> Result<i32> {
    let models: Vec<SolitonModel> = match &a.model {
        Some(m) => vec![m.parse()?],
        None => SELFTEST_MODELS
            .iter()
            .map(|m| m.parse())
            .collect::<Result<_>>()?,
    };
    let equiv_floor = 10.0 * cfg.quad_rel_tol;
    let mut ok = true;
    for model in &models {
        let grid = grid_for(model, cfg)?;
        let id = model.verify_soliton_identities(&grid)?.max();
        let field = parse_field(&selftest_field(model), model, cfg)?;
        let lo = (1.05 * model.b_min()).max(3.0);
        let pts = GridSpec::new(lo, lo.max(12.0) + 1.0, 6)?.points();
        let mut worst_equiv = 0.0_f64;
        let mut worst_fd = 0.0_f64;
        let mut equiv_ok = true;
        let mut fd_ok = true;
        for &r in &pts {
            let ib = i_boundary(model, &field, r)?;
            let is = i_solid(model, &field, r, model.default_r0(), cfg)?;
            let db = d_boundary(model, &field, r)?;
            let ds = d_solid(model, &field, r, cfg)?;
            for (b, s) in [(ib, is), (db, ds)] {
                let diff = rel(b.to_f64(), s.to_f64());
                let budget = 5.0 * (b.rel_err() + s.rel_err()) + equiv_floor;
                worst_equiv = worst_equiv.max(diff);
                equiv_ok &= diff <= budget;
            }
            // The extrapolated difference needs a wider step than the plain one.
            let h = 10.0 * cfg.fd_step_scale;
            let fd_i = richardson_diff(|x| Ok(i_boundary(model, &field, x)?.to_f64()), r, h)?;
            let fd_d = richardson_diff(|x| Ok(d_boundary(model, &field, x)?.to_f64()), r, h)?;
            let an_i = i_prime(model, &field, r)?.to_f64();
            let an_d = d_d(model, &field, r)?.to_f64();
            for (fd, an, scale) in [
                (fd_i.value, an_i, ib.to_f64().abs() / r),
                (fd_d.value, an_d, db.to_f64().abs() / r),
            ] {
                let diff = (fd - an).abs() / an.abs().max(scale).max(f64::MIN_POSITIVE);
                worst_fd = worst_fd.max(diff);
                fd_ok &= diff <= FD_TOL;
            }
        }
        let model_ok = id <= IDENTITY_TOL && equiv_ok && fd_ok;
        ok &= model_ok;
        println!(
            "selftest {} {}: identities {:.3e}, boundary/solid {:.3e}, derivative fd {:.3e} {}",
            model.spec(),
            field.spec(),
            id,
            worst_equiv,
            worst_fd,
            if model_ok { "ok" } else { "FAIL" }
        );
    }
    println!("selftest {}", if ok { "passed" } else { "FAILED" });
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_global_flags_after_subcommand() {
        let cli = Cli::try_parse_from([
            "driftfreq",
            "curve",
            "--field",
            "hermite:2",
            "--grid",
            "3:30:50",
            "--quad-rtol",
            "1e-6",
        ])
        .unwrap();
        let cfg = cli.numerics.config().unwrap();
        assert_eq!(cfg.r_grid.points, 50);
        assert_eq!(cfg.quad_rel_tol, 1e-6);
    }

    #[test]
    fn usage_errors_map_to_two() {
        assert_eq!(main_with_args(["driftfreq", "bogus"]), EXIT_USAGE);
        assert_eq!(error_code(&Error::parse("x", "y")), EXIT_USAGE);
        assert_eq!(
            error_code(&Error::QuadratureFailure {
                a: 0.0,
                b: 1.0,
                estimate: 0.0,
                error: 1.0
            }),
            EXIT_FAIL
        );
    }
}
