//! Command-line front end. [`run`] parses arguments, writes to the given
//! streams and returns the process exit code: 0 success, 1 usage, 2
//! numerical failure, 3 verification failure.

mod parse;
mod suites;

pub use parse::{parse_complex, parse_grid, resolve_kernel};
pub use suites::{run_suite, CaseResult, Suite, SuiteConfig};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::engine::{continued_l_with, ContourSpec, EngineOptions, PathChoice};
use crate::error::{Result, ZhlError};
use crate::kernels::Kernel;
use crate::numerics::QuadratureSpec;
use crate::zeros::{append_cache, find_zeros, read_cache, spectrum, ScanWindow, ZeroRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Imaginary parts of eigenvalues above this are flagged non-real.
pub const REALITY_TOL: f64 = 2e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "zhl",
    version,
    about = "Zeta families from Mellin transforms: evaluation, zeros, spectra and operator checks",
    after_help = "CSV columns:\n  eval      kernel,z_re,z_im,x,value_re,value_im,est_error,method\n  zeros     kernel,re,im,residual,E_re,E_im,method,verified_count\n  spectrum  n,kernel,z_re,z_im,E_re,E_im,im_abs,real\n  verify    suite,case,residual,tol,pass\n\nZHL_THREADS caps the worker threads."
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    /// Relative tolerance of the integral engine
    #[arg(long, global = true)]
    quad_tol: Option<f64>,
    /// Small-circle radius of a forced Hankel loop
    #[arg(long, global = true)]
    hankel_eps: Option<f64>,
    /// Fixed number of explicit Euler-Maclaurin terms in the reference values
    #[arg(long, global = true)]
    em_terms: Option<usize>,
    /// Leave the timestamp out of JSON output
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Debug, Args)]
struct KernelArgs {
    /// riemann, lambda, chi4, chi3, dirichlet or hecke
    #[arg(long, default_value = "riemann")]
    kernel: String,
    /// Character table (JSON) for --kernel dirichlet
    #[arg(long)]
    character: Option<PathBuf>,
    /// Number of tau coefficients for --kernel hecke
    #[arg(long, default_value_t = 60)]
    tau_count: usize,
}

impl KernelArgs {
    fn kernel(&self) -> Result<Kernel> {
        resolve_kernel(&self.kernel, self.character.as_deref(), self.tau_count)
    }
}

#[derive(Debug, Args)]
struct WindowArgs {
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    sigma: f64,
}

impl WindowArgs {
    fn window(&self) -> Result<Option<ScanWindow>> {
        match (self.t_min, self.t_max) {
            (Some(a), Some(b)) => Ok(Some(ScanWindow::new(a, b, self.step, self.sigma)?)),
            (None, None) => Ok(None),
            _ => Err(ZhlError::InvalidParameter("--t-min and --t-max go together".into())),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate L(f, z, x)
    Eval {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Complex argument, "a+bi"
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        /// Force the Mellin integral or the literal Hankel loop
        #[arg(long, value_enum)]
        force_path: Option<ForcePath>,
    },
    /// Locate zeros on sigma + it
    Zeros {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        window: WindowArgs,
        /// Append the records to this CSV cache
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Eigenvalues E = i(2z - 1) of cached, scanned or listed zeros
    Spectrum {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        from_cache: Option<PathBuf>,
        /// Extra zeros, "a+bi"; repeat or separate with commas
        #[arg(long = "z", allow_hyphen_values = true, value_delimiter = ',')]
        zs: Vec<String>,
    },
    /// Run an invariant suite
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        kernel: KernelArgs,
        /// Test points, "a+bi"; repeat or separate with commas
        #[arg(long = "z", allow_hyphen_values = true, value_delimiter = ',')]
        zs: Vec<String>,
        /// x grid for the eigen suite, min:max:count
        #[arg(long, default_value = "2:8:13")]
        grid: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ForcePath {
    Mellin,
    Hankel,
}

fn exit_code(e: &ZhlError) -> i32 {
    match e {
        ZhlError::InvalidParameter(_) | ZhlError::InvalidCharacter(_) | ZhlError::Parse(_) | ZhlError::Io(_) => {
            EXIT_USAGE
        }
        _ => EXIT_NUMERIC,
    }
}

struct Ctx<'a> {
    format: Format,
    timestamp: Option<u64>,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}")?;
        Ok(())
    }

    fn json<T: Serialize>(&mut self, v: &T) -> Result<()> {
        let mut value = serde_json::to_value(v)?;
        if let (Some(ts), Some(map)) = (self.timestamp, value.as_object_mut()) {
            map.insert("timestamp".into(), ts.into());
        }
        self.line(&serde_json::to_string(&value)?)
    }

    fn csv<T: Serialize>(&mut self, rows: &[T]) -> Result<()> {
        let mut wr = csv::Writer::from_writer(Vec::new());
        for r in rows {
            wr.serialize(r)?;
        }
        let bytes = wr.into_inner().map_err(|e| ZhlError::Io(e.to_string()))?;
        self.out.write_all(&bytes)?;
        Ok(())
    }
}

fn cplx(z: Complex64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

fn engine_options(g: &GlobalArgs) -> Result<EngineOptions> {
    let mut quad = QuadratureSpec::default();
    if let Some(t) = g.quad_tol {
        if !(t >= 1e-15 && t <= 1e-2) {
            return Err(ZhlError::InvalidParameter(format!("--quad-tol {t} outside [1e-15, 1e-2]")));
        }
        quad.rel_tol = t;
    }
    if let Some(eps) = g.hankel_eps {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(ZhlError::InvalidParameter(format!("--hankel-eps {eps} must be positive")));
        }
    }
    if g.em_terms == Some(0) {
        return Err(ZhlError::InvalidParameter("--em-terms must be at least 1".into()));
    }
    Ok(EngineOptions { quad, ..Default::default() })
}

#[derive(Serialize)]
struct EvalRow {
    kernel: String,
    z_re: f64,
    z_im: f64,
    x: f64,
    value_re: f64,
    value_im: f64,
    est_error: f64,
    method: String,
}

#[derive(Serialize)]
struct EvalJson {
    kernel: String,
    z: [f64; 2],
    x: f64,
    value: [f64; 2],
    est_error: f64,
    method: String,
}

#[derive(Serialize)]
struct ZeroRow {
    kernel: String,
    re: f64,
    im: f64,
    residual: f64,
    #[serde(rename = "E_re")]
    e_re: f64,
    #[serde(rename = "E_im")]
    e_im: f64,
    method: String,
    verified_count: i64,
}

impl From<&ZeroRecord> for ZeroRow {
    fn from(r: &ZeroRecord) -> Self {
        ZeroRow {
            kernel: r.kernel.clone(),
            re: r.z.re,
            im: r.z.im,
            residual: r.residual,
            e_re: r.eigenvalue.re,
            e_im: r.eigenvalue.im,
            method: r.method.to_string(),
            verified_count: r.verified_count,
        }
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    n: usize,
    kernel: String,
    z_re: f64,
    z_im: f64,
    #[serde(rename = "E_re")]
    e_re: f64,
    #[serde(rename = "E_im")]
    e_im: f64,
    im_abs: f64,
    real: bool,
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    suite: Suite,
    case: &'a str,
    residual: f64,
    tol: f64,
    pass: bool,
}

fn cmd_eval(ctx: &mut Ctx, g: &GlobalArgs, kernel: &KernelArgs, z: &str, x: f64, force: Option<ForcePath>) -> Result<i32> {
    let k = kernel.kernel()?;
    let z = parse_complex(z)?;
    let mut opts = engine_options(g)?;
    opts.force = force.map(|f| match f {
        ForcePath::Mellin => PathChoice::Mellin,
        ForcePath::Hankel => PathChoice::Hankel,
    });
    if let (Some(eps), Some(PathChoice::Hankel)) = (g.hankel_eps, opts.force) {
        opts.contour = Some(ContourSpec { epsilon: eps, ..ContourSpec::for_kernel(&k, z, x)? });
    }
    let r = continued_l_with(&k, z, x, &opts)?;
    match ctx.format {
        Format::Plain => {
            ctx.line(&format!("value     = {}", cplx(r.value)))?;
            ctx.line(&format!("est_error = {:.3e}", r.est_error))?;
            ctx.line(&format!("method    = {}", r.tag()))?;
        }
        Format::Json => ctx.json(&EvalJson {
            kernel: k.name().into(),
            z: [z.re, z.im],
            x,
            value: [r.value.re, r.value.im],
            est_error: r.est_error,
            method: r.tag(),
        })?,
        Format::Csv => ctx.csv(&[EvalRow {
            kernel: k.name().into(),
            z_re: z.re,
            z_im: z.im,
            x,
            value_re: r.value.re,
            value_im: r.value.im,
            est_error: r.est_error,
            method: r.tag(),
        }])?,
    }
    Ok(EXIT_OK)
}

fn print_zeros(ctx: &mut Ctx, records: &[ZeroRecord]) -> Result<()> {
    match ctx.format {
        Format::Plain => {
            for r in records {
                ctx.line(&format!(
                    "{}  z = {}  |L| = {:.2e}  E = {}  count = {}",
                    r.kernel,
                    cplx(r.z),
                    r.residual,
                    cplx(r.eigenvalue),
                    r.verified_count
                ))?;
            }
            Ok(())
        }
        Format::Json => records.iter().try_for_each(|r| ctx.json(r)),
        Format::Csv => ctx.csv(&records.iter().map(ZeroRow::from).collect::<Vec<_>>()),
    }
}

fn cmd_zeros(ctx: &mut Ctx, err: &mut dyn Write, kernel: &KernelArgs, window: &WindowArgs, cache: Option<&PathBuf>) -> Result<i32> {
    let k = kernel.kernel()?;
    let w = window.window()?.ok_or_else(|| ZhlError::InvalidParameter("zeros needs --t-min and --t-max".into()))?;
    let found = find_zeros(&k, &w)?;
    print_zeros(ctx, &found.records)?;
    if let Some(path) = cache {
        append_cache(path, &found.records)?;
    }
    let mut failed = false;
    for r in &found.rejected {
        writeln!(err, "seed {} rejected: {}", cplx(r.seed), r.reason)?;
        failed |= !r.reason.starts_with("converged outside") && !r.reason.starts_with("winding");
    }
    Ok(if failed { EXIT_NUMERIC } else { EXIT_OK })
}

fn cmd_spectrum(
    ctx: &mut Ctx,
    kernel: &KernelArgs,
    window: &WindowArgs,
    from_cache: Option<&PathBuf>,
    zs: &[String],
) -> Result<i32> {
    let mut records: Vec<ZeroRecord> = Vec::new();
    if let Some(path) = from_cache {
        if !path.exists() {
            return Err(ZhlError::InvalidParameter(format!("cache {} does not exist", path.display())));
        }
        records.extend(read_cache(path)?);
    }
    if let Some(w) = window.window()? {
        records.extend(find_zeros(&kernel.kernel()?, &w)?.records);
    }
    for z in zs {
        let z = parse_complex(z)?;
        records.push(ZeroRecord::new("input", z, f64::NAN, crate::zeros::ZeroMethod::ScanNewton, 0));
    }
    if records.is_empty() {
        return Err(ZhlError::InvalidParameter("no zeros given (use --from-cache, --t-min/--t-max or --z)".into()));
    }
    let spec = spectrum(&records);
    let mut rows: Vec<(usize, &ZeroRecord, _)> = records.iter().zip(spec).enumerate().map(|(i, (r, s))| (i, r, s)).collect();
    rows.sort_by(|a, b| a.2.eigenvalue.norm().total_cmp(&b.2.eigenvalue.norm()).then(a.0.cmp(&b.0)));
    let table: Vec<SpectrumRow> = rows
        .iter()
        .enumerate()
        .map(|(n, (_, r, s))| SpectrumRow {
            n: n + 1,
            kernel: r.kernel.clone(),
            z_re: s.z.re,
            z_im: s.z.im,
            e_re: s.eigenvalue.re,
            e_im: s.eigenvalue.im,
            im_abs: s.reality_defect,
            real: s.reality_defect <= REALITY_TOL,
        })
        .collect();
    match ctx.format {
        Format::Plain => {
            for r in &table {
                let flag = if r.real { "" } else { "  non-real" };
                ctx.line(&format!(
                    "{:>3}  {}  z = {}  E = {}  |Im E| = {:.2e}{flag}",
                    r.n,
                    r.kernel,
                    cplx(Complex64::new(r.z_re, r.z_im)),
                    cplx(Complex64::new(r.e_re, r.e_im)),
                    r.im_abs
                ))?;
            }
        }
        Format::Json => table.iter().try_for_each(|r| ctx.json(r))?,
        Format::Csv => ctx.csv(&table)?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(
    ctx: &mut Ctx,
    err: &mut dyn Write,
    g: &GlobalArgs,
    suite: Suite,
    kernel: &KernelArgs,
    zs: &[String],
    grid: &str,
) -> Result<i32> {
    let k = kernel.kernel()?;
    let zs = if zs.is_empty() { None } else { Some(zs.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>>>()?) };
    let cfg = SuiteConfig {
        kernel: &k,
        zs,
        grid: parse_grid(grid)?,
        opts: engine_options(g)?,
        hankel_eps: g.hankel_eps,
        em_terms: g.em_terms,
    };
    let cases = run_suite(suite, &cfg)?;
    match ctx.format {
        Format::Plain => {
            for c in &cases {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                ctx.line(&format!("{tag}  {:?}  {}  residual {:.3e}  tol {:.0e}", c.suite, c.case, c.residual, c.tol))?;
            }
        }
        Format::Json => cases.iter().try_for_each(|c| ctx.json(c))?,
        Format::Csv => ctx.csv(
            &cases
                .iter()
                .map(|c| VerifyRow { suite: c.suite, case: &c.case, residual: c.residual, tol: c.tol, pass: c.pass })
                .collect::<Vec<_>>(),
        )?,
    }
    let failures: Vec<&CaseResult> = cases.iter().filter(|c| !c.pass).collect();
    if failures.is_empty() {
        return Ok(EXIT_OK);
    }
    let worst = failures.iter().map(|c| c.residual / c.tol).fold(0.0, f64::max);
    writeln!(err, "{} of {} cases failed; worst residual/tol = {worst:.3e}", failures.len(), cases.len())?;
    Ok(EXIT_VERIFY)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    engine_options(g)?;
    let timestamp = if g.no_timestamp {
        None
    } else {
        Some(SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0))
    };
    let mut ctx = Ctx { format: g.format, timestamp, out };
    match &cli.command {
        Command::Eval { kernel, z, x, force_path } => cmd_eval(&mut ctx, g, kernel, z, *x, *force_path),
        Command::Zeros { kernel, window, cache } => cmd_zeros(&mut ctx, err, kernel, window, cache.as_ref()),
        Command::Spectrum { kernel, window, from_cache, zs } => {
            cmd_spectrum(&mut ctx, kernel, window, from_cache.as_ref(), zs)
        }
        Command::Verify { suite, kernel, zs, grid } => cmd_verify(&mut ctx, err, g, *suite, kernel, zs, grid),
    }
}

fn thread_cap() -> std::result::Result<Option<usize>, String> {
    match std::env::var("ZHL_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("ZHL_THREADS must be a positive integer, got {v:?}")),
        },
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let pool = match thread_cap() {
        Ok(cap) => {
            let mut b = rayon::ThreadPoolBuilder::new();
            if let Some(n) = cap {
                b = b.num_threads(n);
            }
            b.build()
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let (result, o, e) = pool.install(|| {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let r = dispatch(&cli, &mut o, &mut e);
        (r, o, e)
    });
    let _ = out.write_all(&o);
    let _ = err.write_all(&e);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["zhl"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn eval_examples() {
        let (code, out, _) = call(&["eval", "--kernel", "riemann", "--z", "2+0i"]);
        assert_eq!(code, 0);
        assert!(out.contains("1.644934066848"), "{out}");
        let (code, out, _) = call(&["eval", "--kernel", "riemann", "--z", "-1+0i"]);
        assert_eq!(code, 0);
        assert!(out.contains("-0.083333333333"), "{out}");
        let (code, _, err) = call(&["eval", "--kernel", "riemann", "--z", "1+0i"]);
        assert_eq!(code, 2);
        assert!(err.contains("pole"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["eval", "--z", "abc"]).0, 1);
        assert_eq!(call(&["eval"]).0, 1);
        assert_eq!(call(&["bogus"]).0, 1);
        assert_eq!(call(&["eval", "--z", "2", "--quad-tol", "0.5"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["spectrum"]).0, 1);
    }

    #[test]
    fn json_is_stable_without_timestamp() {
        let args = ["eval", "--z", "0.5+3i", "--format", "json", "--no-timestamp"];
        let (_, a, _) = call(&args);
        let (_, b, _) = call(&args);
        assert_eq!(a, b);
        assert!(!a.contains("timestamp"));
        let v: serde_json::Value = serde_json::from_str(a.trim()).unwrap();
        assert_eq!(v["method"], "hankel");
        let (_, c, _) = call(&["eval", "--z", "0.5+3i", "--format", "json"]);
        assert!(c.contains("\"timestamp\""));
    }

    #[test]
    fn spectrum_rows() {
        let (code, out, _) =
            call(&["spectrum", "--z", "0.5+14.134725141734693i", "--z", "0.5", "--z", "-2", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "n,kernel,z_re,z_im,E_re,E_im,im_abs,real");
        assert!(lines[1].contains(",0.0,0.0,0.0,true") || lines[1].contains(",0,0,0,true"), "{}", lines[1]);
        assert!(lines[2].ends_with("5.0,false") || lines[2].ends_with("5,false"), "{}", lines[2]);
        assert!(lines[3].contains("-28.26945028346938"), "{}", lines[3]);
    }

    #[test]
    fn verify_functional() {
        let (code, out, _) = call(&["verify", "--suite", "functional"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 20);
        let (code, _, err) = call(&["verify", "--suite", "oracle", "--em-terms", "1", "--z", "-2.5+7i"]);
        assert_eq!(code, 3, "{err}");
    }

    #[test]
    fn bad_thread_cap_is_usage() {
        std::env::set_var("ZHL_THREADS", "zero");
        let code = call(&["eval", "--z", "2"]).0;
        std::env::remove_var("ZHL_THREADS");
        assert_eq!(code, 1);
    }
}
