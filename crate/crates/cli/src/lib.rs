//! Command-line front end: evaluation, density tables, moments, Padé
//! approximants and the verification suites.

pub mod suites;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use stieltjes_hyp::gdensity::QuadratureConfig;
use stieltjes_hyp::hypeval::{eval_series, hyp2f1, hyp2f1_near_one};
use stieltjes_hyp::pade::{convergence_check, moments, pade};
use stieltjes_hyp::stieltjes::{exact_order_test, ContinuousPart, DensitySpec, Representation};
use stieltjes_hyp::{Error, ParameterSet};

pub use suites::{verify_suite, SuiteEntry, Status, VerificationReport, SUITES};

const AFTER_HELP: &str = "\
Complex z is written re+imi (for example 0.5-0.25i). Vectors are comma-separated.
Grids are lo:hi:n (n equally spaced points, both ends included).

CSV columns:
  density   x,value,error       density of the representing measure and an
                                absolute error estimate
  moments   k,exact,quadrature,rel_error
  pade      m,re,im,error       [m+j/m](z) and its distance to F(-z)

Exit codes: 0 success, 1 verification failure or numerical failure, 2 usage error.
STIELTJES_HYP_THREADS caps the worker pool size.";

#[derive(Debug, Parser)]
#[command(name = "stieltjes-hyp", version, about = "Generalized hypergeometric functions through Stieltjes representations", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// F(σ, A; B; −z) (or, with --epsilon, the order test of Φ_ε)
    Eval(EvalArgs),
    /// Density of the representing measure on a grid
    Density(DensityArgs),
    /// Moments m_k: exact values against quadrature
    Moments(MomentArgs),
    /// Padé approximants [m+j/m]
    Pade(PadeArgs),
    /// Verification suites
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Clone)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: f64,
    #[arg(long, value_delimiter = ',', num_args = 1, required = true, allow_hyphen_values = true)]
    pub a: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1, required = true, allow_hyphen_values = true)]
    pub b: Vec<f64>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "tol-abs")]
    pub tol_abs: Option<f64>,
    #[arg(long = "tol-rel")]
    pub tol_rel: Option<f64>,
    /// Abscissa of the vertical contour
    #[arg(long = "contour-c", allow_hyphen_values = true)]
    pub contour_c: Option<f64>,
    /// Truncation height of the vertical contour
    #[arg(long = "contour-T")]
    pub contour_t: Option<f64>,
}

// The vector parsers return Vec<f64> as a single value.
#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Option<Complex64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_parser = parse_grid)]
    pub grid: Grid,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Highest moment index
    #[arg(long, default_value_t = 10)]
    pub m: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct PadeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Largest denominator degree
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub j: i64,
    /// Evaluation point for the convergence curve
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Option<Complex64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated suites, or "all"
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| if i + 1 == self.n { self.hi } else { self.lo + h * i as f64 }).collect()
    }
}


pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid {s:?} is not lo:hi:n"));
    }
    let lo: f64 = parts[0].parse().map_err(|e| format!("bad lo: {e}"))?;
    let hi: f64 = parts[1].parse().map_err(|e| format!("bad hi: {e}"))?;
    let n: usize = parts[2].parse().map_err(|e| format!("bad n: {e}"))?;
    if n == 0 || !(lo <= hi) {
        return Err(format!("grid {s:?} needs lo ≤ hi and n ≥ 1"));
    }
    Ok(Grid { lo, hi, n })
}

/// Parses `re`, `re+imi`, `re-imi`, `imi` and `i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    let bad = || format!("bad complex number {s:?} (expected re+imi)");
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|r| Complex64::new(r, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let im_of = |t: &str| -> Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => Ok(Complex64::new(body[..k].parse::<f64>().map_err(|_| bad())?, im_of(&body[k..])?)),
        None => Ok(Complex64::new(0.0, im_of(body)?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Eval,
    Density,
    Moments,
    Pade,
    Verify,
}

/// Everything a run depends on, in serialisable form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: Option<ParameterSet>,
    pub z: Option<Complex64>,
    pub grid: Option<Grid>,
    pub epsilon: Option<f64>,
    pub m: Option<usize>,
    pub j: Option<i64>,
    pub suite: Vec<String>,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub quadrature: QuadratureConfig,
}

fn quadrature(c: &CommonArgs) -> QuadratureConfig {
    let d = QuadratureConfig::default();
    QuadratureConfig {
        abs_tol: c.tol_abs.unwrap_or(d.abs_tol),
        rel_tol: c.tol_rel.unwrap_or(d.rel_tol),
        contour_offset: c.contour_c.or(d.contour_offset),
        truncation_height: c.contour_t.or(d.truncation_height),
        ..d
    }
}

fn params(p: &ParamArgs) -> Result<ParameterSet, Error> {
    ParameterSet::real(p.sigma, &p.a, &p.b)
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, Error> {
        let base = |command, common: &CommonArgs, default_format| RunConfig {
            command,
            params: None,
            z: None,
            grid: None,
            epsilon: None,
            m: None,
            j: None,
            suite: vec![],
            seed: 0,
            format: common.format.unwrap_or(default_format),
            out: common.out.clone(),
            quadrature: quadrature(common),
        };
        let cfg = match &cli.command {
            Command::Eval(a) => RunConfig {
                params: Some(params(&a.params)?),
                z: a.z,
                epsilon: a.epsilon,
                ..base(CommandKind::Eval, &a.common, Format::Json)
            },
            Command::Density(a) => RunConfig {
                params: Some(params(&a.params)?),
                grid: Some(a.grid),
                ..base(CommandKind::Density, &a.common, Format::Csv)
            },
            Command::Moments(a) => RunConfig {
                params: Some(params(&a.params)?),
                m: Some(a.m),
                ..base(CommandKind::Moments, &a.common, Format::Json)
            },
            Command::Pade(a) => RunConfig {
                params: Some(params(&a.params)?),
                m: Some(a.m),
                j: Some(a.j),
                z: a.z,
                ..base(CommandKind::Pade, &a.common, Format::Json)
            },
            Command::Verify(a) => RunConfig {
                suite: parse_selection(&a.suite)?,
                seed: a.seed,
                ..base(CommandKind::Verify, &a.common, Format::Json)
            },
        };
        cfg.quadrature.validate()?;
        Ok(cfg)
    }
}

pub fn parse_selection(s: &str) -> Result<Vec<String>, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    if s == "all" {
        return Ok(SUITES.iter().map(|x| x.to_string()).collect());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            if SUITES.contains(&t) {
                Ok(t.to_string())
            } else {
                Err(Error::Domain(format!("unknown suite {t:?}; known: {}", SUITES.join(", "))))
            }
        })
        .collect()
}

/// Outcome of a command before it is written out.
enum Output {
    Text(String),
    Failed(String),
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::LengthMismatch { .. } | Error::PoleInDenominator(_) | Error::Domain(_) | Error::Precondition(_)
    )
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn run_eval(cfg: &RunConfig) -> Result<Output, Error> {
    let p = cfg.params.as_ref().expect("params");
    if let Some(eps) = cfg.epsilon {
        let r = exact_order_test(p, eps, 1e5, &cfg.quadrature)?;
        return Ok(Output::Text(json(&r)));
    }
    let z = cfg.z.ok_or_else(|| Error::Domain("eval needs --z".into()))?;
    let (value, method) = match Representation::new(p, &cfg.quadrature) {
        Ok(rep) => (rep.eval(z)?, "integral representation"),
        Err(Error::Precondition(_)) if z.norm() < 1.0 => (eval_series(p, -z, 1e-16)?.value, "series"),
        Err(e) => return Err(e),
    };
    Ok(Output::Text(match cfg.format {
        Format::Json => json(&serde_json::json!({
            "z": [z.re, z.im],
            "value": [value.re, value.im],
            "method": method,
        })),
        Format::Csv => format!("re,im\n{:.17e},{:.17e}\n", value.re, value.im),
    }))
}

fn limit_density_row(s: f64, coef: f64, a1: f64, a2: f64, b1: f64, b2: f64, pref: f64) -> Result<(f64, f64), Error> {
    let (ca, cb) = (b1 - a1 + 1.0, b2 - a1 + 1.0);
    let f = hyp2f1_near_one(ca, cb, 2.0, s)?;
    // second route for the error column
    let g = hyp2f1(ca, cb, 2.0, 1.0 - s).unwrap_or(f);
    let w = pref * coef * s.powf(a2 - 1.0);
    Ok((w * f, (w * (f - g)).abs()))
}

fn run_density(cfg: &RunConfig) -> Result<Output, Error> {
    let p = cfg.params.as_ref().expect("params");
    let xs = cfg.grid.expect("grid").points();
    let rep = Representation::new(p, &cfg.quadrature)?;
    let spec: &DensitySpec = &rep.spec;
    let pref = spec.prefactor.re;
    let rows: Vec<(f64, f64, f64)> = match &spec.continuous {
        ContinuousPart::Kernel => {
            let t = stieltjes_hyp::gdensity::density_table(&spec.kernel, &xs, &cfg.quadrature)?;
            t.iter().map(|r| (r.x, pref * r.value / r.x, (pref * r.error / r.x).abs())).collect()
        }
        ContinuousPart::LimitQ2 { coefficient, a1, a2, b1, b2 } => xs
            .iter()
            .map(|&s| {
                if !(s > 0.0 && s < 1.0) {
                    return Err(Error::Domain(format!("x = {s} outside (0, 1)")));
                }
                let (v, e) = limit_density_row(s, *coefficient, *a1, *a2, *b1, *b2, pref)?;
                Ok((s, v, e))
            })
            .collect::<Result<_, Error>>()?,
        ContinuousPart::None => xs.iter().map(|&s| (s, 0.0, 0.0)).collect(),
    };
    Ok(Output::Text(match cfg.format {
        Format::Csv => {
            let mut s = String::from("x,value,error\n");
            for (x, v, e) in rows {
                s.push_str(&format!("{x:.17e},{v:.17e},{e:.3e}\n"));
            }
            s
        }
        Format::Json => json(&serde_json::json!({
            "measure": spec,
            "rows": rows.iter().map(|(x, v, e)| serde_json::json!({"x": x, "value": v, "error": e})).collect::<Vec<_>>(),
        })),
    }))
}

fn run_moments(cfg: &RunConfig) -> Result<Output, Error> {
    let p = cfg.params.as_ref().expect("params");
    let k_max = cfg.m.unwrap_or(10);
    let exact = moments(p, k_max)?;
    let rep = Representation::order_one(p, &cfg.quadrature)?;
    let rows: Vec<(usize, f64, f64, f64)> = (0..=k_max)
        .map(|k| {
            let q = rep.moment(k as f64).value.re;
            let e = exact.values[k];
            (k, e, q, ((q - e) / e).abs())
        })
        .collect();
    Ok(Output::Text(match cfg.format {
        Format::Csv => {
            let mut s = String::from("k,exact,quadrature,rel_error\n");
            for (k, e, q, r) in rows {
                s.push_str(&format!("{k},{e:.17e},{q:.17e},{r:.3e}\n"));
            }
            s
        }
        Format::Json => json(&serde_json::json!({
            "params": p,
            "moments": rows.iter().map(|(k, e, q, r)| serde_json::json!({"k": k, "exact": e, "quadrature": q, "rel_error": r})).collect::<Vec<_>>(),
        })),
    }))
}

fn run_pade(cfg: &RunConfig) -> Result<Output, Error> {
    let p = cfg.params.as_ref().expect("params");
    let m_max = cfg.m.unwrap_or(4);
    let j = cfg.j.unwrap_or(0);
    let start = if j == -1 { 1 } else { 0 };
    let table = (start..=m_max).map(|m| pade(p, m, j)).collect::<Result<Vec<_>, _>>()?;
    let curve = match cfg.z {
        Some(z) => Some(convergence_check(p, z, m_max.max(1), j, &cfg.quadrature)?),
        None => None,
    };
    Ok(Output::Text(match cfg.format {
        Format::Json => json(&serde_json::json!({
            "params": p,
            "j": j,
            "approximants": table,
            "convergence": curve,
        })),
        Format::Csv => {
            let curve = curve.ok_or_else(|| Error::Domain("CSV output of pade needs --z".into()))?;
            let mut s = String::from("m,re,im,error\n");
            for c in curve {
                s.push_str(&format!("{},{:.17e},{:.17e},{:.3e}\n", c.m, c.value.re, c.value.im, c.error));
            }
            s
        }
    }))
}

fn run_verify(cfg: &RunConfig) -> Result<Output, Error> {
    let report = verify_suite(&cfg.suite, cfg.seed, &cfg.quadrature);
    let text = json(&report);
    if report.all_passed() {
        Ok(Output::Text(text))
    } else {
        Ok(Output::Failed(text))
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("STIELTJES_HYP_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    configure_threads();
    let result = match cfg.command {
        CommandKind::Eval => run_eval(&cfg),
        CommandKind::Density => run_density(&cfg),
        CommandKind::Moments => run_moments(&cfg),
        CommandKind::Pade => run_pade(&cfg),
        CommandKind::Verify => run_verify(&cfg),
    };
    let (text, code) = match result {
        Ok(Output::Text(t)) => (t, 0),
        Ok(Output::Failed(t)) => (t, 1),
        Err(e) => {
            eprintln!("error: {e}");
            return if usage_error(&e) { 2 } else { 1 };
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 1;
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("0.5-0.25i").unwrap(), Complex64::new(0.5, -0.25));
        assert_eq!(parse_complex("-2+i").unwrap(), Complex64::new(-2.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("3i").unwrap(), Complex64::new(0.0, 3.0));
        assert_eq!(parse_complex("1e-3+2e-2i").unwrap(), Complex64::new(1e-3, 2e-2));
        assert!(parse_complex("1+2j").is_err());
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0.01:0.99:99").unwrap();
        let p = g.points();
        assert_eq!(p.len(), 99);
        assert_eq!(p[98], 0.99);
        assert!(parse_grid("1:0:3").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn selection_parsing() {
        assert_eq!(parse_selection("all").unwrap().len(), SUITES.len());
        assert!(parse_selection("").unwrap().is_empty());
        assert!(parse_selection("schur,bogus").is_err());
    }

    #[test]
    fn run_config_round_trips() {
        let cli = Cli::try_parse_from(["x", "pade", "--sigma", "1", "--a", "1", "--b", "2", "--m", "3", "--j", "-1", "--z", "1+0.5i"]).unwrap();
        let cfg = RunConfig::from_cli(&cli).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }
}
