//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 certification or precondition failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::class::{self, ClassSpec, Target};
use crate::error::{Error, Result};
use crate::inverse::{self, InverseVariant};
use crate::jackson::{self, JacksonSetup};
use crate::moduli;
use crate::parse;
use crate::psi::{self, Upto};
use crate::report::{self, Format, Report, Row};
use crate::spectrum::Spectrum;
use crate::verify::{self, Suite};

/// Environment variable naming a default `key=value` configuration file.
pub const BUDGET_FILE_ENV: &str = "SP_APPROX_BUDGET_FILE";

#[derive(Parser, Debug)]
#[command(name = "sp-approx", version, about = "Approximation quantities in discrete S^p and BS^p metrics")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// `key=value` configuration file (keys: format, output, seed, tol, budget, restarts).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for randomized searches and suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Characteristic sequences (n, eps_n, delta_n).
    Charseq(CharseqArgs),
    /// Class-level best approximations, n-term approximations and widths.
    Class(ClassArgs),
    /// Jackson constant I_{n,phi,p}(tau, v) and its closed form.
    Jackson(JacksonArgs),
    /// Inverse inequality for a spectrum file.
    InverseCheck(InverseArgs),
    /// Generalized and averaged moduli of smoothness.
    Modulus(ModulusArgs),
    /// Oracle-backed verification suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct CharseqArgs {
    /// psi specification, e.g. "product:[pow(-1),pow(-1)]".
    #[arg(long)]
    pub psi: String,
    /// Number of levels.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// sup of E_n over the class, with the level polynomial g_{n-1}.
    Best,
    /// Best n-term approximation of the class.
    Sigma,
    /// Trigonometric and projection widths.
    Width,
    /// Kolmogorov width ladder rung (p = q >= 1).
    Ladder,
}

#[derive(Args, Debug)]
pub struct ClassArgs {
    #[arg(long, value_enum)]
    pub quantity: Quantity,
    #[arg(long, default_value = "explicit:harmonic")]
    pub psi: String,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct JacksonArgs {
    /// phi specification: alpha:a, theta:[...], binomial:m, steklov:m.
    #[arg(long, default_value = "alpha:1")]
    pub phi: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// tau: pi, 3pi/4, or a number.
    #[arg(long, default_value = "pi")]
    pub tau: String,
    /// Weight: cos, t, pwl:file.json, atomic:[[t,w],...].
    #[arg(long, default_value = "cos")]
    pub v: String,
    #[arg(long)]
    pub n: usize,
    /// Ladder: integer, square, perturbed:a, table:[...].
    #[arg(long, default_value = "integer")]
    pub ladder: String,
}

#[derive(Args, Debug)]
pub struct InverseArgs {
    /// Spectrum JSON file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long)]
    pub n: usize,
    /// classic, improved or gap.
    #[arg(long, default_value = "improved")]
    pub variant: String,
    #[arg(long, default_value = "integer")]
    pub ladder: String,
}

#[derive(Args, Debug)]
pub struct ModulusArgs {
    /// Spectrum JSON file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "alpha:1")]
    pub phi: String,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// With a weight, also report the averaged modulus over [0, tau].
    #[arg(long)]
    pub v: Option<String>,
    #[arg(long, default_value = "pi")]
    pub tau: String,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// identities, jackson, inverse, rearrangement, nterm or all.
    pub suite: String,
}

/// Effective settings: configuration files first, then flags.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub format: String,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub tol: f64,
    pub budget: usize,
    pub restarts: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            format: "json".into(),
            output: None,
            seed: 1,
            tol: 1e-10,
            budget: class::SIGMA_BUDGET,
            restarts: 64,
        }
    }
}

impl RunConfig {
    /// Applies a `key=value` file; `#` starts a comment, unknown keys are rejected.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        self.apply_str(&text)
    }

    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", lineno + 1)))?;
            seen.insert(k.trim().to_string(), v.trim().to_string());
        }
        for (k, v) in seen {
            let bad = |what: &str| Error::Parse(format!("config key '{k}': {what}, got '{v}'"));
            match k.as_str() {
                "format" => {
                    Format::parse(&v)?;
                    self.format = v;
                }
                "output" => self.output = Some(PathBuf::from(v)),
                "seed" => self.seed = v.parse().map_err(|_| bad("expected an integer"))?,
                "tol" => {
                    self.tol =
                        v.parse().ok().filter(|t: &f64| *t > 0.0).ok_or_else(|| bad("expected a positive number"))?
                }
                "budget" => {
                    self.budget = v.parse().ok().filter(|b| *b > 0).ok_or_else(|| bad("expected a positive integer"))?
                }
                "restarts" => {
                    self.restarts =
                        v.parse().ok().filter(|b| *b > 0).ok_or_else(|| bad("expected a positive integer"))?
                }
                _ => return Err(Error::Parse(format!("unknown config key '{k}'"))),
            }
        }
        Ok(())
    }
}

/// Outcome of a command: a report and whether a verification failed.
struct Outcome {
    report: Report,
    failed: bool,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let mut cfg = RunConfig::default();
    if let Some(path) = std::env::var_os(BUDGET_FILE_ENV) {
        cfg.apply_file(Path::new(&path))?;
    }
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    if let Some(f) = &cli.format {
        cfg.format = f.clone();
    }
    if let Some(o) = &cli.output {
        cfg.output = Some(o.clone());
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let format = Format::parse(&cfg.format)?;
    let outcome = match &cli.command {
        Command::Charseq(a) => cmd_charseq(a)?,
        Command::Class(a) => cmd_class(a, &cfg)?,
        Command::Jackson(a) => cmd_jackson(a)?,
        Command::InverseCheck(a) => cmd_inverse(a)?,
        Command::Modulus(a) => cmd_modulus(a)?,
        Command::Verify(a) => cmd_verify(a, &cfg)?,
    };
    match &cfg.output {
        Some(path) => {
            let mut buf = Vec::new();
            report::write_report(&outcome.report, format, &mut buf)?;
            std::fs::write(path, buf)?;
        }
        None => report::write_report(&outcome.report, format, out)?,
    }
    Ok(if outcome.failed { 1 } else { 0 })
}

fn ok(report: Report) -> Outcome {
    Outcome { report, failed: false }
}

fn base_dir(path: &Path) -> Option<&Path> {
    path.parent()
}

fn cmd_charseq(a: &CharseqArgs) -> Result<Outcome> {
    if a.count == 0 {
        return Err(Error::domain("count must be at least 1"));
    }
    let psi = parse::parse_psi(&a.psi, None)?;
    let cs = psi::build_charseq(&psi, Upto::Levels(a.count))?;
    #[derive(Serialize)]
    struct Level {
        n: usize,
        eps: f64,
        delta: usize,
    }
    let levels: Vec<Level> = (1..=a.count).map(|n| Level { n, eps: cs.eps(n), delta: cs.delta(n) }).collect();
    let rows = levels.iter().map(|l| Row::new("eps", Some(l.n), l.eps, format!("delta_n = {}", l.delta))).collect();
    Ok(ok(Report::new(&json!({ "psi": a.psi, "levels": levels }), rows)?))
}

fn cmd_class(a: &ClassArgs, cfg: &RunConfig) -> Result<Outcome> {
    let psi = parse::parse_psi(&a.psi, None)?;
    let spec = ClassSpec::new(psi, a.p, a.q)?;
    let r = match a.quantity {
        Quantity::Best => class::class_best_approx(&spec, Target::Level(a.n))?,
        Quantity::Sigma => class::class_sigma_with_budget(&spec, a.n, cfg.budget)?,
        Quantity::Width => class::class_widths(&spec, a.n)?,
        Quantity::Ladder => {
            let step = class::kolmogorov_ladder(&spec, a.n)?;
            let cert = format!("d_N for N in [{}, {}]", step.first, step.last);
            let row =
                Row { regime: Some(spec.regime().as_str().into()), ..Row::new("ladder", Some(a.n), step.value, cert) };
            return Ok(ok(Report::new(&step, vec![row])?));
        }
    };
    Ok(ok(Report::new(&r, vec![Row::from(&r)])?))
}

fn cmd_jackson(a: &JacksonArgs) -> Result<Outcome> {
    let setup = JacksonSetup::new(
        a.n,
        parse::parse_phi(&a.phi)?,
        a.p,
        parse::parse_tau(&a.tau)?,
        parse::parse_weight(&a.v, None)?,
    )?
    .with_ladder(parse::parse_ladder(&a.ladder)?);
    let i = jackson::jackson_i(&setup)?;
    let constant = (setup.mass() / i.value).powf(1.0 / setup.p);
    let closed = jackson::closed_form_constant(&setup);
    let matched = closed.map(|c| (c - constant).abs() <= 1e-9 * c.max(1.0));
    let body = json!({
        "I": i.value,
        "k_star": i.k_star,
        "k_max": i.k_max,
        "constant": constant,
        "closed_form": closed,
        "match": matched,
        "mass": setup.mass(),
        "attained_at_n": i.attained_at_n(),
        "certificate": i.certificate,
    });
    let rows = vec![
        Row::new("I", Some(a.n), i.value, format!("k* = {}; {}", i.k_star, i.certificate)),
        Row::new(
            "constant",
            Some(a.n),
            constant,
            closed.map_or("no closed form".into(), |c| format!("closed form {c}")),
        ),
    ];
    Ok(ok(Report::new(&body, rows)?))
}

fn cmd_inverse(a: &InverseArgs) -> Result<Outcome> {
    let f = Spectrum::read_json(&a.input)?;
    let ladder = parse::parse_ladder(&a.ladder)?;
    let variant = InverseVariant::parse(&a.variant)?;
    let r = inverse::inverse_bound_alpha(&f, a.alpha, a.p, &ladder, a.n, variant)?;
    let body = json!({
        "lhs": r.lhs,
        "rhs": r.rhs,
        "holds": r.holds,
        "ratio_vs_classic": r.ratio_vs_classic,
        "variant": variant,
        "tolerance": { "abs": inverse::HOLDS_ABS, "rel": inverse::HOLDS_REL },
    });
    let cert = format!("variant {}; holds = {}", a.variant, r.holds);
    let rows =
        vec![Row::new("inverse_lhs", Some(a.n), r.lhs, cert.clone()), Row::new("inverse_rhs", Some(a.n), r.rhs, cert)];
    Ok(Outcome { report: Report::new(&body, rows)?, failed: !r.holds })
}

fn cmd_modulus(a: &ModulusArgs) -> Result<Outcome> {
    let f = Spectrum::read_json(&a.input)?;
    let phi = parse::parse_phi(&a.phi)?;
    let profile = moduli::ModulusProfile::new(&f, &phi, a.delta, a.p)?;
    let omega = profile.omega(a.delta);
    let mut rows =
        vec![Row::new("omega", None, omega, format!("grid {} points, golden refinement", profile.grid_points()))];
    let averaged = match &a.v {
        Some(v) => {
            let w = parse::parse_weight(v, base_dir(&a.input))?;
            let tau = parse::parse_tau(&a.tau)?;
            let val = moduli::averaged_omega(&f, &phi, tau, &w, a.delta, a.p)?;
            rows.push(Row::new("averaged_omega", None, val, format!("v = {}, tau = {tau}", w.label())));
            Some(val)
        }
        None => None,
    };
    let body = json!({
        "omega": omega,
        "averaged_omega": averaged,
        "delta": a.delta,
        "p": a.p,
        "phi": phi.label(),
        "grid_points": profile.grid_points(),
    });
    Ok(ok(Report::new(&body, rows)?))
}

fn cmd_verify(a: &VerifyArgs, cfg: &RunConfig) -> Result<Outcome> {
    let suite = Suite::parse(&a.suite)?;
    let r = verify::run_suite(suite, cfg.seed);
    let rows = r
        .checks
        .iter()
        .map(|c| Row::new(format!("{}:{}", c.suite, c.name), None, f64::from(u8::from(c.passed)), c.detail.clone()))
        .collect();
    Ok(Outcome { failed: !r.passed, report: Report::new(&r, rows)? })
}
