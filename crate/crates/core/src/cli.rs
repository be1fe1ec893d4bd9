//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 invalid input,
//! 3 truncation or convergence failure, 4 zero state, 5 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::fock::DEFAULT_TOLERANCE;
use crate::interferometry::{phase_uncertainty, phase_uncertainty_appendix, phi_grid, PhaseSensitivity};
use crate::output::{format_g12, Cell, Format, Header, Table};
use crate::phase::{
    angular_q, fluctuation_report, phase_dispersion, phase_distribution, Parameter, PhaseDistribution,
};
use crate::states::{build, OperationKind, StateSpec};
use crate::verify::{run_suite, Suite, DEFAULT_SEED};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("density for {label} integrates to {integral}")]
    Normalization { label: String, integral: f64 },
    #[error("{0} verification checks failed")]
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                Error::TruncationOverflow { .. }
                | Error::TruncationFailure { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::ExponentialNotConverged { .. } => 3,
                Error::ZeroState { .. } => 4,
                _ => 2,
            },
            CliError::Io { .. } => 1,
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Normalization { .. } => 3,
            CliError::VerifyFailed(_) => 5,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "fockphase", version, about = "Phase properties of photon added/subtracted displaced Fock states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Phase distribution P(θ) on a uniform grid.
    PhaseDist(DensityArgs),
    /// Angular Q distribution on a uniform grid.
    AngularQ(DensityArgs),
    /// Carruthers–Nieto U, S, Q with the underlying moments.
    Fluctuation(ScalarArgs),
    /// Phase dispersion D.
    Dispersion(ScalarArgs),
    /// Mach–Zehnder phase uncertainty over a φ grid.
    Estimate(EstimateArgs),
    /// Oracle cross-check report.
    Verify(VerifyArgs),
    /// Run a command described by a TOML file of flat key/value pairs.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Inclusive integer list: `3`, `0..3`, `0..=3` or `1,2,5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntList(pub Vec<usize>);

impl FromStr for IntList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("invalid integer list {s:?}");
        let s = s.trim();
        if let Some((lo, hi)) = s.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            if hi < lo {
                return Err(bad());
            }
            return Ok(IntList((lo..=hi).collect()));
        }
        s.split(',')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()
            .map(IntList)
    }
}

/// Inclusive scan `lo:hi:step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scan {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Scan {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

impl FromStr for Scan {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("invalid scan {s:?}, expected lo:hi:step");
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let [lo, hi, step] = parts[..] else { return Err(bad()) };
        if !(step > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
            return Err(bad());
        }
        Ok(Scan { lo, hi, step })
    }
}

#[derive(Args, Clone, Debug)]
pub struct StateArgs {
    /// add (PADFS) or subtract (PSDFS).
    #[arg(long, default_value = "add", value_parser = OperationKind::from_str)]
    pub kind: OperationKind,
    /// Photons added or subtracted.
    #[arg(long, default_value = "0")]
    pub count: IntList,
    /// Fock parameter.
    #[arg(long, default_value = "0")]
    pub n: IntList,
    /// Displacement magnitude |α|.
    #[arg(long, default_value_t = 1.0, conflicts_with = "alpha_scan")]
    pub alpha: f64,
    /// Scan of |α| as lo:hi:step.
    #[arg(long)]
    pub alpha_scan: Option<Scan>,
    /// Displacement phase θ₂.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta2: f64,
}

impl StateArgs {
    fn alphas(&self) -> Vec<f64> {
        self.alpha_scan.map_or_else(|| vec![self.alpha], |s| s.values())
    }

    pub fn specs(&self) -> CliResult<Vec<StateSpec>> {
        let mut specs = Vec::new();
        for &n in &self.n.0 {
            for &count in &self.count.0 {
                for alpha in self.alphas() {
                    let spec = StateSpec::new(self.kind, count, n, alpha, self.theta2);
                    spec.validate()?;
                    specs.push(spec);
                }
            }
        }
        Ok(specs)
    }
}

#[derive(Args, Clone, Debug)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = Format::from_str)]
    pub format: Format,
}

#[derive(Args, Clone, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Number of θ samples (raised to 2·dim when smaller).
    #[arg(long, default_value_t = crate::phase::DEFAULT_GRID)]
    pub grid: usize,
    /// Emit (theta, radius) pairs for a polar display.
    #[arg(long)]
    pub polar: bool,
}

#[derive(Args, Clone, Debug)]
pub struct ScalarArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Direct,
    Appendix,
}

#[derive(Args, Clone, Debug)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, value_enum, default_value_t = Method::Direct)]
    pub method: Method,
    #[arg(long, default_value_t = 256)]
    pub phi_points: usize,
    /// Distance of the φ grid from 0 and π.
    #[arg(long, default_value_t = 0.05)]
    pub phi_margin: f64,
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, default_value = "quick", value_parser = Suite::from_str)]
    pub suite: Suite,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(CliError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::PhaseDist(args) => density(&args, "phase-dist"),
        Command::AngularQ(args) => density(&args, "angular-q"),
        Command::Fluctuation(args) => fluctuation(&args),
        Command::Dispersion(args) => dispersion(&args),
        Command::Estimate(args) => estimate(&args),
        Command::Verify(args) => verify(&args),
        Command::Run { config } => execute(load_config(&config)?.command),
    }
}

/// Turns a flat TOML table into the equivalent argument list.
pub fn config_to_args(text: &str) -> CliResult<Vec<String>> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    let command = match table.get("command") {
        Some(toml::Value::String(c)) => c.clone(),
        _ => return Err(CliError::Config("missing string key `command`".into())),
    };
    if command == "run" {
        return Err(CliError::Config("`run` cannot be nested".into()));
    }
    let mut args = vec!["fockphase".to_string(), command];
    for (key, value) in table.iter().filter(|(k, _)| *k != "command") {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => args.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => args.extend([flag, s.clone()]),
            toml::Value::Integer(i) => args.extend([flag, i.to_string()]),
            toml::Value::Float(x) => args.extend([flag, x.to_string()]),
            _ => return Err(CliError::Config(format!("key `{key}` must be a scalar"))),
        }
    }
    Ok(args)
}

pub fn load_config(path: &Path) -> CliResult<Cli> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(Cli::try_parse_from(config_to_args(&text)?)?)
}

type Field<'a> = (&'a str, &'a dyn Fn(&StateSpec) -> String);

/// Grouping label listing the fields that vary across `specs`.
fn labels(specs: &[StateSpec]) -> Vec<String> {
    let varies = |f: &dyn Fn(&StateSpec) -> String| specs.iter().any(|s| f(s) != f(&specs[0]));
    let fields: [Field; 3] = [
        ("count", &|s| s.count.to_string()),
        ("n", &|s| s.fock_n.to_string()),
        ("alpha", &|s| format_g12(s.alpha_mag)),
    ];
    let mut chosen: Vec<_> = fields.iter().filter(|(_, f)| varies(*f)).collect();
    if chosen.is_empty() {
        chosen = fields.iter().collect();
    }
    specs
        .iter()
        .map(|s| {
            chosen
                .iter()
                .map(|(name, f)| format!("{name}={}", f(s)))
                .collect::<Vec<_>>()
                .join(";")
        })
        .collect()
}

const SPEC_COLUMNS: [&str; 6] = ["param", "kind", "count", "n", "alpha_mag", "alpha_phase"];

fn spec_cells(label: &str, s: &StateSpec) -> Vec<Cell> {
    vec![
        label.into(),
        s.kind.to_string().into(),
        s.count.into(),
        s.fock_n.into(),
        s.alpha_mag.into(),
        s.alpha_phase.into(),
    ]
}

fn columns(extra: &[&'static str]) -> Vec<&'static str> {
    SPEC_COLUMNS.iter().chain(extra).copied().collect()
}

fn emit(table: &Table, out: &OutputArgs) -> CliResult<()> {
    table.write(out.format, out.output.as_deref()).map_err(|source| CliError::Io {
        path: out
            .output
            .as_ref()
            .map_or_else(|| "<stdout>".into(), |p| p.display().to_string()),
        source,
    })
}

fn check_normalized(label: &str, dist: &PhaseDistribution) -> CliResult<()> {
    let integral = dist.integral();
    if (integral - 1.0).abs() > 1e-6 || dist.min_density() < -1e-12 {
        return Err(CliError::Normalization {
            label: label.into(),
            integral,
        });
    }
    Ok(())
}

fn density(args: &DensityArgs, command: &str) -> CliResult<()> {
    let specs = args.state.specs()?;
    let labels = labels(&specs);
    let value_cols = if args.polar { ["theta", "radius"] } else { ["theta", "density"] };
    let mut rows = Vec::new();
    let mut sizes = Vec::new();
    for (spec, label) in specs.iter().zip(&labels) {
        let state = build(spec)?;
        let dist = match command {
            "phase-dist" => phase_distribution(&state, args.grid)?,
            _ => angular_q(&state, args.grid)?,
        };
        check_normalized(label, &dist)?;
        sizes.push(dist.len());
        for (theta, value) in dist.polar_points() {
            let mut row = spec_cells(label, spec);
            row.extend([theta.into(), value.into()]);
            rows.push(row);
        }
    }
    let header = Header::new(command, specs, DEFAULT_TOLERANCE)
        .grid_entry("theta_requested", args.grid)
        .grid_entry("theta_points", sizes)
        .grid_entry("theta_range", "[-pi, pi)");
    let mut table = Table::new(header, &columns(&value_cols));
    rows.into_iter().for_each(|r| table.push(r));
    emit(&table, &args.out)
}

fn parameter_cell(p: Parameter, notes: &mut Vec<String>, name: &str) -> Cell {
    match p {
        Parameter::Defined(v) => v.into(),
        Parameter::Undefined(why) => {
            notes.push(format!("{name}:{why}"));
            "undefined".into()
        }
    }
}

fn fluctuation(args: &ScalarArgs) -> CliResult<()> {
    let specs = args.state.specs()?;
    let labels = labels(&specs);
    let cols = columns(&[
        "mean_n", "var_n", "sin_mean", "cos_mean", "sin_var", "cos_var", "U", "S", "Q", "note",
    ]);
    let mut rows = Vec::new();
    for (spec, label) in specs.iter().zip(&labels) {
        let r = fluctuation_report(&build(spec)?);
        let mut notes = Vec::new();
        let mut row = spec_cells(label, spec);
        row.extend([r.mean_n, r.var_n, r.sin_mean, r.cos_mean, r.sin_var, r.cos_var].map(Cell::from));
        row.push(parameter_cell(r.u, &mut notes, "U"));
        row.push(parameter_cell(r.s, &mut notes, "S"));
        row.push(parameter_cell(r.q, &mut notes, "Q"));
        row.push(notes.join(";").into());
        rows.push(row);
    }
    let mut header = Header::new("fluctuation", specs, DEFAULT_TOLERANCE);
    if let Some(scan) = args.state.alpha_scan {
        header = header.grid_entry("alpha_scan", vec![scan.lo, scan.hi, scan.step]);
    }
    let mut table = Table::new(header, &cols);
    rows.into_iter().for_each(|r| table.push(r));
    emit(&table, &args.out)
}

fn dispersion(args: &ScalarArgs) -> CliResult<()> {
    let specs = args.state.specs()?;
    let labels = labels(&specs);
    let mut rows = Vec::new();
    for (spec, label) in specs.iter().zip(&labels) {
        let mut row = spec_cells(label, spec);
        row.push(phase_dispersion(&build(spec)?).into());
        rows.push(row);
    }
    let mut header = Header::new("dispersion", specs, DEFAULT_TOLERANCE);
    if let Some(scan) = args.state.alpha_scan {
        header = header.grid_entry("alpha_scan", vec![scan.lo, scan.hi, scan.step]);
    }
    let mut table = Table::new(header, &columns(&["D"]));
    rows.into_iter().for_each(|r| table.push(r));
    emit(&table, &args.out)
}

fn estimate(args: &EstimateArgs) -> CliResult<()> {
    if args.phi_points == 0 || !(args.phi_margin > 0.0 && args.phi_margin < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidArgument("phi grid needs points > 0 and margin in (0, π/2)".into()).into());
    }
    let specs = args.state.specs()?;
    let labels = labels(&specs);
    let grid = phi_grid(args.phi_points, args.phi_margin);
    let mut rows = Vec::new();
    for (spec, label) in specs.iter().zip(&labels) {
        let sens: PhaseSensitivity = match args.method {
            Method::Direct => phase_uncertainty(&build(spec)?, &grid)?,
            Method::Appendix => phase_uncertainty_appendix(spec, &grid)?,
        };
        for i in 0..sens.phi.len() {
            let mut row = spec_cells(label, spec);
            row.extend([sens.phi[i], sens.var_jz[i], sens.slope[i].abs(), sens.delta_phi[i]].map(Cell::from));
            rows.push(row);
        }
    }
    let method = match args.method {
        Method::Direct => "direct",
        Method::Appendix => "appendix",
    };
    let header = Header::new("estimate", specs, DEFAULT_TOLERANCE)
        .grid_entry("phi_points", args.phi_points)
        .grid_entry("phi_margin", args.phi_margin)
        .method(method);
    let mut table = Table::new(header, &columns(&["phi", "var_jz", "slope", "delta_phi"]));
    rows.into_iter().for_each(|r| table.push(r));
    emit(&table, &args.out)
}

fn verify(args: &VerifyArgs) -> CliResult<()> {
    let report = run_suite(args.suite, args.seed)?;
    let suite = match args.suite {
        Suite::Quick => "quick",
        Suite::Full => "full",
    };
    let header = Header::new("verify", report.specs.clone(), DEFAULT_TOLERANCE)
        .grid_entry("suite", suite)
        .grid_entry("seed", args.seed)
        .method("oracle");
    let mut table = Table::new(
        header,
        &columns(&["quantity", "value", "reference", "error", "tolerance", "status"]),
    );
    for c in &report.checks {
        let mut row = spec_cells("", &c.spec);
        row.extend([
            c.quantity.clone().into(),
            c.value.into(),
            c.reference.into(),
            c.error().into(),
            c.tolerance.into(),
            if c.passed() { "pass" } else { "fail" }.into(),
        ]);
        table.push(row);
    }
    emit(&table, &args.out)?;
    let failed = report.failures().count();
    eprintln!("{} checks over {} specs, {failed} failed", report.checks.len(), report.specs.len());
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_lists() {
        assert_eq!("0..3".parse::<IntList>().unwrap().0, vec![0, 1, 2, 3]);
        assert_eq!("0..=2".parse::<IntList>().unwrap().0, vec![0, 1, 2]);
        assert_eq!("1,4".parse::<IntList>().unwrap().0, vec![1, 4]);
        assert_eq!("2".parse::<IntList>().unwrap().0, vec![2]);
        assert!("3..1".parse::<IntList>().is_err());
        assert!("x".parse::<IntList>().is_err());
    }

    #[test]
    fn scans() {
        let s: Scan = "0:4:0.05".parse().unwrap();
        let v = s.values();
        assert_eq!(v.len(), 81);
        assert!((v[80] - 4.0).abs() < 1e-12);
        assert!("0:1".parse::<Scan>().is_err());
        assert!("1:0:0.1".parse::<Scan>().is_err());
    }

    #[test]
    fn config_translation() {
        let args = config_to_args("command = \"phase-dist\"\nkind = \"add\"\ncount = \"0..3\"\nalpha = 1.0\npolar = true\ngrid = 128\n")
            .unwrap();
        let cli = Cli::try_parse_from(&args).unwrap();
        match cli.command {
            Command::PhaseDist(d) => {
                assert_eq!(d.state.count.0, vec![0, 1, 2, 3]);
                assert!(d.polar);
                assert_eq!(d.grid, 128);
            }
            other => panic!("{other:?}"),
        }
        assert!(config_to_args("kind = \"add\"").is_err());
        assert!(config_to_args("command = \"dispersion\"\n[nested]\nx = 1").is_err());
    }

    #[test]
    fn labels_track_varying_fields() {
        let specs = vec![StateSpec::padfs(0, 1, 1.0, 0.0), StateSpec::padfs(1, 1, 1.0, 0.0)];
        assert_eq!(labels(&specs), vec!["count=0", "count=1"]);
        assert_eq!(labels(&specs[..1]), vec!["count=0;n=1;alpha=1"]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(Error::ZeroState { norm_sq: 0.0 }).exit_code(), 4);
        assert_eq!(CliError::from(Error::InvalidSpec("x".into())).exit_code(), 2);
        let trunc = Error::TruncationFailure {
            dim: 4096,
            tail_mass: 1.0,
            tolerance: 1e-12,
        };
        assert_eq!(CliError::from(trunc).exit_code(), 3);
        assert_eq!(CliError::VerifyFailed(1).exit_code(), 5);
    }
}
