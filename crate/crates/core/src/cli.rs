//! Command-line front end. `run` does all the work so it can be driven
//! in-process; the binary only forwards `std::env::args` and exits.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{
    action_of, find_equilibria, find_pure_bne, oracle_gains, quantum_bne, verify_classical, EquilibriumFamily,
    EquilibriumReport, PureEquilibrium, QuantumEquilibrium, Rejection,
};
use crate::game::{GameSpec, PayoffTable, TableKind};
use crate::probset::{BehaviorSet, ChshLabel, StrategyProfile, ValidationReport};
use crate::quantum_source::{generate, DirectionConfig, TwoQubitState};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "bayes-epr", version, about = "Bayesian Battle of Sexes over classical and EPR correlations")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pure equilibria and mixed case analysis, or verify one profile.
    SolveClassical {
        #[arg(long, value_parser = parse_unit)]
        omega: f64,
        /// Strategy profile p,q,p',q' to verify.
        #[arg(long, value_parser = parse_profile, allow_hyphen_values = true)]
        profile: Option<StrategyProfile>,
        /// Preset name or game JSON file; --omega overrides the file's value.
        #[arg(long, default_value = "bos-fig1")]
        game: String,
    },
    /// The equilibrium over EPR behavior sets.
    SolveQuantum {
        #[arg(long, value_parser = parse_unit)]
        omega: f64,
        #[arg(long, default_value = "bos-fig1")]
        game: String,
    },
    /// Behavior set produced by a two-qubit state.
    Generate {
        /// singlet, zerozero, plusminus, or a state JSON file.
        #[arg(long)]
        state: String,
        /// Angles a,c,b,d in radians.
        #[arg(long, value_parser = parse_angles, allow_hyphen_values = true)]
        angles: [f64; 4],
    },
    /// Validate and classify a behavior set file.
    Check {
        #[arg(long)]
        set: PathBuf,
        /// Fail with exit code 3 unless the set is factorizable.
        #[arg(long)]
        factorizable: bool,
    },
    /// Render a payoff table.
    Table {
        #[arg(long, value_parser = clap::value_parser!(TableKindArg))]
        which: TableKindArg,
        #[arg(long, value_parser = parse_unit)]
        omega: f64,
    },
    /// Brute-force deviation gains at a profile.
    Oracle {
        #[arg(long, value_parser = parse_unit)]
        omega: f64,
        #[arg(long, value_parser = parse_profile, allow_hyphen_values = true)]
        profile: StrategyProfile,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
        grid: u32,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct TableKindArg(pub TableKind);

impl std::str::FromStr for TableKindArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(TableKindArg)
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let v = parse_number(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn parse_four(s: &str, each: fn(&str) -> Result<f64, String>) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = s.split(',').map(each).collect::<Result<_, _>>()?;
    parts.try_into().map_err(|v: Vec<f64>| format!("expected 4 comma-separated values, got {}", v.len()))
}

fn parse_profile(s: &str) -> Result<StrategyProfile, String> {
    let v = parse_four(s, parse_unit)?;
    StrategyProfile::from_array(v).map_err(|e| e.to_string())
}

fn parse_angles(s: &str) -> Result<[f64; 4], String> {
    parse_four(s, parse_number)
}

/// Renders with 10 significant digits, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if mantissa.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        return "0".into();
    }
    let s = if (-5..15).contains(&exp) {
        format!("{:.*}", (9 - exp).max(0) as usize, x)
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    };
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn fmt_list(v: &[f64]) -> String {
    format!("({})", v.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(", "))
}

/// A failed invocation: exit code plus message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

fn domain_code(e: &Error) -> i32 {
    match e {
        Error::OutOfRange { .. } | Error::NonFinite { .. } | Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(domain_code(&e), e.to_string())
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("cannot parse {}: {e}", path.display())))
}

fn load_game(name: &str, omega: f64) -> Result<GameSpec, Failure> {
    if let Some(g) = GameSpec::preset(name, omega) {
        return Ok(g?);
    }
    let g: GameSpec = read_json(Path::new(name))?;
    Ok(g.with_omega(omega)?)
}

#[derive(Deserialize)]
struct RawState {
    re: [f64; 4],
    im: [f64; 4],
}

fn load_state(name: &str) -> Result<TwoQubitState, Failure> {
    if let Some(s) = TwoQubitState::preset(name) {
        return Ok(s);
    }
    let raw: RawState = read_json(Path::new(name))?;
    let amps = std::array::from_fn(|k| Complex64::new(raw.re[k], raw.im[k]));
    TwoQubitState::new(amps).map_err(|e| Failure::new(EXIT_DOMAIN, e.to_string()))
}

/// `solve-classical` without a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalSolution {
    pub omega: f64,
    pub pure: Vec<PureEquilibrium>,
    pub families: Vec<EquilibriumFamily>,
}

/// `solve-classical --profile`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Equilibrium { report: EquilibriumReport },
    Rejected { rejection: Rejection },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumSolution {
    pub omega: f64,
    pub equilibrium: QuantumEquilibrium,
    pub class: ChshLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generated {
    pub behavior: BehaviorSet,
    pub delta: f64,
    pub class: ChshLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub valid: bool,
    pub validation: ValidationReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ChshLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginals: Option<StrategyProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorizable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub omega: f64,
    pub profile: StrategyProfile,
    pub grid: u32,
    pub gains: [f64; 4],
    pub certified: bool,
}

/// Parses `args` (including the program name), runs the command and writes
/// results to `out`, diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            if code != EXIT_OK {
                let _ = writeln!(err, "error: check failed");
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    let json = cli.json;
    Ok(match &cli.command {
        Command::SolveClassical { omega, profile, game } => {
            let spec = load_game(game, *omega)?;
            match profile {
                Some(s) => {
                    let v = match verify_classical(&spec, s) {
                        Ok(report) => Verdict::Equilibrium { report },
                        Err(rejection) => Verdict::Rejected { rejection },
                    };
                    (if json { to_json(&v) } else { render_verdict(&v) }, EXIT_OK)
                }
                None => {
                    let sol = ClassicalSolution {
                        omega: *omega,
                        pure: find_pure_bne(&spec),
                        families: find_equilibria(&spec),
                    };
                    (if json { to_json(&sol) } else { render_classical(&sol) }, EXIT_OK)
                }
            }
        }
        Command::SolveQuantum { omega, game } => {
            let spec = load_game(game, *omega)?;
            let eq = quantum_bne(&spec)?;
            let class = crate::probset::classify_delta(eq.report.delta.unwrap_or(f64::NAN)).label;
            let sol = QuantumSolution { omega: *omega, equilibrium: eq, class };
            (if json { to_json(&sol) } else { render_quantum(&sol) }, EXIT_OK)
        }
        Command::Generate { state, angles } => {
            let st = load_state(state)?;
            let [a, c, b, d] = *angles;
            let behavior = generate(&st, &DirectionConfig::from_angles(a, c, b, d));
            let class = behavior.classify()?;
            let g = Generated { behavior, delta: class.delta, class: class.label };
            (if json { to_json(&g) } else { render_generated(&g) }, EXIT_OK)
        }
        Command::Check { set, factorizable } => {
            let set: BehaviorSet = read_json(set)?;
            let validation = set.validate();
            let valid = validation.is_valid();
            let mut res =
                CheckResult { valid, validation, delta: None, class: None, marginals: None, factorizable: None };
            if valid {
                let class = set.classify()?;
                res.delta = Some(class.delta);
                res.class = Some(class.label);
                res.marginals = Some(set.marginals()?);
                res.factorizable = Some(set.is_factorizable()?);
            }
            let ok = valid && (!factorizable || res.factorizable == Some(true));
            let text = if json { to_json(&res) } else { render_check(&res) };
            (text, if ok { EXIT_OK } else { EXIT_DOMAIN })
        }
        Command::Table { which, omega } => {
            let table = GameSpec::bos_fig1(*omega)?.table(which.0);
            (if json { to_json(&table) } else { render_table(&table) }, EXIT_OK)
        }
        Command::Oracle { omega, profile, grid } => {
            let spec = GameSpec::bos_fig1(*omega)?;
            let gains = oracle_gains(&spec, profile, *grid as usize)?;
            let certified = gains.iter().all(|&g| g <= crate::TAU);
            let res = OracleResult { omega: *omega, profile: *profile, grid: *grid, gains, certified };
            (if json { to_json(&res) } else { render_oracle(&res) }, EXIT_OK)
        }
    })
}

fn profile_label(s: &StrategyProfile) -> String {
    let v = s.to_array();
    format!("{{({}, {}), ({}, {})}}", fmt_num(v[0]), fmt_num(v[1]), fmt_num(v[2]), fmt_num(v[3]))
}

fn render_report(out: &mut String, r: &EquilibriumReport) {
    let _ = writeln!(out, "profile  {}", profile_label(&r.profile));
    let _ = writeln!(out, "payoffs  {}", fmt_list(&r.payoffs.as_array()));
    let _ = writeln!(out, "margins  {}", fmt_list(&r.margins));
}

fn render_verdict(v: &Verdict) -> String {
    let mut out = String::new();
    match v {
        Verdict::Equilibrium { report } => {
            let _ = writeln!(out, "equilibrium ({})", report.kind);
            render_report(&mut out, report);
        }
        Verdict::Rejected { rejection } => {
            let _ = writeln!(out, "not an equilibrium");
            let _ = writeln!(out, "profile    {}", profile_label(&rejection.profile));
            let _ = writeln!(out, "gradients  {}", fmt_list(&rejection.gradients.as_array()));
            let _ = writeln!(out, "margins    {}", fmt_list(&rejection.margins));
            for t in rejection.deviators() {
                let _ = writeln!(out, "  {t} gains {}", fmt_num(rejection.margins[t.index()]));
            }
        }
    }
    out
}

fn render_classical(sol: &ClassicalSolution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "omega = {}", fmt_num(sol.omega));
    let _ = writeln!(out, "pure equilibria: {}", sol.pure.len());
    for e in &sol.pure {
        let _ = writeln!(out, "  {}  payoffs {}", e.quadruple, fmt_list(&e.payoffs.as_array()));
    }
    let mixed: Vec<_> = sol.families.iter().filter(|f| !f.is_pure()).collect();
    let _ = writeln!(out, "mixed equilibrium families: {}", mixed.len());
    for f in mixed {
        let shape = if f.is_point() { "point" } else { "convex hull of" };
        let vs: Vec<String> = f.vertices.iter().map(profile_label).collect();
        let _ = writeln!(out, "  {shape} {}", vs.join(" "));
    }
    out
}

fn render_quantum(sol: &QuantumSolution) -> String {
    let mut out = String::new();
    let r = &sol.equilibrium.report;
    let _ = writeln!(out, "omega = {}", fmt_num(sol.omega));
    let _ = writeln!(out, "derivatives  {}", fmt_list(&sol.equilibrium.derivatives));
    let _ = writeln!(out, "marginals    {}", fmt_list(&r.profile.to_array()));
    if let Some(b) = &r.behavior {
        let _ = writeln!(out, "behavior     {}", fmt_list(b.as_array()));
    }
    let _ = writeln!(out, "payoffs      {}", fmt_list(&r.payoffs.as_array()));
    let _ = writeln!(out, "delta        {}", fmt_num(r.delta.unwrap_or(f64::NAN)));
    let _ = writeln!(out, "class        {}", sol.class);
    let verdict = if sol.equilibrium.is_classical_equilibrium() { "yes" } else { "no" };
    let _ = writeln!(out, "classical equilibrium at these marginals: {verdict}");
    out
}

fn render_generated(g: &Generated) -> String {
    let mut out = String::new();
    for block in g.behavior.as_array().chunks(4) {
        let _ = writeln!(out, "{}", block.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join("  "));
    }
    let _ = writeln!(out, "delta  {}", fmt_num(g.delta));
    let _ = writeln!(out, "class  {}", g.class);
    out
}

fn render_check(r: &CheckResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", if r.valid { "valid" } else { "invalid" });
    let _ = writeln!(out, "max residual  {}", fmt_num(r.validation.max_residual));
    for v in &r.validation.violations {
        let _ = writeln!(out, "  violated {}: residual {}", v.constraint, fmt_num(v.residual));
    }
    if let (Some(d), Some(c)) = (r.delta, r.class) {
        let _ = writeln!(out, "delta         {}", fmt_num(d));
        let _ = writeln!(out, "class         {c}");
    }
    if let Some(m) = &r.marginals {
        let _ = writeln!(out, "marginals     {}", fmt_list(&m.to_array()));
    }
    if let Some(f) = r.factorizable {
        let _ = writeln!(out, "{}", if f { "factorizable" } else { "not factorizable" });
    }
    out
}

fn render_table(t: &PayoffTable) -> String {
    let cell = |v: &Vec<f64>| {
        if v.len() == 1 {
            fmt_num(v[0])
        } else {
            fmt_list(v)
        }
    };
    let rows: Vec<Vec<String>> = t.cells.iter().map(|r| r.iter().map(cell).collect()).collect();
    let label_w = t.row_labels.iter().map(String::len).max().unwrap_or(0);
    let col_w: Vec<usize> = (0..t.col_labels.len())
        .map(|j| rows.iter().map(|r| r[j].len()).chain([t.col_labels[j].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "{} (omega = {})", t.name, fmt_num(t.omega));
    let _ = write!(out, "{:label_w$}", "");
    for (j, l) in t.col_labels.iter().enumerate() {
        let _ = write!(out, "  {:>w$}", l, w = col_w[j]);
    }
    out.push('\n');
    for (i, r) in rows.iter().enumerate() {
        let _ = write!(out, "{:label_w$}", t.row_labels[i]);
        for (j, c) in r.iter().enumerate() {
            let _ = write!(out, "  {:>w$}", c, w = col_w[j]);
        }
        out.push('\n');
    }
    out
}

fn render_oracle(r: &OracleResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "profile    {}", profile_label(&r.profile));
    let _ = writeln!(out, "grid       {}", r.grid);
    let _ = writeln!(out, "gains      {}", fmt_list(&r.gains));
    let actions: Vec<String> =
        r.profile.to_array().iter().map(|&x| action_of(x).map_or("mixed".to_string(), |a| a.to_string())).collect();
    let _ = writeln!(out, "actions    {}", actions.join(" "));
    let _ = writeln!(out, "{}", if r.certified { "certified" } else { "not certified" });
    out
}
