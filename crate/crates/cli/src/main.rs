use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::builder::PossibleValuesParser;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use phasequant::config::{DEFAULT_DEGREE_CAP, DEFAULT_MAX_MODES, DEFAULT_NODES};
use phasequant::phase_space::{exact_q_average, marginal_samples, phase_space_grid};
use phasequant::quantize::{convert_scheme, quantize_with_cap, symbol_of, Scheme};
use phasequant::state_literal::{parse_state, CutoffChoice, StateRequest};
use phasequant::symbol::{parse_symbol_with_cap, PhaseSymbol, VariableConvention};
use phasequant::verify::{run, Suite, VerifyOptions};
use phasequant::{expectation, Error, FockState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Weyl,
    Wick,
    Antiwick,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Weyl => Scheme::Weyl,
            SchemeArg::Wick => Scheme::Wick,
            SchemeArg::Antiwick => Scheme::AntiWick,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Xp,
    Alpha,
    Bargmann,
}

impl From<ConventionArg> for VariableConvention {
    fn from(c: ConventionArg) -> VariableConvention {
        match c {
            ConventionArg::Xp => VariableConvention::Xp,
            ConventionArg::Alpha => VariableConvention::Alpha,
            ConventionArg::Bargmann => VariableConvention::Bargmann,
        }
    }
}

/// Quantization of polynomial phase-space observables and Husimi Q checks.
#[derive(Debug, Parser)]
#[command(name = "phasequant", version)]
struct Cli {
    /// Value of hbar (default 1).
    #[arg(long, global = true)]
    hbar: Option<f64>,
    /// Fock cutoff per mode: `auto` or a positive integer.
    #[arg(long, global = true)]
    cutoff: Option<String>,
    /// Gauss-Hermite nodes per dimension.
    #[arg(long, global = true)]
    nodes: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized verification.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest per-mode polynomial degree accepted.
    #[arg(long = "degree-cap", global = true)]
    degree_cap: Option<u32>,
    /// Mode count for expressions and for `vacuum`.
    #[arg(long, global = true)]
    modes: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the normal-ordered operator of a symbol.
    Quantize {
        expr: String,
        #[arg(long, value_enum, default_value = "weyl")]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value = "xp")]
        convention: ConventionArg,
        /// Also print the operator's symbol under this scheme.
        #[arg(long = "as-symbol", value_enum)]
        as_symbol: Option<SchemeArg>,
    },
    /// Expectation value by the Hilbert-space and Q-average routes.
    Expect {
        expr: String,
        #[arg(long, value_enum, default_value = "antiwick")]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value = "xp")]
        convention: ConventionArg,
        #[arg(long)]
        state: String,
    },
    /// Dump Q, W and smoothed W on a square (x, p) grid.
    Qgrid {
        #[arg(long)]
        state: String,
        /// Points per axis (default 41).
        #[arg(long)]
        points: Option<usize>,
        /// Half-width of the grid (default 4 sqrt(hbar)).
        #[arg(long)]
        extent: Option<f64>,
    },
    /// Dump the Q position marginal next to the Born density.
    Marginal {
        #[arg(long)]
        state: String,
        /// Sample count (default 201).
        #[arg(long)]
        points: Option<usize>,
        /// Half-width of the sample range (default 6 sqrt(hbar)).
        #[arg(long)]
        extent: Option<f64>,
    },
    /// Run a verification suite and print its report.
    Verify {
        #[arg(value_parser = PossibleValuesParser::new(Suite::ALL.map(|s| s.name())))]
        suite: String,
        /// Include wall-clock time per check.
        #[arg(long)]
        timing: bool,
    },
}

/// Effective settings after merging flags, config file and defaults.
#[derive(Debug, Clone)]
struct Settings {
    hbar: f64,
    cutoff: CutoffChoice,
    nodes: usize,
    format: Option<Format>,
    seed: u64,
    degree_cap: u32,
    modes: Option<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            hbar: 1.0,
            cutoff: CutoffChoice::Auto,
            nodes: DEFAULT_NODES,
            format: None,
            seed: 0,
            degree_cap: DEFAULT_DEGREE_CAP,
            modes: None,
        }
    }
}

fn parse_positive<T: std::str::FromStr + PartialOrd + Default>(key: &str, value: &str) -> Result<T> {
    let v: T = value
        .parse()
        .map_err(|_| anyhow!("`{key}` expects a positive number, got `{value}`"))?;
    if v.partial_cmp(&T::default()) != Some(std::cmp::Ordering::Greater) {
        bail!("`{key}` must be positive, got `{value}`");
    }
    Ok(v)
}

impl Settings {
    fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| anyhow!("{}:{}: expected `key = value`", path.display(), lineno + 1))?;
            self.set(key, value)
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "hbar" => self.hbar = parse_positive(key, value)?,
            "cutoff" => self.cutoff = value.parse()?,
            "nodes" => self.nodes = parse_positive(key, value)?,
            "format" => {
                self.format = Some(Format::from_str(value, true).map_err(|_| anyhow!("unknown format `{value}`"))?)
            }
            "seed" => self.seed = value.parse().map_err(|_| anyhow!("`seed` expects an integer"))?,
            "degree-cap" => self.degree_cap = parse_positive(key, value)?,
            "modes" => self.modes = Some(parse_positive(key, value)?),
            _ => bail!("unknown config key `{key}`"),
        }
        Ok(())
    }

    fn from_cli(cli: &Cli) -> Result<Settings> {
        let mut s = Settings::default();
        if let Some(path) = &cli.config {
            s.apply_file(path)?;
        }
        if let Some(h) = cli.hbar {
            s.set("hbar", &h.to_string())?;
        }
        if let Some(c) = &cli.cutoff {
            s.set("cutoff", c)?;
        }
        if let Some(n) = cli.nodes {
            s.set("nodes", &n.to_string())?;
        }
        if cli.format.is_some() {
            s.format = cli.format;
        }
        if let Some(seed) = cli.seed {
            s.seed = seed;
        }
        if let Some(d) = cli.degree_cap {
            s.set("degree-cap", &d.to_string())?;
        }
        if let Some(m) = cli.modes {
            s.set("modes", &m.to_string())?;
        }
        if s.modes.is_some_and(|m| m > DEFAULT_MAX_MODES) {
            bail!("at most {DEFAULT_MAX_MODES} modes are supported");
        }
        Ok(s)
    }
}

/// Parses `text`, growing the mode count to the highest variable index used.
fn parse_expr(text: &str, modes: usize, convention: VariableConvention, cap: u32) -> Result<PhaseSymbol> {
    let mut modes = modes;
    loop {
        match parse_symbol_with_cap(text, modes, convention, cap) {
            Err(Error::ModeIndex { index, .. }) if index > modes && index <= DEFAULT_MAX_MODES => modes = index,
            other => return Ok(other?),
        }
    }
}

fn complex_text(c: Complex64) -> String {
    format!("{}{}{}i", c.re, if c.im < 0.0 || c.im.is_sign_negative() { "-" } else { "+" }, c.im.abs())
}

fn build_state(literal: &str, settings: &Settings, default_modes: usize, margin: usize) -> Result<FockState> {
    let state = parse_state(
        literal,
        &StateRequest {
            default_modes,
            cutoff: settings.cutoff,
            hbar: settings.hbar,
            margin,
        },
    )?;
    if state.mode_count() > DEFAULT_MAX_MODES {
        bail!("at most {DEFAULT_MAX_MODES} modes are supported");
    }
    Ok(state)
}

fn cmd_quantize(
    settings: &Settings,
    expr: &str,
    scheme: Scheme,
    convention: VariableConvention,
    as_symbol: Option<Scheme>,
) -> Result<String> {
    let f = parse_expr(expr, settings.modes.unwrap_or(1), convention, settings.degree_cap)?;
    let op = quantize_with_cap(&f, scheme, settings.degree_cap)?;
    let symbol = as_symbol.map(|s| symbol_of(&op, s));
    Ok(match settings.format.unwrap_or(Format::Pretty) {
        Format::Pretty => {
            let mut out = format!("{}\n", op.pretty());
            if let (Some(s), Some(sym)) = (as_symbol, &symbol) {
                out.push_str(&format!("{s} symbol: {}\n", sym.pretty()));
            }
            out
        }
        Format::Json => {
            let mut obj = serde_json::json!({
                "expr": expr,
                "scheme": scheme,
                "operator": op.pretty(),
            });
            if let (Some(s), Some(sym)) = (as_symbol, &symbol) {
                obj["symbolScheme"] = serde_json::json!(s);
                obj["symbol"] = serde_json::json!(sym.pretty());
            }
            format!("{}\n", serde_json::to_string_pretty(&obj)?)
        }
        Format::Csv => {
            let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
            match (as_symbol, &symbol) {
                (Some(s), Some(sym)) => format!(
                    "scheme,operator,symbol_scheme,symbol\n{scheme},{},{s},{}\n",
                    quote(&op.pretty()),
                    quote(&sym.pretty())
                ),
                _ => format!("scheme,operator\n{scheme},{}\n", quote(&op.pretty())),
            }
        }
    })
}

fn cmd_expect(
    settings: &Settings,
    expr: &str,
    scheme: Scheme,
    convention: VariableConvention,
    literal: &str,
) -> Result<String> {
    let probe = parse_expr(expr, settings.modes.unwrap_or(1), convention, settings.degree_cap)?;
    let margin = probe.max_mode_degree() as usize;
    let state = build_state(literal, settings, probe.mode_count(), margin)?;
    let f = parse_expr(expr, state.mode_count(), convention, settings.degree_cap)?;
    if f.mode_count() != state.mode_count() {
        bail!(
            "expression uses {} modes but the state has {}",
            f.mode_count(),
            state.mode_count()
        );
    }
    let hilbert = expectation(&state, &quantize_with_cap(&f, scheme, settings.degree_cap)?)?;
    let q_route = exact_q_average(&convert_scheme(&f, scheme, Scheme::AntiWick)?, &state)?;
    let deviation = (hilbert - q_route).norm();
    Ok(match settings.format.unwrap_or(Format::Pretty) {
        Format::Pretty => format!(
            "hilbert:   {}\nq-average: {}\ndeviation: {deviation:e}\n",
            complex_text(hilbert),
            complex_text(q_route)
        ),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::json!({
                "expr": expr,
                "scheme": scheme,
                "hbar": settings.hbar,
                "cutoff": state.cutoffs(),
                "hilbert": [hilbert.re, hilbert.im],
                "qAverage": [q_route.re, q_route.im],
                "deviation": deviation,
            }))?
        ),
        Format::Csv => format!(
            "hilbert_re,hilbert_im,qavg_re,qavg_im,deviation\n{:?},{:?},{:?},{:?},{:?}\n",
            hilbert.re, hilbert.im, q_route.re, q_route.im, deviation
        ),
    })
}

fn cmd_qgrid(settings: &Settings, literal: &str, points: Option<usize>, extent: Option<f64>) -> Result<String> {
    let state = build_state(literal, settings, 1, 0)?;
    let extent = extent.unwrap_or(4.0 * settings.hbar.sqrt());
    let rows = phase_space_grid(&state, points.unwrap_or(41), extent, settings.nodes)?;
    Ok(match settings.format.unwrap_or(Format::Csv) {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&rows)?),
        Format::Csv | Format::Pretty => {
            let mut out = String::from("x,p,Q,W,smoothedW\n");
            for r in rows {
                out.push_str(&format!("{:?},{:?},{:?},{:?},{:?}\n", r.x, r.p, r.q, r.w, r.smoothed_w));
            }
            out
        }
    })
}

fn cmd_marginal(settings: &Settings, literal: &str, points: Option<usize>, extent: Option<f64>) -> Result<String> {
    let state = build_state(literal, settings, 1, 0)?;
    let extent = extent.unwrap_or(6.0 * settings.hbar.sqrt());
    let samples = marginal_samples(&state, points.unwrap_or(201), extent, settings.nodes)?;
    Ok(match settings.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let rows: Vec<_> = samples
                .iter()
                .map(|(x, q, b)| serde_json::json!({"x": x, "qmarg": q, "born": b}))
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&rows)?)
        }
        Format::Csv | Format::Pretty => {
            let mut out = String::from("x,qmarg,born\n");
            for (x, q, b) in samples {
                out.push_str(&format!("{x:?},{q:?},{b:?}\n"));
            }
            out
        }
    })
}

fn cmd_verify(settings: &Settings, suite: &str, timing: bool) -> Result<(String, bool)> {
    let suite: Suite = suite.parse()?;
    let report = run(
        suite,
        settings.seed,
        &VerifyOptions {
            timing,
            nodes: settings.nodes,
        },
    );
    let text = match settings.format.unwrap_or(Format::Json) {
        Format::Json => format!("{}\n", report.to_json()),
        Format::Csv => {
            let mut out = String::from("id,pass,max_deviation,tolerance,bound,instances\n");
            for c in &report.checks {
                out.push_str(&format!(
                    "{},{},{:?},{:?},{},{}\n",
                    c.id,
                    c.pass,
                    c.max_deviation,
                    c.tolerance,
                    serde_json::to_value(c.bound)?.as_str().unwrap_or(""),
                    c.instances
                ));
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for c in &report.checks {
                out.push_str(&format!(
                    "{} {:<30} deviation {:e} (tolerance {:e})\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.id,
                    c.max_deviation,
                    c.tolerance
                ));
            }
            out.push_str(&format!(
                "{}: {}\n",
                report.suite,
                if report.pass { "pass" } else { "FAIL" }
            ));
            out
        }
    };
    Ok((text, report.pass))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool> {
    let settings = Settings::from_cli(cli)?;
    let (text, pass) = match &cli.command {
        Command::Quantize {
            expr,
            scheme,
            convention,
            as_symbol,
        } => (
            cmd_quantize(&settings, expr, (*scheme).into(), (*convention).into(), as_symbol.map(Into::into))?,
            true,
        ),
        Command::Expect {
            expr,
            scheme,
            convention,
            state,
        } => (
            cmd_expect(&settings, expr, (*scheme).into(), (*convention).into(), state)?,
            true,
        ),
        Command::Qgrid { state, points, extent } => (cmd_qgrid(&settings, state, *points, *extent)?, true),
        Command::Marginal { state, points, extent } => (cmd_marginal(&settings, state, *points, *extent)?, true),
        Command::Verify { suite, timing } => cmd_verify(&settings, suite, *timing)?,
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                eprint!("{text}");
                if !text.contains("Usage:") {
                    eprintln!("\n{}", Cli::command().render_usage());
                }
            } else {
                print!("{text}");
            }
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
