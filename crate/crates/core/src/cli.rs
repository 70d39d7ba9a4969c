// SPDX-License-Identifier: Apache-2.0

//! Command layer of the `ncl3d` binary.
//!
//! Every command returns an [`Outcome`]: a human-readable text report for
//! stdout, a JSON report (written to `--out` when given) and a pass flag
//! that becomes the exit status. Reports carry SHA-256 digests of the tech
//! and calibration inputs and no timestamps, so fixed inputs and seed give
//! byte-identical output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::gate::{GateCatalog, GateSpec, STUDIED_GATES};
use crate::netlist::{
    check_input_completeness_with, check_observability_with, parse_netlist_with, validate, CheckMode,
    CompletenessViolation, Netlist, ObservabilityViolation, EXHAUSTIVE_INPUT_LIMIT,
};
use crate::ppa::{
    calibrate_all, circuit_delays, circuit_ppa, default_calibration, exhaustive_words, gate_ppa, sweep_alpha,
    Calibration, CircuitPpa, Mode, ReferenceTable, Sweep, SweepRow, SweepTarget, TechParams, AVERAGE_ROW,
};
use crate::sim::{
    build_pipeline, check_delay_insensitivity, measure, parse_vectors, random_delays, simulate, DelayAssignment, Metrics,
};
use crate::synth::{
    build_array_multiplier_with, count_transistors, expand_dual_rail_with, parse_boolean_netlist_named, AdderStyle,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ncl3d", version, about = "NCL gate, netlist, simulation and 2D/M3D PPA toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct RunConfig {
    /// Tech parameter file (TOML); defaults to the built-in parameters.
    #[arg(long, global = true)]
    pub tech: Option<PathBuf>,
    /// Calibration file (TOML); defaults to fitting the bundled reference table.
    #[arg(long, global = true)]
    pub cal: Option<PathBuf>,
    /// Extra gate catalog (TOML) merged over the built-in one.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "2d", alias = "2D")]
    TwoD,
    #[value(name = "m3d", alias = "M3D")]
    M3d,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::TwoD => Mode::TwoD,
            ModeArg::M3d => Mode::M3d,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    /// Full adders from XOR/AND/OR cells.
    Cells,
    /// Full adders from TH23 and TH34w2.
    Threshold,
}

impl From<StyleArg> for AdderStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Cells => AdderStyle::BooleanCells,
            StyleArg::Threshold => AdderStyle::ThresholdGates,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DelayArg {
    /// Gate-model delays for the chosen mode and alpha.
    Model,
    /// Log-uniform random delays drawn from the seed.
    Random,
    /// 1 ps everywhere.
    Unit,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-gate delay, skew, power and area for 2D and M3D.
    GateReport {
        /// Gate names, `all` for the six characterized gates or `catalog`.
        #[arg(default_values_t = vec!["all".to_string()])]
        gates: Vec<String>,
        /// Alpha list (`0.7`, `0.6,0.8`) or range (`0.6:0.8:0.1`).
        #[arg(long, default_value = "0.7")]
        alpha: String,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Structural, input-completeness and observability checks.
    Check {
        netlist: PathBuf,
        /// Refuse to sample: fail when the netlist is too large to sweep.
        #[arg(long)]
        exhaustive: bool,
        /// Sampled vectors when the input count exceeds the exhaustive limit.
        #[arg(long, default_value_t = 4096)]
        trials: usize,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Run vectors through a handshaking pipeline around a netlist.
    Simulate {
        netlist: PathBuf,
        /// Vector file: one word per line.
        #[arg(long)]
        vectors: PathBuf,
        #[arg(long, default_value_t = 1)]
        stages: usize,
        #[arg(long, value_enum, default_value_t = DelayArg::Model)]
        delays: DelayArg,
        #[arg(long, value_enum, default_value_t = ModeArg::TwoD)]
        mode: ModeArg,
        #[arg(long)]
        alpha: Option<f64>,
        /// Write the transition table here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Expand a Boolean netlist (or the array multiplier) to dual-rail NCL.
    /// With `--out` the NCL netlist goes to that file, otherwise to stdout.
    Synth {
        input: Option<PathBuf>,
        /// Generate the width-N array multiplier instead of reading a file.
        #[arg(long)]
        width: Option<usize>,
        #[arg(long, value_enum, default_value_t = StyleArg::Cells)]
        style: StyleArg,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Build, verify, DI-check and characterize the array multiplier.
    MultiplierDemo {
        #[arg(long, default_value_t = 4)]
        width: usize,
        /// Delay model used for the verification run.
        #[arg(long, value_enum, default_value_t = ModeArg::TwoD)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0.7)]
        alpha: f64,
        /// Apply every input pair (width at most 4).
        #[arg(long)]
        exhaustive: bool,
        /// Random vectors when not exhaustive.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Random delay assignments for the DI check.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = StyleArg::Cells)]
        style: StyleArg,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Improvement of M3D over 2D across alpha.
    Sweep {
        /// Alpha list or range `start:stop:step`.
        #[arg(long, default_value = "0.6:0.8:0.1")]
        alpha: String,
        /// Sweep a netlist instead of the characterized gates.
        #[arg(long, conflicts_with = "width")]
        netlist: Option<PathBuf>,
        /// Sweep the width-N array multiplier.
        #[arg(long)]
        width: Option<usize>,
        /// Vector file for circuit sweeps; default exhaustive up to 8 inputs.
        #[arg(long)]
        vectors: Option<PathBuf>,
        /// Gate names for gate sweeps; `all` for the characterized gates.
        #[arg(long, value_delimiter = ',')]
        gates: Vec<String>,
        #[command(flatten)]
        config: RunConfig,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GateReport { .. } => "gate-report",
            Command::Check { .. } => "check",
            Command::Simulate { .. } => "simulate",
            Command::Synth { .. } => "synth",
            Command::MultiplierDemo { .. } => "multiplier-demo",
            Command::Sweep { .. } => "sweep",
        }
    }

    pub fn config(&self) -> &RunConfig {
        match self {
            Command::GateReport { config, .. }
            | Command::Check { config, .. }
            | Command::Simulate { config, .. }
            | Command::Synth { config, .. }
            | Command::MultiplierDemo { config, .. }
            | Command::Sweep { config, .. } => config,
        }
    }
}

/// Result of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub json: String,
    /// Extra file payload (`synth` netlist, `simulate` trace) and its path.
    pub artifact: Option<(PathBuf, String)>,
    pub passed: bool,
}

/// Provenance block at the top of every JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct ReportHeader {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub tech_sha256: String,
    pub cal_sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loaded tech, calibration and catalog with their digests.
pub struct Context {
    pub tech: TechParams,
    pub cal: Calibration,
    pub catalog: GateCatalog,
    pub header: ReportHeader,
}

impl Context {
    pub fn load(command: &'static str, config: &RunConfig) -> Result<Self, CliError> {
        let (tech, tech_text) = match &config.tech {
            Some(p) => {
                let text = read(p)?;
                (TechParams::from_toml(&text)?, text)
            }
            None => (TechParams::default(), TechParams::default().to_toml()),
        };
        let (cal, cal_text) = match &config.cal {
            Some(p) => {
                let text = read(p)?;
                (Calibration::from_toml(&text)?, text)
            }
            None if tech == TechParams::default() => (default_calibration().clone(), default_calibration().to_toml()),
            None => {
                let c = calibrate_all(&tech, ReferenceTable::builtin(), GateCatalog::builtin())?.calibration;
                let t = c.to_toml();
                (c, t)
            }
        };
        let mut catalog = GateCatalog::builtin().clone();
        if let Some(p) = &config.catalog {
            catalog.extend(GateCatalog::from_toml(&read(p)?)?);
        }
        Ok(Self {
            header: ReportHeader {
                tool: "ncl3d",
                version: env!("CARGO_PKG_VERSION"),
                command,
                seed: config.seed,
                tech_sha256: sha256_hex(tech_text.as_bytes()),
                cal_sha256: sha256_hex(cal_text.as_bytes()),
            },
            tech,
            cal,
            catalog,
        })
    }

    fn header_text(&self) -> String {
        format!(
            "# ncl3d {} {}\n# tech sha256 {}\n# cal  sha256 {}\n",
            self.header.version, self.header.command, self.header.tech_sha256, self.header.cal_sha256
        )
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Parses `0.7`, `0.6,0.8` or an inclusive range `start:stop:step`.
pub fn parse_alphas(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: &str| CliError::Usage(format!("alpha `{spec}`: {m}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let out = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("range must be start:stop:step"));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) {
            return Err(bad("step must be positive"));
        }
        if start > stop {
            return Err(bad("start exceeds stop"));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| round12(start + i as f64 * step)).collect()
    } else {
        spec.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(num)
            .collect::<Result<Vec<_>, _>>()?
    };
    if out.is_empty() {
        return Err(bad("empty alpha list"));
    }
    if let Some(a) = out.iter().find(|a| !(**a > 0.0 && **a <= 1.0)) {
        return Err(bad(&format!("{a} outside (0, 1]")));
    }
    Ok(out)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn resolve_gates(names: &[String], catalog: &GateCatalog) -> Result<Vec<GateSpec>, CliError> {
    let mut out = Vec::new();
    for n in names {
        match n.as_str() {
            "all" => out.extend(STUDIED_GATES.iter().map(|g| catalog.spec(g)).collect::<Result<Vec<_>, _>>()?),
            "catalog" => out.extend(catalog.iter().cloned()),
            _ => out.push(catalog.spec(n)?),
        }
    }
    Ok(out)
}

fn load_netlist(path: &Path, catalog: &GateCatalog) -> Result<Netlist, CliError> {
    Ok(parse_netlist_with(&read(path)?, &path.display().to_string(), catalog)?)
}

#[derive(Serialize)]
struct GateRow {
    gate: String,
    mode: Mode,
    alpha: f64,
    t_d_ps: f64,
    t_s_ps: f64,
    power_uw: f64,
    area_um2: f64,
}

#[derive(Serialize)]
struct GateReportJson<'a> {
    header: &'a ReportHeader,
    rows: Vec<GateRow>,
    improvements: Vec<SweepRow>,
}

fn imp_line(s: &mut String, r: &SweepRow) {
    let _ = writeln!(
        s,
        "{:<10} {:<5} {:>5.2} {:>8.1}% {:>8.1}% {:>8.1}% {:>9.1}%",
        r.subject, "%imp", r.alpha, r.t_d_pct, r.t_s_pct, r.power_pct, r.area_pct
    );
}

pub fn cmd_gate_report(ctx: &Context, gates: &[String], alphas: &[f64]) -> Result<Outcome, CliError> {
    let specs = resolve_gates(gates, &ctx.catalog)?;
    let mut text = ctx.header_text();
    let _ = writeln!(
        text,
        "{:<10} {:<5} {:>5} {:>9} {:>9} {:>9} {:>10}",
        "gate", "case", "alpha", "T_D ps", "T_S ps", "P uW", "A um2"
    );
    let mut rows = Vec::new();
    let mut improvements = Vec::new();
    for &alpha in alphas {
        let imps = crate::ppa::gate_improvements(&specs, &ctx.tech, &ctx.cal, alpha)?;
        for (spec, imp) in specs.iter().zip(&imps) {
            for (mode, a) in [(Mode::TwoD, 1.0), (Mode::M3d, alpha)] {
                let r = gate_ppa(spec, &ctx.tech, &ctx.cal, mode, a)?;
                let _ = writeln!(
                    text,
                    "{:<10} {:<5} {:>5.2} {:>9.2} {:>9.2} {:>9.3} {:>10.4}",
                    spec.name, mode, a, r.t_d_ps, r.t_s_ps, r.power_uw, r.area_um2
                );
                rows.push(GateRow {
                    gate: spec.name.clone(),
                    mode,
                    alpha: a,
                    t_d_ps: r.t_d_ps,
                    t_s_ps: r.t_s_ps,
                    power_uw: r.power_uw,
                    area_um2: r.area_um2,
                });
            }
            imp_line(&mut text, imp);
        }
        if let Some(avg) = imps.iter().find(|r| r.subject == AVERAGE_ROW) {
            imp_line(&mut text, avg);
        }
        improvements.extend(imps);
    }
    let json = to_json(&GateReportJson {
        header: &ctx.header,
        rows,
        improvements,
    });
    Ok(Outcome {
        text,
        json,
        artifact: None,
        passed: true,
    })
}

#[derive(Serialize)]
struct CheckJson<'a> {
    header: &'a ReportHeader,
    netlist: String,
    inputs: usize,
    outputs: usize,
    gates: usize,
    mode: String,
    defects: Vec<String>,
    completeness: Vec<CompletenessViolation>,
    observability: Vec<ObservabilityViolation>,
    clean: bool,
}

pub fn cmd_check(ctx: &Context, path: &Path, exhaustive: bool, trials: usize) -> Result<Outcome, CliError> {
    let n = load_netlist(path, &ctx.catalog)?;
    let defects: Vec<String> = validate(&n).iter().map(|d| d.to_string()).collect();
    let mode = if exhaustive || n.inputs().len() <= EXHAUSTIVE_INPUT_LIMIT {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled {
            trials,
            seed: ctx.header.seed,
        }
    };
    let (completeness, observability) = if defects.is_empty() {
        (check_input_completeness_with(&n, mode)?, check_observability_with(&n, mode)?)
    } else {
        (Vec::new(), Vec::new())
    };
    let clean = defects.is_empty() && completeness.is_empty() && observability.is_empty();
    let mode_name = match mode {
        CheckMode::Exhaustive => "exhaustive".to_string(),
        CheckMode::Sampled { trials, .. } => format!("sampled ({trials} vectors)"),
    };
    let mut text = ctx.header_text();
    let _ = writeln!(
        text,
        "{}: inputs {}, outputs {}, gates {}, {}",
        path.display(),
        n.inputs().len(),
        n.outputs().len(),
        n.gates().len(),
        mode_name
    );
    for d in &defects {
        let _ = writeln!(text, "defect: {d}");
    }
    for v in &completeness {
        let bits: String = v.vector.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let _ = writeln!(
            text,
            "input-incomplete ({:?}): outputs complete with only {} switched, vector {}",
            v.direction,
            v.subset.join(","),
            bits
        );
    }
    for v in &observability {
        let _ = writeln!(text, "unobservable gate: {}", v.gate);
    }
    let _ = writeln!(text, "{}", if clean { "clean" } else { "FAILED" });
    let json = to_json(&CheckJson {
        header: &ctx.header,
        netlist: path.display().to_string(),
        inputs: n.inputs().len(),
        outputs: n.outputs().len(),
        gates: n.gates().len(),
        mode: mode_name,
        defects,
        completeness,
        observability,
        clean,
    });
    Ok(Outcome {
        text,
        json,
        artifact: None,
        passed: clean,
    })
}

#[derive(Serialize)]
struct SimulateJson<'a> {
    header: &'a ReportHeader,
    netlist: String,
    stages: usize,
    delays: String,
    inputs: Vec<u64>,
    outputs: Vec<u64>,
    events: usize,
    end_time_ps: f64,
    metrics: Metrics,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate(
    ctx: &Context,
    path: &Path,
    vectors_path: &Path,
    stages: usize,
    delays: DelayArg,
    mode: Mode,
    alpha: Option<f64>,
    trace_path: Option<&Path>,
) -> Result<Outcome, CliError> {
    let n = load_netlist(path, &ctx.catalog)?;
    let words = parse_vectors(&read(vectors_path)?, n.inputs().len(), &vectors_path.display().to_string())?;
    let sys = crate::sim::build_pipeline_with(&n, stages, &ctx.catalog)?;
    let alpha = alpha.unwrap_or(if mode == Mode::TwoD { 1.0 } else { 0.7 });
    let (d, label) = match delays {
        DelayArg::Model => (circuit_delays(&sys, &ctx.tech, &ctx.cal, mode, alpha)?, format!("model {mode} alpha {alpha}")),
        DelayArg::Random => (random_delays(&sys, ctx.header.seed, 0), format!("random seed {}", ctx.header.seed)),
        DelayArg::Unit => (DelayAssignment::uniform(&sys, 1.0)?, "unit 1 ps".to_string()),
    };
    let trace = simulate(&sys, &words, &d)?;
    let metrics = measure(&trace)?;
    let outputs = trace.words();
    let mut text = ctx.header_text();
    let _ = writeln!(text, "{}: {} stage(s), delays {}", path.display(), stages, label);
    let _ = writeln!(text, "{:>6} {:>20} {:>20} {:>12} {:>12}", "#", "input", "output", "fwd ps", "C/L ps");
    for (i, (a, b)) in words.iter().zip(&outputs).enumerate() {
        let _ = writeln!(
            text,
            "{:>6} {:>20} {:>20} {:>12.3} {:>12.3}",
            i, a, b, metrics.forward_latency_ps[i], metrics.cl_latency_ps[i]
        );
    }
    if let Some(c) = metrics.mean_cycle_time_ps() {
        let _ = writeln!(text, "mean cycle time {c:.3} ps");
    }
    let json = to_json(&SimulateJson {
        header: &ctx.header,
        netlist: path.display().to_string(),
        stages,
        delays: label,
        inputs: words.clone(),
        outputs,
        events: trace.events,
        end_time_ps: trace.end_time_fs as f64 / crate::sim::FS_PER_PS,
        metrics,
    });
    Ok(Outcome {
        text,
        json,
        artifact: trace_path.map(|p| (p.to_path_buf(), trace.to_table())),
        passed: true,
    })
}

#[derive(Serialize)]
struct SynthJson<'a> {
    header: &'a ReportHeader,
    source: String,
    inputs: usize,
    outputs: usize,
    gates: usize,
    transistors: u64,
    netlist_sha256: String,
}

pub fn cmd_synth(
    ctx: &Context,
    input: Option<&Path>,
    width: Option<usize>,
    style: AdderStyle,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let (n, source) = match (input, width) {
        (Some(p), None) => {
            let b = parse_boolean_netlist_named(&read(p)?, &p.display().to_string())?;
            (expand_dual_rail_with(&b, &ctx.catalog)?, p.display().to_string())
        }
        (None, Some(w)) => (build_array_multiplier_with(w, style, &ctx.catalog)?, format!("multiplier width {w}")),
        _ => return Err(CliError::Usage("synth needs exactly one of INPUT or --width".into())),
    };
    let netlist_text = n.to_text();
    let tally = count_transistors(&n)?;
    let mut summary = format!(
        "# {source}: inputs {}, outputs {}, gates {}, transistors {}\n",
        n.inputs().len(),
        n.outputs().len(),
        n.gates().len(),
        tally.total
    );
    let json = to_json(&SynthJson {
        header: &ctx.header,
        source,
        inputs: n.inputs().len(),
        outputs: n.outputs().len(),
        gates: n.gates().len(),
        transistors: tally.total,
        netlist_sha256: sha256_hex(netlist_text.as_bytes()),
    });
    let artifact = match out {
        Some(p) => Some((p.to_path_buf(), netlist_text)),
        None => {
            summary.push_str(&netlist_text);
            None
        }
    };
    Ok(Outcome {
        text: summary,
        json,
        artifact,
        passed: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub a: u64,
    pub b: u64,
    pub got: Option<u64>,
}

#[derive(Serialize)]
struct DemoJson<'a> {
    header: &'a ReportHeader,
    width: usize,
    style: String,
    exhaustive: bool,
    vectors: usize,
    correct: usize,
    mismatches: Vec<Mismatch>,
    null_wavefronts_ok: bool,
    di_trials: usize,
    di_passed: bool,
    di_failure: Option<String>,
    transistors: u64,
    planar: CircuitPpa,
    m3d: CircuitPpa,
    improvement: SweepRow,
    passed: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_multiplier_demo(
    ctx: &Context,
    width: usize,
    mode: Mode,
    alpha: f64,
    exhaustive: bool,
    samples: usize,
    trials: usize,
    style: AdderStyle,
) -> Result<Outcome, CliError> {
    if exhaustive && width > 4 {
        return Err(CliError::Usage("exhaustive verification supports width <= 4".into()));
    }
    let n = build_array_multiplier_with(width, style, &ctx.catalog)?;
    let words = if exhaustive {
        exhaustive_words(width)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.header.seed);
        let mask = (1u64 << (2 * width)) - 1;
        (0..samples).map(|_| rng.random::<u64>() & mask).collect()
    };
    let sys = build_pipeline(&n, 1)?;
    let sim_alpha = if mode == Mode::TwoD { 1.0 } else { alpha };
    let d = circuit_delays(&sys, &ctx.tech, &ctx.cal, mode, sim_alpha)?;
    let split = |w: u64| (w & ((1 << width) - 1), w >> width);
    let (outputs, null_ok) = match simulate(&sys, &words, &d) {
        Ok(t) => {
            let null_ok = t.complete && t.wavefronts.iter().all(|w| w.output_null_fs > w.output_data_fs);
            (t.words(), null_ok)
        }
        Err(_) => (Vec::new(), false),
    };
    let mut mismatches = Vec::new();
    let mut correct = 0;
    for (i, &w) in words.iter().enumerate() {
        let (a, b) = split(w);
        let got = outputs.get(i).copied();
        if got == Some(a * b) {
            correct += 1;
        } else {
            mismatches.push(Mismatch { a, b, got });
        }
    }
    let di = check_delay_insensitivity(&sys, &words, trials.max(1), ctx.header.seed)?;
    let tally = count_transistors(&n)?;
    let planar = circuit_ppa(&n, &words, &ctx.tech, &ctx.cal, Mode::TwoD, 1.0)?;
    let m3d = circuit_ppa(&n, &words, &ctx.tech, &ctx.cal, Mode::M3d, alpha)?;
    let improvement = SweepRow {
        alpha,
        subject: crate::ppa::CIRCUIT_ROW.into(),
        t_d_pct: crate::ppa::improvement_pct(planar.report.t_d_ps, m3d.report.t_d_ps),
        t_s_pct: crate::ppa::improvement_pct(planar.report.t_s_ps, m3d.report.t_s_ps),
        power_pct: crate::ppa::improvement_pct(planar.report.power_uw, m3d.report.power_uw),
        area_pct: crate::ppa::improvement_pct(planar.report.area_um2, m3d.report.area_um2),
    };
    let passed = mismatches.is_empty() && null_ok && di.passed;

    let mut text = ctx.header_text();
    let _ = writeln!(text, "{width}x{width} array multiplier, {} gates, {} transistors", n.gates().len(), tally.total);
    let _ = writeln!(
        text,
        "verification ({} delays): {correct}/{} correct{}, NULL wavefronts {}",
        mode,
        words.len(),
        if exhaustive { " (exhaustive)" } else { "" },
        if null_ok { "ok" } else { "FAILED" }
    );
    for m in mismatches.iter().take(8) {
        let _ = writeln!(text, "  counterexample: {} * {} gave {:?}", m.a, m.b, m.got);
    }
    let _ = writeln!(
        text,
        "delay insensitivity: {} trials, {}",
        di.trials,
        if di.passed { "pass" } else { "FAILED" }
    );
    if let Some(c) = &di.counterexample {
        let _ = writeln!(text, "  trial {}: {}", c.trial, c.failure);
    }
    let _ = writeln!(
        text,
        "{:<10} {:<5} {:>5} {:>9} {:>9} {:>9} {:>10}",
        "subject", "case", "alpha", "T_D ps", "T_S ps", "P uW", "A um2"
    );
    for p in [&planar, &m3d] {
        let r = &p.report;
        let _ = writeln!(
            text,
            "{:<10} {:<5} {:>5.2} {:>9.1} {:>9.1} {:>9.2} {:>10.3}",
            "circuit", r.mode, r.alpha, r.t_d_ps, r.t_s_ps, r.power_uw, r.area_um2
        );
    }
    imp_line(&mut text, &improvement);
    let _ = writeln!(text, "{}", if passed { "PASS" } else { "FAIL" });

    let json = to_json(&DemoJson {
        header: &ctx.header,
        width,
        style: format!("{style:?}"),
        exhaustive,
        vectors: words.len(),
        correct,
        mismatches,
        null_wavefronts_ok: null_ok,
        di_trials: di.trials,
        di_passed: di.passed,
        di_failure: di.counterexample.map(|c| format!("trial {}: {}", c.trial, c.failure)),
        transistors: tally.total,
        planar,
        m3d,
        improvement,
        passed,
    });
    Ok(Outcome {
        text,
        json,
        artifact: None,
        passed,
    })
}

#[derive(Serialize)]
struct SweepJson<'a> {
    header: &'a ReportHeader,
    target: String,
    sweep: Sweep,
}

pub fn cmd_sweep(
    ctx: &Context,
    alphas: &[f64],
    netlist: Option<&Path>,
    width: Option<usize>,
    vectors: Option<&Path>,
    gates: &[String],
) -> Result<Outcome, CliError> {
    let circuit = match (netlist, width) {
        (Some(p), _) => Some((load_netlist(p, &ctx.catalog)?, p.display().to_string())),
        (None, Some(w)) => Some((build_array_multiplier_with(w, AdderStyle::default(), &ctx.catalog)?, format!("multiplier width {w}"))),
        (None, None) => None,
    };
    let (sweep, target) = match &circuit {
        Some((n, label)) => {
            let k = n.inputs().len();
            let words = match vectors {
                Some(p) => parse_vectors(&read(p)?, k, &p.display().to_string())?,
                None if k <= 8 => (0..1u64 << k).collect(),
                None => {
                    return Err(CliError::Usage(format!(
                        "{label} has {k} inputs; pass --vectors for circuits wider than 8"
                    )))
                }
            };
            let t = SweepTarget::Circuit {
                netlist: n,
                vectors: &words,
            };
            (sweep_alpha(&t, alphas, &ctx.tech, &ctx.cal)?, label.clone())
        }
        None => {
            let names = if gates.is_empty() { vec!["all".to_string()] } else { gates.to_vec() };
            let specs = resolve_gates(&names, &ctx.catalog)?;
            (sweep_alpha(&SweepTarget::Gates(&specs), alphas, &ctx.tech, &ctx.cal)?, names.join(","))
        }
    };
    let mut text = ctx.header_text();
    let _ = writeln!(text, "target {target}");
    let _ = writeln!(
        text,
        "{:<10} {:<5} {:>5} {:>9} {:>9} {:>9} {:>10}",
        "subject", "", "alpha", "T_D", "T_S", "P", "A"
    );
    for r in &sweep.rows {
        imp_line(&mut text, r);
    }
    let _ = writeln!(text, "monotone in alpha: {}", if sweep.monotone { "yes" } else { "no" });
    let json = to_json(&SweepJson {
        header: &ctx.header,
        target,
        sweep,
    });
    Ok(Outcome {
        text,
        json,
        artifact: None,
        passed: true,
    })
}

/// Runs one parsed command.
pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    let ctx = Context::load(cmd.name(), cmd.config())?;
    match cmd {
        Command::GateReport { gates, alpha, .. } => cmd_gate_report(&ctx, gates, &parse_alphas(alpha)?),
        Command::Check {
            netlist,
            exhaustive,
            trials,
            ..
        } => cmd_check(&ctx, netlist, *exhaustive, *trials),
        Command::Simulate {
            netlist,
            vectors,
            stages,
            delays,
            mode,
            alpha,
            trace,
            ..
        } => cmd_simulate(&ctx, netlist, vectors, *stages, *delays, (*mode).into(), *alpha, trace.as_deref()),
        Command::Synth {
            input, width, style, config,
        } => cmd_synth(&ctx, input.as_deref(), *width, (*style).into(), config.out.as_deref()),
        Command::MultiplierDemo {
            width,
            mode,
            alpha,
            exhaustive,
            samples,
            trials,
            style,
            ..
        } => cmd_multiplier_demo(&ctx, *width, (*mode).into(), *alpha, *exhaustive, *samples, *trials, (*style).into()),
        Command::Sweep {
            alpha,
            netlist,
            width,
            vectors,
            gates,
            ..
        } => cmd_sweep(&ctx, &parse_alphas(alpha)?, netlist.as_deref(), *width, vectors.as_deref(), gates),
    }
}

/// Entry point of the binary; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let result = run(&cli.command).and_then(|o| {
        let cfg = cli.command.config();
        if let Some((p, body)) = &o.artifact {
            write(p, body)?;
        }
        // `synth --out` names the netlist; its JSON report is not written.
        if let (Some(p), false) = (&cfg.out, matches!(cli.command, Command::Synth { .. })) {
            write(p, &o.json)?;
        }
        Ok(o)
    });
    match result {
        Ok(o) => {
            print!("{}", o.text);
            if o.passed {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_specs() {
        assert_eq!(parse_alphas("0.6:0.8:0.1").unwrap(), vec![0.6, 0.7, 0.8]);
        assert_eq!(parse_alphas("0.7").unwrap(), vec![0.7]);
        assert_eq!(parse_alphas("0.8,0.6").unwrap(), vec![0.8, 0.6]);
        for bad in ["", "0.8:0.6:0.1", "0.6:0.8:0", "0.6:0.8", "x", "1.5", "0"] {
            assert!(parse_alphas(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_required_flags() {
        let c = Cli::try_parse_from([
            "ncl3d", "multiplier-demo", "--width", "2", "--mode", "m3d", "--alpha", "0.7", "--seed", "3", "--exhaustive",
            "--out", "x.json",
        ])
        .unwrap();
        assert_eq!(c.command.name(), "multiplier-demo");
        assert_eq!(c.command.config().seed, 3);
        let c = Cli::try_parse_from(["ncl3d", "gate-report", "TH22", "--tech", "t.toml", "--cal", "c.toml"]).unwrap();
        assert_eq!(c.command.config().tech.as_deref(), Some(Path::new("t.toml")));
    }

    #[test]
    fn empty_gate_list_reports_nothing() {
        let ctx = Context::load("gate-report", &RunConfig::default()).unwrap();
        let o = cmd_gate_report(&ctx, &[], &[0.7]).unwrap();
        assert!(o.passed);
        assert!(o.json.contains("\"rows\": []"));
    }

    #[test]
    fn header_digests_default_inputs() {
        let ctx = Context::load("sweep", &RunConfig::default()).unwrap();
        assert_eq!(ctx.header.tech_sha256, sha256_hex(TechParams::default().to_toml().as_bytes()));
        assert_eq!(ctx.header.tech_sha256.len(), 64);
    }
}
