//! Command-line front end: sweeps, single-machine reports and verification.
//!
//! Every command builds its full output in memory before writing anything.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::channels::{depolarizing_fraction, output_from_joint_state, ChannelDistribution};
use crate::error::{Error, Result};
use crate::hcm::{
    analytic_channels, build_four_partite, frontier, isotropic_hcm, symmetric_point, ucm_ndim,
    AmplitudeGrid, MAX_SIM_DIM,
};
use crate::linalg::{fidelity, DensityMatrix, StateVector};
use crate::me_states::me_decompose;
use crate::pcm::{capacity_upper_bound, symmetric_pcm, triplicator, DoubleBellAmplitudes};
use crate::sampling::{random_real_qubit, random_state};
use crate::uncertainty::{
    entropic_check, marginal_entropic_check, robertson_check, RobertsonVariant,
};
use crate::verify::{run_verification, sample_rng, VerifyConfig, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const FIDELITY_SAMPLES: usize = 100;

#[derive(Parser, Debug)]
#[command(
    name = "cloning",
    version,
    about = "Asymmetric Pauli/Heisenberg cloning machines"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample the saturated no-cloning curve of isotropic machines.
    Frontier(Common),
    /// Full report for one machine.
    Machine(MachineArgs),
    /// Capacity upper bound of a Pauli channel.
    Capacity(CapacityArgs),
    /// Run the seeded verification suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["family", "grid"]))]
pub struct MachineArgs {
    #[command(flatten)]
    pub common: Common,
    /// ucm | isotropic:a=A | symmetric:theta=T,phi=P | triplicator[:x=X]
    #[arg(long)]
    pub family: Option<String>,
    /// Triplicator parameter when not given inside --family.
    #[arg(long)]
    pub x: Option<f64>,
    /// Amplitude grid JSON file.
    #[arg(long)]
    pub grid: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "px")]
    pub p_x: f64,
    #[arg(long = "py")]
    pub p_y: f64,
    #[arg(long = "pz")]
    pub p_z: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

/// Result of one command: text to emit and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
}

/// Parses `args` (program name first), runs the command and writes output.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let out_path = common(&cli.command).out.clone();
    match execute(&cli.command) {
        Ok(outcome) => {
            for n in &outcome.notes {
                eprintln!("{n}");
            }
            let written = match &out_path {
                Some(p) => {
                    fs::write(p, &outcome.output).map_err(|e| format!("{}: {e}", p.display()))
                }
                None => {
                    print!("{}", outcome.output);
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Frontier(c) => c,
        Command::Machine(m) => &m.common,
        Command::Capacity(c) => &c.common,
        Command::Verify(v) => &v.common,
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Frontier(c) => cmd_frontier(c),
        Command::Machine(m) => cmd_machine(m),
        Command::Capacity(c) => cmd_capacity(c),
        Command::Verify(v) => cmd_verify(v),
    }
}

fn validate_common(c: &Common) -> Result<()> {
    if c.dim < 2 {
        return Err(Error::InvalidDims(format!(
            "dim must be at least 2, got {}",
            c.dim
        )));
    }
    if c.samples == 0 {
        return Err(Error::OutOfRange("samples must be at least 1".into()));
    }
    if !(c.tolerance > 0.0 && c.tolerance.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "tolerance {} must be positive",
            c.tolerance
        )));
    }
    Ok(())
}

fn seed_note(seed: u64) -> String {
    format!("seed: {seed}")
}

/// Decimal with 12 significant digits, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let s = if (-5..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    };
    trim_zeros(s)
}

fn trim_zeros(s: String) -> String {
    let (mantissa, exp) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s.as_str(), ""),
    };
    if !mantissa.contains('.') {
        return s;
    }
    let m = mantissa.trim_end_matches('0').trim_end_matches('.');
    let m = if m == "-0" { "0" } else { m };
    format!("{m}{exp}")
}

fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Malformed(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Malformed(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of ascii numbers"))
}

fn to_json_text<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

#[derive(Clone, Debug, Serialize)]
struct FrontierRow {
    a: f64,
    b: f64,
    pi_a: f64,
    pi_b: f64,
    fid_a: f64,
    fid_b: f64,
    simulated: bool,
}

fn fraction_from_weights(dim: usize, weights: &[f64]) -> Result<f64> {
    let ch = ChannelDistribution::new(dim, weights.to_vec())?;
    Ok(depolarizing_fraction(&ch)?.fraction)
}

fn frontier_row(dim: usize, a: f64, seed: u64, index: usize) -> Result<FrontierRow> {
    let m = isotropic_hcm(a, dim)?;
    if dim > MAX_SIM_DIM {
        let nf = dim as f64;
        let fid = |pi: f64| 1.0 - pi + pi / nf;
        return Ok(FrontierRow {
            a: m.a,
            b: m.b,
            pi_a: m.fraction_a(),
            pi_b: m.fraction_b(),
            fid_a: fid(m.fraction_a()),
            fid_b: fid(m.fraction_b()),
            simulated: false,
        });
    }
    let state = build_four_partite(&m.grid())?;
    let rho_ra = state.partial_trace(&[0, 1])?;
    let rho_rb = state.partial_trace(&[0, 2])?;
    let pi_a = fraction_from_weights(dim, me_decompose(&rho_ra)?.weights().weights())?;
    let pi_b = fraction_from_weights(dim, me_decompose(&rho_rb)?.weights().weights())?;
    let psi = random_state(dim, &mut sample_rng(seed, 5, index as u64));
    let fid_a = fidelity(&psi, &output_from_joint_state(&rho_ra, &psi)?)?;
    let fid_b = fidelity(&psi, &output_from_joint_state(&rho_rb, &psi)?)?;
    Ok(FrontierRow {
        a: m.a,
        b: m.b,
        pi_a,
        pi_b,
        fid_a,
        fid_b,
        simulated: true,
    })
}

/// Uniform samples in `a`; with three or more samples the symmetric point is
/// added so the UCM row is always present.
pub fn frontier_parameters(dim: usize, samples: usize) -> Result<Vec<f64>> {
    let mut a: Vec<f64> = frontier(dim, samples)?.into_iter().map(|p| p.a).collect();
    if samples >= 3 {
        let s = symmetric_point(dim)?.a;
        if !a.iter().any(|&x| (x - s).abs() < 1e-12) {
            a.push(s);
            a.sort_by(f64::total_cmp);
        }
    }
    Ok(a)
}

pub fn cmd_frontier(c: &Common) -> Result<Outcome> {
    validate_common(c)?;
    if c.samples < 2 {
        return Err(Error::OutOfRange(format!(
            "frontier needs at least 2 samples, got {}",
            c.samples
        )));
    }
    let params = frontier_parameters(c.dim, c.samples)?;
    let rows: Vec<FrontierRow> = params
        .par_iter()
        .enumerate()
        .map(|(i, &a)| frontier_row(c.dim, a, c.seed, i))
        .collect::<Result<_>>()?;
    let output = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => to_csv(
            &["a", "b", "pi_a", "pi_b", "fid_a", "fid_b", "simulated"],
            &rows
                .iter()
                .map(|r| {
                    let mut v: Vec<String> = [r.a, r.b, r.pi_a, r.pi_b, r.fid_a, r.fid_b]
                        .map(fmt_num)
                        .to_vec();
                    v.push(r.simulated.to_string());
                    v
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Json => to_json_text(&json!({ "dim": c.dim, "seed": c.seed, "rows": rows }))?,
    };
    Ok(Outcome {
        output,
        code: EXIT_OK,
        notes: vec![seed_note(c.seed)],
    })
}

fn parse_params(spec: &str) -> Result<Vec<(String, f64)>> {
    if spec.is_empty() {
        return Ok(vec![]);
    }
    spec.split(',')
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Malformed(format!("expected key=value, got '{kv}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("'{v}' is not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn take(params: &[(String, f64)], key: &str) -> Option<f64> {
    params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
}

fn require(params: &[(String, f64)], key: &str, family: &str) -> Result<f64> {
    take(params, key).ok_or_else(|| Error::Malformed(format!("{family} needs {key}=...")))
}

fn reject_unknown(params: &[(String, f64)], allowed: &[&str]) -> Result<()> {
    match params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        Some((k, _)) => Err(Error::Malformed(format!("unknown family parameter '{k}'"))),
        None => Ok(()),
    }
}

fn qubit_only(family: &str, dim: usize) -> Result<()> {
    if dim != 2 {
        return Err(Error::InvalidDims(format!(
            "{family} is a qubit machine, got dim {dim}"
        )));
    }
    Ok(())
}

/// Resolves a family spec to its amplitude grid.
pub fn family_grid(spec: &str, dim: usize, x: Option<f64>) -> Result<AmplitudeGrid> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let params = parse_params(rest)?;
    match name.trim() {
        "ucm" => {
            reject_unknown(&params, &[])?;
            ucm_ndim(dim)
        }
        "isotropic" => {
            reject_unknown(&params, &["a"])?;
            Ok(isotropic_hcm(require(&params, "a", "isotropic")?, dim)?.grid())
        }
        "symmetric" => {
            reject_unknown(&params, &["theta", "phi"])?;
            qubit_only("symmetric", dim)?;
            let theta = require(&params, "theta", "symmetric")?;
            let phi = require(&params, "phi", "symmetric")?;
            Ok(symmetric_pcm(theta, phi)?.amps().to_grid())
        }
        "triplicator" => {
            reject_unknown(&params, &["x"])?;
            qubit_only("triplicator", dim)?;
            let x = take(&params, "x")
                .or(x)
                .ok_or_else(|| Error::Malformed("triplicator needs x (x=... or --x)".into()))?;
            Ok(triplicator(x)?.to_grid())
        }
        other => Err(Error::Malformed(format!("unknown family '{other}'"))),
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
struct Stats {
    min: f64,
    max: f64,
    mean: f64,
}

impl Stats {
    fn of(values: &[f64]) -> Self {
        Self {
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: values.iter().sum::<f64>() / values.len() as f64,
        }
    }
}

fn fraction_json(ch: &ChannelDistribution) -> Value {
    match depolarizing_fraction(ch) {
        Ok(f) => {
            json!({ "isotropic": true, "depolarizing_fraction": f.fraction, "scaling": f.scaling })
        }
        Err(_) => json!({ "isotropic": false }),
    }
}

fn fidelity_stats<F>(states: &[StateVector], output: F) -> Result<Stats>
where
    F: Fn(&StateVector) -> Result<DensityMatrix> + Sync,
{
    let f: Vec<f64> = states
        .par_iter()
        .map(|psi| output(psi).and_then(|rho| fidelity(psi, &rho)))
        .collect::<Result<_>>()?;
    Ok(Stats::of(&f))
}

fn machine_report(grid: &AmplitudeGrid, source: &str, c: &Common) -> Result<Value> {
    let dim = grid.dim();
    let (ch_a, ch_b) = analytic_channels(grid);
    let mut rng = sample_rng(c.seed, 6, 0);
    let states: Vec<StateVector> = (0..FIDELITY_SAMPLES)
        .map(|_| random_state(dim, &mut rng))
        .collect();
    let real_states: Vec<StateVector> = if dim == 2 {
        (0..FIDELITY_SAMPLES)
            .map(|_| random_real_qubit(&mut rng))
            .collect()
    } else {
        vec![]
    };
    let simulated = dim <= MAX_SIM_DIM;

    let mut outputs = serde_json::Map::new();
    let channel_json = |ch: &ChannelDistribution| json!({ "probs": ch.rows() });
    let mut a = channel_json(&ch_a);
    let mut b = channel_json(&ch_b);
    merge(&mut a, fraction_json(&ch_a));
    merge(&mut b, fraction_json(&ch_b));

    let c_out = if simulated {
        let state = build_four_partite(grid)?;
        let reduced: Vec<DensityMatrix> = [1, 2, 3]
            .iter()
            .map(|&k| state.partial_trace(&[0, k]))
            .collect::<Result<_>>()?;
        let decs = reduced
            .iter()
            .map(me_decompose)
            .collect::<Result<Vec<_>>>()?;
        for (dec, ch, what) in [(&decs[0], &ch_a, "output A"), (&decs[1], &ch_b, "output B")] {
            let deviation = ch
                .probs()
                .iter()
                .zip(dec.weights().weights())
                .map(|(x, y)| (x - y).abs())
                .fold(dec.residual(), f64::max);
            if deviation > c.tolerance {
                return Err(Error::OracleMismatch {
                    what: what.into(),
                    deviation,
                });
            }
        }
        let mut stats = Vec::new();
        for rho in &reduced {
            let mut s = json!({
                "fidelity": fidelity_stats(&states, |psi| output_from_joint_state(rho, psi))?,
            });
            if dim == 2 {
                s["fidelity_real_inputs"] =
                    json!(fidelity_stats(
                        &real_states,
                        |psi| output_from_joint_state(rho, psi)
                    )?);
            }
            stats.push(s);
        }
        merge(&mut a, stats[0].clone());
        merge(&mut b, stats[1].clone());
        let dec_c = &decs[2];
        let mut cj = json!({
            "me_weights": dec_c.weights().weights().chunks(dim).map(|r| r.to_vec()).collect::<Vec<_>>(),
            "me_residual": dec_c.residual(),
        });
        if dec_c.residual() < c.tolerance {
            let ch = ChannelDistribution::new(dim, dec_c.weights().weights().to_vec())?;
            merge(&mut cj, fraction_json(&ch));
        }
        merge(&mut cj, stats[2].clone());
        cj
    } else {
        for (obj, ch) in [(&mut a, &ch_a), (&mut b, &ch_b)] {
            let f: Vec<f64> = states
                .iter()
                .map(|psi| crate::channels::channel_fidelity(ch, psi))
                .collect::<Result<_>>()?;
            merge(obj, json!({ "fidelity": Stats::of(&f) }));
        }
        Value::Null
    };
    outputs.insert("a".into(), a);
    outputs.insert("b".into(), b);
    outputs.insert("c".into(), c_out);

    let entropic = entropic_check(&ch_a, &ch_b)?;
    let (m1, m2) = marginal_entropic_check(grid);
    let robertson = if dim == 2 {
        let amps = DoubleBellAmplitudes::from_grid(grid)?;
        json!({
            "variant_1": robertson_check(&amps, RobertsonVariant::One),
            "variant_2": robertson_check(&amps, RobertsonVariant::Two),
        })
    } else {
        Value::Null
    };
    Ok(json!({
        "source": source,
        "dim": dim,
        "seed": c.seed,
        "simulated": simulated,
        "amplitudes": grid.to_json(),
        "outputs": outputs,
        "uncertainty": {
            "entropic": entropic,
            "marginal": [m1, m2],
            "robertson": robertson,
        },
    }))
}

fn merge(target: &mut Value, extra: Value) {
    if let (Value::Object(t), Value::Object(e)) = (target, extra) {
        t.extend(e);
    }
}

pub fn cmd_machine(m: &MachineArgs) -> Result<Outcome> {
    let c = &m.common;
    validate_common(c)?;
    if c.format == Some(Format::Csv) {
        return Err(Error::Malformed("machine reports are JSON only".into()));
    }
    let (grid, source) = match (&m.family, &m.grid) {
        (Some(f), None) => (family_grid(f, c.dim, m.x)?, format!("family {f}")),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
            let grid = AmplitudeGrid::from_json(&text)?;
            if grid.dim() != c.dim {
                return Err(Error::DimensionMismatch {
                    expected: c.dim,
                    found: grid.dim(),
                });
            }
            (grid, format!("grid {}", path.display()))
        }
        _ => {
            return Err(Error::Malformed(
                "give exactly one of --family or --grid".into(),
            ))
        }
    };
    let report = machine_report(&grid, &source, c)?;
    Ok(Outcome {
        output: to_json_text(&report)?,
        code: EXIT_OK,
        notes: vec![seed_note(c.seed)],
    })
}

pub fn cmd_capacity(a: &CapacityArgs) -> Result<Outcome> {
    validate_common(&a.common)?;
    let r = capacity_upper_bound(a.p_x, a.p_y, a.p_z)?;
    let region = serde_json::to_value(r.region)?
        .as_str()
        .expect("unit variant")
        .to_string();
    let output = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => to_csv(
            &["p_x", "p_y", "p_z", "quadratic_form", "bound", "region"],
            &[vec![
                fmt_num(a.p_x),
                fmt_num(a.p_y),
                fmt_num(a.p_z),
                fmt_num(r.quadratic_form),
                fmt_num(r.bound),
                region,
            ]],
        )?,
        Format::Json => to_json_text(&json!({
            "p_x": a.p_x, "p_y": a.p_y, "p_z": a.p_z,
            "quadratic_form": r.quadratic_form,
            "bound": r.bound,
            "region": r.region,
        }))?,
    };
    Ok(Outcome {
        output,
        code: EXIT_OK,
        notes: vec![],
    })
}

pub fn cmd_verify(v: &VerifyArgs) -> Result<Outcome> {
    let c = &v.common;
    validate_common(c)?;
    let cfg = VerifyConfig {
        dim: c.dim,
        samples: c.samples,
        seed: c.seed,
        tolerance: c.tolerance,
        inject_fault: v.inject_fault,
    };
    let report = run_verification(&cfg)?;
    let output = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => to_csv(
            &["suite", "passed", "failed"],
            &report
                .suites
                .iter()
                .map(|s| {
                    vec![
                        s.name.to_string(),
                        s.passed.to_string(),
                        s.failed.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Json => to_json_text(&report)?,
    };
    let mut notes = vec![seed_note(c.seed)];
    let code = if report.all_passed() {
        EXIT_OK
    } else {
        if let Some((suite, ce)) = report.first_counterexample() {
            notes.push(format!("first counterexample ({suite}): {ce}"));
        }
        EXIT_VERIFY_FAILED
    };
    Ok(Outcome {
        output,
        code,
        notes,
    })
}
