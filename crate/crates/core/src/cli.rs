//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the text for stdout and stderr, so it can be tested without
//! spawning a process.
//!
//! Exit codes: 0 success, 1 verification failed, 2 bad input (parse,
//! shape, precondition), 3 kernel overlap, 4 extension failed, 5 irregular
//! pencil or inconsistent constraints.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::extension::{extend_maximal_monotone, extend_maximal_resistive};
use crate::generate::Generator;
use crate::io::{Body, SystemFile};
use crate::phcore::{
    descriptor_power_residual, hamiltonian, validate_descriptor, validate_geometric, Channel,
    DescriptorPH, GeometricPH, Trajectory,
};
use crate::relations::TolerancePolicy;
use crate::sim::{
    consistent_init_at, constraint_residual, integrate_implicit_euler, roundtrip_experiment,
    verify_descriptor, verify_geometric, InputSpec, SimConfig, VerifyTolerance,
};
use crate::transforms::{
    descriptor_to_geometric, geometric_to_descriptor, project_solution, roundtrip,
    transfer_positive_real, LiftData,
};

#[derive(Parser, Debug)]
#[command(name = "phbridge", version, about = "Linear port-Hamiltonian systems: geometric and descriptor forms")]
pub struct Cli {
    /// relative rank tolerance
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol_rel: f64,
    /// absolute rank floor
    #[arg(long, global = true, default_value_t = 1e-14)]
    pub tol_abs: f64,
    /// seed for random initial guesses and sample points
    #[arg(long, global = true, env = "PHBRIDGE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure verdicts of a relation file
    Classify { file: PathBuf },
    /// Convert a system file to the other formulation
    Convert {
        file: PathBuf,
        #[arg(long)]
        to: Target,
    },
    /// Simulate with implicit Euler and write the trajectory
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-2)]
        h: f64,
        /// zero | sin[:amp[:freq]] | poly:c0,c1,... | @spec.json | inline JSON
        #[arg(long, default_value = "zero")]
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a trajectory against a system
    Verify { system: PathBuf, trajectory: PathBuf },
    /// Descriptor → geometric → descriptor with Q = I
    Roundtrip {
        file: PathBuf,
        /// also simulate both systems up to this time and compare outputs
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long, default_value_t = 1e-2)]
        h: f64,
        #[arg(long, default_value = "zero")]
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample G(s) + G(s)* on the right half plane
    Transfer {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Maximal monotone or resistive extension of a relation file
    Extend {
        file: PathBuf,
        #[arg(long, default_value = "monotone")]
        to: Extension,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Target {
    Descriptor,
    Geometric,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Extension {
    Monotone,
    Resistive,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::KernelOverlap(_) => 3,
        Error::ExtensionFailed(_) | Error::NotMonotone | Error::NotResistive => 4,
        Error::IrregularPencil(_) | Error::InconsistentConstraints(_) => 5,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, ..Default::default() }
            } else {
                Outcome { code, stderr: text, ..Default::default() }
            };
        }
    };
    match execute(&cli) {
        Ok((code, value)) => Outcome {
            code,
            stdout: pretty(&value),
            stderr: if code == 1 { "error: verification failed\n".into() } else { String::new() },
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize") + "\n"
}

fn to_value<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("reports always serialize")
}

/// A system file in either formulation.
enum System {
    Geometric(GeometricPH),
    Descriptor(DescriptorPH),
}

fn load_system(path: &Path, tol: TolerancePolicy) -> Result<System> {
    let file = SystemFile::read(path)?;
    match file.body {
        Body::Geometric { .. } => Ok(System::Geometric(file.to_geometric()?.with_tol(tol))),
        Body::Descriptor(_) => Ok(System::Descriptor(file.to_descriptor()?.with_tol(tol))),
        _ => Err(Error::Format(format!(
            "{}: expected a geometric or descriptor file, got kind `{}`",
            path.display(),
            file.kind()
        ))),
    }
}

/// Descriptor form of a system, with the lift data when it was converted.
fn as_descriptor(sys: System) -> Result<(DescriptorPH, Option<(GeometricPH, LiftData)>)> {
    match sys {
        System::Descriptor(d) => Ok((d, None)),
        System::Geometric(g) => {
            let tol = *g.d().tol();
            let (d, lift) = geometric_to_descriptor(&g)?;
            Ok((d.with_tol(tol), Some((g, lift))))
        }
    }
}

fn parse_numbers(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Format(format!("bad number `{s}` in input specification")))
        })
        .collect()
}

/// `zero`, `sin`, `sin:A`, `sin:A:W`, `poly:c0,c1,...`, `@file.json` or an
/// inline JSON object.
pub fn parse_input(text: &str) -> Result<InputSpec> {
    let text = text.trim();
    let json_spec = |s: &str| {
        serde_json::from_str::<InputSpec>(s).map_err(|e| Error::Format(format!("bad input specification: {e}")))
    };
    if let Some(path) = text.strip_prefix('@') {
        let body = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {path}: {e}")))?;
        return json_spec(&body);
    }
    if text.starts_with('{') {
        return json_spec(text);
    }
    let mut parts = text.splitn(2, ':');
    let head = parts.next().unwrap_or_default();
    let rest = parts.next();
    match (head, rest) {
        ("zero", None) => Ok(InputSpec::Zero),
        ("sin", None) => Ok(InputSpec::sin(1.0)),
        ("sin", Some(args)) => {
            let v: Vec<f64> = args.split(':').map(parse_numbers).collect::<Result<Vec<_>>>()?.concat();
            match v.as_slice() {
                [a] => Ok(InputSpec::sin(*a)),
                [a, w] => Ok(InputSpec::Sinusoid {
                    amplitude: vec![*a],
                    frequency: vec![*w],
                }),
                _ => Err(Error::Format(format!("bad sinusoid `{text}`"))),
            }
        }
        ("poly", Some(args)) => Ok(InputSpec::Polynomial {
            coefficients: vec![parse_numbers(args)?],
        }),
        _ => Err(Error::Format(format!("unknown input specification `{text}`"))),
    }
}

fn execute(cli: &Cli) -> Result<(i32, serde_json::Value)> {
    let tol = TolerancePolicy::new(cli.tol_rel, cli.tol_abs)?;
    match &cli.command {
        Command::Classify { file } => {
            let rel = SystemFile::read(file)?.to_relation()?.with_tol(tol);
            Ok((0, to_value(&rel.classify()?)))
        }
        Command::Convert { file, to } => convert(file, *to, tol),
        Command::Simulate {
            file,
            t_end,
            h,
            input,
            out,
        } => simulate(file, *t_end, *h, input, out.as_deref(), cli.seed, tol),
        Command::Verify { system, trajectory } => verify(system, trajectory, tol),
        Command::Roundtrip {
            file,
            t_end,
            h,
            input,
            out,
        } => roundtrip_cmd(file, *t_end, *h, input, out.as_deref(), cli.seed, tol),
        Command::Transfer { file, points } => transfer(file, *points, cli.seed, tol),
        Command::Extend { file, to, out } => {
            let rel = SystemFile::read(file)?.to_relation()?.with_tol(tol);
            let ext = match to {
                Extension::Monotone => extend_maximal_monotone(&rel)?,
                Extension::Resistive => extend_maximal_resistive(&rel)?,
            };
            let doc = SystemFile::from_relation(&ext).with_metadata(json!({
                "extension": format!("{to:?}").to_lowercase(),
                "input_dim": rel.dim(),
                "output_dim": ext.dim(),
                "classification": to_value(&ext.classify()?),
            }));
            emit(doc, out.as_deref())
        }
    }
}

/// Writes `doc` to `out` and returns a short note, or returns `doc` itself.
fn emit(doc: SystemFile, out: Option<&Path>) -> Result<(i32, serde_json::Value)> {
    match out {
        Some(path) => {
            doc.write(path)?;
            Ok((0, json!({ "written": path.display().to_string(), "kind": doc.kind(), "metadata": doc.metadata })))
        }
        None => Ok((0, to_value(&doc))),
    }
}

fn convert(file: &Path, to: Target, tol: TolerancePolicy) -> Result<(i32, serde_json::Value)> {
    match (load_system(file, tol)?, to) {
        (System::Geometric(g), Target::Descriptor) => {
            let (d, lift) = geometric_to_descriptor(&g)?;
            let report = validate_descriptor(&d);
            let doc = SystemFile::from_descriptor(&d).with_metadata(json!({
                "source": "geometric",
                "lift": to_value(&lift.dims()),
                "q_is_identity": d.is_standard_form(),
                "validation": to_value(&report),
            }));
            Ok((0, to_value(&doc)))
        }
        (System::Descriptor(d), Target::Geometric) => {
            let (g, maps) = descriptor_to_geometric(&d)?;
            let report = validate_geometric(&g);
            let doc = SystemFile::from_geometric(&g).with_metadata(json!({
                "source": "descriptor",
                "maps": to_value(&maps.dims()),
                "validation": to_value(&report),
            }));
            Ok((0, to_value(&doc)))
        }
        (System::Geometric(_), Target::Geometric) | (System::Descriptor(_), Target::Descriptor) => {
            Err(Error::Format("file is already in the requested formulation".into()))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    file: &Path,
    t_end: f64,
    h: f64,
    input: &str,
    out: Option<&Path>,
    seed: u64,
    tol: TolerancePolicy,
) -> Result<(i32, serde_json::Value)> {
    let input = parse_input(input)?;
    let cfg = SimConfig::new(t_end, h, input.clone(), seed)?;
    let (sys, converted) = as_descriptor(load_system(file, tol)?)?;
    let guess = match sys.field() {
        crate::relations::Field::Real => Generator::real(seed),
        crate::relations::Field::Complex => Generator::complex(seed),
    }
    .vector(sys.state_dim());
    let z0 = consistent_init_at(&sys, &input, 0.0, &guess)?;
    let mut traj = integrate_implicit_euler(&sys, &cfg, &z0)?;
    if let Some((g, lift)) = &converted {
        let el0 = lift.split_state(&z0)[0].clone();
        let x0 = &lift.l_mat * el0;
        let geo = project_solution(g, lift, &traj, &x0, 1e-7)?;
        for ch in [Channel::X, Channel::FR, Channel::ER, Channel::EL, Channel::LambdaL, Channel::MuL] {
            if let Some(s) = geo.get(ch) {
                traj.set(ch, s.to_vec())?;
            }
        }
        // x_dot of the projected trajectory equals the first block of E ż
        if let Some(s) = geo.get(Channel::XDot) {
            traj.set(Channel::XDot, s.to_vec())?;
        }
    }
    let summary = summarize(&sys, &traj, converted.is_some())?;
    let meta = json!({
        "source": if converted.is_some() { "geometric" } else { "descriptor" },
        "converted": converted.is_some(),
        "t_end": t_end,
        "h": traj.h(),
        "seed": seed,
        "input": to_value(&input),
    });
    let mut report = summary;
    if let Some(path) = out {
        SystemFile::from_trajectory(&traj).with_metadata(meta.clone()).write(path)?;
        report["written"] = json!(path.display().to_string());
    }
    report["run"] = meta;
    Ok((0, report))
}

fn summarize(sys: &DescriptorPH, traj: &Trajectory, converted: bool) -> Result<serde_json::Value> {
    let z = traj.require(Channel::Z)?;
    let u = traj.require(Channel::U)?;
    // the x_dot channel of converted runs holds the geometric derivative
    let mut plain = traj.clone();
    if converted {
        plain.remove(Channel::XDot);
    }
    let power = descriptor_power_residual(sys, &plain)?;
    let constraint = z
        .iter()
        .zip(u)
        .map(|(zk, uk)| constraint_residual(sys, zk, uk))
        .fold(0.0, f64::max);
    Ok(json!({
        "steps": traj.len() - 1,
        "state_dim": sys.state_dim(),
        "initial_hamiltonian": hamiltonian(sys, &z[0])?,
        "final_hamiltonian": hamiltonian(sys, &z[z.len() - 1])?,
        "max_power_residual": power.max_residual,
        "max_constraint_residual": constraint,
    }))
}

fn verify(system: &Path, trajectory: &Path, tol: TolerancePolicy) -> Result<(i32, serde_json::Value)> {
    let traj = SystemFile::read(trajectory)?.to_trajectory()?;
    let vt = VerifyTolerance {
        membership: 10.0 * tol.structural(),
        ..VerifyTolerance::default()
    };
    let report = match load_system(system, tol)? {
        System::Geometric(g) if traj.get(Channel::X).is_some() => verify_geometric(&g, &traj, &vt)?,
        System::Geometric(g) => {
            let (d, _) = geometric_to_descriptor(&g)?;
            verify_descriptor(&d, &traj, &vt)?
        }
        System::Descriptor(d) => {
            let mut plain = traj.clone();
            if plain.get(Channel::X).is_some() {
                plain.remove(Channel::XDot);
            }
            verify_descriptor(&d, &plain, &vt)?
        }
    };
    Ok((if report.passed { 0 } else { 1 }, to_value(&report)))
}

#[allow(clippy::too_many_arguments)]
fn roundtrip_cmd(
    file: &Path,
    t_end: Option<f64>,
    h: f64,
    input: &str,
    out: Option<&Path>,
    seed: u64,
    tol: TolerancePolicy,
) -> Result<(i32, serde_json::Value)> {
    let sys = match load_system(file, tol)? {
        System::Descriptor(d) => d,
        System::Geometric(_) => return Err(Error::Format("roundtrip expects a descriptor file".into())),
    };
    let rt = roundtrip(&sys)?;
    let mut report = json!({
        "q_is_identity": rt.descriptor.is_standard_form(),
        "original_state_dim": sys.state_dim(),
        "roundtrip_state_dim": rt.descriptor.state_dim(),
        "geometric": to_value(&rt.maps.dims()),
        "lift": to_value(&rt.lift.dims()),
        "validation": to_value(&validate_descriptor(&rt.descriptor)),
    });
    if let Some(t_end) = t_end {
        let cfg = SimConfig::new(t_end, h, parse_input(input)?, seed)?;
        report["simulation"] = to_value(&roundtrip_experiment(&sys, &cfg)?);
    }
    if let Some(path) = out {
        SystemFile::from_descriptor(&rt.descriptor).write(path)?;
        report["written"] = json!(path.display().to_string());
    }
    Ok((0, report))
}

fn transfer(file: &Path, points: usize, seed: u64, tol: TolerancePolicy) -> Result<(i32, serde_json::Value)> {
    let (sys, _) = as_descriptor(load_system(file, tol)?)?;
    let standard = if sys.is_standard_form() {
        sys
    } else {
        roundtrip(&sys)?.descriptor.with_tol(tol)
    };
    let mut g = Generator::real(seed);
    let pts: Vec<_> = (0..points).map(|_| g.right_half_plane_point()).collect();
    let report = transfer_positive_real(&standard, &pts)?;
    Ok((0, to_value(&report)))
}
