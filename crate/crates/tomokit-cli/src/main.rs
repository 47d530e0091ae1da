//! Command-line driver for the tomokit library.
//!
//! Exit codes compose into shell pipelines and CI gates:
//!   0  success / inequality holds
//!   1  inequality violated
//!   2  malformed request (bad state spec, bad JSON, missing file)
//!   3  numeric guard tripped (bad grid bounds, unnormalized CSV slices,
//!      too few angles)
//!
//! Every command builds its complete output in memory and then writes it
//! with a temp-file-and-rename, so failures never leave partial files.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tomokit::entropy::{
    check_hirschman, check_theta_pair, check_universal, renyi_continuous, shannon_continuous,
    InequalityVerdict,
};
use tomokit::error::{Result, TomoError};
use tomokit::grid::{AngleGrid, Grid1D};
use tomokit::io::{
    read_tomogram_csv, write_phase_density_csv, write_spin_csv, write_tomogram_csv,
    write_wigner_csv, VerdictReport,
};
use tomokit::qtomo::{optical_tomogram_quantum, wigner_from_tomogram};
use tomokit::radon::{inverse_radon, optical_tomogram_classical, OpticalTomogram};
use tomokit::spin::{
    modified_spin_tomogram, spin_ssa_check, spin_subadditivity_check, two_qudit_tomogram,
    SpinTomogram, WeightedUnitarySet,
};
use tomokit::states::{StateKind, StateSpec};

const N_MIN: usize = 64;
const N_MAX: usize = 8192;
const ANGLES_MIN: usize = 16;
const ANGLES_MAX: usize = 720;
const L_MIN: f64 = 4.0;
const L_MAX: f64 = 20.0;
/// Reconstruction output planes are quadratic in N; keep them tractable.
const PLANE_N_MAX: usize = 1024;
/// Classical densities are sampled on an internal plane grid; line-integral
/// cost is quadratic in its resolution, so it is capped independently.
const DENSITY_N_MAX: usize = 257;

/// Tolerance for the continuous-variable entropy checks (quadrature and
/// transform error budget at the default grids).
const WAVE_TOL: f64 = 5e-3;

#[derive(Parser)]
#[command(
    name = "tomokit",
    version,
    about = "Tomographic-probability toolkit: tomograms, entropies, inequality checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the optical tomogram of a state and write it out.
    Tomogram(TomogramArgs),
    /// Per-angle entropy profile of a tomogram.
    Entropy(EntropyArgs),
    /// Verify an entropic inequality (exit 0 when it holds, 1 when not).
    #[command(subcommand)]
    Check(CheckCommand),
    /// Invert a tomogram CSV back to a phase-space field.
    Reconstruct(ReconstructArgs),
    /// Spin tomograms of qudit states.
    #[command(subcommand)]
    Spin(SpinCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct GridArgs {
    /// Quadrature grid as N,L: N points spanning [-L, L].
    #[arg(long, default_value = "1024,8", value_parser = parse_grid)]
    grid: (usize, f64),
    /// Number of tomographic angles on the circle (multiple of 4).
    #[arg(long, default_value_t = 64)]
    angles: usize,
}

#[derive(Args)]
struct TomogramArgs {
    /// State spec: path to a JSON file, or inline JSON.
    #[arg(long)]
    state: String,
    #[command(flatten)]
    grid: GridArgs,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct EntropyArgs {
    /// State spec: path to a JSON file, or inline JSON.
    #[arg(long, conflicts_with = "tomogram")]
    state: Option<String>,
    /// Ingest a previously written or measured tomogram CSV instead.
    #[arg(long)]
    tomogram: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
    /// Renyi order (Shannon entropy when omitted).
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// S(position) + S(momentum) >= ln(pi e) for a pure state.
    Hirschman {
        #[arg(long)]
        state: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// S(theta) + S(theta + pi/2) >= ln(pi e) on a tomogram.
    Pair {
        /// Quadrature rotation angle (radians); snapped to the nearest node.
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, conflicts_with = "tomogram")]
        state: Option<String>,
        #[arg(long)]
        tomogram: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Angle-integrated entropy against 2 pi^2 ln(pi e).
    Universal {
        #[arg(long, conflicts_with = "tomogram")]
        state: Option<String>,
        #[arg(long)]
        tomogram: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strong subadditivity of a bipartite spin tomogram (random2 specs).
    Ssa {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 20)]
        unitaries: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Subadditivity of a single-qudit modified spin tomogram.
    Subadd {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 20)]
        unitaries: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ReconstructArgs {
    /// Tomogram CSV to invert.
    #[arg(long)]
    tomogram: PathBuf,
    /// Output plane as N,L (default: 257 points spanning the tomogram's
    /// reliable region L_X / sqrt(2)).
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, f64)>,
    /// Treat the tomogram as quantum: reconstruct the Wigner field without
    /// clamping negative values.
    #[arg(long)]
    quantum: bool,
    /// Output path for the plane CSV (stdout when omitted; the run report
    /// JSON then goes to stderr instead of stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SpinCommand {
    /// Tomogram rows of a qudit state over Haar-random unitaries.
    Tomogram {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 20)]
        unitaries: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Entropy inequality of the modified spin tomogram: subadditivity for
    /// single states, strong subadditivity for bipartite (random2) specs.
    Check {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 20)]
        unitaries: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_grid(s: &str) -> std::result::Result<(usize, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected N,L (e.g. 1024,8), got `{s}`"));
    }
    let n: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("bad point count `{}`", parts[0]))?;
    let l: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("bad half-width `{}`", parts[1]))?;
    Ok((n, l))
}

fn main() {
    let cli = Cli::parse();
    let code = match configure_threads().and_then(|()| run(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code(e: &TomoError) -> i32 {
    match e {
        TomoError::Spec(_) | TomoError::Io(_) | TomoError::Json(_) => 2,
        TomoError::Grid(_)
        | TomoError::Distribution(_)
        | TomoError::Numeric(_)
        | TomoError::Csv(_) => 3,
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("TOMOKIT_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| TomoError::Spec(format!("TOMOKIT_THREADS must be a positive integer, got `{v}`")))?;
        if n == 0 {
            return Err(TomoError::Spec(
                "TOMOKIT_THREADS must be a positive integer, got `0`".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| TomoError::Spec(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Tomogram(args) => cmd_tomogram(args),
        Command::Entropy(args) => cmd_entropy(args),
        Command::Check(cmd) => cmd_check(cmd),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Spin(cmd) => cmd_spin(cmd),
    }
}

fn check_bounds(n: usize, l: f64, angles: usize) -> Result<()> {
    if !(N_MIN..=N_MAX).contains(&n) {
        return Err(TomoError::Numeric(format!(
            "grid point count {n} outside [{N_MIN}, {N_MAX}]"
        )));
    }
    if !(L_MIN..=L_MAX).contains(&l) {
        return Err(TomoError::Numeric(format!(
            "grid half-width {l} outside [{L_MIN}, {L_MAX}]"
        )));
    }
    if !(ANGLES_MIN..=ANGLES_MAX).contains(&angles) {
        return Err(TomoError::Numeric(format!(
            "angle count {angles} outside [{ANGLES_MIN}, {ANGLES_MAX}]"
        )));
    }
    Ok(())
}

/// Accept inline JSON (leading `{`) or a path to a JSON file.
fn resolve_spec(arg: &str) -> Result<StateSpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    StateSpec::parse(&text)
}

fn build_optical(spec: &StateSpec, n: usize, l: f64, angles: usize) -> Result<OpticalTomogram> {
    let angle_grid = AngleGrid::offset(angles)?;
    match spec.kind() {
        StateKind::Wave => {
            let grid = Grid1D::uniform(n, l)?;
            let psi = spec.build_wavefunction(&grid)?;
            optical_tomogram_quantum(&psi, &angle_grid)
        }
        StateKind::Classical => {
            // The density plane [-L/sqrt2, L/sqrt2]^2 keeps every line
            // integral inside the quadrature window [-L, L].
            let nf = n.min(DENSITY_N_MAX);
            let lf = l / std::f64::consts::SQRT_2;
            let qgrid = Grid1D::uniform(nf, lf)?;
            let pgrid = qgrid.clone();
            let f = spec.build_phase_density(&qgrid, &pgrid)?;
            let xgrid = Grid1D::uniform(n, l)?;
            optical_tomogram_classical(&f, &xgrid, &angle_grid)
        }
        StateKind::Discrete => Err(TomoError::Spec(
            "a qudit state has no quadrature tomogram; use the spin subcommand".into(),
        )),
    }
}

/// Tomogram from either a state spec or a CSV file; returns the provenance
/// echo objects for the verdict report alongside.
fn load_tomogram(
    state: Option<&str>,
    tomogram: Option<&Path>,
    grid: &GridArgs,
) -> Result<(OpticalTomogram, serde_json::Value, serde_json::Value)> {
    match (state, tomogram) {
        (Some(arg), None) => {
            let (n, l) = grid.grid;
            check_bounds(n, l, grid.angles)?;
            let spec = resolve_spec(arg)?;
            let w = build_optical(&spec, n, l, grid.angles)?;
            let state_echo = serde_json::to_value(&spec)?;
            let grid_echo = json!({"n": n, "half_width": l, "angles": grid.angles});
            Ok((w, state_echo, grid_echo))
        }
        (None, Some(path)) => {
            let file = std::fs::File::open(path)?;
            let w = read_tomogram_csv(file)?;
            let state_echo = json!({"tomogram": path.display().to_string()});
            let grid_echo = json!({
                "n": w.xgrid().len(),
                "half_width": w.xgrid().half_width(),
                "angles": w.angles().len(),
            });
            Ok((w, state_echo, grid_echo))
        }
        _ => Err(TomoError::Spec(
            "provide exactly one of --state and --tomogram".into(),
        )),
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::Builder::new()
        .prefix(".tomokit-")
        .tempfile_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| TomoError::Io(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, bytes),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn report_verdict(report: &VerdictReport, out: Option<&Path>) -> Result<i32> {
    let mut text = report.to_json()?;
    text.push('\n');
    if let Some(path) = out {
        write_atomic(path, text.as_bytes())?;
    }
    print!("{text}");
    Ok(if report.verdict.holds { 0 } else { 1 })
}

fn cmd_tomogram(args: TomogramArgs) -> Result<i32> {
    let (n, l) = args.grid.grid;
    check_bounds(n, l, args.grid.angles)?;
    let spec = resolve_spec(&args.state)?;
    let w = build_optical(&spec, n, l, args.grid.angles)?;
    let bytes = match args.format {
        Format::Csv => {
            let mut b = Vec::new();
            write_tomogram_csv(&w, &mut b)?;
            b
        }
        Format::Json => {
            let rows: Vec<Vec<f64>> = (0..w.angles().len()).map(|k| w.slice(k).to_vec()).collect();
            let mut b = serde_json::to_vec_pretty(&json!({
                "x": w.xgrid().points(),
                "theta": w.angles().thetas(),
                "w": rows,
            }))?;
            b.push(b'\n');
            b
        }
    };
    emit(args.out.as_deref(), &bytes)?;
    Ok(0)
}

fn cmd_entropy(args: EntropyArgs) -> Result<i32> {
    let (w, _, _) = load_tomogram(args.state.as_deref(), args.tomogram.as_deref(), &args.grid)?;
    let values: Vec<f64> = match args.q {
        None => (0..w.angles().len())
            .map(|k| shannon_continuous(w.xgrid(), w.slice(k)))
            .collect(),
        Some(q) => (0..w.angles().len())
            .map(|k| renyi_continuous(w.xgrid(), w.slice(k), q))
            .collect::<Result<_>>()?,
    };
    let bytes = match args.format {
        Format::Csv => {
            let mut text = String::from("theta,S\n");
            for (k, &theta) in w.angles().thetas().iter().enumerate() {
                text.push_str(&format!("{theta},{}\n", values[k]));
            }
            text.into_bytes()
        }
        Format::Json => {
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let mut b = serde_json::to_vec_pretty(&json!({
                "order": args.q.unwrap_or(1.0),
                "theta": w.angles().thetas(),
                "entropy": values,
                "min": min,
                "max": max,
                "mean": mean,
            }))?;
            b.push(b'\n');
            b
        }
    };
    emit(args.out.as_deref(), &bytes)?;
    Ok(0)
}

/// Subadditivity verdict of a single-qudit spec; returns (verdict, j, d).
fn spin_subadd_verdict(
    spec: &StateSpec,
    unitaries: usize,
    seed: u64,
) -> Result<(InequalityVerdict, f64, usize)> {
    let rho = spec.build_density_matrix()?;
    let set = WeightedUnitarySet::haar(rho.dim(), unitaries, seed)?;
    let w = SpinTomogram::collect(&rho, &set)?;
    let joint = modified_spin_tomogram(&w, &set)?;
    let verdict = spin_subadditivity_check(&joint)?;
    Ok((verdict, rho.spin(), rho.dim()))
}

/// Strong-subadditivity verdict of a bipartite spec; returns (verdict, j, d).
fn spin_ssa_verdict(
    spec: &StateSpec,
    unitaries: usize,
    seed: u64,
) -> Result<(InequalityVerdict, f64, usize)> {
    let (d1, d2) = spec.factors().ok_or_else(|| {
        TomoError::Spec("strong subadditivity needs a bipartite spec (type random2)".into())
    })?;
    let rho = spec.build_density_matrix()?;
    let set = WeightedUnitarySet::haar(rho.dim(), unitaries, seed)?;
    let joint = two_qudit_tomogram(&rho, d1, d2, &set)?;
    let verdict = spin_ssa_check(&joint)?;
    Ok((verdict, rho.spin(), rho.dim()))
}

fn cmd_check(cmd: CheckCommand) -> Result<i32> {
    match cmd {
        CheckCommand::Hirschman { state, grid, out } => {
            let (n, l) = grid.grid;
            check_bounds(n, l, grid.angles)?;
            let spec = resolve_spec(&state)?;
            if spec.kind() != StateKind::Wave {
                return Err(TomoError::Spec(
                    "the position/momentum pair check needs a pure-state spec".into(),
                ));
            }
            let psi = spec.build_wavefunction(&Grid1D::uniform(n, l)?)?;
            let verdict = check_hirschman(&psi, WAVE_TOL)?;
            let report = VerdictReport::new(
                verdict,
                serde_json::to_value(&spec)?,
                json!({"n": n, "half_width": l}),
            );
            report_verdict(&report, out.as_deref())
        }
        CheckCommand::Pair {
            theta,
            state,
            tomogram,
            grid,
            out,
        } => {
            let (w, state_echo, grid_echo) =
                load_tomogram(state.as_deref(), tomogram.as_deref(), &grid)?;
            let verdict = check_theta_pair(&w, theta, WAVE_TOL);
            let report = VerdictReport::new(verdict, state_echo, grid_echo);
            report_verdict(&report, out.as_deref())
        }
        CheckCommand::Universal {
            state,
            tomogram,
            grid,
            out,
        } => {
            let (w, state_echo, grid_echo) =
                load_tomogram(state.as_deref(), tomogram.as_deref(), &grid)?;
            let verdict = check_universal(&w, WAVE_TOL);
            let report = VerdictReport::new(verdict, state_echo, grid_echo);
            report_verdict(&report, out.as_deref())
        }
        CheckCommand::Ssa {
            state,
            unitaries,
            seed,
            out,
        } => {
            let spec = resolve_spec(&state)?;
            let (verdict, j, d) = spin_ssa_verdict(&spec, unitaries, seed)?;
            let report = VerdictReport::new(verdict, serde_json::to_value(&spec)?, json!(null))
                .with_spin(j, d, unitaries, seed);
            report_verdict(&report, out.as_deref())
        }
        CheckCommand::Subadd {
            state,
            unitaries,
            seed,
            out,
        } => {
            let spec = resolve_spec(&state)?;
            let (verdict, j, d) = spin_subadd_verdict(&spec, unitaries, seed)?;
            let report = VerdictReport::new(verdict, serde_json::to_value(&spec)?, json!(null))
                .with_spin(j, d, unitaries, seed);
            report_verdict(&report, out.as_deref())
        }
    }
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<i32> {
    let file = std::fs::File::open(&args.tomogram)?;
    let w = read_tomogram_csv(file)?;
    let (n, l) = match args.grid {
        Some((n, l)) => {
            if !(N_MIN..=PLANE_N_MAX).contains(&n) {
                return Err(TomoError::Numeric(format!(
                    "plane point count {n} outside [{N_MIN}, {PLANE_N_MAX}]"
                )));
            }
            if !(L_MIN..=L_MAX).contains(&l) {
                return Err(TomoError::Numeric(format!(
                    "plane half-width {l} outside [{L_MIN}, {L_MAX}]"
                )));
            }
            (n, l)
        }
        None => (257, w.xgrid().half_width() / std::f64::consts::SQRT_2),
    };
    let qgrid = Grid1D::uniform(n, l)?;
    let pgrid = qgrid.clone();
    let (bytes, report) = if args.quantum {
        let field = wigner_from_tomogram(&w, &qgrid, &pgrid)?;
        let mut b = Vec::new();
        write_wigner_csv(&field, &mut b)?;
        let (q0, p0) = field.min_location();
        let report = json!({
            "min_value": field.min_value(),
            "min_location": [q0, p0],
            "total_mass": field.total_mass(),
        });
        (b, report)
    } else {
        let (f, rep) = inverse_radon(&w, &qgrid, &pgrid)?;
        let mut b = Vec::new();
        write_phase_density_csv(&f, &mut b)?;
        let report = json!({
            "clamp_mass": rep.clamp_mass,
            "min_value": rep.min_value,
        });
        (b, report)
    };
    match args.out.as_deref() {
        Some(path) => {
            write_atomic(path, &bytes)?;
            println!("{report}");
        }
        None => {
            std::io::stdout().write_all(&bytes)?;
            eprintln!("{report}");
        }
    }
    Ok(0)
}

fn cmd_spin(cmd: SpinCommand) -> Result<i32> {
    match cmd {
        SpinCommand::Tomogram {
            state,
            unitaries,
            seed,
            out,
            format,
        } => {
            let spec = resolve_spec(&state)?;
            let rho = spec.build_density_matrix()?;
            let set = WeightedUnitarySet::haar(rho.dim(), unitaries, seed)?;
            let w = SpinTomogram::collect(&rho, &set)?;
            let bytes = match format {
                Format::Csv => {
                    let mut b = Vec::new();
                    write_spin_csv(&w, &mut b)?;
                    b
                }
                Format::Json => {
                    let rows: Vec<Vec<f64>> =
                        (0..w.n_samples()).map(|k| w.row(k).to_vec()).collect();
                    let m: Vec<f64> = (0..w.dim()).map(|i| w.j() - i as f64).collect();
                    let mut b = serde_json::to_vec_pretty(&json!({
                        "j": w.j(),
                        "d": w.dim(),
                        "n_unitaries": w.n_samples(),
                        "seed": seed,
                        "m": m,
                        "w": rows,
                    }))?;
                    b.push(b'\n');
                    b
                }
            };
            emit(out.as_deref(), &bytes)?;
            Ok(0)
        }
        SpinCommand::Check {
            state,
            unitaries,
            seed,
            out,
        } => {
            let spec = resolve_spec(&state)?;
            let (verdict, j, d) = if spec.factors().is_some() {
                spin_ssa_verdict(&spec, unitaries, seed)?
            } else {
                spin_subadd_verdict(&spec, unitaries, seed)?
            };
            let report = VerdictReport::new(verdict, serde_json::to_value(&spec)?, json!(null))
                .with_spin(j, d, unitaries, seed);
            report_verdict(&report, out.as_deref())
        }
    }
}
