//! `swqpd`: quasiprobability distributions on the sphere and the plane.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 an axiom suite failed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::json;
use swqpd_core::axioms::{verify_all, SuiteConfig, TestSystem};
use swqpd_core::hw::{hw_smooth, hw_weyl_map, plane_grid, FockRep, HwKernel};
use swqpd_core::io::{read_grid, write_grid, write_json, OperatorFile, RunManifest, SOFTWARE_VERSION};
use swqpd_core::kernel::{inverse_weyl, transform_qpd, weyl_map};
use swqpd_core::linalg::hermiticity_defect;
use swqpd_core::state::StateSpec;
use swqpd_core::su2::sphere_grid;
use swqpd_core::{Error, KernelData, QpdGrid, Result, SValue, SpinRep, System};

#[derive(Parser, Debug)]
#[command(name = "swqpd", version, about = "s-parametrized Stratonovich-Weyl quasiprobability distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample F^(s) of a state on a quadrature grid, one file pair per s.
    Qpd(QpdArgs),
    /// Move a sampled distribution to another ordering parameter.
    Convert(ConvertArgs),
    /// Rebuild the operator from a sampled spin distribution.
    Reconstruct(ReconstructArgs),
    /// Run the randomized axiom suites.
    Verify(VerifyArgs),
    /// Print the kernel spectrum τ_L and normalizations ω_L.
    Kernel(KernelArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Group {
    Su2,
    Hw,
}

#[derive(Args, Debug)]
struct SystemArgs {
    #[arg(long, value_enum)]
    group: Group,
    /// Spin, e.g. `1/2`, `3/2`, `2` or `2.5` (su2).
    #[arg(long, value_parser = parse_spin)]
    j: Option<SpinRep>,
    /// Fock cutoff (hw).
    #[arg(long)]
    nmax: Option<usize>,
}

impl SystemArgs {
    fn system(&self) -> Result<System> {
        match (self.group, self.j, self.nmax) {
            (Group::Su2, Some(rep), None) => Ok(System::su2(&rep)),
            (Group::Hw, None, Some(n)) => Ok(System::hw(&FockRep::new(n)?)),
            (Group::Su2, _, _) => Err(Error::Unsupported("--group su2 takes --j (and not --nmax)".into())),
            (Group::Hw, _, _) => Err(Error::Unsupported("--group hw takes --nmax (and not --j)".into())),
        }
    }
}

#[derive(Args, Debug)]
struct QpdArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Ordering parameter in [-1, 1]; repeat for several.
    #[arg(long = "s", required = true, allow_negative_numbers = true, value_parser = parse_s)]
    s: Vec<SValue>,
    /// State spec (JSON).
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    grid_theta: Option<usize>,
    #[arg(long)]
    grid_phi: Option<usize>,
    #[arg(long, default_value_t = 20)]
    grid_radial: usize,
    #[arg(long, default_value_t = 40)]
    grid_angular: usize,
    /// Radial scale of the plane grid; defaults to 2/(1+s) per s.
    #[arg(long)]
    grid_scale: Option<f64>,
    #[arg(long, env = "SWQPD_OUT_DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    /// Grid CSV (or its manifest).
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true, value_parser = parse_s)]
    s_target: SValue,
    #[arg(long, env = "SWQPD_OUT_DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    input: PathBuf,
    #[arg(long, env = "SWQPD_OUT_DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, default_value_t = SuiteConfig::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = SuiteConfig::DEFAULT_TRIALS)]
    trials: usize,
    /// Ordering parameters; repeat for several. Defaults depend on the group.
    #[arg(long = "s", allow_negative_numbers = true, value_parser = parse_s)]
    s: Vec<SValue>,
    #[arg(long, env = "SWQPD_OUT_DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct KernelArgs {
    #[arg(long, value_parser = parse_spin)]
    j: SpinRep,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

fn parse_spin(text: &str) -> std::result::Result<SpinRep, String> {
    let rep = match text.split_once('/') {
        Some((num, "2")) => {
            let twice: u32 = num.trim().parse().map_err(|e| format!("{text:?}: {e}"))?;
            SpinRep::new(twice)
        }
        Some(_) => return Err(format!("{text:?}: fractional spins must have denominator 2")),
        None => SpinRep::from_j(text.trim().parse().map_err(|e| format!("{text:?}: {e}"))?),
    };
    rep.map_err(|e| e.to_string())
}

fn parse_s(text: &str) -> std::result::Result<SValue, String> {
    let v: f64 = text.parse().map_err(|e| format!("{text:?}: {e}"))?;
    SValue::new(v).map_err(|e| e.to_string())
}

fn s_tag(s: SValue) -> String {
    format!("s{}", s.value())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Qpd(a) => cmd_qpd(&a),
        Command::Convert(a) => cmd_convert(&a),
        Command::Reconstruct(a) => cmd_reconstruct(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Kernel(a) => cmd_kernel(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn cmd_qpd(args: &QpdArgs) -> Result<ExitCode> {
    let system = args.system.system()?;
    let text = std::fs::read_to_string(&args.state)?;
    let spec = StateSpec::from_json(&text)?;
    let state = spec.density_matrix(&system)?;
    let mut manifest = RunManifest::new("qpd", system);
    manifest.state = Some(serde_json::to_value(&spec)?);

    let grids: Vec<QpdGrid> = match system {
        System::Su2 { .. } => {
            if args.grid_scale.is_some() {
                return Err(Error::Unsupported("--grid-scale applies to plane grids".into()));
            }
            let kd = KernelData::new(system.spin_rep()?)?;
            let grid = sphere_grid(kd.rep(), args.grid_theta, args.grid_phi)?;
            args.s.iter().map(|s| weyl_map(&kd, &state.rho, *s, &grid)).collect::<Result<_>>()?
        }
        System::Hw { .. } => {
            if args.grid_theta.is_some() || args.grid_phi.is_some() {
                return Err(Error::Unsupported("--grid-theta/--grid-phi apply to sphere grids".into()));
            }
            let kernel = HwKernel::new(system.fock_rep()?);
            args.s
                .iter()
                .map(|s| {
                    let scale = args.grid_scale.unwrap_or(2.0 / (1.0 + s.value()));
                    let grid = plane_grid(args.grid_radial, args.grid_angular, scale)?;
                    hw_weyl_map(&kernel, &state.rho, *s, &grid)
                })
                .collect::<Result<_>>()?
        }
    };
    for g in &grids {
        let (csv, json) = write_grid(&args.out, &format!("qpd_{}", s_tag(g.s)), g, None)?;
        manifest.record(&csv, Some(g.s))?;
        manifest.record(&json, Some(g.s))?;
        println!("{} ({} nodes, integral {:.12})", csv.display(), g.values.len(), g.integral()?.re);
    }
    write_json(&args.out.join("manifest.json"), &manifest)?;
    info!("state pure: {}", state.pure);
    Ok(ExitCode::SUCCESS)
}

fn input_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "grid".into())
}

fn cmd_convert(args: &ConvertArgs) -> Result<ExitCode> {
    let (grid, manifest) = read_grid(&args.input)?;
    let converted = match grid.system {
        System::Su2 { .. } => {
            let kd = KernelData::new(grid.system.spin_rep()?)?;
            transform_qpd(&kd, &grid, args.s_target)?
        }
        System::Hw { .. } => hw_smooth(&grid, args.s_target)?,
    };
    let stem = format!("{}_to_{}", input_stem(&args.input), s_tag(args.s_target));
    let (csv, _) = write_grid(&args.out, &stem, &converted, Some(manifest.s))?;
    println!("{} (s = {} → {})", csv.display(), manifest.s, args.s_target);
    Ok(ExitCode::SUCCESS)
}

fn cmd_reconstruct(args: &ReconstructArgs) -> Result<ExitCode> {
    let (grid, manifest) = read_grid(&args.input)?;
    if let System::Hw { .. } = grid.system {
        return Err(Error::Unsupported(
            "reconstruction needs an exact quadrature and is available for su2 grids only".into(),
        ));
    }
    let kd = KernelData::new(grid.system.spin_rep()?)?;
    let a = inverse_weyl(&kd, &grid)?;
    // consistency: the forward map of the result must reproduce the samples
    let quad = grid.quadrature()?;
    let forward = match &quad {
        swqpd_core::qpd::Quadrature::Sphere(g) => weyl_map(&kd, &a, grid.s, g)?,
        swqpd_core::qpd::Quadrature::Plane(_) => unreachable!("su2 grids are sphere grids"),
    };
    let residual = grid
        .values
        .iter()
        .zip(&forward.values)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    std::fs::create_dir_all(&args.out)?;
    let path = args.out.join(format!("{}_operator.json", input_stem(&args.input)));
    write_json(&path, &OperatorFile::new(grid.system, &a, Some(manifest.s)))?;
    let tr = a.trace();
    println!("{}", path.display());
    println!("hermiticity defect {:.3e}", hermiticity_defect(&a));
    println!("trace {:.12} {:+.3e}i", tr.re, tr.im);
    println!("sample residual {residual:.3e}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let system = match args.system.system()? {
        System::Su2 { .. } => TestSystem::su2(args.system.j.expect("checked"))?,
        System::Hw { n_max } => TestSystem::hw(n_max)?,
    };
    let defaults = SuiteConfig::default_for(&system);
    let s_values = if args.s.is_empty() { defaults.s_values } else { args.s.clone() };
    let cfg = SuiteConfig::new(s_values, args.trials, args.seed)?;
    let reports = verify_all(&system, &cfg)?;
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        println!("{r}");
    }
    std::fs::create_dir_all(&args.out)?;
    let path = args.out.join("verify_report.json");
    let doc = json!({
        "software": SOFTWARE_VERSION,
        "system": system.descriptor(),
        "seed": cfg.seed,
        "trials": cfg.trials,
        "s_values": cfg.s_values,
        "passed": passed,
        "reports": reports,
    });
    write_json(&path, &doc)?;
    println!("{}", path.display());
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_kernel(args: &KernelArgs) -> Result<ExitCode> {
    let kd = KernelData::new(args.j)?;
    if args.json {
        let doc = json!({
            "software": SOFTWARE_VERSION,
            "system": System::su2(&args.j),
            "tau": kd.tau(),
            "omega": kd.omega(),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("j = {}", args.j);
        println!("{:>3}  {:>24}  {:>24}", "L", "tau_L", "omega_L");
        for (l, (t, w)) in kd.tau().iter().zip(kd.omega()).enumerate() {
            println!("{l:>3}  {t:>24.16e}  {w:>24.16e}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
