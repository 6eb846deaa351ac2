//! `tcflow`: compile Turing machines to Cantor-square dynamics, simulate
//! them, and run the verification suites.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure or domain
//! error, 3 budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use tcflow::cantor::export::{block_svg, orbit, orbit_csv};
use tcflow::cantor::{encode_config, CantorPoint, Rational, TwistMap};
use tcflow::lift::{
    flow_integrate, lift_vf, trajectory_csv, verdict_line, DiscPipeline, PlanarField, ProductChartState,
};
use tcflow::tm::{run_bounded, TuringMachine};
use tcflow::verify::{self, Fault, Tolerances, VerifyConfig, POISSON_SUITES, SUITES};
use tcflow::Execution;

/// Largest accepted `--steps`.
const MAX_STEPS: usize = 1_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "tcflow",
    version,
    about = "Turing machines as area-preserving Cantor dynamics and volume-preserving flows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Number of discrete steps (simulate, plot) or integration steps (--flow).
    #[arg(long, global = true, default_value_t = 100)]
    steps: usize,
    /// Integration time step.
    #[arg(long, global = true, default_value_t = tcflow::lift::DEFAULT_DT)]
    dt: f64,
    /// Seed for sampled points.
    #[arg(long, global = true, default_value_t = tcflow::sampling::DEFAULT_SEED)]
    seed: u64,
    /// Tolerance override, repeatable.
    #[arg(long = "tol", value_name = "NAME=X", global = true)]
    tol: Vec<String>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the shift table and block-map dumps for a machine.
    Compile { path: PathBuf },
    /// Iterate the block map from the machine's initial configuration.
    Simulate {
        path: PathBuf,
        /// Also write the block diagram.
        #[arg(long)]
        svg: bool,
        /// Start from this point `x,y` (rationals such as `1/3`) instead.
        #[arg(long, value_name = "X,Y")]
        start: Option<String>,
        /// Integrate a lifted field from the embedded start and write its
        /// trajectory.
        #[arg(long, value_enum)]
        flow: Option<FlowField>,
    },
    /// Run verification suites; with no suite named, list them.
    Verify {
        /// Suite names, or `all`.
        suites: Vec<String>,
        #[arg(long, value_enum, default_value_t = FaultArg::None)]
        fault: FaultArg,
        /// Run every check on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Run the Poisson-geometry suites.
    PoissonCheck {
        #[arg(long, value_enum, default_value_t = FaultArg::None)]
        fault: FaultArg,
        #[arg(long)]
        sequential: bool,
    },
    /// Write the block diagram with the orbit and halting region.
    Plot { path: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FaultArg {
    None,
    SignFlip,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FlowField {
    Rotation,
    Rho,
    Sigma,
}

enum Failure {
    Input(String),
    Verification(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Verification(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Verification(m) | Failure::Budget(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if !(cli.dt > 0.0 && cli.dt.is_finite()) {
        return Err(Failure::Input(format!("--dt must be positive, got {}", cli.dt)));
    }
    let mut tol = Tolerances::default();
    for t in &cli.tol {
        tol.set_assignment(t).map_err(|e| Failure::Input(e.to_string()))?;
    }
    match &cli.command {
        Command::Compile { path } => compile(cli, path),
        Command::Simulate { path, svg, start, flow } => simulate(cli, path, *svg, start.as_deref(), *flow),
        Command::Verify { suites, fault, sequential } => {
            if suites.is_empty() {
                for (name, about, _) in SUITES {
                    println!("{name:<12} {about}");
                }
                return Ok(());
            }
            run_suites(cli, tol, suites, *fault, *sequential)
        }
        Command::PoissonCheck { fault, sequential } => {
            let names: Vec<String> = POISSON_SUITES.iter().map(|s| s.to_string()).collect();
            run_suites(cli, tol, &names, *fault, *sequential)
        }
        Command::Plot { path } => plot(cli, path),
    }
}

fn load(path: &Path) -> Result<TuringMachine, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    TuringMachine::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn out_dir(cli: &Cli) -> Result<PathBuf, Failure> {
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn write(dir: &Path, name: &str, contents: &str) -> Outcome {
    let p = dir.join(name);
    fs::write(&p, contents).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    println!("wrote {}", p.display());
    Ok(())
}

fn check_budget(steps: usize) -> Outcome {
    if steps > MAX_STEPS {
        return Err(Failure::Budget(format!("--steps {steps} exceeds the limit of {MAX_STEPS}")));
    }
    Ok(())
}

fn compile(cli: &Cli, path: &Path) -> Outcome {
    let tm = load(path)?;
    let p = DiscPipeline::new(&tm);
    let dir = out_dir(cli)?;
    write(&dir, "shift.txt", &p.compiled.dump())?;
    let names = |l| p.compiled.alphabet.name(&tm, l);
    write(&dir, "blocks.txt", &p.map.dump(names))?;
    let identity = p.map.pieces.iter().filter(|pc| pc.is_identity()).count();
    println!("alphabet: {} letters, base {}", p.compiled.alphabet.len(), p.map.base);
    println!("pieces: {} ({} identity)", p.map.pieces.len(), identity);
    if p.map.all_identity() {
        println!("all pieces are the identity");
    }
    Ok(())
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d): (BigInt, BigInt) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
            (d != BigInt::from(0)).then(|| Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

fn simulate(cli: &Cli, path: &Path, svg: bool, start: Option<&str>, flow: Option<FlowField>) -> Outcome {
    let tm = load(path)?;
    check_budget(cli.steps)?;
    let p = DiscPipeline::new(&tm);
    let dir = out_dir(cli)?;
    let initial = encode_config(&p.compiled.encode(&tm.initial_config()), p.compiled.alphabet.len());
    let from = match start {
        None => initial.clone(),
        Some(s) => {
            let (x, y) = s
                .split_once(',')
                .and_then(|(x, y)| Some((parse_rational(x)?, parse_rational(y)?)))
                .ok_or_else(|| Failure::Input(format!("--start expects X,Y rationals, got `{s}`")))?;
            CantorPoint::new(x, y, p.map.base)
        }
    };
    let points = orbit(&p.map, &from, cli.steps).map_err(|e| Failure::Verification(e.to_string()))?;
    write(&dir, "orbit.csv", &orbit_csv(&points, &p.region))?;
    if svg {
        write(&dir, "blocks.svg", &block_svg(&p.map, &p.region, &points))?;
    }
    if start.is_none() {
        let verdict = p.reach(&tm.initial_config(), cli.steps).map_err(|e| Failure::Verification(e.to_string()))?;
        let run = run_bounded(&tm, &tm.initial_config(), cli.steps).verdict;
        let name = path.file_stem().map_or("machine".into(), |s| s.to_string_lossy().into_owned());
        let agrees = verdict.agrees_with(&run);
        println!("{}", verdict_line(&name, &verdict, agrees));
        if !agrees {
            return Err(Failure::Verification(format!("verdict {verdict} disagrees with {run:?}")));
        }
    }
    if let Some(field) = flow {
        let x = match field {
            FlowField::Rotation => PlanarField::rotation(),
            FlowField::Rho => PlanarField::twist("rho", TwistMap::rho()),
            FlowField::Sigma => PlanarField::twist("sigma", TwistMap::sigma()),
        };
        let (u, v) = from.to_f64();
        let s = ProductChartState::new([u - 0.5, v - 0.5], [0.0, 0.0])
            .ok_or_else(|| Failure::Verification("start point lies outside the disc".into()))?;
        let t = cli.steps as f64 * cli.dt;
        let tr = flow_integrate(&lift_vf(&x), &s, t, cli.dt).map_err(|e| Failure::Verification(e.to_string()))?;
        write(&dir, "trajectory.csv", &trajectory_csv(&tr, |st| p.in_region_f64(st.horizontal)))?;
    }
    Ok(())
}

fn plot(cli: &Cli, path: &Path) -> Outcome {
    let tm = load(path)?;
    check_budget(cli.steps)?;
    let p = DiscPipeline::new(&tm);
    let initial = encode_config(&p.compiled.encode(&tm.initial_config()), p.compiled.alphabet.len());
    let points = orbit(&p.map, &initial, cli.steps).map_err(|e| Failure::Verification(e.to_string()))?;
    write(&out_dir(cli)?, "blocks.svg", &block_svg(&p.map, &p.region, &points))
}

fn run_suites(cli: &Cli, tol: Tolerances, suites: &[String], fault: FaultArg, sequential: bool) -> Outcome {
    let cfg = VerifyConfig {
        seed: cli.seed,
        exec: if sequential { Execution::Sequential } else { Execution::Parallel },
        tol,
        fault: match fault {
            FaultArg::None => Fault::None,
            FaultArg::SignFlip => Fault::SignFlip,
        },
        dt: cli.dt,
        ..VerifyConfig::default()
    };
    let report = verify::run(suites, &cfg).map_err(|e| Failure::Input(e.to_string()))?;
    print!("{}", report.to_human());
    if cli.out.is_some() {
        write(&out_dir(cli)?, "report.csv", &report.to_csv())?;
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verification("some checks failed".into()))
    }
}
