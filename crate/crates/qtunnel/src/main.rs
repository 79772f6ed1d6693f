use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qtunnel::error::Error;
use qtunnel::evolve::{trotter_vs_exact_report, Mode, TrotterConfig};
use qtunnel::gates::circuit_unitary;
use qtunnel::potential::{parse_potential_file, pauli_decompose};
use qtunnel::runner::{self, ExperimentConfig, PotentialChoice};
use qtunnel::spectral::MomentumConvention;
use qtunnel::state::{fidelity, StateVector};
use qtunnel::{nmr, Result};

#[derive(Parser)]
#[command(
    name = "qtunnel",
    version,
    about = "Digital simulation of 1-D quantum tunneling on a qubit lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment preset or configuration file and write its traces.
    Run {
        /// One of: paper-2q-doublewell, paper-2q-free, paper-3q-doublewell.
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Flat key=value configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write grouped-bar SVG charts next to the CSVs.
        #[arg(long)]
        svg: bool,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Override the mode list, comma separated: trotter, exact, free.
        #[arg(long)]
        mode: Option<String>,
        /// Custom diagonal potential, one real per line, 2^n lines.
        #[arg(long)]
        potential_file: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Run the invariant suite and print one line per check.
    Verify {
        /// Momentum convention: standard or literal-eq6. The literal table
        /// is expected to fail the three-qubit decomposition check,
        /// demonstrating the convention mismatch it documents.
        #[arg(long, default_value = "standard")]
        convention: String,
    },
    /// Check a pulse sequence against a target circuit up to global phase.
    VerifyPulse {
        /// Spin system file (`nu i <Hz>` / `J i j <Hz>` lines).
        #[arg(long)]
        system: PathBuf,
        /// Pulse program (`P <spin> <axis> <angle>` / `D <seconds> [i-j,...]`).
        #[arg(long)]
        sequence: PathBuf,
        /// Target as a circuit text file.
        #[arg(long)]
        target_circuit: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Print the Pauli-Z decomposition of a potential file.
    Decompose {
        #[arg(long)]
        potential_file: PathBuf,
    },
    /// Per-step overlap between the split-step run and exact evolution.
    Compare {
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Additionally report final overlaps after halving dt this many times.
        #[arg(long, default_value_t = 0)]
        refinements: usize,
    },
}

const EXIT_CHECK_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let usage = matches!(
                err,
                Error::Config { .. } | Error::Parse { .. } | Error::UnknownPreset(_)
            );
            ExitCode::from(if usage { EXIT_USAGE } else { EXIT_CHECK_FAILURE })
        }
    }
}

fn load_config(
    preset: Option<String>,
    config: Option<PathBuf>,
) -> Result<ExperimentConfig> {
    match (preset, config) {
        (Some(name), None) => runner::preset(&name),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path)?;
            runner::parse_config(&text)
        }
        _ => Err(Error::config(
            "preset/config",
            "exactly one of --preset or --config is required",
        )),
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run {
            preset,
            config,
            out_dir,
            svg,
            dt,
            steps,
            mode,
            potential_file,
            name,
        } => {
            let mut cfg = load_config(preset, config)?;
            if let Some(dir) = out_dir {
                cfg.out_dir = dir;
            }
            if svg {
                cfg.emit_svg = true;
            }
            if let Some(dt) = dt {
                cfg.dt = dt;
            }
            if let Some(steps) = steps {
                cfg.steps = steps;
            }
            if let Some(mode) = mode {
                let mut modes = Vec::new();
                for part in mode.split(',') {
                    modes.push(Mode::parse(part.trim()).ok_or_else(|| {
                        Error::config("mode", format!("unknown mode `{part}`"))
                    })?);
                }
                cfg.modes = modes;
            }
            if let Some(path) = potential_file {
                cfg.potential = PotentialChoice::File(path);
            }
            if let Some(name) = name {
                cfg.name = name;
            }
            let output = runner::run_experiment(&cfg)?;
            for artifacts in &output.per_mode {
                println!("wrote {}", artifacts.csv_path.display());
                if let Some(svg) = &artifacts.svg_path {
                    println!("wrote {}", svg.display());
                }
            }
            println!("wrote {}", output.manifest_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { convention } => {
            let conv = MomentumConvention::parse(&convention).ok_or_else(|| {
                Error::config("convention", format!("unknown convention `{convention}`"))
            })?;
            let results = runner::verify_all(conv);
            print!("{}", runner::format_report(&results));
            if results.iter().all(|r| r.passed) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_CHECK_FAILURE))
            }
        }
        Command::VerifyPulse {
            system,
            sequence,
            target_circuit,
            tol,
        } => {
            let sys = nmr::parse_spin_system(&std::fs::read_to_string(&system)?)?;
            let seq = nmr::parse_pulse_sequence(&std::fs::read_to_string(&sequence)?)?;
            let circuit = qtunnel::gates::parse_circuit(&std::fs::read_to_string(&target_circuit)?)?;
            if circuit.n_qubits() != sys.n_spins() {
                return Err(Error::DimensionMismatch {
                    left: circuit.n_qubits(),
                    right: sys.n_spins(),
                });
            }
            let target = circuit_unitary(&circuit)?;
            let check = nmr::verify_sequence(&sys, &seq, &target, tol)?;
            println!(
                "{}  residual {:.3e}  (tolerance {:.1e})",
                if check.matches { "MATCH" } else { "MISMATCH" },
                check.residual,
                tol
            );
            Ok(if check.matches {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILURE)
            })
        }
        Command::Decompose { potential_file } => {
            let pot = parse_potential_file(&std::fs::read_to_string(&potential_file)?)?;
            print!("{}", pauli_decompose(&pot));
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare {
            preset,
            config,
            refinements,
        } => {
            let cfg = load_config(preset, config)?;
            let pot = cfg.build_potential()?;
            let initial = StateVector::basis_state(cfg.n_qubits, &cfg.initial_label)?;
            let mode = if cfg.modes.contains(&Mode::Free) {
                Mode::Free
            } else {
                Mode::Trotter
            };
            let run_cfg = TrotterConfig::new(cfg.dt, cfg.steps, cfg.mass, mode)?;
            let report = trotter_vs_exact_report(&pot, &run_cfg, &initial)?;
            println!("step  |<exact|trotter>|^2");
            for (t, overlap) in report.overlaps().iter().enumerate() {
                println!("{:>4}  {:.12}", t + 1, overlap);
            }
            println!("final overlap: {:.6}", report.final_overlap());

            // final-state fidelity between the two backends
            let split = qtunnel::evolve::evolve(&initial, &pot, &run_cfg)?;
            let exact_cfg = TrotterConfig {
                mode: Mode::Exact,
                ..run_cfg
            };
            let exact = qtunnel::evolve::evolve(&initial, &pot, &exact_cfg)?;
            let f = fidelity(
                &split.final_state.density_matrix()?,
                &exact.final_state.density_matrix()?,
            )?;
            println!("final-state fidelity: {f:.6}");

            let mut refined = run_cfg;
            for k in 1..=refinements {
                refined = refined.refined();
                let r = trotter_vs_exact_report(&pot, &refined, &initial)?;
                println!(
                    "refinement {k}: dt {:.6}, steps {}, final overlap {:.6}",
                    refined.dt,
                    refined.steps,
                    r.final_overlap()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
