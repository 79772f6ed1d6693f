//! Canned experiments, key=value configuration, trace serialization
//! (CSV + SVG + manifest), and the one-shot invariant suite.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::evolve::{
    self, evolve, trotter_step, trotter_step_reversed, trotter_vs_exact_report, Mode,
    ProbabilityTrace, TrotterConfig,
};
use crate::gates::{circuit_unitary, global_phase_residual};
use crate::linalg;
use crate::nmr;
use crate::potential::{self, PotentialSpec};
use crate::spectral::{self, MomentumConvention};
use crate::state::StateVector;

/// Where the diagonal potential of a run comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialChoice {
    DoubleWell { v0: f64 },
    Free,
    File(PathBuf),
}

impl PotentialChoice {
    fn describe(&self) -> String {
        match self {
            PotentialChoice::DoubleWell { v0 } => format!("double_well v0={v0}"),
            PotentialChoice::Free => "free".to_string(),
            PotentialChoice::File(path) => format!("file {}", path.display()),
        }
    }
}

/// Full description of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub n_qubits: usize,
    pub initial_label: String,
    pub potential: PotentialChoice,
    pub dt: f64,
    pub steps: usize,
    pub mass: f64,
    /// Modes to run; each emits its own CSV (the three-qubit preset emits
    /// the split-step and exact traces side by side).
    pub modes: Vec<Mode>,
    pub out_dir: PathBuf,
    pub emit_svg: bool,
    /// Echoed into the manifest for randomized extensions; the canned runs
    /// are deterministic and ignore it.
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.initial_label.len() != self.n_qubits {
            return Err(Error::config(
                "initial",
                format!(
                    "label `{}` does not match n_qubits={}",
                    self.initial_label, self.n_qubits
                ),
            ));
        }
        if self.modes.is_empty() {
            return Err(Error::config("mode", "at least one mode required"));
        }
        TrotterConfig::new(self.dt, self.steps, self.mass, self.modes[0])?;
        Ok(())
    }

    pub fn build_potential(&self) -> Result<PotentialSpec> {
        match &self.potential {
            PotentialChoice::DoubleWell { v0 } => potential::double_well(self.n_qubits, *v0),
            PotentialChoice::Free => potential::free_potential(self.n_qubits),
            PotentialChoice::File(path) => {
                let text = std::fs::read_to_string(path)?;
                let pot = potential::parse_potential_file(&text)?;
                if pot.n_qubits() != self.n_qubits {
                    return Err(Error::config(
                        "potential_file",
                        format!(
                            "file encodes {} qubits but the run uses {}",
                            pot.n_qubits(),
                            self.n_qubits
                        ),
                    ));
                }
                Ok(pot)
            }
        }
    }

    fn trotter_config(&self, mode: Mode) -> Result<TrotterConfig> {
        TrotterConfig::new(self.dt, self.steps, self.mass, mode)
    }
}

/// The published parameter sets.
pub const PRESET_NAMES: [&str; 3] = ["paper-2q-doublewell", "paper-2q-free", "paper-3q-doublewell"];

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let base = ExperimentConfig {
        name: name.to_string(),
        n_qubits: 2,
        initial_label: "01".to_string(),
        potential: PotentialChoice::DoubleWell { v0: 10.0 },
        dt: 0.1,
        steps: 9,
        mass: evolve::DEFAULT_MASS,
        modes: vec![Mode::Trotter],
        out_dir: PathBuf::from("."),
        emit_svg: false,
        seed: None,
    };
    match name {
        "paper-2q-doublewell" => Ok(base),
        "paper-2q-free" => Ok(ExperimentConfig {
            potential: PotentialChoice::Free,
            modes: vec![Mode::Free],
            ..base
        }),
        "paper-3q-doublewell" => Ok(ExperimentConfig {
            n_qubits: 3,
            initial_label: "110".to_string(),
            potential: PotentialChoice::DoubleWell { v0: 100.0 },
            dt: 0.4,
            steps: 5,
            modes: vec![Mode::Trotter, Mode::Exact],
            ..base
        }),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Parse the flat key=value run configuration. Recognized keys:
/// `name, n_qubits, initial, potential (double_well|free|file), v0,
/// potential_file, dt, steps, mass, mode (comma list), emit_svg, seed`.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig {
        name: "run".to_string(),
        n_qubits: 0,
        initial_label: String::new(),
        potential: PotentialChoice::Free,
        dt: 0.0,
        steps: 0,
        mass: evolve::DEFAULT_MASS,
        modes: vec![Mode::Trotter],
        out_dir: PathBuf::from("."),
        emit_svg: false,
        seed: None,
    };
    let mut v0: Option<f64> = None;
    let mut potential_kind: Option<String> = None;
    let mut potential_file: Option<PathBuf> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| {
            Error::parse(lineno + 1, format!("expected key=value, got `{body}`"))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |msg: &str| Error::config(key, format!("{msg}: `{value}`"));
        match key {
            "name" => cfg.name = value.to_string(),
            "n_qubits" => cfg.n_qubits = value.parse().map_err(|_| bad("not an integer"))?,
            "initial" => cfg.initial_label = value.to_string(),
            "potential" => potential_kind = Some(value.to_ascii_lowercase()),
            "v0" => v0 = Some(value.parse().map_err(|_| bad("not a number"))?),
            "potential_file" => potential_file = Some(PathBuf::from(value)),
            "dt" => cfg.dt = value.parse().map_err(|_| bad("not a number"))?,
            "steps" => cfg.steps = value.parse().map_err(|_| bad("not an integer"))?,
            "mass" => cfg.mass = value.parse().map_err(|_| bad("not a number"))?,
            "mode" => {
                let mut modes = Vec::new();
                for part in value.split(',') {
                    modes.push(
                        Mode::parse(part.trim())
                            .ok_or_else(|| bad("expected trotter, exact, or free"))?,
                    );
                }
                cfg.modes = modes;
            }
            "emit_svg" => {
                cfg.emit_svg = value
                    .parse()
                    .map_err(|_| bad("expected true or false"))?
            }
            "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("not an integer"))?),
            other => {
                return Err(Error::config(other, "unknown configuration key"));
            }
        }
    }

    cfg.potential = match potential_kind.as_deref() {
        None | Some("free") => PotentialChoice::Free,
        Some("double_well") | Some("doublewell") => {
            let v0 = v0.ok_or_else(|| Error::config("v0", "required for a double_well run"))?;
            PotentialChoice::DoubleWell { v0 }
        }
        Some("file") => PotentialChoice::File(
            potential_file
                .ok_or_else(|| Error::config("potential_file", "required for potential=file"))?,
        ),
        Some(other) => {
            return Err(Error::config(
                "potential",
                format!("unknown kind `{other}`"),
            ))
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

/// One emitted trace with its artifact paths.
#[derive(Debug, Clone)]
pub struct ModeArtifacts {
    pub mode: Mode,
    pub trace: ProbabilityTrace,
    pub csv_path: PathBuf,
    pub svg_path: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub per_mode: Vec<ModeArtifacts>,
    pub manifest_path: PathBuf,
}

fn basis_label(k: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if k >> (n_qubits - 1 - q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Serialize a trace: one row per (step, site), probabilities with twelve
/// decimal digits so reruns are byte-identical.
pub fn trace_to_csv(trace: &ProbabilityTrace) -> String {
    let mut out = String::from("step,site_index_1_based,basis_label,probability\n");
    for (step, row) in trace.rows().iter().enumerate() {
        for (k, p) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{:.12}",
                step,
                k + 1,
                basis_label(k, trace.n_qubits()),
                p
            );
        }
    }
    out
}

/// Grouped bar chart of a trace, one group per step. The CSV is the
/// contract; this is a visual convenience.
pub fn trace_to_svg(trace: &ProbabilityTrace, title: &str) -> String {
    const PALETTE: [&str; 8] = [
        "#4477aa", "#66ccee", "#228833", "#ccbb44", "#ee6677", "#aa3377", "#bbbbbb", "#222222",
    ];
    let sites = trace.sites();
    let steps = trace.rows().len();
    let bar_w = 10.0;
    let gap = 14.0;
    let group_w = sites as f64 * bar_w + gap;
    let plot_h = 220.0;
    let margin = 40.0;
    let width = margin * 2.0 + steps as f64 * group_w;
    let height = plot_h + margin * 2.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{margin}" y="20" font-family="sans-serif" font-size="13">{title}</text>"#
    );
    let base_y = margin + plot_h;
    let _ = writeln!(
        svg,
        r##"<line x1="{margin}" y1="{base_y}" x2="{:.1}" y2="{base_y}" stroke="#000"/>"##,
        width - margin
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{base_y}" stroke="#000"/>"##
    );
    for (step, row) in trace.rows().iter().enumerate() {
        let x0 = margin + step as f64 * group_w;
        for (site, p) in row.iter().enumerate() {
            let h = p.clamp(0.0, 1.0) * plot_h;
            let x = x0 + site as f64 * bar_w;
            let y = base_y - h;
            let _ = writeln!(
                svg,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{:.1}" height="{h:.1}" fill="{}"/>"#,
                bar_w - 1.0,
                PALETTE[site % PALETTE.len()]
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10">{step}</text>"#,
            x0 + group_w / 2.0 - gap,
            base_y + 14.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn manifest_text(cfg: &ExperimentConfig, per_mode: &[ModeArtifacts]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", cfg.name);
    let _ = writeln!(out, "n_qubits = {}", cfg.n_qubits);
    let _ = writeln!(out, "initial = {}", cfg.initial_label);
    let _ = writeln!(out, "potential = {}", cfg.potential.describe());
    let _ = writeln!(out, "dt = {}", cfg.dt);
    let _ = writeln!(out, "steps = {}", cfg.steps);
    let _ = writeln!(out, "mass = {}", cfg.mass);
    let _ = writeln!(
        out,
        "modes = {}",
        cfg.modes
            .iter()
            .map(|m| m.name())
            .collect::<Vec<_>>()
            .join(",")
    );
    if let Some(seed) = cfg.seed {
        let _ = writeln!(out, "seed = {seed}");
    }
    for artifacts in per_mode {
        let _ = writeln!(
            out,
            "csv_{} = {}",
            artifacts.mode.name(),
            artifacts.csv_path.display()
        );
    }
    out
}

/// Run every mode of the experiment and write CSV, optional SVG, and the
/// manifest under `cfg.out_dir`. Identical configs produce byte-identical
/// CSV files.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let pot = cfg.build_potential()?;
    let initial = StateVector::basis_state(cfg.n_qubits, &cfg.initial_label)?;
    std::fs::create_dir_all(&cfg.out_dir)?;

    let single_mode = cfg.modes.len() == 1;
    let mut per_mode = Vec::new();
    for &mode in &cfg.modes {
        let run_cfg = cfg.trotter_config(mode)?;
        let result = evolve(&initial, &pot, &run_cfg)?;
        let stem = if single_mode {
            cfg.name.clone()
        } else {
            format!("{}-{}", cfg.name, mode.name())
        };
        let csv_path = cfg.out_dir.join(format!("{stem}.csv"));
        std::fs::write(&csv_path, trace_to_csv(&result.trace))?;
        let svg_path = if cfg.emit_svg {
            let path = cfg.out_dir.join(format!("{stem}.svg"));
            let title = format!("{} [{}]", cfg.name, mode.name());
            std::fs::write(&path, trace_to_svg(&result.trace, &title))?;
            Some(path)
        } else {
            None
        };
        per_mode.push(ModeArtifacts {
            mode,
            trace: result.trace,
            csv_path,
            svg_path,
        });
    }

    let manifest_path = cfg.out_dir.join(format!("{}.manifest", cfg.name));
    std::fs::write(&manifest_path, manifest_text(cfg, &per_mode))?;
    Ok(RunOutput {
        per_mode,
        manifest_path,
    })
}

// ---------------------------------------------------------------------------
// Invariant suite
// ---------------------------------------------------------------------------

/// Outcome of one named invariant check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: false,
            detail,
        }
    }

    fn of(name: &'static str, passed: bool, detail: String) -> Self {
        if passed {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail)
        }
    }
}

/// Run the full invariant suite. With the literal momentum convention the
/// three-qubit decomposition check fails; that failure documents the
/// convention resolution and is the expected outcome of
/// `verify --convention literal-eq6`.
pub fn verify_all(convention: MomentumConvention) -> Vec<CheckResult> {
    vec![
        check_qft_unitarity(),
        check_qft_ladder_form(),
        check_decomposition(2, &[0.05, 0.1, 0.7], convention),
        check_decomposition(3, &[0.1, 0.4], convention),
        check_single_step_values(),
        check_norm_conservation(),
        check_energy_conservation(),
        check_time_reversal(),
        check_first_step_equivalence(),
        check_refinement(),
        check_pulse_timing(),
        check_pulse_q_gate(),
        check_pulse_qft(),
    ]
}

fn check_qft_unitarity() -> CheckResult {
    let mut worst = 0.0f64;
    for n in 1..=6 {
        match spectral::qft_matrix(n) {
            Ok(f) => worst = worst.max(linalg::unitarity_defect(&f)),
            Err(e) => return CheckResult::fail("qft-unitarity", e.to_string()),
        }
    }
    CheckResult::of(
        "qft-unitarity",
        worst < 1e-12,
        format!("max F†F defect over n=1..6: {worst:.2e}"),
    )
}

fn check_qft_ladder_form() -> CheckResult {
    let go = || -> Result<f64> {
        let mut worst = 0.0f64;
        for n in 1..=5 {
            let ladder = circuit_unitary(&spectral::qft_circuit(n)?)?;
            let direct = spectral::qft_matrix(n)?;
            worst = worst.max(linalg::max_abs_diff(&ladder, &direct));
        }
        Ok(worst)
    };
    match go() {
        Ok(worst) => CheckResult::of(
            "qft-ladder-form",
            worst < 1e-12,
            format!("max |ladder - matrix| over n=1..5: {worst:.2e}"),
        ),
        Err(e) => CheckResult::fail("qft-ladder-form", e.to_string()),
    }
}

fn check_decomposition(n: usize, dts: &[f64], convention: MomentumConvention) -> CheckResult {
    let name = if n == 2 {
        "decomposition-match-2q"
    } else {
        "decomposition-match-3q"
    };
    let go = || -> Result<f64> {
        let mut worst = 0.0f64;
        for &dt in dts {
            let product = circuit_unitary(&spectral::methods_decomposition_d(n, dt)?)?;
            let target = spectral::kinetic_diag_with(n, dt, 0.5, convention)?.as_matrix();
            worst = worst.max(global_phase_residual(&product, &target)?);
        }
        Ok(worst)
    };
    match go() {
        Ok(worst) => CheckResult::of(
            name,
            worst < 1e-10,
            format!("max residual vs kinetic diagonal: {worst:.2e}"),
        ),
        Err(e) => CheckResult::fail(name, e.to_string()),
    }
}

fn check_single_step_values() -> CheckResult {
    let go = || -> Result<(f64, f64)> {
        let initial = StateVector::basis_state(2, "01")?;
        let pot = potential::double_well(2, 10.0)?;
        let cfg = TrotterConfig::new(0.1, 9, 0.5, Mode::Trotter)?;
        let stepped = trotter_step(&initial, &pot, &cfg)?;
        let probs = stepped.probabilities();

        // dense product of the engine's own factors
        let f = spectral::qft_matrix(2)?;
        let kin = spectral::kinetic_diag(2, cfg.dt, cfg.mass)?;
        let d = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            kin.momentum_ordered(),
        ));
        let q_phases = potential::propagator_phases(&pot, cfg.dt);
        let q = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(q_phases));
        let u = f.adjoint() * d * f * q;
        let dense_err = (0..4)
            .map(|r| (u[(r, 1)].norm_sqr() - probs[r]).abs())
            .fold(0.0, f64::max);

        let published = [0.0259, 0.8709, 0.0470, 0.0561];
        let published_err = probs
            .iter()
            .zip(published)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        Ok((dense_err, published_err))
    };
    match go() {
        Ok((dense_err, published_err)) => CheckResult::of(
            "single-step-values",
            dense_err < 1e-10 && published_err < 1e-3,
            format!("dense-product err {dense_err:.2e}, published-value err {published_err:.2e}"),
        ),
        Err(e) => CheckResult::fail("single-step-values", e.to_string()),
    }
}

fn preset_runs() -> Result<Vec<(ExperimentConfig, Mode)>> {
    let mut runs = Vec::new();
    for name in PRESET_NAMES {
        let cfg = preset(name)?;
        for &mode in &cfg.modes {
            runs.push((cfg.clone(), mode));
        }
    }
    Ok(runs)
}

fn check_norm_conservation() -> CheckResult {
    let go = || -> Result<f64> {
        let mut worst = 0.0f64;
        for (cfg, mode) in preset_runs()? {
            let pot = cfg.build_potential()?;
            let initial = StateVector::basis_state(cfg.n_qubits, &cfg.initial_label)?;
            let result = evolve(&initial, &pot, &cfg.trotter_config(mode)?)?;
            for sum in result.trace.row_sums() {
                worst = worst.max((sum - 1.0).abs());
            }
        }
        Ok(worst)
    };
    match go() {
        Ok(worst) => CheckResult::of(
            "norm-conservation",
            worst < 1e-10,
            format!("max |row sum - 1| over presets: {worst:.2e}"),
        ),
        Err(e) => CheckResult::fail("norm-conservation", e.to_string()),
    }
}

fn check_energy_conservation() -> CheckResult {
    let go = || -> Result<f64> {
        let pot = potential::double_well(3, 100.0)?;
        let h = evolve::exact_hamiltonian(&pot, 0.5)?;
        let u = evolve::exact_propagator(&pot, 0.4, 0.5)?;
        let initial = StateVector::basis_state(3, "110")?;
        let e0 = evolve::energy_expectation(&initial, &h);
        let mut amps = initial.amplitudes().to_vec();
        let mut drift = 0.0f64;
        for _ in 0..5 {
            let mut next = vec![num_complex::Complex64::ZERO; amps.len()];
            for (r, slot) in next.iter_mut().enumerate() {
                for (k, amp) in amps.iter().enumerate() {
                    *slot += u[(r, k)] * amp;
                }
            }
            amps = next;
            let s = StateVector::new(3, amps.clone())?;
            drift = drift.max((evolve::energy_expectation(&s, &h) - e0).abs());
        }
        Ok(drift)
    };
    match go() {
        Ok(drift) => CheckResult::of(
            "energy-conservation",
            drift < 1e-9,
            format!("max energy drift in exact mode: {drift:.2e}"),
        ),
        Err(e) => CheckResult::fail("energy-conservation", e.to_string()),
    }
}

fn check_time_reversal() -> CheckResult {
    let go = || -> Result<f64> {
        let pot = potential::double_well(2, 10.0)?;
        let cfg = TrotterConfig::new(0.1, 9, 0.5, Mode::Trotter)?;
        let initial = StateVector::basis_state(2, "01")?;
        let mut s = initial.clone();
        for _ in 0..cfg.steps {
            s = trotter_step(&s, &pot, &cfg)?;
        }
        for _ in 0..cfg.steps {
            s = trotter_step_reversed(&s, &pot, &cfg)?;
        }
        let err = s
            .amplitudes()
            .iter()
            .zip(initial.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        Ok(err)
    };
    match go() {
        Ok(err) => CheckResult::of(
            "time-reversal",
            err < 1e-10,
            format!("9 steps forward + 9 reversed: max amplitude err {err:.2e}"),
        ),
        Err(e) => CheckResult::fail("time-reversal", e.to_string()),
    }
}

fn check_first_step_equivalence() -> CheckResult {
    let go = || -> Result<f64> {
        let mut worst = 0.0f64;
        for (n, v0, dt) in [(2usize, 10.0, 0.1), (3, 100.0, 0.4)] {
            let pot = potential::double_well(n, v0)?;
            let free = potential::free_potential(n)?;
            let cfg = TrotterConfig::new(dt, 1, 0.5, Mode::Trotter)?;
            let free_cfg = TrotterConfig {
                mode: Mode::Free,
                ..cfg
            };
            for k in 0..1usize << n {
                let label = basis_label(k, n);
                let s = StateVector::basis_state(n, &label)?;
                let a = trotter_step(&s, &pot, &cfg)?.probabilities();
                let b = trotter_step(&s, &free, &free_cfg)?.probabilities();
                for (x, y) in a.iter().zip(&b) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
        Ok(worst)
    };
    match go() {
        Ok(worst) => CheckResult::of(
            "first-step-equivalence",
            worst < 1e-12,
            format!("max step-1 probability shift from any potential: {worst:.2e}"),
        ),
        Err(e) => CheckResult::fail("first-step-equivalence", e.to_string()),
    }
}

fn check_refinement() -> CheckResult {
    let go = || -> Result<((f64, f64), (f64, f64))> {
        let pot2 = potential::double_well(2, 10.0)?;
        let cfg2 = TrotterConfig::new(0.1, 9, 0.5, Mode::Trotter)?;
        let init2 = StateVector::basis_state(2, "01")?;
        let base2 = trotter_vs_exact_report(&pot2, &cfg2, &init2)?.final_overlap();
        let fine2 = trotter_vs_exact_report(&pot2, &cfg2.refined(), &init2)?.final_overlap();

        let pot3 = potential::double_well(3, 100.0)?;
        let cfg3 = TrotterConfig::new(0.4, 5, 0.5, Mode::Trotter)?;
        let init3 = StateVector::basis_state(3, "110")?;
        let base3 = trotter_vs_exact_report(&pot3, &cfg3, &init3)?.final_overlap();
        let fine3 = trotter_vs_exact_report(&pot3, &cfg3.refined(), &init3)?.final_overlap();
        Ok(((base2, fine2), (base3, fine3)))
    };
    match go() {
        Ok(((base2, fine2), (base3, fine3))) => CheckResult::of(
            "trotter-refinement",
            fine2 > base2 && fine3 >= base3,
            format!(
                "2q final overlap {base2:.6} -> {fine2:.6}; 3q {base3:.6} -> {fine3:.6}"
            ),
        ),
        Err(e) => CheckResult::fail("trotter-refinement", e.to_string()),
    }
}

fn check_pulse_timing() -> CheckResult {
    match nmr::timing_constants(nmr::CHLOROFORM_J_HZ) {
        Ok(t) => {
            let t1_err = (t.t1_seconds * 1e6 - 580.9).abs();
            let t2_err = (t.t2_seconds * 1e6 - 365.0).abs();
            let j1 = 1.0 / (8.0 * 580.9e-6);
            let j2 = std::f64::consts::PI / (40.0 * 365.0e-6);
            let j_rel = (j1 - j2).abs() / nmr::CHLOROFORM_J_HZ;
            CheckResult::of(
                "pulse-timing",
                t1_err < 0.2 && t2_err < 0.2 && j_rel < 1e-3,
                format!(
                    "t1 err {t1_err:.3} us, t2 err {t2_err:.3} us, J agreement {j_rel:.2e}"
                ),
            )
        }
        Err(e) => CheckResult::fail("pulse-timing", e.to_string()),
    }
}

fn check_pulse_q_gate() -> CheckResult {
    let go = || -> Result<nmr::SequenceCheck> {
        let sys = nmr::SpinSystem::chloroform();
        let seq = nmr::sequences::potential_kick_2q(10.0, 0.1);
        let target = circuit_unitary(&crate::gates::Circuit::from_gates(
            2,
            vec![crate::gates::Gate::z_phase(-1.0, 2)],
        )?)?;
        nmr::verify_sequence(&sys, &seq, &target, 1e-10)
    };
    match go() {
        Ok(check) => CheckResult::of(
            "pulse-q-gate",
            check.matches,
            format!("Q sequence residual {:.2e}", check.residual),
        ),
        Err(e) => CheckResult::fail("pulse-q-gate", e.to_string()),
    }
}

fn check_pulse_qft() -> CheckResult {
    let go = || -> Result<nmr::SequenceCheck> {
        let sys = nmr::SpinSystem::chloroform();
        let seq = nmr::sequences::qft_2q(nmr::CHLOROFORM_J_HZ)?;
        let target = spectral::qft_matrix(2)?;
        nmr::verify_sequence(&sys, &seq, &target, 1e-8)
    };
    match go() {
        Ok(check) => CheckResult::of(
            "pulse-qft",
            check.matches,
            format!("F sequence residual {:.2e}", check.residual),
        ),
        Err(e) => CheckResult::fail("pulse-qft", e.to_string()),
    }
}

/// Render check results as an aligned text table.
pub fn format_report(results: &[CheckResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in results {
        let _ = writeln!(
            out,
            "{:<w$}  {}  {}",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail,
            w = width
        );
    }
    out
}
