//! Acceptance suite: one test per release criterion, each checked against
//! the test-local dense oracle in `common` at its stated tolerance. Run
//! with `cargo test --test acceptance -- --nocapture` for the per-criterion
//! report lines.

mod common;

use std::time::Instant;

use common as oracle;
use num_complex::Complex64;
use qtunnel::evolve::{
    evolve, exact_hamiltonian, trotter_step, trotter_step_reversed, trotter_vs_exact_report, Mode,
    TrotterConfig,
};
use qtunnel::gates::{circuit_unitary, parse_circuit, Circuit, Gate};
use qtunnel::nmr;
use qtunnel::potential::{double_well, free_potential};
use qtunnel::runner;
use qtunnel::spectral::{
    kinetic_diag_with, methods_decomposition_d, qft_circuit, qft_matrix, MomentumConvention,
};
use qtunnel::state::StateVector;

fn report(name: &str, detail: String) {
    println!("[PASS] {name}: {detail}");
}

#[test]
fn criterion_01_gate_identity_suite() {
    let started = Instant::now();

    // F = H2 R_{pi/2} H1 equals the 2^{-n/2} e^{2 pi i j k / 2^n} matrix
    // with the row index bit-swap accounted.
    let ladder = circuit_unitary(
        &Circuit::from_gates(
            2,
            vec![
                Gate::hadamard(1),
                Gate::controlled_phase(std::f64::consts::FRAC_PI_2, 1, 2),
                Gate::hadamard(2),
            ],
        )
        .unwrap(),
    )
    .unwrap();
    let rev = oracle::bitrev(2);
    let mut worst = 0.0f64;
    for j in 0..4 {
        for k in 0..4 {
            let expected =
                Complex64::from_polar(0.5, std::f64::consts::PI * (rev[j] * k) as f64 / 2.0);
            worst = worst.max((ladder[(j, k)] - expected).norm());
        }
    }
    assert!(worst < 1e-12, "ladder vs Fourier matrix: {worst}");

    // unitarity for n = 1..6, and the gate ladder agrees with the matrix
    let mut unitarity = 0.0f64;
    for n in 1..=6 {
        let f = qft_matrix(n).unwrap();
        unitarity = unitarity.max(qtunnel::linalg::unitarity_defect(&f));
        if n <= 4 {
            let via_gates = circuit_unitary(&qft_circuit(n).unwrap()).unwrap();
            unitarity = unitarity.max(oracle::max_abs_diff(&via_gates, &f));
        }
    }
    assert!(unitarity < 1e-12, "QFT unitarity defect: {unitarity}");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    report(
        "criterion 1 (gate identities)",
        format!("ladder err {worst:.2e}, max F\u{2020}F defect {unitarity:.2e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_02_decomposition_equivalence() {
    let started = Instant::now();

    let mut worst = 0.0f64;
    for (n, dts) in [(2usize, vec![0.05, 0.1, 0.7]), (3, vec![0.1, 0.4])] {
        for dt in dts {
            let product = circuit_unitary(&methods_decomposition_d(n, dt).unwrap()).unwrap();
            let target = oracle::diagonal(&oracle::kinetic_phases(n, dt, 0.5, false));
            let residual = oracle::phase_residual(&product, &target);
            assert!(residual < 1e-10, "n={n} dt={dt} residual {residual}");
            worst = worst.max(residual);
        }
    }

    // the literal momentum table fails at n = 3
    let mut literal_min = f64::INFINITY;
    for dt in [0.1, 0.4] {
        let product = circuit_unitary(&methods_decomposition_d(3, dt).unwrap()).unwrap();
        let literal = oracle::diagonal(&oracle::kinetic_phases(3, dt, 0.5, true));
        let residual = oracle::phase_residual(&product, &literal);
        assert!(residual > 0.1, "literal residual too small: {residual}");
        literal_min = literal_min.min(residual);
        // and the library's literal-convention diagonal agrees with the oracle's
        let lib_literal = kinetic_diag_with(3, dt, 0.5, MomentumConvention::LiteralEq6)
            .unwrap()
            .as_matrix();
        assert!(oracle::max_abs_diff(&lib_literal, &literal) < 1e-14);
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    report(
        "criterion 2 (kinetic decomposition)",
        format!(
            "standard residual {worst:.2e} < 1e-10; literal n=3 residual {literal_min:.2} > 0.1; {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_03_single_step_values() {
    let started = Instant::now();

    // reference values recomputed from the dense 4x4 oracle product
    let pot = double_well(2, 10.0).unwrap();
    let u = oracle::step_matrix(2, 0.1, 0.5, pot.values(), true);
    let reference = oracle::probabilities(&oracle::mat_vec(&u, &oracle::basis_vector(2, 1)));

    let published = [0.0259, 0.8709, 0.0470, 0.0561];
    for (r, p) in reference.iter().zip(published) {
        assert!(
            (r - p).abs() < 1e-3,
            "oracle {r} vs published {p}: conventions diverged"
        );
    }

    let initial = StateVector::basis_state(2, "01").unwrap();
    let cfg = TrotterConfig::new(0.1, 9, 0.5, Mode::Trotter).unwrap();
    let probs = trotter_step(&initial, &pot, &cfg).unwrap().probabilities();
    let mut worst = 0.0f64;
    for (engine, r) in probs.iter().zip(&reference) {
        worst = worst.max((engine - r).abs());
        assert!((engine - r).abs() < 1e-10);
    }
    for (engine, p) in probs.iter().zip(published) {
        assert!((engine - p).abs() < 1e-3);
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    report(
        "criterion 3 (single-step values)",
        format!(
            "step-1 probabilities ({:.4}, {:.4}, {:.4}, {:.4}), oracle err {worst:.2e}; {elapsed:?}",
            probs[0], probs[1], probs[2], probs[3]
        ),
    );
}

#[test]
fn criterion_04_two_qubit_tunneling_reproduction() {
    let pot = double_well(2, 10.0).unwrap();
    let initial = StateVector::basis_state(2, "01").unwrap();
    let cfg = TrotterConfig::new(0.1, 9, 0.5, Mode::Trotter).unwrap();
    let result = evolve(&initial, &pot, &cfg).unwrap();

    // engine rows match the dense oracle's repeated products
    let u = oracle::step_matrix(2, cfg.dt, cfg.mass, pot.values(), true);
    let mut amps = oracle::basis_vector(2, 1);
    let mut oracle_rows = vec![oracle::probabilities(&amps)];
    for _ in 0..cfg.steps {
        amps = oracle::mat_vec(&u, &amps);
        oracle_rows.push(oracle::probabilities(&amps));
    }
    for (row, reference) in result.trace.rows().iter().zip(&oracle_rows) {
        for (a, b) in row.iter().zip(reference) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    // the 0.25 barrier threshold holds in the oracle before being asserted
    // on the engine
    let oracle_barrier = oracle_rows
        .iter()
        .map(|r| r[0] + r[2])
        .fold(0.0, f64::max);
    assert!(oracle_barrier < 0.25);

    let site2_start = result.trace.site_probability(0, 2);
    let site2_end = result.trace.site_probability(9, 2);
    assert_eq!(site2_start, 1.0);
    assert!(site2_end < site2_start);

    let gains: Vec<f64> = (0..4)
        .map(|k| result.trace.row(9)[k] - result.trace.row(0)[k])
        .collect();
    let best_site = (0..4).max_by(|&a, &b| gains[a].total_cmp(&gains[b])).unwrap() + 1;
    assert_eq!(best_site, 4, "largest gain must be site 4: {gains:?}");
    assert!(result.trace.site_probability(9, 4) > 0.0);

    let mut max_barrier = 0.0f64;
    for t in 0..=9 {
        let barrier = result.trace.site_probability(t, 1) + result.trace.site_probability(t, 3);
        max_barrier = max_barrier.max(barrier);
        assert!(barrier < 0.25, "barrier occupancy {barrier} at step {t}");
    }

    report(
        "criterion 4 (2-qubit tunneling)",
        format!(
            "site-2 1.000 -> {site2_end:.3}, site-4 gain {:.3}, max barrier {max_barrier:.3} < 0.25",
            gains[3]
        ),
    );
}

#[test]
fn criterion_05_three_qubit_reproduction() {
    let pot = double_well(3, 100.0).unwrap();
    let initial = StateVector::basis_state(3, "110").unwrap();
    let cfg = TrotterConfig::new(0.4, 5, 0.5, Mode::Exact).unwrap();
    let result = evolve(&initial, &pot, &cfg).unwrap();

    // exact-mode rows against a Taylor-series propagator (no eigensolver)
    let h = oracle::hamiltonian(3, pot.values(), cfg.mass);
    let u = oracle::expm_taylor(&h, cfg.dt);
    let mut amps = oracle::basis_vector(3, 6);
    for t in 1..=cfg.steps {
        amps = oracle::mat_vec(&u, &amps);
        let reference = oracle::probabilities(&amps);
        for (a, b) in result.trace.row(t).iter().zip(&reference) {
            assert!((a - b).abs() < 1e-10, "step {t}");
        }
    }

    // weight moves from well {7,8} into well {3,4}
    let w34 = |t: usize| result.trace.site_probability(t, 3) + result.trace.site_probability(t, 4);
    let w78 = |t: usize| result.trace.site_probability(t, 7) + result.trace.site_probability(t, 8);
    assert_eq!(w34(0), 0.0);
    assert_eq!(w78(0), 1.0);
    assert!(w34(5) > 0.45, "final landing-well weight {}", w34(5));
    assert!(w78(5) < 0.55, "final source-well weight {}", w78(5));

    // within-well oscillation: P7 - P8 changes sign at least once
    let split: Vec<f64> = (1..=5)
        .map(|t| result.trace.site_probability(t, 7) - result.trace.site_probability(t, 8))
        .collect();
    let sign_changes = split
        .windows(2)
        .filter(|w| w[0].signum() * w[1].signum() < 0.0)
        .count();
    assert!(sign_changes >= 1, "no oscillation witness in {split:?}");

    report(
        "criterion 5 (3-qubit wells)",
        format!(
            "source well 1.000 -> {:.3}, landing well 0.000 -> {:.3}, P7-P8 sign changes: {sign_changes}",
            w78(5),
            w34(5)
        ),
    );
}

#[test]
fn criterion_06_conservation_suite() {
    // norm over every preset and mode
    let mut worst_norm = 0.0f64;
    for name in runner::PRESET_NAMES {
        let cfg = runner::preset(name).unwrap();
        let pot = cfg.build_potential().unwrap();
        let initial = StateVector::basis_state(cfg.n_qubits, &cfg.initial_label).unwrap();
        for &mode in &cfg.modes {
            let run_cfg = TrotterConfig::new(cfg.dt, cfg.steps, cfg.mass, mode).unwrap();
            let result = evolve(&initial, &pot, &run_cfg).unwrap();
            for sum in result.trace.row_sums() {
                worst_norm = worst_norm.max((sum - 1.0).abs());
            }
        }
    }
    assert!(worst_norm < 1e-10, "norm drift {worst_norm}");

    // energy expectation in exact mode
    let pot = double_well(3, 100.0).unwrap();
    let initial = StateVector::basis_state(3, "110").unwrap();
    let cfg = TrotterConfig::new(0.4, 5, 0.5, Mode::Exact).unwrap();
    let h = exact_hamiltonian(&pot, cfg.mass).unwrap();
    let result = evolve(&initial, &pot, &cfg).unwrap();
    let e0 = qtunnel::evolve::energy_expectation(&initial, &h);
    let e_final = qtunnel::evolve::energy_expectation(&result.final_state, &h);
    let drift = (e_final - e0).abs();
    assert!(drift < 1e-9, "energy drift {drift}");

    // time reversal over the full 2-qubit run
    let pot2 = double_well(2, 10.0).unwrap();
    let cfg2 = TrotterConfig::new(0.1, 9, 0.5, Mode::Trotter).unwrap();
    let init2 = StateVector::basis_state(2, "01").unwrap();
    let mut s = init2.clone();
    for _ in 0..9 {
        s = trotter_step(&s, &pot2, &cfg2).unwrap();
    }
    for _ in 0..9 {
        s = trotter_step_reversed(&s, &pot2, &cfg2).unwrap();
    }
    let reversal = s
        .amplitudes()
        .iter()
        .zip(init2.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(reversal < 1e-10, "time-reversal error {reversal}");

    report(
        "criterion 6 (conservation)",
        format!("norm {worst_norm:.2e}, energy {drift:.2e}, reversal {reversal:.2e}"),
    );
}

#[test]
fn criterion_07_trotter_refinement() {
    let started = Instant::now();

    let pot = double_well(2, 10.0).unwrap();
    let initial = StateVector::basis_state(2, "01").unwrap();
    let coarse_cfg = TrotterConfig::new(0.1, 9, 0.5, Mode::Trotter).unwrap();
    let fine_cfg = coarse_cfg.refined();
    assert_eq!(fine_cfg.steps, 18);
    assert!((fine_cfg.total_time() - 0.9).abs() < 1e-15);

    let coarse = trotter_vs_exact_report(&pot, &coarse_cfg, &initial)
        .unwrap()
        .final_overlap();
    let fine = trotter_vs_exact_report(&pot, &fine_cfg, &initial)
        .unwrap()
        .final_overlap();
    assert!(
        fine > coarse,
        "refinement did not improve: {fine} !> {coarse}"
    );

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    report(
        "criterion 7 (refinement)",
        format!("final overlap {coarse:.6} -> {fine:.6} at dt/2; {elapsed:?}"),
    );
}

#[test]
fn criterion_08_basis_state_first_step_equivalence() {
    let mut worst = 0.0f64;
    for (n, v0, dt) in [(2usize, 10.0, 0.1), (3, 100.0, 0.4)] {
        let pot = double_well(n, v0).unwrap();
        let free = free_potential(n).unwrap();
        let cfg = TrotterConfig::new(dt, 1, 0.5, Mode::Trotter).unwrap();
        let free_cfg = TrotterConfig {
            mode: Mode::Free,
            ..cfg
        };
        for k in 0..1usize << n {
            let label: String = (0..n)
                .map(|q| if k >> (n - 1 - q) & 1 == 1 { '1' } else { '0' })
                .collect();
            let s = StateVector::basis_state(n, &label).unwrap();
            let with_v = trotter_step(&s, &pot, &cfg).unwrap().probabilities();
            let without = trotter_step(&s, &free, &free_cfg).unwrap().probabilities();
            for (a, b) in with_v.iter().zip(&without) {
                worst = worst.max((a - b).abs());
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
    report(
        "criterion 8 (first-step equivalence)",
        format!("max probability shift from any double well: {worst:.2e}"),
    );
}

#[test]
fn criterion_09_pulse_timing_and_q_sequence() {
    let t = nmr::timing_constants(nmr::CHLOROFORM_J_HZ).unwrap();
    let t1_err = (t.t1_seconds * 1e6 - 580.9).abs();
    let t2_err = (t.t2_seconds * 1e6 - 365.0).abs();
    assert!(t1_err < 0.2, "t1 error {t1_err} us");
    assert!(t2_err < 0.2, "t2 error {t2_err} us");

    let j_from_t1 = 1.0 / (8.0 * 580.9e-6);
    let j_from_t2 = std::f64::consts::PI / (40.0 * 365.0e-6);
    let j_rel = (j_from_t1 - j_from_t2).abs() / nmr::CHLOROFORM_J_HZ;
    assert!(j_rel < 1e-3, "J relations disagree: {j_rel}");

    // the shipped Q sequence file verifies against the Q gate at 1e-10
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("sequences");
    let sys =
        nmr::parse_spin_system(&std::fs::read_to_string(root.join("chloroform.sys")).unwrap())
            .unwrap();
    let seq =
        nmr::parse_pulse_sequence(&std::fs::read_to_string(root.join("q_2q.seq")).unwrap())
            .unwrap();
    let target_circuit =
        parse_circuit(&std::fs::read_to_string(root.join("q_2q_target.circuit")).unwrap())
            .unwrap();
    let target = circuit_unitary(&target_circuit).unwrap();
    let check = nmr::verify_sequence(&sys, &seq, &target, 1e-10).unwrap();
    assert!(check.matches, "Q sequence residual {}", check.residual);

    report(
        "criterion 9 (pulse timing + Q)",
        format!(
            "t1 {:.1} us, t2 {:.1} us, J agreement {j_rel:.2e}, Q residual {:.2e}",
            t.t1_seconds * 1e6,
            t.t2_seconds * 1e6,
            check.residual
        ),
    );
}

#[test]
fn criterion_10_hardware_numbers_excluded() {
    // The published hardware fidelities (99.89%, 95.48%, 98.63%, 93.81%)
    // and the experimental bar heights are spectrometer results and are
    // not reproduced here; the substitute is the oracle-equivalence and
    // invariant suite, which must pass in full.
    let results = runner::verify_all(MomentumConvention::Standard);
    for r in &results {
        assert!(r.passed, "substitute check {} failed: {}", r.name, r.detail);
    }
    report(
        "criterion 10 (exclusions)",
        format!(
            "hardware fidelities excluded by design; {} substitute checks pass",
            results.len()
        ),
    );
}
