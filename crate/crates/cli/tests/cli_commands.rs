use std::process::Command as Process;

use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semiclab::commands::evolve::{comparison_csv, trajectory_csv};
use semiclab::commands::sweep::sweep_csv;
use semiclab::commands::{cmd_verify_with, EvolveOutput, Status, VerifyHooks};
use semiclab::config::{Algebra, BackendSpec, StateConfig, WeightsConfig};
use semiclab::{cmd_evolve, cmd_kernels, cmd_sweep, cmd_verify, parse_expr, CliError, RunConfig};
use semiclassical_core::dynamics::{OscillatorParams, COMPARISON_HEADER};
use semiclassical_core::matrep::{build_backend, BackendKind};
use semiclassical_core::ncpoly::{eval_ncpoly, random_polynomial};
use semiclassical_core::{Coeff, Expr, Gens, Rational};

const BIN: &str = env!("CARGO_BIN_EXE_semiclab");

fn small_fock(n: usize) -> RunConfig {
    RunConfig {
        backend_q: BackendSpec::fock(n),
        backend_p: BackendSpec::fock(n),
        ..RunConfig::default()
    }
}

/// A lifted packet with a `b` vector that gives `Q⊗Î⊗R̂_p` a nonzero mean.
fn packet_config(n: usize) -> RunConfig {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut b = vec![[0.0, 0.0]; n];
    b[0] = [s, 0.0];
    b[1] = [s, 0.0];
    RunConfig {
        state: StateConfig::Wavepacket {
            q0: 0.8,
            p0: -0.3,
            sigma: None,
        },
        weights: WeightsConfig {
            c_q: [0.6, 0.0],
            c_p: [0.0, 0.8],
            a: None,
            b: Some(b),
        },
        ..small_fock(n)
    }
}

fn grid_config(n: usize) -> RunConfig {
    RunConfig {
        backend_q: BackendSpec::grid(BackendKind::GridPosition, n, Some(8.0)),
        backend_p: BackendSpec::grid(BackendKind::GridMomentum, n, Some(8.0)),
        state: StateConfig::CmGaussian {
            q0: 0.5,
            p0: 0.2,
            sigma_q: 0.8,
            sigma_p: 0.9,
        },
        ..RunConfig::default()
    }
}

#[test]
fn parse_examples() {
    let e = parse_expr("Q*P - P*Q").unwrap();
    assert_eq!(e, Expr::x() * Expr::y() - Expr::y() * Expr::x());
    let h = parse_expr("(1/2)*(P^2 + Q^2)").unwrap();
    let g = Gens::new();
    assert_eq!(
        eval_ncpoly(&h, &g.q_qm, &g.p_qm).unwrap(),
        eval_ncpoly(&Expr::oscillator(), &g.q_qm, &g.p_qm).unwrap()
    );
    let err = parse_expr("Q/P").unwrap_err();
    assert_eq!(err.position, 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_expressions_reparse(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e: Expr = random_polynomial(&mut rng, 4, 4);
        let back = parse_expr(&e.to_string()).unwrap();
        let g = Gens::new();
        prop_assert_eq!(eval_ncpoly(&back, &g.q_qm, &g.p_qm).unwrap(), eval_ncpoly(&e, &g.q_qm, &g.p_qm).unwrap());
    }

    #[test]
    fn config_round_trip(hbar in 0.1f64..10.0, seed in any::<u64>(), n in 2usize..20, h in 0.0f64..1.0, level in 0usize..2) {
        let cfg = RunConfig {
            hbar,
            seed,
            h_values: vec![0.0, h, 1.0],
            backend_q: BackendSpec::fock(n.max(level + 1)),
            backend_p: BackendSpec::grid(BackendKind::GridMomentum, n, Some(hbar * 3.0)),
            state: StateConfig::LiftedEigenstate { level, hamiltonian: "Q^2 + P^2".into() },
            algebra: Algebra::Cm,
            ..RunConfig::default()
        };
        let back = RunConfig::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

#[test]
fn verify_default_passes() {
    let report = cmd_verify(&RunConfig::default()).unwrap();
    assert!(report.passed(), "{}", report.to_json());
    let info = report.check("tilde_commutator_all_lambda").unwrap();
    assert_eq!(info.status, Status::Informational);
    assert!(info.witness.contains("informational: see known-discrepancy note"));
    let cm = report.check("classical_endpoint_operator").unwrap();
    assert_eq!(cm.status, Status::Informational);
    assert_ne!(cm.witness.split(';').next().unwrap().trim(), "Q~(1) - q_cm = 0");
}

#[test]
fn corrupted_rewrite_rule_is_caught() {
    let hooks = VerifyHooks {
        swap_constant: Some(Coeff::i_hbar().scale(&Complex::new(Rational::from_integer((-2).into()), Rational::from_integer(0.into())))),
    };
    let report = cmd_verify_with(&RunConfig::default(), &hooks).unwrap();
    assert!(!report.passed());
    let ccr = report.check("qm_commutator").unwrap();
    assert_eq!(ccr.status, Status::Fail);
    assert_ne!(ccr.witness, "0");
}

#[test]
fn sweep_endpoints_and_affinity() {
    let cfg = packet_config(12);
    let rows = cmd_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 11);

    let qm = rows.last().unwrap();
    assert_eq!(qm.endpoint, "qm");
    assert_eq!(qm.mean_q_ref, Some(qm.mean_q_tilde));
    assert_eq!(qm.mean_p_ref, Some(qm.mean_p_tilde));
    assert_eq!(qm.op_diff_q, Some(0.0));

    let cm = &rows[0];
    assert_eq!(cm.endpoint, "cm");
    assert!(cm.op_diff_q.unwrap() > 0.0 && cm.op_diff_p.unwrap() > 0.0);

    let (first, last) = (rows[0].mean_q_tilde, qm.mean_q_tilde);
    assert!((first - last).abs() > 1e-3, "state makes the sweep flat");
    for r in &rows {
        let chord = first + (last - first) * r.h;
        assert!((r.mean_q_tilde - chord).abs() < 1e-10);
    }
    assert!(rows.iter().all(|r| r.bulk_commutator_defect < 1e-10));
}

#[test]
fn sweep_on_classical_state() {
    let rows = cmd_sweep(&grid_config(8)).unwrap();
    let cm = &rows[0];
    assert_eq!(cm.endpoint, "cm");
    assert!((cm.mean_q_ref.unwrap() - 0.5).abs() < 1e-3);
    assert!((cm.mean_p_ref.unwrap() - 0.2).abs() < 1e-3);
}

#[test]
fn kernel_examples() {
    let n = 4;
    let fock = build_backend::<f64>(BackendKind::Fock, n, 1.0, None).unwrap();
    let q = fock.q();
    let id = DMatrix::<Complex<f64>>::identity(n, n);

    let cm = RunConfig {
        algebra: Algebra::Cm,
        observable: "Q".into(),
        h_values: vec![0.0],
        ..small_fock(n)
    };
    let ks = cmd_kernels(&cm).unwrap();
    assert_eq!(ks.iter().map(|k| k.label()).collect::<Vec<_>>(), ["qq", "qp", "pq", "pp"]);
    assert!(ks[1].block.iter().all(|z| *z == Complex::new(0.0, 0.0)));
    assert!(ks[2].block.iter().all(|z| *z == Complex::new(0.0, 0.0)));

    let qm = RunConfig {
        algebra: Algebra::Qm,
        ..cm.clone()
    };
    let ks = cmd_kernels(&qm).unwrap();
    assert_eq!(ks[0].block, q.kronecker(&id));

    let tilde = RunConfig {
        algebra: Algebra::Tilde,
        ..cm.clone()
    };
    let ks = cmd_kernels(&tilde).unwrap();
    assert_eq!(ks[3].block, q.kronecker(&id) + id.kronecker(q));

    let many = RunConfig {
        h_values: vec![0.0, 1.0],
        ..cm
    };
    assert!(matches!(cmd_kernels(&many), Err(CliError::Config(_))));
}

#[test]
fn evolve_refuses_intermediate_h() {
    let cfg = RunConfig {
        h_values: vec![0.5],
        ..small_fock(6)
    };
    let err = cmd_evolve(&cfg).err().unwrap();
    assert!(err.to_string().contains("no dynamics defined at intermediate h"));
}

#[test]
fn evolve_endpoints() {
    let classical = RunConfig {
        h_values: vec![0.0],
        observable: "(1/2)*P^2".into(),
        ..grid_config(32)
    };
    let cfg = RunConfig {
        evolve: semiclab::config::EvolveConfig {
            dt: 1e-2,
            steps: 50,
            ..Default::default()
        },
        ..classical
    };
    let EvolveOutput::Classical(t) = cmd_evolve(&cfg).unwrap() else {
        panic!("expected a classical trajectory");
    };
    assert!(t.max_drift(|r| r.mean_p) < 1e-10);
    let csv = trajectory_csv(&t).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,mean_q,mean_p,mean_energy,norm_or_trace");

    let quantum = RunConfig {
        h_values: vec![1.0],
        state: StateConfig::Wavepacket {
            q0: 1.0,
            p0: 0.0,
            sigma: None,
        },
        ..small_fock(24)
    };
    let EvolveOutput::Quantum(t) = cmd_evolve(&quantum).unwrap() else {
        panic!("expected a quantum trajectory");
    };
    for r in t.records() {
        assert!((r.mean_q - r.t.cos()).abs() < 1e-6);
    }
}

#[test]
fn evolve_compare() {
    let mut cfg = RunConfig::default();
    cfg.evolve.compare = true;
    cfg.evolve.oscillator = OscillatorParams::default();
    let EvolveOutput::Comparison(c) = cmd_evolve(&cfg).unwrap() else {
        panic!("expected a comparison");
    };
    assert!(c.summary.max_dq < 1e-5 && c.summary.max_dp < 1e-5);
    let csv = comparison_csv(&c).unwrap();
    assert_eq!(csv.lines().next().unwrap(), COMPARISON_HEADER.join(","));
}

fn run_bin(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Process::new(BIN).args(args).output().unwrap();
    (out.status.code().unwrap(), out.stdout)
}

#[test]
fn exit_codes() {
    assert_eq!(run_bin(&["verify"]).0, 0);
    assert_eq!(run_bin(&["sweep", "--expr", "Q/P"]).0, 2);
    assert_eq!(run_bin(&["evolve", "--h", "0.5"]).0, 2);
    assert_eq!(run_bin(&["frobnicate"]).0, 2);
    assert_eq!(run_bin(&["sweep", "--config", "/nonexistent/config.json"]).0, 2);
    assert_eq!(run_bin(&["kernels", "--h", "0"]).0, 2);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("config.json");
    std::fs::write(&cfg_path, packet_config(12).to_json()).unwrap();
    let cfg = cfg_path.to_str().unwrap();
    for cmd in ["verify", "sweep"] {
        let a = run_bin(&[cmd, "--config", cfg, "--seed", "11"]);
        let b = run_bin(&[cmd, "--config", cfg, "--seed", "11"]);
        assert_eq!(a.0, 0);
        assert!(!a.1.is_empty());
        assert_eq!(a.1, b.1, "{cmd} output differs");
    }
    let out = dir.path().join("k");
    let out_s = out.to_str().unwrap();
    assert_eq!(run_bin(&["kernels", "--config", cfg, "--h", "1", "--out", out_s]).0, 0);
    for block in ["qq", "qp", "pq", "pp"] {
        let text = std::fs::read_to_string(out.join(format!("kernel_{block}.csv"))).unwrap();
        assert_eq!(text.lines().next().unwrap(), "row,col,re,im");
    }
    assert_eq!(sweep_csv(&[]).unwrap(), "");
}
