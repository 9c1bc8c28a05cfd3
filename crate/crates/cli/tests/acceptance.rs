//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.
//!
//! cargo test -p semiclassical-cli --test acceptance

use std::process::Command as Process;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semiclab::commands::sweep::sweep_csv;
use semiclab::config::{BackendSpec, StateConfig, WeightsConfig};
use semiclab::{cmd_sweep, cmd_verify, RunConfig};
use semiclassical_core::dynamics::{oscillator_compare, OscillatorParams, PhaseSpaceDensity};
use semiclassical_core::matrep::{build_backend, realize, symmetric_length, BackendKind};
use semiclassical_core::ncpoly::{
    eval_factor, eval_ncpoly, random_polynomial, translate_qm, ProjectorRelations, ROperator, TensorPoly,
};
use semiclassical_core::states::{
    cm_mixed_density, cm_point_state, factor_eigenstates, lift_qm_eigenstate, mean_value, WeightSpec,
};
use semiclassical_core::{Coeff, Expr, Gens, Rational};

type Z = Complex<f64>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> DVector<Z> {
    let v = DVector::from_fn(n, |_, _| Z::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let s = v.norm();
    v.map(|z| z / s)
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> WeightSpec<f64> {
    let c = random_unit(rng, 2);
    WeightSpec::new(c[0], c[1], random_unit(rng, n), random_unit(rng, n)).unwrap()
}

fn symbolic_identities() -> Outcome {
    let start = Instant::now();
    let g = Gens::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failed = Vec::new();

    let ccr = g.q_qm.commutator(&g.p_qm);
    if !ccr.canonical_eq(&TensorPoly::scalar(Coeff::i_hbar())) {
        failed.push("qm commutator");
    }
    for _ in 0..100 {
        let f: Expr = random_polynomial(&mut rng, 4, 4);
        let h: Expr = random_polynomial(&mut rng, 4, 4);
        let a = eval_ncpoly(&f, &g.q_cm, &g.p_cm).unwrap();
        let b = eval_ncpoly(&h, &g.q_cm, &g.p_cm).unwrap();
        if !a.commutator(&b).is_zero() {
            failed.push("cm commutativity");
            break;
        }
    }
    for _ in 0..100 {
        let f: Expr = random_polynomial(&mut rng, 4, 4);
        let direct = eval_ncpoly(&f, &g.q_qm, &g.p_qm).unwrap();
        let factor = eval_factor(&Default::default(), &f).unwrap();
        if !direct.canonical_eq(&translate_qm(&factor)) {
            failed.push("translation");
            break;
        }
    }
    let zero = Rational::from_integer(0.into());
    let q0 = g.q_tilde.substitute_lambda(&zero).unwrap();
    let p0 = g.p_tilde.substitute_lambda(&zero).unwrap();
    if !(q0.canonical_eq(&g.q_qm) && p0.canonical_eq(&g.p_qm)) {
        failed.push("qm endpoint");
    }
    if !ProjectorRelations::check::<Rational>(&ROperator::r_q(), &ROperator::r_p()).all() {
        failed.push("projector relations");
    }
    let elapsed = start.elapsed();
    let pass = failed.is_empty() && within(elapsed, 5.0);
    let detail = if failed.is_empty() {
        "all exact identities hold".to_string()
    } else {
        format!("failed: {}", failed.join(", "))
    };
    outcome(pass, format!("{detail} in {:.2}s", elapsed.as_secs_f64()))
}

/// `Q`, `P` from the ladder operator written out entry by entry.
fn ladder_pair(n: usize, hbar: f64) -> (DMatrix<Z>, DMatrix<Z>) {
    let mut a = DMatrix::<Z>::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Z::new((k as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    let s = (hbar / 2.0).sqrt();
    let q = (&a + &ad) * Z::new(s, 0.0);
    let p = (&ad - &a) * Z::new(0.0, s);
    (q, p)
}

fn truncated_ccr() -> Outcome {
    let start = Instant::now();
    let hbar = 1.0;
    let mut worst: f64 = 0.0;
    for n in [4, 8, 16] {
        let b = build_backend::<f64>(BackendKind::Fock, n, hbar, None).unwrap();
        let c = b.q() * b.p() - b.p() * b.q();
        let (lq, lp) = ladder_pair(n, hbar);
        let brute = &lq * &lp - &lp * &lq;
        let mut expected = DMatrix::<Z>::identity(n, n) * Z::new(0.0, hbar);
        expected[(n - 1, n - 1)] = Z::new(0.0, -hbar * (n as f64 - 1.0));
        let err = |m: &DMatrix<Z>| (m - &expected).iter().map(|z| z.norm()).fold(0.0, f64::max);
        worst = worst.max(err(&c)).max(err(&brute));
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-12 && within(elapsed, 1.0),
        format!("max entry error {worst:.2e} in {:.2}s", elapsed.as_secs_f64()),
    )
}

fn eigenstate_lifting() -> Outcome {
    let start = Instant::now();
    let (n, hbar) = (32, 1.0);
    let g = Gens::new();
    let b = build_backend::<f64>(BackendKind::Fock, n, hbar, None).unwrap();
    let h_expr = Expr::oscillator();
    let h = realize(&eval_ncpoly(&h_expr, &g.q_qm, &g.p_qm).unwrap(), &b, &b, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for (level, (_, psi)) in factor_eigenstates(&h_expr, &b, 5).unwrap().into_iter().enumerate() {
        let e = hbar * (level as f64 + 0.5);
        for _ in 0..20 {
            let v = lift_qm_eigenstate(&psi, &random_weights(&mut rng, n)).unwrap();
            let r = h.data() * v.data() - v.data() * Z::new(e, 0.0);
            worst = worst.max(r.norm());
        }
    }
    let one = Z::new(1.0, 0.0);
    let e0 = DVector::from_fn(n, |i, _| if i == 0 { one } else { Z::new(0.0, 0.0) });
    let rejected = [(one, one), (Z::new(0.5, 0.0), Z::new(0.5, 0.0)), (Z::new(0.0, 0.0), Z::new(0.0, 0.0))]
        .into_iter()
        .all(|(cq, cp)| WeightSpec::new(cq, cp, e0.clone(), e0.clone()).is_err());
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-8 && rejected && within(elapsed, 10.0),
        format!(
            "max residual {worst:.2e}, bad weights rejected: {rejected}, in {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn cm_point_universality() -> Outcome {
    let start = Instant::now();
    let (n, hbar) = (8, 1.0);
    let l = symmetric_length(n, hbar);
    let bq = build_backend::<f64>(BackendKind::GridPosition, n, hbar, Some(l)).unwrap();
    let bp = build_backend::<f64>(BackendKind::GridMomentum, n, hbar, Some(l)).unwrap();
    let g = Gens::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let f: Expr = random_polynomial(&mut rng, 4, 5);
        let m = realize(&eval_ncpoly(&f, &g.q_cm, &g.p_cm).unwrap(), &bq, &bp, None).unwrap();
        let comm = f.to_commutative().unwrap();
        for k in 0..n {
            for j in 0..n {
                let c = random_unit(&mut rng, 2);
                let v = cm_point_state(&bq, &bp, k, j, c[0], c[1]).unwrap();
                let value: f64 = comm.eval(bq.labels()[k], bp.labels()[j]);
                let r = m.data() * v.data() - v.data() * Z::new(value, 0.0);
                worst = worst.max(r.norm() / v.norm());
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-10 && within(elapsed, 10.0),
        format!("max eigen-residual {worst:.2e} in {:.2}s", elapsed.as_secs_f64()),
    )
}

fn mean_value_invariance() -> Outcome {
    let n = 8;
    let hbar = 1.0;
    let g = Gens::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fock = build_backend::<f64>(BackendKind::Fock, n, hbar, None).unwrap();
    let l = symmetric_length(n, hbar);
    let bq = build_backend::<f64>(BackendKind::GridPosition, n, hbar, Some(l)).unwrap();
    let bp = build_backend::<f64>(BackendKind::GridMomentum, n, hbar, Some(l)).unwrap();

    let mut cases = Vec::new();
    let x2 = &g.q_qm.mul(&g.q_qm) + &g.p_cm;
    for _ in 0..5 {
        let v = lift_qm_eigenstate(&random_unit(&mut rng, n), &random_weights(&mut rng, n)).unwrap();
        cases.push((v.outer(), realize(&x2, &fock, &fock, None).unwrap()));
    }
    let h_cm = eval_ncpoly(&Expr::oscillator(), &g.q_cm, &g.p_cm).unwrap();
    let h_cm = realize(&h_cm, &bq, &bp, None).unwrap();
    for (q0, p0) in [(0.5, -0.5), (-1.0, 1.5)] {
        let rho = PhaseSpaceDensity::gaussian(n, n, l, l, (q0, p0), 0.9, 1.1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        cases.push((cm_mixed_density(&rho, Z::new(s, 0.0), Z::new(0.0, s)).unwrap(), h_cm.clone()));
    }

    let mut worst: f64 = 0.0;
    for (d, a) in &cases {
        let base = mean_value(d, a).unwrap();
        for c in [1e-6, 1.0, 1e6] {
            let scaled = mean_value(&d.scaled(c), a).unwrap();
            worst = worst.max((scaled - base).abs() / base.abs());
        }
    }
    outcome(
        worst < 1e-12,
        format!("max relative change {worst:.2e} over {} densities", cases.len()),
    )
}

fn oscillator_cross_check() -> Outcome {
    let start = Instant::now();
    let params = OscillatorParams {
        q0: 1.0,
        p0: 0.0,
        hbar: 1.0,
        n: 64,
        fock_dim: 32,
        period_count: 1.0,
        ..OscillatorParams::default()
    };
    let c = oscillator_compare(&params).unwrap();
    let s = &c.summary;
    // both engines should also follow the exact orbit q0 cos t
    let orbit = c
        .rows
        .iter()
        .map(|r| (r.mean_q_qm - r.t.cos()).abs().max((r.mean_q_cl - r.t.cos()).abs()))
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let pass = s.max_dq < 1e-5
        && s.max_dp < 1e-5
        && s.mass_drift < 1e-8
        && s.trace_drift < 1e-10
        && orbit < 1e-5
        && within(elapsed, 60.0);
    outcome(
        pass,
        format!(
            "max |dq| {:.2e}, max |dp| {:.2e}, mass drift {:.2e}, trace drift {:.2e}, orbit error {:.2e}, in {:.2}s",
            s.max_dq,
            s.max_dp,
            s.mass_drift,
            s.trace_drift,
            orbit,
            elapsed.as_secs_f64()
        ),
    )
}

fn sweep_config() -> RunConfig {
    let n = 12;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut b = vec![[0.0, 0.0]; n];
    b[0] = [s, 0.0];
    b[1] = [s, 0.0];
    RunConfig {
        backend_q: BackendSpec::fock(n),
        backend_p: BackendSpec::fock(n),
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
        seed: 8,
        ..RunConfig::default()
    }
}

fn sweep_affinity() -> Outcome {
    let cfg = sweep_config();
    let rows = cmd_sweep(&cfg).unwrap();
    let (first, last) = (rows[0].mean_q_tilde, rows[rows.len() - 1].mean_q_tilde);
    let worst = rows
        .iter()
        .map(|r| (r.mean_q_tilde - (first + (last - first) * r.h / cfg.h_o)).abs())
        .fold(0.0, f64::max);
    outcome(
        rows.len() == 11 && worst < 1e-10,
        format!(
            "{} h values, <Q~> from {first:.6} to {last:.6}, max chord deviation {worst:.2e}",
            rows.len()
        ),
    )
}

fn binary_output(args: &[&str]) -> Vec<u8> {
    let out = Process::new(env!("CARGO_BIN_EXE_semiclab")).args(args).output().unwrap();
    out.stdout
}

fn determinism() -> Outcome {
    let cfg = sweep_config();
    let verify = || {
        let r = cmd_verify(&cfg).unwrap();
        (r.to_json(), r.to_csv().unwrap())
    };
    let sweep = || sweep_csv(&cmd_sweep(&cfg).unwrap()).unwrap();
    let library = verify() == verify() && sweep() == sweep();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    std::fs::write(&path, cfg.to_json()).unwrap();
    let path = path.to_str().unwrap();
    let mut binary = true;
    for cmd in ["verify", "sweep"] {
        for format in ["csv", "json"] {
            let args = [cmd, "--config", path, "--format", format];
            let a = binary_output(&args);
            binary &= !a.is_empty() && a == binary_output(&args);
        }
    }
    outcome(
        library && binary,
        format!("library outputs identical: {library}, binary outputs identical: {binary}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("symbolic identities", symbolic_identities),
        ("truncated commutator", truncated_ccr),
        ("eigenstate lifting", eigenstate_lifting),
        ("classical point states", cm_point_universality),
        ("mean-value scale invariance", mean_value_invariance),
        ("oscillator cross-check", oscillator_cross_check),
        ("sweep affinity", sweep_affinity),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {} ({}): {} - {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
