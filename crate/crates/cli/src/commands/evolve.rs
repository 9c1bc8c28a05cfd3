//! `semiclab evolve`: endpoint dynamics.

use semiclassical_core::dynamics::{
    liouville_evolve, oscillator_compare, von_neumann_evolve, write_comparison_csv, Comparison, QuantumObservables,
    Trajectory,
};
use semiclassical_core::matrep::realize;
use semiclassical_core::ncpoly::eval_ncpoly;
use semiclassical_core::Gens;

use crate::commands::kernels::single_h;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::state::prepare_state;

pub enum EvolveOutput {
    Classical(Trajectory),
    Quantum(Trajectory),
    Comparison(Box<Comparison>),
}

/// Liouville flow at `h = 0`, von Neumann flow at `h = h_o`, or the
/// oscillator comparison when `evolve.compare` is set. Any other `h` is
/// refused.
pub fn cmd_evolve(cfg: &RunConfig) -> CliResult<EvolveOutput> {
    cfg.validate()?;
    if cfg.evolve.compare {
        return Ok(EvolveOutput::Comparison(Box::new(oscillator_compare(&cfg.evolve.oscillator)?)));
    }
    let h = single_h(cfg)?;
    let (dt, steps) = (cfg.evolve.dt, cfg.evolve.steps);
    let expr = cfg.expr()?;
    if h == 0.0 {
        let (bq, bp) = cfg.backends()?;
        let rho = prepare_state(cfg, &bq, &bp)?.density.ok_or_else(|| {
            CliError::Config("classical evolution needs a cm_point or cm_gaussian state".into())
        })?;
        Ok(EvolveOutput::Classical(liouville_evolve(&rho, &expr, dt, steps)?.trajectory))
    } else if h == cfg.h_o {
        let (bq, bp) = cfg.backends()?;
        let state = prepare_state(cfg, &bq, &bp)?.state;
        let g = Gens::new();
        let hm = realize(&eval_ncpoly(&expr, &g.q_qm, &g.p_qm)?, &bq, &bp, None)?;
        let q = realize(&g.q_qm, &bq, &bp, None)?;
        let p = realize(&g.p_qm, &bq, &bp, None)?;
        let run = von_neumann_evolve(&state, &hm, &QuantumObservables { q: &q, p: &p }, cfg.hbar, dt, steps)?;
        Ok(EvolveOutput::Quantum(run.trajectory))
    } else {
        Err(CliError::IntermediateH { h, h_o: cfg.h_o })
    }
}

pub fn trajectory_csv(t: &Trajectory) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in t.records() {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
}

pub fn comparison_csv(c: &Comparison) -> CliResult<String> {
    let mut buf = Vec::new();
    write_comparison_csv(&mut buf, &c.rows)?;
    Ok(String::from_utf8(buf).expect("utf-8"))
}

pub fn comparison_metadata_json(c: &Comparison) -> String {
    serde_json::to_string_pretty(&c.metadata()).expect("metadata serializes") + "\n"
}

pub fn trajectory_json(t: &Trajectory) -> String {
    serde_json::to_string_pretty(t.records()).expect("records serialize") + "\n"
}
