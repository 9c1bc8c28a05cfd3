//! `semiclab sweep`: means in a fixed state as `h` runs over the configured
//! values.

use num_traits::ToPrimitive;
use serde::Serialize;

use semiclassical_core::matrep::{commutator_defect, realize};
use semiclassical_core::ncpoly::eval_ncpoly;
use semiclassical_core::{Gens, Poly, TensorMatrix64};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::state::prepare_state;

/// One sweep point. The reference columns are filled only at the endpoints:
/// against `q_qm`, `p_qm` at `h = h_o` and against `q_cm`, `p_cm` at `h = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub h: f64,
    pub lambda: f64,
    pub mean_q_tilde: f64,
    pub mean_p_tilde: f64,
    pub mean_observable: f64,
    pub bulk_commutator_defect: f64,
    pub endpoint: &'static str,
    pub mean_q_ref: Option<f64>,
    pub mean_p_ref: Option<f64>,
    /// Max-entry norm of `realize(Q̃(h)) − realize(reference)`.
    pub op_diff_q: Option<f64>,
    pub op_diff_p: Option<f64>,
}

fn max_entry(a: &TensorMatrix64, b: &TensorMatrix64) -> CliResult<f64> {
    Ok(a.sub(b)?.data().iter().fold(0.0, |m, z| m.max(z.norm())))
}

pub fn cmd_sweep(cfg: &RunConfig) -> CliResult<Vec<SweepRow>> {
    cfg.validate()?;
    let (bq, bp) = cfg.backends()?;
    let state = prepare_state(cfg, &bq, &bp)?;
    let g = Gens::new();
    let observable = eval_ncpoly(&cfg.expr()?, &g.q_tilde, &g.p_tilde)?;
    let at = |x: &Poly| -> CliResult<TensorMatrix64> { Ok(realize(x, &bq, &bp, None)?) };

    let mut rows = Vec::with_capacity(cfg.h_values.len());
    for &h in &cfg.h_values {
        let lambda = cfg.lambda(h);
        let q = g.q_tilde.substitute_lambda(&lambda)?;
        let p = g.p_tilde.substitute_lambda(&lambda)?;
        let (mq, mp) = (at(&q)?, at(&p)?);
        let reference = if h == cfg.h_o {
            Some(("qm", &g.q_qm, &g.p_qm))
        } else if h == 0.0 {
            Some(("cm", &g.q_cm, &g.p_cm))
        } else {
            None
        };
        let mut row = SweepRow {
            h,
            lambda: lambda.to_f64().expect("finite"),
            mean_q_tilde: state.mean(&mq)?,
            mean_p_tilde: state.mean(&mp)?,
            mean_observable: state.mean(&at(&observable.substitute_lambda(&lambda)?)?)?,
            bulk_commutator_defect: commutator_defect(&bq, &bp, &q, &p)?.bulk_defect_norm,
            endpoint: "",
            mean_q_ref: None,
            mean_p_ref: None,
            op_diff_q: None,
            op_diff_p: None,
        };
        if let Some((name, rq, rp)) = reference {
            let (rq, rp) = (at(rq)?, at(rp)?);
            row.endpoint = name;
            row.mean_q_ref = Some(state.mean(&rq)?);
            row.mean_p_ref = Some(state.mean(&rp)?);
            row.op_diff_q = Some(max_entry(&mq, &rq)?);
            row.op_diff_p = Some(max_entry(&mp, &rp)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
}

pub fn sweep_json(rows: &[SweepRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize") + "\n"
}
