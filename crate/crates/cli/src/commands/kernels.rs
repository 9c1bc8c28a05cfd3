//! `semiclab kernels`: the four r-blocks of a realized observable.

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;

use semiclassical_core::matrep::{export::write_kernel_csv, kernel_block, realize};
use semiclassical_core::ncpoly::{eval_ncpoly, RIndex};
use semiclassical_core::Gens;

use crate::config::{Algebra, RunConfig};
use crate::error::{CliError, CliResult};

pub struct Kernel {
    pub row: RIndex,
    pub col: RIndex,
    pub block: DMatrix<Complex<f64>>,
}

impl Kernel {
    /// `qq`, `qp`, `pq` or `pp`.
    pub fn label(&self) -> String {
        format!("{}{}", self.row.label(), self.col.label())
    }
}

/// The single `h` a kernel dump or an evolution runs at.
pub fn single_h(cfg: &RunConfig) -> CliResult<f64> {
    match cfg.h_values.as_slice() {
        [h] => Ok(*h),
        hs => Err(CliError::Config(format!(
            "this command needs exactly one h value (got {}); pass --h",
            hs.len()
        ))),
    }
}

/// Realizes the observable with `Q`, `P` replaced by the configured
/// generator pair and splits it into r-blocks.
pub fn cmd_kernels(cfg: &RunConfig) -> CliResult<Vec<Kernel>> {
    cfg.validate()?;
    let h = single_h(cfg)?;
    let (bq, bp) = cfg.backends()?;
    let g = Gens::new();
    let (x, y) = match cfg.algebra {
        Algebra::Tilde => (&g.q_tilde, &g.p_tilde),
        Algebra::Qm => (&g.q_qm, &g.p_qm),
        Algebra::Cm => (&g.q_cm, &g.p_cm),
    };
    let op = eval_ncpoly(&cfg.expr()?, x, y)?.substitute_lambda(&cfg.lambda(h))?;
    let m = realize(&op, &bq, &bp, None)?;
    let mut out = Vec::new();
    for row in RIndex::BOTH {
        for col in RIndex::BOTH {
            out.push(Kernel {
                row,
                col,
                block: kernel_block(&m, row, col),
            });
        }
    }
    Ok(out)
}

/// Writes `kernel_<block>.csv` for each block; returns the paths.
pub fn write_kernels_csv(kernels: &[Kernel], dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for k in kernels {
        let path = dir.join(format!("kernel_{}.csv", k.label()));
        write_kernel_csv(std::fs::File::create(&path)?, &k.block)?;
        paths.push(path);
    }
    Ok(paths)
}

#[derive(Serialize)]
struct Entry {
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

/// `{"qq": [{row, col, re, im}, ...], ...}` with nonzero entries only.
pub fn kernels_json(kernels: &[Kernel]) -> String {
    let map: serde_json::Map<String, serde_json::Value> = kernels
        .iter()
        .map(|k| {
            let mut entries = Vec::new();
            for col in 0..k.block.ncols() {
                for row in 0..k.block.nrows() {
                    let z = k.block[(row, col)];
                    if z != Complex::new(0.0, 0.0) {
                        entries.push(Entry { row, col, re: z.re, im: z.im });
                    }
                }
            }
            (k.label(), serde_json::to_value(entries).expect("entries serialize"))
        })
        .collect();
    serde_json::to_string_pretty(&map).expect("kernels serialize") + "\n"
}
