//! On-disk formats for realized matrices and kernels.
//!
//! Binary layout: column-major, each entry a little-endian `f64` pair
//! `(re, im)`, no header. Dimensions live in the JSON sidecar.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::tensor_matrix::TensorMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const ORDERING: &str = "flat = i_q*(N_p*2) + i_p*2 + i_r";
pub const LAYOUT: &str = "column-major; little-endian f64 (re, im) pairs; no header";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixSidecar {
    pub kind: String,
    /// `[N_q, N_p, 2]`.
    pub dims: [usize; 3],
    pub hbar: f64,
    pub ordering: String,
    pub layout: String,
}

pub fn write_matrix_binary<W: Write, T: Real>(w: &mut W, m: &DMatrix<Complex<T>>) -> Result<()> {
    for z in m.iter() {
        w.write_all(&z.re.to_f64_lossy().to_le_bytes())?;
        w.write_all(&z.im.to_f64_lossy().to_le_bytes())?;
    }
    Ok(())
}

pub fn read_matrix_binary<Rd: Read>(r: &mut Rd, n: usize) -> Result<DMatrix<Complex<f64>>> {
    let mut buf = vec![0u8; n * n * 16];
    r.read_exact(&mut buf)?;
    let values = buf.chunks_exact(16).map(|c| {
        let re = f64::from_le_bytes(c[..8].try_into().unwrap());
        let im = f64::from_le_bytes(c[8..].try_into().unwrap());
        Complex::new(re, im)
    });
    Ok(DMatrix::from_iterator(n, n, values))
}

/// Writes `<bin>` and its JSON sidecar `<json>`.
pub fn export_tensor_matrix<T: Real>(
    m: &TensorMatrix<T>,
    kind: &str,
    hbar: f64,
    bin: &Path,
    json: &Path,
) -> Result<MatrixSidecar> {
    let mut w = BufWriter::new(File::create(bin)?);
    write_matrix_binary(&mut w, m.data())?;
    w.flush()?;
    let sidecar = MatrixSidecar {
        kind: kind.to_string(),
        dims: [m.dim_q(), m.dim_p(), 2],
        hbar,
        ordering: ORDERING.to_string(),
        layout: LAYOUT.to_string(),
    };
    let mut f = BufWriter::new(File::create(json)?);
    serde_json::to_writer_pretty(&mut f, &sidecar)?;
    f.flush()?;
    Ok(sidecar)
}

pub fn import_tensor_matrix(bin: &Path, json: &Path) -> Result<(MatrixSidecar, DMatrix<Complex<f64>>)> {
    let sidecar: MatrixSidecar = serde_json::from_reader(BufReader::new(File::open(json)?))?;
    let n = sidecar.dims.iter().product();
    let m = read_matrix_binary(&mut BufReader::new(File::open(bin)?), n)?;
    Ok((sidecar, m))
}

#[derive(Serialize, Deserialize)]
struct KernelRow {
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

/// Kernel entries as CSV `row,col,re,im`; only nonzero entries are listed.
pub fn write_kernel_csv<W: Write, T: Real>(w: W, k: &DMatrix<Complex<T>>) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(["row", "col", "re", "im"])?;
    for col in 0..k.ncols() {
        for row in 0..k.nrows() {
            let z = k[(row, col)];
            if z.re != T::zero() || z.im != T::zero() {
                wtr.serialize(KernelRow {
                    row,
                    col,
                    re: z.re.to_f64_lossy(),
                    im: z.im.to_f64_lossy(),
                })?;
            }
        }
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_kernel_csv<Rd: Read>(r: Rd, n: usize) -> Result<DMatrix<Complex<f64>>> {
    let mut m = DMatrix::zeros(n, n);
    let mut rdr = csv::Reader::from_reader(r);
    for rec in rdr.deserialize() {
        let k: KernelRow = rec?;
        if k.row >= n || k.col >= n {
            return Err(Error::Malformed(format!("kernel entry ({}, {}) outside {}×{}", k.row, k.col, n, n)));
        }
        m[(k.row, k.col)] = Complex::new(k.re, k.im);
    }
    Ok(m)
}
