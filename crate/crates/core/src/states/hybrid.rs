use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::weights::{check_weights, norm_sq, WeightSpec};
use crate::dynamics::PhaseSpaceDensity;
use crate::error::{Error, Result};
use crate::matrep::{hermitian_defect, Backend, BackendKind, HermitianEigen, TensorMatrix, TensorShape};
use crate::scalar::Real;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    LiftedQm,
    CmPoint,
    CmMixed,
    Custom,
}

/// A vector on `ℂ^{N_q} ⊗ ℂ^{N_p} ⊗ ℂ²`.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridVector<T: Real = f64> {
    shape: TensorShape,
    data: DVector<Complex<T>>,
    provenance: Provenance,
    trace_norm_convention: T,
}

/// A density operator on `ℂ^{N_q} ⊗ ℂ^{N_p} ⊗ ℂ²`.
///
/// `trace_norm_convention` is the discrete stand-in for `δ²(0)`,
/// `1/(ΔqΔp)` on grids and 1 where no delta normalization is involved.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridDensity<T: Real = f64> {
    shape: TensorShape,
    data: DMatrix<Complex<T>>,
    provenance: Provenance,
    trace_norm_convention: T,
}

fn unit_defect<T: Real>(v: &DVector<Complex<T>>) -> T {
    (norm_sq(v).sqrt() - T::one()).abs()
}

fn r_vector<T: Real>(c_q: Complex<T>, c_p: Complex<T>) -> [Complex<T>; 2] {
    [c_q, c_p]
}

impl<T: Real> HybridVector<T> {
    pub fn custom(shape: TensorShape, data: DVector<Complex<T>>) -> Result<Self> {
        if data.len() != shape.size() {
            return Err(Error::DimensionMismatch(format!("vector of length {} for size {}", data.len(), shape.size())));
        }
        Ok(HybridVector {
            shape,
            data,
            provenance: Provenance::Custom,
            trace_norm_convention: T::one(),
        })
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn data(&self) -> &DVector<Complex<T>> {
        &self.data
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn trace_norm_convention(&self) -> T {
        self.trace_norm_convention
    }

    pub fn norm(&self) -> T {
        norm_sq(&self.data).sqrt()
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        HybridVector {
            data: self.data.map(|z| z * c),
            ..self.clone()
        }
    }

    pub(crate) fn with_data(&self, data: DVector<Complex<T>>) -> Self {
        HybridVector { data, ..self.clone() }
    }

    /// `|v⟩⟨v|`.
    pub fn outer(&self) -> HybridDensity<T> {
        HybridDensity {
            shape: self.shape,
            data: &self.data * self.data.adjoint(),
            provenance: self.provenance,
            trace_norm_convention: self.trace_norm_convention,
        }
    }

    /// `|v⟩⟨v|` rescaled by the delta convention, i.e. the outer product of
    /// the delta-normalized vector `v/√(ΔqΔp)`.
    pub fn outer_delta_normalized(&self) -> HybridDensity<T> {
        let mut d = self.outer();
        d.data *= Complex::new(self.trace_norm_convention, T::zero());
        d
    }
}

impl<T: Real> HybridDensity<T> {
    pub fn custom(shape: TensorShape, data: DMatrix<Complex<T>>) -> Result<Self> {
        if data.nrows() != shape.size() || data.ncols() != shape.size() {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} density for size {}",
                data.nrows(),
                data.ncols(),
                shape.size()
            )));
        }
        Ok(HybridDensity {
            shape,
            data,
            provenance: Provenance::Custom,
            trace_norm_convention: T::one(),
        })
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn data(&self) -> &DMatrix<Complex<T>> {
        &self.data
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn trace_norm_convention(&self) -> T {
        self.trace_norm_convention
    }

    pub fn trace(&self) -> Complex<T> {
        self.data.trace()
    }

    pub fn scaled(&self, c: T) -> Self {
        HybridDensity {
            data: &self.data * Complex::new(c, T::zero()),
            ..self.clone()
        }
    }

    pub(crate) fn with_data(&self, data: DMatrix<Complex<T>>) -> Self {
        HybridDensity { data, ..self.clone() }
    }
}

/// `c_q·(ψ_q⊗a⊗e_q) + c_p·(b⊗ψ_p⊗e_p)` where `ψ_q`, `ψ_p` are the same
/// state written in the bases of factor q and factor p.
pub fn lift_qm_eigenstate_split<T: Real>(
    psi_q: &DVector<Complex<T>>,
    psi_p: &DVector<Complex<T>>,
    w: &WeightSpec<T>,
) -> Result<HybridVector<T>> {
    for (name, v) in [("psi_q", psi_q), ("psi_p", psi_p)] {
        let d = unit_defect(v);
        if d > T::tol(1e-10) {
            return Err(Error::InvalidState(format!("{} is not normalized (‖ψ‖ − 1 = {})", name, d)));
        }
    }
    if psi_q.len() != w.dim_q() || psi_p.len() != w.dim_p() {
        return Err(Error::DimensionMismatch(format!(
            "ψ dimensions ({}, {}) vs weights ({}, {})",
            psi_q.len(),
            psi_p.len(),
            w.dim_q(),
            w.dim_p()
        )));
    }
    let shape = TensorShape::new(w.dim_q(), w.dim_p());
    let mut data = DVector::zeros(shape.size());
    for iq in 0..shape.dim_q {
        for ip in 0..shape.dim_p {
            data[shape.flatten(iq, ip, 0)] = w.c_q() * psi_q[iq] * w.a()[ip];
            data[shape.flatten(iq, ip, 1)] = w.c_p() * w.b()[iq] * psi_p[ip];
        }
    }
    Ok(HybridVector {
        shape,
        data,
        provenance: Provenance::LiftedQm,
        trace_norm_convention: T::one(),
    })
}

/// Lifts a single-factor state when both factors use the same basis.
pub fn lift_qm_eigenstate<T: Real>(psi: &DVector<Complex<T>>, w: &WeightSpec<T>) -> Result<HybridVector<T>> {
    lift_qm_eigenstate_split(psi, psi, w)
}

fn check_cm_backends<T: Real>(bq: &Backend<T>, bp: &Backend<T>) -> Result<T> {
    if bq.kind() != BackendKind::GridPosition || bp.kind() != BackendKind::GridMomentum {
        return Err(Error::InvalidBackend(format!(
            "classical states need a position grid on factor q and a momentum grid on factor p, got {:?}/{:?}",
            bq.kind(),
            bp.kind()
        )));
    }
    let (dq, dp) = (bq.spacing().unwrap(), bp.spacing().unwrap());
    Ok(T::one() / (dq * dp))
}

/// `|q_k⟩ ⊗ |p_l⟩ ⊗ (c_q|r_q⟩ + c_p|r_p⟩)`, unit norm.
pub fn cm_point_state<T: Real>(
    bq: &Backend<T>,
    bp: &Backend<T>,
    k: usize,
    l: usize,
    c_q: Complex<T>,
    c_p: Complex<T>,
) -> Result<HybridVector<T>> {
    let convention = check_cm_backends(bq, bp)?;
    check_weights(c_q, c_p)?;
    if k >= bq.dim() || l >= bp.dim() {
        return Err(Error::InvalidState(format!(
            "grid point ({}, {}) outside {}×{}",
            k,
            l,
            bq.dim(),
            bp.dim()
        )));
    }
    let shape = TensorShape::new(bq.dim(), bp.dim());
    let mut data = DVector::zeros(shape.size());
    for (ir, c) in r_vector(c_q, c_p).into_iter().enumerate() {
        data[shape.flatten(k, l, ir)] = c;
    }
    Ok(HybridVector {
        shape,
        data,
        provenance: Provenance::CmPoint,
        trace_norm_convention: convention,
    })
}

/// `ρ(q_k, p_l)` placed on the grid diagonal, tensored with the rank-one
/// projector onto `c_q|r_q⟩ + c_p|r_p⟩`.
pub fn cm_mixed_density<T: Real>(rho: &PhaseSpaceDensity<T>, c_q: Complex<T>, c_p: Complex<T>) -> Result<HybridDensity<T>> {
    rho.validate()?;
    check_weights(c_q, c_p)?;
    let (nq, np) = rho.dims();
    let shape = TensorShape::new(nq, np);
    let r = r_vector(c_q, c_p);
    let mut data = DMatrix::zeros(shape.size(), shape.size());
    for iq in 0..nq {
        for ip in 0..np {
            let v = Complex::new(rho.values()[(iq, ip)], T::zero());
            for i in 0..2 {
                for j in 0..2 {
                    data[(shape.flatten(iq, ip, i), shape.flatten(iq, ip, j))] = v * r[i] * r[j].conj();
                }
            }
        }
    }
    Ok(HybridDensity {
        shape,
        data,
        provenance: Provenance::CmMixed,
        trace_norm_convention: T::one() / (rho.dq() * rho.dp()),
    })
}

/// States that admit the trace-ratio mean value.
pub trait Expectation<T: Real> {
    fn shape(&self) -> TensorShape;

    /// `(Tr ρA, Tr ρ)` or `(⟨v|A|v⟩, ⟨v|v⟩)`.
    fn raw_expectation(&self, a: &DMatrix<Complex<T>>) -> (Complex<T>, T);
}

impl<T: Real> Expectation<T> for HybridVector<T> {
    fn shape(&self) -> TensorShape {
        self.shape
    }

    fn raw_expectation(&self, a: &DMatrix<Complex<T>>) -> (Complex<T>, T) {
        let av = a * &self.data;
        (self.data.dotc(&av), norm_sq(&self.data))
    }
}

impl<T: Real> Expectation<T> for HybridDensity<T> {
    fn shape(&self) -> TensorShape {
        self.shape
    }

    fn raw_expectation(&self, a: &DMatrix<Complex<T>>) -> (Complex<T>, T) {
        let n = self.data.nrows();
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            for j in 0..n {
                acc += self.data[(i, j)] * a[(j, i)];
            }
        }
        (acc, self.data.trace().re)
    }
}

/// `Tr(ρA)/Tr ρ` (or `⟨v|A|v⟩/⟨v|v⟩`); the overall normalization of the
/// state drops out.
pub fn mean_value<T: Real, S: Expectation<T>>(state: &S, a: &TensorMatrix<T>) -> Result<T> {
    if state.shape() != a.shape() {
        return Err(Error::DimensionMismatch(format!("state {:?} vs operator {:?}", state.shape(), a.shape())));
    }
    let defect = hermitian_defect(a.data());
    if defect > T::tol(1e-10) {
        return Err(Error::NotHermitian(defect.to_f64_lossy()));
    }
    let (num, den) = state.raw_expectation(a.data());
    if den.abs() <= T::default_epsilon() * T::default_epsilon() {
        return Err(Error::InvalidState("state has zero trace".into()));
    }
    let mean = num / den;
    if mean.im.abs() > T::tol(1e-10) {
        return Err(Error::ComplexMean(mean.im.to_f64_lossy()));
    }
    Ok(mean.re)
}

/// The three state-axiom diagnostics for a density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StateReport {
    pub hermitian_defect: f64,
    pub min_eigenvalue: f64,
    pub trace: f64,
}

impl StateReport {
    pub fn hermitian_ok(&self) -> bool {
        self.hermitian_defect <= 1e-12
    }

    pub fn positive_ok(&self) -> bool {
        self.min_eigenvalue >= -1e-10
    }

    pub fn trace_ok(&self) -> bool {
        self.trace > 0.0
    }

    pub fn passes(&self) -> bool {
        self.hermitian_ok() && self.positive_ok() && self.trace_ok()
    }
}

/// Reports Hermiticity defect, smallest eigenvalue of the Hermitian part and
/// real trace. Never fails.
pub fn validate_state<T: Real>(d: &HybridDensity<T>) -> StateReport {
    let defect = hermitian_defect(&d.data);
    let min_eigenvalue = HermitianEigen::new(&d.data, T::from_f64_lossy(f64::INFINITY))
        .map(|e| e.min_eigenvalue().to_f64_lossy())
        .unwrap_or(f64::NAN);
    StateReport {
        hermitian_defect: defect.to_f64_lossy(),
        min_eigenvalue,
        trace: d.trace().re.to_f64_lossy(),
    }
}
