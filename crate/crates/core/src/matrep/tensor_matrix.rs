use std::collections::HashMap;
use std::marker::PhantomData;

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;

use super::backend::{Backend, BackendKind};
use crate::error::{Error, Result};
use crate::ncpoly::{Evaluator, ObservableExpr, RIndex, TensorPoly};
use crate::scalar::{exact_to_real, Exact, Real};

/// Dimensions of `ℂ^{N_q} ⊗ ℂ^{N_p} ⊗ ℂ²` and its flat index convention
/// `flat = i_q·(N_p·2) + i_p·2 + i_r` (r fastest, q slowest).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TensorShape {
    pub dim_q: usize,
    pub dim_p: usize,
}

impl TensorShape {
    pub fn new(dim_q: usize, dim_p: usize) -> Self {
        TensorShape { dim_q, dim_p }
    }

    pub fn size(&self) -> usize {
        2 * self.dim_q * self.dim_p
    }

    pub fn flatten(&self, iq: usize, ip: usize, ir: usize) -> usize {
        debug_assert!(iq < self.dim_q && ip < self.dim_p && ir < 2);
        iq * (self.dim_p * 2) + ip * 2 + ir
    }

    pub fn unflatten(&self, flat: usize) -> (usize, usize, usize) {
        let ir = flat % 2;
        let ip = (flat / 2) % self.dim_p;
        let iq = flat / (2 * self.dim_p);
        (iq, ip, ir)
    }

    /// Flat index into a single r-block (`N_q·N_p` square).
    pub fn block_index(&self, iq: usize, ip: usize) -> usize {
        iq * self.dim_p + ip
    }
}

/// A realized operator on the truncated triple product.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorMatrix<T: Real = f64> {
    shape: TensorShape,
    data: DMatrix<Complex<T>>,
}

impl<T: Real> TensorMatrix<T> {
    pub fn from_data(shape: TensorShape, data: DMatrix<Complex<T>>) -> Result<Self> {
        if data.nrows() != shape.size() || data.ncols() != shape.size() {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} matrix for shape {}×{}×2",
                data.nrows(),
                data.ncols(),
                shape.dim_q,
                shape.dim_p
            )));
        }
        Ok(TensorMatrix { shape, data })
    }

    pub fn identity(shape: TensorShape) -> Self {
        TensorMatrix {
            shape,
            data: DMatrix::identity(shape.size(), shape.size()),
        }
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn dim_q(&self) -> usize {
        self.shape.dim_q
    }

    pub fn dim_p(&self) -> usize {
        self.shape.dim_p
    }

    pub fn data(&self) -> &DMatrix<Complex<T>> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<Complex<T>> {
        self.data
    }

    /// Nonzero entries as `(row, col, value)` triplets.
    pub fn triplets(&self) -> Vec<(usize, usize, Complex<T>)> {
        nonzero(&self.data)
    }

    /// Product of the realized matrices. Mostly-zero operands, which is
    /// what low-degree polynomials realize to, are multiplied entry by entry.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs)?;
        let a = nonzero(&self.data);
        let n = self.shape.size();
        let data = if a.len() * 10 < n * n {
            sparse_product(&a, &rhs.data)
        } else {
            &self.data * &rhs.data
        };
        Ok(TensorMatrix { shape: self.shape, data })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs)?;
        Ok(TensorMatrix {
            shape: self.shape,
            data: &self.data + &rhs.data,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_shape(rhs)?;
        Ok(TensorMatrix {
            shape: self.shape,
            data: &self.data - &rhs.data,
        })
    }

    /// `AB − BA` of the realized matrices.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(rhs)?.sub(&rhs.mul(self)?)?)
    }

    pub fn adjoint(&self) -> Self {
        TensorMatrix {
            shape: self.shape,
            data: self.data.adjoint(),
        }
    }

    fn check_shape(&self, rhs: &Self) -> Result<()> {
        if self.shape != rhs.shape {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", self.shape, rhs.shape)));
        }
        Ok(())
    }
}

pub(crate) fn nonzero<T: Real>(m: &DMatrix<Complex<T>>) -> Vec<(usize, usize, Complex<T>)> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if z != zero {
                out.push((i, j, z));
            }
        }
    }
    out
}

/// `Q^m P^n` on one factor, computed from cached powers.
struct MonomialCache<'a, T: Real> {
    backend: &'a Backend<T>,
    q_pows: Vec<DMatrix<Complex<T>>>,
    p_pows: Vec<DMatrix<Complex<T>>>,
    entries: HashMap<(u32, u32), Vec<(usize, usize, Complex<T>)>>,
}

impl<'a, T: Real> MonomialCache<'a, T> {
    fn new(backend: &'a Backend<T>) -> Self {
        let id = DMatrix::identity(backend.dim(), backend.dim());
        MonomialCache {
            backend,
            q_pows: vec![id.clone()],
            p_pows: vec![id],
            entries: HashMap::new(),
        }
    }

    fn power(pows: &mut Vec<DMatrix<Complex<T>>>, base: &DMatrix<Complex<T>>, k: usize) -> DMatrix<Complex<T>> {
        while pows.len() <= k {
            let next = pows.last().unwrap() * base;
            pows.push(next);
        }
        pows[k].clone()
    }

    fn get(&mut self, key: (u32, u32)) -> &[(usize, usize, Complex<T>)] {
        if !self.entries.contains_key(&key) {
            let q = Self::power(&mut self.q_pows, self.backend.q(), key.0 as usize);
            let p = Self::power(&mut self.p_pows, self.backend.p(), key.1 as usize);
            self.entries.insert(key, nonzero(&(q * p)));
        }
        &self.entries[&key]
    }
}

fn check_hbar<T: Real>(bq: &Backend<T>, bp: &Backend<T>) -> Result<T> {
    let (a, b) = (bq.hbar(), bp.hbar());
    let scale = a.abs().max(b.abs());
    if (a - b).abs() > scale * T::tol(1e-12) {
        return Err(Error::HbarMismatch(a.to_f64_lossy(), b.to_f64_lossy()));
    }
    Ok(a)
}

/// Maps every term `(m_q,n_q,m_p,n_p,i,j)` of `a` to
/// `Q_q^{m_q} P_q^{n_q} ⊗ Q_p^{m_p} P_p^{n_p} ⊗ E_ij`.
///
/// `lambda` is only consulted when `a` still carries a symbolic `λ`.
pub fn realize<R: Exact, T: Real>(
    a: &TensorPoly<R>,
    bq: &Backend<T>,
    bp: &Backend<T>,
    lambda: Option<T>,
) -> Result<TensorMatrix<T>> {
    let hbar = check_hbar(bq, bp)?;
    let shape = TensorShape::new(bq.dim(), bp.dim());
    let mut data = DMatrix::<Complex<T>>::zeros(shape.size(), shape.size());
    let mut cache_q = MonomialCache::new(bq);
    let mut cache_p = MonomialCache::new(bp);
    let stride_q = shape.dim_p * 2;

    for (key, coeff) in a.terms() {
        let c = coeff.evaluate(hbar, lambda)?;
        let (i, j) = (key.row.index(), key.col.index());
        let fq = cache_q.get(key.q_monomial()).to_vec();
        let fp = cache_p.get(key.p_monomial());
        for &(a0, a1, va) in &fq {
            let ca = c * va;
            for &(b0, b1, vb) in fp {
                data[(a0 * stride_q + b0 * 2 + i, a1 * stride_q + b1 * 2 + j)] += ca * vb;
            }
        }
    }
    Ok(TensorMatrix { shape, data })
}

fn sparse_product<T: Real>(a: &[(usize, usize, Complex<T>)], b: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let n = b.nrows();
    let mut rows: Vec<Vec<(usize, Complex<T>)>> = vec![Vec::new(); n];
    for (i, j, z) in nonzero(b) {
        rows[i].push((j, z));
    }
    let mut out = DMatrix::zeros(n, b.ncols());
    for &(i, k, x) in a {
        for &(j, y) in &rows[k] {
            out[(i, j)] += x * y;
        }
    }
    out
}

/// The `(i, j)` block in the r-factor: the discretized kernel
/// `⟨q,p,r_i| m |q',p',r_j⟩`, indexed by `i_q·N_p + i_p`.
pub fn kernel_block<T: Real>(m: &TensorMatrix<T>, i: RIndex, j: RIndex) -> DMatrix<Complex<T>> {
    let n = m.dim_q() * m.dim_p();
    let (ri, rj) = (i.index(), j.index());
    DMatrix::from_fn(n, n, |a, b| m.data[(2 * a + ri, 2 * b + rj)])
}

/// Max-entry norm of `m` restricted to rows and columns whose factor
/// indices satisfy `i_q < keep_q` and `i_p < keep_p`.
pub fn restricted_max_norm<T: Real>(m: &TensorMatrix<T>, keep_q: usize, keep_p: usize) -> T {
    let shape = m.shape;
    let inside = |flat: usize| {
        let (iq, ip, _) = shape.unflatten(flat);
        iq < keep_q && ip < keep_p
    };
    let rows: Vec<usize> = (0..shape.size()).filter(|&k| inside(k)).collect();
    let mut best = T::zero();
    for &c in &rows {
        for &r in &rows {
            best = best.max(m.data[(r, c)].modulus());
        }
    }
    best
}

/// Number of levels of a factor left after dropping the top `drop` Fock
/// levels; grid factors keep everything.
pub fn kept_levels<T: Real>(b: &Backend<T>, drop: usize) -> usize {
    match b.kind() {
        BackendKind::Fock => b.dim().saturating_sub(drop),
        _ => b.dim(),
    }
}

/// How far the realized matrices miss the symbolic commutator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorDefect<T: Real = f64> {
    pub defect_norm: T,
    pub bulk_defect_norm: T,
}

/// Compares `realize([a,b])` with `realize(a)realize(b) − realize(b)realize(a)`.
/// The bulk norm leaves out the top Fock level of every Fock factor.
pub fn commutator_defect<R: Exact, T: Real>(
    bq: &Backend<T>,
    bp: &Backend<T>,
    a: &TensorPoly<R>,
    b: &TensorPoly<R>,
) -> Result<CommutatorDefect<T>> {
    let symbolic = realize(&a.commutator(b), bq, bp, None)?;
    let ma = realize(a, bq, bp, None)?;
    let mb = realize(b, bq, bp, None)?;
    let diff = symbolic.sub(&ma.commutator(&mb)?)?;
    Ok(CommutatorDefect {
        defect_norm: restricted_max_norm(&diff, bq.dim(), bp.dim()),
        bulk_defect_norm: restricted_max_norm(&diff, kept_levels(bq, 1), kept_levels(bp, 1)),
    })
}

/// Evaluates observable expressions on a single factor, `X ↦ Q`, `Y ↦ P`.
pub struct FactorMatrixEval<T: Real> {
    dim: usize,
    marker: PhantomData<T>,
}

impl<T: Real> FactorMatrixEval<T> {
    pub fn new(dim: usize) -> Self {
        FactorMatrixEval {
            dim,
            marker: PhantomData,
        }
    }
}

impl<R: Exact, T: Real> Evaluator<R> for FactorMatrixEval<T> {
    type Value = DMatrix<Complex<T>>;

    fn constant(&self, c: &R) -> Self::Value {
        DMatrix::identity(self.dim, self.dim) * Complex::new(exact_to_real::<R, T>(c), T::zero())
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a + b
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a * b
    }

    fn neg(&self, a: &Self::Value) -> Self::Value {
        -a
    }
}

/// `f(Q, P)` on one factor with the factor's own matrices, products kept in
/// the order written.
pub fn realize_factor<R: Exact, T: Real>(f: &ObservableExpr<R>, b: &Backend<T>) -> Result<DMatrix<Complex<T>>> {
    let ev = FactorMatrixEval::<T>::new(b.dim());
    f.evaluate(&ev, b.q(), b.p())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrep::build_backend;
    use crate::ncpoly::Generators;
    use num_rational::BigRational;

    #[test]
    fn index_round_trip_small() {
        let s = TensorShape::new(3, 5);
        let mut seen = vec![false; s.size()];
        for iq in 0..3 {
            for ip in 0..5 {
                for ir in 0..2 {
                    let f = s.flatten(iq, ip, ir);
                    assert!(!seen[f]);
                    seen[f] = true;
                    assert_eq!(s.unflatten(f), (iq, ip, ir));
                }
            }
        }
    }

    #[test]
    fn identity_realizes_to_identity() {
        let b = build_backend::<f64>(BackendKind::Fock, 3, 1.0, None).unwrap();
        let m = realize(&TensorPoly::<BigRational>::identity(), &b, &b, None).unwrap();
        assert_eq!(m, TensorMatrix::identity(TensorShape::new(3, 3)));
    }

    #[test]
    fn symbolic_lambda_needs_a_value() {
        let g = Generators::<BigRational>::new();
        let b = build_backend::<f64>(BackendKind::Fock, 3, 1.0, None).unwrap();
        assert!(matches!(realize(&g.q_tilde, &b, &b, None), Err(Error::SymbolicLambda)));
        assert!(realize(&g.q_tilde, &b, &b, Some(0.5)).is_ok());
    }

    #[test]
    fn hbar_mismatch_is_rejected() {
        let bq = build_backend::<f64>(BackendKind::Fock, 3, 1.0, None).unwrap();
        let bp = build_backend::<f64>(BackendKind::Fock, 3, 2.0, None).unwrap();
        let id = TensorPoly::<BigRational>::identity();
        assert!(matches!(realize(&id, &bq, &bp, None), Err(Error::HbarMismatch(..))));
    }

    #[test]
    fn factor_realization_keeps_order() {
        let b = build_backend::<f64>(BackendKind::Fock, 5, 1.0, None).unwrap();
        let xy = ObservableExpr::<BigRational>::x() * ObservableExpr::y();
        let m = realize_factor(&xy, &b).unwrap();
        assert_eq!(m, b.q() * b.p());
    }
}
