use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;

use super::tensor_matrix::TensorMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `max |M − M†|` over all entries.
pub fn hermitian_defect<T: Real>(m: &DMatrix<Complex<T>>) -> T {
    let n = m.nrows();
    let mut best = T::zero();
    for j in 0..n {
        for i in 0..=j.min(n - 1) {
            best = best.max((m[(i, j)] - m[(j, i)].conj()).modulus());
        }
    }
    best
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Index sets of the connected components of the sparsity pattern.
fn components<T: Real>(m: &DMatrix<Complex<T>>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let zero = Complex::new(T::zero(), T::zero());
    let mut parent: Vec<usize> = (0..n).collect();
    for j in 0..n {
        for i in 0..j {
            if m[(i, j)] != zero || m[(j, i)] != zero {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for k in 0..n {
        let r = find(&mut parent, k);
        groups[r].push(k);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

struct Block<T: Real> {
    indices: Vec<usize>,
    values: DVector<T>,
    vectors: DMatrix<Complex<T>>,
}

/// Eigendecomposition of a Hermitian matrix, computed separately on each
/// decoupled block of its sparsity pattern.
pub struct HermitianEigen<T: Real = f64> {
    dim: usize,
    blocks: Vec<Block<T>>,
}

impl<T: Real> HermitianEigen<T> {
    /// Fails with `NotHermitian` when `max |M − M†| > tol`.
    pub fn new(m: &DMatrix<Complex<T>>, tol: T) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!("{}×{} is not square", m.nrows(), m.ncols())));
        }
        let defect = hermitian_defect(m);
        if defect > tol {
            return Err(Error::NotHermitian(defect.to_f64_lossy()));
        }
        let blocks = components(m)
            .into_iter()
            .map(|indices| {
                let k = indices.len();
                let sub = DMatrix::from_fn(k, k, |a, b| m[(indices[a], indices[b])]);
                // symmetrize so roundoff-level anti-Hermitian parts do not leak in
                let sub = (&sub + sub.adjoint()) * Complex::new(T::from_f64_lossy(0.5), T::zero());
                let eig = SymmetricEigen::new(sub);
                Block {
                    indices,
                    values: eig.eigenvalues,
                    vectors: eig.eigenvectors,
                }
            })
            .collect();
        Ok(HermitianEigen { dim: m.nrows(), blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut v: Vec<T> = self.blocks.iter().flat_map(|b| b.values.iter().copied()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        v
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues().first().copied().unwrap_or_else(T::zero)
    }

    /// Eigenpairs in ascending order of eigenvalue, vectors embedded in the
    /// full space.
    pub fn eigenpairs(&self) -> Vec<(T, DVector<Complex<T>>)> {
        let mut out = Vec::with_capacity(self.dim);
        for b in &self.blocks {
            for (k, &e) in b.values.iter().enumerate() {
                let mut v = DVector::zeros(self.dim);
                for (a, &idx) in b.indices.iter().enumerate() {
                    v[idx] = b.vectors[(a, k)];
                }
                out.push((e, v));
            }
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        out
    }

    /// `f(M)` restricted to one block, as a dense block matrix.
    fn block_function(b: &Block<T>, f: &impl Fn(T) -> Complex<T>) -> DMatrix<Complex<T>> {
        let mut scaled = b.vectors.clone();
        for (k, &e) in b.values.iter().enumerate() {
            let fe = f(e);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= fe);
        }
        scaled * b.vectors.adjoint()
    }

    /// The eigenvector matrix `V` as a block operator together with the
    /// eigenvalues, both in the eigen-coordinates that `V` maps from.
    /// Eigen-coordinate `k` of a block sits at the block's `k`-th index.
    pub fn eigenbasis(&self) -> (BlockOperator<T>, DVector<T>) {
        let mut values = DVector::zeros(self.dim);
        for b in &self.blocks {
            for (k, &i) in b.indices.iter().enumerate() {
                values[i] = b.values[k];
            }
        }
        let v = BlockOperator {
            dim: self.dim,
            blocks: self.blocks.iter().map(|b| (b.indices.clone(), b.vectors.clone())).collect(),
        };
        (v, values)
    }

    /// Per-block dense matrices of `f(M)`, reusable for repeated application.
    pub fn function(&self, f: impl Fn(T) -> Complex<T>) -> BlockOperator<T> {
        BlockOperator {
            dim: self.dim,
            blocks: self
                .blocks
                .iter()
                .map(|b| (b.indices.clone(), Self::block_function(b, &f)))
                .collect(),
        }
    }
}

/// A block-diagonal operator `f(M)` sharing the block pattern of `M`.
#[derive(Clone, Debug)]
pub struct BlockOperator<T: Real = f64> {
    dim: usize,
    blocks: Vec<(Vec<usize>, DMatrix<Complex<T>>)>,
}

impl<T: Real> BlockOperator<T> {
    pub fn apply(&self, v: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        let mut out = DVector::zeros(self.dim);
        for (idx, u) in &self.blocks {
            let sub = DVector::from_iterator(idx.len(), idx.iter().map(|&i| v[i]));
            let w = u * sub;
            for (a, &i) in idx.iter().enumerate() {
                out[i] = w[a];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        BlockOperator {
            dim: self.dim,
            blocks: self.blocks.iter().map(|(i, u)| (i.clone(), u.adjoint())).collect(),
        }
    }

    /// `U ρ U†`, done block pair by block pair.
    pub fn conjugate(&self, rho: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (ia, ua) in &self.blocks {
            for (ib, ub) in &self.blocks {
                let sub = DMatrix::from_fn(ia.len(), ib.len(), |a, b| rho[(ia[a], ib[b])]);
                if sub.iter().all(|z| z.re == T::zero() && z.im == T::zero()) {
                    continue;
                }
                let w = ua * sub * ub.adjoint();
                for (a, &i) in ia.iter().enumerate() {
                    for (b, &j) in ib.iter().enumerate() {
                        out[(i, j)] = w[(a, b)];
                    }
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<Complex<T>> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (idx, u) in &self.blocks {
            for (a, &i) in idx.iter().enumerate() {
                for (b, &j) in idx.iter().enumerate() {
                    out[(i, j)] = u[(a, b)];
                }
            }
        }
        out
    }
}

/// Ascending eigenvalues of a Hermitian tensor matrix, grouped with their
/// multiplicities at tolerance `1e-8`.
pub fn spectrum<T: Real>(m: &TensorMatrix<T>) -> Result<Vec<(T, usize)>> {
    let eig = HermitianEigen::new(m.data(), T::tol(1e-10))?;
    let group_tol = T::from_f64_lossy(1e-8).max(T::default_epsilon() * T::from_f64_lossy(100.0));
    Ok(group_values(&eig.eigenvalues(), group_tol))
}

/// Groups sorted values: a value joins the current group while it lies
/// within `tol` of the group's first member. Groups report their mean.
pub fn group_values<T: Real>(sorted: &[T], tol: T) -> Vec<(T, usize)> {
    let mut out: Vec<(T, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=sorted.len() {
        if k == sorted.len() || sorted[k] - sorted[start] > tol {
            let slice = &sorted[start..k];
            if !slice.is_empty() {
                let sum = slice.iter().fold(T::zero(), |a, &b| a + b);
                out.push((sum / T::from_f64_lossy(slice.len() as f64), slice.len()));
            }
            start = k;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_diagonal_detection() {
        let mut m = DMatrix::<Complex<f64>>::zeros(4, 4);
        m[(0, 2)] = Complex::new(1.0, 0.0);
        m[(2, 0)] = Complex::new(1.0, 0.0);
        m[(1, 1)] = Complex::new(3.0, 0.0);
        let eig = HermitianEigen::new(&m, 1e-12).unwrap();
        assert_eq!(eig.block_count(), 3);
        let v = eig.eigenvalues();
        assert!((v[0] + 1.0).abs() < 1e-14 && v[1].abs() < 1e-14 && (v[2] - 1.0).abs() < 1e-14);
        assert!((v[3] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn function_reconstructs_matrix() {
        let m = DMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                Complex::new(i as f64, 0.0)
            } else if i < j {
                Complex::new(0.3, 0.1 * (i + j) as f64)
            } else {
                Complex::new(0.3, -0.1 * (i + j) as f64)
            }
        });
        let eig = HermitianEigen::new(&m, 1e-12).unwrap();
        let back = eig.function(|e| Complex::new(e, 0.0)).to_dense();
        assert!((back - &m).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn eigenbasis_diagonalizes() {
        let mut m = DMatrix::<Complex<f64>>::zeros(3, 3);
        m[(0, 2)] = Complex::new(0.0, 1.0);
        m[(2, 0)] = Complex::new(0.0, -1.0);
        m[(1, 1)] = Complex::new(2.0, 0.0);
        let eig = HermitianEigen::new(&m, 1e-12).unwrap();
        let (v, e) = eig.eigenbasis();
        let d = v.adjoint().conjugate(&m);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { e[i] } else { 0.0 };
                assert!((d[(i, j)] - Complex::new(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = DMatrix::<Complex<f64>>::identity(2, 2);
        m[(0, 1)] = Complex::new(1e-6, 0.0);
        assert!(matches!(HermitianEigen::new(&m, 1e-10), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn grouping() {
        let g = group_values(&[0.0, 1e-10, 1.0, 1.0, 2.0], 1e-8);
        assert_eq!(g.iter().map(|x| x.1).collect::<Vec<_>>(), vec![2, 2, 1]);
    }
}
