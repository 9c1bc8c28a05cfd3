//! Operators on the two-dimensional auxiliary factor spanned by `|r_q⟩, |r_p⟩`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::coeff::ScalarCoeff;
use crate::scalar::Exact;

/// Basis label of the auxiliary factor.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RIndex {
    Q,
    P,
}

impl RIndex {
    pub const BOTH: [RIndex; 2] = [RIndex::Q, RIndex::P];

    pub fn index(self) -> usize {
        match self {
            RIndex::Q => 0,
            RIndex::P => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RIndex::Q => "q",
            RIndex::P => "p",
        }
    }
}

/// 2×2 matrix of exact coefficients in the ordered basis `(|r_q⟩, |r_p⟩)`.
#[derive(Clone, PartialEq, Debug)]
pub struct ROperator<R: Exact> {
    entries: [[ScalarCoeff<R>; 2]; 2],
}

impl<R: Exact> ROperator<R> {
    pub fn zero() -> Self {
        ROperator {
            entries: Default::default(),
        }
    }

    /// Matrix unit `|r_i⟩⟨r_j|`.
    pub fn unit(i: RIndex, j: RIndex) -> Self {
        let mut out = Self::zero();
        out.entries[i.index()][j.index()] = ScalarCoeff::one();
        out
    }

    pub fn identity() -> Self {
        &Self::r_q() + &Self::r_p()
    }

    pub fn r_q() -> Self {
        Self::unit(RIndex::Q, RIndex::Q)
    }

    pub fn r_p() -> Self {
        Self::unit(RIndex::P, RIndex::P)
    }

    pub fn entry(&self, i: RIndex, j: RIndex) -> &ScalarCoeff<R> {
        &self.entries[i.index()][j.index()]
    }

    pub fn set(&mut self, i: RIndex, j: RIndex, c: ScalarCoeff<R>) {
        self.entries[i.index()][j.index()] = c;
    }

    pub fn scale(&self, c: &ScalarCoeff<R>) -> Self {
        let mut out = self.clone();
        for row in out.entries.iter_mut() {
            for e in row.iter_mut() {
                *e = &*e * c;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in RIndex::BOTH {
            for j in RIndex::BOTH {
                out.set(i, j, self.entry(j, i).conj());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(ScalarCoeff::is_zero)
    }

    /// Nonzero entries as `(row, col, coefficient)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (RIndex, RIndex, &ScalarCoeff<R>)> {
        RIndex::BOTH.into_iter().flat_map(move |i| {
            RIndex::BOTH
                .into_iter()
                .map(move |j| (i, j, self.entry(i, j)))
                .filter(|(_, _, c)| !c.is_zero())
        })
    }
}

impl<R: Exact> Add<&ROperator<R>> for &ROperator<R> {
    type Output = ROperator<R>;

    fn add(self, rhs: &ROperator<R>) -> ROperator<R> {
        let mut out = ROperator::zero();
        for i in RIndex::BOTH {
            for j in RIndex::BOTH {
                out.set(i, j, self.entry(i, j) + rhs.entry(i, j));
            }
        }
        out
    }
}

impl<R: Exact> Neg for &ROperator<R> {
    type Output = ROperator<R>;

    fn neg(self) -> ROperator<R> {
        self.scale(&-&ScalarCoeff::one())
    }
}

impl<R: Exact> Sub<&ROperator<R>> for &ROperator<R> {
    type Output = ROperator<R>;

    fn sub(self, rhs: &ROperator<R>) -> ROperator<R> {
        self + &(-rhs)
    }
}

impl<R: Exact> Mul<&ROperator<R>> for &ROperator<R> {
    type Output = ROperator<R>;

    fn mul(self, rhs: &ROperator<R>) -> ROperator<R> {
        let mut out = ROperator::zero();
        for i in RIndex::BOTH {
            for j in RIndex::BOTH {
                let mut acc = ScalarCoeff::zero();
                for k in RIndex::BOTH {
                    acc.add_assign_ref(&(self.entry(i, k) * rhs.entry(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

/// Outcome of checking the six defining relations of the projectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectorRelations {
    pub orthogonal: bool,
    pub r_q_idempotent: bool,
    pub r_p_idempotent: bool,
    pub r_q_hermitian: bool,
    pub r_p_hermitian: bool,
    pub resolution_of_identity: bool,
}

impl ProjectorRelations {
    pub fn check<R: Exact>(r_q: &ROperator<R>, r_p: &ROperator<R>) -> Self {
        ProjectorRelations {
            orthogonal: (r_q * r_p).is_zero(),
            r_q_idempotent: &(r_q * r_q) == r_q,
            r_p_idempotent: &(r_p * r_p) == r_p,
            r_q_hermitian: &r_q.adjoint() == r_q,
            r_p_hermitian: &r_p.adjoint() == r_p,
            resolution_of_identity: r_q + r_p == ROperator::identity(),
        }
    }

    pub fn all(&self) -> bool {
        self.orthogonal
            && self.r_q_idempotent
            && self.r_p_idempotent
            && self.r_q_hermitian
            && self.r_p_hermitian
            && self.resolution_of_identity
    }
}
