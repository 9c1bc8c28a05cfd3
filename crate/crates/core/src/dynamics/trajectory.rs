use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Observables recorded at one instant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Record<T: Real = f64> {
    pub t: T,
    pub mean_q: T,
    pub mean_p: T,
    pub mean_energy: T,
    /// Classical mass `Σρ·ΔqΔp`, vector norm² or density trace.
    pub norm_or_trace: T,
}

/// Observable history with strictly increasing times.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Trajectory<T: Real = f64> {
    records: Vec<Record<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn new() -> Self {
        Trajectory { records: Vec::new() }
    }

    pub fn push(&mut self, r: Record<T>) -> Result<()> {
        if let Some(last) = self.records.last() {
            if !(r.t > last.t) {
                return Err(Error::InvalidParameters(format!("time {} does not follow {}", r.t, last.t)));
            }
        }
        self.records.push(r);
        Ok(())
    }

    pub fn records(&self) -> &[Record<T>] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn times(&self) -> Vec<T> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn last(&self) -> Option<&Record<T>> {
        self.records.last()
    }

    /// `max_t |x(t) − x(0)|` for a recorded quantity.
    pub fn max_drift(&self, field: impl Fn(&Record<T>) -> T) -> T {
        let Some(first) = self.records.first() else {
            return T::zero();
        };
        let x0 = field(first);
        self.records.iter().map(|r| (field(r) - x0).abs()).fold(T::zero(), |a, b| a.max(b))
    }
}
