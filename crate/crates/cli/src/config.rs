//! JSON run configuration.

use std::path::{Path, PathBuf};

use nalgebra::DVector;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use semiclassical_core::dynamics::OscillatorParams;
use semiclassical_core::matrep::{build_backend, symmetric_length, BackendKind};
use semiclassical_core::states::WeightSpec;
use semiclassical_core::{Backend64, Expr, Rational};

use crate::error::{CliError, CliResult};
use crate::parse::parse_expr;

pub const DEFAULT_OBSERVABLE: &str = "(1/2)*(P^2 + Q^2)";

/// One rigged-space factor. Grid backends without a `length` use
/// `√(2πħN)`, which makes the position and momentum grids equally fine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendSpec {
    pub kind: BackendKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
}

impl BackendSpec {
    pub fn fock(n: usize) -> Self {
        BackendSpec {
            kind: BackendKind::Fock,
            n,
            length: None,
        }
    }

    pub fn grid(kind: BackendKind, n: usize, length: Option<f64>) -> Self {
        BackendSpec { kind, n, length }
    }

    pub fn build(&self, hbar: f64) -> CliResult<Backend64> {
        let length = match self.kind {
            BackendKind::Fock => None,
            _ => Some(self.length.unwrap_or_else(|| symmetric_length(self.n, hbar))),
        };
        Ok(build_backend(self.kind, self.n, hbar, length)?)
    }
}

/// Complex numbers are written as `[re, im]`.
pub type ComplexPair = [f64; 2];

fn pair(z: ComplexPair) -> Complex<f64> {
    Complex::new(z[0], z[1])
}

/// The lifting weights. `a` and `b` default to the lowest basis vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsConfig {
    pub c_q: ComplexPair,
    pub c_p: ComplexPair,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<ComplexPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<ComplexPair>>,
}

impl Default for WeightsConfig {
    fn default() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        WeightsConfig {
            c_q: [s, 0.0],
            c_p: [s, 0.0],
            a: None,
            b: None,
        }
    }
}

impl WeightsConfig {
    pub fn c_q(&self) -> Complex<f64> {
        pair(self.c_q)
    }

    pub fn c_p(&self) -> Complex<f64> {
        pair(self.c_p)
    }

    /// `a` lives on factor p and `b` on factor q.
    pub fn build(&self, dim_q: usize, dim_p: usize) -> CliResult<WeightSpec> {
        let vector = |v: &Option<Vec<ComplexPair>>, dim: usize| {
            v.as_ref().map_or_else(
                || {
                    let mut e = DVector::zeros(dim);
                    e[0] = Complex::new(1.0, 0.0);
                    e
                },
                |v| DVector::from_iterator(v.len(), v.iter().copied().map(pair)),
            )
        };
        Ok(WeightSpec::new(self.c_q(), self.c_p(), vector(&self.a, dim_p), vector(&self.b, dim_q))?)
    }
}

/// The state in which means are taken.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateConfig {
    /// The `level`-th eigenvector of `hamiltonian(Q, P)` on each factor,
    /// lifted with the configured weights.
    LiftedEigenstate {
        level: usize,
        #[serde(default = "default_observable")]
        hamiltonian: String,
    },
    /// A Gaussian packet in the Fock basis, lifted with the weights.
    Wavepacket {
        q0: f64,
        p0: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<f64>,
    },
    /// Grid point `(q_k, p_l)`; needs a position grid on factor q and a
    /// momentum grid on factor p.
    CmPoint { k: usize, l: usize },
    /// Gaussian phase-space density on the same grids.
    CmGaussian {
        q0: f64,
        p0: f64,
        sigma_q: f64,
        sigma_p: f64,
    },
}

fn default_observable() -> String {
    DEFAULT_OBSERVABLE.to_string()
}

impl Default for StateConfig {
    fn default() -> Self {
        StateConfig::LiftedEigenstate {
            level: 0,
            hamiltonian: default_observable(),
        }
    }
}

/// Which pair of generators stands in for `Q` and `P` in `kernels`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algebra {
    #[default]
    Tilde,
    Qm,
    Cm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub dt: f64,
    pub steps: usize,
    /// Run the oscillator comparison instead of a single-endpoint evolution.
    pub compare: bool,
    pub oscillator: OscillatorParams,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            dt: 1e-2,
            steps: 628,
            compare: false,
            oscillator: OscillatorParams::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub hbar: f64,
    pub h_o: f64,
    pub h_values: Vec<f64>,
    pub backend_q: BackendSpec,
    pub backend_p: BackendSpec,
    pub weights: WeightsConfig,
    pub state: StateConfig,
    pub observable: String,
    pub algebra: Algebra,
    pub seed: u64,
    pub evolve: EvolveConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            hbar: 1.0,
            h_o: 1.0,
            h_values: (0..=10).map(|i| i as f64 / 10.0).collect(),
            backend_q: BackendSpec::fock(16),
            backend_p: BackendSpec::fock(16),
            weights: WeightsConfig::default(),
            state: StateConfig::default(),
            observable: default_observable(),
            algebra: Algebra::default(),
            seed: 0,
            evolve: EvolveConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| config_error(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {}", path.display(), e)))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(config_error(format!("hbar must be positive, got {}", self.hbar)));
        }
        if !(self.h_o > 0.0 && self.h_o.is_finite()) {
            return Err(config_error(format!("h_o must be positive, got {}", self.h_o)));
        }
        if self.h_values.is_empty() {
            return Err(config_error("h_values is empty"));
        }
        if let Some(h) = self.h_values.iter().find(|&&h| !(0.0..=self.h_o).contains(&h)) {
            return Err(config_error(format!("h = {} lies outside [0, {}]", h, self.h_o)));
        }
        self.expr()?;
        if let StateConfig::LiftedEigenstate { hamiltonian, .. } = &self.state {
            parse_expr(hamiltonian)?;
        }
        for spec in [&self.backend_q, &self.backend_p] {
            spec.build(self.hbar)?;
        }
        self.weights.build(self.backend_q.n, self.backend_p.n)?;
        if !(self.evolve.dt > 0.0) || self.evolve.steps == 0 {
            return Err(config_error("evolve needs dt > 0 and steps ≥ 1"));
        }
        Ok(())
    }

    pub fn expr(&self) -> CliResult<Expr> {
        Ok(parse_expr(&self.observable)?)
    }

    /// `λ = 1 − h/h_o`, exactly for the given floats.
    pub fn lambda(&self, h: f64) -> Rational {
        let exact = |x: f64| Rational::from_float(x).expect("finite");
        Rational::from_integer(1.into()) - exact(h) / exact(self.h_o)
    }

    pub fn backends(&self) -> CliResult<(Backend64, Backend64)> {
        Ok((self.backend_q.build(self.hbar)?, self.backend_p.build(self.hbar)?))
    }
}
