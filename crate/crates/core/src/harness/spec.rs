use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::report::{Relation, VerificationReport};
use super::verify::{
    random_rows, standard_rows, verify_birula, verify_guanlei, verify_huang, verify_lemma1, verify_theorem1,
    verify_theorem1_extended, verify_theorem2, verify_theorem3, TestState,
};
use crate::entropy::RenyiOrderPair;
use crate::error::{Error, Result};
use crate::lct::{io, GridSpec, GriddedWaveFunction};
use crate::states::{cat_wavefunction, fock_wavefunction, gaussian_wavefunction, GaussianState};
use crate::symplectic::{
    direct_sum, fourier_form, identity, random_symplectic, rotation, symplectic_completion, QuadratureRowSet,
    SymplecticMatrix,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSource {
    Vacuum {
        #[serde(rename = "N")]
        modes: usize,
    },
    /// Vacuum squeezed by `s[k]` on mode `k`.
    Squeezed {
        s: Vec<f64>,
    },
    /// Random pure Gaussian state; `seed` defaults to the experiment seed.
    Correlated {
        #[serde(rename = "N")]
        modes: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Gaussian {
        state: GaussianState,
    },
    Fock {
        occupations: Vec<usize>,
    },
    Cat {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    /// Wavefunction file as written by `lct::io`.
    File {
        path: PathBuf,
    },
}

impl StateSource {
    fn is_gaussian(&self) -> bool {
        matches!(
            self,
            StateSource::Vacuum { .. }
                | StateSource::Squeezed { .. }
                | StateSource::Correlated { .. }
                | StateSource::Gaussian { .. }
        )
    }

    fn modes(&self) -> Option<usize> {
        match self {
            StateSource::Vacuum { modes } | StateSource::Correlated { modes, .. } => Some(*modes),
            StateSource::Squeezed { s } => Some(s.len()),
            StateSource::Gaussian { state } => Some(state.modes()),
            StateSource::Fock { occupations } => Some(occupations.len()),
            StateSource::Cat { .. } => Some(1),
            StateSource::File { .. } => None,
        }
    }
}

/// A measurement: a full symplectic matrix (whose first `n` rows are
/// measured) or a bare isotropic row set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Measurement {
    Identity,
    Fourier,
    /// The same phase-space rotation on every mode.
    Rotation {
        theta: f64,
    },
    /// Seeded random symplectic matrix.
    Random {
        seed: u64,
    },
    Matrix {
        matrix: SymplecticMatrix,
    },
    Rows {
        rows: QuadratureRowSet,
    },
    /// The first `n` rows of a seeded random symplectic matrix.
    RandomRows {
        n: usize,
        seed: u64,
    },
}

impl Measurement {
    fn matrix(&self, modes: usize) -> Result<SymplecticMatrix> {
        Ok(match self {
            Measurement::Identity => identity(modes),
            Measurement::Fourier => fourier_form(modes),
            Measurement::Rotation { theta } => direct_sum(&vec![rotation(*theta); modes]),
            Measurement::Random { seed } => random_symplectic(modes, *seed),
            Measurement::Matrix { matrix } => matrix.clone(),
            Measurement::Rows { rows } => symplectic_completion(rows)?,
            Measurement::RandomRows { n, seed } => symplectic_completion(&random_rows(*n, modes, *seed)?)?,
        })
    }

    fn rows(&self, n: usize, modes: usize) -> Result<QuadratureRowSet> {
        match self {
            Measurement::Rows { rows } => Ok(rows.clone()),
            Measurement::RandomRows { n, seed } => random_rows(*n, modes, *seed),
            other => QuadratureRowSet::top_of(&other.matrix(modes)?, n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    pub points: usize,
    /// Half width: axes span `[-extent, extent]`.
    pub extent: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams { points: 512, extent: 12.0 }
    }
}

impl GridParams {
    pub fn grid(&self, n: usize) -> Result<GridSpec> {
        GridSpec::symmetric(n, self.points, self.extent)
    }
}

/// One verification experiment, as read from JSON or assembled from CLI flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub relation: Relation,
    pub state: StateSource,
    /// Measured quadratures per side; defaults to all modes (1 for huang).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Measurement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Measurement>,
    /// Angles for `guanlei`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    /// Required for `theorem2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<RenyiOrderPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridParams>,
    /// Sample Gaussian states on the grid instead of using closed forms.
    #[serde(default)]
    pub force_grid: bool,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn new(relation: Relation, state: StateSource) -> Self {
        ExperimentSpec {
            relation,
            state,
            n: None,
            a: None,
            b: None,
            theta: None,
            phi: None,
            orders: None,
            grid: None,
            force_grid: false,
            seed: 0,
        }
    }

    /// Checks relation-specific required fields.
    pub fn validate(&self) -> Result<()> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Invalid(format!("relation {} requires {what}", self.relation)))
            }
        };
        match self.relation {
            Relation::Theorem2 => need(self.orders.is_some(), "Renyi orders")?,
            Relation::Guanlei => need(self.theta.is_some() && self.phi.is_some(), "theta and phi")?,
            Relation::Theorem1Extended | Relation::Huang => {
                need(self.a.is_some() && self.b.is_some(), "row sets for A and B")?
            }
            _ => {}
        }
        if self.relation == Relation::Huang && self.n.is_some_and(|n| n != 1) {
            return Err(Error::Invalid("huang measures exactly one quadrature per side".into()));
        }
        Ok(())
    }

    fn wants_grid(&self) -> bool {
        self.force_grid || self.relation == Relation::Lemma1 || !self.state.is_gaussian()
    }

    fn build_state(&self) -> Result<TestState> {
        let gaussian = match &self.state {
            StateSource::Vacuum { modes } => Some(GaussianState::vacuum(*modes)),
            StateSource::Squeezed { s } => Some(GaussianState::squeezed(s)),
            StateSource::Correlated { modes, seed } => {
                Some(GaussianState::correlated_gaussian(*modes, seed.unwrap_or(self.seed)))
            }
            StateSource::Gaussian { state } => Some(state.clone()),
            _ => None,
        };
        if let Some(modes) = self.state.modes() {
            if modes == 0 {
                return Err(Error::Dimension("a state needs at least one mode".into()));
            }
        }
        let grid_params = self.grid.unwrap_or_default();
        match gaussian {
            Some(g) if !self.wants_grid() => Ok(TestState::Gaussian(g)),
            Some(g) => Ok(TestState::Grid(gaussian_wavefunction(&g, &grid_params.grid(g.modes())?)?)),
            None => match &self.state {
                StateSource::Fock { occupations } => {
                    Ok(TestState::Grid(fock_wavefunction(occupations, &grid_params.grid(occupations.len())?)?))
                }
                StateSource::Cat { re, im } => {
                    Ok(TestState::Grid(cat_wavefunction(Complex64::new(*re, *im), &grid_params.grid(1)?)?))
                }
                StateSource::File { path } => Ok(TestState::Grid(io::read(path)?)),
                _ => unreachable!("Gaussian sources handled above"),
            },
        }
    }

    /// The experiment's state sampled on its grid (Gaussian states included).
    pub fn sample_state(&self) -> Result<GriddedWaveFunction> {
        let forced = ExperimentSpec { force_grid: true, ..self.clone() };
        match forced.build_state()? {
            TestState::Grid(w) => Ok(w),
            TestState::Gaussian(_) => unreachable!("forced onto the grid"),
        }
    }

    pub fn run(&self) -> Result<VerificationReport> {
        self.validate()?;
        let state = self.build_state()?;
        let modes = state.modes();
        let a = self.a.clone().unwrap_or(Measurement::Identity);
        let b = self.b.clone().unwrap_or(Measurement::Fourier);
        let full = || -> Result<(SymplecticMatrix, SymplecticMatrix)> { Ok((a.matrix(modes)?, b.matrix(modes)?)) };
        match self.relation {
            Relation::Theorem1 => {
                let (a, b) = full()?;
                verify_theorem1(&state, &a, &b)
            }
            Relation::Birula => verify_birula(&state),
            Relation::Guanlei => verify_guanlei(&state, self.theta.unwrap_or_default(), self.phi.unwrap_or_default()),
            Relation::Theorem2 => {
                let (a, b) = full()?;
                let orders = self.orders.ok_or_else(|| Error::Invalid("theorem2 requires orders".into()))?;
                verify_theorem2(&state, &a, &b, orders)
            }
            Relation::Theorem3 => {
                let (a, b) = full()?;
                verify_theorem3(&state, &a, &b)
            }
            Relation::Lemma1 => {
                let (a, b) = full()?;
                match &state {
                    TestState::Grid(w) => verify_lemma1(w, &a, &b),
                    TestState::Gaussian(_) => unreachable!("lemma1 always runs on the grid"),
                }
            }
            Relation::Theorem1Extended | Relation::Huang => {
                let default_n = if self.relation == Relation::Huang { 1 } else { modes };
                let n = self.n.unwrap_or(default_n);
                let ra = a.rows(n, modes)?;
                let rb = b.rows(n, modes)?;
                if self.relation == Relation::Huang {
                    verify_huang(&state, &ra, &rb)
                } else {
                    verify_theorem1_extended(&state, &ra, &rb)
                }
            }
        }
    }
}

/// Position rows `x_1..x_n` and momentum rows `p_1..p_n`, as measurements.
pub fn position_momentum_rows(n: usize, modes: usize) -> Result<(Measurement, Measurement)> {
    Ok((
        Measurement::Rows { rows: standard_rows(n, modes, false)? },
        Measurement::Rows { rows: standard_rows(n, modes, true)? },
    ))
}
