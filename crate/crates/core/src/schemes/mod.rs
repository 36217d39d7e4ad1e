//! Quantum game constructions: the refined four-qubit scheme, the correlated
//! three-strategy scheme, the generic finite-operator scheme and the
//! permutation-matrix scheme.
//!
//! Every scheme has a density-operator path (`tr(rho_f M_i)`); the refined and
//! correlated schemes also have closed-form matrix oracles, and operator sets
//! made of permutation matrices have a basis-relabelling oracle.

mod correlated;
mod mw;
mod operators;
mod refined;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::games::{BimatrixGame, GameError};
use crate::qlinalg::{ComplexMatrix, LinalgError, StateVector};

pub use correlated::{
    build_correlated_operator, correlated_matrix_oracle, correlated_payoffs, CorrelatedScheme, CORRELATED_LABELS,
};
pub use mw::{
    generalized_mw_game, generalized_mw_game_ordered, mw_payoff_matrix, mw_permutation_oracle, mw_single_payoff,
};
pub use operators::{
    cyclic_operators, iqbal_operators, permutation_matrix, permutation_matrix_from, permutation_operators,
    OperatorSet, OperatorSetSpec, MAX_PERMUTATION_DIM, UNITARY_TOL,
};
pub use refined::{build_refined_operator, refined_matrix_oracle, refined_payoffs, RefinedScheme, REFINED_LABELS};

/// Largest tolerated deviation of `tr(rho_f)` from one before renormalizing.
pub const FINAL_TRACE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid operator set: {0}")]
    InvalidOperatorSet(String),
    #[error("factor dimension {dim} exceeds the permutation-set limit of {max}")]
    SizeLimit { dim: usize, max: usize },
    #[error("final state has trace {0}, expected 1")]
    InternalStateError(f64),
    #[error("strategy index {index} out of range ({len} strategies)")]
    BadStrategy { index: usize, len: usize },
    #[error("closed-form evaluation needs permutation-matrix operators ({0})")]
    NotPermutationSet(String),
}

/// Diagonal payoff observables `M_1, M_2` over `|j1 j2>`, lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffObservables {
    pub m1: ComplexMatrix,
    pub m2: ComplexMatrix,
}

impl PayoffObservables {
    pub fn from_game(g: &BimatrixGame) -> Self {
        let (rows, cols) = g.shape();
        let mut a = Vec::with_capacity(rows * cols);
        let mut b = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let (x, y) = g.payoff(r, c);
                a.push(x);
                b.push(y);
            }
        }
        let dims = vec![rows, cols];
        Self {
            m1: ComplexMatrix::diagonal(&a).with_factor_dims(dims.clone()).expect("square"),
            m2: ComplexMatrix::diagonal(&b).with_factor_dims(dims).expect("square"),
        }
    }

    /// `𝟙 ⊗ 𝟙 ⊗ M_i` for schemes with two leading control qubits.
    pub fn with_control_qubits(&self) -> Self {
        let control = ComplexMatrix::identity(2).tensor(&ComplexMatrix::identity(2));
        Self {
            m1: control.tensor(&self.m1),
            m2: control.tensor(&self.m2),
        }
    }
}

pub(crate) fn require_two_by_two(g: &BimatrixGame, psi: &StateVector) -> Result<(), SchemeError> {
    if g.shape() != (2, 2) {
        return Err(SchemeError::DimensionMismatch(format!(
            "scheme needs a 2x2 game, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    require_state_dims(psi, &[2, 2])
}

pub(crate) fn require_state_dims(psi: &StateVector, dims: &[usize]) -> Result<(), SchemeError> {
    if psi.dims() != dims {
        return Err(SchemeError::DimensionMismatch(format!(
            "state has factor dims {:?}, expected {dims:?}",
            psi.dims()
        )));
    }
    Ok(())
}

/// Which construction to apply to an input game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SchemeKind {
    Refined,
    Correlated,
    Mw { ops1: OperatorSetSpec, ops2: OperatorSetSpec },
    Perm,
}

impl SchemeKind {
    /// Factor dimensions the initial state must have for a game of this shape.
    pub fn state_dims(&self, shape: (usize, usize)) -> Vec<usize> {
        match self {
            SchemeKind::Refined | SchemeKind::Correlated => vec![2, 2],
            SchemeKind::Mw { .. } | SchemeKind::Perm => vec![shape.0, shape.1],
        }
    }

    pub fn name(&self) -> String {
        match self {
            SchemeKind::Refined => "refined".into(),
            SchemeKind::Correlated => "correlated".into(),
            SchemeKind::Mw { ops1, ops2 } => format!("mw({ops1} x {ops2})"),
            SchemeKind::Perm => "perm".into(),
        }
    }
}

/// A scheme together with its initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    #[serde(flatten)]
    pub kind: SchemeKind,
    pub state: StateVector,
}

impl SchemeConfig {
    pub fn new(kind: SchemeKind, state: StateVector) -> Self {
        Self { kind, state }
    }

    /// Output game by density-operator evaluation.
    pub fn quantize(&self, g: &BimatrixGame) -> Result<BimatrixGame, SchemeError> {
        match self.kind {
            SchemeKind::Refined => RefinedScheme::new(g.clone(), self.state.clone())?.payoff_matrix(),
            SchemeKind::Correlated => CorrelatedScheme::new(g.clone(), self.state.clone())?.payoff_matrix(),
            SchemeKind::Mw { ops1, ops2 } => {
                mw_payoff_matrix(g, &self.state, &ops1.build(g.rows())?, &ops2.build(g.cols())?)
            }
            SchemeKind::Perm => generalized_mw_game(g, &self.state),
        }
    }

    /// Output game by closed-form evaluation.
    pub fn quantize_oracle(&self, g: &BimatrixGame) -> Result<BimatrixGame, SchemeError> {
        match self.kind {
            SchemeKind::Refined => refined_matrix_oracle(g, &self.state),
            SchemeKind::Correlated => correlated_matrix_oracle(g, &self.state),
            SchemeKind::Mw { ops1, ops2 } => {
                mw_permutation_oracle(g, &self.state, &ops1.build(g.rows())?, &ops2.build(g.cols())?)
            }
            SchemeKind::Perm => {
                operators::check_size_limit(g.rows())?;
                operators::check_size_limit(g.cols())?;
                mw_permutation_oracle(
                    g,
                    &self.state,
                    &OperatorSetSpec::Perm.build(g.rows())?,
                    &OperatorSetSpec::Perm.build(g.cols())?,
                )
            }
        }
    }
}
