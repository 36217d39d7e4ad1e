use super::{require_two_by_two, PayoffObservables, SchemeError, FINAL_TRACE_TOL};
use crate::games::BimatrixGame;
use crate::qlinalg::{trace_product, ComplexMatrix, DensityOperator, StateVector, C64};

/// Strategy labels `P_i ⊗ U_j`, index `2i + j`.
pub const REFINED_LABELS: [&str; 4] = ["P0⊗I", "P0⊗σx", "P1⊗I", "P1⊗σx"];

fn unitary(j: usize) -> ComplexMatrix {
    if j == 0 {
        ComplexMatrix::identity(2)
    } else {
        ComplexMatrix::pauli_x()
    }
}

/// `H = (𝟙⊗𝟙 − |11><11|) ⊗ |00><00| + |11><11| ⊗ |Ψ><Ψ|` on four qubits.
pub fn build_refined_operator(psi: &StateVector) -> Result<ComplexMatrix, SchemeError> {
    super::require_state_dims(psi, &[2, 2])?;
    let p11 = ComplexMatrix::projector(2, 1).tensor(&ComplexMatrix::projector(2, 1));
    let id4 = ComplexMatrix::identity(2).tensor(&ComplexMatrix::identity(2));
    let ket00 = StateVector::basis(vec![2, 2], 0)?.projector();
    let classical = id4.sub(&p11)?.tensor(&ket00);
    let quantum = p11.tensor(&psi.projector());
    Ok(classical.add(&quantum)?)
}

/// Refined scheme for a fixed 2x2 game and initial state.
#[derive(Debug, Clone)]
pub struct RefinedScheme {
    game: BimatrixGame,
    state: StateVector,
    h: ComplexMatrix,
    observables: PayoffObservables,
}

impl RefinedScheme {
    pub fn new(game: BimatrixGame, state: StateVector) -> Result<Self, SchemeError> {
        require_two_by_two(&game, &state)?;
        let h = build_refined_operator(&state)?;
        let observables = PayoffObservables::from_game(&game).with_control_qubits();
        Ok(Self {
            game,
            state,
            h,
            observables,
        })
    }

    pub fn game(&self) -> &BimatrixGame {
        &self.game
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn operator(&self) -> &ComplexMatrix {
        &self.h
    }

    /// Final state for player 1 playing `P_i ⊗ U_j` and player 2 `P_k ⊗ U_l`.
    pub fn final_state(&self, i: usize, j: usize, k: usize, l: usize) -> Result<DensityOperator, SchemeError> {
        for bit in [i, j, k, l] {
            if bit > 1 {
                return Err(SchemeError::BadStrategy { index: bit, len: 2 });
            }
        }
        let local = ComplexMatrix::projector(2, i)
            .tensor(&ComplexMatrix::projector(2, k))
            .tensor(&unitary(j))
            .tensor(&unitary(l));
        let rho = local.conjugate(&self.h)?;
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > FINAL_TRACE_TOL || tr.im.abs() > FINAL_TRACE_TOL {
            return Err(SchemeError::InternalStateError(tr.re));
        }
        Ok(DensityOperator::new(rho.scale(C64::new(1.0 / tr.re, 0.0)))?)
    }

    pub fn payoffs(&self, i: usize, j: usize, k: usize, l: usize) -> Result<(f64, f64), SchemeError> {
        let rho = self.final_state(i, j, k, l)?;
        Ok((
            trace_product(&rho, &self.observables.m1)?,
            trace_product(&rho, &self.observables.m2)?,
        ))
    }

    /// 4x4 output game in `P0⊗𝟙, P0⊗σx, P1⊗𝟙, P1⊗σx` order.
    pub fn payoff_matrix(&self) -> Result<BimatrixGame, SchemeError> {
        let mut table = vec![vec![(0.0, 0.0); 4]; 4];
        for (s1, row) in table.iter_mut().enumerate() {
            for (s2, slot) in row.iter_mut().enumerate() {
                *slot = self.payoffs(s1 / 2, s1 % 2, s2 / 2, s2 % 2)?;
            }
        }
        Ok(BimatrixGame::new(labels(), labels(), table)?)
    }
}

fn labels() -> Vec<String> {
    REFINED_LABELS.iter().map(|s| s.to_string()).collect()
}

/// `(tr(rho_f M_1), tr(rho_f M_2))` for projector bits `i, k` and unitary bits `j, l`.
pub fn refined_payoffs(s: &RefinedScheme, i: usize, j: usize, k: usize, l: usize) -> Result<(f64, f64), SchemeError> {
    s.payoffs(i, j, k, l)
}

/// Closed-form 4x4 output: the classical game tiled, except for the lower-right
/// block `Δ_jl = Σ_xy |ψ_xy|² X_{x⊕j, y⊕l}`.
pub fn refined_matrix_oracle(g: &BimatrixGame, psi: &StateVector) -> Result<BimatrixGame, SchemeError> {
    require_two_by_two(g, psi)?;
    let w = psi.probabilities();
    let delta = |j: usize, l: usize| {
        let mut acc = (0.0, 0.0);
        for x in 0..2 {
            for y in 0..2 {
                let (a, b) = g.payoff(x ^ j, y ^ l);
                acc.0 += w[2 * x + y] * a;
                acc.1 += w[2 * x + y] * b;
            }
        }
        acc
    };
    Ok(BimatrixGame::from_fn(labels(), labels(), |s1, s2| {
        let (i, j, k, l) = (s1 / 2, s1 % 2, s2 / 2, s2 % 2);
        if i == 1 && k == 1 {
            delta(j, l)
        } else {
            g.payoff(j, l)
        }
    })?)
}
