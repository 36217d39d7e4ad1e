use super::{require_two_by_two, PayoffObservables, SchemeError, FINAL_TRACE_TOL};
use crate::games::BimatrixGame;
use crate::qlinalg::{partial_trace, trace_product, ComplexMatrix, DensityOperator, StateVector, C64};

/// Strategy labels of the three-strategy scheme: `P0⊗𝟙, P0⊗σx, P1⊗𝟙`.
pub const CORRELATED_LABELS: [&str; 3] = ["P0⊗I", "P0⊗σx", "P1⊗I"];

/// `(projector bit, unitary bit)` for strategy index `s`.
fn decode(s: usize) -> Result<(usize, usize), SchemeError> {
    match s {
        0 => Ok((0, 0)),
        1 => Ok((0, 1)),
        2 => Ok((1, 0)),
        _ => Err(SchemeError::BadStrategy { index: s, len: 3 }),
    }
}

/// `H' = |00><00|⊗|00><00| + |01><01|⊗|0><0|⊗ρ₂ + |10><10|⊗ρ₁⊗|0><0| + |11><11|⊗|Ψ><Ψ|`
/// with `ρ₁, ρ₂` the reduced operators of `|Ψ><Ψ|` on the first and second qubit.
pub fn build_correlated_operator(psi: &StateVector) -> Result<ComplexMatrix, SchemeError> {
    super::require_state_dims(psi, &[2, 2])?;
    let full = DensityOperator::from_state(psi);
    let rho1 = partial_trace(&full, 0)?;
    let rho2 = partial_trace(&full, 1)?;
    let p = |i| ComplexMatrix::projector(2, i);
    let ket0 = p(0);
    let control = |i, k| p(i).tensor(&p(k));

    let blocks = [
        control(0, 0).tensor(&ket0).tensor(&ket0),
        control(0, 1).tensor(&ket0).tensor(rho2.matrix()),
        control(1, 0).tensor(rho1.matrix()).tensor(&ket0),
        control(1, 1).tensor(&psi.projector()),
    ];
    let mut h = blocks[0].clone();
    for b in &blocks[1..] {
        h = h.add(b)?;
    }
    Ok(h)
}

#[derive(Debug, Clone)]
pub struct CorrelatedScheme {
    game: BimatrixGame,
    state: StateVector,
    h: ComplexMatrix,
    observables: PayoffObservables,
}

impl CorrelatedScheme {
    pub fn new(game: BimatrixGame, state: StateVector) -> Result<Self, SchemeError> {
        require_two_by_two(&game, &state)?;
        let h = build_correlated_operator(&state)?;
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

    pub fn final_state(&self, s1: usize, s2: usize) -> Result<DensityOperator, SchemeError> {
        let (i, j) = decode(s1)?;
        let (k, l) = decode(s2)?;
        let u = |bit| {
            if bit == 0 {
                ComplexMatrix::identity(2)
            } else {
                ComplexMatrix::pauli_x()
            }
        };
        let local = ComplexMatrix::projector(2, i)
            .tensor(&ComplexMatrix::projector(2, k))
            .tensor(&u(j))
            .tensor(&u(l));
        let rho = local.conjugate(&self.h)?;
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > FINAL_TRACE_TOL || tr.im.abs() > FINAL_TRACE_TOL {
            return Err(SchemeError::InternalStateError(tr.re));
        }
        Ok(DensityOperator::new(rho.scale(C64::new(1.0 / tr.re, 0.0)))?)
    }

    pub fn payoffs(&self, s1: usize, s2: usize) -> Result<(f64, f64), SchemeError> {
        let rho = self.final_state(s1, s2)?;
        Ok((
            trace_product(&rho, &self.observables.m1)?,
            trace_product(&rho, &self.observables.m2)?,
        ))
    }

    pub fn payoff_matrix(&self) -> Result<BimatrixGame, SchemeError> {
        let mut table = vec![vec![(0.0, 0.0); 3]; 3];
        for (s1, row) in table.iter_mut().enumerate() {
            for (s2, slot) in row.iter_mut().enumerate() {
                *slot = self.payoffs(s1, s2)?;
            }
        }
        Ok(BimatrixGame::new(labels(), labels(), table)?)
    }
}

fn labels() -> Vec<String> {
    CORRELATED_LABELS.iter().map(|s| s.to_string()).collect()
}

pub fn correlated_payoffs(g: &BimatrixGame, psi: &StateVector, s1: usize, s2: usize) -> Result<(f64, f64), SchemeError> {
    CorrelatedScheme::new(g.clone(), psi.clone())?.payoffs(s1, s2)
}

/// Closed-form 3x3 output game.
pub fn correlated_matrix_oracle(g: &BimatrixGame, psi: &StateVector) -> Result<BimatrixGame, SchemeError> {
    require_two_by_two(g, psi)?;
    let w = psi.probabilities();
    let (alpha, beta, gamma, delta) = (w[0], w[1], w[2], w[3]);
    let x = |i: usize, j: usize| g.payoff(i, j);
    let mix = |terms: &[(f64, (f64, f64))]| {
        terms
            .iter()
            .fold((0.0, 0.0), |acc, (wt, (a, b))| (acc.0 + wt * a, acc.1 + wt * b))
    };
    // Player 2 alone on the quantum block sees ρ₂; player 1 alone sees ρ₁.
    let d02 = mix(&[(alpha + gamma, x(0, 0)), (beta + delta, x(0, 1))]);
    let d12 = mix(&[(alpha + gamma, x(1, 0)), (beta + delta, x(1, 1))]);
    let d20 = mix(&[(alpha + beta, x(0, 0)), (gamma + delta, x(1, 0))]);
    let d21 = mix(&[(alpha + beta, x(0, 1)), (gamma + delta, x(1, 1))]);
    let d22 = mix(&[(alpha, x(0, 0)), (beta, x(0, 1)), (gamma, x(1, 0)), (delta, x(1, 1))]);
    let table = vec![
        vec![x(0, 0), x(0, 1), d02],
        vec![x(1, 0), x(1, 1), d12],
        vec![d20, d21, d22],
    ];
    Ok(BimatrixGame::new(labels(), labels(), table)?)
}
