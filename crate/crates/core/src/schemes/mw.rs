use rayon::prelude::*;

use super::operators::{check_size_limit, permutation_operators, OperatorSet};
use super::{require_state_dims, PayoffObservables, SchemeError};
use crate::games::BimatrixGame;
use crate::permutation::PermutationOrder;
use crate::qlinalg::{trace_product, ComplexMatrix, DensityOperator, StateVector};

fn check_dims(g: &BimatrixGame, psi: &StateVector, ops1: &OperatorSet, ops2: &OperatorSet) -> Result<(), SchemeError> {
    if ops1.dim() != g.rows() || ops2.dim() != g.cols() {
        return Err(SchemeError::DimensionMismatch(format!(
            "operator sets act on {}x{}, game is {}x{}",
            ops1.dim(),
            ops2.dim(),
            g.rows(),
            g.cols()
        )));
    }
    require_state_dims(psi, &[g.rows(), g.cols()])
}

/// `tr((U₁⊗U₂)|Ψ><Ψ|(U₁⊗U₂)† M_i)` for both players.
pub fn mw_single_payoff(
    rho: &DensityOperator,
    obs: &PayoffObservables,
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
) -> Result<(f64, f64), SchemeError> {
    let local = u1.tensor(u2);
    let fin = DensityOperator::new(local.conjugate(rho.matrix())?)?;
    Ok((trace_product(&fin, &obs.m1)?, trace_product(&fin, &obs.m2)?))
}

/// Output game of the finite-operator scheme by density-operator evaluation.
pub fn mw_payoff_matrix(
    g: &BimatrixGame,
    psi: &StateVector,
    ops1: &OperatorSet,
    ops2: &OperatorSet,
) -> Result<BimatrixGame, SchemeError> {
    check_dims(g, psi, ops1, ops2)?;
    let obs = PayoffObservables::from_game(g);
    let rho = DensityOperator::from_state(psi);
    let n2 = ops2.len();
    let flat: Vec<(f64, f64)> = (0..ops1.len() * n2)
        .into_par_iter()
        .map(|k| mw_single_payoff(&rho, &obs, &ops1.operators()[k / n2], &ops2.operators()[k % n2]))
        .collect::<Result<_, _>>()?;
    let table = flat.chunks(n2).map(<[_]>::to_vec).collect();
    Ok(BimatrixGame::new(ops1.labels().to_vec(), ops2.labels().to_vec(), table)?)
}

/// Closed form for permutation-matrix strategies: each profile moves the weight
/// `|α_{j1 j2}|²` onto the classical outcome `(π₁(j1), π₂(j2))`.
pub fn mw_permutation_oracle(
    g: &BimatrixGame,
    psi: &StateVector,
    ops1: &OperatorSet,
    ops2: &OperatorSet,
) -> Result<BimatrixGame, SchemeError> {
    check_dims(g, psi, ops1, ops2)?;
    let p1 = ops1
        .as_permutations()
        .ok_or_else(|| SchemeError::NotPermutationSet(ops1.name().to_string()))?;
    let p2 = ops2
        .as_permutations()
        .ok_or_else(|| SchemeError::NotPermutationSet(ops2.name().to_string()))?;
    let w = psi.probabilities();
    let cols = g.cols();
    Ok(BimatrixGame::from_fn(ops1.labels().to_vec(), ops2.labels().to_vec(), |s1, s2| {
        let mut acc = (0.0, 0.0);
        for j1 in 0..g.rows() {
            for j2 in 0..cols {
                let (a, b) = g.payoff(p1[s1][j1], p2[s2][j2]);
                acc.0 += w[j1 * cols + j2] * a;
                acc.1 += w[j1 * cols + j2] * b;
            }
        }
        acc
    })?)
}

/// Permutation-matrix scheme: all `rows!` x `cols!` strategy pairs, lexicographic order.
pub fn generalized_mw_game(g: &BimatrixGame, psi: &StateVector) -> Result<BimatrixGame, SchemeError> {
    generalized_mw_game_ordered(g, psi, PermutationOrder::Lexicographic)
}

pub fn generalized_mw_game_ordered(
    g: &BimatrixGame,
    psi: &StateVector,
    order: PermutationOrder,
) -> Result<BimatrixGame, SchemeError> {
    check_size_limit(g.rows())?;
    check_size_limit(g.cols())?;
    let ops1 = permutation_operators(g.rows(), order);
    let ops2 = permutation_operators(g.cols(), order);
    mw_payoff_matrix(g, psi, &ops1, &ops2)
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic_operators, iqbal_operators};
    use super::*;
    use crate::permutation::factorial;
    use rand::{Rng, SeedableRng};

    #[test]
    fn basis_state_identity_sets_give_classical_payoff() {
        let g = BimatrixGame::from_table(vec![vec![(3., -1.), (0., 2.)], vec![(1., 1.), (5., 0.)]]).unwrap();
        let id = OperatorSet::new("id", vec![ComplexMatrix::identity(2)], vec!["I".into()]).unwrap();
        let out = mw_payoff_matrix(&g, &StateVector::basis(vec![2, 2], 0).unwrap(), &id, &id).unwrap();
        assert_eq!(out.shape(), (1, 1));
        assert_eq!(out.payoff(0, 0), (3., -1.));
    }

    #[test]
    fn dimension_mismatch_reported() {
        let g = BimatrixGame::from_table(vec![vec![(0., 0.); 3]; 2]).unwrap();
        let psi = StateVector::basis(vec![2, 3], 0).unwrap();
        let err = mw_payoff_matrix(&g, &psi, &iqbal_operators(), &iqbal_operators()).unwrap_err();
        assert!(matches!(err, SchemeError::DimensionMismatch(_)));
        let psi_bad = StateVector::basis(vec![3, 2], 0).unwrap();
        let err = mw_payoff_matrix(&g, &psi_bad, &OperatorSet::identity_sigma(), &iqbal_operators()).unwrap_err();
        assert!(matches!(err, SchemeError::DimensionMismatch(_)));
    }

    #[test]
    fn size_limit() {
        let g = BimatrixGame::from_table(vec![vec![(0., 0.); 6]; 2]).unwrap();
        let psi = StateVector::basis(vec![2, 6], 0).unwrap();
        assert!(matches!(generalized_mw_game(&g, &psi), Err(SchemeError::SizeLimit { dim: 6, .. })));
    }

    #[test]
    fn oracle_matches_trace_for_random_inputs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for (n, m) in [(2, 2), (2, 3), (3, 3), (3, 2)] {
            let g = BimatrixGame::from_fn(
                (0..n).map(|i| format!("s{i}")).collect(),
                (0..m).map(|i| format!("t{i}")).collect(),
                |_, _| (rng.gen_range(0..10) as f64, rng.gen_range(0..10) as f64),
            )
            .unwrap();
            let psi = StateVector::random(vec![n, m], &mut rng);
            let out = generalized_mw_game(&g, &psi).unwrap();
            assert_eq!(out.shape(), (factorial(n), factorial(m)));
            let ops1 = permutation_operators(n, PermutationOrder::Lexicographic);
            let ops2 = permutation_operators(m, PermutationOrder::Lexicographic);
            let oracle = mw_permutation_oracle(&g, &psi, &ops1, &ops2).unwrap();
            assert!(out.max_payoff_diff(&oracle) < 1e-9);
            if m == 3 {
                let cyc = cyclic_operators(3).unwrap();
                let a = mw_payoff_matrix(&g, &psi, &ops1, &cyc).unwrap();
                let b = mw_permutation_oracle(&g, &psi, &ops1, &cyc).unwrap();
                assert!(a.max_payoff_diff(&b) < 1e-9);
            }
        }
    }

    #[test]
    fn outputs_are_convex_combinations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let g = BimatrixGame::from_fn(
            (0..3).map(|i| format!("s{i}")).collect(),
            (0..2).map(|i| format!("t{i}")).collect(),
            |_, _| (rng.gen_range(0..10) as f64, rng.gen_range(0..10) as f64),
        )
        .unwrap();
        let psi = StateVector::random(vec![3, 2], &mut rng);
        let out = generalized_mw_game(&g, &psi).unwrap();
        let (lo1, hi1, lo2, hi2) = g.profiles().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |acc, p| {
                let (a, b) = g.payoff(p.row, p.col);
                (acc.0.min(a), acc.1.max(a), acc.2.min(b), acc.3.max(b))
            },
        );
        for p in out.profiles() {
            let (a, b) = out.payoff(p.row, p.col);
            assert!(a >= lo1 - 1e-9 && a <= hi1 + 1e-9);
            assert!(b >= lo2 - 1e-9 && b <= hi2 + 1e-9);
        }
    }
}
