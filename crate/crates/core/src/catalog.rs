//! Named games and initial states used by the demo report and the tests.

use crate::games::BimatrixGame;
use crate::qlinalg::{StateVector, C64};

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn game(rows: &[&str], cols: &[&str], table: Vec<Vec<(f64, f64)>>) -> BimatrixGame {
    BimatrixGame::new(labels(rows), labels(cols), table).expect("catalog game is valid")
}

/// Chicken with strategies `t, b` / `l, r`.
pub fn chicken() -> BimatrixGame {
    game(
        &["t", "b"],
        &["l", "r"],
        vec![vec![(6., 6.), (2., 7.)], vec![(7., 2.), (0., 0.)]],
    )
}

/// Chicken with player 2's columns listed in the opposite order.
pub fn chicken_relabelled() -> BimatrixGame {
    game(
        &["t'", "b'"],
        &["l'", "r'"],
        vec![vec![(2., 7.), (6., 6.)], vec![(0., 0.), (7., 2.)]],
    )
}

/// `(|00> + |01> + |10>)/√3`
pub fn three_term_state() -> StateVector {
    StateVector::uniform(vec![2, 2], &[0, 1, 2]).expect("valid state")
}

/// A 2x3 game whose first two columns are swapped in [`two_by_three_relabelled`].
pub fn two_by_three() -> BimatrixGame {
    game(
        &["t", "b"],
        &["l", "m", "r"],
        vec![
            vec![(4., 8.), (0., 0.), (8., 8.)],
            vec![(0., 4.), (4., 0.), (8., 0.)],
        ],
    )
}

pub fn two_by_three_relabelled() -> BimatrixGame {
    game(
        &["t'", "b'"],
        &["l'", "m'", "r'"],
        vec![
            vec![(0., 0.), (4., 8.), (8., 8.)],
            vec![(4., 0.), (0., 4.), (8., 0.)],
        ],
    )
}

/// `(1/2)|00> + (√3/2)|12>` on a qubit and a qutrit.
pub fn qubit_qutrit_state() -> StateVector {
    let mut amps = vec![C64::new(0.0, 0.0); 6];
    amps[0] = C64::new(0.5, 0.0);
    amps[5] = C64::new(3f64.sqrt() / 2.0, 0.0);
    StateVector::normalized(vec![2, 3], amps).expect("valid state")
}

/// Battle-of-the-sexes style game, not isomorphic to [`coordination_game`].
pub fn battle_game() -> BimatrixGame {
    game(
        &["t", "b"],
        &["l", "r"],
        vec![vec![(3., 1.), (0., 0.)], vec![(0., 0.), (1., 3.)]],
    )
}

pub fn coordination_game() -> BimatrixGame {
    game(
        &["t'", "b'"],
        &["l'", "r"],
        vec![vec![(4., 0.), (0., 0.)], vec![(0., 0.), (0., 4.)]],
    )
}

/// `(|00> + |11>)/√2`
pub fn bell_state() -> StateVector {
    StateVector::uniform(vec![2, 2], &[0, 3]).expect("valid state")
}
