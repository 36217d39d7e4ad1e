//! Marinatto-Weber type quantum game schemes and the strong-isomorphism
//! invariance criterion.
//!
//! * [`qlinalg`]: dense complex matrices, states, density operators, partial trace.
//! * [`games`]: bimatrix games, pure Nash equilibria, player swap.
//! * [`isomorphism`]: game mappings and exhaustive strong-isomorphism search.
//! * [`schemes`]: refined, correlated, finite-operator and permutation schemes.
//! * [`invariance`]: does a scheme map isomorphic inputs to isomorphic outputs?
//! * [`cli`]: the `qgame` command-line front end.

pub mod catalog;
pub mod cli;
pub mod format;
pub mod games;
pub mod invariance;
pub mod isomorphism;
pub mod permutation;
pub mod qlinalg;
pub mod schemes;

pub use games::{find_pure_nash, swap_players, BimatrixGame, PureProfile, PAYOFF_TOL};
pub use isomorphism::{
    apply_mapping, check_lemma1, find_isomorphisms, verify_isomorphism, GameMapping, PlayerMap, StrongIsomorphism,
};
pub use permutation::{Permutation, PermutationOrder};
pub use qlinalg::{ComplexMatrix, DensityOperator, StateVector};
pub use schemes::{SchemeConfig, SchemeKind};
