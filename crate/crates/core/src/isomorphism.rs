//! Game mappings and strong isomorphisms between bimatrix games.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::games::{find_pure_nash, swap_players, BimatrixGame, PureProfile, PAYOFF_TOL};
use crate::permutation::Permutation;

/// Fingerprint grid used to prune the search before exact comparison.
const FINGERPRINT_GRID: f64 = 1e6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("mapping is not a strong isomorphism")]
    NotIsomorphic,
}

/// The player bijection of a two-player game mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlayerMap {
    Identity,
    Swap,
}

impl PlayerMap {
    pub fn then(self, next: PlayerMap) -> PlayerMap {
        if self == next {
            PlayerMap::Identity
        } else {
            PlayerMap::Swap
        }
    }
}

/// `(η, φ₁, φ₂)`: `φ₁` sends player 1's strategies of the source game to the
/// strategies of player `η(1)` in the target game, `φ₂` likewise for player 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GameMapping {
    pub players: PlayerMap,
    pub phi1: Permutation,
    pub phi2: Permutation,
}

impl GameMapping {
    pub fn new(players: PlayerMap, phi1: Permutation, phi2: Permutation) -> Self {
        Self { players, phi1, phi2 }
    }

    pub fn identity(rows: usize, cols: usize) -> Self {
        Self::new(PlayerMap::Identity, Permutation::identity(rows), Permutation::identity(cols))
    }

    /// Source shape the mapping is defined on.
    pub fn source_shape(&self) -> (usize, usize) {
        (self.phi1.len(), self.phi2.len())
    }

    /// Shape of the game the mapping lands in.
    pub fn target_shape(&self) -> (usize, usize) {
        match self.players {
            PlayerMap::Identity => (self.phi1.len(), self.phi2.len()),
            PlayerMap::Swap => (self.phi2.len(), self.phi1.len()),
        }
    }

    pub fn inverse(&self) -> GameMapping {
        match self.players {
            PlayerMap::Identity => Self::new(PlayerMap::Identity, self.phi1.inverse(), self.phi2.inverse()),
            PlayerMap::Swap => Self::new(PlayerMap::Swap, self.phi2.inverse(), self.phi1.inverse()),
        }
    }

    /// `next ∘ self`: apply `self` first.
    pub fn then(&self, next: &GameMapping) -> GameMapping {
        let (after1, after2) = match self.players {
            PlayerMap::Identity => (&next.phi1, &next.phi2),
            PlayerMap::Swap => (&next.phi2, &next.phi1),
        };
        Self::new(
            self.players.then(next.players),
            after1.compose(&self.phi1),
            after2.compose(&self.phi2),
        )
    }

    fn apply_unchecked(&self, p: PureProfile) -> PureProfile {
        let s1 = self.phi1.apply(p.row);
        let s2 = self.phi2.apply(p.col);
        match self.players {
            PlayerMap::Identity => PureProfile::new(s1, s2),
            PlayerMap::Swap => PureProfile::new(s2, s1),
        }
    }
}

impl fmt::Display for GameMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eta = match self.players {
            PlayerMap::Identity => "id",
            PlayerMap::Swap => "(1 2)",
        };
        write!(f, "eta={eta} phi1={} phi2={}", self.phi1, self.phi2)
    }
}

/// A game mapping already checked to preserve payoffs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrongIsomorphism {
    mapping: GameMapping,
}

impl StrongIsomorphism {
    pub fn new(g: &BimatrixGame, g2: &BimatrixGame, mapping: GameMapping) -> Result<Self, IsoError> {
        if verify_isomorphism(g, g2, &mapping)? {
            Ok(Self { mapping })
        } else {
            Err(IsoError::NotIsomorphic)
        }
    }

    pub fn mapping(&self) -> &GameMapping {
        &self.mapping
    }

    pub fn into_mapping(self) -> GameMapping {
        self.mapping
    }
}

/// Image of a profile: component `η(i)` of the result is `φ_i(s_i)`.
pub fn apply_mapping(f: &GameMapping, p: PureProfile) -> Result<PureProfile, IsoError> {
    let (rows, cols) = f.source_shape();
    if p.row >= rows || p.col >= cols {
        return Err(IsoError::ShapeMismatch(format!(
            "profile ({}, {}) outside the {rows}x{cols} source of the mapping",
            p.row, p.col
        )));
    }
    Ok(f.apply_unchecked(p))
}

fn check_shapes(g: &BimatrixGame, g2: &BimatrixGame, f: &GameMapping) -> Result<(), IsoError> {
    if g.shape() != f.source_shape() || g2.shape() != f.target_shape() {
        return Err(IsoError::ShapeMismatch(format!(
            "mapping {:?} -> {:?} used between {:?} and {:?} games",
            f.source_shape(),
            f.target_shape(),
            g.shape(),
            g2.shape()
        )));
    }
    Ok(())
}

/// True iff `u_i(s) = u'_{η(i)}(f(s))` at every profile, within [`PAYOFF_TOL`].
pub fn verify_isomorphism(g: &BimatrixGame, g2: &BimatrixGame, f: &GameMapping) -> Result<bool, IsoError> {
    check_shapes(g, g2, f)?;
    Ok(g.profiles().all(|p| {
        let (a, b) = g.payoff(p.row, p.col);
        let q = f.apply_unchecked(p);
        let (a2, b2) = g2.payoff(q.row, q.col);
        let (mine1, mine2) = match f.players {
            PlayerMap::Identity => (a2, b2),
            PlayerMap::Swap => (b2, a2),
        };
        (a - mine1).abs() <= PAYOFF_TOL && (b - mine2).abs() <= PAYOFF_TOL
    }))
}

/// Every strong isomorphism from `g` to `g2`, identity player map first, then
/// lexicographic in `φ₁` and `φ₂`.
pub fn find_isomorphisms(g: &BimatrixGame, g2: &BimatrixGame) -> Vec<StrongIsomorphism> {
    search_isomorphisms(g, g2, None)
}

/// First strong isomorphism in search order, if any.
pub fn first_isomorphism(g: &BimatrixGame, g2: &BimatrixGame) -> Option<StrongIsomorphism> {
    search_isomorphisms(g, g2, Some(1)).into_iter().next()
}

/// Like [`find_isomorphisms`] but stops after `limit` hits.
pub fn search_isomorphisms(g: &BimatrixGame, g2: &BimatrixGame, limit: Option<usize>) -> Vec<StrongIsomorphism> {
    let mut out = Vec::new();
    let limit = limit.unwrap_or(usize::MAX);
    if limit == 0 {
        return out;
    }
    if g.shape() == g2.shape() {
        search_identity_player(g, g2, PlayerMap::Identity, limit, &mut out);
    }
    if out.len() < limit && g.rows() == g2.cols() && g.cols() == g2.rows() {
        // A player-swapping isomorphism into g2 is an identity-player one into swap(g2).
        let swapped = swap_players(g2);
        search_identity_player(g, &swapped, PlayerMap::Swap, limit, &mut out);
    }
    out
}

type Key = (i64, i64);

fn quantize(p: (f64, f64)) -> Key {
    ((p.0 * FINGERPRINT_GRID).round() as i64, (p.1 * FINGERPRINT_GRID).round() as i64)
}

fn row_fingerprints(g: &BimatrixGame) -> Vec<Vec<Key>> {
    (0..g.rows())
        .map(|r| {
            let mut v: Vec<Key> = (0..g.cols()).map(|c| quantize(g.payoff(r, c))).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

fn col_fingerprints(g: &BimatrixGame) -> Vec<Vec<Key>> {
    (0..g.cols())
        .map(|c| {
            let mut v: Vec<Key> = (0..g.rows()).map(|r| quantize(g.payoff(r, c))).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

fn close(x: (f64, f64), y: (f64, f64)) -> bool {
    (x.0 - y.0).abs() <= PAYOFF_TOL && (x.1 - y.1).abs() <= PAYOFF_TOL
}

struct Search<'a> {
    g: &'a BimatrixGame,
    h: &'a BimatrixGame,
    players: PlayerMap,
    limit: usize,
    row_ok: Vec<Vec<usize>>,
    col_ok: Vec<Vec<usize>>,
}

fn search_identity_player(
    g: &BimatrixGame,
    h: &BimatrixGame,
    players: PlayerMap,
    limit: usize,
    out: &mut Vec<StrongIsomorphism>,
) {
    let (gr, hr) = (row_fingerprints(g), row_fingerprints(h));
    let (gc, hc) = (col_fingerprints(g), col_fingerprints(h));
    let row_ok = gr
        .iter()
        .map(|f| (0..h.rows()).filter(|&t| &hr[t] == f).collect())
        .collect();
    let col_ok = gc
        .iter()
        .map(|f| (0..h.cols()).filter(|&t| &hc[t] == f).collect())
        .collect();
    let s = Search {
        g,
        h,
        players,
        limit,
        row_ok,
        col_ok,
    };
    let mut phi1 = Vec::with_capacity(g.rows());
    let mut used = vec![false; h.rows()];
    s.assign_rows(&mut phi1, &mut used, out);
}

impl Search<'_> {
    fn assign_rows(&self, phi1: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<StrongIsomorphism>) {
        if out.len() >= self.limit {
            return;
        }
        let r = phi1.len();
        if r == self.g.rows() {
            self.assign_cols_for(phi1, out);
            return;
        }
        for &t in &self.row_ok[r] {
            if used[t] {
                continue;
            }
            used[t] = true;
            phi1.push(t);
            self.assign_rows(phi1, used, out);
            phi1.pop();
            used[t] = false;
            if out.len() >= self.limit {
                return;
            }
        }
    }

    fn assign_cols_for(&self, phi1: &[usize], out: &mut Vec<StrongIsomorphism>) {
        // Exact candidate columns given the row bijection.
        let candidates: Vec<Vec<usize>> = (0..self.g.cols())
            .map(|c| {
                self.col_ok[c]
                    .iter()
                    .copied()
                    .filter(|&t| (0..self.g.rows()).all(|r| close(self.g.payoff(r, c), self.h.payoff(phi1[r], t))))
                    .collect()
            })
            .collect();
        if candidates.iter().any(Vec::is_empty) {
            return;
        }
        let mut phi2 = Vec::with_capacity(self.g.cols());
        let mut used = vec![false; self.h.cols()];
        self.assign_cols(phi1, &candidates, &mut phi2, &mut used, out);
    }

    fn assign_cols(
        &self,
        phi1: &[usize],
        candidates: &[Vec<usize>],
        phi2: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<StrongIsomorphism>,
    ) {
        if out.len() >= self.limit {
            return;
        }
        let c = phi2.len();
        if c == candidates.len() {
            let mapping = GameMapping::new(
                self.players,
                Permutation::new(phi1.to_vec()).expect("row assignment is injective"),
                Permutation::new(phi2.clone()).expect("column assignment is injective"),
            );
            out.push(StrongIsomorphism { mapping });
            return;
        }
        for &t in &candidates[c] {
            if used[t] {
                continue;
            }
            used[t] = true;
            phi2.push(t);
            self.assign_cols(phi1, candidates, phi2, used, out);
            phi2.pop();
            used[t] = false;
        }
    }
}

/// Size of the automorphism group of `g`.
pub fn automorphism_count(g: &BimatrixGame) -> usize {
    find_isomorphisms(g, g).len()
}

/// Image of `g`'s pure equilibria under `f` equals the equilibria of `g2`.
pub fn check_lemma1(g: &BimatrixGame, g2: &BimatrixGame, f: &StrongIsomorphism) -> bool {
    if check_shapes(g, g2, f.mapping()).is_err() {
        return false;
    }
    let image: BTreeSet<PureProfile> = find_pure_nash(g)
        .into_iter()
        .map(|p| f.mapping().apply_unchecked(p))
        .collect();
    image == find_pure_nash(g2)
}

/// Relabels `g` by the identity-player mapping `(φ₁, φ₂)`: the result `h`
/// satisfies `h(φ₁(r), φ₂(c)) = g(r, c)`, so `(id, φ₁, φ₂)` is an isomorphism `g -> h`.
pub fn relabel(g: &BimatrixGame, phi1: &Permutation, phi2: &Permutation) -> BimatrixGame {
    let (inv1, inv2) = (phi1.inverse(), phi2.inverse());
    let rows = (0..g.rows()).map(|r| g.row_labels()[inv1.apply(r)].clone()).collect();
    let cols = (0..g.cols()).map(|c| g.col_labels()[inv2.apply(c)].clone()).collect();
    BimatrixGame::from_fn(rows, cols, |r, c| g.payoff(inv1.apply(r), inv2.apply(c)))
        .expect("relabelling preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn chicken1() -> BimatrixGame {
        BimatrixGame::new(
            labels(&["t", "b"]),
            labels(&["l", "r"]),
            vec![vec![(6., 6.), (2., 7.)], vec![(7., 2.), (0., 0.)]],
        )
        .unwrap()
    }

    fn chicken2() -> BimatrixGame {
        BimatrixGame::new(
            labels(&["t'", "b'"]),
            labels(&["l'", "r'"]),
            vec![vec![(2., 7.), (6., 6.)], vec![(0., 0.), (7., 2.)]],
        )
        .unwrap()
    }

    fn chicken_f() -> GameMapping {
        GameMapping::new(
            PlayerMap::Identity,
            Permutation::identity(2),
            Permutation::new(vec![1, 0]).unwrap(),
        )
    }

    #[test]
    fn apply_examples() {
        let p = PureProfile::new(1, 0);
        assert_eq!(apply_mapping(&GameMapping::identity(2, 2), p).unwrap(), p);
        assert_eq!(apply_mapping(&chicken_f(), PureProfile::new(0, 0)).unwrap(), PureProfile::new(0, 1));
        let swap = GameMapping::new(PlayerMap::Swap, Permutation::identity(2), Permutation::identity(3));
        assert_eq!(apply_mapping(&swap, PureProfile::new(1, 2)).unwrap(), PureProfile::new(2, 1));
        assert!(matches!(
            apply_mapping(&swap, PureProfile::new(2, 0)),
            Err(IsoError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn verify_chicken() {
        assert!(verify_isomorphism(&chicken1(), &chicken2(), &chicken_f()).unwrap());
        assert!(!verify_isomorphism(&chicken1(), &chicken2(), &GameMapping::identity(2, 2)).unwrap());
        assert!(verify_isomorphism(&chicken1(), &chicken1(), &GameMapping::identity(2, 2)).unwrap());
        let wrong = GameMapping::identity(3, 2);
        assert!(verify_isomorphism(&chicken1(), &chicken2(), &wrong).is_err());
    }

    #[test]
    fn search_chicken() {
        let found = find_isomorphisms(&chicken1(), &chicken2());
        assert!(found.iter().any(|f| f.mapping() == &chicken_f()));
        for f in &found {
            assert!(check_lemma1(&chicken1(), &chicken2(), f));
        }
        let autos = find_isomorphisms(&chicken1(), &chicken1());
        assert_eq!(autos[0].mapping(), &GameMapping::identity(2, 2));
        // Chicken is symmetric, so transposing players is also an automorphism.
        assert_eq!(automorphism_count(&chicken1()), 2);
    }

    #[test]
    fn chicken_equilibria_map_across() {
        let f = StrongIsomorphism::new(&chicken1(), &chicken2(), chicken_f()).unwrap();
        let image: BTreeSet<_> = find_pure_nash(&chicken1())
            .into_iter()
            .map(|p| apply_mapping(f.mapping(), p).unwrap())
            .collect();
        let expected: BTreeSet<_> = [PureProfile::new(0, 0), PureProfile::new(1, 1)].into();
        assert_eq!(image, expected);
        assert!(check_lemma1(&chicken1(), &chicken2(), &f));
    }

    #[test]
    fn non_isomorphic_pair() {
        let g1 = BimatrixGame::from_table(vec![vec![(3., 1.), (0., 0.)], vec![(0., 0.), (1., 3.)]]).unwrap();
        let g2 = BimatrixGame::from_table(vec![vec![(4., 0.), (0., 0.)], vec![(0., 0.), (0., 4.)]]).unwrap();
        assert!(find_isomorphisms(&g1, &g2).is_empty());
    }

    #[test]
    fn limit_is_respected() {
        let flat = BimatrixGame::from_table(vec![vec![(1., 1.); 3]; 3]).unwrap();
        assert_eq!(find_isomorphisms(&flat, &flat).len(), 2 * 36);
        assert_eq!(search_isomorphisms(&flat, &flat, Some(5)).len(), 5);
    }

    fn brute_force(g: &BimatrixGame, g2: &BimatrixGame) -> Vec<GameMapping> {
        let mut out = Vec::new();
        for players in [PlayerMap::Identity, PlayerMap::Swap] {
            for p1 in Permutation::all(g.rows()) {
                for p2 in Permutation::all(g.cols()) {
                    let f = GameMapping::new(players, p1.clone(), p2);
                    if verify_isomorphism(g, g2, &f).unwrap_or(false) {
                        out.push(f);
                    }
                }
            }
        }
        out
    }

    fn small_game(seed: u64, n: usize, m: usize, range: i32) -> BimatrixGame {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        BimatrixGame::from_fn(
            (0..n).map(|i| format!("s{i}")).collect(),
            (0..m).map(|i| format!("t{i}")).collect(),
            |_, _| (rng.gen_range(0..range) as f64, rng.gen_range(0..range) as f64),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn pruned_search_matches_brute_force(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, range in 1i32..4) {
            let g = small_game(seed, n, m, range);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
            let mut h = relabel(&g, &Permutation::random(n, &mut rng), &Permutation::random(m, &mut rng));
            if n == m && seed % 2 == 0 {
                h = swap_players(&h);
            }
            let fast: Vec<GameMapping> = find_isomorphisms(&g, &h).into_iter().map(StrongIsomorphism::into_mapping).collect();
            prop_assert_eq!(fast, brute_force(&g, &h));
        }

        #[test]
        fn inverse_and_composition(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
            let g = small_game(seed, n, m, 10);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(7));
            let f = GameMapping::new(PlayerMap::Identity, Permutation::random(n, &mut rng), Permutation::random(m, &mut rng));
            let g2 = relabel(&g, &f.phi1, &f.phi2);
            let g3 = swap_players(&g2);
            let h = GameMapping::new(PlayerMap::Swap, Permutation::identity(n), Permutation::identity(m));
            prop_assert!(verify_isomorphism(&g, &g2, &f).unwrap());
            prop_assert!(verify_isomorphism(&g2, &g, &f.inverse()).unwrap());
            prop_assert!(verify_isomorphism(&g2, &g3, &h).unwrap());
            prop_assert!(verify_isomorphism(&g3, &g2, &h.inverse()).unwrap());
            let fh = f.then(&h);
            prop_assert!(verify_isomorphism(&g, &g3, &fh).unwrap());
            prop_assert!(verify_isomorphism(&g3, &g, &fh.inverse()).unwrap());
        }

        #[test]
        fn equilibrium_image_holds_for_every_found_isomorphism(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
            let g = small_game(seed, n, m, 4);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(3));
            let h = relabel(&g, &Permutation::random(n, &mut rng), &Permutation::random(m, &mut rng));
            let found = find_isomorphisms(&g, &h);
            prop_assert!(!found.is_empty());
            for f in &found {
                prop_assert!(check_lemma1(&g, &h, f));
            }
            prop_assert!(find_isomorphisms(&g, &g).iter().any(|f| f.mapping() == &GameMapping::identity(n, m)));
        }
    }
}
