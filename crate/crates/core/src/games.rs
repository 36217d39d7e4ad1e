//! Two-player strategic-form games.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for payoff comparisons.
pub const PAYOFF_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("game needs at least one strategy per player")]
    Empty,
    #[error("payoff table is {rows}x{cols} but {row_labels} row and {col_labels} column labels were given")]
    LabelCount {
        rows: usize,
        cols: usize,
        row_labels: usize,
        col_labels: usize,
    },
    #[error("payoff row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("duplicate strategy label {0:?}")]
    DuplicateLabel(String),
    #[error("non-finite payoff at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("profile ({row}, {col}) out of range for a {rows}x{cols} game")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// A pure strategy profile: player 1 picks a row, player 2 a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PureProfile {
    pub row: usize,
    pub col: usize,
}

impl PureProfile {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// Bimatrix game with labelled strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GameJson", into = "GameJson")]
pub struct BimatrixGame {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    payoffs: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct GameJson {
    rows: Vec<String>,
    cols: Vec<String>,
    payoffs: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<GameJson> for BimatrixGame {
    type Error = GameError;

    fn try_from(raw: GameJson) -> Result<Self, GameError> {
        let table = raw
            .payoffs
            .into_iter()
            .map(|row| row.into_iter().map(|[a, b]| (a, b)).collect())
            .collect();
        BimatrixGame::new(raw.rows, raw.cols, table)
    }
}

impl From<BimatrixGame> for GameJson {
    fn from(g: BimatrixGame) -> Self {
        let payoffs = (0..g.rows())
            .map(|r| (0..g.cols()).map(|c| {
                let (a, b) = g.payoff(r, c);
                [a, b]
            }).collect())
            .collect();
        GameJson {
            rows: g.row_labels,
            cols: g.col_labels,
            payoffs,
        }
    }
}

impl BimatrixGame {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        table: Vec<Vec<(f64, f64)>>,
    ) -> Result<Self, GameError> {
        let rows = table.len();
        let cols = table.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(GameError::Empty);
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != cols {
                return Err(GameError::Ragged {
                    row: r,
                    len: row.len(),
                    expected: cols,
                });
            }
        }
        if row_labels.len() != rows || col_labels.len() != cols {
            return Err(GameError::LabelCount {
                rows,
                cols,
                row_labels: row_labels.len(),
                col_labels: col_labels.len(),
            });
        }
        for labels in [&row_labels, &col_labels] {
            let mut seen = HashSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Err(GameError::DuplicateLabel(l.clone()));
                }
            }
        }
        let payoffs: Vec<(f64, f64)> = table.into_iter().flatten().collect();
        if let Some(k) = payoffs.iter().position(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(GameError::NonFinite(k / cols, k % cols));
        }
        Ok(Self {
            row_labels,
            col_labels,
            payoffs,
        })
    }

    /// Game with generic labels `s0, s1, ..` and `t0, t1, ..`.
    pub fn from_table(table: Vec<Vec<(f64, f64)>>) -> Result<Self, GameError> {
        let rows = table.len();
        let cols = table.first().map_or(0, Vec::len);
        Self::new(
            (0..rows).map(|i| format!("s{i}")).collect(),
            (0..cols).map(|i| format!("t{i}")).collect(),
            table,
        )
    }

    /// Builds a game by evaluating `f(row, col)` at every profile.
    pub fn from_fn(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        mut f: impl FnMut(usize, usize) -> (f64, f64),
    ) -> Result<Self, GameError> {
        let table = (0..row_labels.len())
            .map(|r| (0..col_labels.len()).map(|c| f(r, c)).collect())
            .collect();
        Self::new(row_labels, col_labels, table)
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    #[inline]
    pub fn payoff(&self, row: usize, col: usize) -> (f64, f64) {
        self.payoffs[row * self.cols() + col]
    }

    pub fn payoff_at(&self, p: PureProfile) -> Result<(f64, f64), GameError> {
        if p.row >= self.rows() || p.col >= self.cols() {
            return Err(GameError::IndexOutOfRange {
                row: p.row,
                col: p.col,
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        Ok(self.payoff(p.row, p.col))
    }

    pub fn profiles(&self) -> impl Iterator<Item = PureProfile> + '_ {
        (0..self.rows()).flat_map(move |r| (0..self.cols()).map(move |c| PureProfile::new(r, c)))
    }

    /// Same payoffs under new labels.
    pub fn relabelled(&self, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self, GameError> {
        Self::from_fn(row_labels, col_labels, |r, c| self.payoff(r, c))
    }

    /// Largest entrywise payoff difference; infinite when shapes differ.
    pub fn max_payoff_diff(&self, other: &BimatrixGame) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.payoffs
            .iter()
            .zip(&other.payoffs)
            .map(|(x, y)| (x.0 - y.0).abs().max((x.1 - y.1).abs()))
            .fold(0.0, f64::max)
    }

    /// Reorders columns: column `k` of the result is column `order[k]` of `self`.
    pub fn select_columns(&self, order: &[usize]) -> Result<Self, GameError> {
        let labels = order.iter().map(|&c| self.col_labels[c].clone()).collect();
        Self::from_fn(self.row_labels.clone(), labels, |r, k| self.payoff(r, order[k]))
    }

    /// Reorders rows: row `k` of the result is row `order[k]` of `self`.
    pub fn select_rows(&self, order: &[usize]) -> Result<Self, GameError> {
        let labels = order.iter().map(|&r| self.row_labels[r].clone()).collect();
        Self::from_fn(labels, self.col_labels.clone(), |k, c| self.payoff(order[k], c))
    }
}

/// All pure Nash equilibria; payoffs within [`PAYOFF_TOL`] of the best reply count as best replies.
pub fn find_pure_nash(g: &BimatrixGame) -> BTreeSet<PureProfile> {
    let col_best: Vec<f64> = (0..g.cols())
        .map(|c| (0..g.rows()).map(|r| g.payoff(r, c).0).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let row_best: Vec<f64> = (0..g.rows())
        .map(|r| (0..g.cols()).map(|c| g.payoff(r, c).1).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    g.profiles()
        .filter(|p| {
            let (a, b) = g.payoff(p.row, p.col);
            a >= col_best[p.col] - PAYOFF_TOL && b >= row_best[p.row] - PAYOFF_TOL
        })
        .collect()
}

/// Player 2 becomes player 1: entry `(c, r)` of the result is `(b_rc, a_rc)`.
pub fn swap_players(g: &BimatrixGame) -> BimatrixGame {
    BimatrixGame::from_fn(g.col_labels.clone(), g.row_labels.clone(), |c, r| {
        let (a, b) = g.payoff(r, c);
        (b, a)
    })
    .expect("transpose of a valid game is valid")
}
