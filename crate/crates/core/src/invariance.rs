//! Does a scheme send strongly isomorphic inputs to strongly isomorphic outputs?
//!
//! [`check_scheme_invariance`] decides the question for one pair of games by
//! exhaustive search; [`induced_isomorphism`] and [`refined_induced_isomorphism`]
//! build the output isomorphism directly from an input one for the schemes
//! whose strategy sets are closed under relabelling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::games::{find_pure_nash, BimatrixGame};
use crate::isomorphism::{relabel, search_isomorphisms, verify_isomorphism, GameMapping, PlayerMap};
use crate::permutation::Permutation;
use crate::qlinalg::StateVector;
use crate::schemes::{OperatorSetSpec, SchemeConfig, SchemeError, SchemeKind};

/// Output games with a side longer than this are not searched exhaustively.
pub const OUTPUT_SEARCH_MAX_DIM: usize = 6;
/// Isomorphisms kept in a report, per direction.
pub const REPORT_ISOMORPHISM_LIMIT: usize = 16;
/// Random payoffs are drawn from `0..=RANDOM_PAYOFF_MAX`.
pub const RANDOM_PAYOFF_MAX: u32 = 9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvarianceError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("mapping swaps players; reduce to an identity player map first")]
    NonPermutationMapping,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("trial count must be at least 1")]
    NoTrials,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Preserves,
    Violates,
    /// Inputs are not isomorphic, so the criterion says nothing.
    Vacuous,
    UndecidedBySearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputSearch {
    Exhaustive,
    /// Pure-equilibrium counts differ, so no isomorphism can exist.
    FalsifiedByEquilibria,
    SkippedSize,
}

/// The explicit output mapping built from an input isomorphism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedCheck {
    pub mapping: GameMapping,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub scheme: SchemeConfig,
    pub inputs_isomorphic: bool,
    pub input_isomorphisms: Vec<GameMapping>,
    pub outputs_isomorphic: bool,
    pub output_isomorphisms: Vec<GameMapping>,
    pub output_search: OutputSearch,
    pub output_equilibria: [usize; 2],
    pub induced: Option<InducedCheck>,
    pub outputs: [BimatrixGame; 2],
    pub verdict: Verdict,
}

/// Maps `A_π ↦ A_{π*∘π}` and `B_σ ↦ B_{σ*∘σ}` on lexicographically ordered
/// permutation strategies, where `π*`, `σ*` are the strategy relabellings of `f`.
pub fn induced_isomorphism(f: &GameMapping, shape: (usize, usize)) -> Result<GameMapping, InvarianceError> {
    if f.players != PlayerMap::Identity {
        return Err(InvarianceError::NonPermutationMapping);
    }
    if f.source_shape() != shape {
        return Err(InvarianceError::ShapeMismatch(format!(
            "mapping is defined on {:?} games, expected {shape:?}",
            f.source_shape()
        )));
    }
    let lift = |star: &Permutation| {
        let image = Permutation::all(star.len())
            .iter()
            .map(|p| star.compose(p).lex_rank())
            .collect();
        Permutation::new(image).expect("left multiplication permutes the group")
    };
    Ok(GameMapping::new(PlayerMap::Identity, lift(&f.phi1), lift(&f.phi2)))
}

/// Lifts an input isomorphism of 2x2 games to the refined strategies
/// `P_i ⊗ U_j ↦ P_i ⊗ φ̃(U_j)`, keeping the projector component.
pub fn refined_induced_isomorphism(f: &GameMapping) -> Result<GameMapping, InvarianceError> {
    let inner = induced_isomorphism(f, (2, 2))?;
    let lift = |p: &Permutation| {
        Permutation::new((0..4).map(|s| 2 * (s / 2) + p.apply(s % 2)).collect()).expect("bijection on four strategies")
    };
    Ok(GameMapping::new(PlayerMap::Identity, lift(&inner.phi1), lift(&inner.phi2)))
}

/// `A_π ⊗ B_σ ↦ B_σ ⊗ A_π`: swaps players, fixing every permutation strategy.
pub fn player_swap_mapping(output_shape: (usize, usize)) -> GameMapping {
    GameMapping::new(
        PlayerMap::Swap,
        Permutation::identity(output_shape.0),
        Permutation::identity(output_shape.1),
    )
}

fn constructive_mapping(kind: &SchemeKind, f: &GameMapping, shape: (usize, usize)) -> Option<GameMapping> {
    match kind {
        SchemeKind::Perm | SchemeKind::Mw {
            ops1: OperatorSetSpec::Perm,
            ops2: OperatorSetSpec::Perm,
        } => induced_isomorphism(f, shape).ok(),
        SchemeKind::Refined => refined_induced_isomorphism(f).ok(),
        _ => None,
    }
}

/// Quantizes both games with the same initial state and compares the results.
pub fn check_scheme_invariance(
    scheme: &SchemeConfig,
    g: &BimatrixGame,
    g2: &BimatrixGame,
) -> Result<InvarianceReport, InvarianceError> {
    let input_isos = search_isomorphisms(g, g2, Some(REPORT_ISOMORPHISM_LIMIT));
    let inputs_isomorphic = !input_isos.is_empty();

    let out1 = scheme.quantize(g)?;
    let out2 = scheme.quantize(g2)?;
    let ne = [find_pure_nash(&out1).len(), find_pure_nash(&out2).len()];

    let induced = input_isos
        .iter()
        .find(|f| f.mapping().players == PlayerMap::Identity)
        .and_then(|f| constructive_mapping(&scheme.kind, f.mapping(), g.shape()))
        .map(|mapping| {
            let verified = verify_isomorphism(&out1, &out2, &mapping).unwrap_or(false);
            InducedCheck { mapping, verified }
        });

    let same_size = out1.rows() * out1.cols() == out2.rows() * out2.cols();
    let (output_search, output_isos) = if ne[0] != ne[1] || !same_size {
        (OutputSearch::FalsifiedByEquilibria, Vec::new())
    } else if [out1.rows(), out1.cols(), out2.rows(), out2.cols()]
        .iter()
        .any(|&d| d > OUTPUT_SEARCH_MAX_DIM)
    {
        let proven = induced.iter().filter(|c| c.verified).map(|c| c.mapping.clone()).collect();
        (OutputSearch::SkippedSize, proven)
    } else {
        let found = search_isomorphisms(&out1, &out2, Some(REPORT_ISOMORPHISM_LIMIT))
            .into_iter()
            .map(|f| f.into_mapping())
            .collect();
        (OutputSearch::Exhaustive, found)
    };
    let outputs_isomorphic = !output_isos.is_empty();

    let verdict = if !inputs_isomorphic {
        Verdict::Vacuous
    } else if outputs_isomorphic {
        Verdict::Preserves
    } else if output_search == OutputSearch::SkippedSize {
        Verdict::UndecidedBySearch
    } else {
        Verdict::Violates
    };

    Ok(InvarianceReport {
        scheme: scheme.clone(),
        inputs_isomorphic,
        input_isomorphisms: input_isos.into_iter().map(|f| f.into_mapping()).collect(),
        outputs_isomorphic,
        output_isomorphisms: output_isos,
        output_search,
        output_equilibria: ne,
        induced,
        outputs: [out1, out2],
        verdict,
    })
}

/// A replayable witness of a violated (or undecided) trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub scheme: SchemeConfig,
    pub game: BimatrixGame,
    pub game2: BimatrixGame,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub scheme: SchemeKind,
    pub shape: (usize, usize),
    pub trials: usize,
    pub seed: u64,
    pub preserved: usize,
    pub violations: usize,
    pub undecided: usize,
    pub constructive_checked: usize,
    pub constructive_failures: usize,
    pub certificates: Vec<Certificate>,
}

/// Random game with integer payoffs and generic labels.
pub fn random_game(rng: &mut ChaCha8Rng, shape: (usize, usize)) -> BimatrixGame {
    use rand::Rng;
    BimatrixGame::from_fn(
        (0..shape.0).map(|i| format!("s{i}")).collect(),
        (0..shape.1).map(|i| format!("t{i}")).collect(),
        |_, _| {
            (
                rng.gen_range(0..=RANDOM_PAYOFF_MAX) as f64,
                rng.gen_range(0..=RANDOM_PAYOFF_MAX) as f64,
            )
        },
    )
    .expect("non-empty shape")
}

/// Per-trial generator: seed fixes the key, the trial index selects the stream.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

struct TrialOutcome {
    verdict: Verdict,
    induced: Option<bool>,
    certificate: Option<Certificate>,
}

fn run_trial(kind: SchemeKind, shape: (usize, usize), seed: u64, index: usize) -> Result<TrialOutcome, InvarianceError> {
    let mut rng = trial_rng(seed, index);
    let g = random_game(&mut rng, shape);
    let phi1 = Permutation::random(shape.0, &mut rng);
    let phi2 = Permutation::random(shape.1, &mut rng);
    let g2 = relabel(&g, &phi1, &phi2);
    let state = StateVector::random(kind.state_dims(shape), &mut rng);
    let scheme = SchemeConfig::new(kind, state);
    let report = check_scheme_invariance(&scheme, &g, &g2)?;
    let certificate = matches!(report.verdict, Verdict::Violates | Verdict::UndecidedBySearch).then(|| Certificate {
        scheme,
        game: g,
        game2: g2,
        verdict: report.verdict,
    });
    Ok(TrialOutcome {
        verdict: report.verdict,
        induced: report.induced.map(|c| c.verified),
        certificate,
    })
}

/// Runs `trials` random relabelling trials; the summary depends only on the arguments.
pub fn randomized_invariance_trial(
    kind: SchemeKind,
    shape: (usize, usize),
    trials: usize,
    seed: u64,
) -> Result<TrialSummary, InvarianceError> {
    if trials == 0 {
        return Err(InvarianceError::NoTrials);
    }
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(kind, shape, seed, i))
        .collect::<Result<_, _>>()?;
    let count = |v: Verdict| outcomes.iter().filter(|o| o.verdict == v).count();
    Ok(TrialSummary {
        scheme: kind,
        shape,
        trials,
        seed,
        preserved: count(Verdict::Preserves),
        violations: count(Verdict::Violates),
        undecided: count(Verdict::UndecidedBySearch),
        constructive_checked: outcomes.iter().filter(|o| o.induced.is_some()).count(),
        constructive_failures: outcomes.iter().filter(|o| o.induced == Some(false)).count(),
        certificates: outcomes.into_iter().filter_map(|o| o.certificate).collect(),
    })
}
