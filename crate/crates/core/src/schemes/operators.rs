//! Finite sets of local unitary strategies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SchemeError;
use crate::permutation::{NotABijection, Permutation, PermutationOrder};
use crate::qlinalg::{ComplexMatrix, C64};

/// Unitarity tolerance for operator-set members.
pub const UNITARY_TOL: f64 = 1e-12;

/// Ordered list of same-dimension unitaries with strategy labels.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSet {
    name: String,
    operators: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl OperatorSet {
    pub fn new(name: impl Into<String>, operators: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self, SchemeError> {
        let name = name.into();
        if operators.is_empty() || operators.len() != labels.len() {
            return Err(SchemeError::InvalidOperatorSet(format!(
                "{name}: {} operators, {} labels",
                operators.len(),
                labels.len()
            )));
        }
        let dim = operators[0].rows();
        for (op, label) in operators.iter().zip(&labels) {
            if op.rows() != dim || !op.is_square() {
                return Err(SchemeError::InvalidOperatorSet(format!(
                    "{name}: {label} is {}x{}, expected {dim}x{dim}",
                    op.rows(),
                    op.cols()
                )));
            }
            if !op.is_unitary(UNITARY_TOL) {
                return Err(SchemeError::InvalidOperatorSet(format!("{name}: {label} is not unitary")));
            }
        }
        Ok(Self { name, operators, labels })
    }

    /// `{𝟙, σ_x}` on a qubit.
    pub fn identity_sigma() -> Self {
        Self::new(
            "identity-sigma",
            vec![ComplexMatrix::identity(2), ComplexMatrix::pauli_x()],
            vec!["I".into(), "σx".into()],
        )
        .expect("built-in set is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Basis maps of the members, if every member is a permutation matrix.
    pub fn as_permutations(&self) -> Option<Vec<Vec<usize>>> {
        self.operators.iter().map(ComplexMatrix::as_permutation).collect()
    }
}

/// Qutrit set `{𝟙₃, C, D}`: C swaps |0> and |2>, D swaps |0> and |1>.
pub fn iqbal_operators() -> OperatorSet {
    let c = permutation_matrix(&Permutation::new(vec![2, 1, 0]).expect("valid"));
    let d = permutation_matrix(&Permutation::new(vec![1, 0, 2]).expect("valid"));
    OperatorSet::new(
        "iqbal3",
        vec![ComplexMatrix::identity(3), c, d],
        vec!["I3".into(), "C".into(), "D".into()],
    )
    .expect("built-in set is valid")
}

/// Shift operators `V_k|i> = |i+k mod n>` for `k = 0..n`.
pub fn cyclic_operators(n: usize) -> Result<OperatorSet, SchemeError> {
    if n == 0 {
        return Err(SchemeError::InvalidOperatorSet("cyclic set needs n >= 1".into()));
    }
    let ops = (0..n)
        .map(|k| {
            let shift = Permutation::new((0..n).map(|i| (i + k) % n).collect()).expect("shift is a bijection");
            permutation_matrix(&shift)
        })
        .collect();
    OperatorSet::new(format!("cyclic:{n}"), ops, (0..n).map(|k| format!("V{k}")).collect())
}

/// The 0/1 unitary with `A|i> = |π(i)>`: column `i` holds its 1 in row `π(i)`.
pub fn permutation_matrix(p: &Permutation) -> ComplexMatrix {
    let n = p.len();
    ComplexMatrix::from_fn(n, n, |r, c| {
        if p.apply(c) == r {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
    .with_factor_dims(vec![n])
    .expect("square")
}

/// Same as [`permutation_matrix`] but from raw one-line notation.
pub fn permutation_matrix_from(image: Vec<usize>) -> Result<ComplexMatrix, NotABijection> {
    Ok(permutation_matrix(&Permutation::new(image)?))
}

/// All `n!` permutation matrices, labelled `A_<one-line>`.
pub fn permutation_operators(n: usize, order: PermutationOrder) -> OperatorSet {
    let perms = Permutation::all_in(n, order);
    let labels = perms.iter().map(|p| format!("A_{}", p.one_line())).collect();
    OperatorSet::new(format!("perm:{n}"), perms.iter().map(permutation_matrix).collect(), labels)
        .expect("permutation matrices are unitary")
}

/// Named operator set as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum OperatorSetSpec {
    IdentitySigma,
    Iqbal3,
    Cyclic(usize),
    /// All permutation matrices of the factor dimension.
    Perm,
}

impl OperatorSetSpec {
    /// Materializes the set for a factor of dimension `dim`.
    pub fn build(self, dim: usize) -> Result<OperatorSet, SchemeError> {
        let set = match self {
            OperatorSetSpec::IdentitySigma => OperatorSet::identity_sigma(),
            OperatorSetSpec::Iqbal3 => iqbal_operators(),
            OperatorSetSpec::Cyclic(n) => cyclic_operators(n)?,
            OperatorSetSpec::Perm => {
                check_size_limit(dim)?;
                permutation_operators(dim, PermutationOrder::Lexicographic)
            }
        };
        if set.dim() != dim {
            return Err(SchemeError::DimensionMismatch(format!(
                "operator set {self} acts on dimension {}, the game needs {dim}",
                set.dim()
            )));
        }
        Ok(set)
    }
}

/// Largest factor dimension for which all permutations are materialized.
pub const MAX_PERMUTATION_DIM: usize = 5;

pub(crate) fn check_size_limit(dim: usize) -> Result<(), SchemeError> {
    if dim > MAX_PERMUTATION_DIM {
        return Err(SchemeError::SizeLimit {
            dim,
            max: MAX_PERMUTATION_DIM,
        });
    }
    Ok(())
}

impl fmt::Display for OperatorSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorSetSpec::IdentitySigma => write!(f, "identity-sigma"),
            OperatorSetSpec::Iqbal3 => write!(f, "iqbal3"),
            OperatorSetSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            OperatorSetSpec::Perm => write!(f, "perm"),
        }
    }
}

impl FromStr for OperatorSetSpec {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity-sigma" => Ok(Self::IdentitySigma),
            "iqbal3" => Ok(Self::Iqbal3),
            "perm" => Ok(Self::Perm),
            _ => {
                if let Some(n) = s.strip_prefix("cyclic:") {
                    let n: usize = n
                        .parse()
                        .map_err(|_| SchemeError::InvalidOperatorSet(format!("bad cyclic size in {s:?}")))?;
                    return Ok(Self::Cyclic(n));
                }
                Err(SchemeError::InvalidOperatorSet(format!(
                    "unknown operator set {s:?} (expected identity-sigma, iqbal3, cyclic:<n> or perm)"
                )))
            }
        }
    }
}

impl From<OperatorSetSpec> for String {
    fn from(s: OperatorSetSpec) -> Self {
        s.to_string()
    }
}

impl TryFrom<String> for OperatorSetSpec {
    type Error = SchemeError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn ket(dim: usize, i: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[i] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn iqbal_action_table() {
        let set = iqbal_operators();
        let [_, c, d] = set.operators() else { unreachable!() };
        assert_eq!(c.apply(&ket(3, 0)).unwrap(), ket(3, 2));
        assert_eq!(c.apply(&ket(3, 1)).unwrap(), ket(3, 1));
        assert_eq!(d.apply(&ket(3, 1)).unwrap(), ket(3, 0));
        assert_eq!(d.apply(&ket(3, 2)).unwrap(), ket(3, 2));
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(c.matmul(c).unwrap().max_abs_diff(&i3), 0.0);
        assert_eq!(d.matmul(d).unwrap().max_abs_diff(&i3), 0.0);
    }

    #[test]
    fn cyclic_three_matches_circulants() {
        let set = cyclic_operators(3).unwrap();
        let v1 = ComplexMatrix::from_real(3, 3, &[0., 0., 1., 1., 0., 0., 0., 1., 0.]).unwrap();
        let v2 = ComplexMatrix::from_real(3, 3, &[0., 1., 0., 0., 0., 1., 1., 0., 0.]).unwrap();
        assert_eq!(set.operators()[0].max_abs_diff(&ComplexMatrix::identity(3)), 0.0);
        assert_eq!(set.operators()[1].max_abs_diff(&v1), 0.0);
        assert_eq!(set.operators()[2].max_abs_diff(&v2), 0.0);
        assert!(cyclic_operators(0).is_err());
    }

    #[test]
    fn cyclic_powers() {
        for n in 2..6 {
            let set = cyclic_operators(n).unwrap();
            let mut power = ComplexMatrix::identity(n);
            for k in 0..n {
                assert_eq!(power.max_abs_diff(&set.operators()[k]), 0.0, "n={n} k={k}");
                power = power.matmul(&set.operators()[1]).unwrap();
            }
        }
    }

    #[test]
    fn permutation_matrix_examples() {
        assert_eq!(permutation_matrix(&Permutation::identity(4)).max_abs_diff(&ComplexMatrix::identity(4)), 0.0);
        let a102 = permutation_matrix_from(vec![1, 0, 2]).unwrap();
        assert_eq!(a102, iqbal_operators().operators()[2]);
        assert!(permutation_matrix_from(vec![1, 1, 0]).is_err());
    }

    #[test]
    fn all_builtin_sets_unitary() {
        let sets = [
            OperatorSet::identity_sigma(),
            iqbal_operators(),
            cyclic_operators(4).unwrap(),
            permutation_operators(4, PermutationOrder::Lexicographic),
        ];
        for set in &sets {
            for op in set.operators() {
                assert!(op.is_unitary(UNITARY_TOL));
                let perm = op.as_permutation().expect("permutation matrix");
                assert_eq!(perm.len(), set.dim());
            }
        }
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("cyclic:3".parse::<OperatorSetSpec>().unwrap(), OperatorSetSpec::Cyclic(3));
        assert_eq!("perm".parse::<OperatorSetSpec>().unwrap(), OperatorSetSpec::Perm);
        assert!("pauli".parse::<OperatorSetSpec>().is_err());
        assert!(OperatorSetSpec::Iqbal3.build(2).is_err());
        assert!(matches!(OperatorSetSpec::Perm.build(6), Err(SchemeError::SizeLimit { .. })));
    }

    proptest! {
        #[test]
        fn matrices_compose_like_permutations(seed in any::<u64>(), n in 1usize..6) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = Permutation::random(n, &mut rng);
            let q = Permutation::random(n, &mut rng);
            let lhs = permutation_matrix(&p).matmul(&permutation_matrix(&q)).unwrap();
            prop_assert_eq!(lhs.max_abs_diff(&permutation_matrix(&p.compose(&q))), 0.0);
        }
    }
}
