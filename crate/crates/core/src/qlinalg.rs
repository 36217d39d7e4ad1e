//! Dense complex linear algebra for few-qudit operators.
//!
//! Matrices carry an optional list of tensor-factor dimensions so that a
//! factor placed in the wrong slot of a Kronecker product shows up as a
//! dimension error instead of a silently wrong payoff.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;

/// Allowed deviation of a state's squared norm from one.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity and unit-trace tolerance for density operators.
pub const DENSITY_TOL: f64 = 1e-12;
/// Lowest admissible probe expectation `<v|rho|v>`.
pub const POSITIVITY_FLOOR: f64 = -1e-10;
/// Largest imaginary residue accepted from `tr(rho m)`.
pub const REAL_RESIDUE_TOL: f64 = 1e-9;
/// Number of random unit vectors used to probe positivity.
pub const POSITIVITY_PROBES: usize = 20;

const PROBE_SEED: u64 = 0x5eed_0fde;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("expected a real result, imaginary residue {imag:.3e}")]
    NonRealResult { imag: f64 },
    #[error("factor index {index} out of range for {factors} tensor factors")]
    BadFactorIndex { index: usize, factors: usize },
    #[error("state is not normalized (squared norm {norm_sqr})")]
    UnnormalizedState { norm_sqr: f64 },
    #[error("operator is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("operator trace {0} differs from 1")]
    BadTrace(f64),
    #[error("operator is not positive (probe expectation {0:.3e})")]
    NotPositive(f64),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
    factor_dims: Vec<usize>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            data,
            factor_dims: Vec::new(),
        })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self {
            rows,
            cols,
            data,
            factor_dims: Vec::new(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| C64::new(0.0, 0.0))
    }

    /// Identity on a single factor of dimension `n`.
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
            .with_single_factor()
    }

    /// Real diagonal matrix, one factor.
    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { C64::new(diag[r], 0.0) } else { C64::new(0.0, 0.0) })
            .with_single_factor()
    }

    /// `|i><i|` on a factor of dimension `dim`.
    pub fn projector(dim: usize, index: usize) -> Self {
        let mut diag = vec![0.0; dim];
        diag[index] = 1.0;
        Self::diagonal(&diag)
    }

    pub fn pauli_x() -> Self {
        Self::from_fn(2, 2, |r, c| if r != c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
            .with_single_factor()
    }

    fn with_single_factor(mut self) -> Self {
        self.factor_dims = vec![self.rows];
        self
    }

    /// Attach tensor-factor dimensions; the product must equal the (square) size.
    pub fn with_factor_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        if !dims.is_empty() {
            let prod: usize = dims.iter().product();
            if self.rows != self.cols || prod != self.rows {
                return Err(LinalgError::DimensionMismatch(format!(
                    "factor dims {dims:?} do not fit a {}x{} matrix",
                    self.rows, self.cols
                )));
            }
        }
        self.factor_dims = dims;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![C64::new(0.0, 0.0); rows * cols];
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self.get(ar, ac);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for br in 0..other.rows {
                    let row = ar * other.rows + br;
                    for bc in 0..other.cols {
                        data[row * cols + ac * other.cols + bc] = a * other.get(br, bc);
                    }
                }
            }
        }
        let mut factor_dims = self.factor_dims.clone();
        factor_dims.extend_from_slice(&other.factor_dims);
        if factor_dims.iter().product::<usize>() != rows || rows != cols {
            factor_dims.clear();
        }
        ComplexMatrix {
            rows,
            cols,
            data,
            factor_dims,
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj());
        out.factor_dims = self.factor_dims.clone();
        out
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.check_factors(other)?;
        let mut data = vec![C64::new(0.0, 0.0); self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let out_row = &mut data[r * other.cols..(r + 1) * other.cols];
                for (c, slot) in out_row.iter_mut().enumerate() {
                    *slot += a * other.get(k, c);
                }
            }
        }
        let factor_dims = if self.factor_dims.is_empty() {
            other.factor_dims.clone()
        } else {
            self.factor_dims.clone()
        };
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
            factor_dims: if self.rows == other.cols { factor_dims } else { Vec::new() },
        })
    }

    /// `self · inner · self†`
    pub fn conjugate(&self, inner: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.matmul(inner)?.matmul(&self.dagger())
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.check_factors(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
            factor_dims: if self.factor_dims.is_empty() {
                other.factor_dims.clone()
            } else {
                self.factor_dims.clone()
            },
        })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, k: C64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
            factor_dims: self.factor_dims.clone(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        match self.dagger().matmul(self) {
            Ok(p) => p.max_abs_diff(&ComplexMatrix::identity(self.rows)) <= tol,
            Err(_) => false,
        }
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).norm() <= tol))
    }

    /// If this is a 0/1 permutation matrix, the map `i -> j` with `M|i> = |j>`.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if !self.is_square() {
            return None;
        }
        let mut image = Vec::with_capacity(self.cols);
        let mut seen = vec![false; self.rows];
        for c in 0..self.cols {
            let mut hit = None;
            for r in 0..self.rows {
                let x = self.get(r, c);
                if (x - C64::new(1.0, 0.0)).norm() < 1e-12 {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(r);
                } else if x.norm() > 1e-12 {
                    return None;
                }
            }
            let r = hit?;
            if seen[r] {
                return None;
            }
            seen[r] = true;
            image.push(r);
        }
        Some(image)
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot apply a {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect())
    }

    /// `<v|self|v>`
    pub fn expectation(&self, v: &[C64]) -> Result<C64> {
        let mv = self.apply(v)?;
        Ok(v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum())
    }

    fn check_factors(&self, other: &ComplexMatrix) -> Result<()> {
        if !self.factor_dims.is_empty()
            && !other.factor_dims.is_empty()
            && self.factor_dims != other.factor_dims
        {
            return Err(LinalgError::DimensionMismatch(format!(
                "tensor factor layout {:?} vs {:?}",
                self.factor_dims, other.factor_dims
            )));
        }
        Ok(())
    }
}

/// Pure state over a tensor product of `dims`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateJson", into = "StateJson")]
pub struct StateVector {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    dims: Vec<usize>,
    amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<StateJson> for StateVector {
    type Error = LinalgError;

    fn try_from(raw: StateJson) -> Result<Self> {
        StateVector::new(
            raw.dims,
            raw.amplitudes.iter().map(|&[re, im]| C64::new(re, im)).collect(),
        )
    }
}

impl From<StateVector> for StateJson {
    fn from(s: StateVector) -> Self {
        StateJson {
            dims: s.dims,
            amplitudes: s.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl StateVector {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if dims.is_empty() || size != amplitudes.len() {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} amplitudes for factor dims {dims:?}",
                amplitudes.len()
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(LinalgError::UnnormalizedState { norm_sqr });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm before validating.
    pub fn normalized(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(LinalgError::UnnormalizedState { norm_sqr: norm * norm });
        }
        Self::new(dims, amplitudes.into_iter().map(|a| a / norm).collect())
    }

    /// Computational basis state with lexicographic index `index`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let size: usize = dims.iter().product();
        if index >= size {
            return Err(LinalgError::DimensionMismatch(format!(
                "basis index {index} out of range for dims {dims:?}"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); size];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(dims, amps)
    }

    /// Uniform superposition of the listed basis indices.
    pub fn uniform(dims: Vec<usize>, indices: &[usize]) -> Result<Self> {
        let size: usize = dims.iter().product();
        let mut amps = vec![C64::new(0.0, 0.0); size];
        for &i in indices {
            if i >= size {
                return Err(LinalgError::DimensionMismatch(format!(
                    "basis index {i} out of range for dims {dims:?}"
                )));
            }
            amps[i] = C64::new(1.0, 0.0);
        }
        Self::normalized(dims, amps)
    }

    /// Normalized state with i.i.d. uniform real and imaginary parts.
    pub fn random<R: Rng + ?Sized>(dims: Vec<usize>, rng: &mut R) -> Self {
        let size: usize = dims.iter().product();
        loop {
            let amps: Vec<C64> = (0..size)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            if amps.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-6 {
                if let Ok(s) = Self::normalized(dims.clone(), amps) {
                    return s;
                }
            }
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|psi><psi|` with factor dims set.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.amplitudes.len();
        let mut m = ComplexMatrix::from_fn(n, n, |r, c| self.amplitudes[r] * self.amplitudes[c].conj());
        m.factor_dims = self.dims.clone();
        m
    }

    /// Reorders a two-factor state so amplitude `(j1, j2)` lands at `(j2, j1)`.
    pub fn swap_factors(&self) -> Result<StateVector> {
        let [d1, d2] = self.dims[..] else {
            return Err(LinalgError::BadFactorIndex {
                index: 1,
                factors: self.dims.len(),
            });
        };
        let mut amps = vec![C64::new(0.0, 0.0); d1 * d2];
        for j1 in 0..d1 {
            for j2 in 0..d2 {
                amps[j2 * d1 + j1] = self.amplitudes[j1 * d2 + j2];
            }
        }
        Ok(StateVector {
            dims: vec![d2, d1],
            amplitudes: amps,
        })
    }
}

/// Hermitian, unit-trace, probe-positive operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(LinalgError::DimensionMismatch(format!(
                "density operator must be square, got {}x{}",
                matrix.rows, matrix.cols
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > DENSITY_TOL {
            return Err(LinalgError::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(LinalgError::BadTrace(tr.re));
        }
        let lowest = min_probe_expectation(&matrix, POSITIVITY_PROBES, PROBE_SEED);
        if lowest < POSITIVITY_FLOOR {
            return Err(LinalgError::NotPositive(lowest));
        }
        let matrix = if matrix.factor_dims.is_empty() {
            let n = matrix.rows;
            matrix.with_factor_dims(vec![n])?
        } else {
            matrix
        };
        Ok(Self { matrix })
    }

    pub fn from_state(psi: &StateVector) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }
}

/// Smallest real part of `<v|m|v>` over `probes` seeded random unit vectors.
pub fn min_probe_expectation(m: &ComplexMatrix, probes: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = m.cols;
    let mut lowest = f64::INFINITY;
    for _ in 0..probes {
        let v: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let v: Vec<C64> = v.into_iter().map(|a| a / norm).collect();
        if let Ok(e) = m.expectation(&v) {
            lowest = lowest.min(e.re);
        }
    }
    lowest
}

/// `tr(rho · m)`, required to be real.
pub fn trace_product(rho: &DensityOperator, m: &ComplexMatrix) -> Result<f64> {
    let r = rho.matrix();
    if m.rows != r.cols || m.cols != r.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "observable is {}x{}, state is {}x{}",
            m.rows, m.cols, r.rows, r.cols
        )));
    }
    r.check_factors(m)?;
    // Only the diagonal of the product is needed.
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..r.rows {
        for k in 0..r.cols {
            acc += r.get(i, k) * m.get(k, i);
        }
    }
    if acc.im.abs() > REAL_RESIDUE_TOL {
        return Err(LinalgError::NonRealResult { imag: acc.im });
    }
    Ok(acc.re)
}

/// Reduced operator on factor `keep` (0-based), tracing out all other factors.
pub fn partial_trace(rho: &DensityOperator, keep: usize) -> Result<DensityOperator> {
    let m = rho.matrix();
    let dims = m.factor_dims();
    if keep >= dims.len() {
        return Err(LinalgError::BadFactorIndex {
            index: keep,
            factors: dims.len(),
        });
    }
    let dk = dims[keep];
    let stride: usize = dims[keep + 1..].iter().product();
    let n = m.rows;
    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..n {
        let a = (i / stride) % dk;
        let base = i - a * stride;
        for b in 0..dk {
            let j = base + b * stride;
            out.data[a * dk + b] += m.get(i, j);
        }
    }
    DensityOperator::new(out.with_factor_dims(vec![dk])?)
}
