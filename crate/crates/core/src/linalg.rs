//! Small dense complex linear algebra over composite Hilbert spaces.
//!
//! Subsystems are ordered row-major with the leftmost subsystem most
//! significant, so the basis index of `|i_0 i_1 ... i_k>` is
//! `((i_0 * d_1 + i_1) * d_2 + ...)`. Every state in this crate that lives on
//! the reference/output systems of a cloner uses the order (R, A, B, C).

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for structural invariants (normalization, hermiticity, traces).
pub const STRUCT_TOL: f64 = 1e-10;
/// Tolerance for comparisons between two independent computational routes.
pub const ORACLE_TOL: f64 = 1e-9;
/// Rounding slack below zero tolerated in probability vectors before clamping.
pub const NEG_PROB_TOL: f64 = 1e-12;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn validate_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::InvalidDims("no subsystems declared".into()));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDims(format!("subsystem dimension {d} < 2")));
    }
    Ok(dims.iter().product())
}

/// Conjugate transpose.
pub fn dagger(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for ((i, j), &x) in a.indexed_iter() {
        if x == C64::new(0.0, 0.0) {
            continue;
        }
        for ((k, l), &y) in b.indexed_iter() {
            out[[i * br + k, j * bc + l]] = x * y;
        }
    }
    out
}

pub fn frobenius_norm(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A normalized pure state over a composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Array1<C64>,
}

impl StateVector {
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let total = validate_dims(&dims)?;
        if amps.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: amps.len(),
            });
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > STRUCT_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            dims,
            amps: Array1::from(amps),
        })
    }

    /// Scales `amps` to unit norm before validating.
    pub fn normalized(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Self::new(dims, amps.into_iter().map(|z| z / norm).collect())
    }

    /// Computational basis state `|k>` of a single system.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::OutOfRange(format!("basis index {k} >= {dim}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Self::new(vec![dim], amps)
    }

    pub(crate) fn from_parts(dims: Vec<usize>, amps: Array1<C64>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), amps.len());
        Self { dims, amps }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn to_vec(&self) -> Vec<C64> {
        self.amps.to_vec()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.total_dim() != other.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                found: other.total_dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Complex conjugate in the computational basis.
    pub fn conj(&self) -> StateVector {
        Self::from_parts(self.dims.clone(), self.amps.mapv(|z| z.conj()))
    }

    /// Applies a square operator acting on the whole space.
    pub fn apply(&self, op: &Array2<C64>) -> Result<StateVector> {
        if op.dim() != (self.total_dim(), self.total_dim()) {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                found: op.nrows(),
            });
        }
        Ok(Self::from_parts(self.dims.clone(), op.dot(&self.amps)))
    }

    pub fn projector(&self) -> DensityMatrix {
        let n = self.total_dim();
        let mut mat = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                mat[[i, j]] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityMatrix::from_parts(self.dims.clone(), mat)
    }

    /// Reorders subsystems: subsystem `order[k]` of `self` becomes subsystem `k`.
    pub fn permute(&self, order: &[usize]) -> Result<StateVector> {
        let k = self.dims.len();
        let mut seen = vec![false; k];
        if order.len() != k
            || order
                .iter()
                .any(|&o| o >= k || std::mem::replace(&mut seen[o], true))
        {
            return Err(Error::InvalidKeep(format!(
                "{order:?} is not a permutation of 0..{k}"
            )));
        }
        let new_dims: Vec<usize> = order.iter().map(|&o| self.dims[o]).collect();
        let mut out = Array1::zeros(self.total_dim());
        for (idx, &amp) in self.amps.iter().enumerate() {
            let digits = decompose(idx, &self.dims);
            let new_digits: Vec<usize> = order.iter().map(|&o| digits[o]).collect();
            out[compose(&new_digits, &new_dims)] = amp;
        }
        Ok(Self::from_parts(new_dims, out))
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut amps = Array1::zeros(self.total_dim() * other.total_dim());
        for (i, &a) in self.amps.iter().enumerate() {
            for (j, &b) in other.amps.iter().enumerate() {
                amps[i * other.total_dim() + j] = a * b;
            }
        }
        Self::from_parts(dims, amps)
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = Split::new(&self.dims, keep)?;
        let mut m = Array2::zeros((split.keep_dim, split.rest_dim));
        for k in 0..split.keep_dim {
            for t in 0..split.rest_dim {
                m[[k, t]] = self.amps[split.index(k, t)];
            }
        }
        Ok(DensityMatrix::from_parts(
            split.keep_dims,
            m.dot(&dagger(&m)),
        ))
    }
}

/// A Hermitian, unit-trace operator over a composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: Array2<C64>,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, mat: Array2<C64>) -> Result<Self> {
        let total = validate_dims(&dims)?;
        if mat.dim() != (total, total) {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: mat.nrows(),
            });
        }
        let rho = Self { dims, mat };
        rho.check()?;
        Ok(rho)
    }

    pub(crate) fn from_parts(dims: Vec<usize>, mat: Array2<C64>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), mat.nrows());
        Self { dims, mat }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let total = validate_dims(&dims)?;
        let mat = Array2::from_diag_elem(total, c(1.0 / total as f64, 0.0));
        Ok(Self { dims, mat })
    }

    /// Convex combination `sum_i w_i rho_i`; weights must form a distribution.
    pub fn mixture(terms: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidDistribution("empty mixture".into()))?;
        let dims = first.1.dims.clone();
        let mut mat = Array2::zeros(first.1.mat.dim());
        for (w, rho) in terms {
            if rho.dims != dims {
                return Err(Error::DimensionMismatch {
                    expected: first.1.total_dim(),
                    found: rho.total_dim(),
                });
            }
            mat.scaled_add(c(*w, 0.0), &rho.mat);
        }
        Self::new(dims, mat)
    }

    fn check(&self) -> Result<()> {
        let herm = frobenius_norm(&(&self.mat - &dagger(&self.mat)));
        if herm > STRUCT_TOL {
            return Err(Error::InvalidDensity(format!(
                "hermiticity defect {herm:.3e}"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > STRUCT_TOL || tr.im.abs() > STRUCT_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        if let Some(d) = self.mat.diag().iter().find(|z| z.re < -1e-9) {
            return Err(Error::InvalidDensity(format!("negative diagonal {}", d.re)));
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.diag().sum()
    }

    pub fn frobenius_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.mat.dim() != other.mat.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                found: other.total_dim(),
            });
        }
        Ok(frobenius_norm(&(&self.mat - &other.mat)))
    }

    /// `U rho U^dagger`.
    pub fn conjugate_by(&self, u: &Array2<C64>) -> Result<DensityMatrix> {
        if u.dim() != self.mat.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                found: u.nrows(),
            });
        }
        Ok(Self::from_parts(
            self.dims.clone(),
            u.dot(&self.mat).dot(&dagger(u)),
        ))
    }

    /// `Tr(rho O)`.
    pub fn expectation(&self, op: &Array2<C64>) -> Result<C64> {
        if op.dim() != self.mat.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                found: op.nrows(),
            });
        }
        Ok(self.mat.dot(op).diag().sum())
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_parts(dims, kron(&self.mat, &other.mat))
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = Split::new(&self.dims, keep)?;
        let mut out = Array2::zeros((split.keep_dim, split.keep_dim));
        for k1 in 0..split.keep_dim {
            for k2 in 0..split.keep_dim {
                out[[k1, k2]] = (0..split.rest_dim)
                    .map(|t| self.mat[[split.index(k1, t), split.index(k2, t)]])
                    .sum();
            }
        }
        Ok(Self::from_parts(split.keep_dims, out))
    }
}

/// A probability vector with opaque integer labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbDist {
    weights: Vec<f64>,
    labels: Vec<usize>,
}

impl ProbDist {
    /// Validates the sum and clamps rounding negatives in `[-1e-12, 0)` to zero.
    pub fn new(weights: Vec<f64>, labels: Vec<usize>) -> Result<Self> {
        if weights.len() != labels.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} weights but {} labels",
                weights.len(),
                labels.len()
            )));
        }
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("no weights".into()));
        }
        if let Some(w) = weights
            .iter()
            .find(|w| !w.is_finite() || **w < -NEG_PROB_TOL)
        {
            return Err(Error::InvalidDistribution(format!("weight {w}")));
        }
        let weights: Vec<f64> = weights.into_iter().map(|w| w.max(0.0)).collect();
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > STRUCT_TOL {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}"
            )));
        }
        Ok(Self { weights, labels })
    }

    /// Labels `0..weights.len()`.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let labels = (0..weights.len()).collect();
        Self::new(weights, labels)
    }

    pub fn uniform(k: usize) -> Result<Self> {
        Self::from_weights(vec![1.0 / k as f64; k])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }
}

/// Either kind of state, for callers that only know the kind at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn dims(&self) -> &[usize] {
        match self {
            Self::Pure(s) => s.dims(),
            Self::Mixed(r) => r.dims(),
        }
    }
}

pub fn tensor_product(a: &QuantumState, b: &QuantumState) -> Result<QuantumState> {
    match (a, b) {
        (QuantumState::Pure(x), QuantumState::Pure(y)) => Ok(QuantumState::Pure(x.tensor(y))),
        (QuantumState::Mixed(x), QuantumState::Mixed(y)) => Ok(QuantumState::Mixed(x.tensor(y))),
        _ => Err(Error::MixedKinds),
    }
}

/// Reduced state on `keep`, listed in the original relative order of subsystems.
pub fn partial_trace(state: &QuantumState, keep: &[usize]) -> Result<DensityMatrix> {
    match state {
        QuantumState::Pure(s) => s.partial_trace(keep),
        QuantumState::Mixed(r) => r.partial_trace(keep),
    }
}

/// `<psi|rho|psi>`.
pub fn fidelity(psi: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    if psi.total_dim() != rho.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.total_dim(),
            found: psi.total_dim(),
        });
    }
    let f = psi.amps.mapv(|z| z.conj()).dot(&rho.mat.dot(&psi.amps));
    debug_assert!(f.im.abs() < 1e-10);
    Ok(f.re.clamp(0.0, 1.0))
}

/// Shannon entropy in bits with `0 log 0 = 0`.
pub fn shannon_entropy(p: &ProbDist) -> f64 {
    let h: f64 = p
        .weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| -w * w.log2())
        .sum();
    h.max(0.0)
}

/// Mixed-radix digits of `idx` with the leftmost subsystem most significant.
pub(crate) fn decompose(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (k, &d) in dims.iter().enumerate().rev() {
        digits[k] = idx % d;
        idx /= d;
    }
    digits
}

pub(crate) fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Index bookkeeping for splitting a composite space into kept and traced parts.
struct Split {
    keep_dims: Vec<usize>,
    keep_dim: usize,
    rest_dim: usize,
    table: Vec<usize>,
}

impl Split {
    fn new(dims: &[usize], keep: &[usize]) -> Result<Self> {
        let k = dims.len();
        if keep.is_empty() {
            return Err(Error::InvalidKeep("keep-set is empty".into()));
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() {
            return Err(Error::InvalidKeep(format!("duplicate entries in {keep:?}")));
        }
        if let Some(&bad) = sorted.iter().find(|&&s| s >= k) {
            return Err(Error::InvalidKeep(format!(
                "subsystem {bad} out of range 0..{k}"
            )));
        }
        if sorted.len() == k {
            return Err(Error::InvalidKeep("keep-set covers every subsystem".into()));
        }
        let rest: Vec<usize> = (0..k).filter(|i| !sorted.contains(i)).collect();
        let keep_dims: Vec<usize> = sorted.iter().map(|&i| dims[i]).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&i| dims[i]).collect();
        let keep_dim: usize = keep_dims.iter().product();
        let rest_dim: usize = rest_dims.iter().product();
        let mut table = vec![0; keep_dim * rest_dim];
        let mut digits = vec![0; k];
        for kk in 0..keep_dim {
            let kd = decompose(kk, &keep_dims);
            for t in 0..rest_dim {
                let td = decompose(t, &rest_dims);
                for (pos, &s) in sorted.iter().enumerate() {
                    digits[s] = kd[pos];
                }
                for (pos, &s) in rest.iter().enumerate() {
                    digits[s] = td[pos];
                }
                table[kk * rest_dim + t] = compose(&digits, dims);
            }
        }
        Ok(Self {
            keep_dims,
            keep_dim,
            rest_dim,
            table,
        })
    }

    fn index(&self, kept: usize, traced: usize) -> usize {
        self.table[kept * self.rest_dim + traced]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn r(x: f64) -> C64 {
        c(x, 0.0)
    }

    fn bell_phi_plus() -> StateVector {
        let s = 0.5_f64.sqrt();
        StateVector::new(vec![2, 2], vec![r(s), r(0.0), r(0.0), r(s)]).unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let z = StateVector::basis(2, 0).unwrap();
        let zz = z.tensor(&z);
        assert_eq!(zz.dims(), &[2, 2]);
        assert_eq!(zz.to_vec(), vec![r(1.0), r(0.0), r(0.0), r(0.0)]);
    }

    #[test]
    fn tensor_of_plus_and_one() {
        let s = 0.5_f64.sqrt();
        let plus = StateVector::new(vec![2], vec![r(s), r(s)]).unwrap();
        let one = StateVector::basis(2, 1).unwrap();
        let out = plus.tensor(&one).to_vec();
        let expected = [0.0, s, 0.0, s];
        for (a, b) in out.iter().zip(expected) {
            assert_abs_diff_eq!(a.re, b, epsilon = 1e-15);
            assert_eq!(a.im, 0.0);
        }
    }

    #[test]
    fn tensor_of_maximally_mixed() {
        let half = DensityMatrix::maximally_mixed(vec![2]).unwrap();
        let q = half.tensor(&half);
        let expected = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert_eq!(q.dims(), &[2, 2]);
        assert!(q.frobenius_distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn tensor_of_mixed_kinds_is_rejected() {
        let a = QuantumState::Pure(StateVector::basis(2, 0).unwrap());
        let b = QuantumState::Mixed(DensityMatrix::maximally_mixed(vec![2]).unwrap());
        assert!(matches!(tensor_product(&a, &b), Err(Error::MixedKinds)));
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho = bell_phi_plus().partial_trace(&[0]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(vec![2]).unwrap();
        assert!(rho.frobenius_distance(&mixed).unwrap() < 1e-15);
        let rho = bell_phi_plus().projector().partial_trace(&[1]).unwrap();
        assert!(rho.frobenius_distance(&mixed).unwrap() < 1e-15);
    }

    #[test]
    fn product_state_marginal() {
        let s = StateVector::basis(2, 0)
            .unwrap()
            .tensor(&StateVector::basis(2, 1).unwrap());
        let rho = s.partial_trace(&[1]).unwrap();
        let one = StateVector::basis(2, 1).unwrap().projector();
        assert!(rho.frobenius_distance(&one).unwrap() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_keep_sets() {
        let s = bell_phi_plus();
        assert!(matches!(s.partial_trace(&[]), Err(Error::InvalidKeep(_))));
        assert!(matches!(
            s.partial_trace(&[0, 1]),
            Err(Error::InvalidKeep(_))
        ));
        assert!(matches!(s.partial_trace(&[2]), Err(Error::InvalidKeep(_))));
        assert!(matches!(
            s.partial_trace(&[0, 0]),
            Err(Error::InvalidKeep(_))
        ));
    }

    #[test]
    fn partial_trace_keeps_original_order() {
        // |0>_0 |1>_1 |2>_2 over dims (2,2,3); keep {2,0} -> |0>|2> in order (0,2)
        let s = StateVector::basis(2, 0)
            .unwrap()
            .tensor(&StateVector::basis(2, 1).unwrap())
            .tensor(&StateVector::basis(3, 2).unwrap());
        let rho = s.partial_trace(&[2, 0]).unwrap();
        assert_eq!(rho.dims(), &[2, 3]);
        assert_abs_diff_eq!(rho.matrix()[[2, 2]].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let s = 0.5_f64.sqrt();
        let psi = StateVector::new(vec![2], vec![r(0.6), c(0.0, 0.8)]).unwrap();
        assert_abs_diff_eq!(
            fidelity(&psi, &psi.projector()).unwrap(),
            1.0,
            epsilon = 1e-15
        );

        // (2/3)|psi><psi| + I/6
        let rho = DensityMatrix::mixture(&[
            (2.0 / 3.0, psi.projector()),
            (1.0 / 3.0, DensityMatrix::maximally_mixed(vec![2]).unwrap()),
        ])
        .unwrap();
        assert_abs_diff_eq!(fidelity(&psi, &rho).unwrap(), 5.0 / 6.0, epsilon = 1e-15);

        let psi3 = StateVector::new(vec![3], vec![r(s), r(0.0), c(0.0, s)]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(vec![3]).unwrap();
        assert_abs_diff_eq!(fidelity(&psi3, &mixed).unwrap(), 1.0 / 3.0, epsilon = 1e-15);

        assert!(matches!(
            fidelity(&psi, &mixed),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn entropy_examples() {
        let det = ProbDist::from_weights(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(shannon_entropy(&det), 0.0);

        let werner =
            ProbDist::from_weights(vec![0.75, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0]).unwrap();
        assert_abs_diff_eq!(
            shannon_entropy(&werner),
            2.0 - 3f64.log2() / 2.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(shannon_entropy(&werner), 1.2075, epsilon = 1e-4);

        let marg = ProbDist::from_weights(vec![5.0 / 6.0, 1.0 / 6.0]).unwrap();
        assert_abs_diff_eq!(shannon_entropy(&marg), 0.65, epsilon = 5e-3);
    }

    #[test]
    fn prob_dist_clamps_rounding_negatives() {
        let p = ProbDist::from_weights(vec![1.0 + 5e-13, -5e-13]).unwrap();
        assert_eq!(p.weights()[1], 0.0);
        assert!(ProbDist::from_weights(vec![1.1, -0.1]).is_err());
        assert!(ProbDist::from_weights(vec![0.5, 0.4]).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = Array2::from_diag_elem(2, r(1.0));
        assert!(DensityMatrix::new(vec![2], bad_trace).is_err());
        let mut nonherm = Array2::from_diag_elem(2, r(0.5));
        nonherm[[0, 1]] = r(0.1);
        assert!(DensityMatrix::new(vec![2], nonherm).is_err());
        assert!(StateVector::new(vec![1], vec![r(1.0)]).is_err());
        assert!(StateVector::new(vec![2], vec![r(1.0), r(1.0)]).is_err());
    }

    #[test]
    fn permute_reorders_subsystems() {
        let s = StateVector::basis(2, 0)
            .unwrap()
            .tensor(&StateVector::basis(3, 2).unwrap());
        let p = s.permute(&[1, 0]).unwrap();
        assert_eq!(p.dims(), &[3, 2]);
        // |2>|0> in dims (3,2) -> index 4
        assert_eq!(p.to_vec()[4], r(1.0));
        assert!(s.permute(&[0, 0]).is_err());
    }
}
