//! Maximally-entangled basis of two N-dimensional systems and the Heisenberg
//! error operators that generate it from `|psi_{0,0}>`.
//!
//! `|psi_{m,n}> = N^{-1/2} sum_j e^{2 pi i j n / N} |j>|j+m>` and
//! `U_{m,n} = sum_k e^{2 pi i k n / N} |k+m><k|`, ket labels taken mod N.
//! Phases are used exactly as written; at N=2 this gives
//! `psi_{0,0} = Phi+`, `psi_{0,1} = Phi-`, `psi_{1,0} = Psi+`, `psi_{1,1} = Psi-`
//! and `U_{1,1} = sigma_x sigma_z = -i sigma_y`.

use std::f64::consts::PI;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, frobenius_norm, DensityMatrix, ProbDist, StateVector, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeIndex {
    m: usize,
    n: usize,
    dim: usize,
}

impl MeIndex {
    pub fn new(m: usize, n: usize, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDims(format!("dimension {dim} < 2")));
        }
        if m >= dim || n >= dim {
            return Err(Error::OutOfRange(format!(
                "index ({m},{n}) outside 0..{dim}"
            )));
        }
        Ok(Self { m, n, dim })
    }

    /// Flat position `m * N + n`, the order used by every grid in this crate.
    pub fn from_flat(flat: usize, dim: usize) -> Result<Self> {
        Self::new(flat / dim, flat % dim, dim)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flat(&self) -> usize {
        self.m * self.dim + self.n
    }

    /// All N^2 indices in flat order.
    pub fn all(dim: usize) -> impl Iterator<Item = MeIndex> {
        (0..dim * dim).map(move |f| MeIndex {
            m: f / dim,
            n: f % dim,
            dim,
        })
    }
}

pub(crate) fn root_of_unity(k: usize, dim: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * (k % dim) as f64 / dim as f64)
}

pub fn me_state(idx: MeIndex) -> StateVector {
    let n_dim = idx.dim;
    let norm = 1.0 / (n_dim as f64).sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); n_dim * n_dim];
    for j in 0..n_dim {
        amps[j * n_dim + (j + idx.m) % n_dim] = root_of_unity(j * idx.n, n_dim) * norm;
    }
    StateVector::from_parts(vec![n_dim, n_dim], amps.into())
}

/// All N^2 ME states in flat order.
pub fn me_basis(dim: usize) -> Vec<StateVector> {
    MeIndex::all(dim).map(me_state).collect()
}

pub fn error_operator(idx: MeIndex) -> Array2<C64> {
    let n_dim = idx.dim;
    let mut u = Array2::zeros((n_dim, n_dim));
    for k in 0..n_dim {
        u[[(k + idx.m) % n_dim, k]] = root_of_unity(k * idx.n, n_dim);
    }
    u
}

/// `(I ⊗ U_{m,n}) |psi_{0,0}>`.
pub fn local_action(idx: MeIndex) -> StateVector {
    let n_dim = idx.dim;
    let lifted = crate::linalg::kron(&Array2::eye(n_dim), &error_operator(idx));
    let base = me_state(MeIndex {
        m: 0,
        n: 0,
        dim: n_dim,
    });
    StateVector::from_parts(vec![n_dim, n_dim], lifted.dot(base.amps()))
}

/// Diagonal weights of a two-party density matrix in the ME basis, plus the
/// Frobenius norm of whatever the diagonal mixture fails to reproduce.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeDecomposition {
    dim: usize,
    weights: ProbDist,
    residual: f64,
}

impl MeDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &ProbDist {
        &self.weights
    }

    pub fn weight(&self, m: usize, n: usize) -> f64 {
        self.weights.weights()[m * self.dim + n]
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }
}

pub fn me_decompose(rho: &DensityMatrix) -> Result<MeDecomposition> {
    let dims = rho.dims();
    if dims.len() != 2 {
        return Err(Error::InvalidDims(format!(
            "expected two subsystems, found {}",
            dims.len()
        )));
    }
    if dims[0] != dims[1] {
        return Err(Error::DimensionMismatch {
            expected: dims[0],
            found: dims[1],
        });
    }
    let n_dim = dims[0];
    let basis = me_basis(n_dim);
    let mat = rho.matrix();
    let weights: Vec<f64> = basis
        .iter()
        .map(|psi| {
            let v = psi.amps();
            v.mapv(|z| z.conj()).dot(&mat.dot(v)).re
        })
        .collect();
    let mut rebuilt = Array2::<C64>::zeros(mat.dim());
    for (w, psi) in weights.iter().zip(&basis) {
        rebuilt.scaled_add(c(*w, 0.0), psi.projector().matrix());
    }
    let residual = frobenius_norm(&(mat - &rebuilt));
    Ok(MeDecomposition {
        dim: n_dim,
        weights: ProbDist::from_weights(weights)?,
        residual,
    })
}

/// `|| sum_{m,n} |psi_{m,n}><psi_{m,n}| - I ||_F`.
pub fn verify_resolution_identity(dim: usize) -> Result<f64> {
    if !(2..=8).contains(&dim) {
        return Err(Error::OutOfRange(format!("dimension {dim} outside 2..=8")));
    }
    let total = dim * dim;
    let mut acc = Array2::<C64>::zeros((total, total));
    for psi in me_basis(dim) {
        acc += psi.projector().matrix();
    }
    Ok(frobenius_norm(&(acc - Array2::<C64>::eye(total))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dagger;
    use approx::assert_abs_diff_eq;

    fn idx(m: usize, n: usize, d: usize) -> MeIndex {
        MeIndex::new(m, n, d).unwrap()
    }

    fn assert_vec_close(a: &[C64], b: &[C64], eps: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() < eps, "{x} vs {y}");
        }
    }

    #[test]
    fn qubit_bell_identifications() {
        let s = 0.5_f64.sqrt();
        let phi_plus = [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        let psi_minus = [c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)];
        assert_vec_close(&me_state(idx(0, 0, 2)).to_vec(), &phi_plus, 1e-15);
        assert_vec_close(&me_state(idx(1, 1, 2)).to_vec(), &psi_minus, 1e-15);
    }

    #[test]
    fn qutrit_shift_state() {
        // (|0>|1> + |1>|2> + |2>|0>)/sqrt3
        let t = 1.0 / 3f64.sqrt();
        let mut expected = vec![c(0.0, 0.0); 9];
        expected[1] = c(t, 0.0);
        expected[5] = c(t, 0.0);
        expected[6] = c(t, 0.0);
        assert_vec_close(&me_state(idx(1, 0, 3)).to_vec(), &expected, 1e-15);
    }

    #[test]
    fn qubit_error_operators_are_paulis() {
        let sx = error_operator(idx(1, 0, 2));
        let sz = error_operator(idx(0, 1, 2));
        assert_eq!(sx[[0, 1]], c(1.0, 0.0));
        assert_eq!(sx[[1, 0]], c(1.0, 0.0));
        assert_eq!(sx[[0, 0]], c(0.0, 0.0));
        assert_abs_diff_eq!(sz[[1, 1]].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sz[[0, 0]].re, 1.0, epsilon = 1e-15);
        for d in 2..=5 {
            assert_eq!(error_operator(idx(0, 0, d)), Array2::<C64>::eye(d));
        }
    }

    #[test]
    fn qutrit_error_operator_entries() {
        let u = error_operator(idx(1, 1, 3));
        for k in 0..3 {
            let expected = C64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
            assert!((u[[(k + 1) % 3, k]] - expected).norm() < 1e-15);
        }
        assert_eq!(u.iter().filter(|z| z.norm() > 0.0).count(), 3);
    }

    #[test]
    fn local_action_examples() {
        let s = 0.5_f64.sqrt();
        let phi_minus = [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-s, 0.0)];
        assert_vec_close(&local_action(idx(0, 1, 2)).to_vec(), &phi_minus, 1e-15);
        let psi_minus = [c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)];
        assert_vec_close(&local_action(idx(1, 1, 2)).to_vec(), &psi_minus, 1e-15);
        assert_vec_close(
            &local_action(idx(2, 3, 4)).to_vec(),
            &me_state(idx(2, 3, 4)).to_vec(),
            1e-12,
        );
    }

    #[test]
    fn orthonormality_unitarity_and_local_action_up_to_six() {
        for d in 2..=6 {
            let basis = me_basis(d);
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let ip = a.inner(b).unwrap();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - c(expected, 0.0)).norm() < 1e-12);
                }
            }
            for ix in MeIndex::all(d) {
                let u = error_operator(ix);
                let defect = frobenius_norm(&(u.dot(&dagger(&u)) - Array2::<C64>::eye(d)));
                assert!(defect < 1e-12);
                assert_vec_close(&local_action(ix).to_vec(), &me_state(ix).to_vec(), 1e-12);
            }
        }
    }

    #[test]
    fn marginals_of_me_states_are_maximally_mixed() {
        for ix in MeIndex::all(3) {
            let rho = me_state(ix).partial_trace(&[1]).unwrap();
            let mixed = DensityMatrix::maximally_mixed(vec![3]).unwrap();
            assert!(rho.frobenius_distance(&mixed).unwrap() < 1e-14);
        }
    }

    #[test]
    fn decompose_basis_element() {
        let d = me_decompose(&me_state(idx(0, 0, 2)).projector()).unwrap();
        assert_abs_diff_eq!(d.weight(0, 0), 1.0, epsilon = 1e-15);
        assert!(d.residual() < 1e-15);
    }

    #[test]
    fn decompose_bell_mixture() {
        // (1-p) Phi+ + p_z Phi- + p_x Psi+ + p_y Psi-, (p_x,p_y,p_z) = (.1,.2,.3)
        let basis = me_basis(2);
        let rho = DensityMatrix::mixture(&[
            (0.4, basis[0].projector()),
            (0.3, basis[1].projector()),
            (0.1, basis[2].projector()),
            (0.2, basis[3].projector()),
        ])
        .unwrap();
        let d = me_decompose(&rho).unwrap();
        for (w, e) in d.weights().weights().iter().zip([0.4, 0.3, 0.1, 0.2]) {
            assert_abs_diff_eq!(*w, e, epsilon = 1e-15);
        }
        assert!(d.residual() < 1e-15);
    }

    #[test]
    fn decompose_product_state_leaves_residual() {
        let zero_zero = StateVector::basis(2, 0)
            .unwrap()
            .tensor(&StateVector::basis(2, 0).unwrap());
        let d = me_decompose(&zero_zero.projector()).unwrap();
        assert_abs_diff_eq!(d.weight(0, 0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.weight(0, 1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.residual(), 0.5 * 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn decompose_rejects_unequal_dims() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 3]).unwrap();
        assert!(matches!(
            me_decompose(&rho),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn resolution_of_identity() {
        for d in [2, 3, 5, 8] {
            assert!(verify_resolution_identity(d).unwrap() < 1e-12);
        }
        assert!(verify_resolution_identity(9).is_err());
        assert!(verify_resolution_identity(1).is_err());
    }

    #[test]
    fn index_validation() {
        assert!(MeIndex::new(2, 0, 2).is_err());
        assert!(MeIndex::new(0, 0, 1).is_err());
        assert_eq!(MeIndex::from_flat(7, 3).unwrap(), idx(2, 1, 3));
    }
}
