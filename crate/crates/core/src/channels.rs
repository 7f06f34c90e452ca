//! Heisenberg (Pauli at N=2) channels as probability grids over the error
//! operators `U_{m,n}`.
//!
//! A channel is fully characterized by the ME mixture it produces when applied
//! to one half of `|psi_{0,0}>`; the grid weights are exactly the mixture
//! weights. For qubits the grid layout is `p_{0,0} = 1 - p`, `p_{0,1} = p_z`,
//! `p_{1,0} = p_x`, `p_{1,1} = p_y`.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, fidelity, kron, DensityMatrix, StateVector, C64, NEG_PROB_TOL, ORACLE_TOL, STRUCT_TOL,
};
use crate::me_states::{error_operator, me_decompose, me_state, MeIndex};

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelDistribution {
    dim: usize,
    probs: Vec<f64>,
}

impl ChannelDistribution {
    /// `probs` is the row-major N x N grid `p_{m,n}`.
    pub fn new(dim: usize, probs: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDims(format!("dimension {dim} < 2")));
        }
        if probs.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: probs.len(),
            });
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -NEG_PROB_TOL) {
            return Err(Error::InvalidDistribution(format!("probability {p}")));
        }
        let probs: Vec<f64> = probs.into_iter().map(|p| p.max(0.0)).collect();
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > STRUCT_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self { dim, probs })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Malformed(format!(
                "row of length {} in a {dim}x{dim} grid",
                r.len()
            )));
        }
        Self::new(dim, rows.concat())
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut probs = vec![0.0; dim * dim];
        if let Some(p) = probs.first_mut() {
            *p = 1.0;
        }
        Self::new(dim, probs)
    }

    /// Qubit Pauli channel with bit-flip, combined and phase-flip probabilities.
    pub fn pauli(p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        check_pauli_probs(p_x, p_y, p_z)?;
        Self::new(2, vec![1.0 - p_x - p_y - p_z, p_z, p_x, p_y])
    }

    /// Output `(1 - pi) rho + pi I/N`.
    pub fn depolarizing_from_fraction(fraction: f64, dim: usize) -> Result<Self> {
        let off = fraction / (dim * dim) as f64;
        let max = (dim * dim) as f64 / (dim * dim - 1) as f64;
        if !(0.0..=max + STRUCT_TOL).contains(&fraction) {
            return Err(Error::OutOfRange(format!(
                "depolarizing fraction {fraction} outside [0, {max}]"
            )));
        }
        let mut probs = vec![off; dim * dim];
        probs[0] = 1.0 - off * (dim * dim - 1) as f64;
        Self::new(dim, probs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, m: usize, n: usize) -> f64 {
        self.probs[m * self.dim + n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.probs.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    /// `(p_x, p_y, p_z)` of a qubit channel.
    pub fn pauli_probs(&self) -> Result<(f64, f64, f64)> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim,
            });
        }
        Ok((self.prob(1, 0), self.prob(1, 1), self.prob(0, 1)))
    }

    pub fn max_abs_diff(&self, other: &ChannelDistribution) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "dim": self.dim, "probs": self.rows() })
    }

    /// Parses either the explicit grid form or the named shorthand.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<ChannelSpec>(text)?.build()
    }
}

impl Serialize for ChannelDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Channel file contents: `{"dim": N, "probs": [[...]]}` or
/// `{"kind": "...", "p": ..., "dim": N}` (`dim` defaults to 2).
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    Grid {
        dim: usize,
        probs: Vec<Vec<f64>>,
    },
    Named {
        kind: NamedChannel,
        #[serde(default)]
        p: f64,
        #[serde(default = "default_dim")]
        dim: usize,
    },
}

fn default_dim() -> usize {
    2
}

impl ChannelSpec {
    pub fn build(&self) -> Result<ChannelDistribution> {
        match self {
            Self::Grid { dim, probs } => {
                let ch = ChannelDistribution::from_rows(probs)?;
                if ch.dim != *dim {
                    return Err(Error::DimensionMismatch {
                        expected: *dim,
                        found: ch.dim,
                    });
                }
                Ok(ch)
            }
            Self::Named { kind, p, dim } => named_channel(*kind, *p, *dim),
        }
    }
}

fn check_pauli_probs(p_x: f64, p_y: f64, p_z: f64) -> Result<()> {
    for (name, p) in [("p_x", p_x), ("p_y", p_y), ("p_z", p_z)] {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::OutOfRange(format!("{name} = {p} is negative")));
        }
    }
    if p_x + p_y + p_z > 1.0 + STRUCT_TOL {
        return Err(Error::OutOfRange(format!(
            "p_x + p_y + p_z = {} exceeds 1",
            p_x + p_y + p_z
        )));
    }
    Ok(())
}

fn require_single(ch: &ChannelDistribution, dims: &[usize]) -> Result<()> {
    if dims.len() != 1 || dims[0] != ch.dim {
        return Err(Error::DimensionMismatch {
            expected: ch.dim,
            found: dims.iter().product(),
        });
    }
    Ok(())
}

/// `sum_{m,n} p_{m,n} U_{m,n} rho U_{m,n}^dagger`.
pub fn apply_channel(ch: &ChannelDistribution, rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_single(ch, rho.dims())?;
    apply_to_subsystem(ch, rho, 0)
}

/// Applies the channel to one subsystem of a composite state, identity elsewhere.
pub fn apply_to_subsystem(
    ch: &ChannelDistribution,
    rho: &DensityMatrix,
    subsystem: usize,
) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if subsystem >= dims.len() || dims[subsystem] != ch.dim {
        return Err(Error::DimensionMismatch {
            expected: ch.dim,
            found: dims.get(subsystem).copied().unwrap_or(0),
        });
    }
    let before: usize = dims[..subsystem].iter().product();
    let after: usize = dims[subsystem + 1..].iter().product();
    let mut out = Array2::<C64>::zeros(rho.matrix().dim());
    for idx in MeIndex::all(ch.dim) {
        let p = ch.probs[idx.flat()];
        if p == 0.0 {
            continue;
        }
        let u = kron(
            &kron(&Array2::eye(before), &error_operator(idx)),
            &Array2::eye(after),
        );
        out.scaled_add(c(p, 0.0), rho.conjugate_by(&u)?.matrix());
    }
    DensityMatrix::new(dims.to_vec(), out)
}

/// `sum p_{m,n} |psi_{m,n}><psi_{m,n}|` over (R, Y).
pub fn channel_to_me_mixture(ch: &ChannelDistribution) -> DensityMatrix {
    let n2 = ch.dim * ch.dim;
    let mut mat = Array2::<C64>::zeros((n2, n2));
    for idx in MeIndex::all(ch.dim) {
        let p = ch.probs[idx.flat()];
        if p != 0.0 {
            mat.scaled_add(c(p, 0.0), me_state(idx).projector().matrix());
        }
    }
    DensityMatrix::new(vec![ch.dim, ch.dim], mat).expect("convex ME mixture is a density matrix")
}

pub fn me_mixture_to_channel(rho: &DensityMatrix) -> Result<ChannelDistribution> {
    let dec = me_decompose(rho)?;
    if dec.residual() >= ORACLE_TOL {
        return Err(Error::NotHeisenbergOutput {
            residual: dec.residual(),
            tolerance: ORACLE_TOL,
        });
    }
    ChannelDistribution::new(dec.dim(), dec.weights().weights().to_vec())
}

/// Output of the channel for input `psi`, read off a joint state `rho_{RY}`
/// whose reference half started maximally entangled with the input:
/// `N <psi*|_R rho_{RY} |psi*>_R`.
pub fn output_from_joint_state(rho_ry: &DensityMatrix, psi: &StateVector) -> Result<DensityMatrix> {
    let dims = rho_ry.dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::InvalidDims(format!(
            "expected (N, N), found {dims:?}"
        )));
    }
    let n_dim = dims[0];
    if psi.total_dim() != n_dim {
        return Err(Error::DimensionMismatch {
            expected: n_dim,
            found: psi.total_dim(),
        });
    }
    let amps = psi.amps();
    let mat = rho_ry.matrix();
    let mut out = Array2::<C64>::zeros((n_dim, n_dim));
    for i in 0..n_dim {
        for j in 0..n_dim {
            let mut acc = C64::new(0.0, 0.0);
            for r in 0..n_dim {
                for rp in 0..n_dim {
                    acc += amps[r] * mat[[r * n_dim + i, rp * n_dim + j]] * amps[rp].conj();
                }
            }
            out[[i, j]] = acc * n_dim as f64;
        }
    }
    DensityMatrix::new(vec![n_dim], out)
}

pub fn channel_fidelity(ch: &ChannelDistribution, psi: &StateVector) -> Result<f64> {
    require_single(ch, psi.dims())?;
    fidelity(psi, &apply_channel(ch, &psi.projector())?)
}

/// Depolarizing fraction `pi` and scaling factor `s = 1 - pi` of an isotropic channel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepolarizingFraction {
    pub fraction: f64,
    pub scaling: f64,
}

pub fn is_isotropic(ch: &ChannelDistribution) -> bool {
    depolarizing_fraction(ch).is_ok()
}

pub fn depolarizing_fraction(ch: &ChannelDistribution) -> Result<DepolarizingFraction> {
    let reference = ch.probs[1];
    for idx in MeIndex::all(ch.dim).skip(1) {
        let value = ch.probs[idx.flat()];
        if (value - reference).abs() > STRUCT_TOL {
            return Err(Error::Anisotropic {
                m: idx.m(),
                n: idx.n(),
                value,
                expected: reference,
            });
        }
    }
    let n2 = (ch.dim * ch.dim) as f64;
    let fraction = n2 / (n2 - 1.0) * (1.0 - ch.probs[0]);
    Ok(DepolarizingFraction {
        fraction,
        scaling: 1.0 - fraction,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedChannel {
    Depolarizing,
    TwoPauli,
    Dephasing,
    Identity,
    FullyDepolarizing,
}

impl FromStr for NamedChannel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depolarizing" => Ok(Self::Depolarizing),
            "two_pauli" | "2-pauli" => Ok(Self::TwoPauli),
            "dephasing" => Ok(Self::Dephasing),
            "identity" => Ok(Self::Identity),
            "fully_depolarizing" => Ok(Self::FullyDepolarizing),
            other => Err(Error::Malformed(format!("unknown channel kind {other:?}"))),
        }
    }
}

impl fmt::Display for NamedChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Depolarizing => "depolarizing",
            Self::TwoPauli => "two_pauli",
            Self::Dephasing => "dephasing",
            Self::Identity => "identity",
            Self::FullyDepolarizing => "fully_depolarizing",
        };
        f.write_str(s)
    }
}

/// Named channels. `p` is the total error probability `1 - p_{0,0}`;
/// depolarizing spreads it uniformly over the `N^2 - 1` nontrivial errors.
/// `identity` and `fully_depolarizing` ignore `p`.
pub fn named_channel(kind: NamedChannel, p: f64, dim: usize) -> Result<ChannelDistribution> {
    let needs_p = matches!(
        kind,
        NamedChannel::Depolarizing | NamedChannel::TwoPauli | NamedChannel::Dephasing
    );
    if needs_p && !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!(
            "{kind} probability {p} outside [0, 1]"
        )));
    }
    if matches!(kind, NamedChannel::TwoPauli | NamedChannel::Dephasing) && dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: dim,
        });
    }
    match kind {
        NamedChannel::Identity => ChannelDistribution::identity(dim),
        NamedChannel::FullyDepolarizing => {
            ChannelDistribution::new(dim, vec![1.0 / (dim * dim) as f64; dim * dim])
        }
        NamedChannel::Depolarizing => {
            if dim < 2 {
                return Err(Error::InvalidDims(format!("dimension {dim} < 2")));
            }
            let off = p / (dim * dim - 1) as f64;
            let mut probs = vec![off; dim * dim];
            probs[0] = 1.0 - p;
            ChannelDistribution::new(dim, probs)
        }
        NamedChannel::TwoPauli => ChannelDistribution::pauli(p / 2.0, 0.0, p / 2.0),
        NamedChannel::Dephasing => ChannelDistribution::pauli(0.0, 0.0, p),
    }
}

/// Decomposition of a qubit Pauli channel into unchanged, rotated
/// time-reversed, rotated, and fully random fractions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliDecomposition {
    pub unchanged: f64,
    pub time_reversed: f64,
    pub rotated: f64,
    pub random: f64,
    /// Error operator carrying the smallest probability.
    pub sigma1_idx: MeIndex,
    /// Error operator carrying the largest probability.
    pub sigma3_idx: MeIndex,
}

impl PauliDecomposition {
    /// Rebuilds the channel output for `psi` from the four fractions, using the
    /// time-reversed state `sigma_x sigma_z |psi*>`.
    pub fn apply(&self, psi: &StateVector) -> Result<DensityMatrix> {
        if psi.dims() != [2] {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: psi.total_dim(),
            });
        }
        let flip = error_operator(MeIndex::new(1, 1, 2)?);
        let time_reversed = psi.conj().apply(&flip)?;
        let s1 = error_operator(self.sigma1_idx);
        let s3 = error_operator(self.sigma3_idx);
        DensityMatrix::mixture(&[
            (self.unchanged, psi.projector()),
            (self.time_reversed, time_reversed.apply(&s1)?.projector()),
            (self.rotated, psi.apply(&s3)?.projector()),
            (self.random, DensityMatrix::maximally_mixed(vec![2])?),
        ])
    }
}

pub fn pauli_decomposition(p_x: f64, p_y: f64, p_z: f64) -> Result<PauliDecomposition> {
    check_pauli_probs(p_x, p_y, p_z)?;
    // Stable sort keeps x before y before z on ties.
    let mut ranked = [
        (p_x, MeIndex::new(1, 0, 2)?),
        (p_y, MeIndex::new(1, 1, 2)?),
        (p_z, MeIndex::new(0, 1, 2)?),
    ];
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    let [(p1, s1), (p2, _), (p3, s3)] = ranked;
    let p = p1 + p2 + p3;
    Ok(PauliDecomposition {
        unchanged: 1.0 - p - p2,
        time_reversed: p2 - p1,
        rotated: p3 - p2,
        random: 2.0 * (p1 + p2),
        sigma1_idx: s1,
        sigma3_idx: s3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn qubit(a: C64, b: C64) -> StateVector {
        StateVector::normalized(vec![2], vec![a, b]).unwrap()
    }

    #[test]
    fn identity_channel_is_noop() {
        let psi = qubit(c(0.3, 0.1), c(-0.2, 0.9));
        let rho = psi.projector();
        let out = apply_channel(&ChannelDistribution::identity(2).unwrap(), &rho).unwrap();
        assert!(out.frobenius_distance(&rho).unwrap() < 1e-15);
    }

    #[test]
    fn qubit_depolarizing_quarter_shrinks_by_two_thirds() {
        let psi = qubit(c(0.3, 0.1), c(-0.2, 0.9));
        let ch = named_channel(NamedChannel::Depolarizing, 0.25, 2).unwrap();
        let out = apply_channel(&ch, &psi.projector()).unwrap();
        let expected = DensityMatrix::mixture(&[
            (2.0 / 3.0, psi.projector()),
            (1.0 / 3.0, DensityMatrix::maximally_mixed(vec![2]).unwrap()),
        ])
        .unwrap();
        assert!(out.frobenius_distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn uniform_qutrit_channel_fully_depolarizes() {
        let psi =
            StateVector::normalized(vec![3], vec![c(0.3, 0.1), c(-0.2, 0.9), c(0.5, 0.0)]).unwrap();
        let ch = named_channel(NamedChannel::FullyDepolarizing, 0.0, 3).unwrap();
        let out = apply_channel(&ch, &psi.projector()).unwrap();
        let mixed = DensityMatrix::maximally_mixed(vec![3]).unwrap();
        assert!(out.frobenius_distance(&mixed).unwrap() < 1e-15);
    }

    #[test]
    fn apply_channel_rejects_mismatched_dims() {
        let ch = ChannelDistribution::identity(3).unwrap();
        let rho = DensityMatrix::maximally_mixed(vec![2]).unwrap();
        assert!(apply_channel(&ch, &rho).is_err());
    }

    #[test]
    fn me_mixture_examples() {
        let id = channel_to_me_mixture(&ChannelDistribution::identity(2).unwrap());
        let phi = me_state(MeIndex::new(0, 0, 2).unwrap()).projector();
        assert!(id.frobenius_distance(&phi).unwrap() < 1e-15);

        let ch = ChannelDistribution::pauli(0.1, 0.2, 0.3).unwrap();
        let dec = me_decompose(&channel_to_me_mixture(&ch)).unwrap();
        for (w, e) in dec.weights().weights().iter().zip([0.4, 0.3, 0.1, 0.2]) {
            assert_abs_diff_eq!(*w, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn me_mixture_to_channel_examples() {
        let phi = me_state(MeIndex::new(0, 0, 2).unwrap()).projector();
        let back = me_mixture_to_channel(&phi).unwrap();
        assert!(
            back.max_abs_diff(&ChannelDistribution::identity(2).unwrap())
                .unwrap()
                < 1e-15
        );

        let werner = channel_to_me_mixture(
            &ChannelDistribution::new(2, vec![0.75, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0]).unwrap(),
        );
        let ch = me_mixture_to_channel(&werner).unwrap();
        let dep = named_channel(NamedChannel::Depolarizing, 0.25, 2).unwrap();
        assert!(ch.max_abs_diff(&dep).unwrap() < 1e-15);

        let zz = StateVector::basis(2, 0)
            .unwrap()
            .tensor(&StateVector::basis(2, 0).unwrap())
            .projector();
        match me_mixture_to_channel(&zz) {
            Err(Error::NotHeisenbergOutput { residual, .. }) => {
                assert_abs_diff_eq!(residual, 0.5 * 2f64.sqrt(), epsilon = 1e-14)
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn decomposition_of_depolarizing() {
        let p = 0.3;
        let d = pauli_decomposition(p / 3.0, p / 3.0, p / 3.0).unwrap();
        assert_abs_diff_eq!(d.unchanged, 1.0 - 4.0 * p / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.time_reversed, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.rotated, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.random, 4.0 * p / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn decomposition_of_two_pauli() {
        let p = 0.4;
        let d = pauli_decomposition(p / 2.0, 0.0, p / 2.0).unwrap();
        assert_abs_diff_eq!(d.unchanged, 1.0 - 1.5 * p, epsilon = 1e-15);
        assert_abs_diff_eq!(d.time_reversed, p / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.rotated, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.random, p, epsilon = 1e-15);
        assert_eq!(d.sigma1_idx, MeIndex::new(1, 1, 2).unwrap());
    }

    #[test]
    fn decomposition_of_dephasing() {
        let d = pauli_decomposition(0.0, 0.0, 0.35).unwrap();
        assert_abs_diff_eq!(d.unchanged, 0.65, epsilon = 1e-15);
        assert_abs_diff_eq!(d.rotated, 0.35, epsilon = 1e-15);
        assert_eq!(d.time_reversed, 0.0);
        assert_eq!(d.random, 0.0);
        assert_eq!(d.sigma3_idx, MeIndex::new(0, 1, 2).unwrap());
        assert!(pauli_decomposition(-0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn two_pauli_action_matches_conjugate_form() {
        // (1 - 3p/2) psi + (p/2) psi* + p I/2
        let p = 0.5;
        let psi = qubit(c(0.3, 0.4), c(-0.2, 0.7));
        let ch = named_channel(NamedChannel::TwoPauli, p, 2).unwrap();
        let out = apply_channel(&ch, &psi.projector()).unwrap();
        let expected = DensityMatrix::mixture(&[
            (1.0 - 1.5 * p, psi.projector()),
            (p / 2.0, psi.conj().projector()),
            (p, DensityMatrix::maximally_mixed(vec![2]).unwrap()),
        ])
        .unwrap();
        assert!(out.frobenius_distance(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn named_channel_examples() {
        let dep = named_channel(NamedChannel::Depolarizing, 0.25, 2).unwrap();
        for (a, b) in dep
            .probs()
            .iter()
            .zip([0.75, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0])
        {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        let deph = named_channel(NamedChannel::Dephasing, 0.5, 2).unwrap();
        assert_eq!(deph.prob(0, 0), 0.5);
        assert_eq!(deph.prob(0, 1), 0.5);
        let id = named_channel(NamedChannel::Identity, 0.0, 4).unwrap();
        assert_eq!(id.prob(0, 0), 1.0);
        assert_eq!(id.probs().iter().sum::<f64>(), 1.0);
        assert!(named_channel(NamedChannel::Depolarizing, 1.5, 2).is_err());
        assert!(named_channel(NamedChannel::Dephasing, 0.2, 3).is_err());
    }

    #[test]
    fn channel_fidelity_examples() {
        let psi = qubit(c(0.3, 0.1), c(-0.2, 0.9));
        let dep = named_channel(NamedChannel::Depolarizing, 0.25, 2).unwrap();
        assert_abs_diff_eq!(
            channel_fidelity(&dep, &psi).unwrap(),
            5.0 / 6.0,
            epsilon = 1e-14
        );
        let id = ChannelDistribution::identity(2).unwrap();
        assert_abs_diff_eq!(channel_fidelity(&id, &psi).unwrap(), 1.0, epsilon = 1e-14);

        // (1 - pi) + pi/N at N = 3, pi = 3/8
        let psi3 = StateVector::normalized(vec![3], vec![c(0.3, 0.1), c(-0.2, 0.9), c(0.1, -0.4)])
            .unwrap();
        let ch3 = ChannelDistribution::depolarizing_from_fraction(3.0 / 8.0, 3).unwrap();
        assert_abs_diff_eq!(
            channel_fidelity(&ch3, &psi3).unwrap(),
            0.75,
            epsilon = 1e-14
        );
    }

    #[test]
    fn depolarizing_fraction_examples() {
        let dep = named_channel(NamedChannel::Depolarizing, 0.25, 2).unwrap();
        let f = depolarizing_fraction(&dep).unwrap();
        assert_abs_diff_eq!(f.fraction, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.scaling, 2.0 / 3.0, epsilon = 1e-15);
        let id = depolarizing_fraction(&ChannelDistribution::identity(3).unwrap()).unwrap();
        assert_eq!(id.fraction, 0.0);
        match depolarizing_fraction(&ChannelDistribution::pauli(0.1, 0.0, 0.1).unwrap()) {
            Err(Error::Anisotropic { m, n, .. }) => assert_eq!((m, n), (1, 1)),
            other => panic!("expected anisotropy error, got {other:?}"),
        }
    }

    #[test]
    fn joint_state_readout_of_identity() {
        let psi = qubit(c(0.6, 0.0), c(0.0, 0.8));
        let phi = me_state(MeIndex::new(0, 0, 2).unwrap()).projector();
        let out = output_from_joint_state(&phi, &psi).unwrap();
        assert!(out.frobenius_distance(&psi.projector()).unwrap() < 1e-15);
    }

    #[test]
    fn json_forms() {
        let grid =
            ChannelDistribution::from_json(r#"{"dim": 2, "probs": [[0.7, 0.1], [0.1, 0.1]]}"#)
                .unwrap();
        assert_eq!(grid.prob(0, 1), 0.1);
        let named = ChannelDistribution::from_json(r#"{"kind": "dephasing", "p": 0.5}"#).unwrap();
        assert_eq!(named.prob(0, 1), 0.5);
        let round = ChannelDistribution::from_json(&grid.to_json().to_string()).unwrap();
        assert_eq!(round, grid);
        assert!(
            ChannelDistribution::from_json(r#"{"dim": 3, "probs": [[1.0, 0.0], [0.0, 0.0]]}"#)
                .is_err()
        );
        assert!(
            ChannelDistribution::from_json(r#"{"dim": 2, "probs": [[0.5, 0.0], [0.0, 0.0]]}"#)
                .is_err()
        );
    }
}
