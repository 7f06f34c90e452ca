//! Variance-product and entropic tradeoffs between the two copies.

use serde::{Deserialize, Serialize};

use crate::channels::ChannelDistribution;
use crate::error::{Error, Result};
use crate::hcm::{fourier_dual, AmplitudeGrid};
use crate::linalg::{shannon_entropy, ProbDist, NEG_PROB_TOL};
use crate::pcm::{repartition, DoubleBellAmplitudes, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub slack: f64,
}

impl UncertaintyReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            lhs,
            rhs,
            satisfied: slack >= -NEG_PROB_TOL,
            slack,
        }
    }

    /// Within `tol` of equality.
    pub fn saturated(&self, tol: f64) -> bool {
        self.slack.abs() <= tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RobertsonVariant {
    /// `O_A = sigma_z/2 (x) I`, `O_B = sigma_x/2 (x) I`.
    One,
    /// `O_A = I (x) sigma_z/2`, `O_B = I (x) sigma_x/2`.
    Two,
}

impl TryFrom<u8> for RobertsonVariant {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(Error::OutOfRange(format!(
                "Robertson variant {v}, expected 1 or 2"
            ))),
        }
    }
}

/// Product of the error-rate variances of both copies against
/// `(1/4)|<[O_A, O_B]>|^2` on `v|00> + z|01> + x|10> + y|11>`.
pub fn robertson_check(
    amps: &DoubleBellAmplitudes,
    variant: RobertsonVariant,
) -> UncertaintyReport {
    let [v, z, x, y] = amps.as_array().map(|a| a.norm_sqr());
    let [vp, zp, xp, yp] = repartition(amps, Partition::RbAc)
        .as_array()
        .map(|a| a.norm_sqr());
    let (lhs, cross) = match variant {
        RobertsonVariant::One => (
            (v + z) * (x + y) * (vp + xp) * (zp + yp),
            amps.v.conj() * amps.x + amps.z.conj() * amps.y,
        ),
        RobertsonVariant::Two => (
            (v + x) * (z + y) * (vp + zp) * (xp + yp),
            amps.v.conj() * amps.z + amps.x.conj() * amps.y,
        ),
    };
    UncertaintyReport::new(lhs, 0.25 * cross.im * cross.im)
}

/// `H[p] + H[q]` against `2 log2 N`.
pub fn entropic_check(
    p: &ChannelDistribution,
    q: &ChannelDistribution,
) -> Result<UncertaintyReport> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let h = |ch: &ChannelDistribution| {
        shannon_entropy(&ProbDist::from_weights(ch.probs().to_vec()).expect("valid channel"))
    };
    Ok(UncertaintyReport::new(
        h(p) + h(q),
        2.0 * (p.dim() as f64).log2(),
    ))
}

fn marginal_entropy(probs: &[f64], dim: usize, over_rows: bool) -> f64 {
    let marginal = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if over_rows {
                        probs[i * dim + j]
                    } else {
                        probs[j * dim + i]
                    }
                })
                .sum()
        })
        .collect();
    shannon_entropy(&ProbDist::from_weights(marginal).expect("marginal of a distribution"))
}

/// `(H[p_m] + H[q_n], H[p_n] + H[q_m])`, each against `log2 N`.
pub fn marginal_entropic_check(grid: &AmplitudeGrid) -> (UncertaintyReport, UncertaintyReport) {
    let n = grid.dim();
    let p = grid.channel();
    let q = fourier_dual(grid).channel();
    let rhs = (n as f64).log2();
    let first = marginal_entropy(p.probs(), n, true) + marginal_entropy(q.probs(), n, false);
    let second = marginal_entropy(p.probs(), n, false) + marginal_entropy(q.probs(), n, true);
    (
        UncertaintyReport::new(first, rhs),
        UncertaintyReport::new(second, rhs),
    )
}
