//! Qubit cloning machines built from double-Bell amplitudes.
//!
//! A machine is `v |Phi+>|Phi+> + z |Phi->|Phi-> + x |Psi+>|Psi+> + y |Psi->|Psi->`
//! on the (RA)(BC) pairing. Re-pairing the four qubits as (RB)(AC) or
//! (RC)(AB) is a fixed linear map on `(v, z, x, y)`, which yields the channels
//! of the second output and of the cloner itself.

use std::f64::consts::PI;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::channels::ChannelDistribution;
use crate::error::{Error, Result};
use crate::hcm::AmplitudeGrid;
use crate::linalg::{c, shannon_entropy, ProbDist, StateVector, C64, STRUCT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleBellAmplitudes {
    pub v: C64,
    pub z: C64,
    pub x: C64,
    pub y: C64,
}

impl DoubleBellAmplitudes {
    pub fn new(v: C64, z: C64, x: C64, y: C64) -> Result<Self> {
        let amps = Self { v, z, x, y };
        let norm = amps.norm_sqr();
        if (norm - 1.0).abs() > STRUCT_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(amps)
    }

    pub fn real(v: f64, z: f64, x: f64, y: f64) -> Result<Self> {
        Self::new(c(v, 0.0), c(z, 0.0), c(x, 0.0), c(y, 0.0))
    }

    pub fn from_array(a: [C64; 4]) -> Result<Self> {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn as_array(&self) -> [C64; 4] {
        [self.v, self.z, self.x, self.y]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|a| a.norm_sqr()).sum()
    }

    /// The grid `alpha_{0,0} = v, alpha_{0,1} = z, alpha_{1,0} = x, alpha_{1,1} = y`.
    pub fn to_grid(&self) -> AmplitudeGrid {
        AmplitudeGrid::new(2, self.as_array().to_vec()).expect("normalized amplitudes")
    }

    pub fn from_grid(grid: &AmplitudeGrid) -> Result<Self> {
        if grid.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: grid.dim(),
            });
        }
        let a = grid.amplitudes();
        Self::new(a[0], a[1], a[2], a[3])
    }

    /// Pauli channel with `p_x = |x|^2`, `p_y = |y|^2`, `p_z = |z|^2`.
    pub fn channel(&self) -> ChannelDistribution {
        ChannelDistribution::new(2, self.as_array().iter().map(|a| a.norm_sqr()).collect())
            .expect("normalized amplitudes")
    }

    pub fn max_abs_diff(&self, other: &DoubleBellAmplitudes) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Partition {
    /// (RB)(AC): amplitudes of the second output.
    RbAc,
    /// (RC)(AB): amplitudes of the third output.
    RcAb,
}

/// Sign pattern of the (RB)(AC) map, rows acting on `(v, z, x, y)`.
const RB_AC: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

/// (RC)(AB) differs by the sign of the `y` column.
const RC_AB: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, -1.0],
    [1.0, 1.0, -1.0, 1.0],
    [1.0, -1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0, -1.0],
];

pub fn repartition_matrix(partition: Partition) -> Array2<f64> {
    let signs = match partition {
        Partition::RbAc => RB_AC,
        Partition::RcAb => RC_AB,
    };
    Array2::from_shape_fn((4, 4), |(i, j)| signs[i][j] / 2.0)
}

pub fn repartition(amps: &DoubleBellAmplitudes, partition: Partition) -> DoubleBellAmplitudes {
    let u = repartition_matrix(partition);
    let a = amps.as_array();
    let mut out = [C64::new(0.0, 0.0); 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|j| a[j] * u[[i, j]]).sum();
    }
    DoubleBellAmplitudes::from_array(out).expect("orthogonal map preserves the norm")
}

/// Channels of the three outputs `(A, B, C)`.
pub fn output_channels(amps: &DoubleBellAmplitudes) -> [ChannelDistribution; 3] {
    [
        amps.channel(),
        repartition(amps, Partition::RbAc).channel(),
        repartition(amps, Partition::RcAb).channel(),
    ]
}

/// Spectral facts of the (RB)(AC) map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenReport {
    /// `|| U^2 - I ||_F`.
    pub involution_defect: f64,
    /// `|| U e_1 - e_1 ||` for `e_1 = (3,1,1,1)/sqrt12`.
    pub fixed_vector_defect: f64,
    /// `|| U e_2 + e_2 ||` for `e_2 = (-1,1,1,1)/2`.
    pub negated_vector_defect: f64,
    pub passed: bool,
}

pub fn repartition_matrix_eigencheck() -> EigenReport {
    let u = repartition_matrix(Partition::RbAc);
    let sq = u.dot(&u) - Array2::<f64>::eye(4);
    let involution_defect = sq.iter().map(|x| x * x).sum::<f64>().sqrt();
    let s12 = 12f64.sqrt();
    let e1 = ndarray::arr1(&[3.0 / s12, 1.0 / s12, 1.0 / s12, 1.0 / s12]);
    let e2 = ndarray::arr1(&[-0.5, 0.5, 0.5, 0.5]);
    let dist = |a: ndarray::Array1<f64>| a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let fixed_vector_defect = dist(u.dot(&e1) - &e1);
    let negated_vector_defect = dist(u.dot(&e2) + &e2);
    let passed = [
        involution_defect,
        fixed_vector_defect,
        negated_vector_defect,
    ]
    .iter()
    .all(|&d| d < 1e-12);
    EigenReport {
        involution_defect,
        fixed_vector_defect,
        negated_vector_defect,
        passed,
    }
}

/// A point on the saturated isotropic ellipse in `(x, x')`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsotropicFromX {
    pub x: f64,
    /// `|x'|`; real and nonnegative when the phase is zero.
    pub x_prime: f64,
    pub amps: DoubleBellAmplitudes,
}

pub fn isotropic_pcm_from_x(x: f64) -> Result<IsotropicFromX> {
    isotropic_pcm_from_x_with_phase(x, 0.0)
}

/// Amplitudes `(v e^{i phase}, x, x, x)`; a nonzero phase moves off the
/// saturated ellipse.
pub fn isotropic_pcm_from_x_with_phase(x: f64, phase: f64) -> Result<IsotropicFromX> {
    if !(0.0..=0.5).contains(&x) {
        return Err(Error::OutOfRange(format!("x = {x} outside [0, 1/2]")));
    }
    let v = C64::from_polar((1.0 - 3.0 * x * x).max(0.0).sqrt(), phase);
    let xc = c(x, 0.0);
    let amps = DoubleBellAmplitudes::new(v, xc, xc, xc)?;
    let x_prime = repartition(&amps, Partition::RbAc).x.norm();
    Ok(IsotropicFromX { x, x_prime, amps })
}

/// Isotropic machine in flat/peaked form, `(v,z,x,y) = a_hat (1,0,0,0) + (a/2)(1,1,1,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropicPcm {
    pub a: f64,
    pub b: f64,
    pub a_hat: f64,
    pub b_hat: f64,
    pub c: f64,
    pub d: f64,
}

impl IsotropicPcm {
    pub fn amps(&self) -> DoubleBellAmplitudes {
        let flat = self.a / 2.0;
        DoubleBellAmplitudes::real(self.a_hat + flat, flat, flat, flat).expect("frontier point")
    }

    pub fn fraction_a(&self) -> f64 {
        self.a * self.a
    }

    pub fn fraction_b(&self) -> f64 {
        self.b * self.b
    }
}

/// Nonnegative root `b` of `a^2 + ab + b^2 = 1`.
pub fn isotropic_pcm_ab(a: f64) -> Result<IsotropicPcm> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::OutOfRange(format!("a = {a} outside [0, 1]")));
    }
    let b = (2.0 * (1.0 - a * a) / (a + (4.0 - 3.0 * a * a).sqrt())).max(0.0);
    Ok(IsotropicPcm {
        a,
        b,
        a_hat: b,
        b_hat: a,
        c: (a + b) / 4.0,
        d: (a - b) / 4.0,
    })
}

/// A machine whose outputs A and B see the same Pauli channel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricPcmPoint {
    pub theta: f64,
    pub phi: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub v: f64,
    /// Reflected class `v = x - y + z`, where A and C share the channel instead.
    pub reflected: bool,
}

impl SymmetricPcmPoint {
    pub fn amps(&self) -> DoubleBellAmplitudes {
        DoubleBellAmplitudes::real(self.v, self.z, self.x, self.y).expect("point on the ellipsoid")
    }

    fn y_signed(&self) -> f64 {
        if self.reflected {
            -self.y
        } else {
            self.y
        }
    }

    /// `x^2 + y^2 + z^2 + xy + xz + yz - 1/2` (with `y -> -y` when reflected).
    pub fn ellipsoid_residual(&self) -> f64 {
        let (x, y, z) = (self.x, self.y_signed(), self.z);
        x * x + y * y + z * z + x * y + x * z + y * z - 0.5
    }
}

/// Point of the oblate ellipsoid at polar angle `theta` from the UCM pole and
/// azimuth `phi`.
pub fn symmetric_pcm(theta: f64, phi: f64) -> Result<SymmetricPcmPoint> {
    symmetric_pcm_variant(theta, phi, false)
}

pub fn symmetric_pcm_variant(theta: f64, phi: f64, reflected: bool) -> Result<SymmetricPcmPoint> {
    if !(0.0..=PI / 2.0).contains(&theta) {
        return Err(Error::OutOfRange(format!(
            "theta = {theta} outside [0, pi/2]"
        )));
    }
    let polar = (1.0 / 12.0f64).sqrt() * theta.cos();
    let eq = (2.0 / 3.0f64).sqrt() * theta.sin();
    let x = polar + eq * phi.cos();
    let y_e = polar + eq * (phi + 2.0 * PI / 3.0).cos();
    let z = polar + eq * (phi + 4.0 * PI / 3.0).cos();
    let y = if reflected { -y_e } else { y_e };
    let tol = 1e-12;
    if x < -tol || y < -tol || z < -tol {
        return Err(Error::OutsideOctant(format!(
            "(theta, phi) = ({theta}, {phi}) gives (x, y, z) = ({x}, {y}, {z})"
        )));
    }
    let (x, y, z) = (x.max(0.0), y.max(0.0), z.max(0.0));
    let v = if reflected { x - y + z } else { x + y + z };
    Ok(SymmetricPcmPoint {
        theta,
        phi,
        x,
        y,
        z,
        v,
        reflected,
    })
}

/// `(sqrt3/2, 1/sqrt12, 1/sqrt12, 1/sqrt12)`.
pub fn ucm_qubit() -> DoubleBellAmplitudes {
    let t = (1.0 / 12.0f64).sqrt();
    DoubleBellAmplitudes::real(3f64.sqrt() / 2.0, t, t, t).expect("normalized")
}

/// Joint entropy of the two outputs, `S(AB) = S(RC)`, in bits.
pub fn joint_output_entropy(amps: &DoubleBellAmplitudes) -> f64 {
    let third = repartition(amps, Partition::RcAb);
    let w = third.as_array().iter().map(|a| a.norm_sqr()).collect();
    shannon_entropy(&ProbDist::from_weights(w).expect("normalized amplitudes"))
}

/// Isometry X -> (A, B, C) of the universal cloner, as an 8 x 2 matrix.
pub fn ucm_isometry() -> Array2<C64> {
    let s2 = (2.0 / 3.0f64).sqrt();
    let s1 = (1.0 / 3.0f64).sqrt() * 0.5f64.sqrt();
    let mut v = Array2::zeros((8, 2));
    // index = a*4 + b*2 + c
    // |0> -> sqrt(2/3)|00>|0> + sqrt(1/3)|Psi+>|1>
    v[[0, 0]] = c(s2, 0.0);
    v[[3, 0]] = c(s1, 0.0);
    v[[5, 0]] = c(s1, 0.0);
    // |1> -> sqrt(2/3)|11>|1> + sqrt(1/3)|Psi+>|0>
    v[[7, 1]] = c(s2, 0.0);
    v[[2, 1]] = c(s1, 0.0);
    v[[4, 1]] = c(s1, 0.0);
    v
}

/// Universal cloner acting on `psi` with both ancillas in `|0>`; result over (A, B, C).
pub fn ucm_unitary_apply(psi: &StateVector) -> Result<StateVector> {
    if psi.dims() != [2] {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: psi.total_dim(),
        });
    }
    StateVector::new(vec![2, 2, 2], ucm_isometry().dot(psi.amps()).to_vec())
}

/// The cloner applied to the X half of `|Phi+>_{RX}`; result over (R, A, B, C).
pub fn ucm_on_reference_pair() -> StateVector {
    let iso = ucm_isometry();
    let s = 0.5f64.sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); 16];
    for r in 0..2 {
        for out in 0..8 {
            amps[r * 8 + out] = iso[[out, r]] * s;
        }
    }
    StateVector::new(vec![2, 2, 2, 2], amps).expect("isometry preserves the norm")
}

/// Machine with all three outputs on the same channel: `(x + z, z, x, 0)` with
/// `x^2 + xz + z^2 = 1/2`.
pub fn triplicator(x: f64) -> Result<DoubleBellAmplitudes> {
    let max = 0.5f64.sqrt();
    if !(0.0..=max + 1e-15).contains(&x) {
        return Err(Error::OutOfRange(format!("x = {x} outside [0, 1/sqrt2]")));
    }
    let z = ((1.0 - 2.0 * x * x) / (x + (2.0 - 3.0 * x * x).max(0.0).sqrt())).max(0.0);
    DoubleBellAmplitudes::real(x + z, z, x, 0.0)
}

/// `x = z = 1/sqrt6`, three outputs on the 2-Pauli channel of probability 1/3.
pub fn best_triplicator() -> DoubleBellAmplitudes {
    triplicator(1.0 / 6f64.sqrt()).expect("in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityRegion {
    /// Strictly inside the ellipsoid: linear interpolation bound applies.
    Interior,
    /// On the ellipsoid: the bound is zero.
    OnSurface,
    /// Outside the ellipsoid: capacity vanishes.
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityBound {
    pub bound: f64,
    /// `x^2 + y^2 + z^2 + xy + xz + yz` with `x = sqrt(p_x)` etc.
    pub quadratic_form: f64,
    pub region: CapacityRegion,
}

/// Upper bound `max(0, 1 - 2(x^2 + y^2 + z^2 + xy + xz + yz))` on the quantum
/// capacity of a Pauli channel.
pub fn capacity_upper_bound(p_x: f64, p_y: f64, p_z: f64) -> Result<CapacityBound> {
    // validation shared with the channel constructor
    ChannelDistribution::pauli(p_x, p_y, p_z)?;
    let (x, y, z) = (p_x.sqrt(), p_y.sqrt(), p_z.sqrt());
    let q = x * x + y * y + z * z + x * y + x * z + y * z;
    let region = if (q - 0.5).abs() <= STRUCT_TOL {
        CapacityRegion::OnSurface
    } else if q > 0.5 {
        CapacityRegion::Outside
    } else {
        CapacityRegion::Interior
    };
    let bound = match region {
        CapacityRegion::Interior => 1.0 - 2.0 * q,
        _ => 0.0,
    };
    Ok(CapacityBound {
        bound,
        quadratic_form: q,
        region,
    })
}
