//! Seeded random inputs for property checks and sweeps.

use std::f64::consts::PI;

use ndarray::Array2;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::channels::ChannelDistribution;
use crate::linalg::{c, dagger, DensityMatrix, StateVector, C64};

/// Haar-distributed pure state of one `dim`-level system.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let amps: Vec<C64> = (0..dim)
        .map(|_| c(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    StateVector::normalized(vec![dim], amps).expect("gaussian vector is nonzero")
}

/// Qubit with real amplitudes, uniform on the great circle.
pub fn random_real_qubit<R: Rng + ?Sized>(rng: &mut R) -> StateVector {
    let t = rng.random::<f64>() * 2.0 * PI;
    StateVector::new(vec![2], vec![c(t.cos(), 0.0), c(t.sin(), 0.0)]).expect("unit vector")
}

/// Full-rank mixed state `G G^dagger / Tr` with Gaussian `G`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = Array2::from_shape_fn((dim, dim), |_| {
        c(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let mut rho = g.dot(&dagger(&g));
    let tr = rho.diag().sum();
    rho.mapv_inplace(|z| z / tr);
    // symmetrize away rounding
    let rho = (&rho + &dagger(&rho)).mapv(|z| z * 0.5);
    DensityMatrix::new(vec![dim], rho).expect("gram matrix is a density matrix")
}

/// Channel with exponentially distributed weights (uniform on the simplex).
pub fn random_channel<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ChannelDistribution {
    let w: Vec<f64> = (0..dim * dim)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = w.iter().sum();
    ChannelDistribution::new(dim, w.into_iter().map(|x| x / total).collect())
        .expect("normalized weights")
}

/// Complex vector with normal magnitudes and uniform phases, normalized.
pub fn random_amplitudes<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<C64> {
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let v: Vec<C64> = (0..len)
        .map(|_| {
            let mag: f64 = normal.sample(rng);
            C64::from_polar(mag.abs(), rng.random::<f64>() * 2.0 * PI)
        })
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}
