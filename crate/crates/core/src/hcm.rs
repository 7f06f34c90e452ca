//! N-dimensional Heisenberg cloning machines.
//!
//! A machine is an amplitude grid `alpha_{m,n}` defining the pure state
//! `sum alpha_{m,n} |psi_{m,n}>_{RA} |psi_{m,-n}>_{BC}` over (R, A, B, C).
//! Output A emerges from the channel `|alpha|^2`, output B from `|beta|^2`
//! where `beta` is the Fourier dual of `alpha`. Every analytic channel here
//! can be cross-checked against partial traces of the explicit state.

use std::f64::consts::PI;

use ndarray::Array1;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::channels::ChannelDistribution;
use crate::error::{Error, Result};
use crate::linalg::{c, StateVector, C64, ORACLE_TOL, STRUCT_TOL};
use crate::me_states::{me_decompose, root_of_unity, MeDecomposition};

/// Largest N for which the N^4-dimensional state is built explicitly.
pub const MAX_SIM_DIM: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeGrid {
    dim: usize,
    alpha: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct GridEntry {
    m: usize,
    n: usize,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct GridFile {
    dim: usize,
    alpha: Vec<GridEntry>,
}

impl AmplitudeGrid {
    /// `alpha` is row-major over `(m, n)`.
    pub fn new(dim: usize, alpha: Vec<C64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDims(format!("dimension {dim} < 2")));
        }
        if alpha.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: alpha.len(),
            });
        }
        let norm: f64 = alpha.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > STRUCT_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { dim, alpha })
    }

    pub fn normalized(dim: usize, alpha: Vec<C64>) -> Result<Self> {
        let norm: f64 = alpha.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Self::new(dim, alpha.into_iter().map(|z| z / norm).collect())
    }

    pub fn delta(dim: usize, m: usize, n: usize) -> Result<Self> {
        if m >= dim || n >= dim {
            return Err(Error::OutOfRange(format!("({m},{n}) outside 0..{dim}")));
        }
        let mut alpha = vec![C64::new(0.0, 0.0); dim * dim];
        alpha[m * dim + n] = C64::new(1.0, 0.0);
        Self::new(dim, alpha)
    }

    /// Generic machine: normally distributed magnitudes with independent
    /// uniform phases, normalized.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        let alpha = (0..dim * dim)
            .map(|_| {
                let mag: f64 = normal.sample(rng);
                let phase = rng.random::<f64>() * 2.0 * PI;
                C64::from_polar(mag.abs(), phase)
            })
            .collect();
        Self::normalized(dim, alpha)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.alpha
    }

    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.alpha[m * self.dim + n]
    }

    /// The channel `|alpha_{m,n}|^2`.
    pub fn channel(&self) -> ChannelDistribution {
        ChannelDistribution::new(self.dim, self.alpha.iter().map(|z| z.norm_sqr()).collect())
            .expect("normalized grid yields a distribution")
    }

    /// Whether both outputs see the same channel, `|alpha|^2 = |beta|^2`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let dual = fourier_dual(self);
        self.alpha
            .iter()
            .zip(&dual.alpha)
            .all(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs() <= tol)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let alpha = self
            .alpha
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm_sqr() > 0.0)
            .map(|(i, z)| GridEntry {
                m: i / self.dim,
                n: i % self.dim,
                re: z.re,
                im: z.im,
            })
            .collect();
        serde_json::to_value(GridFile {
            dim: self.dim,
            alpha,
        })
        .expect("grid serializes")
    }

    /// Reads `{"dim": N, "alpha": [{"m", "n", "re", "im"}]}`; missing entries are zero.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GridFile = serde_json::from_str(text)?;
        let dim = file.dim;
        if dim < 2 {
            return Err(Error::InvalidDims(format!("dimension {dim} < 2")));
        }
        let mut alpha = vec![C64::new(0.0, 0.0); dim * dim];
        for e in file.alpha {
            if e.m >= dim || e.n >= dim {
                return Err(Error::Malformed(format!(
                    "entry ({},{}) outside a {dim}x{dim} grid",
                    e.m, e.n
                )));
            }
            alpha[e.m * dim + e.n] += c(e.re, e.im);
        }
        Self::new(dim, alpha)
    }
}

/// `beta_{m,n} = (1/N) sum_{x,y} e^{2 pi i (n x - m y)/N} alpha_{x,y}`.
pub fn fourier_dual(grid: &AmplitudeGrid) -> AmplitudeGrid {
    dual_with_sign(grid, false)
}

/// With `flip` the sign of the `m y` phase term is inverted; used only to
/// check that the verification suites catch a corrupted transform.
pub(crate) fn dual_with_sign(grid: &AmplitudeGrid, flip: bool) -> AmplitudeGrid {
    let d = grid.dim;
    let mut beta = vec![C64::new(0.0, 0.0); d * d];
    for m in 0..d {
        for n in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for x in 0..d {
                for y in 0..d {
                    let my = if flip { m * y } else { (d - m % d) * y };
                    acc += root_of_unity(n * x + my, d) * grid.alpha[x * d + y];
                }
            }
            beta[m * d + n] = acc / d as f64;
        }
    }
    AmplitudeGrid {
        dim: d,
        alpha: beta,
    }
}

fn check_sim_dim(dim: usize) -> Result<()> {
    if dim > MAX_SIM_DIM {
        return Err(Error::DimensionCap {
            dim,
            cap: MAX_SIM_DIM,
        });
    }
    Ok(())
}

/// The explicit N^4 state over (R, A, B, C).
pub fn build_four_partite(grid: &AmplitudeGrid) -> Result<StateVector> {
    let d = grid.dim;
    check_sim_dim(d)?;
    let mut amps = Array1::<C64>::zeros(d * d * d * d);
    // |psi_{m,n}>_{RA} = sum_r w^{rn} |r, r+m> / sqrt N
    // |psi_{m,-n}>_{BC} = sum_b w^{-bn} |b, b+m> / sqrt N
    for m in 0..d {
        for n in 0..d {
            let a = grid.alpha[m * d + n];
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..d {
                for b in 0..d {
                    let phase = root_of_unity(r * n + b * ((d - n) % d), d);
                    let idx = ((r * d + (r + m) % d) * d + b) * d + (b + m) % d;
                    amps[idx] += a * phase / d as f64;
                }
            }
        }
    }
    let state = StateVector::from_parts(vec![d; 4], amps);
    debug_assert!((state.norm_sqr() - 1.0).abs() < 1e-9);
    Ok(state)
}

/// Channels of the three outputs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputChannels {
    pub a: ChannelDistribution,
    pub b: ChannelDistribution,
    /// Third output (the cloner itself); may fail to be an ME mixture for N > 2.
    pub c: MeDecomposition,
}

/// Channels of A and B from the amplitudes alone (no dimension cap).
pub fn analytic_channels(grid: &AmplitudeGrid) -> (ChannelDistribution, ChannelDistribution) {
    (grid.channel(), fourier_dual(grid).channel())
}

/// ME decompositions of the brute-force reduced states `rho_RA`, `rho_RB`, `rho_RC`.
pub fn simulated_decompositions(grid: &AmplitudeGrid) -> Result<[MeDecomposition; 3]> {
    let state = build_four_partite(grid)?;
    Ok([
        me_decompose(&state.partial_trace(&[0, 1])?)?,
        me_decompose(&state.partial_trace(&[0, 2])?)?,
        me_decompose(&state.partial_trace(&[0, 3])?)?,
    ])
}

fn compare(what: &str, analytic: &ChannelDistribution, sim: &MeDecomposition) -> Result<()> {
    let deviation = analytic
        .probs()
        .iter()
        .zip(sim.weights().weights())
        .map(|(a, b)| (a - b).abs())
        .fold(sim.residual(), f64::max);
    if deviation > ORACLE_TOL {
        return Err(Error::OracleMismatch {
            what: what.to_string(),
            deviation,
        });
    }
    Ok(())
}

/// Output channels, with A and B checked against the brute-force partial traces.
pub fn output_channels(grid: &AmplitudeGrid) -> Result<OutputChannels> {
    let (a, b) = analytic_channels(grid);
    let [sim_a, sim_b, sim_c] = simulated_decompositions(grid)?;
    compare("output A", &a, &sim_a)?;
    compare("output B", &b, &sim_b)?;
    Ok(OutputChannels { a, b, c: sim_c })
}

/// Isotropic machine `alpha = a_hat P + a F` with `P` the delta at (0,0) and
/// `F` the flat grid `1/N`; output A is depolarized with fraction `a^2`,
/// output B with fraction `b^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropicHcm {
    pub dim: usize,
    pub a: f64,
    pub b: f64,
    pub a_hat: f64,
    pub b_hat: f64,
}

impl IsotropicHcm {
    pub fn grid(&self) -> AmplitudeGrid {
        flat_plus_peak(self.dim, self.a_hat, self.a)
    }

    pub fn fraction_a(&self) -> f64 {
        self.a * self.a
    }

    pub fn fraction_b(&self) -> f64 {
        self.b * self.b
    }

    /// `a^2 + (2/N) a b + b^2`, equal to 1 on the frontier.
    pub fn frontier_value(&self) -> f64 {
        frontier_form(self.dim, self.a, self.b)
    }
}

pub fn frontier_form(dim: usize, a: f64, b: f64) -> f64 {
    a * a + 2.0 / dim as f64 * a * b + b * b
}

fn flat_plus_peak(dim: usize, peak: f64, flat: f64) -> AmplitudeGrid {
    let mut alpha = vec![c(flat / dim as f64, 0.0); dim * dim];
    alpha[0] += peak;
    AmplitudeGrid::normalized(dim, alpha).expect("flat plus peak is nonzero")
}

/// Nonnegative root `b` of `a^2 + (2/N) a b + b^2 = 1`.
pub fn isotropic_hcm(a: f64, dim: usize) -> Result<IsotropicHcm> {
    if dim < 2 {
        return Err(Error::InvalidDims(format!("dimension {dim} < 2")));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::OutOfRange(format!("a = {a} outside [0, 1]")));
    }
    let nf = dim as f64;
    let disc = 1.0 - a * a * (1.0 - 1.0 / (nf * nf));
    // rationalized root, exact zero at a = 1
    let b = ((1.0 - a * a) / (a / nf + disc.sqrt())).max(0.0);
    Ok(IsotropicHcm {
        dim,
        a,
        b,
        a_hat: b,
        b_hat: a,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub a: f64,
    pub b: f64,
    pub pi_a: f64,
    pub pi_b: f64,
}

impl From<IsotropicHcm> for FrontierPoint {
    fn from(m: IsotropicHcm) -> Self {
        Self {
            a: m.a,
            b: m.b,
            pi_a: m.fraction_a(),
            pi_b: m.fraction_b(),
        }
    }
}

/// `samples` points on the saturated no-cloning curve, uniform in `a` over [0, 1].
pub fn frontier(dim: usize, samples: usize) -> Result<Vec<FrontierPoint>> {
    if samples < 2 {
        return Err(Error::OutOfRange(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    (0..samples)
        .map(|i| {
            let a = if i + 1 == samples {
                1.0
            } else {
                i as f64 / (samples - 1) as f64
            };
            isotropic_hcm(a, dim).map(FrontierPoint::from)
        })
        .collect()
}

/// The `a = b` point of the frontier, `pi = N / (2(N+1))`.
pub fn symmetric_point(dim: usize) -> Result<FrontierPoint> {
    if dim < 2 {
        return Err(Error::InvalidDims(format!("dimension {dim} < 2")));
    }
    let nf = dim as f64;
    let a = (nf / (2.0 * (nf + 1.0))).sqrt();
    Ok(FrontierPoint {
        a,
        b: a,
        pi_a: a * a,
        pi_b: a * a,
    })
}

/// Semi-minor and semi-major axes of the forbidden ellipse in the (a, b) plane.
pub fn frontier_axes(dim: usize) -> (f64, f64) {
    let nf = dim as f64;
    ((nf / (nf + 1.0)).sqrt(), (nf / (nf - 1.0)).sqrt())
}

/// Scaling factor `s = (N+2) / (2(N+1))` of both outputs of the N-dimensional UCM.
pub fn ucm_scaling(dim: usize) -> f64 {
    let nf = dim as f64;
    (nf + 2.0) / (2.0 * (nf + 1.0))
}

/// Symmetric isotropic machine with `a = a_hat = sqrt(N / (2(N+1)))`.
pub fn ucm_ndim(dim: usize) -> Result<AmplitudeGrid> {
    let p = symmetric_point(dim)?;
    Ok(flat_plus_peak(dim, p.a, p.a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{channel_fidelity, depolarizing_fraction};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dual_of_delta_is_flat() {
        for d in 2..=5 {
            let beta = fourier_dual(&AmplitudeGrid::delta(d, 0, 0).unwrap());
            for z in beta.amplitudes() {
                assert_abs_diff_eq!(z.norm_sqr(), 1.0 / (d * d) as f64, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn qubit_dual_matches_signed_hadamard_form() {
        // (v, z, x, y) = (1, 0, 0, 0) -> (1/2)(1, 1, 1, 1)
        let beta = fourier_dual(&AmplitudeGrid::delta(2, 0, 0).unwrap());
        for z in beta.amplitudes() {
            assert!((z - c(0.5, 0.0)).norm() < 1e-15);
        }
        // general: beta_{m,n} = (1/2) sum (-1)^{n x + m y} alpha_{x,y}
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = AmplitudeGrid::random(2, &mut rng).unwrap();
        let beta = fourier_dual(&g);
        for m in 0..2 {
            for n in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for x in 0..2 {
                    for y in 0..2 {
                        let s = if (n * x + m * y) % 2 == 0 { 1.0 } else { -1.0 };
                        acc += g.get(x, y) * s;
                    }
                }
                assert!((beta.get(m, n) - acc / 2.0).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn dual_of_single_component() {
        // alpha = delta_{(1,0)}, N = 3 -> beta_{m,n} = e^{2 pi i n / 3} / 3
        let beta = fourier_dual(&AmplitudeGrid::delta(3, 1, 0).unwrap());
        for m in 0..3 {
            for n in 0..3 {
                let expected = C64::from_polar(1.0 / 3.0, 2.0 * PI * n as f64 / 3.0);
                assert!((beta.get(m, n) - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn delta_grid_builds_double_me_product() {
        let s = build_four_partite(&AmplitudeGrid::delta(2, 0, 0).unwrap()).unwrap();
        let phi = crate::me_states::me_state(crate::me_states::MeIndex::new(0, 0, 2).unwrap());
        let expected = phi.tensor(&phi);
        assert!((s.inner(&expected).unwrap().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ucm_state_has_closed_form() {
        // (2N(N+1))^{-1/2} sum_{j,k} (|j j k k> + |j k j k>)
        for d in 2..=4 {
            let s = build_four_partite(&ucm_ndim(d).unwrap()).unwrap();
            let norm = 1.0 / ((2 * d * (d + 1)) as f64).sqrt();
            let mut expected = vec![C64::new(0.0, 0.0); d * d * d * d];
            for j in 0..d {
                for k in 0..d {
                    expected[((j * d + j) * d + k) * d + k] += norm;
                    expected[((j * d + k) * d + j) * d + k] += norm;
                }
            }
            for (x, y) in s.to_vec().iter().zip(&expected) {
                assert!((x - y).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn qubit_ucm_outputs_are_quarter_depolarizing() {
        let out = output_channels(&ucm_ndim(2).unwrap()).unwrap();
        for ch in [&out.a, &out.b] {
            for (a, b) in ch
                .probs()
                .iter()
                .zip([0.75, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0])
            {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn qutrit_delta_outputs() {
        let out = output_channels(&AmplitudeGrid::delta(3, 0, 0).unwrap()).unwrap();
        assert_abs_diff_eq!(out.a.prob(0, 0), 1.0, epsilon = 1e-15);
        for p in out.b.probs() {
            assert_abs_diff_eq!(*p, 1.0 / 9.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn output_channels_respects_cap() {
        let g = AmplitudeGrid::delta(7, 0, 0).unwrap();
        assert!(matches!(
            output_channels(&g),
            Err(Error::DimensionCap { dim: 7, .. })
        ));
        // analytic route has no cap
        let (a, b) = analytic_channels(&g);
        assert_eq!(a.prob(0, 0), 1.0);
        assert_abs_diff_eq!(b.prob(3, 4), 1.0 / 49.0, epsilon = 1e-15);
    }

    #[test]
    fn isotropic_examples() {
        let m = isotropic_hcm(1.0 / 3f64.sqrt(), 2).unwrap();
        assert_abs_diff_eq!(m.b, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        for d in 2..=10 {
            let sym = symmetric_point(d).unwrap();
            let m = isotropic_hcm(sym.a, d).unwrap();
            assert_abs_diff_eq!(m.b, sym.a, epsilon = 1e-14);
            let end = isotropic_hcm(1.0, d).unwrap();
            assert_abs_diff_eq!(end.b, 0.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(symmetric_point(3).unwrap().pi_a, 3.0 / 8.0, epsilon = 1e-15);
        assert!(isotropic_hcm(1.2, 3).is_err());
        assert!(isotropic_hcm(-0.1, 3).is_err());
    }

    #[test]
    fn isotropic_outputs_from_simulation() {
        for d in 2..=4 {
            let m = isotropic_hcm(0.4, d).unwrap();
            let out = output_channels(&m.grid()).unwrap();
            let fa = depolarizing_fraction(&out.a).unwrap().fraction;
            let fb = depolarizing_fraction(&out.b).unwrap().fraction;
            assert_abs_diff_eq!(fa, m.fraction_a(), epsilon = 1e-12);
            assert_abs_diff_eq!(fb, m.fraction_b(), epsilon = 1e-12);
        }
    }

    #[test]
    fn frontier_examples() {
        for d in 2..=6 {
            let pts = frontier(d, 11).unwrap();
            assert_eq!((pts[0].a, pts[0].b), (0.0, 1.0));
            assert_eq!(pts[10].a, 1.0);
            assert_abs_diff_eq!(pts[10].b, 0.0, epsilon = 1e-15);
            for w in pts.windows(2) {
                assert!(w[1].b < w[0].b);
            }
            for p in &pts {
                assert_abs_diff_eq!(frontier_form(d, p.a, p.b), 1.0, epsilon = 1e-12);
            }
        }
        let two = frontier(3, 2).unwrap();
        assert_eq!(two.len(), 2);
        assert!(frontier(3, 1).is_err());

        let mid = symmetric_point(2).unwrap();
        assert_abs_diff_eq!(mid.a, 1.0 / 3f64.sqrt(), epsilon = 1e-15);

        // large-N proxy: the relation approaches the unit circle
        let big = symmetric_point(1000).unwrap();
        assert_abs_diff_eq!(big.a * big.a + big.b * big.b, 1.0, epsilon = 1e-2);
    }

    #[test]
    fn frontier_axes_match_quadratic_form() {
        // along (1,1): 2 t^2 (1 + 1/N) = 1; along (1,-1): 2 t^2 (1 - 1/N) = 1
        for d in 2..=8 {
            let (minor, major) = frontier_axes(d);
            let t = minor / 2f64.sqrt();
            assert_abs_diff_eq!(frontier_form(d, t, t), 1.0, epsilon = 1e-14);
            let u = major / 2f64.sqrt();
            assert_abs_diff_eq!(frontier_form(d, u, -u), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn ucm_scaling_and_fidelity() {
        assert_abs_diff_eq!(ucm_scaling(2), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ucm_scaling(3), 5.0 / 8.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ucm_scaling(10), 6.0 / 11.0, epsilon = 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2, 3] {
            let out = output_channels(&ucm_ndim(d).unwrap()).unwrap();
            let s = ucm_scaling(d);
            for _ in 0..10 {
                let psi = crate::sampling::random_state(d, &mut rng);
                let f = channel_fidelity(&out.a, &psi).unwrap();
                assert_abs_diff_eq!(f, s + (1.0 - s) / d as f64, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn symmetry_criterion() {
        for d in 2..=5 {
            assert!(ucm_ndim(d).unwrap().is_symmetric(1e-12));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(!AmplitudeGrid::random(3, &mut rng)
            .unwrap()
            .is_symmetric(1e-6));
    }

    #[test]
    fn grid_json() {
        let g = AmplitudeGrid::from_json(
            r#"{"dim": 3, "alpha": [{"m": 0, "n": 0, "re": 1.0, "im": 0.0}]}"#,
        )
        .unwrap();
        assert_eq!(g, AmplitudeGrid::delta(3, 0, 0).unwrap());
        let round = AmplitudeGrid::from_json(&ucm_ndim(3).unwrap().to_json().to_string()).unwrap();
        for (a, b) in round
            .amplitudes()
            .iter()
            .zip(ucm_ndim(3).unwrap().amplitudes())
        {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(matches!(
            AmplitudeGrid::from_json(r#"{"dim": 2, "alpha": [{"m": 0, "n": 0, "re": 0.5}]}"#),
            Err(Error::NotNormalized(_))
        ));
        assert!(
            AmplitudeGrid::from_json(r#"{"dim": 2, "alpha": [{"m": 2, "n": 0, "re": 1.0}]}"#)
                .is_err()
        );
    }
}
