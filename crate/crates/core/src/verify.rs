//! Seeded verification suites comparing closed forms with brute-force oracles.
//!
//! Each sample draws from its own ChaCha stream keyed by `(seed, suite, index)`,
//! so results do not depend on how rayon schedules the work.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::channels::{depolarizing_fraction, ChannelDistribution};
use crate::error::{Error, Result};
use crate::hcm::{
    build_four_partite, dual_with_sign, frontier_form, isotropic_hcm, simulated_decompositions,
    symmetric_point, AmplitudeGrid, MAX_SIM_DIM,
};
use crate::me_states::{me_decompose, verify_resolution_identity, MeDecomposition};
use crate::pcm::{repartition, DoubleBellAmplitudes, Partition};
use crate::sampling::random_amplitudes;
use crate::uncertainty::{
    entropic_check, marginal_entropic_check, robertson_check, RobertsonVariant,
};

pub const DEFAULT_SEED: u64 = 20_010_417;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Corrupt the Fourier transform used by the oracle suites.
    #[serde(skip)]
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            dim: 3,
            samples: 100,
            seed: DEFAULT_SEED,
            tolerance: 1e-9,
            inject_fault: false,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_SIM_DIM).contains(&self.dim) {
            return Err(Error::InvalidDims(format!(
                "verify needs 2 <= dim <= {MAX_SIM_DIM}, got {}",
                self.dim
            )));
        }
        if self.samples == 0 {
            return Err(Error::OutOfRange("samples must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::OutOfRange(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// First failing case in sample order.
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }

    pub fn first_counterexample(&self) -> Option<(&'static str, &Value)> {
        self.suites
            .iter()
            .find_map(|s| s.counterexample.as_ref().map(|c| (s.name, c)))
    }
}

type Check = std::result::Result<(), Value>;

pub(crate) fn sample_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream << 32) | index);
    rng
}

fn run_suite<F>(name: &'static str, count: usize, check: F) -> SuiteResult
where
    F: Fn(usize) -> Check + Sync + Send,
{
    let outcomes: Vec<Check> = (0..count).into_par_iter().map(check).collect();
    let failed = outcomes.iter().filter(|o| o.is_err()).count();
    SuiteResult {
        name,
        passed: count - failed,
        failed,
        counterexample: outcomes.into_iter().find_map(|o| o.err()),
    }
}

fn max_weight_gap(expected: &ChannelDistribution, sim: &MeDecomposition) -> f64 {
    expected
        .probs()
        .iter()
        .zip(sim.weights().weights())
        .map(|(a, b)| (a - b).abs())
        .fold(sim.residual(), f64::max)
}

// independent of the sampled dimension
fn resolution_suite() -> SuiteResult {
    let dims: Vec<usize> = (2..=8).collect();
    run_suite("resolution_identity", dims.len(), |i| {
        let d = dims[i];
        match verify_resolution_identity(d) {
            Ok(r) if r < 1e-12 => Ok(()),
            Ok(r) => Err(json!({ "dim": d, "residual": r })),
            Err(e) => Err(json!({ "dim": d, "error": e.to_string() })),
        }
    })
}

fn fourier_suite(cfg: &VerifyConfig) -> SuiteResult {
    let cfg = *cfg;
    run_suite("fourier_oracle", cfg.samples, move |i| {
        let mut rng = sample_rng(cfg.seed, 1, i as u64);
        let grid = AmplitudeGrid::random(cfg.dim, &mut rng).expect("dim validated");
        let expected = dual_with_sign(&grid, cfg.inject_fault).channel();
        let sim = simulated_decompositions(&grid).map_err(|e| json!({ "error": e.to_string() }))?;
        let gap_b = max_weight_gap(&expected, &sim[1]);
        let gap_a = max_weight_gap(&grid.channel(), &sim[0]);
        if gap_a.max(gap_b) > cfg.tolerance {
            return Err(json!({
                "sample": i,
                "dim": cfg.dim,
                "grid": grid.to_json(),
                "deviation_a": gap_a,
                "deviation_b": gap_b,
            }));
        }
        Ok(())
    })
}

fn repartition_suite(cfg: &VerifyConfig) -> SuiteResult {
    let cfg = *cfg;
    run_suite("repartition_oracle", cfg.samples, move |i| {
        let mut rng = sample_rng(cfg.seed, 2, i as u64);
        let a = random_amplitudes(4, &mut rng);
        let amps = DoubleBellAmplitudes::new(a[0], a[1], a[2], a[3]).expect("normalized");
        let grid = amps.to_grid();
        let state = build_four_partite(&grid).expect("qubit grid");
        let decompose = |keep: usize| {
            state
                .partial_trace(&[0, keep])
                .and_then(|r| me_decompose(&r))
                .map_err(|e| json!({ "error": e.to_string() }))
        };
        let sim_b = decompose(2)?;
        let sim_c = decompose(3)?;
        let mut rb = repartition(&amps, Partition::RbAc);
        if cfg.inject_fault {
            // same corruption as the Fourier suite, through the grid route
            rb = DoubleBellAmplitudes::from_grid(&dual_with_sign(&grid, true)).expect("unitary");
        }
        let rc = repartition(&amps, Partition::RcAb);
        let gap_b = max_weight_gap(&rb.channel(), &sim_b);
        let gap_c = max_weight_gap(&rc.channel(), &sim_c);
        let twice = repartition(&repartition(&amps, Partition::RbAc), Partition::RbAc);
        let involution = twice.max_abs_diff(&amps);
        if gap_b.max(gap_c) > cfg.tolerance || involution > 1e-12 {
            return Err(json!({
                "sample": i,
                "amplitudes": grid.to_json(),
                "deviation_b": gap_b,
                "deviation_c": gap_c,
                "involution_defect": involution,
            }));
        }
        Ok(())
    })
}

fn frontier_suite(cfg: &VerifyConfig) -> SuiteResult {
    let cfg = *cfg;
    let count = cfg.samples + 1;
    run_suite("frontier", count, move |i| {
        let point = if i == cfg.samples {
            symmetric_point(cfg.dim).and_then(|p| isotropic_hcm(p.a, cfg.dim))
        } else {
            let mut rng = sample_rng(cfg.seed, 3, i as u64);
            isotropic_hcm(rand::Rng::random::<f64>(&mut rng), cfg.dim)
        }
        .map_err(|e| json!({ "error": e.to_string() }))?;
        let grid = point.grid();
        let sim = simulated_decompositions(&grid).map_err(|e| json!({ "error": e.to_string() }))?;
        let dual = dual_with_sign(&grid, cfg.inject_fault).channel();
        let fraction = |ch: &ChannelDistribution| depolarizing_fraction(ch).map(|f| f.fraction);
        let sim_channel = |d: &MeDecomposition| {
            ChannelDistribution::new(cfg.dim, d.weights().weights().to_vec()).expect("weights")
        };
        let result = (|| -> Result<(f64, f64, f64)> {
            let pi_a = fraction(&sim_channel(&sim[0]))?;
            let pi_b = fraction(&sim_channel(&sim[1]))?;
            Ok((pi_a, pi_b, max_weight_gap(&dual, &sim[1])))
        })();
        let (pi_a, pi_b, gap) =
            result.map_err(|e| json!({ "a": point.a, "error": e.to_string() }))?;
        let form = frontier_form(cfg.dim, pi_a.sqrt(), pi_b.sqrt());
        let bad = (form - 1.0).abs() > cfg.tolerance
            || (pi_a - point.fraction_a()).abs() > cfg.tolerance
            || (pi_b - point.fraction_b()).abs() > cfg.tolerance
            || gap > cfg.tolerance;
        if bad {
            return Err(json!({
                "dim": cfg.dim,
                "a": point.a,
                "b": point.b,
                "pi_a": pi_a,
                "pi_b": pi_b,
                "frontier_form": form,
                "deviation_b": gap,
            }));
        }
        Ok(())
    })
}

fn uncertainty_suite(cfg: &VerifyConfig) -> SuiteResult {
    let cfg = *cfg;
    run_suite("uncertainty", cfg.samples, move |i| {
        let mut rng = sample_rng(cfg.seed, 4, i as u64);
        let grid = AmplitudeGrid::random(cfg.dim, &mut rng).expect("dim validated");
        let q = dual_with_sign(&grid, cfg.inject_fault).channel();
        let ent = entropic_check(&grid.channel(), &q).expect("same dimension");
        let (m1, m2) = marginal_entropic_check(&grid);
        let a = random_amplitudes(4, &mut rng);
        let amps = DoubleBellAmplitudes::new(a[0], a[1], a[2], a[3]).expect("normalized");
        let r1 = robertson_check(&amps, RobertsonVariant::One);
        let r2 = robertson_check(&amps, RobertsonVariant::Two);
        if [ent, m1, m2, r1, r2].iter().all(|r| r.satisfied) {
            return Ok(());
        }
        Err(json!({
            "sample": i,
            "grid": grid.to_json(),
            "entropic": ent,
            "marginal": [m1, m2],
            "robertson": [r1, r2],
        }))
    })
}

pub fn run_verification(cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    Ok(VerifyReport {
        config: *cfg,
        suites: vec![
            resolution_suite(),
            fourier_suite(cfg),
            repartition_suite(cfg),
            frontier_suite(cfg),
            uncertainty_suite(cfg),
        ],
    })
}
