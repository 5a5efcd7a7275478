//! Random settings, Monte-Carlo estimates of the mean squared correlation
//! under uniformly random local measurements, finite-shot simulation, and
//! the single-random-setting entanglement witness with its calibration.
//!
//! All randomness flows through counter-based ChaCha streams derived from
//! `(master seed, trial index)`, so trials can run in parallel while every
//! report stays bit-identical for a fixed seed regardless of scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, StandardNormal};
use rayon::prelude::*;

use crate::basis::{gell_mann_basis, haar_unitary_from_rng};
use crate::correlations::{
    correlation_function_unchecked, expect_ops_pure, length_of_correlations, row_major,
    trace_ops_mixed,
};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::state::{tensor_product, DensityMatrix, PureState, State, SystemShape};

/// Stream offset separating calibration draws from detection draws.
const CALIBRATION_STREAM_BASE: u64 = 1 << 40;

/// Independent stream for trial `trial` of master seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Stream reserved for one-off setup draws.
pub fn master_rng(seed: u64) -> ChaCha8Rng {
    trial_rng(seed, u64::MAX)
}

/// Uniform point on the unit sphere (normalized standard normals).
pub fn sample_direction<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = [
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        ];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-12 {
            return [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
}

/// Haar-distributed d×d unitary (Ginibre + QR with phase correction).
pub fn sample_haar_unitary<R: Rng>(d: usize, rng: &mut R) -> CMat {
    haar_unitary_from_rng(d, rng)
}

/// Haar-random pure state: normalized complex Gaussian amplitudes.
pub fn random_pure_state<R: Rng>(shape: &SystemShape, rng: &mut R) -> PureState {
    let amps: Vec<Complex64> = (0..shape.total_dim())
        .map(|_| {
            Complex64::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            )
        })
        .collect();
    PureState::normalized(shape.clone(), amps).expect("gaussian vector is normalizable")
}

/// Product of independent Haar-random local kets.
pub fn random_product_state<R: Rng>(shape: &SystemShape, rng: &mut R) -> PureState {
    let locals: Vec<PureState> = shape
        .dims()
        .iter()
        .map(|&d| random_pure_state(&SystemShape::new(vec![d]).unwrap(), rng))
        .collect();
    tensor_product(&locals).expect("non-empty product")
}

/// Random density matrix from the Hilbert-Schmidt (Ginibre) ensemble.
pub fn random_density_matrix<R: Rng>(shape: &SystemShape, rng: &mut R) -> DensityMatrix {
    let n = shape.total_dim();
    let g = CMat::from_fn(n, n, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    let mut rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho.apply(|v| *v /= Complex64::new(tr, 0.0));
    DensityMatrix::new(shape.clone(), rho).expect("ginibre outer product is a valid state")
}

/// Measurement-resource count per setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Finite(u64),
    /// Exact correlation functions (the K → ∞ limit, represented exactly).
    Infinite,
}

impl std::fmt::Display for Shots {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Shots::Finite(k) => write!(f, "{k}"),
            Shots::Infinite => write!(f, "inf"),
        }
    }
}

/// Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl McEstimate {
    fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let mean: f64 = values.iter().sum::<f64>() / n as f64;
        let var: f64 =
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
        McEstimate {
            estimate: mean,
            std_error: (var / n as f64).sqrt(),
            samples: n,
        }
    }

    /// |estimate − other| in units of the combined standard error.
    pub fn sigma_distance(&self, other: f64, other_stderr: f64) -> f64 {
        let combined = (self.std_error * self.std_error + other_stderr * other_stderr).sqrt();
        (self.estimate - other).abs() / combined.max(1e-300)
    }
}

/// Exact mean squared correlation under uniformly random settings:
/// `C / (d² − 1)^N`.
pub fn exact_random_correlations(psi: &PureState) -> Result<f64> {
    let d = psi.shape().uniform_dim().ok_or_else(|| {
        Error::ShapeMismatch("random correlations need a uniform local dimension".into())
    })?;
    let n = psi.shape().party_count();
    let basis = gell_mann_basis(d)?;
    let c = length_of_correlations(&State::Pure(psi.clone()), &basis)?;
    Ok(c / ((d * d - 1) as f64).powi(n as i32))
}

fn validate_initial_operator(op: &CMat, d: usize) -> Result<()> {
    if op.nrows() != d || op.ncols() != d {
        return Err(Error::InvalidArgument(format!(
            "initial operator must be {d}x{d}"
        )));
    }
    let tr = op.trace().norm();
    if tr > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "initial operator has trace magnitude {tr:.3e}; it must be traceless"
        )));
    }
    let norm = (op * op.adjoint()).trace().re;
    if (norm - d as f64).abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "initial operator has Tr(λλ†) = {norm}, expected {d}"
        )));
    }
    Ok(())
}

/// Monte-Carlo estimate of the mean squared correlation by conjugating a
/// traceless, normalized initial operator with independent Haar unitaries
/// per party: `E = Tr(ρ ⊗_n U_n† λ† U_n)`, averaged as |E|².
pub fn mc_random_correlations(
    state: &State,
    samples: usize,
    initial_op: &CMat,
    seed: u64,
) -> Result<McEstimate> {
    let d = state.shape().uniform_dim().ok_or_else(|| {
        Error::ShapeMismatch("random correlations need a uniform local dimension".into())
    })?;
    validate_initial_operator(initial_op, d)?;
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let n = state.shape().party_count();
    let lambda_dag = initial_op.adjoint();
    let rows = match state {
        State::Mixed(rho) => row_major(rho),
        State::Pure(_) => Vec::new(),
    };
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let ops: Vec<CMat> = (0..n)
                .map(|_| {
                    let u = haar_unitary_from_rng(d, &mut rng);
                    u.adjoint() * &lambda_dag * &u
                })
                .collect();
            let pairs: Vec<(usize, &CMat)> = ops.iter().enumerate().collect();
            let mut scratch = Vec::new();
            let e = match state {
                State::Pure(psi) => expect_ops_pure(psi, &pairs, &mut scratch),
                State::Mixed(_) => {
                    trace_ops_mixed(&rows, state.shape().dims(), &pairs, &mut scratch)
                }
            };
            e.norm_sqr()
        })
        .collect();
    Ok(McEstimate::from_values(&values))
}

/// Monte-Carlo estimate of the mean squared correlation for qubits by
/// sampling one uniform direction per party and squaring the correlation
/// function. Agrees with the Haar route for qubit systems.
pub fn mc_random_correlations_directions(
    state: &State,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if !state.shape().is_qubits() {
        return Err(Error::ShapeMismatch("direction sampling needs qubits".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let n = state.shape().party_count();
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let dirs: Vec<[f64; 3]> = (0..n).map(|_| sample_direction(&mut rng)).collect();
            let e = correlation_function_unchecked(state, &dirs);
            e * e
        })
        .collect();
    Ok(McEstimate::from_values(&values))
}

fn shot_estimate_from_e<R: Rng>(e: f64, shots: Shots, rng: &mut R) -> Result<f64> {
    if e.abs() > 1.0 + 1e-9 {
        return Err(Error::InvalidState(format!(
            "correlation function {e} outside [−1, 1]"
        )));
    }
    match shots {
        Shots::Infinite => Ok(e),
        Shots::Finite(k) => {
            if k == 0 {
                return Err(Error::InvalidArgument("need at least one shot".into()));
            }
            let p = ((1.0 + e) / 2.0).clamp(0.0, 1.0);
            let dist = Binomial::new(k, p)
                .map_err(|err| Error::InvalidArgument(format!("binomial: {err}")))?;
            let successes = rng.sample(dist);
            Ok(2.0 * successes as f64 / k as f64 - 1.0)
        }
    }
}

/// Draw K product-outcome samples of ±1 with mean `E(directions)` and
/// return their average; `Shots::Infinite` returns E exactly.
pub fn simulate_shot_estimate<R: Rng>(
    state: &State,
    directions: &[[f64; 3]],
    shots: Shots,
    rng: &mut R,
) -> Result<f64> {
    let e = crate::correlations::correlation_function(state, directions)?;
    shot_estimate_from_e(e, shots, rng)
}

/// Parameters of the single-random-setting witness.
#[derive(Debug, Clone, Copy)]
pub struct WitnessConfig {
    pub shots: Shots,
    /// One random setting per party; the only supported value.
    pub settings_per_party: usize,
    /// Target probability that a product state stays below the bound.
    pub confidence: f64,
    /// Slack above 1/3^N; calibrated when absent.
    pub delta: Option<f64>,
    pub calibration_trials: usize,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            shots: Shots::Infinite,
            settings_per_party: 1,
            confidence: 0.954,
            delta: None,
            calibration_trials: 1_000_000,
        }
    }
}

impl WitnessConfig {
    fn validate(&self) -> Result<()> {
        if self.settings_per_party != 1 {
            return Err(Error::InvalidArgument(
                "only one random setting per party is supported".into(),
            ));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "confidence {} outside (0, 1)",
                self.confidence
            )));
        }
        if let Some(d) = self.delta {
            if d < 0.0 {
                return Err(Error::InvalidArgument(format!("delta {d} must be ≥ 0")));
            }
        }
        Ok(())
    }
}

/// Result of a witness simulation.
#[derive(Debug, Clone, Copy)]
pub struct WitnessReport {
    pub parties: usize,
    pub shots: Shots,
    pub confidence: f64,
    pub delta: f64,
    /// 1/3^N + δ.
    pub bound: f64,
    pub detection_probability: f64,
    /// Binomial standard error of the detection probability.
    pub std_error: f64,
    pub trials: usize,
}

/// Calibrate the witness slack δ so that the squared shot-estimated
/// correlation of the pure product state |0…0⟩ under uniformly random
/// settings stays at or below `1/3^N + δ` with probability `confidence`.
///
/// Product-state correlation functions factorize into the product of the
/// settings' z-components, which is what gets sampled here. δ is floored
/// at zero.
pub fn calibrate_delta(
    parties: usize,
    shots: Shots,
    confidence: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if parties == 0 {
        return Err(Error::InvalidArgument("need at least one party".into()));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence {confidence} outside (0, 1)"
        )));
    }
    let needed = (100.0 / (1.0 - confidence)).ceil() as usize;
    if trials < needed {
        return Err(Error::InvalidArgument(format!(
            "{trials} calibration trials resolve the {confidence} quantile poorly; need ≥ {needed}"
        )));
    }
    let mut values: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, CALIBRATION_STREAM_BASE + t);
            let mut e = 1.0;
            for _ in 0..parties {
                e *= sample_direction(&mut rng)[2];
            }
            let est = shot_estimate_from_e(e, shots, &mut rng).expect("|e| ≤ 1 by construction");
            est * est
        })
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((confidence * trials as f64).ceil() as usize).clamp(1, trials) - 1;
    let quantile = values[idx];
    let product_level = 1.0 / 3f64.powi(parties as i32);
    Ok((quantile - product_level).max(0.0))
}

/// Fraction of trials in which the squared shot-estimated correlation of
/// `state` under one uniformly random setting per party exceeds
/// `1/3^N + δ`. δ is taken from the config or calibrated on the fly.
pub fn detection_probability(
    state: &State,
    config: &WitnessConfig,
    trials: usize,
    seed: u64,
) -> Result<WitnessReport> {
    config.validate()?;
    if !state.shape().is_qubits() {
        return Err(Error::ShapeMismatch("the witness simulation needs qubits".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let n = state.shape().party_count();
    let delta = match config.delta {
        Some(d) => d,
        None => calibrate_delta(n, config.shots, config.confidence, config.calibration_trials, seed)?,
    };
    let bound = 1.0 / 3f64.powi(n as i32) + delta;
    let shots = config.shots;
    let detections: u64 = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let dirs: Vec<[f64; 3]> = (0..n).map(|_| sample_direction(&mut rng)).collect();
            let e = correlation_function_unchecked(state, &dirs);
            let est = shot_estimate_from_e(e, shots, &mut rng).expect("|e| ≤ 1 + 1e-9");
            u64::from(est * est > bound)
        })
        .sum();
    let p = detections as f64 / trials as f64;
    Ok(WitnessReport {
        parties: n,
        shots,
        confidence: config.confidence,
        delta,
        bound,
        detection_probability: p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        trials,
    })
}
