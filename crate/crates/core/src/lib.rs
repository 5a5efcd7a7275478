//! Numerical toolkit for correlations between outcomes of random local
//! measurements on multi-qudit states.
//!
//! What lives where:
//!
//! - [`state`]: dense pure states and density matrices, partial trace,
//!   Schmidt spectra, majorization.
//! - [`named`]: factories for GHZ, Dicke, W, Bell, cluster and related
//!   states, plus the `name:args` mini-language used by the CLI.
//! - [`basis`]: traceless local operator bases (Pauli, generalized
//!   Gell-Mann, Weyl-Heisenberg, seeded random mixtures).
//! - [`correlations`]: correlation tensors and functions, the length of
//!   correlations, sector lengths, the pure-state entanglement threshold,
//!   two-copy verification, the pair-operator spectrum, Werner twirl.
//! - [`stabilizer`]: symplectic stabilizer groups with the exact
//!   full-weight counting fast path.
//! - [`sampling`]: random settings and Haar unitaries, Monte-Carlo mean
//!   squared correlations, finite-shot simulation, and the
//!   single-random-setting witness with calibration.
//! - [`convex_roof`]: exact rank-2 convex roof, rank-m witness, and the
//!   decomposition oracle.
//!
//! All state values are immutable after construction and all operations
//! are pure functions, so everything is safe to share across threads.

pub mod basis;
pub mod convex_roof;
pub mod correlations;
pub mod error;
pub mod io;
pub mod linalg;
pub mod named;
pub mod sampling;
pub mod stabilizer;
pub mod state;

pub use basis::{
    basis_by_name, gell_mann_basis, pauli_basis, random_mixed_basis, weyl_heisenberg_basis,
    BasisTag, OperatorBasis,
};
pub use convex_roof::{
    bloch_decompose, convex_roof_oracle, convex_roof_oracle_default, convex_roof_rank2,
    convex_roof_rank2_with_tol, projected_pair_sum, support_basis, witness_rank_m,
    witness_rank_m_with_tol, ConvexRoofContext, RankMWitness, RankTwoRoof, SupportBasis,
    RANK_TOL,
};
pub use correlations::{
    correlation_function, correlation_tensor, correlation_tensor_with_bases, is_entangled_pure,
    length_by_subset_purities, length_of_correlations, pair_operator, pair_operator_spectrum,
    sector_lengths, swap_operator, two_copy_length, werner_twirl, CorrelationTensor,
    EntanglementVerdict, PairOperatorSpectrum, SectorLengths,
};
pub use error::{Error, Result};
pub use named::{
    bell, cluster, dicke, double_singlet, five_qubit_counterexample, ghz, ghz_group, locc_phi,
    locc_psi, product_basis_state, w_family, w_state, BellKind, StateSpec,
};
pub use sampling::{
    calibrate_delta, detection_probability, exact_random_correlations, master_rng,
    mc_random_correlations, mc_random_correlations_directions, random_density_matrix,
    random_product_state, random_pure_state, sample_direction, sample_haar_unitary,
    simulate_shot_estimate, trial_rng, McEstimate, Shots, WitnessConfig, WitnessReport,
};
pub use stabilizer::{cluster_group, PauliWord, StabilizerGroup};
pub use state::{
    partial_trace, schmidt_spectrum, tensor_product, BlochVector, DensityMatrix, PureState,
    SchmidtSpectrum, State, SystemShape,
};
