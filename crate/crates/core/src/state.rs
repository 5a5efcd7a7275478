//! Dense multi-qudit pure states and density matrices, with the spectral
//! utilities built on them: tensor products, partial trace, purity, Schmidt
//! spectra, majorization, and Bloch vectors.
//!
//! Amplitude indexing is row-major with party 0 as the most significant
//! tensor factor: for dims `[d_0, …, d_{N-1}]` the basis state
//! `|i_0 i_1 … ⟩` sits at index `((i_0 d_1 + i_1) d_2 + …)`.

use num_complex::Complex64;

use crate::basis::gell_mann_basis;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, CMat};

/// Construction tolerance for norm / trace / Hermiticity / positivity.
pub const STATE_TOL: f64 = 1e-10;

/// Local dimensions of a multi-party system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemShape {
    dims: Vec<usize>,
}

impl SystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("system needs at least one party".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidArgument(format!(
                "every local dimension must be at least 2, got {d}"
            )));
        }
        Ok(Self { dims })
    }

    /// N qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    /// N parties of equal dimension d.
    pub fn qudits(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn party_count(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// The common local dimension, if all parties share one.
    pub fn uniform_dim(&self) -> Option<usize> {
        let d = self.dims[0];
        self.dims.iter().all(|&x| x == d).then_some(d)
    }

    pub fn is_qubits(&self) -> bool {
        self.uniform_dim() == Some(2)
    }

    /// Stride of `party` in the amplitude index (product of later dims).
    pub fn stride(&self, party: usize) -> usize {
        self.dims[party + 1..].iter().product()
    }

    /// Decompose a flat index into per-party digits.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for p in (0..self.dims.len()).rev() {
            out[p] = index % self.dims[p];
            index /= self.dims[p];
        }
        out
    }
}

/// A normalized pure state.
#[derive(Debug, Clone)]
pub struct PureState {
    shape: SystemShape,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Validates the squared norm to within `STATE_TOL`.
    pub fn new(shape: SystemShape, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != shape.total_dim() {
            return Err(Error::ShapeMismatch(format!(
                "state has {} amplitudes, shape needs {}",
                amps.len(),
                shape.total_dim()
            )));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "squared norm is {norm_sq}, not 1"
            )));
        }
        Ok(Self { shape, amps })
    }

    /// Normalize a raw amplitude vector (rejects the zero vector).
    pub fn normalized(shape: SystemShape, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq < 1e-300 {
            return Err(Error::InvalidState("cannot normalize the zero vector".into()));
        }
        let inv = 1.0 / norm_sq.sqrt();
        for a in &mut amps {
            *a *= inv;
        }
        Ok(Self { shape, amps })
    }

    /// Computational basis state |i_0 i_1 …⟩.
    pub fn basis_state(shape: SystemShape, digits: &[usize]) -> Result<Self> {
        if digits.len() != shape.party_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} digits for {} parties",
                digits.len(),
                shape.party_count()
            )));
        }
        let mut index = 0usize;
        for (p, &i) in digits.iter().enumerate() {
            let d = shape.dims()[p];
            if i >= d {
                return Err(Error::InvalidArgument(format!(
                    "digit {i} out of range for dimension {d}"
                )));
            }
            index = index * d + i;
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); shape.total_dim()];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { shape, amps })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Density matrix |ψ⟩⟨ψ| (positive by construction; no spectral check).
    pub fn to_density_matrix(&self) -> DensityMatrix {
        let n = self.amps.len();
        let mat = CMat::from_fn(n, n, |i, j| self.amps[i] * self.amps[j].conj());
        DensityMatrix {
            shape: self.shape.clone(),
            mat,
        }
    }
}

/// A density matrix, validated to be Hermitian, unit-trace, and positive
/// semidefinite (eigenvalues ≥ −1e−10). Invalid inputs are rejected, not
/// repaired.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    shape: SystemShape,
    mat: CMat,
}

impl DensityMatrix {
    pub fn new(shape: SystemShape, mat: CMat) -> Result<Self> {
        let n = shape.total_dim();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{}, shape needs {n}x{n}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm = hermiticity_defect(&mat);
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {herm:.3e} exceeds {STATE_TOL:.0e}"
            )));
        }
        let tr = mat.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, not 1")));
        }
        let min_eig = hermitian_eigenvalues(&mat)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { shape, mat })
    }

    /// Internal constructor for matrices positive by construction
    /// (outer products, partial traces, convex mixtures). Hermiticity and
    /// trace are still checked.
    pub(crate) fn from_parts(shape: SystemShape, mat: CMat) -> Result<Self> {
        let herm = hermiticity_defect(&mat);
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {herm:.3e} exceeds {STATE_TOL:.0e}"
            )));
        }
        let tr = mat.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, not 1")));
        }
        Ok(Self { shape, mat })
    }

    /// Convex mixture Σ w_k ρ_k. Weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("mixture of nothing".into()));
        }
        let shape = parts[0].1.shape.clone();
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidArgument(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        let n = shape.total_dim();
        let mut mat = CMat::zeros(n, n);
        for (w, rho) in parts {
            if *w < -STATE_TOL {
                return Err(Error::InvalidArgument(format!("negative weight {w}")));
            }
            if rho.shape != shape {
                return Err(Error::ShapeMismatch("mixture parts differ in shape".into()));
            }
            mat += rho.mat.map(|v| v * Complex64::new(*w, 0.0));
        }
        Self::from_parts(shape, mat)
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// Tr(ρ²) ∈ (0, 1].
    pub fn purity(&self) -> f64 {
        // Hermitian ρ: Tr(ρ²) = Σ |ρ_ij|²
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.mat)
    }

    /// Rank at tolerance `tol` on eigenvalues.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&e| e > tol).count()
    }

    /// Bloch vector in the Gell-Mann basis of the (single-party) dimension:
    /// `v_j = Re Tr(ρ σ_j)`. Only defined for one party.
    pub fn bloch_vector(&self) -> Result<BlochVector> {
        if self.shape.party_count() != 1 {
            return Err(Error::InvalidArgument(
                "bloch_vector expects a single-party state".into(),
            ));
        }
        let d = self.shape.dims()[0];
        let basis = gell_mann_basis(d)?;
        let comps: Vec<f64> = (0..basis.len())
            .map(|j| (&self.mat * basis.element(j)).trace().re)
            .collect();
        BlochVector::new(comps, d)
    }
}

/// A pure or mixed state; most correlation routines accept either and
/// dispatch to the cheaper pure-state kernels when possible.
#[derive(Debug, Clone)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn shape(&self) -> &SystemShape {
        match self {
            State::Pure(p) => p.shape(),
            State::Mixed(m) => m.shape(),
        }
    }

    pub fn purity(&self) -> f64 {
        match self {
            State::Pure(_) => 1.0,
            State::Mixed(m) => m.purity(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            State::Pure(p) => Some(p),
            State::Mixed(_) => None,
        }
    }

    /// Dense density matrix of either variant.
    pub fn density_matrix(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.to_density_matrix(),
            State::Mixed(m) => m.clone(),
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityMatrix> for State {
    fn from(m: DensityMatrix) -> Self {
        State::Mixed(m)
    }
}

/// Real Bloch components with the dimension-d length bound |v|² ≤ d − 1.
#[derive(Debug, Clone)]
pub struct BlochVector {
    components: Vec<f64>,
}

impl BlochVector {
    pub fn new(components: Vec<f64>, dim: usize) -> Result<Self> {
        let len_sq: f64 = components.iter().map(|c| c * c).sum();
        if len_sq > (dim - 1) as f64 + STATE_TOL {
            return Err(Error::InvalidState(format!(
                "Bloch length² {len_sq} exceeds d−1 = {}",
                dim - 1
            )));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn length_sq(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum()
    }
}

/// Kronecker product of pure states, in party order.
pub fn tensor_product(states: &[PureState]) -> Result<PureState> {
    if states.is_empty() {
        return Err(Error::InvalidArgument("tensor product of nothing".into()));
    }
    let mut dims = Vec::new();
    for s in states {
        dims.extend_from_slice(s.shape().dims());
    }
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for s in states {
        let mut next = Vec::with_capacity(amps.len() * s.amplitudes().len());
        for a in &amps {
            for b in s.amplitudes() {
                next.push(a * b);
            }
        }
        amps = next;
    }
    PureState::new(SystemShape::new(dims)?, amps)
}

/// Partial trace keeping the (distinct, in-range) parties in `keep`;
/// kept parties stay in their original relative order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.shape().party_count();
    if keep.is_empty() {
        return Err(Error::InvalidArgument("partial trace must keep at least one party".into()));
    }
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() {
        return Err(Error::InvalidArgument("duplicate party in keep set".into()));
    }
    if *keep_sorted.last().unwrap() >= n {
        return Err(Error::InvalidArgument(format!(
            "party {} out of range for {n} parties",
            keep_sorted.last().unwrap()
        )));
    }
    let dims = rho.shape().dims();
    let trace_parties: Vec<usize> = (0..n).filter(|p| !keep_sorted.contains(p)).collect();
    let keep_dims: Vec<usize> = keep_sorted.iter().map(|&p| dims[p]).collect();
    let keep_total: usize = keep_dims.iter().product();
    let trace_total: usize = trace_parties.iter().map(|&p| dims[p]).product();

    // flat index = Σ digit(p) * stride(p)
    let strides: Vec<usize> = (0..n).map(|p| rho.shape().stride(p)).collect();
    let keep_strides: Vec<usize> = keep_sorted.iter().map(|&p| strides[p]).collect();
    let trace_strides: Vec<usize> = trace_parties.iter().map(|&p| strides[p]).collect();
    let trace_dims: Vec<usize> = trace_parties.iter().map(|&p| dims[p]).collect();

    let offset_of = |mut idx: usize, dims: &[usize], strides: &[usize]| -> usize {
        let mut off = 0;
        for k in (0..dims.len()).rev() {
            off += (idx % dims[k]) * strides[k];
            idx /= dims[k];
        }
        off
    };

    let mut out = CMat::zeros(keep_total, keep_total);
    for a in 0..keep_total {
        let base_a = offset_of(a, &keep_dims, &keep_strides);
        for b in 0..keep_total {
            let base_b = offset_of(b, &keep_dims, &keep_strides);
            let mut sum = Complex64::new(0.0, 0.0);
            for t in 0..trace_total {
                let off_t = offset_of(t, &trace_dims, &trace_strides);
                sum += rho.mat[(base_a + off_t, base_b + off_t)];
            }
            out[(a, b)] = sum;
        }
    }
    DensityMatrix::from_parts(SystemShape::new(keep_dims)?, out)
}

/// Schmidt probabilities across a bipartition, sorted descending.
#[derive(Debug, Clone)]
pub struct SchmidtSpectrum {
    probabilities: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn new(mut probabilities: Vec<f64>) -> Result<Self> {
        for p in &mut probabilities {
            if *p < 0.0 {
                if *p < -STATE_TOL {
                    return Err(Error::InvalidState(format!("negative probability {p}")));
                }
                *p = 0.0;
            }
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        probabilities.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Self { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Σ p², the purity of either reduction.
    pub fn purity(&self) -> f64 {
        self.probabilities.iter().map(|p| p * p).sum()
    }

    /// True when `self` is majorized by `other`: every partial sum of
    /// `other` (sorted descending) dominates the corresponding partial sum
    /// of `self`. Shorter spectra are zero-padded.
    pub fn majorized_by(&self, other: &SchmidtSpectrum) -> bool {
        let len = self.probabilities.len().max(other.probabilities.len());
        let mut acc_self = 0.0;
        let mut acc_other = 0.0;
        for k in 0..len {
            acc_self += self.probabilities.get(k).copied().unwrap_or(0.0);
            acc_other += other.probabilities.get(k).copied().unwrap_or(0.0);
            if acc_other < acc_self - 1e-12 {
                return false;
            }
        }
        true
    }
}

/// Schmidt spectrum of `psi` across the bipartition `(partition, rest)`.
/// The partition must be proper: non-empty and not the whole system.
pub fn schmidt_spectrum(psi: &PureState, partition: &[usize]) -> Result<SchmidtSpectrum> {
    let n = psi.shape().party_count();
    let mut part: Vec<usize> = partition.to_vec();
    part.sort_unstable();
    part.dedup();
    if part.len() != partition.len() {
        return Err(Error::InvalidArgument("duplicate party in bipartition".into()));
    }
    if part.is_empty() || part.len() == n {
        return Err(Error::InvalidArgument(
            "bipartition must be proper (neither empty nor everything)".into(),
        ));
    }
    if *part.last().unwrap() >= n {
        return Err(Error::InvalidArgument(format!(
            "party {} out of range",
            part.last().unwrap()
        )));
    }
    // The Schmidt probabilities are the eigenvalues of the reduced state.
    let rho_a = partial_trace(&psi.to_density_matrix(), &part)?;
    let eigs = rho_a.eigenvalues();
    SchmidtSpectrum::new(eigs)
}
