//! Correlation tensors and everything derived from them: correlation
//! functions for chosen settings, the length of correlations `C` (the sum
//! of squared full-weight tensor entries), per-sector sums, the pure-state
//! entanglement threshold `C > (d−1)^N`, a two-copy verification route,
//! the pair-operator spectrum check, and the analytic Werner twirl.
//!
//! The primary `C` algorithm enumerates operator strings and evaluates
//! each expectation by sequential local application — `O(3^N · 2^N)` for
//! qubits — never materializing a full string matrix. Qubit strings are
//! processed in fixed-size parallel chunks with an ordered final reduction,
//! so results are bit-identical across thread counts.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{gell_mann_basis, BasisTag, OperatorBasis};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMat};
use crate::state::{partial_trace, DensityMatrix, PureState, State, SystemShape};

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Fixed chunk length for parallel string enumeration. Partial sums are
/// accumulated per chunk in index order and reduced sequentially, which
/// keeps results independent of thread scheduling (well inside the 1e−12
/// reproducibility budget).
const PAR_CHUNK: usize = 2048;

// ---------------------------------------------------------------------------
// local operator application kernels
// ---------------------------------------------------------------------------

/// Apply a `d × d` operator to one party of a dense amplitude vector.
pub(crate) fn apply_local(amps: &mut [Complex64], dims: &[usize], party: usize, op: &CMat) {
    let d = dims[party];
    let stride: usize = dims[party + 1..].iter().product();
    let block = d * stride;
    let flat: Vec<Complex64> = (0..d * d).map(|k| op[(k / d, k % d)]).collect();
    let mut gathered = vec![C_ZERO; d];
    let mut base = 0;
    while base < amps.len() {
        for off in 0..stride {
            for (r, g) in gathered.iter_mut().enumerate() {
                let mut acc = C_ZERO;
                for c in 0..d {
                    acc += flat[r * d + c] * amps[base + c * stride + off];
                }
                *g = acc;
            }
            for (r, g) in gathered.iter().enumerate() {
                amps[base + r * stride + off] = *g;
            }
        }
        base += block;
    }
}

/// Apply an operator on the joint space of two parties (`p1 < p2`).
pub(crate) fn apply_two_site(
    amps: &mut [Complex64],
    dims: &[usize],
    p1: usize,
    p2: usize,
    op: &CMat,
) {
    let (d1, d2) = (dims[p1], dims[p2]);
    let k = d1 * d2;
    let s1: usize = dims[p1 + 1..].iter().product();
    let s2: usize = dims[p2 + 1..].iter().product();
    let flat: Vec<Complex64> = (0..k * k).map(|i| op[(i / k, i % k)]).collect();
    let mut gathered = vec![C_ZERO; k];
    for idx in 0..amps.len() {
        if !(idx / s1).is_multiple_of(d1) || !(idx / s2).is_multiple_of(d2) {
            continue;
        }
        for (r, g) in gathered.iter_mut().enumerate() {
            let mut acc = C_ZERO;
            for a in 0..d1 {
                for b in 0..d2 {
                    acc += flat[r * k + a * d2 + b] * amps[idx + a * s1 + b * s2];
                }
            }
            *g = acc;
        }
        for a in 0..d1 {
            for b in 0..d2 {
                amps[idx + a * s1 + b * s2] = gathered[a * d2 + b];
            }
        }
    }
}

/// ⟨ψ| ⊗ ops |ψ⟩ with one operator per listed party.
pub(crate) fn expect_ops_pure(
    psi: &PureState,
    ops: &[(usize, &CMat)],
    scratch: &mut Vec<Complex64>,
) -> Complex64 {
    scratch.clear();
    scratch.extend_from_slice(psi.amplitudes());
    for (party, op) in ops {
        apply_local(scratch, psi.shape().dims(), *party, op);
    }
    psi.amplitudes()
        .iter()
        .zip(scratch.iter())
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// Tr(ρ · ⊗ ops) on a row-major copy of ρ.
pub(crate) fn trace_ops_mixed(
    rho_rows: &[Complex64],
    dims: &[usize],
    ops: &[(usize, &CMat)],
    scratch: &mut Vec<Complex64>,
) -> Complex64 {
    let dim: usize = dims.iter().product();
    scratch.clear();
    scratch.extend_from_slice(rho_rows);
    for (party, op) in ops {
        // right multiplication acts on the column index: each row picks up opᵀ
        let t = op.transpose();
        for row in 0..dim {
            apply_local(&mut scratch[row * dim..(row + 1) * dim], dims, *party, &t);
        }
    }
    (0..dim).map(|i| scratch[i * dim + i]).sum()
}

pub(crate) fn row_major(rho: &DensityMatrix) -> Vec<Complex64> {
    let n = rho.shape().total_dim();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(rho.matrix()[(i, j)]);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Pauli mask kernels (qubits)
// ---------------------------------------------------------------------------

fn phase_of(ny: u32, negative: bool) -> Complex64 {
    let g = match ny % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    if negative {
        -g
    } else {
        g
    }
}

/// ⟨ψ|P|ψ⟩ for the Pauli string with the given X/Z masks.
pub(crate) fn pauli_expectation_pure(amps: &[Complex64], x: u64, z: u64) -> f64 {
    let mut sum = C_ZERO;
    for (i, a) in amps.iter().enumerate() {
        let flipped = amps[i ^ x as usize];
        let s = if (i as u64 & z).count_ones() & 1 == 1 {
            -1.0
        } else {
            1.0
        };
        sum += flipped.conj() * a * Complex64::new(s, 0.0);
    }
    (phase_of((x & z).count_ones(), false) * sum).re
}

/// Tr(ρ P) on a row-major density matrix.
pub(crate) fn pauli_expectation_mixed(rho_rows: &[Complex64], dim: usize, x: u64, z: u64) -> f64 {
    let mut sum = C_ZERO;
    for i in 0..dim {
        let s = if (i as u64 & z).count_ones() & 1 == 1 {
            -1.0
        } else {
            1.0
        };
        sum += rho_rows[i * dim + (i ^ x as usize)] * Complex64::new(s, 0.0);
    }
    (phase_of((x & z).count_ones(), false) * sum).re
}

/// Decode a base-4 string index into X/Z masks (digit 0 = identity,
/// 1 = X, 2 = Y, 3 = Z; party 0 is the most significant digit) and the
/// number of non-identity slots.
fn masks_base4(mut s: usize, n: usize) -> (u64, u64, usize) {
    let mut x = 0u64;
    let mut z = 0u64;
    let mut weight = 0usize;
    for party in (0..n).rev() {
        let digit = s & 3;
        s >>= 2;
        let b = 1u64 << (n - 1 - party);
        match digit {
            1 => x |= b,
            2 => {
                x |= b;
                z |= b;
            }
            3 => z |= b,
            _ => {}
        }
        if digit != 0 {
            weight += 1;
        }
    }
    (x, z, weight)
}

/// Decode a base-3 full-weight string index (digit k = Pauli k+1).
fn masks_base3(mut s: usize, n: usize) -> (u64, u64) {
    let mut x = 0u64;
    let mut z = 0u64;
    for party in (0..n).rev() {
        let digit = s % 3;
        s /= 3;
        let b = 1u64 << (n - 1 - party);
        match digit {
            0 => x |= b,
            1 => {
                x |= b;
                z |= b;
            }
            _ => z |= b,
        }
    }
    (x, z)
}

fn par_sum(total: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    if total <= PAR_CHUNK {
        return (0..total).map(f).sum();
    }
    let chunks: Vec<usize> = (0..total).step_by(PAR_CHUNK).collect();
    let partials: Vec<f64> = chunks
        .par_iter()
        .map(|&start| (start..(start + PAR_CHUNK).min(total)).map(&f).sum())
        .collect();
    partials.iter().sum()
}

// ---------------------------------------------------------------------------
// length of correlations
// ---------------------------------------------------------------------------

fn qubit_pauli_compatible(basis: &OperatorBasis) -> bool {
    basis.dim() == 2 && matches!(basis.tag(), BasisTag::Pauli | BasisTag::GellMann)
}

/// Sum of squared magnitudes of all full-weight correlation tensor entries.
///
/// Accepts mixed states as well; the value is basis independent for any
/// basis satisfying the trace conditions.
pub fn length_of_correlations(state: &State, basis: &OperatorBasis) -> Result<f64> {
    let shape = state.shape().clone();
    let d = shape.uniform_dim().ok_or_else(|| {
        Error::ShapeMismatch("length of correlations needs a uniform local dimension".into())
    })?;
    if d != basis.dim() {
        return Err(Error::ShapeMismatch(format!(
            "basis dimension {} does not match local dimension {d}",
            basis.dim()
        )));
    }
    let n = shape.party_count();
    if qubit_pauli_compatible(basis) {
        let total = 3usize.pow(n as u32);
        return Ok(match state {
            State::Pure(psi) => {
                let amps = psi.amplitudes();
                par_sum(total, |s| {
                    let (x, z) = masks_base3(s, n);
                    let t = pauli_expectation_pure(amps, x, z);
                    t * t
                })
            }
            State::Mixed(rho) => {
                let rows = row_major(rho);
                let dim = shape.total_dim();
                par_sum(total, |s| {
                    let (x, z) = masks_base3(s, n);
                    let t = pauli_expectation_mixed(&rows, dim, x, z);
                    t * t
                })
            }
        });
    }
    match state {
        State::Pure(psi) => Ok(qudit_c_pure(psi, basis)),
        State::Mixed(rho) => Ok(qudit_c_mixed(rho, basis)),
    }
}

fn qudit_c_pure(psi: &PureState, basis: &OperatorBasis) -> f64 {
    let n = psi.shape().party_count();
    let dim = psi.shape().total_dim();
    let mut bufs: Vec<Vec<Complex64>> = (0..n).map(|_| vec![C_ZERO; dim]).collect();
    let mut sum = 0.0;
    dfs_c_pure(psi, basis, psi.amplitudes(), &mut bufs, 0, &mut sum);
    sum
}

fn dfs_c_pure(
    psi: &PureState,
    basis: &OperatorBasis,
    prev: &[Complex64],
    bufs: &mut [Vec<Complex64>],
    party: usize,
    sum: &mut f64,
) {
    let n = psi.shape().party_count();
    let (cur, rest) = bufs.split_first_mut().expect("one buffer per party");
    for j in 0..basis.len() {
        cur.copy_from_slice(prev);
        apply_local(cur, psi.shape().dims(), party, basis.adjoint_element(j));
        if party + 1 == n {
            let t: Complex64 = psi
                .amplitudes()
                .iter()
                .zip(cur.iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            *sum += t.norm_sqr();
        } else {
            dfs_c_pure(psi, basis, cur, rest, party + 1, sum);
        }
    }
}

fn qudit_c_mixed(rho: &DensityMatrix, basis: &OperatorBasis) -> f64 {
    let n = rho.shape().party_count();
    let k = basis.len();
    let rows = row_major(rho);
    let mut scratch = Vec::new();
    let total = k.pow(n as u32);
    let mut sum = 0.0;
    let mut ops: Vec<(usize, &CMat)> = Vec::with_capacity(n);
    for s in 0..total {
        ops.clear();
        let mut rem = s;
        for party in (0..n).rev() {
            ops.push((party, basis.adjoint_element(rem % k)));
            rem /= k;
        }
        ops.reverse();
        let t = trace_ops_mixed(&rows, rho.shape().dims(), &ops, &mut scratch);
        sum += t.norm_sqr();
    }
    sum
}

/// Per-sector sums of squared correlations for qubit systems:
/// `values[k]` sums |T|² over index tuples with exactly k non-identity
/// slots, so `values[0] = 1` and `values[N]` is the length of correlations.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorLengths {
    values: Vec<f64>,
}

impl SectorLengths {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// C_N, the full-weight sector.
    pub fn full_weight(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Σ_k C_k including C_0; equals 2^N for pure qubit states.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Σ_k (−1)^k C_k; vanishes for pure states of odd qubit number.
    pub fn alternating(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
            .sum()
    }
}

/// Sector lengths C_0 … C_N by enumeration of all 4^N Pauli strings.
pub fn sector_lengths(state: &State) -> Result<SectorLengths> {
    let shape = state.shape();
    if !shape.is_qubits() {
        return Err(Error::ShapeMismatch("sector lengths are defined for qubits".into()));
    }
    let n = shape.party_count();
    let total = 1usize << (2 * n);
    let term: Box<dyn Fn(usize) -> (usize, f64) + Sync> = match state {
        State::Pure(psi) => {
            let amps = psi.amplitudes().to_vec();
            Box::new(move |s| {
                let (x, z, w) = masks_base4(s, n);
                let t = pauli_expectation_pure(&amps, x, z);
                (w, t * t)
            })
        }
        State::Mixed(rho) => {
            let rows = row_major(rho);
            let dim = shape.total_dim();
            Box::new(move |s| {
                let (x, z, w) = masks_base4(s, n);
                let t = pauli_expectation_mixed(&rows, dim, x, z);
                (w, t * t)
            })
        }
    };
    let starts: Vec<usize> = (0..total).step_by(PAR_CHUNK).collect();
    let partials: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|&start| {
            let mut acc = vec![0.0; n + 1];
            for s in start..(start + PAR_CHUNK).min(total) {
                let (w, v) = term(s);
                acc[w] += v;
            }
            acc
        })
        .collect();
    let mut values = vec![0.0; n + 1];
    for p in partials {
        for (k, v) in p.into_iter().enumerate() {
            values[k] += v;
        }
    }
    Ok(SectorLengths { values })
}

// ---------------------------------------------------------------------------
// correlation tensor and correlation function
// ---------------------------------------------------------------------------

/// Dense correlation tensor T over extended indices 0 … d²−1 per party
/// (0 = identity). Entries are complex in general; Hermitian bases give
/// real entries.
#[derive(Debug, Clone)]
pub struct CorrelationTensor {
    shape: SystemShape,
    tags: Vec<BasisTag>,
    sides: Vec<usize>,
    coeffs: Vec<Complex64>,
}

impl CorrelationTensor {
    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn basis_tags(&self) -> &[BasisTag] {
        &self.tags
    }

    /// Entry count per party, d_n².
    pub fn sides(&self) -> &[usize] {
        &self.sides
    }

    pub fn get(&self, indices: &[usize]) -> Complex64 {
        self.coeffs[self.offset(indices)]
    }

    fn offset(&self, indices: &[usize]) -> usize {
        debug_assert_eq!(indices.len(), self.sides.len());
        let mut off = 0;
        for (i, &mu) in indices.iter().enumerate() {
            off = off * self.sides[i] + mu;
        }
        off
    }

    fn indices_of(&self, mut off: usize) -> Vec<usize> {
        let mut out = vec![0; self.sides.len()];
        for i in (0..self.sides.len()).rev() {
            out[i] = off % self.sides[i];
            off /= self.sides[i];
        }
        out
    }

    /// All entries with their extended index tuples.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, Complex64)> + '_ {
        (0..self.coeffs.len()).map(|off| (self.indices_of(off), self.coeffs[off]))
    }

    /// Sum of |T|² over indices with every slot non-zero.
    pub fn length_of_correlations(&self) -> f64 {
        self.entries()
            .filter(|(idx, _)| idx.iter().all(|&mu| mu != 0))
            .map(|(_, v)| v.norm_sqr())
            .sum()
    }

    /// Sector sums over the number of non-identity slots.
    pub fn sector_lengths(&self) -> SectorLengths {
        let n = self.sides.len();
        let mut values = vec![0.0; n + 1];
        for (idx, v) in self.entries() {
            let w = idx.iter().filter(|&&mu| mu != 0).count();
            values[w] += v.norm_sqr();
        }
        SectorLengths { values }
    }

    /// Largest |Im T| over all entries; ~0 for Hermitian bases.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Compute the full extended correlation tensor with one basis per party.
///
/// Dense enumeration of Π d_n² entries; guarded at 2²⁰ entries.
pub fn correlation_tensor_with_bases(
    state: &State,
    bases: &[&OperatorBasis],
) -> Result<CorrelationTensor> {
    let shape = state.shape().clone();
    let n = shape.party_count();
    if bases.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "{} bases for {n} parties",
            bases.len()
        )));
    }
    for (p, b) in bases.iter().enumerate() {
        if b.dim() != shape.dims()[p] {
            return Err(Error::ShapeMismatch(format!(
                "basis at party {p} has dimension {}, party has {}",
                b.dim(),
                shape.dims()[p]
            )));
        }
    }
    let sides: Vec<usize> = shape.dims().iter().map(|&d| d * d).collect();
    let total: usize = sides.iter().product();
    if total > 1 << 20 {
        return Err(Error::SizeGuard(format!(
            "correlation tensor would have {total} entries (cap 2^20)"
        )));
    }
    let rows = match state {
        State::Mixed(rho) => row_major(rho),
        State::Pure(_) => Vec::new(),
    };
    let compute_entry = |off: usize| -> Complex64 {
        let mut idx = vec![0usize; n];
        let mut rem = off;
        for i in (0..n).rev() {
            idx[i] = rem % sides[i];
            rem /= sides[i];
        }
        let ops: Vec<(usize, &CMat)> = idx
            .iter()
            .enumerate()
            .filter(|(_, &mu)| mu != 0)
            .map(|(p, &mu)| (p, bases[p].adjoint_element(mu - 1)))
            .collect();
        let mut scratch = Vec::new();
        match state {
            State::Pure(psi) => expect_ops_pure(psi, &ops, &mut scratch),
            State::Mixed(_) => trace_ops_mixed(&rows, shape.dims(), &ops, &mut scratch),
        }
    };
    let coeffs: Vec<Complex64> = (0..total)
        .into_par_iter()
        .with_min_len(64)
        .map(compute_entry)
        .collect();
    let t0 = coeffs[0];
    if (t0 - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::InvalidState(format!(
            "identity component is {t0}, not 1 — state not normalized?"
        )));
    }
    Ok(CorrelationTensor {
        shape,
        tags: bases.iter().map(|b| b.tag()).collect(),
        sides,
        coeffs,
    })
}

/// Correlation tensor with the same basis used for every party.
pub fn correlation_tensor(state: &State, basis: &OperatorBasis) -> Result<CorrelationTensor> {
    let bases: Vec<&OperatorBasis> = vec![basis; state.shape().party_count()];
    correlation_tensor_with_bases(state, &bases)
}

/// Correlation function for one measurement direction per qubit:
/// `E = Tr(ρ ⊗_n u⃗_n·σ⃗)`. Directions must be unit 3-vectors to 1e−8.
pub fn correlation_function(state: &State, directions: &[[f64; 3]]) -> Result<f64> {
    let shape = state.shape();
    if !shape.is_qubits() {
        return Err(Error::ShapeMismatch("correlation function needs qubits".into()));
    }
    if directions.len() != shape.party_count() {
        return Err(Error::ShapeMismatch(format!(
            "{} directions for {} parties",
            directions.len(),
            shape.party_count()
        )));
    }
    for u in directions {
        let len = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        if (len - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "direction has length {len}, not 1"
            )));
        }
    }
    Ok(correlation_function_unchecked(state, directions))
}

/// `correlation_function` without the unit-length validation; used in the
/// Monte-Carlo hot loop where directions are normalized by construction.
pub(crate) fn correlation_function_unchecked(state: &State, directions: &[[f64; 3]]) -> f64 {
    let ops: Vec<CMat> = directions.iter().map(|u| direction_op(*u)).collect();
    let pairs: Vec<(usize, &CMat)> = ops.iter().enumerate().collect();
    let mut scratch = Vec::new();
    match state {
        State::Pure(psi) => expect_ops_pure(psi, &pairs, &mut scratch).re,
        State::Mixed(rho) => {
            let rows = row_major(rho);
            trace_ops_mixed(&rows, state.shape().dims(), &pairs, &mut scratch).re
        }
    }
}

/// u⃗·σ⃗ as a 2×2 matrix.
pub(crate) fn direction_op(u: [f64; 3]) -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[
            Complex64::new(u[2], 0.0),
            Complex64::new(u[0], -u[1]),
            Complex64::new(u[0], u[1]),
            Complex64::new(-u[2], 0.0),
        ],
    )
}

// ---------------------------------------------------------------------------
// entanglement threshold
// ---------------------------------------------------------------------------

/// Outcome of the pure-state criterion `C > (d−1)^N`.
#[derive(Debug, Clone, Copy)]
pub struct EntanglementVerdict {
    pub c: f64,
    pub threshold: f64,
    /// `c − threshold`; entangled iff this exceeds 1e−9.
    pub margin: f64,
    pub entangled: bool,
}

/// Decide entanglement of a pure state of uniform local dimension.
pub fn is_entangled_pure(psi: &PureState) -> Result<EntanglementVerdict> {
    let d = psi.shape().uniform_dim().ok_or_else(|| {
        Error::ShapeMismatch("entanglement threshold needs a uniform local dimension".into())
    })?;
    let n = psi.shape().party_count();
    let basis = gell_mann_basis(d)?;
    let c = length_of_correlations(&State::Pure(psi.clone()), &basis)?;
    let threshold = ((d - 1) as f64).powi(n as i32);
    let margin = c - threshold;
    Ok(EntanglementVerdict {
        c,
        threshold,
        margin,
        entangled: margin > 1e-9,
    })
}

// ---------------------------------------------------------------------------
// two-copy verification route
// ---------------------------------------------------------------------------

/// Σ_j σ_j ⊗ σ_j over the Gell-Mann elements of dimension d.
pub fn pair_operator(d: usize) -> Result<CMat> {
    let basis = gell_mann_basis(d)?;
    let mut s = CMat::zeros(d * d, d * d);
    for j in 0..basis.len() {
        s += crate::linalg::kron(basis.element(j), basis.element(j));
    }
    Ok(s)
}

/// Length of correlations evaluated as a two-copy expectation value:
/// the pair operators Σ_j σ_j ⊗ σ_j are applied on |ψ⟩ ⊗ |ψ⟩, one per
/// party/copy pair, without materializing their full tensor product.
/// Equals `length_of_correlations` to better than 1e−9; dense guard at
/// 2²⁰ doubled amplitudes.
pub fn two_copy_length(psi: &PureState) -> Result<f64> {
    let d = psi.shape().uniform_dim().ok_or_else(|| {
        Error::ShapeMismatch("two-copy route needs a uniform local dimension".into())
    })?;
    let n = psi.shape().party_count();
    let dim = psi.shape().total_dim();
    let doubled = dim
        .checked_mul(dim)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| {
            Error::SizeGuard(format!(
                "two-copy route needs {dim}² amplitudes (cap 2^20)"
            ))
        })?;
    let s_local = pair_operator(d)?;
    let mut dims2 = Vec::with_capacity(2 * n);
    dims2.extend_from_slice(psi.shape().dims());
    dims2.extend_from_slice(psi.shape().dims());
    // |ψ⟩⊗|ψ⟩ with the copy occupying parties N..2N
    let mut amps = Vec::with_capacity(doubled);
    for a in psi.amplitudes() {
        for b in psi.amplitudes() {
            amps.push(a * b);
        }
    }
    let reference = amps.clone();
    for party in 0..n {
        apply_two_site(&mut amps, &dims2, party, n + party, &s_local);
    }
    let val: Complex64 = reference
        .iter()
        .zip(amps.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(val.re)
}

/// Spectrum report for the pair operator Σ_j σ_j ⊗ σ_j.
#[derive(Debug, Clone)]
pub struct PairOperatorSpectrum {
    pub d: usize,
    pub eigenvalues: Vec<f64>,
    /// Multiplicity found at d − 1 (expected d(d+1)/2).
    pub symmetric_multiplicity: usize,
    /// Multiplicity found at −(d+1) (expected d(d−1)/2).
    pub antisymmetric_multiplicity: usize,
    pub ok: bool,
}

/// Diagonalize the pair operator and check the exact eigenvalue pattern:
/// d−1 on the symmetric subspace, −(d+1) on the antisymmetric one.
pub fn pair_operator_spectrum(d: usize) -> Result<PairOperatorSpectrum> {
    let s = pair_operator(d)?;
    let eigenvalues = hermitian_eigenvalues(&s);
    let plus = (d - 1) as f64;
    let minus = -((d + 1) as f64);
    let tol = 1e-8;
    let symmetric_multiplicity = eigenvalues.iter().filter(|&&e| (e - plus).abs() < tol).count();
    let antisymmetric_multiplicity =
        eigenvalues.iter().filter(|&&e| (e - minus).abs() < tol).count();
    let ok = symmetric_multiplicity == d * (d + 1) / 2
        && antisymmetric_multiplicity == d * (d - 1) / 2
        && symmetric_multiplicity + antisymmetric_multiplicity == d * d;
    Ok(PairOperatorSpectrum {
        d,
        eigenvalues,
        symmetric_multiplicity,
        antisymmetric_multiplicity,
        ok,
    })
}

// ---------------------------------------------------------------------------
// Werner twirl
// ---------------------------------------------------------------------------

/// The swap operator P = Σ |ij⟩⟨ji| on two parties of dimension d.
pub fn swap_operator(d: usize) -> CMat {
    let mut p = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            p[(i * d + j, j * d + i)] = Complex64::new(1.0, 0.0);
        }
    }
    p
}

/// Analytic twirl ∫dU (U⊗U) ρ (U†⊗U†): the unique operator of the form
/// `a·I + b·P` with the same trace and the same swap overlap as ρ.
pub fn werner_twirl(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dims = rho.shape().dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::ShapeMismatch(
            "werner twirl needs two parties of equal dimension".into(),
        ));
    }
    let d = dims[0] as f64;
    let p = swap_operator(dims[0]);
    let f = (rho.matrix() * &p).trace().re;
    // Tr(aI + bP) = a d² + b d = 1, Tr((aI + bP) P) = a d + b d² = f
    let det = d * d * d * d - d * d;
    let a = (d * d - d * f) / det;
    let b = (d * d * f - d) / det;
    let out = CMat::identity(dims[0] * dims[0], dims[0] * dims[0]).map(|v| v * Complex64::new(a, 0.0))
        + p.map(|v| v * Complex64::new(b, 0.0));
    DensityMatrix::from_parts(rho.shape().clone(), out)
}

// ---------------------------------------------------------------------------
// purity route (Möbius inversion) — independent cross-check for C
// ---------------------------------------------------------------------------

/// Length of correlations from subset purities alone:
/// `C = Σ_{A ⊆ parties} (−1)^{N−|A|} (Π_{n∈A} d_n) Tr(ρ_A²)`,
/// with the empty subset contributing (−1)^N. Uses 2^N partial traces; a
/// slow oracle for cross-checking the string-enumeration path (N ≤ 12).
pub fn length_by_subset_purities(state: &State) -> Result<f64> {
    let n = state.shape().party_count();
    if n > 12 {
        return Err(Error::SizeGuard(format!(
            "purity route enumerates 2^{n} subsets (cap N = 12)"
        )));
    }
    let rho = state.density_matrix();
    let dims = state.shape().dims().to_vec();
    let mut total = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    for mask in 1usize..(1 << n) {
        let keep: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).collect();
        let reduced = partial_trace(&rho, &keep)?;
        let dim_a: usize = keep.iter().map(|&p| dims[p]).product();
        let sign = if (n - keep.len()).is_multiple_of(2) { 1.0 } else { -1.0 };
        total += sign * dim_a as f64 * reduced.purity();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{pauli_basis, random_mixed_basis, weyl_heisenberg_basis};
    use crate::named::{self, BellKind};
    use crate::state::tensor_product;

    fn singlet_state() -> State {
        named::bell(BellKind::PsiMinus).into()
    }

    #[test]
    fn singlet_tensor_entries() {
        let t = correlation_tensor(&singlet_state(), &pauli_basis()).unwrap();
        for (name, idx) in [("xx", [1, 1]), ("yy", [2, 2]), ("zz", [3, 3])] {
            let v = t.get(&idx);
            assert!((v.re + 1.0).abs() < 1e-12 && v.im.abs() < 1e-12, "{name} = {v}");
        }
        for i in 1..=3usize {
            for j in 1..=3usize {
                if i != j {
                    assert!(t.get(&[i, j]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn product_zero_zero_tensor() {
        let s: State = named::product_basis_state(&[0, 0], 2).unwrap().into();
        let t = correlation_tensor(&s, &pauli_basis()).unwrap();
        assert!((t.get(&[3, 3]).re - 1.0).abs() < 1e-12);
        assert!((t.get(&[3, 0]).re - 1.0).abs() < 1e-12);
        assert!((t.get(&[0, 3]).re - 1.0).abs() < 1e-12);
        assert!(t.get(&[1, 1]).norm() < 1e-12);
    }

    #[test]
    fn ghz3_tensor_entries() {
        let s: State = named::ghz(3, 2).unwrap().into();
        let t = correlation_tensor(&s, &pauli_basis()).unwrap();
        assert!((t.get(&[1, 1, 1]).re - 1.0).abs() < 1e-12);
        for idx in [[1, 2, 2], [2, 1, 2], [2, 2, 1]] {
            assert!((t.get(&idx).re + 1.0).abs() < 1e-12, "{idx:?}");
        }
    }

    #[test]
    fn correlation_function_examples() {
        let z = [0.0, 0.0, 1.0];
        let x = [1.0, 0.0, 0.0];
        assert!((correlation_function(&singlet_state(), &[z, z]).unwrap() + 1.0).abs() < 1e-12);
        let s00: State = named::product_basis_state(&[0, 0], 2).unwrap().into();
        assert!((correlation_function(&s00, &[z, z]).unwrap() - 1.0).abs() < 1e-12);
        let ghz: State = named::ghz(3, 2).unwrap().into();
        assert!((correlation_function(&ghz, &[x, x, x]).unwrap() - 1.0).abs() < 1e-12);
        assert!(correlation_function(&ghz, &[x, x, [0.5, 0.0, 0.0]]).is_err());
    }

    #[test]
    fn correlation_function_matches_tensor_contraction() {
        // contraction oracle: E = Σ T_{jkl} u_j v_k w_l over full-weight entries
        let ghz: State = named::ghz(3, 2).unwrap().into();
        let t = correlation_tensor(&ghz, &pauli_basis()).unwrap();
        let dirs = [
            [0.6, 0.0, 0.8],
            [0.0, 1.0, 0.0],
            [1.0 / 3.0f64.sqrt(), 1.0 / 3.0f64.sqrt(), 1.0 / 3.0f64.sqrt()],
        ];
        let mut expected = 0.0;
        for j in 1..=3usize {
            for k in 1..=3usize {
                for l in 1..=3usize {
                    expected +=
                        t.get(&[j, k, l]).re * dirs[0][j - 1] * dirs[1][k - 1] * dirs[2][l - 1];
                }
            }
        }
        let got = correlation_function(&ghz, &dirs).unwrap();
        assert!((got - expected).abs() < 1e-10);
    }

    #[test]
    fn ghz_lengths() {
        let b = pauli_basis();
        let c3 = length_of_correlations(&named::ghz(3, 2).unwrap().into(), &b).unwrap();
        assert!((c3 - 4.0).abs() < 1e-10);
        let c4 = length_of_correlations(&named::ghz(4, 2).unwrap().into(), &b).unwrap();
        assert!((c4 - 9.0).abs() < 1e-10);
        let ds = length_of_correlations(&named::double_singlet().into(), &b).unwrap();
        assert!((ds - 9.0).abs() < 1e-10);
    }

    #[test]
    fn five_qubit_length_and_branches() {
        let b = pauli_basis();
        let c = length_of_correlations(&named::five_qubit_counterexample().into(), &b).unwrap();
        assert!((c - 8.0).abs() < 1e-9);
        let zero = named::product_basis_state(&[0], 2).unwrap();
        let one = named::product_basis_state(&[1], 2).unwrap();
        let branch0 = tensor_product(&[zero, named::ghz(4, 2).unwrap()]).unwrap();
        let branch1 = tensor_product(&[one, named::dicke(4, 2).unwrap()]).unwrap();
        for branch in [branch0, branch1] {
            let cb = length_of_correlations(&branch.into(), &b).unwrap();
            assert!((cb - 9.0).abs() < 1e-9);
        }
    }

    #[test]
    fn locc_pair_lengths() {
        let b = pauli_basis();
        let cpsi = length_of_correlations(&named::locc_psi().into(), &b).unwrap();
        let cphi = length_of_correlations(&named::locc_phi().into(), &b).unwrap();
        assert!((cpsi - 8.0).abs() < 1e-9);
        assert!((cphi - 9.0).abs() < 1e-9);
    }

    #[test]
    fn sector_lengths_examples() {
        let ghz = sector_lengths(&named::ghz(3, 2).unwrap().into()).unwrap();
        let want = [1.0, 0.0, 3.0, 4.0];
        for (k, w) in want.iter().enumerate() {
            assert!((ghz.values()[k] - w).abs() < 1e-10, "C_{k}");
        }
        assert!((ghz.total() - 8.0).abs() < 1e-9);
        assert!(ghz.alternating().abs() < 1e-9);

        let s000 = sector_lengths(&named::product_basis_state(&[0, 0, 0], 2).unwrap().into())
            .unwrap();
        let want = [1.0, 3.0, 3.0, 1.0];
        for (k, w) in want.iter().enumerate() {
            assert!((s000.values()[k] - w).abs() < 1e-10, "C_{k}");
        }
    }

    #[test]
    fn entanglement_threshold_examples() {
        let v = is_entangled_pure(&named::product_basis_state(&[0, 0, 0], 2).unwrap()).unwrap();
        assert!(!v.entangled);
        assert!(v.margin.abs() < 1e-9);

        let v = is_entangled_pure(&named::ghz(2, 3).unwrap()).unwrap();
        assert!(v.entangled);
        assert!((v.c - 8.0).abs() < 1e-9);
        assert!((v.margin - 4.0).abs() < 1e-9);

        let v = is_entangled_pure(&named::bell(BellKind::PsiMinus)).unwrap();
        assert!((v.margin - 2.0).abs() < 1e-9);
    }

    #[test]
    fn two_copy_examples() {
        assert!((two_copy_length(&named::ghz(5, 2).unwrap()).unwrap() - 16.0).abs() < 1e-9);
        let zeros = named::product_basis_state(&[0, 0, 0, 0], 2).unwrap();
        assert!((two_copy_length(&zeros).unwrap() - 1.0).abs() < 1e-9);
        assert!((two_copy_length(&named::locc_psi()).unwrap() - 8.0).abs() < 1e-9);
    }

    #[test]
    fn pair_operator_spectra() {
        let r2 = pair_operator_spectrum(2).unwrap();
        assert!(r2.ok);
        assert_eq!(r2.symmetric_multiplicity, 3);
        assert_eq!(r2.antisymmetric_multiplicity, 1);
        let r3 = pair_operator_spectrum(3).unwrap();
        assert!(r3.ok);
        assert_eq!(r3.symmetric_multiplicity, 6);
        assert_eq!(r3.antisymmetric_multiplicity, 3);
        // tracelessness of the pair operator: eigenvalues sum to zero
        let sum: f64 = r3.eigenvalues.iter().sum();
        assert!(sum.abs() < 1e-9);
    }

    #[test]
    fn werner_twirl_examples() {
        // |01⟩⟨01| → (I − P/2)/3
        let s01 = named::product_basis_state(&[0, 1], 2).unwrap().to_density_matrix();
        let t = werner_twirl(&s01).unwrap();
        let p = swap_operator(2);
        let want = (CMat::identity(4, 4) - p.map(|v| v * Complex64::new(0.5, 0.0)))
            .map(|v| v / Complex64::new(3.0, 0.0));
        assert!(crate::linalg::frobenius_distance(t.matrix(), &want) < 1e-12);

        // the singlet projector is a fixed point
        let singlet = named::bell(BellKind::PsiMinus).to_density_matrix();
        let ts = werner_twirl(&singlet).unwrap();
        assert!(crate::linalg::frobenius_distance(ts.matrix(), singlet.matrix()) < 1e-12);

        // idempotence on its own output
        let tt = werner_twirl(&t).unwrap();
        assert!(crate::linalg::frobenius_distance(tt.matrix(), t.matrix()) < 1e-12);
    }

    #[test]
    fn basis_invariance_spot_check() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let psi = crate::sampling::random_pure_state(
            &SystemShape::qudits(2, 3).unwrap(),
            &mut rng,
        );
        let state: State = psi.into();
        let c_gm = length_of_correlations(&state, &gell_mann_basis(3).unwrap()).unwrap();
        let c_w = length_of_correlations(&state, &weyl_heisenberg_basis(3).unwrap()).unwrap();
        let c_m = length_of_correlations(&state, &random_mixed_basis(3, 5).unwrap()).unwrap();
        assert!((c_gm - c_w).abs() < 1e-9);
        assert!((c_gm - c_m).abs() < 1e-9);
    }

    #[test]
    fn purity_route_matches_string_route() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 3, 4] {
            let psi = crate::sampling::random_pure_state(&SystemShape::qubits(n).unwrap(), &mut rng);
            let state: State = psi.into();
            let c = length_of_correlations(&state, &pauli_basis()).unwrap();
            let c_purity = length_by_subset_purities(&state).unwrap();
            assert!((c - c_purity).abs() < 1e-8, "n={n}: {c} vs {c_purity}");
        }
    }

    #[test]
    fn tensor_full_weight_matches_direct_c() {
        let s: State = named::ghz(3, 2).unwrap().into();
        let t = correlation_tensor(&s, &pauli_basis()).unwrap();
        assert!((t.length_of_correlations() - 4.0).abs() < 1e-10);
        assert!(t.max_imag() < 1e-12);
        let sec = t.sector_lengths();
        assert!((sec.total() - 8.0).abs() < 1e-9);
    }

    #[test]
    fn mixed_state_length_via_both_kernels() {
        // reduced GHZ_3 pair: T_zz = 1 is the only full-weight entry → C = 1
        let rho = partial_trace(&named::ghz(3, 2).unwrap().to_density_matrix(), &[0, 1]).unwrap();
        let c = length_of_correlations(&rho.clone().into(), &pauli_basis()).unwrap();
        assert!((c - 1.0).abs() < 1e-10);
        let c_gm = qudit_c_mixed(&rho, &gell_mann_basis(2).unwrap());
        assert!((c_gm - 1.0).abs() < 1e-10);
    }
}
