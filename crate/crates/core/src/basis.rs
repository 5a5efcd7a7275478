//! Local operator bases: identity plus `d² − 1` traceless operators
//! normalized so that `Tr(σ_j σ_k†) = d δ_jk`.
//!
//! Three families are provided — the Pauli matrices, the generalized
//! Gell-Mann matrices (Hermitian), and the Weyl-Heisenberg matrices
//! (unitary, non-Hermitian for d ≥ 2) — plus seeded random unitary
//! mixtures of the Gell-Mann elements for invariance testing.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{CMat, C_ZERO};

const BASIS_TOL: f64 = 1e-10;

/// Which construction produced a basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    Pauli,
    GellMann,
    WeylHeisenberg,
    /// Gell-Mann elements mixed by a seeded Haar-random unitary.
    Mixed(u64),
}

impl std::fmt::Display for BasisTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisTag::Pauli => write!(f, "pauli"),
            BasisTag::GellMann => write!(f, "gell-mann"),
            BasisTag::WeylHeisenberg => write!(f, "weyl"),
            BasisTag::Mixed(seed) => write!(f, "mixed:{seed}"),
        }
    }
}

/// A traceless operator basis for one local dimension.
///
/// The identity (index 0 in correlation-tensor indexing) is implicit;
/// `elements[j]` holds σ_{j+1}. Alongside each element its adjoint is
/// precomputed since the tensor coefficients contract against σ†.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    tag: BasisTag,
    elements: Vec<CMat>,
    adjoints: Vec<CMat>,
}

impl OperatorBasis {
    /// Wrap raw elements, enforcing the trace conditions to 1e-10.
    pub fn new(dim: usize, tag: BasisTag, elements: Vec<CMat>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument(format!(
                "local dimension must be at least 2, got {dim}"
            )));
        }
        if elements.len() != dim * dim - 1 {
            return Err(Error::InvalidBasis(format!(
                "expected {} elements for d={dim}, got {}",
                dim * dim - 1,
                elements.len()
            )));
        }
        for (j, e) in elements.iter().enumerate() {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::InvalidBasis(format!("element {j} is not {dim}x{dim}")));
            }
            let tr: Complex64 = e.trace();
            if tr.norm() > BASIS_TOL {
                return Err(Error::InvalidBasis(format!(
                    "element {j} has trace {tr} (must vanish)"
                )));
            }
        }
        for j in 0..elements.len() {
            for k in 0..elements.len() {
                let overlap = (&elements[j] * elements[k].adjoint()).trace();
                let want = if j == k { dim as f64 } else { 0.0 };
                if (overlap - Complex64::new(want, 0.0)).norm() > BASIS_TOL {
                    return Err(Error::InvalidBasis(format!(
                        "Tr(σ_{j} σ_{k}†) = {overlap}, expected {want}"
                    )));
                }
            }
        }
        let adjoints = elements.iter().map(|e| e.adjoint()).collect();
        Ok(Self { dim, tag, elements, adjoints })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tag(&self) -> BasisTag {
        self.tag
    }

    /// Number of traceless elements, `d² − 1`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// σ_{j+1} (the identity is not stored).
    pub fn element(&self, j: usize) -> &CMat {
        &self.elements[j]
    }

    /// σ_{j+1}†.
    pub fn adjoint_element(&self, j: usize) -> &CMat {
        &self.adjoints[j]
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    /// True when every element is Hermitian (Pauli, Gell-Mann); correlation
    /// tensors are then real.
    pub fn is_hermitian(&self) -> bool {
        self.elements
            .iter()
            .all(|e| crate::linalg::hermiticity_defect(e) < BASIS_TOL)
    }
}

fn cmat_from_rows(d: usize, rows: &[Complex64]) -> CMat {
    CMat::from_row_slice(d, d, rows)
}

/// The qubit Pauli basis {σ_x, σ_y, σ_z}, in that order.
pub fn pauli_basis() -> OperatorBasis {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let x = cmat_from_rows(2, &[C_ZERO, one, one, C_ZERO]);
    let y = cmat_from_rows(2, &[C_ZERO, -i, i, C_ZERO]);
    let z = cmat_from_rows(2, &[one, C_ZERO, C_ZERO, -one]);
    OperatorBasis::new(2, BasisTag::Pauli, vec![x, y, z]).expect("pauli basis is valid")
}

/// Generalized Gell-Mann basis for local dimension `d`.
///
/// Element order: symmetric off-diagonal pairs `√(d/2)(|m⟩⟨n| + |n⟩⟨m|)` in
/// lexicographic `(m, n)` order, then the antisymmetric pairs
/// `√(d/2)(−i|m⟩⟨n| + i|n⟩⟨m|)`, then the diagonal operators
/// `√(d/((l+1)(l+2))) (Σ_{j≤l} |j⟩⟨j| − (l+1)|l+1⟩⟨l+1|)` for l = 0..d−2.
/// For d = 2 this reproduces {σ_x, σ_y, σ_z} exactly.
pub fn gell_mann_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "gell-mann basis needs d >= 2, got {d}"
        )));
    }
    let mut elements = Vec::with_capacity(d * d - 1);
    let sym_norm = Complex64::new((d as f64 / 2.0).sqrt(), 0.0);
    for m in 0..d {
        for n in (m + 1)..d {
            let mut g = CMat::zeros(d, d);
            g[(m, n)] = sym_norm;
            g[(n, m)] = sym_norm;
            elements.push(g);
        }
    }
    for m in 0..d {
        for n in (m + 1)..d {
            let mut g = CMat::zeros(d, d);
            g[(m, n)] = Complex64::new(0.0, -1.0) * sym_norm;
            g[(n, m)] = Complex64::new(0.0, 1.0) * sym_norm;
            elements.push(g);
        }
    }
    for l in 0..(d - 1) {
        let norm = (d as f64 / ((l + 1) as f64 * (l + 2) as f64)).sqrt();
        let mut g = CMat::zeros(d, d);
        for j in 0..=l {
            g[(j, j)] = Complex64::new(norm, 0.0);
        }
        g[(l + 1, l + 1)] = Complex64::new(-norm * (l + 1) as f64, 0.0);
        elements.push(g);
    }
    OperatorBasis::new(d, BasisTag::GellMann, elements)
}

/// Weyl-Heisenberg basis `W_{mn} = X^m Z^n`, `(m, n) ≠ (0, 0)` in
/// lexicographic order, where `Z = Σ_k ω^k |k⟩⟨k|` with `ω = exp(2πi/d)`
/// and `X = Σ_k |k+1 mod d⟩⟨k|`. All elements are unitary and, except in
/// trivial cases, non-Hermitian.
pub fn weyl_heisenberg_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "weyl-heisenberg basis needs d >= 2, got {d}"
        )));
    }
    let mut z = CMat::zeros(d, d);
    for k in 0..d {
        let phase = 2.0 * PI * k as f64 / d as f64;
        z[(k, k)] = Complex64::new(phase.cos(), phase.sin());
    }
    let mut x = CMat::zeros(d, d);
    for k in 0..d {
        x[((k + 1) % d, k)] = Complex64::new(1.0, 0.0);
    }
    let mut elements = Vec::with_capacity(d * d - 1);
    let mut xm = CMat::identity(d, d);
    for m in 0..d {
        let mut w = xm.clone();
        for n in 0..d {
            if m != 0 || n != 0 {
                elements.push(w.clone());
            }
            w *= &z;
        }
        xm = &x * xm;
    }
    OperatorBasis::new(d, BasisTag::WeylHeisenberg, elements)
}

/// Haar-random unitary via QR of a complex Ginibre matrix, with the
/// standard phase correction on the R diagonal.
pub(crate) fn haar_unitary_from_rng<R: rand::Rng>(n: usize, rng: &mut R) -> CMat {
    use rand_distr::StandardNormal;
    let g = CMat::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for c in 0..n {
        let pivot = r[(c, c)];
        let phase = if pivot.norm() > 0.0 {
            pivot / Complex64::new(pivot.norm(), 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        for rr in 0..n {
            u[(rr, c)] *= phase;
        }
    }
    u
}

/// A basis obtained by mixing the Gell-Mann elements with a seeded
/// Haar-random `(d²−1) × (d²−1)` unitary α: `σ'_j = Σ_k α_{jk} σ_k`.
/// Unitarity of α preserves the trace conditions, so the result is again
/// a valid basis; its elements are generally neither Hermitian nor unitary.
pub fn random_mixed_basis(d: usize, seed: u64) -> Result<OperatorBasis> {
    let gm = gell_mann_basis(d)?;
    let k = d * d - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = haar_unitary_from_rng(k, &mut rng);
    let mut elements = Vec::with_capacity(k);
    for j in 0..k {
        let mut e = CMat::zeros(d, d);
        for l in 0..k {
            e += gm.element(l).map(|v| v * alpha[(j, l)]);
        }
        elements.push(e);
    }
    OperatorBasis::new(d, BasisTag::Mixed(seed), elements)
}

/// Look up a basis by CLI-style name: `pauli`, `gell-mann`, `weyl`,
/// or `mixed:<seed>`.
pub fn basis_by_name(name: &str, d: usize) -> Result<OperatorBasis> {
    match name {
        "pauli" => {
            if d != 2 {
                return Err(Error::InvalidArgument(format!(
                    "pauli basis is for qubits, got d={d}"
                )));
            }
            Ok(pauli_basis())
        }
        "gell-mann" => gell_mann_basis(d),
        "weyl" => weyl_heisenberg_basis(d),
        other => {
            if let Some(seed) = other.strip_prefix("mixed:") {
                let seed: u64 = seed.parse().map_err(|_| {
                    Error::InvalidArgument(format!("bad seed in basis name '{other}'"))
                })?;
                random_mixed_basis(d, seed)
            } else {
                Err(Error::InvalidArgument(format!("unknown basis '{other}'")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_trace_conditions() {
        let b = pauli_basis();
        // Tr(σ_x σ_y†) = 0, Tr(σ_z σ_z†) = 2
        let xy = (b.element(0) * b.element(1).adjoint()).trace();
        assert!(xy.norm() < 1e-14);
        let zz = (b.element(2) * b.element(2).adjoint()).trace();
        assert!((zz - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pauli_algebra_xy_is_iz() {
        let b = pauli_basis();
        let xy = b.element(0) * b.element(1);
        let iz = b.element(2).map(|v| v * c(0.0, 1.0));
        assert!(crate::linalg::frobenius_distance(&xy, &iz) < 1e-14);
    }

    #[test]
    fn gell_mann_d2_is_pauli_elementwise() {
        let gm = gell_mann_basis(2).unwrap();
        let p = pauli_basis();
        for j in 0..3 {
            assert!(
                crate::linalg::frobenius_distance(gm.element(j), p.element(j)) < 1e-14,
                "element {j} differs"
            );
        }
    }

    #[test]
    fn gell_mann_d3_count_hermitian_norm() {
        let gm = gell_mann_basis(3).unwrap();
        assert_eq!(gm.len(), 8);
        for j in 0..8 {
            assert!(crate::linalg::hermiticity_defect(gm.element(j)) < 1e-14);
            let n = (gm.element(j) * gm.element(j).adjoint()).trace();
            assert!((n - c(3.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn gell_mann_d4_last_diagonal() {
        let gm = gell_mann_basis(4).unwrap();
        // final diagonal operator: entries (1,1,1,-3) · √(4/12)
        let lam = gm.element(gm.len() - 1);
        let s = (4.0f64 / 12.0).sqrt();
        for j in 0..3 {
            assert!((lam[(j, j)] - c(s, 0.0)).norm() < 1e-14);
        }
        assert!((lam[(3, 3)] - c(-3.0 * s, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn weyl_d2_is_x_z_xz() {
        let w = weyl_heisenberg_basis(2).unwrap();
        assert_eq!(w.len(), 3);
        // order (m,n): (0,1)=Z, (1,0)=X, (1,1)=XZ
        let p = pauli_basis();
        assert!(crate::linalg::frobenius_distance(w.element(0), p.element(2)) < 1e-14);
        assert!(crate::linalg::frobenius_distance(w.element(1), p.element(0)) < 1e-14);
        let xz = p.element(0) * p.element(2);
        assert!(crate::linalg::frobenius_distance(w.element(2), &xz) < 1e-14);
        // XZ is not Hermitian
        assert!(crate::linalg::hermiticity_defect(w.element(2)) > 1.0);
    }

    #[test]
    fn weyl_d3_z_eigenvalues_are_cube_roots() {
        let w = weyl_heisenberg_basis(3).unwrap();
        // element (0,1) is Z itself; diagonal entries are the cube roots of unity
        let z = w.element(0);
        for k in 0..3 {
            let want = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
            assert!((z[(k, k)] - want).norm() < 1e-14);
        }
        for j in 0..w.len() {
            assert!(w.element(j).trace().norm() < 1e-12, "element {j} not traceless");
            let uu = w.element(j) * w.element(j).adjoint();
            assert!(
                crate::linalg::frobenius_distance(&uu, &CMat::identity(3, 3)) < 1e-12,
                "element {j} not unitary"
            );
        }
    }

    #[test]
    fn mixed_basis_passes_validator_and_is_reproducible() {
        for seed in [0u64, 1, 42] {
            let b = random_mixed_basis(3, seed).unwrap();
            assert_eq!(b.len(), 8);
            let b2 = random_mixed_basis(3, seed).unwrap();
            for j in 0..8 {
                assert!(crate::linalg::frobenius_distance(b.element(j), b2.element(j)) < 1e-15);
            }
        }
    }

    #[test]
    fn basis_norm_sum_identity() {
        // Tr(Σ_j σ_j σ_j†) = d (d² − 1)
        for d in 2..=4 {
            for b in [gell_mann_basis(d).unwrap(), weyl_heisenberg_basis(d).unwrap()] {
                let total: Complex64 = (0..b.len())
                    .map(|j| (b.element(j) * b.element(j).adjoint()).trace())
                    .sum();
                let want = (d * (d * d - 1)) as f64;
                assert!((total - c(want, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_bad_dimension() {
        assert!(gell_mann_basis(1).is_err());
        assert!(weyl_heisenberg_basis(0).is_err());
    }

    #[test]
    fn basis_by_name_roundtrip() {
        assert_eq!(basis_by_name("pauli", 2).unwrap().tag(), BasisTag::Pauli);
        assert_eq!(basis_by_name("gell-mann", 3).unwrap().tag(), BasisTag::GellMann);
        assert_eq!(basis_by_name("weyl", 3).unwrap().tag(), BasisTag::WeylHeisenberg);
        assert_eq!(basis_by_name("mixed:7", 3).unwrap().tag(), BasisTag::Mixed(7));
        assert!(basis_by_name("pauli", 3).is_err());
        assert!(basis_by_name("nope", 2).is_err());
    }
}
