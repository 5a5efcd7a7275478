//! Small shared linear-algebra helpers over dense complex matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Kronecker product in "left factor most significant" index order.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Cyclic Jacobi eigendecomposition of a real symmetric matrix.
///
/// Returns `(eigenvalues, eigenvectors)` ascending, eigenvectors as
/// orthonormal columns that diagonalize the input — reliable also for
/// degenerate spectra, which is why a library solver is not used here.
pub fn symmetric_eigen_f64(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    let mut a = (m + m.transpose()).scale(0.5);
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let stop = 1e-14 * scale;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if (2.0 * off).sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = c * arp - s * arq;
                    a[(r, q)] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = a[(p, r)];
                    let aqr = a[(q, r)];
                    a[(p, r)] = c * apr - s * aqr;
                    a[(q, r)] = s * apr + c * aqr;
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = c * vrp - s * vrq;
                    v[(r, q)] = s * vrp + c * vrq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &v.column(i));
    }
    (values, vectors)
}

/// Eigendecomposition of a complex Hermitian matrix, eigenvalues ascending,
/// eigenvectors as orthonormal columns.
///
/// Runs the real Jacobi solver on the standard real embedding
/// `[[Re H, −Im H], [Im H, Re H]]`, whose spectrum doubles that of H, and
/// recovers one complex eigenvector per doubled pair. Within a degenerate
/// cluster any orthonormal basis of the eigenspace is valid, so the
/// recovery orthonormalizes greedily inside each cluster.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    let h = (m + m.adjoint()).scale(0.5);
    let mut embedded = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            embedded[(i, j)] = h[(i, j)].re;
            embedded[(n + i, n + j)] = h[(i, j)].re;
            embedded[(n + i, j)] = h[(i, j)].im;
            embedded[(i, n + j)] = -h[(i, j)].im;
        }
    }
    let (dvals, dvecs) = symmetric_eigen_f64(&embedded);
    let scale = dvals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cluster_tol = (1e-10 * scale).max(1e-13);
    let mut values = Vec::with_capacity(n);
    let mut kept: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut idx = 0usize;
    while idx < 2 * n {
        // one degenerate cluster of the embedded spectrum at a time
        let mut end = idx + 1;
        while end < 2 * n && (dvals[end] - dvals[end - 1]).abs() <= cluster_tol {
            end += 1;
        }
        let mut cluster_kept = 0usize;
        for col in idx..end {
            let mut cand: Vec<Complex64> = (0..n)
                .map(|r| Complex64::new(dvecs[(r, col)], dvecs[(n + r, col)]))
                .collect();
            for b in &kept[kept.len() - cluster_kept..] {
                let overlap: Complex64 =
                    b.iter().zip(&cand).map(|(x, y)| x.conj() * y).sum();
                for r in 0..n {
                    cand[r] -= overlap * b[r];
                }
            }
            let norm: f64 = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for z in &mut cand {
                    *z /= Complex64::new(norm, 0.0);
                }
                kept.push(cand);
                values.push(dvals[col]);
                cluster_kept += 1;
            }
        }
        debug_assert_eq!(2 * cluster_kept, end - idx, "cluster recovery miscounted");
        idx = end;
    }
    assert_eq!(kept.len(), n, "hermitian eigenvector recovery failed");
    let mut vectors = CMat::zeros(n, n);
    for (col, vec) in kept.iter().enumerate() {
        for r in 0..n {
            vectors[(r, col)] = vec[r];
        }
    }
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm()
}

/// Largest absolute deviation from Hermiticity, `max |m_ij - conj(m_ji)|`.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// In-place modified Gram-Schmidt on the columns of `m`.
///
/// Columns whose residual norm falls below `tol` are dropped; the surviving
/// orthonormal columns are returned.
pub fn orthonormalize_columns(m: &CMat, tol: f64) -> Vec<Vec<Complex64>> {
    let rows = m.nrows();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for c in 0..m.ncols() {
        let mut v: Vec<Complex64> = m.column(c).iter().cloned().collect();
        for b in &basis {
            let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for i in 0..rows {
                v[i] -= overlap * b[i];
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > tol {
            for z in &mut v {
                *z /= Complex64::new(norm, 0.0);
            }
            basis.push(v);
        }
    }
    basis
}
