//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Matrices are `nalgebra::DMatrix<Complex<f64>>`. Composite indices follow the
//! usual Kronecker convention: for `A` of size `r_A x c_A` and `B` of size
//! `r_B x c_B`, entry `(i_A r_B + i_B, j_A c_B + j_B)` of `A ⊗ B` is
//! `A[i_A, j_A] B[i_B, j_B]`.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Which tensor factor survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for ia in 0..ra {
        for ja in 0..ca {
            let x = a[(ia, ja)];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for ib in 0..rb {
                for jb in 0..cb {
                    out[(ia * rb + ib, ja * cb + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let mut out = ComplexVector::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

/// Block-diagonal `A ⊕ B`.
pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let da = ensure_square(a)?;
    let db = ensure_square(b)?;
    let mut out = ComplexMatrix::zeros(da + db, da + db);
    out.view_mut((0, 0), (da, da)).copy_from(a);
    out.view_mut((da, da), (db, db)).copy_from(b);
    Ok(out)
}

/// Partial trace of an operator on `C^{d1} ⊗ C^{d2}`.
pub fn partial_trace(m: &ComplexMatrix, d1: usize, d2: usize, keep: Keep) -> Result<ComplexMatrix> {
    let n = ensure_square(m)?;
    if n != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: n,
        });
    }
    let out = match keep {
        Keep::First => ComplexMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()
        }),
        Keep::Second => ComplexMatrix::from_fn(d2, d2, |i, j| {
            (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum()
        }),
    };
    Ok(out)
}

/// `(M + M†) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace_re(m: &ComplexMatrix) -> f64 {
    m.trace().re
}

/// One cluster of (numerically) degenerate eigenvalues.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub value: f64,
    pub multiplicity: usize,
    pub projector: ComplexMatrix,
}

/// Spectral decomposition of a Hermitian matrix.
///
/// `eigenvalues` are listed with multiplicity in descending order and the
/// columns of `eigenvectors` follow the same order. Eigenvalues closer than the
/// clustering tolerance are grouped and share one projector.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
    pub clusters: Vec<EigenCluster>,
}

impl HermitianSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ_k λ_k P_k` over clusters.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        self.clusters
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, cl| {
                acc + cl.projector.scale(cl.value)
            })
    }

    /// Projector onto the span of eigenvectors whose eigenvalue satisfies `pred`.
    pub fn projector_where(&self, pred: impl Fn(f64) -> bool) -> ComplexMatrix {
        let n = self.dim();
        let mut p = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            if pred(lam) {
                let v = self.eigenvectors.column(k);
                p += v * v.adjoint();
            }
        }
        p
    }
}

/// Eigenvalues only, descending. Symmetrizes the input first.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    ensure_square(m)?;
    let h = hermitian_part(m);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

pub fn hermitian_spectrum(m: &ComplexMatrix, tol: f64) -> Result<HermitianSpectrum> {
    let n = ensure_square(m)?;
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }

    let mut clusters: Vec<EigenCluster> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end - 1] - eigenvalues[end] <= tol {
            end += 1;
        }
        let block = eigenvectors.columns(start, end - start);
        let projector = block * block.adjoint();
        let value = eigenvalues[start..end].iter().sum::<f64>() / (end - start) as f64;
        clusters.push(EigenCluster {
            value,
            multiplicity: end - start,
            projector,
        });
        start = end;
    }

    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
        clusters,
    })
}

/// Number of eigenvalues above `tol` of a Hermitian PSD matrix.
pub fn numerical_rank(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    let ev = hermitian_eigenvalues(m)?;
    if let Some(&min) = ev.last() {
        if min < -tol {
            return Err(Error::NotPositive {
                eigenvalue: min,
                tol,
            });
        }
    }
    Ok(ev.iter().filter(|&&x| x > tol).count())
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Dyad `|ψ⟩⟨ψ|`.
pub fn dyad(psi: &ComplexVector) -> ComplexMatrix {
    psi * psi.adjoint()
}

pub fn basis_vector(dim: usize, index: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[index] = c(1.0, 0.0);
    v
}
