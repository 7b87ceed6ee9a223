use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, ComplexVector};
use crate::PSD_TOL;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, trace and positivity at tolerance `PSD_TOL`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        linalg::ensure_square(&matrix)?;
        linalg::ensure_finite(&matrix)?;
        let deviation = linalg::max_abs(&(&matrix - matrix.adjoint()));
        if deviation > PSD_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = linalg::trace_re(&matrix);
        if (trace - 1.0).abs() > PSD_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        let matrix = linalg::hermitian_part(&matrix);
        let ev = linalg::hermitian_eigenvalues(&matrix)?;
        if let Some(&min) = ev.last() {
            if min < -PSD_TOL {
                return Err(Error::NotPositive {
                    eigenvalue: min,
                    tol: PSD_TOL,
                });
            }
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix known to be PSD with unit trace (e.g. a channel output).
    /// Only symmetrizes; performs no checks.
    pub fn from_psd_unchecked(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: linalg::hermitian_part(&matrix),
        }
    }

    /// `M / Tr M` for a PSD matrix `M` with positive trace.
    pub fn normalized(matrix: ComplexMatrix) -> Result<Self> {
        let trace = linalg::trace_re(&matrix);
        if trace.is_nan() || trace <= 0.0 {
            return Err(Error::NotUnitTrace { trace });
        }
        Self::new(matrix.unscale(trace))
    }

    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > PSD_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self::from_psd_unchecked(linalg::dyad(psi)))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        Self::from_psd_unchecked(linalg::dyad(&linalg::basis_vector(dim, index)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_psd_unchecked(linalg::identity(dim).unscale(dim as f64))
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let v = ComplexVector::from_iterator(probs.len(), probs.iter().map(|&p| c(p, 0.0)));
        Self::new(ComplexMatrix::from_diagonal(&v))
    }

    /// `(1-t) self + t other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange {
                name: "t",
                value: t,
                min: 0.0,
                max: 1.0,
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self::from_psd_unchecked(
            self.matrix.scale(1.0 - t) + other.matrix.scale(t),
        ))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_psd_unchecked(linalg::kron(&self.matrix, &other.matrix))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix).expect("density operator is square")
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&x| x > tol).count()
    }
}

/// Row-major `[[re, im], ...]` encoding of a complex matrix.
pub(crate) fn encode_entries(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out.push([z.re, z.im]);
        }
    }
    out
}

pub(crate) fn decode_entries(
    rows: usize,
    cols: usize,
    entries: &[[f64; 2]],
) -> Result<ComplexMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::Json(format!(
            "expected {} entries for a {rows}x{cols} matrix, found {}",
            rows * cols,
            entries.len()
        )));
    }
    let m = ComplexMatrix::from_fn(rows, cols, |i, j| {
        let [re, im] = entries[i * cols + j];
        c(re, im)
    });
    linalg::ensure_finite(&m)?;
    Ok(m)
}

pub(crate) fn encode_vector(v: &ComplexVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Serialize, Deserialize)]
struct DensityDoc {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DensityDoc {
            dim: self.dim(),
            entries: encode_entries(&self.matrix),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = DensityDoc::deserialize(deserializer)?;
        let m = decode_entries(doc.dim, doc.dim, &doc.entries).map_err(serde::de::Error::custom)?;
        DensityOperator::new(m).map_err(serde::de::Error::custom)
    }
}
