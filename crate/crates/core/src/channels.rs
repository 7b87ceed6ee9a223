//! Channel pairs generated by an isometry `J: H_a -> H_b ⊗ H_c`.
//!
//! The direct channel is `B(A) = Tr_c(J A J†)` and its complement is
//! `C(A) = Tr_b(J A J†)`. Output indices are b-major: basis ket `|i_b⟩|i_c⟩`
//! sits at row `i_b * d_c + i_c` of `J`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, ComplexVector, Keep};
use crate::state::{self, DensityOperator};
use crate::ISOMETRY_TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    matrix: ComplexMatrix,
    d_a: usize,
    d_b: usize,
    d_c: usize,
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            min: 0.0,
            max: 1.0,
        })
    }
}

impl Isometry {
    /// Wraps `matrix` of shape `(d_b d_c) x d_a`, checking `J†J = I` within `ISOMETRY_TOL`.
    pub fn new(matrix: ComplexMatrix, d_b: usize, d_c: usize) -> Result<Self> {
        linalg::ensure_finite(&matrix)?;
        if d_b == 0 || d_c == 0 || matrix.ncols() == 0 {
            return Err(Error::InvalidDimensions(
                "dimensions must be positive".into(),
            ));
        }
        if matrix.nrows() != d_b * d_c {
            return Err(Error::DimensionMismatch {
                expected: d_b * d_c,
                found: matrix.nrows(),
            });
        }
        let d_a = matrix.ncols();
        let deviation = linalg::max_abs(&(matrix.adjoint() * &matrix - linalg::identity(d_a)));
        if deviation > ISOMETRY_TOL {
            return Err(Error::NotIsometry { deviation });
        }
        Ok(Self {
            matrix,
            d_a,
            d_b,
            d_c,
        })
    }

    /// `J|i⟩ = |i⟩_b |0⟩_c`: noiseless direct channel, trivial environment.
    pub fn identity_like(dim: usize) -> Self {
        Self {
            matrix: linalg::identity(dim),
            d_a: dim,
            d_b: dim,
            d_c: 1,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn d_c(&self) -> usize {
        self.d_c
    }

    fn check_input_dim(&self, dim: usize) -> Result<()> {
        if dim != self.d_a {
            return Err(Error::DimensionMismatch {
                expected: self.d_a,
                found: dim,
            });
        }
        Ok(())
    }

    /// `J ψ`.
    pub fn apply_vector(&self, psi: &ComplexVector) -> Result<ComplexVector> {
        self.check_input_dim(psi.len())?;
        Ok(&self.matrix * psi)
    }

    /// `J A J†` for any operator `A` on `H_a`.
    pub fn conjugate(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        linalg::ensure_square(a)?;
        self.check_input_dim(a.nrows())?;
        Ok(&self.matrix * a * self.matrix.adjoint())
    }

    /// `(B(A), C(A))` for any operator `A` on `H_a`.
    pub fn apply_pair(&self, a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let big = self.conjugate(a)?;
        let b = linalg::partial_trace(&big, self.d_b, self.d_c, Keep::First)?;
        let c = linalg::partial_trace(&big, self.d_b, self.d_c, Keep::Second)?;
        Ok((b, c))
    }

    /// `(ρ_b, ρ_c) = (B(ρ), C(ρ))`.
    pub fn outputs(&self, rho: &DensityOperator) -> Result<(DensityOperator, DensityOperator)> {
        let (b, c) = self.apply_pair(rho.matrix())?;
        Ok((
            DensityOperator::from_psd_unchecked(b),
            DensityOperator::from_psd_unchecked(c),
        ))
    }

    /// `(rank B(I_a), rank C(I_a))`.
    pub fn minimal_output_dims(&self, tol: f64) -> (usize, usize) {
        let (b, c) = self
            .apply_pair(&linalg::identity(self.d_a).unscale(self.d_a as f64))
            .expect("identity has input dimension");
        let rb = linalg::numerical_rank(&b, tol).expect("channel output is PSD");
        let rc = linalg::numerical_rank(&c, tol).expect("channel output is PSD");
        (rb, rc)
    }

    pub fn is_minimal(&self, tol: f64) -> bool {
        self.minimal_output_dims(tol) == (self.d_b, self.d_c)
    }

    /// Restricts both outputs to the supports of `B(I_a)` and `C(I_a)`, giving
    /// an equivalent isometry with minimal declared dimensions.
    pub fn trim(&self, tol: f64) -> Result<Self> {
        let (b, c) = self.apply_pair(&linalg::identity(self.d_a))?;
        let support = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
            let sp = linalg::hermitian_spectrum(m, tol)?;
            let r = sp.eigenvalues.iter().filter(|&&x| x > tol).count();
            Ok(sp.eigenvectors.columns(0, r).into_owned())
        };
        let vb = support(&b)?;
        let vc = support(&c)?;
        let proj = linalg::kron(&vb.adjoint(), &vc.adjoint());
        Self::new(proj * &self.matrix, vb.ncols(), vc.ncols())
    }

    /// The same pair with the roles of `H_b` and `H_c` exchanged, so the
    /// complementary channel becomes the direct one.
    pub fn swapped(&self) -> Self {
        let mut m = ComplexMatrix::zeros(self.matrix.nrows(), self.d_a);
        for ib in 0..self.d_b {
            for ic in 0..self.d_c {
                m.set_row(ic * self.d_b + ib, &self.matrix.row(ib * self.d_c + ic));
            }
        }
        Self {
            matrix: m,
            d_a: self.d_a,
            d_b: self.d_c,
            d_c: self.d_b,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&IsometryDoc::from(self)).expect("isometry serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: IsometryDoc = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        Self::try_from(doc)
    }
}

/// JSON document `{d_a, d_b, d_c, entries: [[re, im], ...]}`, entries row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsometryDoc {
    pub d_a: usize,
    pub d_b: usize,
    pub d_c: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&Isometry> for IsometryDoc {
    fn from(j: &Isometry) -> Self {
        Self {
            d_a: j.d_a,
            d_b: j.d_b,
            d_c: j.d_c,
            entries: state::encode_entries(&j.matrix),
        }
    }
}

impl TryFrom<IsometryDoc> for Isometry {
    type Error = Error;

    fn try_from(doc: IsometryDoc) -> Result<Self> {
        let m = state::decode_entries(doc.d_b * doc.d_c, doc.d_a, &doc.entries)?;
        Isometry::new(m, doc.d_b, doc.d_c)
    }
}

impl Serialize for Isometry {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        IsometryDoc::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Isometry {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let doc = IsometryDoc::deserialize(deserializer)?;
        Isometry::try_from(doc).map_err(serde::de::Error::custom)
    }
}

/// `(ρ_b, ρ_c)` for input `ρ`.
pub fn channel_outputs(
    j: &Isometry,
    rho: &DensityOperator,
) -> Result<(DensityOperator, DensityOperator)> {
    j.outputs(rho)
}

pub fn minimal_output_dims(j: &Isometry, tol: f64) -> (usize, usize) {
    j.minimal_output_dims(tol)
}

/// Builder for isometries given column by column as sums of `amp |i_b i_c⟩`.
struct Columns {
    d_b: usize,
    d_c: usize,
    m: ComplexMatrix,
}

impl Columns {
    fn new(d_a: usize, d_b: usize, d_c: usize) -> Self {
        Self {
            d_b,
            d_c,
            m: ComplexMatrix::zeros(d_b * d_c, d_a),
        }
    }

    fn set(&mut self, input: usize, ib: usize, ic: usize, amp: f64) -> &mut Self {
        self.m[(ib * self.d_c + ic, input)] = c(amp, 0.0);
        self
    }

    fn build(self) -> Result<Isometry> {
        Isometry::new(self.m, self.d_b, self.d_c)
    }
}

/// Three-level pair with `J|0⟩ = √(1-p)|00⟩ + √p|11⟩`, `J|1⟩ = |21⟩`, `J|2⟩ = |12⟩`.
pub fn build_pedagogic(p: f64) -> Result<Isometry> {
    check_unit("p", p)?;
    let mut cols = Columns::new(3, 3, 3);
    cols.set(0, 0, 0, (1.0 - p).sqrt())
        .set(0, 1, 1, p.sqrt())
        .set(1, 2, 1, 1.0)
        .set(2, 1, 2, 1.0);
    cols.build()
}

/// Qubit pair `J|0⟩ = √(1-mp)|00⟩ + √(mp)|11⟩`, `J|1⟩ = √(1-p)|10⟩ + √p|01⟩`.
///
/// At `m = 0` the direct channel is amplitude damping with damping probability `p`.
pub fn build_qubit_family(m: f64, p: f64) -> Result<Isometry> {
    check_unit("m", m)?;
    check_unit("p", p)?;
    let mut cols = Columns::new(2, 2, 2);
    cols.set(0, 0, 0, (1.0 - m * p).sqrt())
        .set(0, 1, 1, (m * p).sqrt())
        .set(1, 1, 0, (1.0 - p).sqrt())
        .set(1, 0, 1, p.sqrt());
    cols.build()
}

pub fn build_amplitude_damping(p: f64) -> Result<Isometry> {
    build_qubit_family(0.0, p)
}

/// Qutrit pair `J|0⟩ = √s|00⟩ + √(1-s)|11⟩`, `J|1⟩ = |21⟩`, `J|2⟩ = |20⟩`
/// with `d_b = 3`, `d_c = 2` declared for every `s`.
pub fn build_qutrit(s: f64) -> Result<Isometry> {
    check_unit("s", s)?;
    let mut cols = Columns::new(3, 3, 2);
    cols.set(0, 0, 0, s.sqrt())
        .set(0, 1, 1, (1.0 - s).sqrt())
        .set(1, 2, 1, 1.0)
        .set(2, 2, 0, 1.0);
    cols.build()
}

/// Generalized erasure pair `B = (1-λ)B₁ ⊕ λ Tr(·)[e]`, `C = (1-λ)C₁ ⊕ λ id`.
///
/// The flag `|e⟩` is the last basis vector of `H_b` (index `d_b1`); the copy of
/// the input occupies `H_c` indices `d_c1 .. d_c1 + d_a`.
pub fn build_generalized_erasure(j1: &Isometry, lambda: f64) -> Result<Isometry> {
    check_unit("lambda", lambda)?;
    let (d_a, d_b1, d_c1) = (j1.d_a, j1.d_b, j1.d_c);
    let d_b = d_b1 + 1;
    let d_c = d_c1 + d_a;
    let keep = (1.0 - lambda).sqrt();
    let mut m = ComplexMatrix::zeros(d_b * d_c, d_a);
    for i in 0..d_a {
        for ib in 0..d_b1 {
            for ic in 0..d_c1 {
                m[(ib * d_c + ic, i)] = j1.matrix[(ib * d_c1 + ic, i)] * keep;
            }
        }
        m[(d_b1 * d_c + d_c1 + i, i)] = c(lambda.sqrt(), 0.0);
    }
    Isometry::new(m, d_b, d_c)
}

/// Erasure channel with erasure probability `1 - λ` as the direct channel.
pub fn build_erasure(lambda: f64) -> Result<Isometry> {
    Ok(build_generalized_erasure(&build_qubit_family(0.0, 0.0)?, lambda)?.swapped())
}

/// Pair `(B_x ⊗ B_y, C_x ⊗ C_y)` with outputs regrouped as `(b_x b_y)(c_x c_y)`.
pub fn tensor_pair(jx: &Isometry, jy: &Isometry) -> Isometry {
    let raw = linalg::kron(&jx.matrix, &jy.matrix);
    let (dbx, dcx, dby, dcy) = (jx.d_b, jx.d_c, jy.d_b, jy.d_c);
    let d_c = dcx * dcy;
    let mut m = ComplexMatrix::zeros(raw.nrows(), raw.ncols());
    for bx in 0..dbx {
        for cx in 0..dcx {
            for by in 0..dby {
                for cy in 0..dcy {
                    let src = (bx * dcx + cx) * (dby * dcy) + by * dcy + cy;
                    let dst = (bx * dby + by) * d_c + cx * dcy + cy;
                    m.set_row(dst, &raw.row(src));
                }
            }
        }
    }
    Isometry {
        matrix: m,
        d_a: jx.d_a * jy.d_a,
        d_b: dbx * dby,
        d_c,
    }
}
