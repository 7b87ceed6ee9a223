//! Seeded generators for states and isometries.
//!
//! Every consumer that fans work out over indices derives one generator per
//! index with [`indexed_rng`], so results do not depend on evaluation order.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::Isometry;
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::state::DensityOperator;

pub fn indexed_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed unit vector.
pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexVector {
    let v = ComplexVector::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

/// Full-rank density operator `G G† / Tr(G G†)` with square Ginibre `G`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    random_density_rank(rng, dim, dim)
}

/// Density operator of rank `rank` (almost surely).
pub fn random_density_rank<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    rank: usize,
) -> DensityOperator {
    let g = ginibre(rng, dim, rank);
    let m = &g * g.adjoint();
    let t = m.trace().re;
    DensityOperator::from_psd_unchecked(m.unscale(t))
}

/// Random isometry `C^{d_a} -> C^{d_b} ⊗ C^{d_c}` from the QR factor of a
/// Gaussian matrix. Requires `d_a <= d_b d_c`.
pub fn random_isometry<R: Rng + ?Sized>(
    rng: &mut R,
    d_a: usize,
    d_b: usize,
    d_c: usize,
) -> Isometry {
    assert!(d_a <= d_b * d_c, "input dimension exceeds output dimension");
    let g = ginibre(rng, d_b * d_c, d_a);
    let q = g.qr().q();
    Isometry::new(q, d_b, d_c).expect("QR factor has orthonormal columns")
}
