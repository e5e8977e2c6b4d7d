//! Seeded random generators for complexes and multicomplexes, used by the
//! property suites and `selftest`.

use rand::Rng;

use super::{tensor_product, CochainComplex, Multicomplex};
use crate::exactlinalg::{Field, Matrix, Subspace};
use crate::Result;

fn random_matrix<R: Rng>(rng: &mut R, field: Field, rows: usize, cols: usize) -> Matrix {
    let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-2..=2)).collect();
    Matrix::from_i64(field, rows, cols, &entries)
}

/// A random cochain complex in degrees `lo..lo+len` with dimensions at most
/// `max_dim`. Each differential is a random map out of the cokernel of the
/// previous one, so `d∘d = 0` holds by construction.
pub fn random_complex<R: Rng>(rng: &mut R, field: Field, lo: i64, len: usize, max_dim: usize) -> Result<CochainComplex> {
    let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_dim)).collect();
    let mut maps = Vec::new();
    let mut prev_image = Subspace::zero(field, dims.first().copied().unwrap_or(0));
    for t in 0..len.saturating_sub(1) {
        let forms = prev_image.annihilator();
        let m = random_matrix(rng, field, dims[t + 1], forms.rows());
        let d = m.mul(&forms)?;
        prev_image = d.image();
        maps.push(d);
    }
    CochainComplex::from_maps(field, lo, &dims, maps)
}

/// A tensor product of `n` random complexes supported in `[0, 1]`,
/// entries of dimension at most `max_dim` (factor dims are chosen so the
/// product entries respect the cap).
pub fn random_tensor_multicomplex<R: Rng>(rng: &mut R, field: Field, n: usize, max_dim: usize) -> Result<Multicomplex> {
    let mut budget = max_dim.max(1);
    let mut factors = Vec::with_capacity(n);
    for _ in 0..n {
        let cap = if budget >= 2 && rng.gen_bool(0.5) { 2 } else { 1 };
        let cap = cap.min(budget);
        budget = (budget / cap).max(1);
        let len = rng.gen_range(2..=3);
        factors.push(random_complex(rng, field, 0, len, cap)?);
    }
    tensor_product(&factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_square_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let c = random_complex(&mut rng, Field::DEFAULT, -1, 4, 4).unwrap();
            assert!(c.check_square_zero().is_ok());
        }
    }

    #[test]
    fn random_tensors_respect_dim_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let mc = random_tensor_multicomplex(&mut rng, Field::DEFAULT, 4, 3).unwrap();
            assert!(mc.points().all(|q| mc.dim_at(&q) <= 3));
            assert!(mc.validate().is_ok());
        }
    }
}
