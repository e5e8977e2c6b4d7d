use super::{CochainComplex, Entry, Flavor, Multicomplex};
use crate::exactlinalg::Matrix;
use crate::{Error, Result};

/// Degreewise tensor product of cochain complexes as a commutative
/// multicomplex. Direction `i` carries the differential of factor `i`
/// tensored with identities; factor 0 is the most significant Kronecker
/// index.
pub fn tensor_product(factors: &[CochainComplex]) -> Result<Multicomplex> {
    let Some(first) = factors.first() else {
        return Err(Error::input("tensor product of no factors"));
    };
    let field = first.field();
    if factors.iter().any(|f| f.field() != field) {
        return Err(Error::contract("tensor factors live over different fields"));
    }
    let lo: Vec<i64> = factors.iter().map(|f| *f.degrees().start()).collect();
    let hi: Vec<i64> = factors.iter().map(|f| (*f.degrees().end()).max(*f.degrees().start())).collect();
    let mut out = Multicomplex::with_entries(field, lo, hi, Flavor::Commutative, |q| {
        let mut labels = vec![String::new()];
        for (f, &k) in factors.iter().zip(q) {
            let here: Vec<String> = f.basis(k).map(|b| b.labels.clone()).unwrap_or_default();
            labels = labels
                .iter()
                .flat_map(|a| here.iter().map(move |b| if a.is_empty() { b.clone() } else { format!("{a}⊗{b}") }))
                .collect();
        }
        Entry { labels }
    })?;
    let points: Vec<Vec<i64>> = out.points().collect();
    for q in &points {
        if out.dim_at(q) == 0 {
            continue;
        }
        for i in 0..factors.len() {
            let mut m = Matrix::identity(field, 1);
            for (j, (f, &k)) in factors.iter().zip(q.iter()).enumerate() {
                let piece = if i == j { f.diff(k) } else { Matrix::identity(field, f.dim(k)) };
                m = m.kron(&piece)?;
            }
            let mut t = q.clone();
            t[i] += 1;
            if out.index(&t).is_some() {
                out.set_diff(q, i, m)?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::Field;

    const F: Field = Field::Prime(65537);

    #[test]
    fn zero_factors_give_zero_differentials() {
        let z = CochainComplex::from_maps(F, 0, &[1, 1], vec![Matrix::zeros(F, 1, 1)]).unwrap();
        let mc = tensor_product(&[z.clone(), z]).unwrap();
        assert_eq!(mc.total_dim(), 4);
        for q in mc.points() {
            assert!(mc.diff(&q, 0).is_zero() && mc.diff(&q, 1).is_zero());
        }
    }

    #[test]
    fn shapes_follow_factor_dims() {
        let a = CochainComplex::from_maps(F, 0, &[2, 1], vec![Matrix::from_i64(F, 1, 2, &[1, 1])]).unwrap();
        let b = CochainComplex::from_maps(F, -1, &[1, 3], vec![Matrix::from_i64(F, 3, 1, &[1, 0, 2])]).unwrap();
        let mc = tensor_product(&[a, b]).unwrap();
        assert_eq!(mc.lo(), &[0, -1]);
        assert_eq!(mc.dim_at(&[0, 0]), 6);
        assert_eq!(mc.diff(&[0, -1], 1).rows(), 6);
        assert!(mc.validate().is_ok());
        assert!(tensor_product(&[]).is_err());
    }
}
