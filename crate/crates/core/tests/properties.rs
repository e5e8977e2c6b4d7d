use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cechss::exactlinalg::{Field, Matrix, Subspace};
use cechss::grading::{Monomial, MonomialIdeal};
use cechss::multicomplex::random::{random_complex, random_tensor_multicomplex};
use cechss::spectral::{column_filtration, SpectralSequence};

const P: Field = Field::Prime(65537);

fn small_matrix(max: usize) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-2i64..=2, r * c)))
}

fn subspace_triple() -> impl Strategy<Value = (usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (1usize..=5).prop_flat_map(|n| {
        let gens = move || (0usize..=3).prop_flat_map(move |k| prop::collection::vec(-2i64..=2, k * n));
        (Just(n), gens(), gens(), gens())
    })
}

fn span(field: Field, n: usize, entries: &[i64]) -> Subspace {
    Subspace::span(Matrix::from_i64(field, entries.len() / n, n, entries))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_plus_nullity((r, c, e) in small_matrix(6)) {
        for field in [P, Field::Rational] {
            let m = Matrix::from_i64(field, r, c, &e);
            prop_assert_eq!(m.rank() + m.kernel().dim(), c);
            prop_assert!(m.mul(&m.kernel().basis().transpose()).unwrap().is_zero());
        }
    }

    // Minors of a 4x4 matrix with entries in [-2, 2] are below 4!·2⁴ < 65537,
    // so reduction mod p cannot drop the rank.
    #[test]
    fn rational_and_modular_ranks_agree((r, c, e) in small_matrix(4)) {
        let q = Matrix::from_i64(Field::Rational, r, c, &e).rank();
        let p = Matrix::from_i64(P, r, c, &e).rank();
        prop_assert_eq!(q, p);
        prop_assert!(Matrix::from_i64(Field::Prime(2), r, c, &e).rank() <= q);
    }

    #[test]
    fn dimension_formula_and_modular_law((n, a, b, c) in subspace_triple()) {
        let (a, b, c) = (span(P, n, &a), span(P, n, &b), span(P, n, &c));
        let sum = a.sum(&b).unwrap();
        let meet = a.intersection(&b).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), a.dim() + b.dim());
        // Modular law with A ∩ C ⊆ C.
        let ac = a.intersection(&c).unwrap();
        let lhs = ac.sum(&b.intersection(&c).unwrap()).unwrap();
        let rhs = ac.sum(&b).unwrap().intersection(&c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_representatives((n, a, b, _c) in subspace_triple()) {
        let (a, b) = (span(P, n, &a), span(P, n, &b));
        let reps = a.quotient(&b).unwrap();
        let meet = a.intersection(&b).unwrap();
        prop_assert_eq!(reps.rows(), a.dim() - meet.dim());
        let together = Subspace::span(reps.clone()).sum(&meet).unwrap();
        prop_assert_eq!(together, a.clone());
        prop_assert!(a.contains_vectors(&reps).unwrap());
    }

    #[test]
    fn preimage_is_largest((r, c, e) in small_matrix(5), t in prop::collection::vec(-2i64..=2, 0..=10)) {
        let f = Matrix::from_i64(P, r, c, &e);
        let rows = t.len() / r;
        let target = Subspace::span(Matrix::from_i64(P, rows, r, &t[..rows * r]));
        let pre = Subspace::preimage(&f, &target).unwrap();
        prop_assert!(target.contains(&pre.image_under(&f).unwrap()).unwrap());
        prop_assert!(pre.contains(&f.kernel()).unwrap());
        let image = Subspace::full(P, c).image_under(&f).unwrap();
        prop_assert_eq!(pre.dim(), f.kernel().dim() + image.intersection(&target).unwrap().dim());
    }

    #[test]
    fn ideal_generators_are_minimal(gens in prop::collection::vec(prop::collection::vec(0u32..=2, 3), 0..6),
                                    probe in prop::collection::vec(0u32..=3, 3)) {
        let mons: Vec<Monomial> = gens.into_iter().map(Monomial).collect();
        let ideal = MonomialIdeal::new(3, mons.clone()).unwrap();
        let g = ideal.generators();
        for (i, x) in g.iter().enumerate() {
            for (j, y) in g.iter().enumerate() {
                prop_assert!(i == j || !x.divides(y));
            }
        }
        let probe = Monomial(probe);
        prop_assert_eq!(ideal.contains(&probe), mons.iter().any(|m| m.divides(&probe)));
    }

    #[test]
    fn monomial_text_round_trip(e in prop::collection::vec(0u32..=4, 1..=5)) {
        let m = Monomial(e.clone());
        prop_assert_eq!(Monomial::parse(&m.to_string(), e.len()).unwrap(), m);
    }

    #[test]
    fn euler_characteristic(seed in any::<u64>(), len in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, P, -1, len, 3).unwrap();
        let chi = |f: &dyn Fn(i64) -> usize| c.degrees().map(|k| if k % 2 == 0 { f(k) as i64 } else { -(f(k) as i64) }).sum::<i64>();
        prop_assert_eq!(chi(&|k| c.dim(k)), chi(&|k| c.cohomology_dim(k)));
    }

    #[test]
    fn sigma_is_an_involution(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mc = random_tensor_multicomplex(&mut rng, P, n, 3).unwrap();
        let s = mc.sigma();
        prop_assert!(s.validate().is_ok());
        prop_assert_eq!(s.sigma(), mc.clone());
        prop_assert_eq!(s.totalize().unwrap().cohomology_dims(), mc.totalize().unwrap().cohomology_dims());
    }

    #[test]
    fn column_filtration_converges(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mc = random_tensor_multicomplex(&mut rng, P, n, 2).unwrap();
        let fc = column_filtration(&mc, 0).unwrap();
        let mut ss = SpectralSequence::new(&fc);
        prop_assert!(ss.structure(fc.width() + 1).unwrap().holds());
        prop_assert!(ss.converge().unwrap().holds());
    }
}
