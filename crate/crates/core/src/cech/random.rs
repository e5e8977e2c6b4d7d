//! Seeded random Čech problems.

use rand::Rng;

use super::{CechProblem, Window};
use crate::exactlinalg::Field;
use crate::grading::{Monomial, MonomialIdeal};
use crate::Result;

/// Size caps for [`random_problem`].
#[derive(Clone, Copy, Debug)]
pub struct ProblemCaps {
    pub max_vars: usize,
    pub max_groups: usize,
    pub max_gens: usize,
    pub max_exponent: u32,
    pub max_ideal_gens: usize,
    pub window_radius: i64,
}

impl Default for ProblemCaps {
    fn default() -> ProblemCaps {
        ProblemCaps { max_vars: 3, max_groups: 3, max_gens: 2, max_exponent: 2, max_ideal_gens: 2, window_radius: 4 }
    }
}

/// A nonconstant monomial with exponents at most `max_exponent`.
pub fn random_monomial<R: Rng>(rng: &mut R, vars: usize, max_exponent: u32) -> Monomial {
    loop {
        let e: Vec<u32> = (0..vars).map(|_| rng.gen_range(0..=max_exponent)).collect();
        if e.iter().any(|&v| v > 0) {
            return Monomial(e);
        }
    }
}

/// A random problem within `caps` and with exactly `groups` groups when
/// given.
pub fn random_problem<R: Rng>(rng: &mut R, field: Field, caps: ProblemCaps, groups: Option<usize>) -> Result<CechProblem> {
    let vars = rng.gen_range(1..=caps.max_vars.max(1));
    let n = groups.unwrap_or_else(|| rng.gen_range(1..=caps.max_groups.max(1)));
    let groups: Vec<Vec<Monomial>> = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=caps.max_gens.max(1));
            (0..k).map(|_| random_monomial(rng, vars, caps.max_exponent)).collect()
        })
        .collect();
    let j = rng.gen_range(0..=caps.max_ideal_gens);
    let ideal = MonomialIdeal::new(vars, (0..j).map(|_| random_monomial(rng, vars, caps.max_exponent)))?;
    let r = caps.window_radius;
    let window = Window::new(vec![-r; vars], vec![r; vars])?;
    CechProblem::new(field, vars, ideal, groups, Some(window))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn problems_respect_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let p = random_problem(&mut rng, Field::DEFAULT, ProblemCaps::default(), None).unwrap();
            assert!(p.vars <= 3 && p.n() <= 3);
            assert!(p.groups.iter().all(|g| !g.is_empty() && g.len() <= 2));
            assert!(p.groups.iter().flatten().all(|m| m.total_degree() > 0 && m.0.iter().all(|&e| e <= 2)));
            assert!(p.ideal.generators().len() <= 2);
            assert_eq!(p.window.len(), 9usize.pow(p.vars as u32));
        }
        let two = random_problem(&mut rng, Field::DEFAULT, ProblemCaps::default(), Some(2)).unwrap();
        assert_eq!(two.n(), 2);
    }
}
