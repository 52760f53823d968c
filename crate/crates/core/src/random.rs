//! Seeded generators of random polynomials, fields and forms for the
//! randomized identity checks. The seed comes from `NAMBU_SEED` when set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::{KForm, VecField};
use crate::poly::{rat, Alphabet, Poly};

pub const SEED_ENV: &str = "NAMBU_SEED";
pub const DEFAULT_SEED: u64 = 0x004e_414d_4255;

pub type TestRng = ChaCha8Rng;

/// Seed from `NAMBU_SEED`, falling back to [`DEFAULT_SEED`] when unset or
/// unparsable.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random position polynomial of total degree ≤ `max_degree` with up to six
/// terms and small rational coefficients.
pub fn poly(rng: &mut TestRng, max_degree: u32) -> Poly {
    let n_terms = rng.gen_range(1..=6);
    let terms = (0..n_terms).map(|_| {
        let total = rng.gen_range(0..=max_degree);
        let mut exps = vec![0u32; 3];
        for _ in 0..total {
            exps[rng.gen_range(0..3)] += 1;
        }
        let num = rng.gen_range(-5..=5);
        let den = rng.gen_range(1..=4);
        (exps, rat(num, den))
    });
    Poly::from_terms(Alphabet::Position, terms).expect("position exponents")
}

pub fn field(rng: &mut TestRng, max_degree: u32) -> VecField {
    VecField::new(
        poly(rng, max_degree),
        poly(rng, max_degree),
        poly(rng, max_degree),
    )
}

/// Random form of the given degree (0..=3).
pub fn form(rng: &mut TestRng, degree: usize, max_degree: u32) -> KForm {
    let tuples: &[&[usize]] = match degree {
        0 => &[&[]],
        1 => &[&[0], &[1], &[2]],
        2 => &[&[0, 1], &[0, 2], &[1, 2]],
        3 => &[&[0, 1, 2]],
        _ => panic!("form degree {degree} exceeds 3"),
    };
    let comps = tuples
        .iter()
        .map(|t| (t.to_vec(), poly(rng, max_degree)))
        .collect::<Vec<_>>();
    KForm::from_components(degree, comps).expect("valid tuples")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<Poly> = {
            let mut r = rng(7);
            (0..5).map(|_| poly(&mut r, 3)).collect()
        };
        let b: Vec<Poly> = {
            let mut r = rng(7);
            (0..5).map(|_| poly(&mut r, 3)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn degree_bound_respected() {
        let mut r = rng(1);
        for _ in 0..50 {
            assert!(poly(&mut r, 2).degree().unwrap_or(0) <= 2);
        }
    }
}
