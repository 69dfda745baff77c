//! Seeded generators for random symbols, states and sample points.

use num::complex::Complex64;
use num::{BigInt, BigRational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fock::FockState;
use crate::poly::TermMap;
use crate::scalar::{complex_rational, Scalar};
use crate::symbol::{PhaseSymbol, XpForm};

pub const HBAR_CHOICES: [f64; 3] = [0.5, 1.0, 2.0];

/// Deterministic generator; `stream` separates independent consumers of one seed.
pub fn instance_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `p / q` with `|p| <= 9`, `1 <= q <= 9`, nonzero.
pub fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    let mut numer = 0;
    while numer == 0 {
        numer = rng.gen_range(-9i64..=9);
    }
    BigRational::new(BigInt::from(numer), BigInt::from(rng.gen_range(1i64..=9)))
}

pub fn random_hbar<R: Rng>(rng: &mut R) -> f64 {
    *HBAR_CHOICES.choose(rng).expect("nonempty")
}

/// Shape of a random symbol.
#[derive(Debug, Clone, Copy)]
pub struct SymbolShape {
    pub mode_count: usize,
    /// Bound on the total degree of each monomial.
    pub max_degree: u32,
    pub max_terms: usize,
    /// Allow complex coefficients (otherwise the symbol is real).
    pub complex: bool,
}

/// Random polynomial in `x_m, p_m` with rational coefficients, occasionally
/// carrying a factor `hbar`.
pub fn random_symbol<R: Rng>(rng: &mut R, shape: SymbolShape) -> PhaseSymbol {
    let n = shape.mode_count;
    let mut terms = TermMap::zero(n);
    let count = rng.gen_range(1..=shape.max_terms.max(1));
    for _ in 0..count {
        let degree = rng.gen_range(0..=shape.max_degree);
        let mut key = vec![(0u32, 0u32); n];
        for _ in 0..degree {
            let mode = rng.gen_range(0..n);
            if rng.gen_bool(0.5) {
                key[mode].0 += 1;
            } else {
                key[mode].1 += 1;
            }
        }
        let re = random_rational(rng);
        let im = if shape.complex && rng.gen_bool(0.3) {
            random_rational(rng)
        } else {
            BigRational::from_integer(BigInt::from(0))
        };
        let mut c = Scalar::from_complex(complex_rational(re, im));
        if rng.gen_bool(0.2) {
            c = &c * &Scalar::hbar();
        }
        terms.add_term(key, &c);
    }
    XpForm::from_terms(terms).to_alpha()
}

/// Random normalized state with at most `max_levels` levels per mode and
/// complex-rational coefficients.
pub fn random_state<R: Rng>(rng: &mut R, mode_count: usize, max_levels: usize, hbar: f64) -> Result<FockState> {
    let cutoffs: Vec<usize> = (0..mode_count).map(|_| rng.gen_range(1..=max_levels.max(1))).collect();
    let dim: usize = cutoffs.iter().product();
    loop {
        let coefficients: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re = rng.gen_range(-9i32..=9) as f64 / rng.gen_range(1i32..=9) as f64;
                let im = rng.gen_range(-9i32..=9) as f64 / rng.gen_range(1i32..=9) as f64;
                Complex64::new(re, im)
            })
            .collect();
        let state = FockState::new(&cutoffs, coefficients, hbar)?;
        if state.norm() > 0.0 {
            return state.normalized();
        }
    }
}

/// Point with each component uniform in the square `[-r, r]^2`.
pub fn random_point<R: Rng>(rng: &mut R, mode_count: usize, r: f64) -> Vec<Complex64> {
    (0..mode_count)
        .map(|_| Complex64::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r)))
        .collect()
}
