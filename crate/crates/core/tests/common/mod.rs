//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use ncplush::freealg::{Coeff, Letter, Polynomial, Word};
use ncplush::plush::WeightedSquare;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alphabet {
    /// `x_j` only.
    Analytic,
    /// `x_j` and `x_j^T`.
    Base,
    /// Every letter, directions included.
    Full,
}

impl Alphabet {
    fn letters(self, g: usize) -> Vec<Letter> {
        let mut out = Vec::new();
        for j in 1..=g as u32 {
            out.push(Letter::x(j));
            if self != Alphabet::Analytic {
                out.push(Letter::xt(j));
            }
            if self == Alphabet::Full {
                out.push(Letter::h(j));
                out.push(Letter::ht(j));
            }
        }
        out
    }
}

/// Nonzero `a/b` with `|a| <= 5`, `1 <= b <= 3`.
pub fn small_coeff<R: Rng>(rng: &mut R) -> Coeff {
    loop {
        let a: i64 = rng.gen_range(-5..=5);
        if a != 0 {
            let b: i64 = rng.gen_range(1..=3);
            return BigRational::new(BigInt::from(a), BigInt::from(b));
        }
    }
}

pub fn positive_coeff<R: Rng>(rng: &mut R) -> Coeff {
    let a: i64 = rng.gen_range(1..=6);
    let b: i64 = rng.gen_range(1..=4);
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn random_word<R: Rng>(rng: &mut R, letters: &[Letter], len: usize) -> Word {
    Word::new(
        (0..len)
            .map(|_| letters[rng.gen_range(0..letters.len())])
            .collect(),
    )
}

/// Up to `max_terms` terms of length `min_deg..=max_deg`.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    g: usize,
    min_deg: usize,
    max_deg: usize,
    max_terms: usize,
    alphabet: Alphabet,
) -> Polynomial {
    let letters = alphabet.letters(g);
    let mut p = Polynomial::zero(g);
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let len = rng.gen_range(min_deg..=max_deg);
        let w = random_word(rng, &letters, len);
        let c = small_coeff(rng);
        p = &p + &Polynomial::monomial(g, w, c).unwrap();
    }
    p
}

/// Analytic, nonzero, no constant term, with at least one term of degree >= 2.
pub fn random_analytic_nonlinear<R: Rng>(
    rng: &mut R,
    g: usize,
    max_deg: usize,
    max_terms: usize,
) -> Polynomial {
    loop {
        let p = random_poly(rng, g, 1, max_deg, max_terms, Alphabet::Analytic);
        if p.words().any(|w| w.len() >= 2) {
            return p;
        }
    }
}

/// A plush polynomial `sum d f^T f + sum e k k^T + F + F^T` built from
/// random analytic pieces, with its generator counts.
pub struct Constructed {
    pub p: Polynomial,
    pub hereditary: Vec<WeightedSquare>,
    pub antihereditary: Vec<WeightedSquare>,
    pub analytic: Polynomial,
}

pub fn constructed_plush<R: Rng>(rng: &mut R) -> Constructed {
    let g = rng.gen_range(1..=3);
    let (n, m) = loop {
        let n = rng.gen_range(0..=3);
        let m = rng.gen_range(0..=3);
        if n + m > 0 {
            break (n, m);
        }
    };
    let factor = |rng: &mut R| {
        let f = random_poly(rng, g, 0, 3, 3, Alphabet::Analytic);
        WeightedSquare::new(positive_coeff(rng), f)
    };
    let hereditary: Vec<WeightedSquare> = (0..n).map(|_| factor(rng)).collect();
    let antihereditary: Vec<WeightedSquare> = (0..m).map(|_| factor(rng)).collect();
    let analytic = random_poly(rng, g, 0, 3, 3, Alphabet::Analytic);
    let mut p = &analytic + &analytic.transpose();
    for s in &hereditary {
        p = &p + &(&s.factor.transpose() * &s.factor).scale(&s.weight);
    }
    for s in &antihereditary {
        p = &p + &(&s.factor * &s.factor.transpose()).scale(&s.weight);
    }
    Constructed {
        p,
        hereditary,
        antihereditary,
        analytic,
    }
}

/// The seeded plush suite shared by several acceptance checks.
pub fn plush_suite(count: usize) -> Vec<Constructed> {
    let mut r = rng(0x5eed_0006);
    (0..count).map(|_| constructed_plush(&mut r)).collect()
}

// proptest strategies

pub fn coeff_strategy() -> impl Strategy<Value = Coeff> {
    (-6i64..=6, 1i64..=4)
        .prop_filter("nonzero", |(a, _)| *a != 0)
        .prop_map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
}

pub fn word_strategy(g: usize, max_len: usize, alphabet: Alphabet) -> impl Strategy<Value = Word> {
    let letters = alphabet.letters(g);
    prop::collection::vec(prop::sample::select(letters), 0..=max_len).prop_map(Word::new)
}

pub fn poly_strategy(
    g: usize,
    max_len: usize,
    max_terms: usize,
    alphabet: Alphabet,
) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (word_strategy(g, max_len, alphabet), coeff_strategy()),
        0..=max_terms,
    )
    .prop_map(move |terms| Polynomial::from_terms(g, terms).unwrap())
}
