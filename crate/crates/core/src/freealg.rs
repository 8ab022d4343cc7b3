//! The free *-algebra over `x_1..x_g`, their formal transposes, and the
//! direction letters `h_1..h_g` (with transposes) used by differentiation.
//!
//! Words are ordered by length first and then lexicographically on
//! `(family, index, transposed)`. That order drives printing, wed-class
//! grouping and Gram border vectors, so every downstream result is
//! deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational coefficient.
pub type Coeff = BigRational;

pub fn rat(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("context mismatch: {left} variables vs {right} variables")]
    ContextMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range 1..={vars}")]
    IndexOutOfRange { index: u32, vars: usize },
}

/// Variable family: a base variable `x_j` or a direction variable `h_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    X,
    H,
}

/// One generator occurrence, e.g. `x_2^T` or `h_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub family: Family,
    pub index: u32,
    pub transposed: bool,
}

impl Letter {
    pub const fn new(family: Family, index: u32, transposed: bool) -> Self {
        Letter {
            family,
            index,
            transposed,
        }
    }

    pub const fn x(index: u32) -> Self {
        Letter::new(Family::X, index, false)
    }

    pub const fn xt(index: u32) -> Self {
        Letter::new(Family::X, index, true)
    }

    pub const fn h(index: u32) -> Self {
        Letter::new(Family::H, index, false)
    }

    pub const fn ht(index: u32) -> Self {
        Letter::new(Family::H, index, true)
    }

    pub fn transpose(self) -> Self {
        Letter {
            transposed: !self.transposed,
            ..self
        }
    }

    pub fn is_direction(self) -> bool {
        self.family == Family::H
    }

    /// The direction letter paired with this base letter (`x_j^T -> h_j^T`).
    pub fn to_direction(self) -> Self {
        Letter {
            family: Family::H,
            ..self
        }
    }

    /// The base letter paired with this direction letter (`h_j -> x_j`).
    pub fn to_base(self) -> Self {
        Letter {
            family: Family::X,
            ..self
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            Family::X => 'x',
            Family::H => 'h',
        };
        write!(f, "{}{}", name, self.index)?;
        if self.transposed {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// A monomial without coefficient. The empty word is the scalar 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(l_1 ... l_n)^T = l_n^T ... l_1^T`
    pub fn transpose(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.transpose()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn with_letter_at(&self, pos: usize, letter: Letter) -> Word {
        let mut letters = self.0.clone();
        letters[pos] = letter;
        Word(letters)
    }

    /// Number of direction letters (plain or transposed).
    pub fn h_degree(&self) -> usize {
        self.0.iter().filter(|l| l.is_direction()).count()
    }

    /// No transposed letters.
    pub fn is_analytic(&self) -> bool {
        self.0.iter().all(|l| !l.transposed)
    }

    /// Every letter transposed.
    pub fn is_antianalytic(&self) -> bool {
        self.0.iter().all(|l| l.transposed)
    }

    pub fn max_index(&self) -> u32 {
        self.0.iter().map(|l| l.index).max().unwrap_or(0)
    }

    /// Positions holding exactly `letter`.
    pub fn positions_of(&self, letter: Letter) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(move |(_, l)| **l == letter)
            .map(|(i, _)| i)
    }

    /// Positions holding direction letters.
    pub fn direction_positions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_direction())
            .map(|(i, _)| i)
            .collect()
    }

    /// Replace every direction letter by its base letter.
    pub fn collapse_directions(&self) -> Word {
        Word(
            self.0
                .iter()
                .map(|l| if l.is_direction() { l.to_base() } else { *l })
                .collect(),
        )
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Structural flags of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub symmetric: bool,
    pub analytic: bool,
    pub antianalytic: bool,
    /// Maximum word length; 0 for the zero polynomial.
    pub degree: usize,
    /// Maximum number of direction letters in a word.
    pub h_degree: usize,
}

/// Finite rational combination of words over a context of `g` variables.
///
/// Zero coefficients are never stored, so structural equality is
/// polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<Word, Coeff>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, Coeff::one())
    }

    pub fn constant(vars: usize, c: Coeff) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Word::empty(), c);
        p
    }

    /// `c * word`, checking every index against the context.
    pub fn monomial(vars: usize, word: Word, c: Coeff) -> Result<Self, AlgebraError> {
        check_word(vars, &word)?;
        let mut p = Self::zero(vars);
        p.add_term(word, c);
        Ok(p)
    }

    pub fn letter(vars: usize, letter: Letter) -> Result<Self, AlgebraError> {
        Self::monomial(vars, Word::new(vec![letter]), Coeff::one())
    }

    pub fn from_terms<I>(vars: usize, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Word, Coeff)>,
    {
        let mut p = Self::zero(vars);
        for (w, c) in terms {
            check_word(vars, &w)?;
            p.add_term(w, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Re-home the polynomial in a context of `vars` variables.
    pub fn with_vars(&self, vars: usize) -> Result<Self, AlgebraError> {
        for w in self.terms.keys() {
            check_word(vars, w)?;
        }
        Ok(Polynomial {
            vars,
            terms: self.terms.clone(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Coeff)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coefficient(&self, word: &Word) -> Coeff {
        self.terms.get(word).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.terms.contains_key(word)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coefficient(&Word::empty())
    }

    /// Accumulate `c * word`, dropping the entry if it cancels. Indices are
    /// not checked; callers only feed words derived from in-context words.
    pub(crate) fn add_term(&mut self, word: Word, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn ensure_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::ContextMismatch {
                left: self.vars,
                right: other.vars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.ensure_same(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.ensure_same(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.ensure_same(other)?;
        let mut out = Self::zero(self.vars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        Polynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Apply the involution termwise.
    pub fn transpose(&self) -> Self {
        Polynomial {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.transpose(), c.clone()))
                .collect(),
        }
    }

    /// Keep only the terms whose word satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Word) -> bool) -> Self {
        Polynomial {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Linear extension of a map from words to polynomials.
    pub(crate) fn map_linear(&self, mut f: impl FnMut(&Word, &Coeff, &mut Polynomial)) -> Self {
        let mut out = Self::zero(self.vars);
        for (w, c) in &self.terms {
            f(w, c, &mut out);
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(w, c)| self.terms.get(&w.transpose()) == Some(c))
    }

    pub fn is_analytic(&self) -> bool {
        self.terms.keys().all(Word::is_analytic)
    }

    pub fn is_antianalytic(&self) -> bool {
        self.terms.keys().all(Word::is_antianalytic)
    }

    pub fn has_directions(&self) -> bool {
        self.terms.keys().any(|w| w.h_degree() > 0)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn h_degree(&self) -> usize {
        self.terms.keys().map(Word::h_degree).max().unwrap_or(0)
    }

    pub fn max_index(&self) -> u32 {
        self.terms.keys().map(Word::max_index).max().unwrap_or(0)
    }

    pub fn classify(&self) -> Classification {
        Classification {
            symmetric: self.is_symmetric(),
            analytic: self.is_analytic(),
            antianalytic: self.is_antianalytic(),
            degree: self.degree(),
            h_degree: self.h_degree(),
        }
    }
}

fn check_word(vars: usize, word: &Word) -> Result<(), AlgebraError> {
    for l in word.letters() {
        if l.index == 0 || l.index as usize > vars {
            return Err(AlgebraError::IndexOutOfRange { index: l.index, vars });
        }
    }
    Ok(())
}

// Operator forms panic on a context mismatch; use the `checked_*` methods
// when the operands come from independent sources.

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial context mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial context mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial context mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Coeff::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
