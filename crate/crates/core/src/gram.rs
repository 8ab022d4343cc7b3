//! Gram representations of the hereditary and antihereditary parts of a
//! complex hessian, and an exact PSD test by pivoted `LDL^T`.
//!
//! A hereditary word (some `h^T` left of the `h`) of a plush hessian factors
//! uniquely as `a^T b` with `a`, `b` analytic words of direction degree one;
//! an antihereditary word factors as `a b^T`. Reading the coefficient of each
//! factored word gives a Gram matrix `G` indexed by the border vector of such
//! words. The factorization is unique, so `G` is determined by the part alone
//! and its positive semidefiniteness decides positivity of the part.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::freealg::{Coeff, Polynomial, Word};
use crate::ratmat::RationalMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `h^T` to the left of `h`; squares `r^T r`.
    Hereditary,
    /// `h` to the left of `h^T`; squares `r r^T`.
    Antihereditary,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Hereditary => "hereditary",
            Side::Antihereditary => "antihereditary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GramError {
    #[error("word {word} does not have exactly one h and one h^T")]
    P1Violation { word: Word },
    #[error("word {word} is not of split form")]
    NotSplitForm { side: Side, word: Word },
    #[error("part is not symmetric at word {word}")]
    Asymmetric { word: Word },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HessianSplit {
    pub hereditary: Polynomial,
    pub antihereditary: Polynomial,
}

/// Partition a P1 polynomial by whether its `h^T` precedes its `h`.
pub fn split_hessian(q: &Polynomial) -> Result<HessianSplit, GramError> {
    let mut hereditary = Polynomial::zero(q.vars());
    let mut antihereditary = Polynomial::zero(q.vars());
    for (w, c) in q.terms() {
        let dirs = w.direction_positions();
        let plain: Vec<_> = dirs.iter().filter(|&&i| !w.letters()[i].transposed).collect();
        if dirs.len() != 2 || plain.len() != 1 {
            return Err(GramError::P1Violation { word: w.clone() });
        }
        let plain_pos = *plain[0];
        let trans_pos = dirs.iter().copied().find(|&i| i != plain_pos).unwrap();
        if trans_pos < plain_pos {
            hereditary.add_term(w.clone(), c.clone());
        } else {
            antihereditary.add_term(w.clone(), c.clone());
        }
    }
    Ok(HessianSplit {
        hereditary,
        antihereditary,
    })
}

/// Factor a word at its transposed/plain boundary.
///
/// Hereditary: `word = a^T b`. Antihereditary: `word = a b^T`. In both cases
/// `a` and `b` are analytic with exactly one direction letter.
pub fn split_word(word: &Word, side: Side) -> Option<(Word, Word)> {
    let letters = word.letters();
    let first_transposed = match side {
        Side::Hereditary => true,
        Side::Antihereditary => false,
    };
    let k = letters
        .iter()
        .position(|l| l.transposed != first_transposed)
        .unwrap_or(letters.len());
    let (head, tail) = letters.split_at(k);
    if tail.iter().any(|l| l.transposed == first_transposed) {
        return None;
    }
    let head = Word::new(head.to_vec());
    let tail = Word::new(tail.to_vec());
    if head.h_degree() != 1 || tail.h_degree() != 1 {
        return None;
    }
    Some(match side {
        Side::Hereditary => (head.transpose(), tail),
        Side::Antihereditary => (head, tail.transpose()),
    })
}

/// `part = y^T G y` (hereditary) or `sum G[a,b] y_a y_b^T` (antihereditary).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramForm {
    vars: usize,
    side: Side,
    border: Vec<Word>,
    matrix: RationalMatrix,
}

impl GramForm {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn border(&self) -> &[Word] {
        &self.border
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    /// The word `border[a]^T border[b]` (or `border[a] border[b]^T`).
    pub fn entry_word(&self, a: usize, b: usize) -> Word {
        match self.side {
            Side::Hereditary => self.border[a].transpose().concat(&self.border[b]),
            Side::Antihereditary => self.border[a].concat(&self.border[b].transpose()),
        }
    }

    /// Expand the form back into a polynomial.
    pub fn reconstruct(&self) -> Polynomial {
        let mut p = Polynomial::zero(self.vars);
        let n = self.border.len();
        for a in 0..n {
            for b in 0..n {
                p.add_term(self.entry_word(a, b), self.matrix.get(a, b).clone());
            }
        }
        p
    }

    /// `sum_b coeffs[b] * border[b]`
    pub fn combine(&self, coeffs: &[Coeff]) -> Polynomial {
        let mut p = Polynomial::zero(self.vars);
        for (w, c) in self.border.iter().zip(coeffs) {
            p.add_term(w.clone(), c.clone());
        }
        p
    }
}

/// Build the unique Gram form of a hereditary or antihereditary part.
pub fn build_gram(part: &Polynomial, side: Side) -> Result<GramForm, GramError> {
    let mut entries: BTreeMap<(Word, Word), Coeff> = BTreeMap::new();
    let mut border: BTreeSet<Word> = BTreeSet::new();
    for (w, c) in part.terms() {
        let (a, b) = split_word(w, side).ok_or_else(|| GramError::NotSplitForm {
            side,
            word: w.clone(),
        })?;
        border.insert(a.clone());
        border.insert(b.clone());
        entries.insert((a, b), c.clone());
    }
    let border: Vec<Word> = border.into_iter().collect();
    let index: BTreeMap<&Word, usize> = border.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut matrix = RationalMatrix::zeros(border.len(), border.len());
    for ((a, b), c) in &entries {
        matrix.set(index[a], index[b], c.clone());
    }
    let form = GramForm {
        vars: part.vars(),
        side,
        border,
        matrix,
    };
    let n = form.border.len();
    for a in 0..n {
        for b in 0..a {
            if form.matrix.get(a, b) != form.matrix.get(b, a) {
                let (i, j) = if form.matrix.get(a, b).is_zero() {
                    (b, a)
                } else {
                    (a, b)
                };
                return Err(GramError::Asymmetric {
                    word: form.entry_word(i, j),
                });
            }
        }
    }
    Ok(form)
}

/// `G = sum_j d_j row_j row_j^T` with `d_j > 0`.
///
/// `rows[j]` is indexed like the border; it has a 1 at `permutation[j]` and
/// zeros at every earlier pivot, i.e. the rows of a unit triangular factor
/// after symmetric pivoting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdFactorization {
    pub pivots: Vec<Coeff>,
    pub rows: Vec<Vec<Coeff>>,
    pub permutation: Vec<usize>,
    pub rank: usize,
}

impl PsdFactorization {
    pub fn reconstruct(&self, dim: usize) -> RationalMatrix {
        let mut g = RationalMatrix::zeros(dim, dim);
        for (d, row) in self.pivots.iter().zip(&self.rows) {
            for a in 0..dim {
                if row[a].is_zero() {
                    continue;
                }
                for b in 0..dim {
                    let v = g.get(a, b) + d * &row[a] * &row[b];
                    g.set(a, b, v);
                }
            }
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsdVerdict {
    Psd(PsdFactorization),
    /// `certificate^T G certificate = value < 0`.
    NotPsd {
        certificate: Vec<Coeff>,
        value: Coeff,
    },
}

pub fn psd_factor(gf: &GramForm) -> PsdVerdict {
    psd_factor_matrix(gf.matrix())
}

/// Exact symmetric-pivoted `LDL^T`. The pivot is always the largest
/// remaining diagonal entry (smallest index on ties).
pub fn psd_factor_matrix(g: &RationalMatrix) -> PsdVerdict {
    assert!(g.is_symmetric(), "psd_factor needs a symmetric matrix");
    let n = g.rows();
    let mut a = g.clone();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut fact = PsdFactorization {
        pivots: Vec::new(),
        rows: Vec::new(),
        permutation: Vec::new(),
        rank: 0,
    };

    let certificate = loop {
        let Some(&best) = remaining.iter().reduce(|best, i| {
            if a.get(*i, *i) > a.get(*best, *best) {
                i
            } else {
                best
            }
        }) else {
            break None;
        };
        let d = a.get(best, best).clone();
        if d.is_positive() {
            let mut row = vec![Coeff::zero(); n];
            for &k in &remaining {
                row[k] = a.get(best, k) / &d;
            }
            remaining.retain(|&k| k != best);
            for &i in &remaining {
                if a.get(i, best).is_zero() {
                    continue;
                }
                for &j in &remaining {
                    let v = a.get(i, j) - a.get(i, best) * &row[j];
                    a.set(i, j, v);
                }
            }
            fact.pivots.push(d);
            fact.rows.push(row);
            fact.permutation.push(best);
            continue;
        }
        // Largest remaining diagonal is <= 0.
        let mut v = vec![Coeff::zero(); n];
        if let Some(&neg) = remaining.iter().find(|&&i| a.get(i, i).is_negative()) {
            v[neg] = Coeff::one();
            break Some(v);
        }
        let off = remaining.iter().find_map(|&i| {
            remaining
                .iter()
                .find(|&&k| k != i && !a.get(i, k).is_zero())
                .map(|&k| (i, k))
        });
        match off {
            Some((i, k)) => {
                v[i] = Coeff::one();
                v[k] = if a.get(i, k).is_positive() {
                    -Coeff::one()
                } else {
                    Coeff::one()
                };
                break Some(v);
            }
            None => break None,
        }
    };

    match certificate {
        None => {
            fact.rank = fact.pivots.len();
            PsdVerdict::Psd(fact)
        }
        Some(mut v) => {
            // Lift the Schur-complement vector back through the eliminated pivots.
            for (row, &p) in fact.rows.iter().zip(&fact.permutation).rev() {
                let mut s = Coeff::zero();
                for k in 0..n {
                    if k != p && !row[k].is_zero() {
                        s += &row[k] * &v[k];
                    }
                }
                v[p] = -s;
            }
            let value = g.quadratic_form(&v);
            assert!(value.is_negative(), "lifted certificate must be negative");
            PsdVerdict::NotPsd {
                certificate: v,
                value,
            }
        }
    }
}
