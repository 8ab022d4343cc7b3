//! Classification of nc plurisubharmonic symmetric polynomials.
//!
//! A symmetric `p` is plush iff
//! `p = sum d_j f_j^T f_j + sum e_j k_j k_j^T + F + F^T` with `f_j`, `k_j`,
//! `F` analytic and weights `d_j, e_j > 0`. Weights keep everything exact;
//! the unweighted form uses `sqrt(d_j) f_j`.
//!
//! The decision procedure:
//!
//! 1. take the complex hessian `q` and split it into hereditary and
//!    antihereditary parts;
//! 2. build the Gram form of each part (fails on a word that does not factor
//!    at its transposed/plain boundary);
//! 3. factor each Gram matrix by exact pivoted `LDL^T` (fails with a
//!    negative direction when the matrix is not PSD);
//! 4. integrate every factor row `r_j = row_j . y`; equal coefficients inside
//!    each Levi class of `q` force these rows to be integrable;
//! 5. what remains has zero complex hessian, so it is `F + F^T`.
//!
//! The Gram matrix of each part is unique, so failing step 2 or 3 proves the
//! polynomial is not plush and no semidefinite search is needed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::freealg::{Coeff, Polynomial, Word};
use crate::gram::{build_gram, psd_factor, split_hessian, GramError, GramForm, PsdVerdict, Side};
use crate::nccalc::{complex_hessian, derivative};
use crate::ncint::integrate;
use crate::ratmat::RationalMatrix;

/// `weight * factor^T factor` (hereditary) or `weight * factor factor^T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSquare {
    pub weight: Coeff,
    pub factor: Polynomial,
}

impl WeightedSquare {
    pub fn new(weight: Coeff, factor: Polynomial) -> Self {
        WeightedSquare { weight, factor }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlushDecomposition {
    vars: usize,
    pub hereditary_squares: Vec<WeightedSquare>,
    pub antihereditary_squares: Vec<WeightedSquare>,
    pub analytic_part: Polynomial,
    /// Rank of the hereditary Gram matrix of this representation.
    pub n_min: usize,
    /// Rank of the antihereditary Gram matrix of this representation.
    pub m_min: usize,
}

impl PlushDecomposition {
    /// Assemble a decomposition; the recorded ranks are the ranks of the
    /// factor derivative stacks, i.e. of each side's Gram matrix.
    pub fn new(
        vars: usize,
        hereditary_squares: Vec<WeightedSquare>,
        antihereditary_squares: Vec<WeightedSquare>,
        analytic_part: Polynomial,
    ) -> Self {
        let n_min = derivative_stack(&hereditary_squares).0.rank();
        let m_min = derivative_stack(&antihereditary_squares).0.rank();
        PlushDecomposition {
            vars,
            hereditary_squares,
            antihereditary_squares,
            analytic_part,
            n_min,
            m_min,
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// `sum d_j f_j^T f_j + sum e_j k_j k_j^T + F + F^T`
    pub fn expand(&self) -> Polynomial {
        let mut p = &self.analytic_part + &self.analytic_part.transpose();
        p = &p + &self.squares_sum();
        p
    }

    fn squares_sum(&self) -> Polynomial {
        let mut p = Polynomial::zero(self.vars);
        for s in &self.hereditary_squares {
            p = &p + &(&s.factor.transpose() * &s.factor).scale(&s.weight);
        }
        for s in &self.antihereditary_squares {
            p = &p + &(&s.factor * &s.factor.transpose()).scale(&s.weight);
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureStage {
    NotSymmetric,
    HessianNotSplitForm,
    GramNotPsd(Side),
    ResidualMixed,
}

/// Why a polynomial is not plush.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureWitness {
    /// `word` has a different coefficient from its transpose.
    NotSymmetric {
        word: Word,
    },
    /// A hessian term that does not factor at its transposed/plain boundary.
    HessianNotSplitForm {
        side: Side,
        word: Word,
    },
    /// `certificate^T G certificate = value < 0` for the unique Gram matrix.
    GramNotPsd {
        side: Side,
        gram: GramForm,
        certificate: Vec<Coeff>,
        value: Coeff,
    },
    ResidualMixed {
        word: Word,
    },
}

impl FailureWitness {
    pub fn stage(&self) -> FailureStage {
        match self {
            FailureWitness::NotSymmetric { .. } => FailureStage::NotSymmetric,
            FailureWitness::HessianNotSplitForm { .. } => FailureStage::HessianNotSplitForm,
            FailureWitness::GramNotPsd { side, .. } => FailureStage::GramNotPsd(*side),
            FailureWitness::ResidualMixed { .. } => FailureStage::ResidualMixed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlushVerdict {
    Plush(PlushDecomposition),
    NotPlush(FailureWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlushError {
    #[error("input contains direction letters: {word}")]
    DirectionLetters { word: Word },
    #[error("factor row {row} of the {side:?} Gram matrix is not integrable")]
    RowNotIntegrable { side: Side, row: usize },
}

pub fn classify_plush(p: &Polynomial) -> Result<PlushVerdict, PlushError> {
    if let Some(w) = p.words().find(|w| w.h_degree() > 0) {
        return Err(PlushError::DirectionLetters { word: w.clone() });
    }
    if let Some((w, _)) = p.terms().find(|(w, c)| &p.coefficient(&w.transpose()) != *c) {
        return Ok(PlushVerdict::NotPlush(FailureWitness::NotSymmetric {
            word: w.clone(),
        }));
    }

    let q = complex_hessian(p);
    let split = split_hessian(&q).expect("complex hessian of an x-only polynomial satisfies P1");

    let mut sides = Vec::with_capacity(2);
    for (part, side) in [
        (&split.hereditary, Side::Hereditary),
        (&split.antihereditary, Side::Antihereditary),
    ] {
        let gram = match build_gram(part, side) {
            Ok(g) => g,
            Err(GramError::NotSplitForm { side, word }) => {
                return Ok(PlushVerdict::NotPlush(FailureWitness::HessianNotSplitForm {
                    side,
                    word,
                }))
            }
            Err(GramError::Asymmetric { word }) | Err(GramError::P1Violation { word }) => {
                unreachable!("hessian of a symmetric polynomial is symmetric and P1 ({word})")
            }
        };
        match psd_factor(&gram) {
            PsdVerdict::Psd(fact) => sides.push((gram, fact)),
            PsdVerdict::NotPsd { certificate, value } => {
                return Ok(PlushVerdict::NotPlush(FailureWitness::GramNotPsd {
                    side,
                    gram,
                    certificate,
                    value,
                }))
            }
        }
    }

    let mut squares: [Vec<WeightedSquare>; 2] = [Vec::new(), Vec::new()];
    let mut ranks = [0usize; 2];
    for (slot, (gram, fact)) in sides.iter().enumerate() {
        ranks[slot] = fact.rank;
        for (row_idx, (d, row)) in fact.pivots.iter().zip(&fact.rows).enumerate() {
            let r = gram.combine(row);
            let f = integrate(&r).map_err(|_| PlushError::RowNotIntegrable {
                side: gram.side(),
                row: row_idx,
            })?;
            squares[slot].push(WeightedSquare::new(d.clone(), f));
        }
    }
    let [hereditary_squares, antihereditary_squares] = squares;

    let mut decomposition = PlushDecomposition {
        vars: p.vars(),
        hereditary_squares,
        antihereditary_squares,
        analytic_part: Polynomial::zero(p.vars()),
        n_min: ranks[0],
        m_min: ranks[1],
    };
    let residual = p - &decomposition.squares_sum();
    match extract_analytic_part(&residual) {
        Ok(f) => decomposition.analytic_part = f,
        Err(AnalyticPartError::Mixed { word }) | Err(AnalyticPartError::NotSymmetric { word }) => {
            return Ok(PlushVerdict::NotPlush(FailureWitness::ResidualMixed { word }))
        }
    }
    Ok(PlushVerdict::Plush(decomposition))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticPartError {
    #[error("word {word} mixes plain and transposed letters")]
    Mixed { word: Word },
    #[error("residual is not F + F^T at word {word}")]
    NotSymmetric { word: Word },
}

/// For a symmetric residual with zero complex hessian, the analytic `F` with
/// `residual = F + F^T`: its analytic terms plus half the constant.
pub fn extract_analytic_part(residual: &Polynomial) -> Result<Polynomial, AnalyticPartError> {
    if let Some(w) = residual
        .words()
        .find(|w| w.h_degree() > 0 || !(w.is_analytic() || w.is_antianalytic()))
    {
        return Err(AnalyticPartError::Mixed { word: w.clone() });
    }
    let mut f = residual.filter_terms(|w| !w.is_empty() && w.is_analytic());
    f.add_term(Word::empty(), residual.constant_term() * half());
    let back = &f + &f.transpose();
    if &back != residual {
        let diff = &back - residual;
        let word = diff.words().next().cloned().unwrap_or_default();
        return Err(AnalyticPartError::NotSymmetric { word });
    }
    Ok(f)
}

/// The expansion reproduces `p` exactly, every factor is analytic and every
/// weight is positive.
pub fn verify_decomposition(p: &Polynomial, d: &PlushDecomposition) -> bool {
    if p.vars() != d.vars() {
        return false;
    }
    let analytic = |f: &Polynomial| f.vars() == d.vars() && f.is_analytic() && !f.has_directions();
    let squares_ok = d
        .hereditary_squares
        .iter()
        .chain(&d.antihereditary_squares)
        .all(|s| s.weight.is_positive() && analytic(&s.factor));
    squares_ok && analytic(&d.analytic_part) && &d.expand() == p
}

/// Coefficient matrix of the factor derivatives (rows) over a shared word
/// basis, plus that basis.
fn derivative_stack(squares: &[WeightedSquare]) -> (RationalMatrix, Vec<Word>) {
    let derivs: Vec<Polynomial> = squares.iter().map(|s| derivative(&s.factor)).collect();
    basis_matrix(&derivs)
}

fn basis_matrix(polys: &[Polynomial]) -> (RationalMatrix, Vec<Word>) {
    let mut index: BTreeMap<Word, usize> = BTreeMap::new();
    for p in polys {
        for w in p.words() {
            index.entry(w.clone()).or_insert(0);
        }
    }
    for (i, v) in index.values_mut().enumerate() {
        *v = i;
    }
    let mut m = RationalMatrix::zeros(polys.len(), index.len());
    for (r, p) in polys.iter().enumerate() {
        for (w, c) in p.terms() {
            m.set(r, index[w], c.clone());
        }
    }
    (m, index.into_keys().collect())
}

/// Relation between a minimal representation (source, `Ñ` squares) and
/// another representation (target, `N` squares) of one side:
/// `target_i = sum_j transform[i][j] source_j + constants[i]`.
///
/// With `d` the source and `e` the target weights, the unweighted isometry is
/// `U[i][j] = sqrt(e_i / d_j) * transform[i][j]`, and `U^T U = I` holds iff
/// `D_d^{-1} transform^T D_e transform = I`, which is checked exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryRelation {
    pub transform: RationalMatrix,
    pub source_weights: Vec<Coeff>,
    pub target_weights: Vec<Coeff>,
    pub constants: Vec<Coeff>,
}

impl IsometryRelation {
    /// `D_d^{-1} transform^T D_e transform`; the identity iff `U` is an isometry.
    pub fn unitarity(&self) -> RationalMatrix {
        let de = RationalMatrix::diagonal(&self.target_weights);
        let inv: Vec<Coeff> = self.source_weights.iter().map(|d| d.recip()).collect();
        RationalMatrix::diagonal(&inv)
            .mul(&self.transform.transpose())
            .mul(&de)
            .mul(&self.transform)
    }

    pub fn is_isometry(&self) -> bool {
        self.unitarity() == RationalMatrix::identity(self.source_weights.len())
    }

    /// The unweighted isometry when all of its entries are rational.
    pub fn unweighted(&self) -> Option<RationalMatrix> {
        let (n, m) = (self.transform.rows(), self.transform.cols());
        let mut u = RationalMatrix::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                let x = self.transform.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let s = rational_sqrt(&(&self.target_weights[i] / &self.source_weights[j]))?;
                u.set(i, j, x * s);
            }
        }
        Some(u)
    }

    pub fn unweighted_f64(&self) -> Vec<Vec<f64>> {
        (0..self.transform.rows())
            .map(|i| {
                (0..self.transform.cols())
                    .map(|j| {
                        let ratio = (&self.target_weights[i] / &self.source_weights[j])
                            .to_f64()
                            .unwrap_or(f64::NAN);
                        self.transform.get(i, j).to_f64().unwrap_or(f64::NAN) * ratio.sqrt()
                    })
                    .collect()
            })
            .collect()
    }

    /// `transform * source + constants`
    pub fn apply(&self, source: &[Polynomial]) -> Vec<Polynomial> {
        let vars = source.first().map(Polynomial::vars).unwrap_or(1);
        (0..self.transform.rows())
            .map(|i| {
                let mut acc = Polynomial::constant(vars, self.constants[i].clone());
                for (j, f) in source.iter().enumerate() {
                    acc = &acc + &f.scale(self.transform.get(i, j));
                }
                acc
            })
            .collect()
    }
}

fn rational_sqrt(r: &Coeff) -> Option<Coeff> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelateError {
    #[error("the two decompositions expand to different polynomials")]
    ExpansionMismatch,
    #[error("source {0:?} factors are not minimal")]
    NotMinimal(Side),
    #[error("no isometry relates the {0:?} factors")]
    NoIsometry(Side),
}

fn relate_side(
    source: &[WeightedSquare],
    target: &[WeightedSquare],
    side: Side,
) -> Result<IsometryRelation, RelateError> {
    let derivs: Vec<Polynomial> = source
        .iter()
        .chain(target)
        .map(|s| derivative(&s.factor))
        .collect();
    let (all, _) = basis_matrix(&derivs);
    let cols = all.cols();
    let pick = |range: std::ops::Range<usize>| {
        RationalMatrix::from_rows(range.map(|i| all.row(i).to_vec()).collect::<Vec<_>>())
    };
    let a = if source.is_empty() {
        RationalMatrix::zeros(0, cols)
    } else {
        pick(0..source.len())
    };
    let b = if target.is_empty() {
        RationalMatrix::zeros(0, cols)
    } else {
        pick(source.len()..source.len() + target.len())
    };
    if a.rank() != source.len() {
        return Err(RelateError::NotMinimal(side));
    }
    let transform = if source.is_empty() {
        if b.rank() != 0 {
            return Err(RelateError::NoIsometry(side));
        }
        RationalMatrix::zeros(target.len(), 0)
    } else {
        a.solve_left(&b).ok_or(RelateError::NoIsometry(side))?
    };
    let constants = target
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut c = t.factor.constant_term();
            for (j, s) in source.iter().enumerate() {
                c -= transform.get(i, j) * s.factor.constant_term();
            }
            c
        })
        .collect();
    let rel = IsometryRelation {
        transform,
        source_weights: source.iter().map(|s| s.weight.clone()).collect(),
        target_weights: target.iter().map(|s| s.weight.clone()).collect(),
        constants,
    };
    let sources: Vec<Polynomial> = source.iter().map(|s| s.factor.clone()).collect();
    let rebuilt = rel.apply(&sources);
    let matches = rebuilt.iter().zip(target).all(|(r, t)| r == &t.factor);
    if !rel.is_isometry() || !matches {
        return Err(RelateError::NoIsometry(side));
    }
    Ok(rel)
}

/// Express `b`'s factors through the minimal representation `a`, one
/// isometry per side.
pub fn relate_representations(
    a: &PlushDecomposition,
    b: &PlushDecomposition,
) -> Result<(IsometryRelation, IsometryRelation), RelateError> {
    if a.vars() != b.vars() || a.expand() != b.expand() {
        return Err(RelateError::ExpansionMismatch);
    }
    let her = relate_side(&a.hereditary_squares, &b.hereditary_squares, Side::Hereditary)?;
    let anti = relate_side(
        &a.antihereditary_squares,
        &b.antihereditary_squares,
        Side::Antihereditary,
    )?;
    Ok((her, anti))
}

/// A rational rotation `[[c, -s], [s, c]]` with `c^2 + s^2 = 1`.
pub fn pythagorean_rotation(a: i64, b: i64, c: i64) -> RationalMatrix {
    assert_eq!(a * a + b * b, c * c, "not a Pythagorean triple");
    let cos = BigRational::new(a.into(), c.into());
    let sin = BigRational::new(b.into(), c.into());
    RationalMatrix::from_rows(vec![vec![cos.clone(), -sin.clone()], vec![sin, cos]])
}

fn half() -> Coeff {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::rat;
    use crate::ncparse::parse;

    fn p1(s: &str) -> Polynomial {
        parse(s, 1).unwrap()
    }

    fn plush(p: &Polynomial) -> PlushDecomposition {
        match classify_plush(p).unwrap() {
            PlushVerdict::Plush(d) => d,
            PlushVerdict::NotPlush(w) => panic!("expected plush, got {w:?}"),
        }
    }

    #[test]
    fn square_of_analytic_square() {
        let p = p1("x1'^2*x1^2");
        let d = plush(&p);
        assert_eq!(
            d.hereditary_squares,
            vec![WeightedSquare::new(rat(1), p1("x1^2"))]
        );
        assert!(d.antihereditary_squares.is_empty());
        assert!(d.analytic_part.is_zero());
        assert_eq!((d.n_min, d.m_min), (1, 0));
        assert!(verify_decomposition(&p, &d));
    }

    #[test]
    fn mixed_example_is_not_plush() {
        let p = parse("x1*x2'*x1 + x1'*x2*x1'", 2).unwrap();
        match classify_plush(&p).unwrap() {
            PlushVerdict::NotPlush(FailureWitness::HessianNotSplitForm { word, .. }) => {
                assert!(complex_hessian(&p).contains(&word));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn analytic_plus_transpose() {
        let p = p1("x1 + x1'");
        let d = plush(&p);
        assert!(d.hereditary_squares.is_empty() && d.antihereditary_squares.is_empty());
        assert_eq!(d.analytic_part, p1("x1"));
    }

    #[test]
    fn both_sides_and_analytic_part() {
        let p = p1("x1'*x1 + x1*x1' + x1^3 + x1'^3");
        let d = plush(&p);
        assert_eq!(d.hereditary_squares, vec![WeightedSquare::new(rat(1), p1("x1"))]);
        assert_eq!(
            d.antihereditary_squares,
            vec![WeightedSquare::new(rat(1), p1("x1"))]
        );
        assert_eq!(d.analytic_part, p1("x1^3"));
        assert!(verify_decomposition(&p, &d));
    }

    #[test]
    fn non_psd_and_asymmetric_inputs() {
        let p = parse("x1'*x2 + x2'*x1", 2).unwrap();
        match classify_plush(&p).unwrap() {
            PlushVerdict::NotPlush(FailureWitness::GramNotPsd {
                side,
                gram,
                certificate,
                value,
            }) => {
                assert_eq!(side, Side::Hereditary);
                assert!(value.is_negative());
                assert_eq!(gram.matrix().quadratic_form(&certificate), value);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            classify_plush(&p1("x1'*x1*x1")).unwrap(),
            PlushVerdict::NotPlush(FailureWitness::NotSymmetric { .. })
        ));
        assert!(classify_plush(&p1("h1")).is_err());
    }

    #[test]
    fn analytic_part_extraction() {
        assert_eq!(
            extract_analytic_part(&p1("x1^3 + x1'^3 + 4")).unwrap(),
            p1("x1^3 + 2")
        );
        assert!(extract_analytic_part(&Polynomial::zero(1)).unwrap().is_zero());
        let r = parse("x1*x2 + x2'*x1'", 2).unwrap();
        assert_eq!(extract_analytic_part(&r).unwrap(), parse("x1*x2", 2).unwrap());
        assert!(matches!(
            extract_analytic_part(&p1("x1'*x1")),
            Err(AnalyticPartError::Mixed { .. })
        ));
        assert!(matches!(
            extract_analytic_part(&p1("x1")),
            Err(AnalyticPartError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn verify_examples() {
        let p = p1("x1'^2*x1^2");
        let good = PlushDecomposition::new(
            1,
            vec![WeightedSquare::new(rat(1), p1("x1^2"))],
            vec![],
            Polynomial::zero(1),
        );
        assert!(verify_decomposition(&p, &good));
        let bad = PlushDecomposition::new(
            1,
            vec![WeightedSquare::new(rat(1), p1("x1"))],
            vec![],
            Polynomial::zero(1),
        );
        assert!(!verify_decomposition(&p, &bad));
        let lin = PlushDecomposition::new(1, vec![], vec![], p1("x1"));
        assert!(verify_decomposition(&p1("x1 + x1'"), &lin));
        let nonanalytic = PlushDecomposition::new(1, vec![], vec![], p1("x1'"));
        assert!(!verify_decomposition(&p1("x1 + x1'"), &nonanalytic));
    }

    #[test]
    fn relate_identity_duplicate_and_shift() {
        let p = p1("x1'^2*x1^2 + x1*x1'");
        let a = plush(&p);
        let (u, v) = relate_representations(&a, &a).unwrap();
        assert_eq!(u.transform, RationalMatrix::identity(1));
        assert!(u.constants.iter().all(Zero::is_zero));
        assert!(v.is_isometry());

        // f -> (f, f) with halved weights
        let f = a.hereditary_squares[0].factor.clone();
        let b = PlushDecomposition::new(
            1,
            vec![
                WeightedSquare::new(half(), f.clone()),
                WeightedSquare::new(half(), f.clone()),
            ],
            a.antihereditary_squares.clone(),
            a.analytic_part.clone(),
        );
        let (u, _) = relate_representations(&a, &b).unwrap();
        assert!(u.is_isometry());
        assert_eq!(
            u.transform,
            RationalMatrix::from_rows(vec![vec![rat(1)], vec![rat(1)]])
        );
        assert!(u.unweighted().is_none());
        let uf = u.unweighted_f64();
        assert!((uf[0][0] - 0.5f64.sqrt()).abs() < 1e-15);

        // f -> f + 1, compensated in F
        let shifted = &f + &Polynomial::one(1);
        let b = PlushDecomposition::new(
            1,
            vec![WeightedSquare::new(rat(1), shifted)],
            a.antihereditary_squares.clone(),
            &(&a.analytic_part - &f) - &Polynomial::constant(1, half()),
        );
        assert_eq!(b.expand(), p);
        let (u, _) = relate_representations(&a, &b).unwrap();
        assert_eq!(u.constants, vec![rat(1)]);
        assert!(u.is_isometry());

        let other = plush(&p1("x1'*x1"));
        assert_eq!(
            relate_representations(&a, &other),
            Err(RelateError::ExpansionMismatch)
        );
    }

    #[test]
    fn relate_rational_rotation() {
        let p = parse("x1'*x1 + x2'*x2", 2).unwrap();
        let a = plush(&p);
        assert_eq!(a.n_min, 2);
        let rot = pythagorean_rotation(3, 4, 5);
        let fs: Vec<Polynomial> = a.hereditary_squares.iter().map(|s| s.factor.clone()).collect();
        let mixed: Vec<WeightedSquare> = (0..2)
            .map(|i| {
                let f = &fs[0].scale(rot.get(i, 0)) + &fs[1].scale(rot.get(i, 1));
                WeightedSquare::new(rat(1), f)
            })
            .collect();
        let b = PlushDecomposition::new(2, mixed, vec![], Polynomial::zero(2));
        assert_eq!(b.expand(), p);
        let (u, _) = relate_representations(&a, &b).unwrap();
        assert_eq!(u.transform, rot);
        assert_eq!(u.unweighted(), Some(rot));
        assert!(u.is_isometry());
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(
            rational_sqrt(&BigRational::new(9.into(), 4.into())),
            Some(BigRational::new(3.into(), 2.into()))
        );
        assert_eq!(rational_sqrt(&half()), None);
    }
}
