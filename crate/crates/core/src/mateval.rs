//! Numeric evaluation on real matrices and randomized positivity sampling.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::freealg::{Family, Letter, Polynomial};

/// `g` real `n x n` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    n: usize,
    mats: Vec<DMatrix<f64>>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<DMatrix<f64>>) -> Result<Self, EvalError> {
        let n = mats.first().map(|m| m.nrows()).unwrap_or(1);
        if let Some(m) = mats.iter().find(|m| m.nrows() != n || m.ncols() != n) {
            return Err(EvalError::SizeMismatch {
                expected: n,
                found: (m.nrows(), m.ncols()),
            });
        }
        Ok(MatrixTuple { n, mats })
    }

    /// From row-major nested arrays, one per matrix.
    pub fn from_rows(rows: &[Vec<Vec<f64>>]) -> Result<Self, EvalError> {
        let mut mats = Vec::with_capacity(rows.len());
        for m in rows {
            let n = m.len();
            if let Some(r) = m.iter().find(|r| r.len() != n) {
                return Err(EvalError::SizeMismatch {
                    expected: n,
                    found: (n, r.len()),
                });
            }
            mats.push(DMatrix::from_fn(n, n, |i, j| m[i][j]));
        }
        Self::new(mats)
    }

    pub fn to_rows(&self) -> Vec<Vec<Vec<f64>>> {
        self.mats.iter().map(matrix_rows).collect()
    }

    pub fn zeros(g: usize, n: usize) -> Self {
        MatrixTuple {
            n,
            mats: vec![DMatrix::zeros(n, n); g],
        }
    }

    /// Entries uniform in `[-1, 1]`.
    pub fn random<R: Rng>(g: usize, n: usize, rng: &mut R) -> Self {
        let mats = (0..g)
            .map(|_| DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..=1.0)))
            .collect();
        MatrixTuple { n, mats }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn mats(&self) -> &[DMatrix<f64>] {
        &self.mats
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("matrix of shape {found:?} where {expected}x{expected} was expected")]
    SizeMismatch { expected: usize, found: (usize, usize) },
    #[error("polynomial uses {family:?}{index} but only {available} matrices were given")]
    MissingMatrix {
        family: Family,
        index: u32,
        available: usize,
    },
    #[error("polynomial has direction letters but no H tuple was given")]
    MissingDirections,
}

/// `p(X, H)`; a constant `c` evaluates to `c I`.
pub fn eval(p: &Polynomial, x: &MatrixTuple, h: Option<&MatrixTuple>) -> Result<DMatrix<f64>, EvalError> {
    let n = x.n;
    if let Some(h) = h {
        if h.n != n && !h.is_empty() {
            return Err(EvalError::SizeMismatch {
                expected: n,
                found: (h.n, h.n),
            });
        }
    }
    let mut letters: HashMap<Letter, DMatrix<f64>> = HashMap::new();
    // products of word prefixes, shared between terms
    let mut prefixes: HashMap<&[Letter], DMatrix<f64>> = HashMap::new();
    let mut out = DMatrix::zeros(n, n);
    for (word, c) in p.terms() {
        let ls = word.letters();
        let mut k = ls.len();
        while k > 0 && !prefixes.contains_key(&ls[..k]) {
            k -= 1;
        }
        let mut acc = match k {
            0 => DMatrix::identity(n, n),
            _ => prefixes[&ls[..k]].clone(),
        };
        for i in k..ls.len() {
            let l = ls[i];
            let m = match letters.entry(l) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => {
                    let tuple = match l.family {
                        Family::X => x,
                        Family::H => h.ok_or(EvalError::MissingDirections)?,
                    };
                    let m = tuple
                        .mats
                        .get(l.index as usize - 1)
                        .ok_or(EvalError::MissingMatrix {
                            family: l.family,
                            index: l.index,
                            available: tuple.len(),
                        })?;
                    e.insert(if l.transposed { m.transpose() } else { m.clone() })
                }
            };
            acc = &acc * &*m;
            prefixes.insert(&ls[..=i], acc.clone());
        }
        out += acc * c.to_f64().unwrap_or(f64::NAN);
    }
    Ok(out)
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Smallest eigenvalue of the symmetric part of `m`.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return f64::INFINITY;
    }
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub sizes: Vec<usize>,
    /// Trials per size.
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            sizes: vec![1, 2, 3],
            trials: 200,
            seed: 42,
            tol: 1e-9,
        }
    }
}

/// A sample whose evaluation has an eigenvalue below `-tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub x: MatrixTuple,
    pub h: Option<MatrixTuple>,
    pub eigenvalue: f64,
    pub size: usize,
    /// Index of the trial within its size.
    pub trial: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport {
    pub samples: usize,
    pub min_eigenvalue: f64,
    /// The first sample, in (size, trial) order, below `-tol`.
    pub witness: Option<Witness>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("direction degree {0} is neither 0 nor 2")]
    DirectionDegree(usize),
    #[error("no sizes to sample")]
    NoSizes,
}

/// The generator for trial `trial` at size `size`: one ChaCha stream per
/// (size, trial) so results do not depend on scheduling.
pub fn trial_rng(seed: u64, size: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((size as u64) << 32) | trial as u64);
    rng
}

/// Draw the matrices of one trial.
pub fn trial_sample(
    q: &Polynomial,
    seed: u64,
    size: usize,
    trial: usize,
) -> (MatrixTuple, Option<MatrixTuple>) {
    let mut rng = trial_rng(seed, size, trial);
    let g = q.vars();
    let x = MatrixTuple::random(g, size, &mut rng);
    let h = (q.h_degree() > 0).then(|| MatrixTuple::random(g, size, &mut rng));
    (x, h)
}

/// Evaluate `q` at random points and report the smallest eigenvalue seen.
///
/// For `q` with direction letters both `X` and `H` are random; otherwise
/// only `X` is.
pub fn sample_positivity(q: &Polynomial, config: &SampleConfig) -> Result<PositivityReport, SampleError> {
    if !q.is_symmetric() {
        return Err(SampleError::NotSymmetric);
    }
    let hd = q.h_degree();
    if hd != 0 && hd != 2 {
        return Err(SampleError::DirectionDegree(hd));
    }
    if config.sizes.is_empty() {
        return Err(SampleError::NoSizes);
    }
    let jobs: Vec<(usize, usize)> = config
        .sizes
        .iter()
        .flat_map(|&n| (0..config.trials).map(move |t| (n, t)))
        .collect();
    let values: Vec<f64> = jobs
        .par_iter()
        .map(|&(n, t)| {
            let (x, h) = trial_sample(q, config.seed, n, t);
            let m = eval(q, &x, h.as_ref()).expect("sample tuples match the polynomial");
            min_eigenvalue(&m)
        })
        .collect();
    let min_eigenvalue = values.iter().copied().fold(f64::INFINITY, f64::min);
    let witness = values.iter().position(|&v| v < -config.tol).map(|i| {
        let (size, trial) = jobs[i];
        let (x, h) = trial_sample(q, config.seed, size, trial);
        Witness {
            x,
            h,
            eigenvalue: values[i],
            size,
            trial,
        }
    });
    Ok(PositivityReport {
        samples: jobs.len(),
        min_eigenvalue,
        witness,
        seed: config.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nccalc::derivative;
    use crate::ncparse::parse;

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        (a - b).abs().max() < tol
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let p = parse("x1*x2' + 3", 2).unwrap();
        let q = parse("x2 - x1'*x1", 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = MatrixTuple::random(2, 3, &mut rng);
        let ep = eval(&p, &x, None).unwrap();
        let eq = eval(&q, &x, None).unwrap();
        assert!(close(&eval(&(&p * &q), &x, None).unwrap(), &(&ep * &eq), 1e-12));
        assert!(close(&eval(&(&p + &q), &x, None).unwrap(), &(&ep + &eq), 1e-12));
        assert!(close(
            &eval(&p.transpose(), &x, None).unwrap(),
            &ep.transpose(),
            1e-12
        ));
    }

    #[test]
    fn constants_at_zero() {
        let p = parse("x1*x2 + 5/2 - x2'", 2).unwrap();
        let v = eval(&p, &MatrixTuple::zeros(2, 3), None).unwrap();
        assert_eq!(v, DMatrix::identity(3, 3) * 2.5);
    }

    #[test]
    fn scalar_examples() {
        let x = MatrixTuple::new(vec![DMatrix::from_element(1, 1, 2.0)]).unwrap();
        assert_eq!(eval(&parse("x1'*x1", 1).unwrap(), &x, None).unwrap()[(0, 0)], 4.0);
        let h = MatrixTuple::new(vec![DMatrix::from_element(1, 1, 3.0)]).unwrap();
        assert_eq!(
            eval(&parse("h1'*h1", 1).unwrap(), &x, Some(&h)).unwrap()[(0, 0)],
            9.0
        );
        let r = sample_positivity(&Polynomial::zero(1), &SampleConfig::default()).unwrap();
        assert_eq!((r.min_eigenvalue, r.witness), (0.0, None));
    }

    #[test]
    fn derivative_matches_central_difference() {
        let p = parse("x1'*x2*x1 + x2^3", 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = MatrixTuple::random(2, 2, &mut rng);
        let h = MatrixTuple::random(2, 2, &mut rng);
        let t = 1e-5;
        let shift = |s: f64| {
            let mats = x.mats().iter().zip(h.mats()).map(|(a, b)| a + b * s).collect();
            MatrixTuple::new(mats).unwrap()
        };
        let numeric = (eval(&p, &shift(t), None).unwrap() - eval(&p, &shift(-t), None).unwrap()) / (2.0 * t);
        let exact = eval(&derivative(&p), &x, Some(&h)).unwrap();
        assert!(close(&numeric, &exact, 1e-7));
    }

    #[test]
    fn eval_errors() {
        let p = parse("h1", 1).unwrap();
        let x = MatrixTuple::zeros(1, 2);
        assert_eq!(eval(&p, &x, None), Err(EvalError::MissingDirections));
        let q = parse("x2", 2).unwrap();
        assert!(matches!(
            eval(&q, &x, None),
            Err(EvalError::MissingMatrix { index: 2, .. })
        ));
        assert!(MatrixTuple::new(vec![DMatrix::zeros(2, 2), DMatrix::zeros(3, 3)]).is_err());
    }

    #[test]
    fn sampling_finds_indefinite_hessian() {
        let q = parse("h1'*h2 + h2'*h1", 2).unwrap();
        let cfg = SampleConfig {
            sizes: vec![1, 2],
            trials: 20,
            ..SampleConfig::default()
        };
        let r = sample_positivity(&q, &cfg).unwrap();
        assert_eq!(r.samples, 40);
        let w = r.witness.expect("indefinite");
        let v = eval(&q, &w.x, w.h.as_ref()).unwrap();
        assert_eq!(min_eigenvalue(&v), w.eigenvalue);
        assert_eq!(
            sample_positivity(&q, &cfg).unwrap(),
            sample_positivity(&q, &cfg).unwrap()
        );
    }

    #[test]
    fn sampling_square_is_nonnegative() {
        let q = parse("h1'*x1'*x1*h1", 1).unwrap();
        let r = sample_positivity(&q, &SampleConfig::default()).unwrap();
        assert!(r.min_eigenvalue >= -1e-9 && r.witness.is_none());
        assert_eq!(
            sample_positivity(&parse("x1'*x1*x1", 1).unwrap(), &SampleConfig::default()),
            Err(SampleError::NotSymmetric)
        );
        assert_eq!(
            sample_positivity(&parse("h1 + h1'", 1).unwrap(), &SampleConfig::default()),
            Err(SampleError::DirectionDegree(1))
        );
    }
}
