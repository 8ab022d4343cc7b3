//! Small dense matrices over the rationals.

use std::fmt;

use num_traits::{One, Zero};

use crate::freealg::Coeff;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Coeff::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Coeff::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Coeff>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diagonal(d: &[Coeff]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Coeff) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Coeff] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Coeff>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `v^T M v`
    pub fn quadratic_form(&self, v: &[Coeff]) -> Coeff {
        assert_eq!(self.rows, v.len());
        let mut acc = Coeff::zero();
        for i in 0..self.rows {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..self.cols {
                acc += &v[i] * self.get(i, j) * &v[j];
            }
        }
        acc
    }

    /// Row-echelon reduction; returns the pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).recip();
            for j in 0..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in 0..self.cols {
                    let v = self.get(i, j) - &f * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    /// Solve `X * self = b` for `X` when `self` has full row rank.
    /// Returns `None` if no exact solution exists.
    pub fn solve_left(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.cols, b.cols, "dimension mismatch");
        // X A = B  <=>  A^T X^T = B^T
        let at = self.transpose();
        let bt = b.transpose();
        let n = at.cols; // unknown rows of X^T
        let mut aug = Self::zeros(at.rows, n + bt.cols);
        for i in 0..at.rows {
            for j in 0..n {
                aug.set(i, j, at.get(i, j).clone());
            }
            for j in 0..bt.cols {
                aug.set(i, n + j, bt.get(i, j).clone());
            }
        }
        let pivots = aug.echelon();
        if pivots.iter().any(|&c| c >= n) || pivots.len() < n {
            return None;
        }
        let mut xt = Self::zeros(n, bt.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..bt.cols {
                xt.set(c, j, aug.get(r, n + j).clone());
            }
        }
        Some(xt.transpose())
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::rat;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect())
    }

    #[test]
    fn rank_and_product() {
        assert_eq!(m(&[&[1, 1], &[1, 1]]).rank(), 1);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).rank(), 2);
        assert_eq!(RationalMatrix::zeros(2, 3).rank(), 0);
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.mul(&RationalMatrix::identity(2)), a);
        assert_eq!(a.mul(&a), m(&[&[7, 10], &[15, 22]]));
    }

    #[test]
    fn solve_left_exact() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let x = m(&[&[2, -1], &[0, 3], &[1, 1]]);
        let b = x.mul(&a);
        assert_eq!(a.solve_left(&b), Some(x));
        // b outside the row space
        let b = m(&[&[1, 0, 0]]);
        assert_eq!(a.solve_left(&b), None);
    }

    #[test]
    fn quadratic_form() {
        let g = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(g.quadratic_form(&[rat(1), rat(-1)]), rat(-2));
    }
}
