//! NC directional derivatives.
//!
//! First derivatives are computed combinatorially: `p_{x_j}[h_j]` is the sum
//! over all single replacements of one `x_j` letter by `h_j`. The `l`-th
//! derivative instead expands `p(x + t h, x^T + t h^T)` as a polynomial in a
//! central scalar `t`, so the two routes check each other. Direction letters
//! already present in the input are inert.

use num_bigint::BigInt;
use num_traits::One;

use crate::freealg::{Coeff, Letter, Polynomial};

/// What to differentiate and how.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeKind {
    PartialX(u32),
    PartialXT(u32),
    FullFirst,
    Lth(u32),
    ComplexHessian,
    FullHessian,
}

pub fn differentiate(p: &Polynomial, kind: DerivativeKind) -> Polynomial {
    match kind {
        DerivativeKind::PartialX(j) => partial_x(p, j),
        DerivativeKind::PartialXT(j) => partial_xt(p, j),
        DerivativeKind::FullFirst => derivative(p),
        DerivativeKind::Lth(l) => lth_derivative(p, l),
        DerivativeKind::ComplexHessian => complex_hessian(p),
        DerivativeKind::FullHessian => full_hessian(p),
    }
}

/// Sum over all single replacements of `from` by `to` in every word.
fn replace_each(p: &Polynomial, from: Letter, to: Letter) -> Polynomial {
    p.map_linear(|word, c, out| {
        for pos in word.positions_of(from) {
            out.add_term(word.with_letter_at(pos, to), c.clone());
        }
    })
}

/// `p_{x_j}[h_j]`
pub fn partial_x(p: &Polynomial, j: u32) -> Polynomial {
    replace_each(p, Letter::x(j), Letter::h(j))
}

/// `p_{x_j^T}[h_j^T]`
pub fn partial_xt(p: &Polynomial, j: u32) -> Polynomial {
    replace_each(p, Letter::xt(j), Letter::ht(j))
}

/// `p_x[h] = sum_j p_{x_j}[h_j]`
pub fn partial_x_all(p: &Polynomial) -> Polynomial {
    p.map_linear(|word, c, out| {
        for (pos, l) in word.letters().iter().enumerate() {
            if !l.is_direction() && !l.transposed {
                out.add_term(word.with_letter_at(pos, l.to_direction()), c.clone());
            }
        }
    })
}

/// `p_{x^T}[h^T] = sum_j p_{x_j^T}[h_j^T]`
pub fn partial_xt_all(p: &Polynomial) -> Polynomial {
    p.map_linear(|word, c, out| {
        for (pos, l) in word.letters().iter().enumerate() {
            if !l.is_direction() && l.transposed {
                out.add_term(word.with_letter_at(pos, l.to_direction()), c.clone());
            }
        }
    })
}

/// `p'(x)[h] = p_x[h] + p_{x^T}[h^T]`
pub fn derivative(p: &Polynomial) -> Polynomial {
    p.map_linear(|word, c, out| {
        for (pos, l) in word.letters().iter().enumerate() {
            if !l.is_direction() {
                out.add_term(word.with_letter_at(pos, l.to_direction()), c.clone());
            }
        }
    })
}

/// `l! * [t^l] p(x + t h, x^T + t h^T)`.
///
/// Each word is expanded letter by letter as a truncated polynomial in `t`
/// whose coefficients are nc polynomials.
pub fn lth_derivative(p: &Polynomial, l: u32) -> Polynomial {
    assert!(l >= 1, "derivative order must be positive");
    let order = l as usize;
    let vars = p.vars();
    let mut out = Polynomial::zero(vars);
    for (word, c) in p.terms() {
        if word.len() - word.h_degree() < order {
            continue;
        }
        // series[k] = coefficient of t^k so far
        let mut series: Vec<Polynomial> = vec![Polynomial::one(vars)];
        for &letter in word.letters() {
            let base = Polynomial::letter(vars, letter).expect("letter from in-context word");
            let mut next = vec![Polynomial::zero(vars); (series.len() + 1).min(order + 1)];
            for (k, s) in series.iter().enumerate() {
                next[k] = &next[k] + &(s * &base);
                if !letter.is_direction() && k < order {
                    let dir =
                        Polynomial::letter(vars, letter.to_direction()).expect("letter from in-context word");
                    next[k + 1] = &next[k + 1] + &(s * &dir);
                }
            }
            series = next;
        }
        if let Some(top) = series.get(order) {
            out = &out + &top.scale(c);
        }
    }
    out.scale(&factorial(l))
}

fn factorial(n: u32) -> Coeff {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Coeff::from_integer(acc)
}

/// The nc complex hessian `(p_{x^T}[h^T])_x[h]`.
pub fn complex_hessian(p: &Polynomial) -> Polynomial {
    partial_x_all(&partial_xt_all(p))
}

/// The same hessian taken in the other order, `(p_x[h])_{x^T}[h^T]`.
pub fn complex_hessian_reversed(p: &Polynomial) -> Polynomial {
    partial_xt_all(&partial_x_all(p))
}

/// `p'' = 2 q + (p_x[h])_x[h] + (p_{x^T}[h^T])_{x^T}[h^T]`
pub fn full_hessian(p: &Polynomial) -> Polynomial {
    let q = complex_hessian(p);
    let pure_x = partial_x_all(&partial_x_all(p));
    let pure_xt = partial_xt_all(&partial_xt_all(p));
    &(&q.scale(&Coeff::from_integer(2.into())) + &pure_x) + &pure_xt
}
