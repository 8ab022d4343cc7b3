mod common;

use common::{coeff_strategy, poly_strategy, Alphabet};
use nalgebra::DMatrix;
use ncplush::freealg::{rat, Polynomial};
use ncplush::gram::{build_gram, psd_factor, psd_factor_matrix, split_hessian, PsdVerdict, Side};
use ncplush::mateval::{eval, MatrixTuple};
use ncplush::nccalc::{complex_hessian, derivative, lth_derivative};
use ncplush::ncint::integrate;
use ncplush::ncparse::parse;
use ncplush::plush::{
    classify_plush, verify_decomposition, PlushDecomposition, PlushVerdict, WeightedSquare,
};
use ncplush::ratmat::RationalMatrix;
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn base(g: usize) -> impl Strategy<Value = Polynomial> {
    poly_strategy(g, 4, 5, Alphabet::Base)
}

fn analytic(g: usize) -> impl Strategy<Value = Polynomial> {
    poly_strategy(g, 3, 3, Alphabet::Analytic)
}

fn tuple(seed: u64, g: usize, n: usize) -> MatrixTuple {
    MatrixTuple::random(g, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn transpose_is_an_anti_automorphism(a in base(2), b in base(2)) {
        prop_assert_eq!((&a * &b).transpose(), &b.transpose() * &a.transpose());
        prop_assert_eq!(a.transpose().transpose(), a.clone());
        prop_assert_eq!((&a + &b).transpose(), &a.transpose() + &b.transpose());
        prop_assert!((&a + &a.transpose()).is_symmetric());
    }

    #[test]
    fn ring_laws(a in base(2), b in base(2), c in base(2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(2), a.clone());
    }

    #[test]
    fn print_then_parse_is_identity(p in poly_strategy(3, 5, 6, Alphabet::Full)) {
        prop_assert_eq!(parse(&p.to_string(), 3).unwrap(), p);
    }

    #[test]
    fn derivative_is_a_derivation(a in base(2), b in base(2), c in coeff_strategy()) {
        prop_assert_eq!(derivative(&(&a * &b)), &(&derivative(&a) * &b) + &(&a * &derivative(&b)));
        prop_assert_eq!(derivative(&(&a + &b.scale(&c))), &derivative(&a) + &derivative(&b).scale(&c));
        prop_assert_eq!(derivative(&a.transpose()), derivative(&a).transpose());
        prop_assert_eq!(lth_derivative(&a, 1), derivative(&a));
    }

    #[test]
    fn integration_inverts_derivative(f in base(3)) {
        let constant = Polynomial::constant(3, f.constant_term());
        prop_assert_eq!(integrate(&derivative(&f)).unwrap(), &f - &constant);
    }

    #[test]
    fn gram_reconstructs_hereditary_part(f in analytic(2), k in analytic(2), d in 1i64..5) {
        let p = &(&f.transpose() * &f).scale(&rat(d)) + &(&k * &k.transpose());
        let split = split_hessian(&complex_hessian(&p)).unwrap();
        for (part, side) in [(&split.hereditary, Side::Hereditary), (&split.antihereditary, Side::Antihereditary)] {
            let gram = build_gram(part, side).unwrap();
            prop_assert_eq!(&gram.reconstruct(), part);
            prop_assert!(gram.matrix().is_symmetric());
            match psd_factor(&gram) {
                PsdVerdict::Psd(fact) => {
                    prop_assert_eq!(fact.reconstruct(gram.border().len()), gram.matrix().clone());
                    prop_assert_eq!(fact.rank, gram.matrix().rank());
                }
                PsdVerdict::NotPsd { .. } => prop_assert!(false, "Gram of a square is not PSD"),
            }
        }
    }

    #[test]
    fn psd_rank_ignores_border_order(entries in prop::collection::vec(-3i64..=3, 9), shift in 0usize..3) {
        // random Gram A^T A, then a cyclic relabelling
        let a = RationalMatrix::from_rows(entries.chunks(3).map(|r| r.iter().map(|&v| rat(v)).collect()).collect());
        let g = a.transpose().mul(&a);
        let perm: Vec<usize> = (0..3).map(|i| (i + shift) % 3).collect();
        let pg = RationalMatrix::from_rows(perm.iter().map(|&i| perm.iter().map(|&j| g.get(i, j).clone()).collect()).collect());
        let rank = |m: &RationalMatrix| match psd_factor_matrix(m) {
            PsdVerdict::Psd(f) => Some(f.rank),
            PsdVerdict::NotPsd { .. } => None,
        };
        prop_assert_eq!(rank(&g), Some(g.rank()));
        prop_assert_eq!(rank(&pg), rank(&g));
    }

    #[test]
    fn indefinite_matrices_get_certificates(entries in prop::collection::vec(-3i64..=3, 6)) {
        let (a, b, c, d, e, f) = (entries[0], entries[1], entries[2], entries[3], entries[4], entries[5]);
        let g = RationalMatrix::from_rows(vec![
            vec![rat(a), rat(b), rat(c)],
            vec![rat(b), rat(d), rat(e)],
            vec![rat(c), rat(e), rat(f)],
        ]);
        if let PsdVerdict::NotPsd { certificate, value } = psd_factor_matrix(&g) {
            prop_assert!(value.is_negative());
            prop_assert_eq!(g.quadratic_form(&certificate), value);
        }
    }

    #[test]
    fn constructed_plush_is_recognised(f in analytic(2), k in analytic(2), big_f in analytic(2), d in 1i64..4) {
        let expected = PlushDecomposition::new(
            2,
            vec![WeightedSquare::new(rat(d), f)],
            vec![WeightedSquare::new(rat(1), k)],
            big_f,
        );
        let p = expected.expand();
        let PlushVerdict::Plush(found) = classify_plush(&p).unwrap() else {
            return Err(TestCaseError::fail(format!("{p} rejected")));
        };
        prop_assert!(verify_decomposition(&p, &found));
        prop_assert_eq!((found.n_min, found.m_min), (expected.n_min, expected.m_min));
        // idempotence
        let PlushVerdict::Plush(again) = classify_plush(&found.expand()).unwrap() else {
            return Err(TestCaseError::fail("expansion rejected".to_string()));
        };
        prop_assert_eq!((again.n_min, again.m_min), (found.n_min, found.m_min));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in base(2), b in base(2), seed in any::<u64>(), n in 1usize..=4) {
        let x = tuple(seed, 2, n);
        let (ea, eb) = (eval(&a, &x, None).unwrap(), eval(&b, &x, None).unwrap());
        let scale = 1.0 + max_abs(&ea) * max_abs(&eb) * n as f64;
        prop_assert!(max_abs(&(eval(&(&a * &b), &x, None).unwrap() - &ea * &eb)) < 1e-10 * scale);
        prop_assert!(max_abs(&(eval(&(&a + &b), &x, None).unwrap() - (&ea + &eb))) < 1e-10 * scale);
        prop_assert!(max_abs(&(eval(&a.transpose(), &x, None).unwrap() - ea.transpose())) < 1e-10 * scale);
    }

    #[test]
    fn evaluation_at_zero_is_scalar(a in base(3), n in 1usize..=3) {
        let one = eval(&a, &MatrixTuple::zeros(3, 1), None).unwrap()[(0, 0)];
        let big = eval(&a, &MatrixTuple::zeros(3, n), None).unwrap();
        prop_assert_eq!(big, DMatrix::identity(n, n) * one);
    }

    #[test]
    fn derivative_matches_finite_differences(a in base(2), seed in any::<u64>()) {
        let x = tuple(seed, 2, 2);
        let h = tuple(seed ^ 0x9e37_79b9, 2, 2);
        let exact = eval(&derivative(&a), &x, Some(&h)).unwrap();
        let at = |t: f64| {
            let mats = x.mats().iter().zip(h.mats()).map(|(m, d)| m + d * t).collect();
            eval(&a, &MatrixTuple::new(mats).unwrap(), None).unwrap()
        };
        let err = |t: f64| max_abs(&((at(t) - at(-t)) / (2.0 * t) - &exact));
        let (coarse, fine) = (err(1e-3), err(1e-4));
        prop_assert!(fine <= coarse / 50.0 + 1e-8, "errors {coarse:e} then {fine:e}");
    }
}
