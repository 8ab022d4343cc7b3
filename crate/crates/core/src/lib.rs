//! Exact symbolic tools for symmetric polynomials in free noncommuting
//! variables `x_1..x_g` and their transposes: directional derivatives,
//! integration, complex hessians and the plush (nc plurisubharmonic)
//! classification, plus numeric checks on real matrices.
//!
//! ```
//! use ncplush::{classify_plush, parse, PlushVerdict};
//!
//! let p = parse("x1'*x1 + x1^3 + x1'^3", 1).unwrap();
//! let PlushVerdict::Plush(d) = classify_plush(&p).unwrap() else { panic!() };
//! assert_eq!(d.expand(), p);
//! ```

pub mod freealg;
pub mod gram;
pub mod mateval;
pub mod nccalc;
pub mod ncint;
pub mod ncparse;
pub mod plush;
pub mod ratmat;

pub use freealg::{AlgebraError, Classification, Coeff, Family, Letter, Polynomial, Word};
pub use gram::{build_gram, psd_factor, split_hessian, GramError, GramForm, PsdVerdict, Side};
pub use mateval::{eval, min_eigenvalue, sample_positivity, MatrixTuple, PositivityReport, SampleConfig};
pub use nccalc::{complex_hessian, derivative, differentiate, full_hessian, lth_derivative, DerivativeKind};
pub use ncint::{frobenius_check, integrate, is_complex_hessian, is_integrable, FrobeniusSystem};
pub use ncparse::{parse, parse_infer, print, ParseError};
pub use plush::{
    classify_plush, extract_analytic_part, relate_representations, verify_decomposition, FailureWitness,
    PlushDecomposition, PlushVerdict, WeightedSquare,
};
pub use ratmat::RationalMatrix;
