//! Exact symbolic kernel for Lagrangians of `r|s`-dimensional paths into a
//! supermanifold.
//!
//! The crate implements, over exact rational coefficients:
//!
//!  * the graded polynomial algebra of jet variables with canonical forms
//!    ([`expr`], [`parse`]);
//!  * partial, total and variational derivatives ([`deriv`]);
//!  * the dimension-raising differential `d` on Lagrangians, together with
//!    the checks that make the Lagrangian spaces a cochain complex:
//!    `d² = 0`, covector transformation of variational derivatives,
//!    naturality under coordinate changes, the filtration test and the
//!    inverse-problem obstruction ([`complex`]);
//!  * exact action evaluation on polynomial paths with Berezin integration
//!    over odd times, the total-divergence decomposition and the
//!    generalized Stokes identity ([`action`]);
//!  * the even-case dictionary to differential forms and a truncated
//!    polynomial cohomology computation ([`derham`]);
//!  * deterministic, seed-driven random inputs for the check suites
//!    ([`corpus`]).
//!
//! No floating point is used anywhere in the kernel; every identity is
//! checked by exact cancellation. The crate is `no_std` (with `alloc`).
//!
//! ```
//! use lagcomplex::{apply_d, d_squared_check, parse, var_deriv, Lagrangian, Signature};
//!
//! let sig = Signature::new(1, 0, 1, 0);
//! let l = Lagrangian::new(parse("1/2 * x1[1]^2", &sig).unwrap()).unwrap();
//! assert_eq!(format!("{}", var_deriv(&l, 1).unwrap()), "-x1[1 1]");
//!
//! let dl = apply_d(&l).unwrap();
//! assert_eq!(format!("{dl}"), "-x1[2] * x1[1 1]");
//! assert!(d_squared_check(&l).unwrap().is_zero());
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod action;
pub mod complex;
pub mod corpus;
pub mod derham;
pub mod deriv;
pub mod error;
pub mod expr;
pub mod jet;
pub mod monomial;
pub mod parity;
pub mod parse;
pub mod signature;

/// Exact rational coefficient type.
pub type Rat = num_rational::BigRational;

pub use action::{
    action_eval, berezin_integrate, check_flatness, divergence_decompose, stokes_check,
    substitute, Homotopy, Path,
};
pub use corpus::Corpus;
pub use complex::{
    apply_d, covector_check, d_squared_check, filtration_check, helmholtz_check, naturality_check,
    pullback, pullback_expr, CoordinateChange,
};
pub use derham::{
    bridge_check, cohomology_dims, exterior_deriv, form_to_lagrangian, lagrangian_to_form,
    PolyForm,
};
pub use deriv::{order_of, partial_deriv, total_deriv, total_deriv_multi, var_deriv, var_deriv_all, Covector};
pub use error::{Error, Result};
pub use expr::{canonicalize, Expression, Lagrangian, RawFactor};
pub use jet::{JetVariable, MultiIndex};
pub use parity::Parity;
pub use parse::{parse, ParseError};
pub use signature::Signature;
