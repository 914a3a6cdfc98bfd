//! Exact exterior calculus on `R^n` and a census of the non-trivial
//! compositions of the differential operations `∇0..∇n`.
//!
//! Functions are polynomials with rational coefficients ([`ring`]), forms
//! carry one polynomial per increasing multi-index ([`multiindex`],
//! [`forms`]), and the operations act on coordinate vector functions
//! ([`nabla`]). [`census`] counts compositions by graph walks, closed forms
//! and the symbolic oracle; [`harmonic`] covers harmonic functions and fields.

pub mod census;
pub mod cli;
pub mod forms;
pub mod harmonic;
pub mod multiindex;
pub mod nabla;
pub mod random;
pub mod ring;
pub mod verify;

pub use forms::KForm;
pub use multiindex::MultiIndex;
pub use nabla::{Family, OperationDescriptor, VectorFunction};
pub use ring::{Monomial, Polynomial, Rational};
