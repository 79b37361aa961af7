//! Exact linear forms in logarithms, their integrality certificates, and
//! the asymptotic bookkeeping that turns them into irrationality-measure
//! bounds for `log 2`, `Q log 2 + Q pi` and `Q log 2 + Q log 3`.

pub mod arith;
pub mod asymptotics;
pub mod exact;
pub mod expectations;
pub mod gauss_forms;
pub mod hata;
pub mod hyper;
pub mod numeric;
pub mod rhin;

pub use exact::{BigFloat, ComplexFloat, Digits, GaussianRational, Integer, Rational};
