//! Exact scalars, polynomials, rational functions, matrices and series.

pub mod dual;
pub mod field;
pub mod forms;
pub mod matrix;
pub mod multiindex;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;

pub use dual::Dual;
pub use field::Field;
pub use matrix::{Elim, ExactMatrix, QMatrix};
pub use multiindex::MultiIndex;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{rat, ratio, Rational};
pub use series::TruncSeries;
