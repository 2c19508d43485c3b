pub mod bivariate;
pub mod cli;
pub mod curve;
pub mod error;
pub mod field;
pub mod hodge;
pub mod oracle;
pub mod partition;
pub mod poly;
pub mod rational;
pub mod ratfunc;
pub mod recursion;
pub mod series;
pub mod store;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Field, FieldTag};
pub use rational::Rational;
pub use ratfunc::RationalFunction;
pub use series::LaurentSeries;
