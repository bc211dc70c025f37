//! Exact rationals, integer polynomials and real algebraic numbers.

pub mod algebraic;
pub mod interval;
pub mod poly;
pub mod rational;
pub mod sturm;

pub use algebraic::{alg_compare, alg_sign, isolate_roots, AlgebraicNumber};
pub use interval::Interval;
pub use poly::{IntPoly, QPoly};
pub use rational::Rational;
pub use sturm::{sturm_count, SturmSequence};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("interval endpoint is a root of the polynomial")]
    EndpointIsRoot,
    #[error("polynomial is zero or constant")]
    ZeroPolynomial,
    #[error("empty interval")]
    EmptyInterval,
    #[error("interval does not isolate exactly one root")]
    NotIsolating,
    #[error("degenerate transformation")]
    Degenerate,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational `{0}`")]
    Parse(String),
}
