use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{IntPoly, QPoly, Rational};

/// Commutative ring operations needed by the division-free algorithms,
/// plus exact division for fraction-free elimination.
pub trait Ring: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Quotient when `o` divides `self` exactly.
    fn div_exact(&self, o: &Self) -> Self;
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        let (q, r) = self.div_rem(o);
        debug_assert!(Zero::is_zero(&r));
        q
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

impl Ring for IntPoly {
    fn zero() -> Self {
        IntPoly::zero()
    }
    fn one() -> Self {
        IntPoly::one()
    }
    fn is_zero(&self) -> bool {
        IntPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        IntPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        IntPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        IntPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        IntPoly::neg(self)
    }
    fn div_exact(&self, o: &Self) -> Self {
        IntPoly::div_exact(self, o)
    }
}

impl Ring for QPoly {
    fn zero() -> Self {
        QPoly::zero()
    }
    fn one() -> Self {
        QPoly::one()
    }
    fn is_zero(&self) -> bool {
        QPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        QPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        QPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        QPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        self.scale(&-<Rational as One>::one())
    }
    fn div_exact(&self, o: &Self) -> Self {
        self.divrem(o).0
    }
}
