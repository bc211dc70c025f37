use num_traits::{Signed, Zero};

use super::poly::{IntPoly, QPoly};
use super::rational::Rational;

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn intersects(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn add_scalar(&self, c: &Rational) -> Interval {
        Interval::new(&self.lo + c, &self.hi + c)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    /// `None` when the divisor straddles zero.
    pub fn div(&self, o: &Interval) -> Option<Interval> {
        if o.contains_zero() {
            return None;
        }
        let inv = Interval::new(o.hi.recip(), o.lo.recip());
        Some(self.mul(&inv))
    }

    pub fn eval_int(p: &IntPoly, x: &Interval) -> Interval {
        let mut acc = Interval::point(Rational::zero());
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(x).add_scalar(&Rational::from_integer(c.clone()));
        }
        acc
    }

    pub fn eval_q(p: &QPoly, x: &Interval) -> Interval {
        let mut acc = Interval::point(Rational::zero());
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(x).add_scalar(c);
        }
        acc
    }
}
