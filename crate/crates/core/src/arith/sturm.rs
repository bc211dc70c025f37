use std::cmp::Ordering;

use super::poly::IntPoly;
use super::rational::Rational;
use super::ArithError;

/// Sturm chain `p, p', −rem(p, p'), …` with each remainder scaled positively.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<IntPoly>,
}

impl SturmSequence {
    pub fn new(p: &IntPoly) -> Self {
        let mut chain = vec![p.clone()];
        if p.is_zero() {
            return SturmSequence { chain };
        }
        let d = p.derivative();
        if d.is_zero() {
            return SturmSequence { chain };
        }
        chain.push(d.primitive_keep_sign());
        loop {
            let n = chain.len();
            let r = chain[n - 2].pseudo_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg().primitive_keep_sign());
        }
        SturmSequence { chain }
    }

    pub fn chain(&self) -> &[IntPoly] {
        &self.chain
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for q in &self.chain {
            let s = q.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct roots of the source polynomial in the open interval `(lo, hi)`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> Result<usize, ArithError> {
        let p = &self.chain[0];
        if p.is_zero() {
            return Err(ArithError::ZeroPolynomial);
        }
        if lo > hi {
            return Err(ArithError::EmptyInterval);
        }
        if p.sign_at(lo) == Ordering::Equal || p.sign_at(hi) == Ordering::Equal {
            return Err(ArithError::EndpointIsRoot);
        }
        if lo == hi {
            return Ok(0);
        }
        Ok(self.variations_at(lo) - self.variations_at(hi))
    }
}

pub fn sturm_count(p: &IntPoly, lo: &Rational, hi: &Rational) -> Result<usize, ArithError> {
    SturmSequence::new(p).count(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn counts() {
        let p = IntPoly::from_i64s(&[-2, 0, 1]);
        assert_eq!(sturm_count(&p, &int(1), &int(2)).unwrap(), 1);
        let cubic = IntPoly::from_i64s(&[-1, -2, 1, 1]);
        assert_eq!(sturm_count(&cubic, &int(-2), &int(2)).unwrap(), 3);
        assert_eq!(sturm_count(&cubic, &int(-1), &int(0)).unwrap(), 1);
        let sq = IntPoly::from_i64s(&[1, -2, 1]);
        assert_eq!(sturm_count(&sq, &int(0), &int(2)).unwrap(), 1);
        assert_eq!(sturm_count(&sq, &rat(3, 2), &int(2)).unwrap(), 0);
    }

    #[test]
    fn endpoint_root_rejected() {
        let p = IntPoly::from_i64s(&[-1, 1]);
        assert_eq!(
            sturm_count(&p, &int(1), &int(2)),
            Err(ArithError::EndpointIsRoot)
        );
        assert_eq!(
            sturm_count(&p, &int(0), &int(1)),
            Err(ArithError::EndpointIsRoot)
        );
    }
}
