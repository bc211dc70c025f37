use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{clear_denominators, IntMatrix, RatMatrix};
use crate::arith::{IntPoly, QPoly, SturmSequence};

/// Numbers of positive and negative eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
}

impl Signature {
    pub fn new(positives: usize, negatives: usize) -> Self {
        Signature {
            positives,
            negatives,
        }
    }

    pub fn rank(&self) -> usize {
        self.positives + self.negatives
    }

    pub fn swap(&self) -> Self {
        Signature::new(self.negatives, self.positives)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.positives, self.negatives)
    }
}

/// Characteristic polynomial of `M`, stored as the integer characteristic
/// polynomial of `scale·M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    pub poly: IntPoly,
    pub scale: BigInt,
}

impl CharPoly {
    /// Exact monic characteristic polynomial of `M` over the rationals.
    pub fn rational(&self) -> QPoly {
        let n = self.poly.degree();
        let s = BigRational::from_integer(self.scale.clone());
        let mut pow = BigRational::one();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for i in (0..=n).rev() {
            coeffs[i] = BigRational::from_integer(self.poly.coeff(i)) / &pow;
            pow *= &s;
        }
        QPoly::new(coeffs)
    }
}

pub fn char_poly(m: &RatMatrix) -> CharPoly {
    let (im, scale) = clear_denominators(m);
    CharPoly {
        poly: int_char_poly(&im),
        scale,
    }
}

pub fn int_char_poly(m: &IntMatrix) -> IntPoly {
    IntPoly::new(m.char_poly_coeffs())
}

/// Signature of a real-rooted polynomial's roots by Descartes' rule.
pub fn descartes_signature(p: &IntPoly) -> Signature {
    Signature::new(p.sign_variations(), p.reflect().sign_variations())
}

/// Descartes' rule on a sign pattern (coefficient signs, lowest degree first).
pub fn descartes_from_signs(signs: &[i8]) -> Signature {
    let count = |s: &mut dyn Iterator<Item = i8>| {
        let mut last = 0i8;
        let mut v = 0;
        for x in s {
            if x == 0 {
                continue;
            }
            if last != 0 && x != last {
                v += 1;
            }
            last = x;
        }
        v
    };
    let pos = count(&mut signs.iter().copied());
    let neg = count(
        &mut signs
            .iter()
            .enumerate()
            .map(|(i, &s)| if i % 2 == 1 { -s } else { s }),
    );
    Signature::new(pos, neg)
}

/// Root counts on `(−∞, 0)` and `(0, ∞)` by Sturm sequences.
pub fn sturm_signature(p: &IntPoly) -> Signature {
    let k = p.zero_multiplicity();
    let q = p.shift_down(k);
    if q.is_constant() {
        return Signature::new(0, 0);
    }
    let sq = q.squarefree_decompose();
    let mut pos = 0;
    let mut neg = 0;
    for (f, mult) in sq {
        let s = SturmSequence::new(&f);
        let b = BigRational::from_integer(f.root_bound());
        let z = BigRational::zero();
        pos += mult * s.count(&z, &b).unwrap();
        neg += mult * s.count(&-b, &z).unwrap();
    }
    Signature::new(pos, neg)
}

pub fn signature(m: &RatMatrix) -> Signature {
    descartes_signature(&char_poly(m).poly)
}

pub fn int_signature(m: &IntMatrix) -> Signature {
    descartes_signature(&int_char_poly(m))
}

pub fn sign_i8(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::matrix::rat_from_i64;

    #[test]
    fn simple_signatures() {
        let i3 = rat_from_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(signature(&i3), Signature::new(3, 0));
        let k3 = rat_from_i64(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(signature(&k3), Signature::new(1, 2));
        let j3 = rat_from_i64(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]]);
        let cp = char_poly(&j3);
        assert_eq!(cp.poly, IntPoly::from_i64s(&[0, 0, -3, 1]));
        assert_eq!(signature(&j3), Signature::new(1, 0));
        assert_eq!(sturm_signature(&cp.poly), Signature::new(1, 0));
    }

    #[test]
    fn scaled_char_poly() {
        use crate::arith::rational::rat;
        let m = RatMatrix::from_rows(vec![
            vec![rat(1, 2), rat(0, 1)],
            vec![rat(0, 1), rat(-1, 3)],
        ]);
        let cp = char_poly(&m);
        let q = cp.rational();
        assert_eq!(q.eval(&rat(1, 2)), rat(0, 1));
        assert_eq!(q.eval(&rat(-1, 3)), rat(0, 1));
        assert_eq!(q.leading(), rat(1, 1));
        assert_eq!(signature(&m), Signature::new(1, 1));
    }

    #[test]
    fn sign_patterns() {
        // (x-1)(x+2)x = x^3 + x^2 - 2x
        assert_eq!(descartes_from_signs(&[0, -1, 1, 1]), Signature::new(1, 1));
    }
}
