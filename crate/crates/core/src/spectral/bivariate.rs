use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{IntMatrix, Matrix};
use super::signature::{descartes_from_signs, sign_i8, Signature};
use super::SpectralError;
use crate::arith::poly::{bigint_from_json, bigint_to_json};
use crate::arith::{alg_sign, AlgebraicNumber, IntPoly, QPoly, Rational};

/// `char(x; M0 + t·M1)` for integer matrices, coefficient of `x^i` stored as a
/// polynomial in `t`; the represented matrix is `scale` times the intended one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateCharPoly {
    pub coeffs: Vec<IntPoly>,
    pub scale: BigInt,
}

/// Interpolates integer-coefficient polynomials from values at `t = 0, 1, …, d`.
pub fn interpolate_at_naturals(values: &[BigInt]) -> IntPoly {
    let mut diffs = values.to_vec();
    let mut newton = Vec::with_capacity(values.len());
    for _ in 0..values.len() {
        newton.push(diffs[0].clone());
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let mut acc = IntPoly::zero();
    let mut falling = IntPoly::one();
    let mut fact = BigInt::one();
    for (k, d) in newton.iter().enumerate() {
        if k > 0 {
            fact *= BigInt::from(k);
            falling = falling.mul(&IntPoly::new(vec![
                BigInt::from(-(k as i64 - 1)),
                BigInt::one(),
            ]));
        }
        if d.is_zero() {
            continue;
        }
        let (c, r) = d.div_rem(&fact);
        debug_assert!(r.is_zero(), "non-integer interpolation");
        acc = acc.add(&falling.scale(&c));
    }
    acc
}

/// Characteristic polynomial of the pencil `M0 + t·M1`.
pub fn pencil_char_poly(m0: &IntMatrix, m1: &IntMatrix) -> BivariateCharPoly {
    let n = m0.order();
    let samples: Vec<Vec<BigInt>> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let t = BigInt::from(k);
            let m = Matrix::from_fn(n, n, |i, j| m0.get(i, j) + &t * m1.get(i, j));
            let cp = m.char_poly_coeffs();
            (0..=n)
                .map(|i| cp.get(i).cloned().unwrap_or_default())
                .collect()
        })
        .collect();
    let coeffs = (0..=n)
        .map(|i| {
            let vals: Vec<BigInt> = samples.iter().map(|s| s[i].clone()).collect();
            interpolate_at_naturals(&vals)
        })
        .collect();
    BivariateCharPoly {
        coeffs,
        scale: BigInt::one(),
    }
}

/// `char(x; −(a·A1 + t·A2))` for complementary relation matrices.
pub fn char_poly_bivariate(
    a1: &IntMatrix,
    a2: &IntMatrix,
    a_sign: i64,
) -> Result<BivariateCharPoly, SpectralError> {
    let n = a1.order();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { 0 } else { 1 };
            if a1.get(i, j) + a2.get(i, j) != BigInt::from(want) {
                return Err(SpectralError::RelationCover);
            }
        }
    }
    let m0 = a1.scale(&BigInt::from(-a_sign));
    let m1 = a2.neg();
    Ok(pencil_char_poly(&m0, &m1))
}

impl BivariateCharPoly {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Characteristic polynomial at a rational `t` (of the scaled matrix).
    pub fn at_rational(&self, t: &Rational) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        Rational::zero()
                    } else {
                        c.eval(t)
                    }
                })
                .collect(),
        )
    }

    pub fn signature_at_rational(&self, t: &Rational) -> Signature {
        let signs: Vec<i8> = self
            .coeffs
            .iter()
            .map(|c| {
                if c.is_zero() {
                    0
                } else {
                    sign_i8(&c.eval_scaled(t))
                }
            })
            .collect();
        descartes_from_signs(&signs)
    }

    /// Signature at an algebraic `t` by exact coefficient signs and Descartes' rule.
    pub fn signature_at_algebraic(&self, b: &AlgebraicNumber) -> Signature {
        if let Some(r) = b.as_rational() {
            return self.signature_at_rational(&r);
        }
        let signs: Vec<i8> = self
            .coeffs
            .iter()
            .map(|c| match alg_sign(c, b) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            })
            .collect();
        descartes_from_signs(&signs)
    }

    /// Lowest `x`-degree whose coefficient is not identically zero in `t`.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl Serialize for BivariateCharPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            coefficients: Vec<Vec<serde_json::Value>>,
            scale: serde_json::Value,
        }
        let width = self
            .coeffs
            .iter()
            .map(|c| c.coeffs().len())
            .max()
            .unwrap_or(0);
        Out {
            coefficients: self
                .coeffs
                .iter()
                .map(|c| (0..width).map(|k| bigint_to_json(&c.coeff(k))).collect())
                .collect(),
            scale: bigint_to_json(&self.scale),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BivariateCharPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        struct In {
            coefficients: Vec<Vec<serde_json::Value>>,
            scale: serde_json::Value,
        }
        let raw = In::deserialize(d)?;
        let bad = || D::Error::custom("expected integer");
        let coeffs = raw
            .coefficients
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| bigint_from_json(v).ok_or_else(bad))
                    .collect::<Result<Vec<_>, _>>()
                    .map(IntPoly::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let scale = bigint_from_json(&raw.scale).ok_or_else(bad)?;
        Ok(BivariateCharPoly { coeffs, scale })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use crate::spectral::matrix::{int_to_rat, RatMatrix};
    use crate::spectral::signature::char_poly;

    fn ints(rows: &[Vec<i64>]) -> IntMatrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    fn complement(a: &IntMatrix) -> IntMatrix {
        let n = a.order();
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::zero()
            } else {
                BigInt::one() - a.get(i, j)
            }
        })
    }

    #[test]
    fn interpolation() {
        let p = IntPoly::from_i64s(&[3, -2, 0, 5]);
        let vals: Vec<BigInt> = (0..6).map(|k| p.eval_int(&BigInt::from(k))).collect();
        assert_eq!(interpolate_at_naturals(&vals), p);
    }

    #[test]
    fn edge_and_path() {
        let e = ints(&[vec![0, 1], vec![1, 0]]);
        let z = ints(&[vec![0, 0], vec![0, 0]]);
        let bi = char_poly_bivariate(&e, &z, 1).unwrap();
        assert_eq!(
            bi.at_rational(&rat(7, 3)),
            IntPoly::from_i64s(&[-1, 0, 1]).to_qpoly()
        );
        let p3 = ints(&[vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]]);
        let bi = char_poly_bivariate(&p3, &complement(&p3), 1).unwrap();
        let k3 = ints(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(
            bi.at_rational(&rat(1, 1)),
            char_poly(&int_to_rat(&k3.neg())).rational()
        );
        assert!(char_poly_bivariate(&p3, &p3, 1).is_err());
    }

    #[test]
    fn pentagon_slice() {
        let c5 = ints(&[
            vec![0, 1, 0, 0, 1],
            vec![1, 0, 1, 0, 0],
            vec![0, 1, 0, 1, 0],
            vec![0, 0, 1, 0, 1],
            vec![1, 0, 0, 1, 0],
        ]);
        let a2 = complement(&c5);
        let bi = char_poly_bivariate(&c5, &a2, 1).unwrap();
        let half = rat(1, 2);
        let direct: RatMatrix = int_to_rat(&c5).add(&int_to_rat(&a2).scale(&half)).neg();
        assert_eq!(bi.at_rational(&half), char_poly(&direct).rational());
        let json = serde_json::to_string(&bi).unwrap();
        let back: BivariateCharPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, bi);
    }
}
