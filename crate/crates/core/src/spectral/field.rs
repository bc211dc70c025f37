use std::cmp::Ordering;

use num_traits::Zero;

use super::matrix::Matrix;
use crate::arith::algebraic::select_root;
use crate::arith::{alg_sign, AlgebraicNumber, ArithError, IntPoly, Interval, QPoly, Rational};

/// Matrix of multiplication by `r` on `Q[x]/(f)` in the monomial basis.
pub fn multiplication_matrix(r: &QPoly, f: &QPoly) -> Matrix<Rational> {
    let d = f.degree();
    let mut cols = Vec::with_capacity(d);
    let mut cur = r.rem(f);
    for _ in 0..d {
        cols.push(cur.clone());
        cur = cur.mul(&QPoly::x()).rem(f);
    }
    Matrix::from_fn(d, d, |i, j| cols[j].coeff(i))
}

/// Sum of `r(θ)` over all complex roots θ of the square-free `f`.
pub fn trace_over_roots(num: &QPoly, den: &QPoly, f: &QPoly) -> Result<Rational, ArithError> {
    let (g, inv) = den.inverse_mod(f);
    if g.degree() > 0 {
        return Err(ArithError::DivisionByZero);
    }
    Ok(multiplication_matrix(&num.mul(&inv).rem(f), f).trace())
}

/// `num(α)/den(α)` as an algebraic number.
pub fn rational_function_value(
    alpha: &AlgebraicNumber,
    num: &QPoly,
    den: &QPoly,
) -> Result<AlgebraicNumber, ArithError> {
    let den_int = den.to_intpoly();
    if den.is_zero() || alg_sign(&den_int, alpha) == Ordering::Equal {
        return Err(ArithError::DivisionByZero);
    }
    if let Some(r) = alpha.as_rational() {
        return Ok(AlgebraicNumber::from_rational(num.eval(&r) / den.eval(&r)));
    }
    let mut f = alpha.poly().clone();
    let common = f.gcd(&den_int);
    if !common.is_constant() {
        f = f.div_exact(&common).primitive();
    }
    let alpha = AlgebraicNumber::new(&f, alpha.lo().clone(), alpha.hi().clone())?;
    let fq = f.to_qpoly();
    let (_, inv) = den.inverse_mod(&fq);
    let r = num.mul(&inv).rem(&fq);
    if r.degree() == 0 {
        return Ok(AlgebraicNumber::from_rational(r.coeff(0)));
    }
    let cp = multiplication_matrix(&r, &fq).char_poly_coeffs();
    let g = QPoly::new(cp).to_intpoly().squarefree_part();
    let mut a = alpha.clone();
    Ok(select_root(&g, || {
        let enc = loop {
            let x = a.interval();
            if let Some(v) = Interval::eval_q(num, &x).div(&Interval::eval_q(den, &x)) {
                break v;
            }
            a.bisect();
        };
        a.bisect();
        enc
    }))
}

/// Evaluates an integer polynomial at a rational point exactly.
pub fn eval_at(p: &IntPoly, r: &Rational) -> Rational {
    if p.is_zero() {
        Rational::zero()
    } else {
        p.eval(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::isolate_roots;
    use crate::arith::rational::{int, rat};

    fn q(c: &[i64]) -> QPoly {
        IntPoly::from_i64s(c).to_qpoly()
    }

    #[test]
    fn traces() {
        // roots ±sqrt2: sum of 1/x^2... use r = x^2 → trace 4
        let f = q(&[-2, 0, 1]);
        assert_eq!(
            trace_over_roots(&q(&[0, 0, 1]), &q(&[1]), &f).unwrap(),
            int(4)
        );
        assert_eq!(trace_over_roots(&q(&[1]), &q(&[0, 1]), &f).unwrap(), int(0));
        assert!(trace_over_roots(&q(&[1]), &q(&[0, 1]), &q(&[0, 1])).is_err());
    }

    #[test]
    fn values() {
        let s2 = isolate_roots(&IntPoly::from_i64s(&[-2, 0, 1]))[1].clone();
        // (1 + x)/(2 x) at sqrt2 = (2 + sqrt2)/4
        let v = rational_function_value(&s2, &q(&[1, 1]), &q(&[0, 2])).unwrap();
        assert!((v.to_f64() - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-14);
        let w = rational_function_value(&s2, &q(&[0, 0, 3]), &q(&[2])).unwrap();
        assert_eq!(w.as_rational(), Some(int(3)));
        let third = AlgebraicNumber::from_rational(rat(1, 3));
        let z = rational_function_value(&third, &q(&[1]), &q(&[0, 1])).unwrap();
        assert_eq!(z.as_rational(), Some(int(3)));
    }
}
