use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Formats as `n` or `n/d`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.denom().bits() as i64 - r.numer().bits() as i64 + 60;
    let scaled = if shift >= 0 {
        (r.numer() << shift as usize) / r.denom()
    } else {
        r.numer() / (r.denom() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Rational {
    BigRational::from_float(x).unwrap_or_else(Rational::zero)
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / BigInt::from(2)
}

/// Largest `m / 2^k` not exceeding `r`.
pub fn dyadic_floor(r: &Rational, k: u32) -> Rational {
    let scale = BigInt::one() << k;
    let num = (r.numer() * &scale).div_floor(r.denom());
    BigRational::new(num, scale)
}

/// Smallest `m / 2^k` not below `r`.
pub fn dyadic_ceil(r: &Rational, k: u32) -> Rational {
    let scale = BigInt::one() << k;
    let num = (r.numer() * &scale).div_ceil(r.denom());
    BigRational::new(num, scale)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_format_round_trip() {
        for s in ["0", "-3", "7/2", "-1/6"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn dyadic_rounding() {
        let r = rat(1, 3);
        assert_eq!(dyadic_floor(&r, 2), rat(1, 4));
        assert_eq!(dyadic_ceil(&r, 2), rat(1, 2));
        assert_eq!(dyadic_floor(&rat(-1, 3), 1), rat(-1, 2));
        assert!((to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
    }
}
