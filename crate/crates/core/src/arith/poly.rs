use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `den·x − num`, the primitive polynomial vanishing at `r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has degree 0 here, check `is_zero` separately.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Divides out the positive content, keeping the sign.
    pub fn primitive_keep_sign(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let g = self.content();
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `p(−x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Number of trailing zero coefficients (multiplicity of the root 0).
    pub fn zero_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Sign changes in the nonzero coefficient sequence.
    pub fn sign_variations(&self) -> usize {
        let mut last: Option<bool> = None;
        let mut count = 0;
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            let pos = c.is_positive();
            if let Some(l) = last {
                if l != pos {
                    count += 1;
                }
            }
            last = Some(pos);
        }
        count
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Homogenized value `den^d · p(num/den)`; same sign as `p(x)`.
    pub fn eval_scaled(&self, x: &Rational) -> BigInt {
        let (num, den) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> Ordering {
        self.eval_scaled(x).sign_cmp()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let d = self.degree() as u32;
        if self.is_zero() {
            return Rational::zero();
        }
        BigRational::new(
            self.eval_scaled(x),
            num_traits::pow(x.denom().clone(), d as usize),
        )
    }

    /// Pseudo-remainder of `self` by `d`, scaled by a positive constant.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let dl = d.leading();
        let dd = d.degree();
        let mut steps = 0usize;
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let rl = r.leading();
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &dl).collect();
            for (j, c) in d.coeffs.iter().enumerate() {
                next[j + shift] -= &rl * c;
            }
            r = Self::new(next);
            steps += 1;
        }
        if dl.is_negative() && steps % 2 == 1 {
            r = r.neg();
        }
        r
    }

    /// Exact quotient; panics if `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Self {
        self.checked_div(d).expect("inexact polynomial division")
    }

    pub fn checked_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let dl = d.leading();
        let dd = d.degree();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&dl);
            if !rem.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k + j] -= &qk * c;
            }
            q[k] = qk;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Primitive gcd with positive leading coefficient (primitive PRS).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Yun decomposition into pairwise coprime square-free primitive factors.
    pub fn squarefree_decompose(&self) -> Vec<(IntPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.primitive();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0);
        let mut c = fp.div_exact(&a0);
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            b = b.div_exact(&a);
            c = d.div_exact(&a);
            d = c.sub(&b.derivative());
            if !a.is_constant() {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.primitive();
        }
        let f = self.primitive();
        f.div_exact(&f.gcd(&f.derivative())).primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.is_constant() || self.gcd(&self.derivative()).is_constant()
    }

    /// A power of two strictly exceeding the absolute value of every real root.
    pub fn root_bound(&self) -> BigInt {
        let lead = self.leading().abs();
        let max = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        let ratio = max.div_ceil(&lead) + BigInt::from(2);
        BigInt::one() << ratio.bits()
    }

    /// Substitutes `x ↦ (e·y − b)/(a − c·y)` and clears denominators.
    pub fn mobius_preimage(&self, a: &BigInt, b: &BigInt, c: &BigInt, e: &BigInt) -> Self {
        let d = self.degree();
        let num = IntPoly::new(vec![-b.clone(), e.clone()]);
        let den = IntPoly::new(vec![a.clone(), -c.clone()]);
        let mut acc = IntPoly::zero();
        let mut num_pows = vec![IntPoly::one()];
        let mut den_pows = vec![IntPoly::one()];
        for _ in 0..d {
            num_pows.push(num_pows.last().unwrap().mul(&num));
            den_pows.push(den_pows.last().unwrap().mul(&den));
        }
        for (i, f) in self.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            acc = acc.add(&num_pows[i].mul(&den_pows[d - i]).scale(f));
        }
        acc
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

pub fn sign_of_int(x: &BigInt) -> Ordering {
    x.sign_cmp()
}

pub fn sign_of_rat(x: &Rational) -> Ordering {
    x.numer().sign_cmp()
}

fn fmt_terms<T: fmt::Display + Zero + PartialEq + Clone + Signed>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let unit = mag == T::one_like(&mag);
        match i {
            0 => write!(f, "{mag}")?,
            _ => {
                if !unit {
                    write!(f, "{mag}*")?;
                }
                if i == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{i}")?;
                }
            }
        }
    }
    Ok(())
}

trait OneLike {
    fn one_like(_: &Self) -> Self;
}

impl<T: One> OneLike for T {
    fn one_like(_: &Self) -> Self {
        T::one()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.coeffs)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

pub(crate) fn bigint_to_json(c: &BigInt) -> serde_json::Value {
    serde_json::Value::Number(c.to_string().parse().expect("integer literal"))
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.to_string().parse().ok(),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<serde_json::Value> = self.coeffs.iter().map(bigint_to_json).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<serde_json::Value> = Vec::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|x| {
                bigint_from_json(x).ok_or_else(|| serde::de::Error::custom("expected integer"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let dd = d.degree();
        let inv = d.leading().recip();
        let mut q = vec![Rational::zero(); self.coeffs.len() - dd];
        for k in (0..q.len()).rev() {
            let t = &r[k + dd] * &inv;
            if t.is_zero() {
                continue;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k + j] -= &t * c;
            }
            q[k] = t;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `s·self ≡ g (mod m)`, `g = gcd(self, m)` monic.
    pub fn inverse_mod(&self, m: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let lc = r0.leading().recip();
        (r0.scale(&lc), s0.scale(&lc).rem(m))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Clears denominators; the result is a positive multiple of `self`, made primitive.
    pub fn to_intpoly(&self) -> IntPoly {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect(),
        )
        .primitive_keep_sign()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.coeffs)
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[-1, 1]);
        let b = p(&[1, 1]);
        assert_eq!(a.mul(&b), p(&[-1, 0, 1]));
        assert_eq!(p(&[-1, 0, 1]).div_exact(&a), b);
        assert!(p(&[1, 0, 1]).checked_div(&a).is_none());
        assert_eq!(p(&[3, 2, 1]).derivative(), p(&[2, 2]));
        assert_eq!(p(&[0, 0, 1, -1]).zero_multiplicity(), 2);
        assert_eq!(p(&[1, 1]).reflect(), p(&[1, -1]));
        assert_eq!(format!("{}", p(&[-1, -2, 0, 1])), "x^3 - 2*x - 1");
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]));
        let g = f.gcd(&f.derivative());
        assert_eq!(g, p(&[-1, 1]));
        let mut dec = f.squarefree_decompose();
        dec.sort_by_key(|(_, m)| std::cmp::Reverse(*m));
        assert_eq!(dec, vec![(p(&[-1, 1]), 2), (p(&[2, 1]), 1)]);
        let cubic = p(&[-1, -2, 1, 1]);
        assert_eq!(cubic.squarefree_decompose(), vec![(cubic.clone(), 1)]);
        assert_eq!(
            p(&[0, 0, 0, 0, 1]).squarefree_decompose(),
            vec![(p(&[0, 1]), 4)]
        );
        assert_eq!(f.squarefree_part(), p(&[-2, 1, 1]));
    }

    #[test]
    fn pseudo_remainder_sign() {
        let a = p(&[0, 0, 1]);
        let b = p(&[1, -2]);
        let r = a.pseudo_rem(&b);
        // x^2 mod (1-2x): x = 1/2 → 1/4, scaled positively
        assert!(r.coeffs()[0].is_positive());
    }

    #[test]
    fn evaluation() {
        let f = p(&[-2, 0, 1]);
        assert_eq!(
            f.sign_at(&super::super::rational::rat(3, 2)),
            Ordering::Greater
        );
        assert_eq!(
            f.eval(&super::super::rational::rat(1, 2)),
            super::super::rational::rat(-7, 4)
        );
        assert!(BigInt::from(2) < f.root_bound());
    }

    #[test]
    fn qpoly_inverse() {
        let m = QPoly::new(vec![
            BigRational::from_integer((-2).into()),
            Rational::zero(),
            Rational::one(),
        ]);
        let a = QPoly::new(vec![Rational::one(), Rational::one()]);
        let (g, s) = a.inverse_mod(&m);
        assert_eq!(g, QPoly::one());
        assert_eq!(a.mul(&s).rem(&m), QPoly::one());
    }

    #[test]
    fn json_round_trip() {
        let f = IntPoly::new(vec![BigInt::from(10).pow(30), BigInt::from(-3)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[1000000000000000000000000000000,-3]");
        assert_eq!(serde_json::from_str::<IntPoly>(&s).unwrap(), f);
    }
}
