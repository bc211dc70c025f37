use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::interval::Interval;
use super::poly::{sign_of_rat, IntPoly, QPoly};
use super::rational::{format_rational, midpoint, parse_rational, to_f64, Rational};
use super::sturm::{sturm_count, SturmSequence};
use super::ArithError;

/// A real algebraic number: the unique root of a square-free primitive
/// polynomial inside a closed rational interval.
#[derive(Clone)]
pub struct AlgebraicNumber {
    poly: IntPoly,
    lo: Rational,
    hi: Rational,
}

impl AlgebraicNumber {
    pub fn from_rational(r: Rational) -> Self {
        AlgebraicNumber {
            poly: IntPoly::linear_root(&r),
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// Validates and normalizes a (polynomial, interval) pair.
    pub fn new(poly: &IntPoly, lo: Rational, hi: Rational) -> Result<Self, ArithError> {
        if poly.is_constant() {
            return Err(ArithError::ZeroPolynomial);
        }
        if lo > hi {
            return Err(ArithError::EmptyInterval);
        }
        let poly = poly.squarefree_part();
        if lo == hi {
            if poly.sign_at(&lo) != Ordering::Equal {
                return Err(ArithError::NotIsolating);
            }
            return Ok(AlgebraicNumber { poly, lo, hi });
        }
        let n = sturm_count(&poly, &lo, &hi)?;
        if n != 1 {
            return Err(ArithError::NotIsolating);
        }
        Ok(AlgebraicNumber { poly, lo, hi })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_point() {
            return Some(self.lo.clone());
        }
        if self.poly.degree() == 1 {
            let c = self.poly.coeffs();
            return Some(BigRational::new(-c[0].clone(), c[1].clone()));
        }
        None
    }

    /// One bisection step; collapses to a point on an exact hit.
    pub fn bisect(&mut self) {
        if self.is_point() {
            return;
        }
        let m = midpoint(&self.lo, &self.hi);
        let sm = self.poly.sign_at(&m);
        if sm == Ordering::Equal {
            self.lo = m.clone();
            self.hi = m;
        } else if sm == self.poly.sign_at(&self.lo) {
            self.lo = m;
        } else {
            self.hi = m;
        }
    }

    pub fn refine(&self, width: &Rational) -> Self {
        let mut a = self.clone();
        while &(&a.hi - &a.lo) > width {
            a.bisect();
        }
        a
    }

    pub fn refine_mut(&mut self, width: &Rational) {
        while &(&self.hi - &self.lo) > width {
            self.bisect();
        }
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return to_f64(&r);
        }
        let mut a = self.clone();
        loop {
            let w = to_f64(&(&a.hi - &a.lo));
            let scale = to_f64(&a.lo).abs().max(to_f64(&a.hi).abs()).max(1e-300);
            if w <= scale * 1e-18 || a.is_point() {
                break;
            }
            a.bisect();
        }
        to_f64(&midpoint(&a.lo, &a.hi))
    }

    /// Decimal string with `digits` fractional digits, truncated toward the enclosure.
    pub fn to_decimal(&self, digits: u32) -> String {
        let width = BigRational::new(BigInt::one(), BigInt::from(10).pow(digits + 2));
        let a = self.refine(&width);
        decimal_string(&midpoint(&a.lo, &a.hi), digits)
    }

    pub fn sign(&self) -> Ordering {
        alg_sign(&IntPoly::x(), self)
    }

    pub fn neg(&self) -> Self {
        if self.is_point() {
            return Self::from_rational(-&self.lo);
        }
        AlgebraicNumber {
            poly: self.poly.reflect().primitive(),
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    /// `(a·α + b)/(c·α + e)` for integers with `a·e ≠ b·c` and `c·α + e ≠ 0`.
    pub fn mobius(&self, a: i64, b: i64, c: i64, e: i64) -> Result<Self, ArithError> {
        let (ab, bb, cb, eb) = (
            BigInt::from(a),
            BigInt::from(b),
            BigInt::from(c),
            BigInt::from(e),
        );
        if &ab * &eb == &bb * &cb {
            return Err(ArithError::Degenerate);
        }
        let den_poly = IntPoly::new(vec![eb.clone(), cb.clone()]);
        if alg_sign(&den_poly, self) == Ordering::Equal {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            let v = (Rational::from_integer(ab) * &r + Rational::from_integer(bb))
                / (Rational::from_integer(cb) * &r + Rational::from_integer(eb));
            return Ok(Self::from_rational(v));
        }
        let g = self
            .poly
            .mobius_preimage(&ab, &bb, &cb, &eb)
            .squarefree_part();
        let num = QPoly::new(vec![Rational::from_integer(bb), Rational::from_integer(ab)]);
        let den = den_poly.to_qpoly();
        let mut alpha = self.clone();
        Ok(select_root(&g, || {
            let enc = loop {
                let x = alpha.interval();
                if let Some(v) = Interval::eval_q(&num, &x).div(&Interval::eval_q(&den, &x)) {
                    break v;
                }
                alpha.bisect();
            };
            alpha.bisect();
            enc
        }))
    }

    /// A primitive integer factor of degree at most 2 of the defining polynomial that
    /// vanishes here, when one exists.
    pub fn low_degree_factor(&self) -> Option<IntPoly> {
        if let Some(r) = self.as_rational() {
            return Some(IntPoly::linear_root(&r).primitive());
        }
        let lead = self.poly.leading().abs();
        let scale =
            (BigInt::from(4) * &lead * &lead * (self.poly.root_bound() + BigInt::one())) << 40;
        let width = BigRational::new(BigInt::one(), scale);
        let alpha = self.refine(&width);
        let linear = IntPoly::linear_root(&simplest_between(&alpha.lo, &alpha.hi));
        if self.poly.checked_div(&linear).is_some() && alg_sign(&linear, self) == Ordering::Equal {
            return Some(linear.primitive());
        }
        if self.poly.degree() == 2 {
            return Some(self.poly.primitive());
        }
        for beta in isolate_roots(&self.poly) {
            if alg_compare(&beta, self) == Ordering::Equal {
                continue;
            }
            let beta = beta.refine(&width);
            let s = alpha.interval().add(&beta.interval());
            let t = alpha.interval().mul(&beta.interval());
            let s = simplest_between(&s.lo, &s.hi);
            let t = simplest_between(&t.lo, &t.hi);
            let quad = QPoly::new(vec![t, -s, BigRational::one()]);
            let den = quad.coeffs().iter().fold(BigInt::one(), |d, c| {
                num_integer::Integer::lcm(&d, c.denom())
            });
            let quad = IntPoly::new(
                quad.coeffs()
                    .iter()
                    .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                    .collect(),
            )
            .primitive();
            if self.poly.checked_div(&quad).is_some() && alg_sign(&quad, self) == Ordering::Equal {
                return Some(quad);
            }
        }
        None
    }

    /// Best-effort closed form for rational and quadratic numbers.
    pub fn closed_form(&self) -> Option<String> {
        let f = self.low_degree_factor()?;
        if f.degree() == 1 {
            let c = f.coeffs();
            return Some(format_rational(&BigRational::new(
                -c[0].clone(),
                c[1].clone(),
            )));
        }
        let c = f.coeffs();
        let (c0, c1, c2) = (&c[0], &c[1], &c[2]);
        let disc: BigInt = c1 * c1 - BigInt::from(4) * c2 * c0;
        let (k, m) = split_square(&disc);
        let vertex = BigRational::new(-c1.clone(), BigInt::from(2) * c2);
        let plus = alg_compare(self, &Self::from_rational(vertex)) == Ordering::Greater;
        let den = BigInt::from(2) * c2;
        let g = num_integer::Integer::gcd(&num_integer::Integer::gcd(c1, &k), &den);
        let (b, k, den) = (-c1 / &g, &k / &g, &den / &g);
        let sign = if plus { "+" } else { "-" };
        let kpart = if k.is_one() {
            String::new()
        } else {
            format!("{k}*")
        };
        let body = if b.is_zero() {
            format!("{}{kpart}sqrt({m})", if plus { "" } else { "-" })
        } else {
            format!("{b}{sign}{kpart}sqrt({m})")
        };
        if den.is_one() {
            Some(body)
        } else {
            Some(format!("({body})/{den}"))
        }
    }
}

/// The fraction with the smallest denominator in `[lo, hi]`.
fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl.clone() + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut m = n.clone();
    let mut k = BigInt::one();
    let mut f = BigInt::from(2);
    while &f * &f <= m && f < BigInt::from(100_000) {
        let sq = &f * &f;
        while (&m % &sq).is_zero() {
            m /= &sq;
            k *= &f;
        }
        f += 1;
    }
    let r = m.sqrt();
    if &r * &r == m {
        k *= r;
        m = BigInt::one();
    }
    (k, m)
}

fn decimal_string(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let scaled = (r * BigRational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let neg = scaled.is_negative();
    let s = scaled.abs().to_string();
    let d = digits as usize;
    let s = if s.len() <= d {
        format!("{}{}", "0".repeat(d + 1 - s.len()), s)
    } else {
        s
    };
    let (ip, fp) = s.split_at(s.len() - d);
    let sign = if neg { "-" } else { "" };
    if d == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Distinct real roots of `p` in increasing order, each defined by the
/// square-free part of `p`.
pub fn isolate_roots(p: &IntPoly) -> Vec<AlgebraicNumber> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let f = p.squarefree_part();
    let s = SturmSequence::new(&f);
    let b = Rational::from_integer(f.root_bound());
    let lo = -b.clone();
    let n = s
        .count(&lo, &b)
        .expect("root bound endpoints are not roots");
    isolate_rec(&f, &s, lo, b, n, &mut out);
    out
}

fn isolate_rec(
    f: &IntPoly,
    s: &SturmSequence,
    lo: Rational,
    hi: Rational,
    n: usize,
    out: &mut Vec<AlgebraicNumber>,
) {
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push(AlgebraicNumber {
            poly: f.clone(),
            lo,
            hi,
        });
        return;
    }
    let m = midpoint(&lo, &hi);
    if f.sign_at(&m) == Ordering::Equal {
        let mut delta = (&hi - &lo) / BigInt::from(4);
        loop {
            let (a, b) = (&m - &delta, &m + &delta);
            if f.sign_at(&a) != Ordering::Equal
                && f.sign_at(&b) != Ordering::Equal
                && s.count(&a, &b).unwrap() == 1
            {
                let left = s.count(&lo, &a).unwrap();
                isolate_rec(f, s, lo, a.clone(), left, out);
                out.push(AlgebraicNumber {
                    poly: f.clone(),
                    lo: m.clone(),
                    hi: m,
                });
                isolate_rec(f, s, b, hi, n - left - 1, out);
                return;
            }
            delta /= BigInt::from(2);
        }
    }
    let left = s.count(&lo, &m).unwrap();
    isolate_rec(f, s, lo, m.clone(), left, out);
    isolate_rec(f, s, m, hi, n - left, out);
}

/// Picks the unique root of `g` lying in a shrinking sequence of enclosures.
pub(crate) fn select_root(g: &IntPoly, mut enclose: impl FnMut() -> Interval) -> AlgebraicNumber {
    let mut cands = isolate_roots(g);
    assert!(!cands.is_empty(), "no real root to select");
    loop {
        let enc = enclose();
        let alive: Vec<usize> = (0..cands.len())
            .filter(|&i| cands[i].interval().intersects(&enc))
            .collect();
        assert!(!alive.is_empty(), "enclosure misses every root");
        if alive.len() == 1 {
            return cands.swap_remove(alive[0]);
        }
        for &i in &alive {
            cands[i].bisect();
        }
    }
}

/// Exact sign of `expr(α)`.
pub fn alg_sign(expr: &IntPoly, alpha: &AlgebraicNumber) -> Ordering {
    if expr.is_zero() {
        return Ordering::Equal;
    }
    if alpha.is_point() {
        return expr.sign_at(&alpha.lo);
    }
    if !expr.is_constant() {
        let g = expr.gcd(&alpha.poly);
        if !g.is_constant() && sturm_count(&g, &alpha.lo, &alpha.hi).unwrap() == 1 {
            return Ordering::Equal;
        }
    }
    let mut a = alpha.clone();
    loop {
        if a.is_point() {
            return expr.sign_at(&a.lo);
        }
        let v = Interval::eval_int(expr, &a.interval());
        if !v.contains_zero() {
            return sign_of_rat(&v.lo);
        }
        a.bisect();
    }
}

/// Exact order of two algebraic numbers.
pub fn alg_compare(x: &AlgebraicNumber, y: &AlgebraicNumber) -> Ordering {
    if x.hi < y.lo {
        return Ordering::Less;
    }
    if y.hi < x.lo {
        return Ordering::Greater;
    }
    let g = x.poly.gcd(&y.poly);
    if !g.is_constant() {
        let lo = (&x.lo).max(&y.lo).clone();
        let hi = (&x.hi).min(&y.hi).clone();
        let hit = g.sign_at(&lo) == Ordering::Equal
            || g.sign_at(&hi) == Ordering::Equal
            || (lo < hi && sturm_count(&g, &lo, &hi).unwrap() > 0);
        if hit {
            return Ordering::Equal;
        }
    }
    let (mut a, mut b) = (x.clone(), y.clone());
    loop {
        a.bisect();
        b.bisect();
        if a.hi < b.lo {
            return Ordering::Less;
        }
        if b.hi < a.lo {
            return Ordering::Greater;
        }
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        alg_compare(self, o) == Ordering::Equal
    }
}

impl Eq for AlgebraicNumber {}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, o: &Self) -> Ordering {
        alg_compare(self, o)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.closed_form() {
            Some(s) => write!(f, "{s}"),
            None => write!(
                f,
                "root of {} in [{}, {}]",
                self.poly,
                format_rational(&self.lo),
                format_rational(&self.hi)
            ),
        }
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Alg({} in [{}, {}] ≈ {})",
            self.poly,
            format_rational(&self.lo),
            format_rational(&self.hi),
            self.to_f64()
        )
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraicJson {
    poly: IntPoly,
    lo: String,
    hi: String,
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AlgebraicJson {
            poly: self.poly.clone(),
            lo: format_rational(&self.lo),
            hi: format_rational(&self.hi),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = AlgebraicJson::deserialize(d)?;
        let lo = parse_rational(&j.lo).map_err(D::Error::custom)?;
        let hi = parse_rational(&j.hi).map_err(D::Error::custom)?;
        AlgebraicNumber::new(&j.poly, lo, hi).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn sqrt2() -> AlgebraicNumber {
        AlgebraicNumber::new(&p(&[-2, 0, 1]), int(1), int(2)).unwrap()
    }

    #[test]
    fn isolation() {
        let r = isolate_roots(&p(&[0, -1, 1]));
        assert_eq!(r.len(), 2);
        assert_eq!(r[0], AlgebraicNumber::from_int(0));
        assert_eq!(r[1], AlgebraicNumber::from_int(1));
        assert!(r[0].hi < r[1].lo);
        let c = isolate_roots(&p(&[-1, -2, 1, 1]));
        assert_eq!(c.len(), 3);
        assert!(c[1].lo >= int(-1) && c[1].hi <= int(0));
        assert!((c[1].to_f64() + 0.445041867912629).abs() < 1e-12);
        let dbl = isolate_roots(&p(&[1, -2, 1]).mul(&p(&[-2, 0, 1])));
        assert_eq!(dbl.len(), 3);
    }

    #[test]
    fn signs() {
        let s = sqrt2();
        assert_eq!(alg_sign(&p(&[-1, 1]), &s), Ordering::Greater);
        assert_eq!(alg_sign(&p(&[-2, 0, 1]), &s), Ordering::Equal);
        let c = &isolate_roots(&p(&[-1, -2, 1, 1]))[1];
        assert_eq!(alg_sign(&p(&[-1, 4]), c), Ordering::Less);
        assert_eq!(alg_sign(&p(&[0, -2, 0, 1]), &s), Ordering::Equal);
    }

    #[test]
    fn comparisons() {
        let one = AlgebraicNumber::from_int(1);
        let two = AlgebraicNumber::new(&p(&[-2, 1]), int(0), int(3)).unwrap();
        assert_eq!(alg_compare(&one, &two), Ordering::Less);
        let alt = AlgebraicNumber::new(&p(&[-4, 0, 2]), int(1), int(2)).unwrap();
        assert_eq!(alg_compare(&sqrt2(), &alt), Ordering::Equal);
        let fifth = AlgebraicNumber::new(&p(&[-1, 5]), int(0), int(1)).unwrap();
        let r = &isolate_roots(&p(&[-1, 1, 5]))[1];
        assert_eq!(alg_compare(&fifth, r), Ordering::Less);
        assert!((r.to_f64() - 0.358257569495584).abs() < 1e-12);
    }

    #[test]
    fn refinement() {
        let s = AlgebraicNumber::new(&p(&[-2, 0, 1]), int(0), int(2)).unwrap();
        let r = s.refine(&rat(1, 100));
        assert!(&r.hi - &r.lo <= rat(1, 100));
        assert!(r.lo <= rat(141421, 100000) && r.hi >= rat(141422, 100000));
        assert!(r.lo >= rat(140, 100) && r.hi <= rat(143, 100));
        let three = AlgebraicNumber::new(&p(&[-3, 1]), int(0), int(4)).unwrap();
        assert_eq!(three.refine(&rat(1, 1000)).as_rational(), Some(int(3)));
        let narrow = r.refine(&int(1));
        assert_eq!(
            (narrow.lo.clone(), narrow.hi.clone()),
            (r.lo.clone(), r.hi.clone())
        );
    }

    #[test]
    fn mobius_and_forms() {
        let phi = &isolate_roots(&p(&[-1, 1, 1]))[1];
        assert_eq!(phi.closed_form().unwrap(), "(-1+sqrt(5))/2");
        let b = phi.mobius(1, 0, 1, 1).unwrap();
        assert_eq!(b.closed_form().unwrap(), "(3-sqrt(5))/2");
        let s = sqrt2().mobius(1, 0, 1, 1).unwrap();
        assert!((s.to_f64() - 2f64.sqrt() / (1.0 + 2f64.sqrt())).abs() < 1e-14);
        assert_eq!(sqrt2().neg().closed_form().unwrap(), "-sqrt(2)");
        assert_eq!(phi.to_decimal(6), "0.618034");
    }

    #[test]
    fn closed_forms_through_reducible_polynomials() {
        let fifth = &isolate_roots(&p(&[1, -6, 5]))[0];
        assert_eq!(fifth.closed_form().unwrap(), "1/5");
        let quartic = p(&[1, -6, -1, 10, 5]);
        let roots = isolate_roots(&quartic);
        let x = roots
            .iter()
            .find(|r| (r.to_f64() - 0.170820393249937).abs() < 1e-12)
            .unwrap();
        assert_eq!(x.low_degree_factor().unwrap(), p(&[-1, 5, 5]));
        assert_eq!(x.closed_form().unwrap(), "(-5+3*sqrt(5))/10");
        let cubic = &isolate_roots(&p(&[-1, -2, 1, 1]))[1];
        assert!(cubic.closed_form().is_none());
    }

    #[test]
    fn json_round_trip() {
        let s = sqrt2();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"poly":[-2,0,1],"lo":"1","hi":"2"}"#);
        let back: AlgebraicNumber = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(
            serde_json::from_str::<AlgebraicNumber>(r#"{"poly":[-2,0,1],"lo":"-2","hi":"2"}"#)
                .is_err()
        );
    }
}
