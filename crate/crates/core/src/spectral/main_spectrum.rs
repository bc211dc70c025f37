use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::field::{rational_function_value, trace_over_roots};
use super::matrix::{bareiss_pivots, IntMatrix, Matrix, PolyMatrix, RatMatrix};
use super::signature::char_poly;
use super::SpectralError;
use crate::arith::{alg_sign, isolate_roots, AlgebraicNumber, IntPoly, QPoly, Rational};

fn ones(n: usize) -> Vec<Rational> {
    vec![Rational::one(); n]
}

/// Krylov vectors `j, Mj, …` up to the first dependency, with the monic
/// relation `Σ c_i M^i j = 0`.
fn krylov(m: &RatMatrix) -> (Vec<Vec<Rational>>, QPoly) {
    let n = m.order();
    let mut vecs = vec![ones(n)];
    let mut basis: Vec<(Vec<Rational>, Vec<Rational>, usize)> = Vec::new();
    loop {
        let k = vecs.len() - 1;
        let mut r = vecs[k].clone();
        let mut comb = vec![Rational::zero(); k + 1];
        comb[k] = Rational::one();
        for (rb, cb, piv) in &basis {
            if r[*piv].is_zero() {
                continue;
            }
            let f = &r[*piv] / &rb[*piv];
            for (x, y) in r.iter_mut().zip(rb) {
                *x -= &f * y;
            }
            for (x, y) in comb.iter_mut().zip(cb) {
                *x -= &f * y;
            }
        }
        match r.iter().position(|x| !x.is_zero()) {
            None => return (vecs, QPoly::new(comb)),
            Some(piv) => {
                basis.push((r, comb, piv));
                let next = m.mul_vec(&vecs[k]);
                vecs.push(next);
            }
        }
    }
}

/// Monic polynomial of least degree with `q(M)j = 0`; its roots are the main eigenvalues.
pub fn main_polynomial_q(m: &RatMatrix) -> QPoly {
    krylov(m).1
}

/// Primitive integer form of [`main_polynomial_q`].
pub fn main_polynomial(m: &RatMatrix) -> IntPoly {
    main_polynomial_q(m).to_intpoly()
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    pub eigenvalue: AlgebraicNumber,
    pub multiplicity: usize,
    pub is_main: bool,
    pub beta_squared: AlgebraicNumber,
}

#[derive(Clone, Debug, Serialize)]
pub struct MainSpectrum {
    pub entries: Vec<SpectrumEntry>,
}

impl MainSpectrum {
    pub fn main_entries(&self) -> impl Iterator<Item = &SpectrumEntry> {
        self.entries.iter().filter(|e| e.is_main)
    }
}

/// `β²(x) = jᵀ q_x(M) j / (n m'(x))` as a rational function of the main eigenvalue `x`.
fn beta_squared_function(m: &RatMatrix) -> (QPoly, QPoly, QPoly) {
    let n = m.order();
    let (vecs, mp) = krylov(m);
    let w: Vec<Rational> = vecs.iter().map(|v| v.iter().sum()).collect();
    let d = mp.degree();
    let mut num = QPoly::zero();
    for (k, wk) in w.iter().enumerate().take(d) {
        let h = QPoly::new((k + 1..=d).map(|i| mp.coeff(i)).collect());
        num = num.add(&h.scale(wk));
    }
    let den = mp
        .derivative()
        .scale(&BigRational::from_integer(BigInt::from(n)));
    (num, den, mp)
}

/// Eigenvalues with multiplicities, mainness and squared main angles.
pub fn main_angles(m: &RatMatrix) -> MainSpectrum {
    let (num, den, mp) = beta_squared_function(m);
    let mp_int = mp.to_intpoly();
    let cp = char_poly(m).rational().to_intpoly();
    let mut entries = Vec::new();
    for (factor, mult) in cp.squarefree_decompose() {
        for root in isolate_roots(&factor) {
            let is_main = alg_sign(&mp_int, &root) == Ordering::Equal;
            let beta_squared = if is_main {
                rational_function_value(&root, &num, &den).expect("main polynomial is square-free")
            } else {
                AlgebraicNumber::from_int(0)
            };
            entries.push(SpectrumEntry {
                eigenvalue: root,
                multiplicity: mult,
                is_main,
                beta_squared,
            });
        }
    }
    entries.sort_by(|a, b| a.eigenvalue.cmp(&b.eigenvalue));
    MainSpectrum { entries }
}

/// Exact `Σ β_i²` over main eigenvalues (always 1).
pub fn main_angle_sum(m: &RatMatrix) -> Rational {
    let (num, den, mp) = beta_squared_function(m);
    trace_over_roots(&num, &den, &mp).expect("main polynomial is square-free")
}

/// Exact `Σ β_i²/λ_i` from the main spectrum, independent of any linear solve.
pub fn harmonic_sum_from_angles(m: &RatMatrix) -> Result<Rational, SpectralError> {
    let (num, den, mp) = beta_squared_function(m);
    if mp.coeff(0).is_zero() {
        return Err(SpectralError::JNotInRange);
    }
    Ok(trace_over_roots(&num, &den.mul(&QPoly::x()), &mp).expect("nonzero main eigenvalues"))
}

/// Sign and exact value of `Σ β_i²/λ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicSum {
    pub sign: Ordering,
    pub value: Rational,
}

/// One solution of `Mx = b` over the rationals, free variables set to zero.
pub fn solve_rational(m: &RatMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=cols {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols].clone();
    }
    Some(x)
}

/// `Σ_{main} β_i²/λ_i = jᵀx/n` for any solution of `Mx = j`.
pub fn harmonic_main_sum(m: &RatMatrix) -> Result<HarmonicSum, SpectralError> {
    let n = m.order();
    let x = solve_rational(m, &ones(n)).ok_or(SpectralError::JNotInRange)?;
    let value: Rational = x.iter().sum::<Rational>() / BigRational::from_integer(BigInt::from(n));
    let sign = if value.is_positive() {
        Ordering::Greater
    } else if value.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    };
    Ok(HarmonicSum { sign, value })
}

pub fn harmonic_main_sum_sign(m: &RatMatrix) -> Result<Ordering, SpectralError> {
    harmonic_main_sum(m).map(|h| h.sign)
}

/// `jᵀx = num(b)/den(b)` where `(M0 + b·M1)x = j`, by fraction-free elimination over `ℤ[t]`.
///
/// `jᵀx = n·Σ β_i²/λ_i` over the nonzero main eigenvalues.
pub fn harmonic_fraction_pencil(
    m0: &IntMatrix,
    m1: &IntMatrix,
    b: &AlgebraicNumber,
) -> Result<(IntPoly, IntPoly), SpectralError> {
    let n = m0.order();
    let lin = |x: &BigInt, y: &BigInt| IntPoly::new(vec![x.clone(), y.clone()]);
    let aug = Matrix::from_fn(n, n + 1, |i, j| {
        if j < n {
            lin(m0.get(i, j), m1.get(i, j))
        } else {
            IntPoly::one()
        }
    });
    let pivots = bareiss_pivots(&aug, |p| alg_sign(p, b) == Ordering::Equal);
    if pivots.iter().any(|&(_, c)| c == n) {
        return Err(SpectralError::JNotInRange);
    }
    let rows: Vec<usize> = pivots.iter().map(|&(r, _)| r).collect();
    let cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let sub: PolyMatrix = aug.submatrix(&rows, &cols);
    let det = sub.det();
    let plus = sub.add(&PolyMatrix::ones(rows.len())).det();
    Ok((plus.sub(&det), det))
}

/// Sign of `Σ β_i²/λ_i` for the symmetric matrix `M0 + b·M1` at an algebraic `b`.
pub fn harmonic_sign_pencil(
    m0: &IntMatrix,
    m1: &IntMatrix,
    b: &AlgebraicNumber,
) -> Result<Ordering, SpectralError> {
    let (num, den) = harmonic_fraction_pencil(m0, m1, b)?;
    let s1 = alg_sign(&num, b);
    let s2 = alg_sign(&den, b);
    debug_assert_ne!(s2, Ordering::Equal);
    Ok(if s1 == Ordering::Equal {
        Ordering::Equal
    } else if s1 == s2 {
        Ordering::Greater
    } else {
        Ordering::Less
    })
}
