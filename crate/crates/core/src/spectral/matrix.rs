use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ring::Ring;
use crate::arith::rational::{format_rational, parse_rational};
use crate::arith::{IntPoly, Rational};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rational>;
pub type IntMatrix = Matrix<BigInt>;
pub type PolyMatrix = Matrix<IntPoly>;

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<T> = rows.into_iter().flatten().collect();
        Self::from_vec(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn principal(&self, idx: &[usize]) -> Self {
        self.submatrix(idx, idx)
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn ones(n: usize) -> Self {
        Matrix::from_fn(n, n, |_, _| T::one())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(o.get(i, j)))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x.mul(k))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j).add(&a.mul(o.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| {
                    if a.is_zero() {
                        acc
                    } else {
                        acc.add(&a.mul(b))
                    }
                })
            })
            .collect()
    }

    pub fn trace(&self) -> T {
        (0..self.rows).fold(T::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Coefficients of `det(xI − M)`, lowest degree first (Berkowitz, division-free).
    pub fn char_poly_coeffs(&self) -> Vec<T> {
        berkowitz(self)
    }

    pub fn det(&self) -> T {
        bareiss_det(self)
    }
}

/// Berkowitz characteristic polynomial over any commutative ring.
pub fn berkowitz<T: Ring>(m: &Matrix<T>) -> Vec<T> {
    let n = m.order();
    if n == 0 {
        return vec![T::one()];
    }
    // vect holds coefficients highest degree first for the trailing principal block.
    let mut vect = vec![T::one(), m.get(n - 1, n - 1).neg()];
    for i in (0..n - 1).rev() {
        let k = n - 1 - i;
        let a = m.get(i, i);
        let r: Vec<T> = (i + 1..n).map(|j| m.get(i, j).clone()).collect();
        let mut c: Vec<T> = (i + 1..n).map(|j| m.get(j, i).clone()).collect();
        let mut items = Vec::with_capacity(k + 2);
        items.push(T::one());
        items.push(a.neg());
        for step in 0..k {
            if step > 0 {
                c = (0..k)
                    .map(|row| {
                        (0..k).fold(T::zero(), |acc, col| {
                            let e = m.get(i + 1 + row, i + 1 + col);
                            if e.is_zero() {
                                acc
                            } else {
                                acc.add(&e.mul(&c[col]))
                            }
                        })
                    })
                    .collect();
            }
            let rc = r.iter().zip(&c).fold(T::zero(), |acc, (x, y)| {
                if x.is_zero() {
                    acc
                } else {
                    acc.add(&x.mul(y))
                }
            });
            items.push(rc.neg());
        }
        let mut next = vec![T::zero(); k + 2];
        for (row, slot) in next.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (col, v) in vect.iter().enumerate() {
                if row >= col && row - col < items.len() {
                    acc = acc.add(&items[row - col].mul(v));
                }
            }
            *slot = acc;
        }
        vect = next;
    }
    vect.reverse();
    vect
}

/// Fraction-free determinant.
pub fn bareiss_det<T: Ring>(m: &Matrix<T>) -> T {
    let n = m.order();
    let mut a = m.to_rows();
    let mut prev = T::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return T::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev);
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    if negate {
        prev.neg()
    } else {
        prev
    }
}

/// Fraction-free row echelon form with a caller-supplied zero test.
/// Returns pivot (row, column) pairs referring to the original matrix.
pub fn bareiss_pivots<T: Ring>(m: &Matrix<T>, is_zero: impl Fn(&T) -> bool) -> Vec<(usize, usize)> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_rows();
    let mut perm: Vec<usize> = (0..rows).collect();
    let mut prev = T::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(p, r);
        perm.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = a[r][c].mul(&a[i][j]).sub(&a[i][c].mul(&a[r][j]));
                a[i][j] = v.div_exact(&prev);
            }
            a[i][c] = T::zero();
        }
        prev = a[r][c].clone();
        pivots.push((perm[r], c));
        r += 1;
    }
    pivots
}

/// `det(L·M)` coefficients: integer matrix `L·M` and the scale `L`.
pub fn clear_denominators(m: &RatMatrix) -> (IntMatrix, BigInt) {
    let l = m
        .data
        .iter()
        .fold(<BigInt as One>::one(), |acc, x| acc.lcm(x.denom()));
    let lr = BigRational::from_integer(l.clone());
    (m.map(|x| (x * &lr).to_integer()), l)
}

pub fn int_to_rat(m: &IntMatrix) -> RatMatrix {
    m.map(|x| BigRational::from_integer(x.clone()))
}

pub fn rat_from_i64(rows: &[Vec<i64>]) -> RatMatrix {
    Matrix::from_rows(
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect(),
    )
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom("ragged matrix"));
        }
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| parse_rational(x).map_err(D::Error::custom))
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Ok(Matrix::from_rows(parsed))
    }
}
