//! The combinatorial transform `T_m` linking eigenvalue configurations to
//! positive-root counts, its triangular factors and its inverse.
//!
//! `(T_m)_{rs}` counts the `r`-subsets of `{1..m}` with an odd number of
//! elements `<= s`. Three constructions are kept: subset enumeration, the
//! row recurrence, and the binomial closed form (the production path). They
//! are cross-checked in tests.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, fmt_rational, Rational};

/// Largest `m` accepted by [`build_t_enum`] (it walks all `2^m` subsets).
pub const ENUMERATION_CAP: usize = 12;

/// Dense exact rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

pub type TransformMatrix = RatMatrix;

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let c = rows.first().map_or(0, |r| r.len());
        Self::from_fn(n, c, |i, j| Rational::from_integer(rows[i][j].into()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Zero-based access.
    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        }))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Structural(format!(
                "vector of length {} for a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::Structural("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        // Clear denominators so the elimination stays in the integers.
        let scale = crate::rational::lcm_of_denominators(&self.data);
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|q| (q * Rational::from_integer(scale.clone())).to_integer())
                    .collect()
            })
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(Rational::zero());
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let det = sign * &a[n - 1][n - 1];
        let denom = num_traits::pow(scale, n);
        Ok(Rational::new(det, denom))
    }

    /// Exact inverse: fraction-free forward elimination on `[A | I]`, then
    /// back-substitution over the rationals.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Structural("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        for k in 0..n {
            if aug[k][k].is_zero() {
                let p = (k + 1..n)
                    .find(|&i| !aug[i][k].is_zero())
                    .ok_or_else(|| Error::Domain("matrix is singular".into()))?;
                aug.swap(k, p);
            }
            let pivot = aug[k][k].clone();
            for i in k + 1..n {
                if aug[i][k].is_zero() {
                    continue;
                }
                let lead = aug[i][k].clone();
                // row_i <- pivot * row_i - lead * row_k (no division)
                for j in k..2 * n {
                    let v = &pivot * &aug[i][j] - &lead * &aug[k][j];
                    aug[i][j] = v;
                }
            }
        }
        let mut inv = Self::zeros(n, n);
        for col in 0..n {
            for i in (0..n).rev() {
                let mut acc = aug[i][n + col].clone();
                for j in i + 1..n {
                    acc -= &aug[i][j] * inv.get(j, col);
                }
                inv.set(i, col, acc / &aug[i][i]);
            }
        }
        Ok(inv)
    }

    /// Entries as integers, if they all are.
    pub fn to_integers(&self) -> Option<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|q| q.is_integer().then(|| q.to_integer()))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(fmt_rational).collect())
            .collect();
        let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix {}x{}\n{self}", self.rows, self.cols)
    }
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::Domain("transform size must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn int(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// `T_m` by walking every subset of `{1..m}`.
pub fn build_t_enum(m: usize) -> Result<TransformMatrix> {
    check_m(m)?;
    if m > ENUMERATION_CAP {
        return Err(Error::Resource {
            what: "subset enumeration size m".into(),
            value: m,
            cap: ENUMERATION_CAP,
        });
    }
    let mut counts = vec![vec![0i64; m]; m];
    for mask in 1u32..(1 << m) {
        let r = mask.count_ones() as usize;
        for s in 1..=m {
            let below = (mask & ((1u32 << s) - 1)).count_ones();
            if below % 2 == 1 {
                counts[r - 1][s - 1] += 1;
            }
        }
    }
    Ok(RatMatrix::from_ints(&counts))
}

/// `T_m` from the row recurrence
/// `(T_m)_{rs} = (T_{m-1})_{r-1,s} + (T_{m-1})_{r,s}` for interior entries,
/// with explicit first row, last row and last column.
pub fn build_t_recurrence(m: usize) -> Result<TransformMatrix> {
    check_m(m)?;
    let mut prev: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for size in 2..=m {
        let mut t = vec![vec![BigInt::zero(); size]; size];
        for s in 1..=size {
            t[0][s - 1] = BigInt::from(s);
            t[size - 1][s - 1] = BigInt::from(s % 2);
        }
        for r in 2..size {
            t[r - 1][size - 1] = if r % 2 == 1 {
                binomial(size as i64, r as i64)
            } else {
                BigInt::zero()
            };
            for s in 1..size {
                t[r - 1][s - 1] = &prev[r - 2][s - 1] + &prev[r - 1][s - 1];
            }
        }
        prev = t;
    }
    Ok(RatMatrix::from_fn(m, m, |i, j| int(prev[i][j].clone())))
}

/// `T_m` from `sum_t binom(m-t, r-t) (-2)^(t-1) binom(s, t)`.
pub fn build_t_closed(m: usize) -> Result<TransformMatrix> {
    check_m(m)?;
    let mi = m as i64;
    Ok(RatMatrix::from_fn(m, m, |i, j| {
        let (r, s) = (i as i64 + 1, j as i64 + 1);
        let mut acc = BigInt::zero();
        for t in 1..=mi {
            acc += binomial(mi - t, r - t) * num_traits::pow(BigInt::from(-2), (t - 1) as usize) * binomial(s, t);
        }
        int(acc)
    }))
}

/// Lower unitriangular factor, `(L_m)_{rt} = binom(m-t, r-t)`.
pub fn build_l(m: usize) -> Result<TransformMatrix> {
    check_m(m)?;
    let mi = m as i64;
    Ok(RatMatrix::from_fn(m, m, |i, j| {
        int(binomial(mi - (j as i64 + 1), i as i64 - j as i64))
    }))
}

/// Upper triangular factor, `(U_m)_{ts} = (-2)^(t-1) binom(s, t)`.
pub fn build_u(m: usize) -> Result<TransformMatrix> {
    check_m(m)?;
    Ok(RatMatrix::from_fn(m, m, |i, j| {
        let (t, s) = (i as i64 + 1, j as i64 + 1);
        int(num_traits::pow(BigInt::from(-2), i) * binomial(s, t))
    }))
}

/// `C = T_m^{-1}`.
pub fn invert_t(m: usize) -> Result<TransformMatrix> {
    build_t_closed(m)?.inverse()
}

pub fn det_t(m: usize) -> Result<Rational> {
    build_t_closed(m)?.determinant()
}

/// `(-2)^(m(m-1)/2)`.
pub fn expected_det_t(m: usize) -> Rational {
    int(num_traits::pow(BigInt::from(-2), m * (m.saturating_sub(1)) / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn t4() -> RatMatrix {
        RatMatrix::from_ints(&[
            vec![1, 2, 3, 4],
            vec![3, 4, 3, 0],
            vec![3, 2, 1, 4],
            vec![1, 0, 1, 0],
        ])
    }

    fn c4() -> RatMatrix {
        let q = |n, d| ratio(n, d);
        let rows = [
            [q(-1, 4), q(0, 1), q(1, 4), q(1, 2)],
            [q(0, 1), q(1, 4), q(0, 1), q(-3, 4)],
            [q(1, 4), q(0, 1), q(-1, 4), q(1, 2)],
            [q(1, 8), q(-1, 8), q(1, 8), q(-1, 8)],
        ];
        RatMatrix::from_fn(4, 4, |i, j| rows[i][j].clone())
    }

    #[test]
    fn t_examples() {
        assert_eq!(build_t_enum(4).unwrap(), t4());
        assert_eq!(build_t_closed(4).unwrap(), t4());
        assert_eq!(build_t_enum(1).unwrap(), RatMatrix::from_ints(&[vec![1]]));
        assert_eq!(build_t_enum(2).unwrap(), RatMatrix::from_ints(&[vec![1, 2], vec![1, 0]]));
        assert_eq!(build_t_closed(2).unwrap().get(1, 1), &rat(0));
        assert_eq!(build_t_closed(6).unwrap(), build_t_enum(6).unwrap());
    }

    #[test]
    fn enumeration_cap() {
        assert!(build_t_enum(ENUMERATION_CAP).is_ok());
        assert!(matches!(
            build_t_enum(ENUMERATION_CAP + 1),
            Err(Error::Resource { value: 13, cap: 12, .. })
        ));
        assert!(build_t_closed(0).is_err());
    }

    #[test]
    fn lu_examples() {
        let l = build_l(2).unwrap();
        let u = build_u(2).unwrap();
        assert_eq!(l, RatMatrix::from_ints(&[vec![1, 0], vec![1, 1]]));
        assert_eq!(u, RatMatrix::from_ints(&[vec![1, 2], vec![0, -2]]));
        assert_eq!(l.mul(&u).unwrap(), RatMatrix::from_ints(&[vec![1, 2], vec![1, 0]]));
        let u4 = build_u(4).unwrap();
        let diag = (0..4).fold(rat(1), |acc, i| acc * u4.get(i, i));
        assert_eq!(diag, rat(64));
        for m in 1..=8 {
            let l = build_l(m).unwrap();
            assert!((0..m).all(|i| l.get(i, i) == &rat(1)));
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(invert_t(4).unwrap(), c4());
        assert_eq!(invert_t(1).unwrap(), RatMatrix::from_ints(&[vec![1]]));
        // 2x2 inverse formula: [a b; c d]^-1 = [d -b; -c a] / (ad - bc)
        let t2 = build_t_enum(2).unwrap();
        let det = t2.get(0, 0) * t2.get(1, 1) - t2.get(0, 1) * t2.get(1, 0);
        let formula = RatMatrix::from_fn(2, 2, |i, j| {
            let v = match (i, j) {
                (0, 0) => t2.get(1, 1).clone(),
                (0, 1) => -t2.get(0, 1),
                (1, 0) => -t2.get(1, 0),
                _ => t2.get(0, 0).clone(),
            };
            v / &det
        });
        assert_eq!(formula, RatMatrix::from_fn(2, 2, |i, j| [[rat(0), rat(1)], [ratio(1, 2), ratio(-1, 2)]][i][j].clone()));
        assert_eq!(invert_t(2).unwrap(), formula);
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det_t(2).unwrap(), rat(-2));
        assert_eq!(det_t(1).unwrap(), rat(1));
        assert_eq!(det_t(4).unwrap(), rat(64));
        assert_eq!(det_t(6).unwrap(), rat(-32768));
        let singular = RatMatrix::from_ints(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(singular.determinant().unwrap(), rat(0));
        assert!(singular.inverse().is_err());
        let fractional = RatMatrix::from_fn(2, 2, |i, j| ratio((i + 2 * j + 1) as i64, 3));
        // [1/3 1; 2/3 4/3]: det = 4/9 - 2/3 = -2/9
        assert_eq!(fractional.determinant().unwrap(), ratio(-2, 9));
    }

    #[test]
    fn constructions_agree_up_to_eight() {
        for m in 1..=8 {
            let e = build_t_enum(m).unwrap();
            assert_eq!(build_t_closed(m).unwrap(), e, "closed form, m={m}");
            assert_eq!(build_t_recurrence(m).unwrap(), e, "recurrence, m={m}");
            assert_eq!(build_l(m).unwrap().mul(&build_u(m).unwrap()).unwrap(), e, "L*U, m={m}");
            assert_eq!(det_t(m).unwrap(), expected_det_t(m), "det, m={m}");
            assert_eq!(invert_t(m).unwrap().mul(&e).unwrap(), RatMatrix::identity(m), "inverse, m={m}");
        }
    }

    #[test]
    fn recurrence_and_boundaries() {
        for m in 2..=8 {
            let t = build_t_enum(m).unwrap();
            let prev = build_t_enum(m - 1).unwrap();
            for r in 2..m {
                for s in 1..m {
                    assert_eq!(t.get(r - 1, s - 1), &(prev.get(r - 2, s - 1) + prev.get(r - 1, s - 1)));
                }
                let expected = if r % 2 == 1 { int(binomial(m as i64, r as i64)) } else { rat(0) };
                assert_eq!(t.get(r - 1, m - 1), &expected);
            }
            for s in 1..=m {
                assert_eq!(t.get(0, s - 1), &rat(s as i64));
                assert_eq!(t.get(m - 1, s - 1), &rat((s % 2) as i64));
            }
        }
    }

    #[test]
    fn entries_are_nonnegative_integers() {
        for m in 1..=8 {
            let ints = build_t_closed(m).unwrap().to_integers().unwrap();
            assert!(ints.iter().flatten().all(|v| v >= &BigInt::zero()));
        }
    }
}
