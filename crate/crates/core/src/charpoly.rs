//! Characteristic polynomials of symmetric matrices with polynomial entries.
//!
//! Coefficient convention used throughout the crate:
//!
//! | quantity                         | meaning                                  |
//! |----------------------------------|------------------------------------------|
//! | `det(zI + M) = sum c_k z^k`      | what [`char_poly`] returns               |
//! | `a_i` ([`CharCoeffs`])           | `c_{m-i}`, coefficient of `z^(m-i)`      |
//! | `det(zI - M)`                    | `z^m - a_1 z^(m-1) + a_2 z^(m-2) - ...`  |
//! | `a_i` in terms of eigenvalues    | `e_i(alpha)`, elementary symmetric       |

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::rational::Rational;
use crate::ring::Ring;
use crate::unipoly::UniPoly;
use crate::vars::VarTable;

/// Symmetric matrix with entries polynomial in a parameter table. Numeric
/// matrices use constant entries (typically over the empty table).
#[derive(Clone, PartialEq, Debug)]
pub struct SymMatrix {
    table: Arc<VarTable>,
    entries: Vec<Vec<MultiPoly>>,
}

impl SymMatrix {
    pub fn new(table: &Arc<VarTable>, entries: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::Validation("matrix must be at least 1x1".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for e in row {
                if e.table() != table {
                    return Err(Error::Structural(format!(
                        "entry in row {} is not over the parameter table",
                        i + 1
                    )));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::Validation(format!(
                        "matrix is not symmetric: entry ({},{}) = {} but ({},{}) = {}",
                        i + 1,
                        j + 1,
                        entries[i][j],
                        j + 1,
                        i + 1,
                        entries[j][i]
                    )));
                }
            }
        }
        Ok(Self {
            table: table.clone(),
            entries,
        })
    }

    pub fn from_rationals(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let t = VarTable::empty();
        let entries = rows
            .into_iter()
            .map(|r| r.into_iter().map(|q| MultiPoly::constant(&t, q)).collect())
            .collect();
        Self::new(&t, entries)
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rationals(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let n = values.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { values[i].clone() } else { Rational::from_integer(0.into()) })
                    .collect()
            })
            .collect();
        Self::from_rationals(rows).expect("diagonal matrices are symmetric")
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<MultiPoly>] {
        &self.entries
    }

    /// Entries as rationals when every entry is constant.
    pub fn to_rationals(&self) -> Option<Vec<Vec<Rational>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|e| e.as_constant()).collect())
            .collect()
    }

    pub fn is_numeric(&self) -> bool {
        self.to_rationals().is_some()
    }

    /// Evaluates every entry at a point given by parameter name.
    pub fn specialize(&self, point: &HashMap<String, Rational>) -> Result<SymMatrix> {
        let values = point_vector(&self.table, point)?;
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.evaluate(&values)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        SymMatrix::from_rationals(rows)
    }
}

/// Orders a name-keyed point along a table; every variable must be bound.
pub fn point_vector(table: &VarTable, point: &HashMap<String, Rational>) -> Result<Vec<Rational>> {
    table
        .names()
        .iter()
        .map(|n| {
            point
                .get(n)
                .cloned()
                .ok_or_else(|| Error::Structural(format!("parameter {n:?} is not bound")))
        })
        .collect()
}

/// `a_1..a_m` in the reverse-indexed convention of the module docs.
#[derive(Clone, PartialEq, Debug)]
pub struct CharCoeffs {
    pub coeffs: Vec<MultiPoly>,
}

impl CharCoeffs {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_i`, one-based.
    pub fn get(&self, i: usize) -> &MultiPoly {
        &self.coeffs[i - 1]
    }

    pub fn to_rationals(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_constant()).collect()
    }
}

/// Division-free characteristic polynomial `det(zI - A)` (Berkowitz), returned
/// as ascending coefficients `c_0..c_n`.
pub fn berkowitz<R: Ring>(a: &[Vec<R>]) -> Vec<R> {
    let n = a.len();
    assert!(n > 0, "berkowitz needs a non-empty matrix");
    let one = a[0][0].one_like();
    let zero = a[0][0].zero_like();
    // v holds the coefficients from the highest power down.
    let mut v = vec![one.clone()];
    for k in 0..n {
        let mut q = Vec::with_capacity(k + 2);
        q.push(one.clone());
        q.push(a[k][k].neg());
        let mut w: Vec<R> = (0..k).map(|i| a[i][k].clone()).collect();
        for j in 0..k {
            let rw = (0..k).fold(zero.clone(), |acc, i| acc.add(&a[k][i].mul(&w[i])));
            q.push(rw.neg());
            if j + 1 < k {
                w = (0..k)
                    .map(|i| (0..k).fold(zero.clone(), |acc, l| acc.add(&a[i][l].mul(&w[l]))))
                    .collect();
            }
        }
        let mut next = Vec::with_capacity(k + 2);
        for i in 0..k + 2 {
            let mut acc = zero.clone();
            for j in 0..=i.min(k) {
                if !q[i - j].is_zero_elem() && !v[j].is_zero_elem() {
                    acc = acc.add(&q[i - j].mul(&v[j]));
                }
            }
            next.push(acc);
        }
        v = next;
    }
    v.reverse();
    v
}

/// Determinant through [`berkowitz`]: `det A = (-1)^n c_0`.
pub fn determinant<R: Ring>(a: &[Vec<R>]) -> R {
    let c0 = berkowitz(a).swap_remove(0);
    if a.len() % 2 == 1 {
        c0.neg()
    } else {
        c0
    }
}

/// `det(zI + M)` with coefficients in the parameter ring.
pub fn char_poly(m: &SymMatrix) -> UniPoly<MultiPoly> {
    let neg: Vec<Vec<MultiPoly>> = m
        .entries
        .iter()
        .map(|r| r.iter().map(|e| -e).collect())
        .collect();
    UniPoly::new(berkowitz(&neg))
}

/// Reads `a_i = coeff of z^(m-i)` off a monic `det(zI + M)`.
pub fn extract_coeffs(f: &UniPoly<MultiPoly>) -> Result<CharCoeffs> {
    let m = f
        .degree()
        .ok_or_else(|| Error::Validation("zero polynomial has no characteristic coefficients".into()))?;
    if !f.is_monic() {
        return Err(Error::Validation(format!(
            "characteristic polynomial must be monic, leading coefficient is {}",
            f.leading().unwrap()
        )));
    }
    Ok(CharCoeffs {
        coeffs: (1..=m).map(|i| f.coeffs()[m - i].clone()).collect(),
    })
}

pub fn char_coeffs(m: &SymMatrix) -> CharCoeffs {
    extract_coeffs(&char_poly(m)).expect("det(zI + M) is monic")
}

/// `det(zI - M)` for a numeric matrix: its roots are the eigenvalues.
pub fn eigen_poly(m: &SymMatrix) -> Result<UniPoly> {
    let rows = m
        .to_rationals()
        .ok_or_else(|| Error::Validation("matrix has symbolic entries".into()))?;
    Ok(UniPoly::new(berkowitz(&rows)))
}
