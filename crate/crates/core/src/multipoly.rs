//! Sparse multivariate polynomials over the rationals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, Rational};
use crate::ring::Ring;
use crate::vars::VarTable;

/// Exponent vector, one entry per variable of the owning table.
pub type Exponents = SmallVec<[u16; 12]>;

/// Canonical sparse polynomial: no zero coefficients are ever stored, and the
/// term map is ordered lexicographically with respect to the variable table, so
/// the last entry is the leading term.
#[derive(Clone)]
pub struct MultiPoly {
    table: Arc<VarTable>,
    terms: BTreeMap<Exponents, Rational>,
}

fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn add_exponents(a: &Exponents, b: &Exponents) -> Exponents {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
        .collect()
}

impl MultiPoly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        Self {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        Self::constant(table, Rational::one())
    }

    pub fn constant(table: &Arc<VarTable>, c: Rational) -> Self {
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.insert(Self::unit_exponents(table.len()), c);
        }
        p
    }

    pub fn var(table: &Arc<VarTable>, name: &str) -> Result<Self> {
        let i = table
            .index_of(name)
            .ok_or_else(|| Error::Structural(format!("unknown variable {name:?}")))?;
        Ok(Self::var_at(table, i))
    }

    pub fn var_at(table: &Arc<VarTable>, i: usize) -> Self {
        assert!(i < table.len(), "variable index out of range");
        let mut e = Self::unit_exponents(table.len());
        e[i] = 1;
        Self::monomial(table, e, Rational::one())
    }

    pub fn monomial(table: &Arc<VarTable>, exps: Exponents, c: Rational) -> Self {
        assert_eq!(exps.len(), table.len(), "exponent vector length");
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(
        table: &Arc<VarTable>,
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(table);
        for (e, c) in terms {
            if e.len() != table.len() {
                return Err(Error::Structural(format!(
                    "exponent vector of length {} for a table of {} variables",
                    e.len(),
                    table.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub(crate) fn unit_exponents(n: usize) -> Exponents {
        smallvec::smallvec![0; n]
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Exponents, Rational> {
        self.terms
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, exps: &[u16]) -> Rational {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Adds `c * monomial(e)` in place.
    pub fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_table(&self, other: &Self) -> Result<()> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(Error::Structural(format!(
                "variable tables differ: {:?} vs {:?}",
                self.table, other.table
            )))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, None);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, Some(&-Rational::one()));
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self += scale * other`, where `scale` defaults to one.
    fn add_assign_unchecked(&mut self, other: &Self, scale: Option<&Rational>) {
        for (e, c) in &other.terms {
            let c = match scale {
                Some(s) => c * s,
                None => c.clone(),
            };
            self.add_term(e.clone(), c);
        }
    }

    /// `self += scale * other`; panics on a table mismatch.
    pub fn add_scaled(&mut self, other: &Self, scale: &Rational) {
        self.check_table(other).expect("add_scaled");
        self.add_assign_unchecked(other, Some(scale));
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.table);
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: HashMap<Exponents, Rational> =
            HashMap::with_capacity(large.len() * small.len().min(8));
        for (es, cs) in &small.terms {
            for (el, cl) in &large.terms {
                let e = add_exponents(es, el);
                let c = cs * cl;
                match acc.get_mut(&e) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Self {
            table: self.table.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(&self.table);
        }
        Self {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(&self.table);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Evaluates at a full point (one value per table variable).
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.table.len() {
            return Err(Error::Structural(format!(
                "point has {} values for {} variables",
                point.len(),
                self.table.len()
            )));
        }
        let mut powers: Vec<Vec<Rational>> = point.iter().map(|v| vec![Rational::one(), v.clone()]).collect();
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= k as usize {
                    let next = pw.last().unwrap() * &point[i];
                    pw.push(next);
                }
                t *= &pw[k as usize];
            }
            total += t;
        }
        Ok(total)
    }

    /// Substitutes the bound variables by polynomials over `target`; every
    /// unbound variable that occurs must also exist in `target` and is mapped
    /// there by name.
    pub fn substitute(
        &self,
        bindings: &HashMap<String, MultiPoly>,
        target: &Arc<VarTable>,
    ) -> Result<Self> {
        for (name, p) in bindings {
            if self.table.index_of(name).is_none() {
                return Err(Error::Structural(format!(
                    "cannot bind {name:?}: not a variable of {:?}",
                    self.table
                )));
            }
            if !same_table(p.table(), target) {
                return Err(Error::Structural(format!(
                    "replacement for {name:?} is not over the target table"
                )));
            }
        }
        let n = self.table.len();
        let mut slot: Vec<Slot> = Vec::with_capacity(n);
        for i in 0..n {
            let name = self.table.name(i);
            if let Some(p) = bindings.get(name) {
                slot.push(Slot::Bound(p));
            } else if let Some(j) = target.index_of(name) {
                slot.push(Slot::Renamed(j));
            } else {
                slot.push(Slot::Missing);
            }
        }
        let mut cache: HashMap<(usize, u16), MultiPoly> = HashMap::new();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut mono = Self::unit_exponents(target.len());
            let mut factors: Vec<(usize, u16)> = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match slot[i] {
                    Slot::Bound(_) => factors.push((i, k)),
                    Slot::Renamed(j) => mono[j] += k,
                    Slot::Missing => {
                        return Err(Error::Structural(format!(
                            "variable {:?} is unbound and absent from the target table",
                            self.table.name(i)
                        )))
                    }
                }
            }
            let mut term = Self::monomial(target, mono, c.clone());
            for (i, k) in factors {
                let pw = cache.entry((i, k)).or_insert_with(|| match slot[i] {
                    Slot::Bound(p) => p.pow(k as u32),
                    _ => unreachable!(),
                });
                term = term.mul_unchecked(pw);
            }
            out.add_assign_unchecked(&term, None);
        }
        Ok(out)
    }

    /// Moves the polynomial into another table, matching variables by name.
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<Self> {
        self.substitute(&HashMap::new(), target)
    }

    /// Coefficients with respect to variable `var`: entry `k` collects the
    /// terms with `var^k`, with that exponent cleared.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(&self.table); if self.is_zero() { 0 } else { deg + 1 }];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    /// `None` if symmetric under every adjacent transposition within `block`,
    /// otherwise the first violating pair of variable indices.
    pub fn symmetry_violation(&self, block: std::ops::Range<usize>) -> Option<(usize, usize)> {
        for i in block.start..block.end.saturating_sub(1) {
            for (e, c) in &self.terms {
                let mut swapped = e.clone();
                swapped.swap(i, i + 1);
                if self.terms.get(&swapped) != Some(c) {
                    return Some((i, i + 1));
                }
            }
        }
        None
    }

    /// Every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

enum Slot<'a> {
    Bound(&'a MultiPoly),
    Renamed(usize),
    Missing,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

pub(crate) fn fmt_monomial(table: &VarTable, e: &[u16]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(table.name(i).to_string()),
            _ => parts.push(format!("{}^{}", table.name(i), k)),
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = fmt_monomial(&self.table, e);
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{}", fmt_rational(&abs))?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{}*{}", fmt_rational(&abs), mono)?,
            }
        }
        Ok(())
    }
}

impl<'a> std::ops::Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl<'a> std::ops::Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl<'a> std::ops::Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

impl Ring for MultiPoly {
    fn zero_like(&self) -> Self {
        Self::zero(&self.table)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.table)
    }
    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        MultiPoly::neg(self)
    }
}
