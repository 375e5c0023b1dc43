//! Sign variations, Sturm chains and exact real-root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, lcm_of_denominators, simplest_between, Rational};
use crate::unipoly::UniPoly;

/// Sign changes between consecutive nonzero entries.
pub fn sign_variations(coeffs: &[Rational]) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if last.is_some_and(|l| l != neg) {
            count += 1;
        }
        last = Some(neg);
    }
    count
}

/// Endpoint of a Sturm query.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    NegInf,
    At(Rational),
    PosInf,
}

impl From<Rational> for Bound {
    fn from(q: Rational) -> Self {
        Bound::At(q)
    }
}

pub fn sturm_chain(f: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![f.clone()];
    let mut next = f.derivative();
    while !next.is_zero() {
        let (_, r) = chain
            .last()
            .unwrap()
            .div_rem(&next)
            .expect("divisor is nonzero");
        chain.push(next);
        next = r.neg();
    }
    chain
}

fn sign_at_bound(p: &UniPoly, at: &Bound) -> i8 {
    match at {
        Bound::At(q) => p.sign_at(q),
        Bound::PosInf | Bound::NegInf => {
            let lead = p.leading().map_or(0, |c| if c.is_negative() { -1 } else { 1 });
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if matches!(at, Bound::NegInf) && odd {
                -lead
            } else {
                lead
            }
        }
    }
}

fn chain_variations(chain: &[UniPoly], at: &Bound) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in chain {
        let s = sign_at_bound(p, at);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn count_with_chain(chain: &[UniPoly], lo: &Bound, hi: &Bound) -> usize {
    chain_variations(chain, lo).saturating_sub(chain_variations(chain, hi))
}

/// Distinct real roots of `f` in `(lo, hi]`.
pub fn sturm_count(f: &UniPoly, lo: &Bound, hi: &Bound) -> Result<usize> {
    let sqf = f.squarefree_part()?;
    Ok(count_with_chain(&sturm_chain(&sqf), lo, hi))
}

/// Location of one distinct real root.
#[derive(Clone, Debug, PartialEq)]
pub enum RootLoc {
    Exact(Rational),
    /// Exactly one root, strictly inside; neither endpoint is a root.
    Interval(Rational, Rational),
}

impl RootLoc {
    pub fn lo(&self) -> &Rational {
        match self {
            RootLoc::Exact(q) => q,
            RootLoc::Interval(lo, _) => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            RootLoc::Exact(q) => q,
            RootLoc::Interval(_, hi) => hi,
        }
    }
}

impl fmt::Display for RootLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLoc::Exact(q) => write!(f, "{}", fmt_rational(q)),
            RootLoc::Interval(lo, hi) => write!(f, "({}, {})", fmt_rational(lo), fmt_rational(hi)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootEntry {
    pub loc: RootLoc,
    pub multiplicity: usize,
}

/// Real roots in ascending order, with the squarefree part kept for
/// further refinement.
#[derive(Clone, Debug)]
pub struct IsolatedRoots {
    sqf: UniPoly,
    pub roots: Vec<RootEntry>,
}

impl IsolatedRoots {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Halves the isolating interval of root `i` (no-op on exact roots).
    pub fn refine(&mut self, i: usize) {
        if let RootLoc::Interval(lo, hi) = &self.roots[i].loc {
            self.roots[i].loc = bisect_once(&self.sqf, lo.clone(), hi.clone());
        }
    }
}

/// One bisection step on an interval holding exactly one simple root of a
/// squarefree polynomial. Decides by the sign at `hi`, which is never a root.
fn bisect_once(sqf: &UniPoly, lo: Rational, hi: Rational) -> RootLoc {
    let mid = (&lo + &hi) / Rational::from_integer(2.into());
    let sm = sqf.sign_at(&mid);
    if sm == 0 {
        RootLoc::Exact(mid)
    } else if sm == sqf.sign_at(&hi) {
        RootLoc::Interval(lo, mid)
    } else {
        RootLoc::Interval(mid, hi)
    }
}

fn cauchy_bound(f: &UniPoly) -> Rational {
    let c = f.coeffs();
    let lead = c.last().unwrap().abs();
    let max = c[..c.len() - 1]
        .iter()
        .map(|v| v.abs() / &lead)
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    max + Rational::from_integer(1.into())
}

/// Isolates every real root of `f` with its multiplicity.
pub fn isolate_real_roots(f: &UniPoly) -> Result<IsolatedRoots> {
    if f.is_zero() {
        return Err(Error::Domain("cannot isolate the roots of the zero polynomial".into()));
    }
    let sqf = f.squarefree_part()?;
    let parts = f.squarefree_decomposition()?;
    let chain = sturm_chain(&sqf);
    let bound = cauchy_bound(&sqf);
    // Any two distinct rational roots of the integer form of sqf are at least
    // 1/lc^2 apart; below that width the simplest rational is the only candidate.
    let lc = {
        let den = lcm_of_denominators(sqf.coeffs());
        let ints = sqf.scale(&Rational::from_integer(den));
        ints.primitive().leading().unwrap().abs()
    };
    let threshold = Rational::from_integer(1.into()) / (&lc * &lc);

    let mut found: Vec<RootLoc> = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_with_chain(&chain, &Bound::At(lo.clone()), &Bound::At(hi.clone()));
        if n == 0 {
            continue;
        }
        if n == 1 {
            found.push(if sqf.sign_at(&hi) == 0 {
                RootLoc::Exact(hi)
            } else {
                pin_down(&sqf, lo, hi, &threshold)
            });
            continue;
        }
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    found.sort_by(|a, b| a.lo().cmp(b.lo()));

    let mut roots = Vec::with_capacity(found.len());
    for loc in found {
        let multiplicity = match &loc {
            RootLoc::Exact(q) => parts.iter().position(|s| s.sign_at(q) == 0),
            RootLoc::Interval(lo, hi) => parts.iter().position(|s| {
                s.degree().unwrap_or(0) > 0
                    && count_with_chain(&sturm_chain(s), &Bound::At(lo.clone()), &Bound::At(hi.clone())) > 0
            }),
        }
        .ok_or_else(|| Error::Assertion(format!("no squarefree factor vanishes at {loc}")))?
            + 1;
        roots.push(RootEntry { loc, multiplicity });
    }
    Ok(IsolatedRoots { sqf, roots })
}

/// Refines a one-root interval `(lo, hi)` (with `hi` not a root) until the
/// root is found exactly or shown to be irrational.
fn pin_down(sqf: &UniPoly, mut lo: Rational, mut hi: Rational, threshold: &Rational) -> RootLoc {
    loop {
        if &hi - &lo < *threshold {
            let s = simplest_between(&lo, &hi);
            if s > lo && s < hi && sqf.sign_at(&s) == 0 {
                return RootLoc::Exact(s);
            }
            // sign at lo may be zero when lo is a neighbouring root; step off it
            if sqf.sign_at(&lo) == 0 {
                match bisect_once(sqf, lo, hi) {
                    RootLoc::Interval(a, b) => {
                        lo = a;
                        hi = b;
                        continue;
                    }
                    exact => return exact,
                }
            }
            return RootLoc::Interval(lo, hi);
        }
        match bisect_once(sqf, lo, hi) {
            RootLoc::Interval(a, b) => {
                lo = a;
                hi = b;
            }
            exact => return exact,
        }
    }
}

/// Orders root `i` of `a` against root `j` of `b`, refining as needed.
/// `Equal` only when both are exact and coincide.
pub fn compare_roots(a: &mut IsolatedRoots, i: usize, b: &mut IsolatedRoots, j: usize) -> Ordering {
    loop {
        let (la, lb) = (&a.roots[i].loc, &b.roots[j].loc);
        if let (RootLoc::Exact(p), RootLoc::Exact(q)) = (la, lb) {
            return p.cmp(q);
        }
        // not both exact, so a shared endpoint is open on at least one side
        if la.hi() <= lb.lo() {
            return Ordering::Less;
        }
        if lb.hi() <= la.lo() {
            return Ordering::Greater;
        }
        let wa = la.hi() - la.lo();
        let wb = lb.hi() - lb.lo();
        if wa >= wb {
            a.refine(i);
        } else {
            b.refine(j);
        }
    }
}

/// Common factor of `f` and `g`; constant iff the pair is generic.
pub fn common_factor(f: &UniPoly, g: &UniPoly) -> Result<UniPoly> {
    f.gcd(g)
}

/// True iff `f` and `g` share no root.
pub fn genericity_check(f: &UniPoly, g: &UniPoly) -> Result<bool> {
    Ok(common_factor(f, g)?.degree() == Some(0))
}
