//! The auxiliary polynomials `h_r` and their rewriting in elementary
//! symmetric polynomials.
//!
//! Symmetric polynomials are reduced in *orbit form*: only the terms whose
//! block exponents are non-increasing are kept, each standing for the whole
//! monomial-symmetric orbit. Leading orbits are eliminated by subtracting
//! products of elementary symmetric polynomials, also in orbit form and
//! memoized per block size.
//!
//! Three routes to `D_r`:
//!
//! * [`ftsp_reduce`] on the fully expanded [`build_h`] (classical, small sizes);
//! * [`staged_u`], which reduces `P_r(t) = prod_I (x + prod_{i in I}(alpha_i - t))`
//!   in the alpha block, then assembles the beta block from monomial symmetric
//!   functions (production, cached);
//! * [`d_numeric`], for numeric `a`, `b`: Newton's identities in `Q[t]/(g)`
//!   followed by a norm computation; no symbolic expansion at all.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use log::{debug, trace};
use num_traits::{One, Zero};
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::charpoly::{determinant, CharCoeffs};
use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::rational::{binomial, Rational};
use crate::unipoly::UniPoly;
use crate::vars::VarTable;

/// Default cap on `binom(m, r) * n`, the x-degree of `h_r`.
pub const DEGREE_CAP: usize = 64;

/// Cap on `r * binom(m, r)`, the t-degree of the symbolic alpha stage; past
/// it the expansion of `P_r` no longer fits in memory (m = 6, r = 3 is 60).
pub const ALPHA_STAGE_CAP: usize = 30;

pub type Partition = SmallVec<[u16; 8]>;

type Orbit = BTreeMap<Partition, Rational>;

/// Variables `alpha1..alpham`, `beta1..betan`, `x`.
pub fn h_table(m: usize, n: usize) -> Arc<VarTable> {
    VarTable::new(vec![
        ("alpha", VarTable::indexed("alpha", m)),
        ("beta", VarTable::indexed("beta", n)),
        ("x", vec!["x".to_string()]),
    ])
    .expect("distinct names")
}

/// Variables `a1..am`, `b1..bn`, `x`: the characteristic coefficients stand in
/// for the elementary symmetric polynomials of the eigenvalues.
pub fn e_table(m: usize, n: usize) -> Arc<VarTable> {
    VarTable::new(vec![
        ("a", VarTable::indexed("a", m)),
        ("b", VarTable::indexed("b", n)),
        ("x", vec!["x".to_string()]),
    ])
    .expect("distinct names")
}

#[derive(Clone, Debug, PartialEq)]
pub struct HPoly {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub poly: MultiPoly,
}

/// `D_r(a, b, x)` as a polynomial over [`e_table`].
#[derive(Clone, Debug, PartialEq)]
pub struct EPoly {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub poly: MultiPoly,
}

impl EPoly {
    /// Coefficients in `x`, lowest first, as polynomials in `a, b`.
    pub fn x_coefficients(&self) -> Vec<MultiPoly> {
        self.poly.coefficients_in(self.m + self.n)
    }

    /// Evaluates at numeric `a`, `b`, leaving `x` free.
    pub fn at(&self, a: &[Rational], b: &[Rational]) -> Result<UniPoly> {
        if a.len() != self.m || b.len() != self.n {
            return Err(Error::Structural(format!(
                "D_{} expects {} + {} coefficients, got {} + {}",
                self.r,
                self.m,
                self.n,
                a.len(),
                b.len()
            )));
        }
        let vals: Vec<Rational> = a.iter().chain(b).cloned().collect();
        Ok(eval_leaving_last(&self.poly, &vals))
    }
}

/// `d_r`: `D_r` with the characteristic coefficients substituted.
#[derive(Clone, Debug, PartialEq)]
pub struct DPoly {
    pub r: usize,
    pub poly: UniPoly<MultiPoly>,
}

/// Evaluates every variable but the last, which becomes the univariate one.
fn eval_leaving_last(p: &MultiPoly, vals: &[Rational]) -> UniPoly {
    let last = p.table().len() - 1;
    debug_assert_eq!(vals.len(), last);
    let mut powers: HashMap<(usize, u16), Rational> = HashMap::new();
    let mut coeffs: Vec<Rational> = Vec::new();
    for (e, c) in p.terms() {
        let mut v = c.clone();
        for (i, &k) in e[..last].iter().enumerate() {
            if k > 0 {
                let pw = powers
                    .entry((i, k))
                    .or_insert_with(|| num_traits::pow(vals[i].clone(), k as usize));
                v *= &*pw;
            }
        }
        let d = e[last] as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, Rational::zero());
        }
        coeffs[d] += v;
    }
    UniPoly::new(coeffs)
}

pub fn h_degree(m: usize, n: usize, r: usize) -> usize {
    let b = binomial(m as i64, r as i64);
    usize::try_from(b).unwrap_or(usize::MAX).saturating_mul(n)
}

fn check_level(m: usize, n: usize, r: usize, cap: usize) -> Result<usize> {
    if m == 0 || n == 0 {
        return Err(Error::Domain("matrix sizes must be positive".into()));
    }
    if r == 0 || r > m {
        return Err(Error::Domain(format!("level r = {r} outside 1..={m}")));
    }
    let d = h_degree(m, n, r);
    if d > cap {
        return Err(Error::Resource {
            what: format!("degree binom({m},{r})*{n} of h_{r}"),
            value: d,
            cap,
        });
    }
    Ok(d)
}

pub(crate) fn combinations(m: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn go(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, r, cur, out);
            cur.pop();
        }
    }
    go(0, m, r, &mut cur, &mut out);
    out
}

pub fn build_h(m: usize, n: usize, r: usize) -> Result<HPoly> {
    build_h_capped(m, n, r, DEGREE_CAP)
}

/// Fully expanded `h_r = prod_{|I| = r, j} (x + prod_{i in I}(alpha_i - beta_j))`.
pub fn build_h_capped(m: usize, n: usize, r: usize, cap: usize) -> Result<HPoly> {
    check_level(m, n, r, cap)?;
    let t = h_table(m, n);
    let x = MultiPoly::var_at(&t, m + n);
    let mut acc = MultiPoly::one(&t);
    for j in 0..n {
        let beta = MultiPoly::var_at(&t, m + j);
        for subset in combinations(m, r) {
            let prod = subset.iter().fold(MultiPoly::one(&t), |p, &i| {
                &p * &(&MultiPoly::var_at(&t, i) - &beta)
            });
            acc = &acc * &(&x + &prod);
        }
    }
    Ok(HPoly { m, n, r, poly: acc })
}

// ---------------------------------------------------------------------------
// Orbit arithmetic

fn is_partition(p: &[u16]) -> bool {
    p.windows(2).all(|w| w[0] >= w[1])
}

fn sorted_desc(p: &[u16]) -> Partition {
    let mut v: Partition = p.iter().copied().collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn masks_by_size(k: usize) -> Vec<Vec<u32>> {
    let mut by = vec![Vec::new(); k + 1];
    for mask in 0u32..(1 << k) {
        by[mask.count_ones() as usize].push(mask);
    }
    by
}

/// `A * e_j` in orbit form over a block of `k` variables.
fn orbit_mul_e(a: &Orbit, k: usize, j: usize) -> Orbit {
    let masks = &masks_by_size(k)[j];
    let mut candidates: BTreeSet<Partition> = BTreeSet::new();
    for kappa in a.keys() {
        for &mask in masks {
            let nu: Partition = (0..k).map(|i| kappa[i] + ((mask >> i) & 1) as u16).collect();
            if is_partition(&nu) {
                candidates.insert(nu);
            }
        }
    }
    let mut out = Orbit::new();
    for nu in candidates {
        let mut c = Rational::zero();
        for &mask in masks {
            if (0..k).any(|i| (mask >> i) & 1 == 1 && nu[i] == 0) {
                continue;
            }
            let below: Partition = (0..k).map(|i| nu[i] - ((mask >> i) & 1) as u16).collect();
            if let Some(v) = a.get(&sorted_desc(&below)) {
                c += v;
            }
        }
        if !c.is_zero() {
            out.insert(nu, c);
        }
    }
    out
}

type EProductCache = Mutex<HashMap<(usize, Partition), Arc<Orbit>>>;

fn e_product_cache() -> &'static EProductCache {
    static CACHE: OnceLock<EProductCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `e_1^mu_1 ... e_k^mu_k` over `k` variables, in orbit form.
fn e_product(k: usize, mu: &Partition) -> Arc<Orbit> {
    if let Some(hit) = e_product_cache().lock().unwrap().get(&(k, mu.clone())) {
        return hit.clone();
    }
    let result = match mu.iter().rposition(|&v| v > 0) {
        None => {
            let mut o = Orbit::new();
            o.insert(smallvec::smallvec![0; k], Rational::one());
            Arc::new(o)
        }
        Some(j) => {
            let mut prev = mu.clone();
            prev[j] -= 1;
            Arc::new(orbit_mul_e(&e_product(k, &prev), k, j + 1))
        }
    };
    e_product_cache()
        .lock()
        .unwrap()
        .insert((k, mu.clone()), result.clone());
    result
}

/// Observer hook: sees the leading orbit and the full remainder before each
/// elimination step.
pub type StepObserver<'a> = &'a mut dyn FnMut(&Partition, &BTreeMap<Partition, MultiPoly>);

/// Core elimination loop. `map` sends block partitions to coefficients over
/// `out` (whose block positions are zero); the result carries the e-exponents
/// in the block positions of `out`.
fn reduce_orbits(
    mut map: BTreeMap<Partition, MultiPoly>,
    block: Range<usize>,
    out: &Arc<VarTable>,
    mut observer: Option<StepObserver<'_>>,
) -> Result<MultiPoly> {
    let k = block.len();
    let mut result = MultiPoly::zero(out);
    let mut previous: Option<Partition> = None;
    while let Some((lambda, coeff)) = map.pop_last() {
        if let Some(obs) = observer.as_mut() {
            let mut snapshot = map.clone();
            snapshot.insert(lambda.clone(), coeff.clone());
            obs(&lambda, &snapshot);
        }
        if let Some(prev) = &previous {
            if lambda >= *prev {
                return Err(Error::Assertion(format!(
                    "leading orbit did not decrease: {prev:?} -> {lambda:?}"
                )));
            }
        }
        trace!("eliminate leading orbit {lambda:?}");
        let mu: Partition = (0..k)
            .map(|i| lambda[i] - if i + 1 < k { lambda[i + 1] } else { 0 })
            .collect();
        for (e, c) in coeff.terms() {
            let mut e2 = e.clone();
            for (i, &v) in mu.iter().enumerate() {
                e2[block.start + i] = v;
            }
            result.add_term(e2, c.clone());
        }
        let ep = e_product(k, &mu);
        for (nu, c) in ep.iter() {
            if *nu == lambda {
                if !c.is_one() {
                    return Err(Error::Assertion(format!(
                        "e-product leading coefficient {c} at {nu:?}"
                    )));
                }
                continue;
            }
            let slot = map.entry(nu.clone()).or_insert_with(|| MultiPoly::zero(out));
            slot.add_scaled(&coeff, &-c);
            if slot.is_zero() {
                map.remove(nu);
            }
        }
        previous = Some(lambda);
    }
    Ok(result)
}

fn describe_transposition(t: &VarTable, (i, j): (usize, usize)) -> String {
    format!("{} <-> {}", t.name(i), t.name(j))
}

/// Rewrites a polynomial symmetric in the variables of `block` as a
/// polynomial in their elementary symmetric polynomials. `out` must have the
/// same length as the input table; its variables at the block positions
/// receive `e_1..e_k`, all others are carried through unchanged.
pub fn reduce_symmetric(p: &MultiPoly, block: Range<usize>, out: &Arc<VarTable>) -> Result<MultiPoly> {
    reduce_symmetric_observed(p, block, out, None)
}

pub fn reduce_symmetric_observed(
    p: &MultiPoly,
    block: Range<usize>,
    out: &Arc<VarTable>,
    observer: Option<StepObserver<'_>>,
) -> Result<MultiPoly> {
    if out.len() != p.table().len() || block.end > out.len() {
        return Err(Error::Structural(format!(
            "reduction target {out:?} does not match source {:?}",
            p.table()
        )));
    }
    if let Some(v) = p.symmetry_violation(block.clone()) {
        return Err(Error::Domain(format!(
            "polynomial is not symmetric under {}",
            describe_transposition(p.table(), v)
        )));
    }
    let mut map: BTreeMap<Partition, MultiPoly> = BTreeMap::new();
    for (e, c) in p.terms() {
        let part = &e[block.clone()];
        if !is_partition(part) {
            continue;
        }
        let mut rest = e.clone();
        for v in &mut rest[block.clone()] {
            *v = 0;
        }
        map.entry(part.iter().copied().collect())
            .or_insert_with(|| MultiPoly::zero(out))
            .add_term(rest, c.clone());
    }
    reduce_orbits(map, block, out, observer)
}

/// Two-stage reduction of `h_r`: alpha block first, then beta, with `x`
/// carried as a coefficient variable.
pub fn ftsp_reduce(h: &HPoly) -> Result<EPoly> {
    let (m, n) = (h.m, h.n);
    let mid = VarTable::new(vec![
        ("a", VarTable::indexed("a", m)),
        ("beta", VarTable::indexed("beta", n)),
        ("x", vec!["x".to_string()]),
    ])?;
    let stage1 = reduce_symmetric(&h.poly, 0..m, &mid)?;
    let poly = reduce_symmetric(&stage1, m..m + n, &e_table(m, n))?;
    if !poly.has_integer_coefficients() {
        return Err(Error::Assertion(format!(
            "D_{} has non-integer coefficients",
            h.r
        )));
    }
    Ok(EPoly { m, n, r: h.r, poly })
}

/// Polynomial `e_k` in the variables of `block` of `t`.
pub fn elementary(t: &Arc<VarTable>, block: Range<usize>, k: usize) -> MultiPoly {
    let vars: Vec<usize> = block.collect();
    let mut p = MultiPoly::zero(t);
    for subset in combinations(vars.len(), k) {
        let mut e = MultiPoly::unit_exponents(t.len());
        for i in subset {
            e[vars[i]] = 1;
        }
        p.add_term(e, Rational::one());
    }
    p
}

/// Substitutes `a_k -> e_k(alpha)`, `b_k -> e_k(beta)`, landing in [`h_table`].
pub fn back_substitute(u: &EPoly) -> Result<MultiPoly> {
    let t = h_table(u.m, u.n);
    let mut bind = HashMap::new();
    for k in 1..=u.m {
        bind.insert(format!("a{k}"), elementary(&t, 0..u.m, k));
    }
    for k in 1..=u.n {
        bind.insert(format!("b{k}"), elementary(&t, u.m..u.m + u.n, k));
    }
    u.poly.substitute(&bind, &t)
}

// ---------------------------------------------------------------------------
// Staged production path

type AlphaCache = Mutex<HashMap<(usize, usize), Arc<Vec<MultiPoly>>>>;

fn alpha_cache() -> &'static AlphaCache {
    static CACHE: OnceLock<AlphaCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn alpha_stage_table(m: usize) -> Arc<VarTable> {
    VarTable::new(vec![
        ("a", VarTable::indexed("a", m)),
        ("x", vec!["x".to_string()]),
    ])
    .expect("distinct names")
}

/// `Q_r(a, t, x) = sum_k q_k(a, x) t^k` with
/// `Q_r(e(alpha), t, x) = prod_{|I| = r} (x + prod_{i in I}(alpha_i - t))`;
/// returns `q_0, q_1, ...` over `a1..am, x`.
pub fn alpha_stage(m: usize, r: usize) -> Result<Arc<Vec<MultiPoly>>> {
    if r == 0 || r > m {
        return Err(Error::Domain(format!("level r = {r} outside 1..={m}")));
    }
    let t_degree = h_degree(m, r, r);
    if t_degree > ALPHA_STAGE_CAP {
        return Err(Error::Resource {
            what: format!("t-degree {r}*binom({m},{r}) of the symbolic stage"),
            value: t_degree,
            cap: ALPHA_STAGE_CAP,
        });
    }
    if let Some(hit) = alpha_cache().lock().unwrap().get(&(m, r)) {
        return Ok(hit.clone());
    }
    let src = VarTable::new(vec![
        ("alpha", VarTable::indexed("alpha", m)),
        ("t", vec!["t".to_string()]),
        ("x", vec!["x".to_string()]),
    ])?;
    let dst = VarTable::new(vec![
        ("a", VarTable::indexed("a", m)),
        ("t", vec!["t".to_string()]),
        ("x", vec!["x".to_string()]),
    ])?;
    let tv = MultiPoly::var_at(&src, m);
    let x = MultiPoly::var_at(&src, m + 1);
    let mut p = MultiPoly::one(&src);
    for subset in combinations(m, r) {
        let prod = subset
            .iter()
            .fold(MultiPoly::one(&src), |acc, &i| &acc * &(&MultiPoly::var_at(&src, i) - &tv));
        p = &p * &(&x + &prod);
    }
    let q = reduce_symmetric(&p, 0..m, &dst)?;
    let target = alpha_stage_table(m);
    let coeffs = q
        .coefficients_in(m)
        .iter()
        .map(|c| c.embed(&target))
        .collect::<Result<Vec<_>>>()?;
    let coeffs = Arc::new(coeffs);
    alpha_cache().lock().unwrap().insert((m, r), coeffs.clone());
    Ok(coeffs)
}

/// Monomial symmetric `m_lambda(beta)` over `n` variables in `b1..bn`,
/// placed in `out` at `block`.
fn monomial_symmetric(lambda: &Partition, block: Range<usize>, out: &Arc<VarTable>) -> Result<MultiPoly> {
    let mut map = BTreeMap::new();
    map.insert(lambda.clone(), MultiPoly::one(out));
    reduce_orbits(map, block, out, None)
}

type UCache = Mutex<HashMap<(usize, usize, usize), Arc<EPoly>>>;

fn u_cache() -> &'static UCache {
    static CACHE: OnceLock<UCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `D_r` through the staged route; equal to `ftsp_reduce(build_h(m, n, r))`
/// by uniqueness of the elementary-symmetric representation.
pub fn staged_u(m: usize, n: usize, r: usize, cap: usize) -> Result<Arc<EPoly>> {
    check_level(m, n, r, cap)?;
    if let Some(hit) = u_cache().lock().unwrap().get(&(m, n, r)) {
        return Ok(hit.clone());
    }
    let t = e_table(m, n);
    let q: Vec<MultiPoly> = alpha_stage(m, r)?
        .iter()
        .map(|c| c.embed(&t))
        .collect::<Result<_>>()?;
    let top = q.len().saturating_sub(1) as u16;
    let mut sym_cache: HashMap<Partition, MultiPoly> = HashMap::new();
    let mut acc = MultiPoly::zero(&t);
    // Non-increasing exponent tuples, carrying the product of the q's so far.
    let mut stack: Vec<(Partition, MultiPoly)> = vec![(Partition::new(), MultiPoly::one(&t))];
    while let Some((lambda, prod)) = stack.pop() {
        if lambda.len() == n {
            let ms = match sym_cache.get(&lambda) {
                Some(p) => p.clone(),
                None => {
                    let p = monomial_symmetric(&lambda, m..m + n, &t)?;
                    sym_cache.insert(lambda.clone(), p.clone());
                    p
                }
            };
            acc = &acc + &(&prod * &ms);
            continue;
        }
        let bound = lambda.last().copied().unwrap_or(top);
        for k in 0..=bound {
            if q[k as usize].is_zero() {
                continue;
            }
            let mut next = lambda.clone();
            next.push(k);
            stack.push((next, &prod * &q[k as usize]));
        }
    }
    if !acc.has_integer_coefficients() {
        return Err(Error::Assertion(format!("D_{r} has non-integer coefficients")));
    }
    debug!("D_{r} for m={m}, n={n}: {} terms", acc.len());
    let u = Arc::new(EPoly { m, n, r, poly: acc });
    u_cache().lock().unwrap().insert((m, n, r), u.clone());
    Ok(u)
}

/// All `D_1..D_m`, built in parallel.
pub fn all_u(m: usize, n: usize, cap: usize) -> Result<Vec<Arc<EPoly>>> {
    (1..=m).into_par_iter().map(|r| staged_u(m, n, r, cap)).collect()
}

/// `d_r`: substitutes `a_k`, `b_k` by the characteristic coefficients.
pub fn build_d(u: &EPoly, a: &CharCoeffs, b: &CharCoeffs) -> Result<DPoly> {
    if a.degree() != u.m || b.degree() != u.n {
        return Err(Error::Structural(format!(
            "D_{} takes {} + {} coefficients, got {} + {}",
            u.r,
            u.m,
            u.n,
            a.degree(),
            b.degree()
        )));
    }
    let target = a.coeffs[0].table().clone();
    if b.coeffs.iter().chain(&a.coeffs).any(|c| c.table() != &target) {
        return Err(Error::Structural(
            "characteristic coefficients live over different parameter tables".into(),
        ));
    }
    let mut bind = HashMap::new();
    for (k, c) in a.coeffs.iter().enumerate() {
        bind.insert(format!("a{}", k + 1), c.clone());
    }
    for (k, c) in b.coeffs.iter().enumerate() {
        bind.insert(format!("b{}", k + 1), c.clone());
    }
    let coeffs = u
        .x_coefficients()
        .iter()
        .map(|c| c.substitute(&bind, &target))
        .collect::<Result<Vec<_>>>()?;
    Ok(DPoly {
        r: u.r,
        poly: UniPoly::new(coeffs),
    })
}

/// Companion matrix of `det(tI - G) = t^n - b_1 t^(n-1) + b_2 t^(n-2) - ...`;
/// it is also the matrix of multiplication by `t` on `Q[t]/(g)`.
fn companion(b: &[Rational]) -> Vec<Vec<Rational>> {
    let n = b.len();
    let mut c = vec![vec![Rational::zero(); n]; n];
    for i in 1..n {
        c[i][i - 1] = Rational::one();
    }
    // g = t^n + sum_i g_i t^i with g_i = (-1)^(n-i) b_(n-i).
    for i in 0..n {
        let k = n - i;
        let g = if k % 2 == 0 { b[k - 1].clone() } else { -b[k - 1].clone() };
        c[i][n - 1] = -g;
    }
    c
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |s, k| s + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Arithmetic in `Q[t]/(g)` for monic `g`.
struct Quotient {
    g: UniPoly,
}

impl Quotient {
    fn reduce(&self, p: UniPoly) -> UniPoly {
        if p.degree().unwrap_or(0) < self.g.degree().unwrap() {
            p
        } else {
            p.div_rem(&self.g).expect("g is monic").1
        }
    }

    fn mul(&self, u: &UniPoly, v: &UniPoly) -> UniPoly {
        self.reduce(u.mul(v))
    }
}

/// Power sums `p_0..=p_top` of the roots from elementary symmetric values
/// `e_1..e_m` (Newton's identities).
fn power_sums(e: &[Rational], top: usize) -> Vec<Rational> {
    let m = e.len();
    let ek = |i: usize| if i <= m { e[i - 1].clone() } else { Rational::zero() };
    let mut p = vec![Rational::from_integer(m.into())];
    for l in 1..=top {
        let mut acc = Rational::zero();
        for i in 1..l {
            let term = ek(i) * &p[l - i];
            acc += if i % 2 == 1 { term } else { -term };
        }
        let last = ek(l) * Rational::from_integer(l.into());
        acc += if l % 2 == 1 { last } else { -last };
        p.push(acc);
    }
    p
}

/// Elementary symmetric values `e_0..=e_k` from power sums `ps[1..=k]`
/// (index 0 unused), all in `Q[t]/(g)`.
fn elementary_from_power_sums(q: &Quotient, ps: &[UniPoly], k: usize) -> Vec<UniPoly> {
    let mut e = vec![UniPoly::constant(Rational::one())];
    for i in 1..=k {
        let mut acc = UniPoly::zero();
        for j in 1..=i {
            let term = q.mul(&e[i - j], &ps[j]);
            acc = if j % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        e.push(acc.scale(&Rational::new(1.into(), i.into())));
    }
    e
}

/// `D_r(a, b, x)` at numeric `a`, `b` without forming `D_r` symbolically.
///
/// With `gamma_i = alpha_i - t`, the `binom(m, r)` numbers
/// `prod_{i in I} gamma_i` have power sums `e_r(gamma^k)`, all obtained from
/// power sums of `alpha` by Newton's identities, in `Q[t]/(g)`. That gives
/// `P_r(t, x) = prod_I (x + prod_{i in I} gamma_i) mod g`, and
/// `D_r = prod_j P_r(beta_j, x)` is its norm: the determinant of
/// multiplication by `P_r` on `Q[t]/(g)`.
pub fn d_numeric(r: usize, a: &[Rational], b: &[Rational]) -> Result<UniPoly> {
    let m = a.len();
    let n = b.len();
    if n == 0 {
        return Err(Error::Domain("b must be non-empty".into()));
    }
    if r == 0 || r > m {
        return Err(Error::Domain(format!("level r = {r} outside 1..={m}")));
    }
    let big_n = usize::try_from(binomial(m as i64, r as i64))
        .map_err(|_| Error::Domain("binom(m, r) overflows".into()))?;
    let top = r * big_n;
    let mut g_coeffs = vec![Rational::zero(); n + 1];
    g_coeffs[n] = Rational::one();
    for (i, bi) in b.iter().enumerate() {
        let i = i + 1;
        g_coeffs[n - i] = if i % 2 == 0 { bi.clone() } else { -bi.clone() };
    }
    let q = Quotient { g: UniPoly::new(g_coeffs) };

    let p_alpha = power_sums(a, top);
    // (-t)^j mod g
    let neg_t = q.reduce(UniPoly::new(vec![Rational::zero(), -Rational::one()]));
    let mut neg_t_pow = vec![UniPoly::constant(Rational::one())];
    for j in 1..=top {
        let next = q.mul(&neg_t_pow[j - 1], &neg_t);
        neg_t_pow.push(next);
    }
    // pi_k = sum_i (alpha_i - t)^k
    let mut pi = vec![UniPoly::zero()];
    for k in 1..=top {
        let mut acc = UniPoly::zero();
        for l in 0..=k {
            let c = Rational::from_integer(binomial(k as i64, l as i64)) * &p_alpha[l];
            if !c.is_zero() {
                acc = acc.add(&neg_t_pow[k - l].scale(&c));
            }
        }
        pi.push(acc);
    }
    // power sums of the products: P_k = e_r(gamma_1^k, ..., gamma_m^k)
    let mut prod_ps = vec![UniPoly::zero()];
    for k in 1..=big_n {
        let ps: Vec<UniPoly> = (0..=r).map(|j| if j == 0 { UniPoly::zero() } else { pi[j * k].clone() }).collect();
        prod_ps.push(elementary_from_power_sums(&q, &ps, r).swap_remove(r));
    }
    let e = elementary_from_power_sums(&q, &prod_ps, big_n);

    // multiplication matrices of t^k
    let c = companion(b);
    let mut t_pow = Vec::with_capacity(n);
    let mut cur: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for k in 0..n {
        if k > 0 {
            cur = mat_mul(&cur, &c);
        }
        t_pow.push(cur.clone());
    }
    // entry (i, j) is a polynomial in x: sum over levels of x^(N-l) M(e_l)_(ij)
    let mut entries = vec![vec![vec![Rational::zero(); big_n + 1]; n]; n];
    for (l, el) in e.iter().enumerate() {
        let deg = big_n - l;
        for (k, ck) in el.coeffs().iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    if !t_pow[k][i][j].is_zero() {
                        entries[i][j][deg] += ck * &t_pow[k][i][j];
                    }
                }
            }
        }
    }
    let entries: Vec<Vec<UniPoly>> = entries
        .into_iter()
        .map(|row| row.into_iter().map(UniPoly::new).collect())
        .collect();
    Ok(determinant(&entries))
}
