//! Eigenvalue configurations: the root-isolation oracle, the sign-variation
//! route, and synthesis/evaluation of quantifier-free conditions.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use log::debug;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::charpoly::{char_coeffs, eigen_poly, point_vector, CharCoeffs, SymMatrix};
use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::rational::{binomial, Rational};
use crate::roots::{compare_roots, common_factor, isolate_real_roots, sign_variations};
use crate::symmetric::{all_u, build_d, d_numeric, h_degree, DEGREE_CAP};
use crate::transform::{build_t_closed, invert_t};
use crate::unipoly::UniPoly;
use crate::vars::VarTable;

/// `c_t` = number of eigenvalues of `G` strictly between `alpha_t` and
/// `alpha_{t+1}` (with `alpha_{m+1} = +inf`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ECVector(pub Vec<usize>);

impl ECVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        self.0.iter().map(|&v| Rational::from_integer(v.into())).collect()
    }
}

impl fmt::Display for ECVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `z^k - c_1 z^(k-1) + c_2 z^(k-2) - ...` from characteristic coefficients.
pub fn poly_from_char_coeffs(c: &[Rational]) -> UniPoly {
    let k = c.len();
    let mut coeffs = vec![Rational::zero(); k + 1];
    coeffs[k] = Rational::one();
    for (i, ci) in c.iter().enumerate() {
        let i = i + 1;
        coeffs[k - i] = if i % 2 == 0 { ci.clone() } else { -ci.clone() };
    }
    UniPoly::new(coeffs)
}

/// Genericity error carrying the shared factor, or `Ok` for a generic pair.
pub fn require_generic(f: &UniPoly, g: &UniPoly) -> Result<()> {
    let d = common_factor(f, g)?;
    match d.degree() {
        Some(0) => Ok(()),
        deg => Err(Error::Genericity {
            gcd: d.display_in("z"),
            gcd_degree: deg.unwrap_or(0),
        }),
    }
}

fn numeric_polys(f: &SymMatrix, g: &SymMatrix) -> Result<(UniPoly, UniPoly)> {
    Ok((eigen_poly(f)?, eigen_poly(g)?))
}

/// Full oracle result, including the eigenvalues of `G` left of `alpha_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub ec: ECVector,
    pub below_first: usize,
}

/// EC from isolated eigenvalues (independent of the sign-variation route).
pub fn ec_oracle(f: &SymMatrix, g: &SymMatrix) -> Result<ECVector> {
    Ok(ec_oracle_report(f, g)?.ec)
}

pub fn ec_oracle_report(f: &SymMatrix, g: &SymMatrix) -> Result<OracleReport> {
    let (fp, gp) = numeric_polys(f, g)?;
    require_generic(&fp, &gp)?;
    let mut alpha = isolate_real_roots(&fp)?;
    let mut beta = isolate_real_roots(&gp)?;
    let m = f.size();
    if alpha.total_multiplicity() != m || beta.total_multiplicity() != g.size() {
        return Err(Error::Assertion("a symmetric matrix has non-real eigenvalues".into()));
    }
    let mut c = vec![0usize; m];
    let mut below_first = 0;
    for j in 0..beta.roots.len() {
        let mut t = 0;
        for i in 0..alpha.roots.len() {
            match compare_roots(&mut alpha, i, &mut beta, j) {
                std::cmp::Ordering::Less => t += alpha.roots[i].multiplicity,
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {
                    return Err(Error::Assertion("shared eigenvalue after genericity check".into()))
                }
            }
        }
        let mult = beta.roots[j].multiplicity;
        if t == 0 {
            below_first += mult;
        } else {
            c[t - 1] += mult;
        }
    }
    Ok(OracleReport {
        ec: ECVector(c),
        below_first,
    })
}

/// EC directly from known eigenvalues.
pub fn ec_from_eigenvalues(alpha: &[Rational], beta: &[Rational]) -> ECVector {
    let mut c = vec![0usize; alpha.len()];
    for b in beta {
        let t = alpha.iter().filter(|a| *a < b).count();
        if t > 0 {
            c[t - 1] += 1;
        }
    }
    ECVector(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub y: Vec<usize>,
    pub ec: ECVector,
}

/// `C * y` as a configuration, checking it is a vector of naturals with
/// total at most `n`.
pub fn ec_from_y(y: &[usize], n: usize) -> Result<ECVector> {
    let c = invert_t(y.len())?.mul_vec(&y.iter().map(|&v| Rational::from_integer(v.into())).collect::<Vec<_>>())?;
    let mut out = Vec::with_capacity(c.len());
    for v in &c {
        if !v.is_integer() || v.is_negative() {
            return Err(Error::Assertion(format!("C*y has entry {v}, not a natural number")));
        }
        out.push(v.to_integer().to_usize().unwrap());
    }
    let ec = ECVector(out);
    if ec.total() > n {
        return Err(Error::Assertion(format!("C*y = {ec} counts more than {n} eigenvalues")));
    }
    Ok(ec)
}

/// `y_r = v(D_r(a, b, x))` for numeric characteristic coefficients.
pub fn y_from_coefficients(a: &[Rational], b: &[Rational]) -> Result<Vec<usize>> {
    (1..=a.len())
        .into_par_iter()
        .map(|r| Ok(sign_variations(d_numeric(r, a, b)?.coeffs())))
        .collect()
}

pub fn ec_via_theorem(f: &SymMatrix, g: &SymMatrix) -> Result<TheoremReport> {
    let (fp, gp) = numeric_polys(f, g)?;
    require_generic(&fp, &gp)?;
    let a = char_coeffs(f).to_rationals().expect("numeric");
    let b = char_coeffs(g).to_rationals().expect("numeric");
    let y = y_from_coefficients(&a, &b)?;
    let ec = ec_from_y(&y, g.size())?;
    Ok(TheoremReport { y, ec })
}

// ---------------------------------------------------------------------------
// Conditions

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionForm {
    /// Clause coefficients are polynomials in `a1..am, b1..bn`; the
    /// characteristic coefficients are given separately in the parameters.
    CharCoefficient,
    /// Clause coefficients are polynomials in the parameters.
    Expanded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Clause {
    pub r: usize,
    pub target: usize,
    /// Coefficients of `x^0, x^1, ...`.
    pub coeffs: Vec<MultiPoly>,
    /// Sign vectors (lowest coefficient first) with exactly `target`
    /// variations; present when requested and the degree is at most 8.
    pub sign_patterns: Option<Vec<Vec<i8>>>,
}

impl Clause {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub m: usize,
    pub n: usize,
    pub params: Arc<VarTable>,
    pub target: ECVector,
    pub form: ConditionForm,
    /// `a_1..a_m` and `b_1..b_n` over the parameters.
    pub char_a: Vec<MultiPoly>,
    pub char_b: Vec<MultiPoly>,
    pub clauses: Vec<Clause>,
    /// Why no parameter point can satisfy the condition; empty otherwise.
    pub unsatisfiable: Vec<String>,
}

pub const SIGN_PATTERN_MAX_DEGREE: usize = 8;

#[derive(Clone, Copy, Debug)]
pub struct ConditionOptions {
    pub form: ConditionForm,
    pub sign_patterns: bool,
    pub degree_cap: usize,
}

impl Default for ConditionOptions {
    fn default() -> Self {
        Self {
            form: ConditionForm::CharCoefficient,
            sign_patterns: false,
            degree_cap: DEGREE_CAP,
        }
    }
}

/// Table `a1..am, b1..bn` for char-coefficient clauses.
pub fn ab_table(m: usize, n: usize) -> Arc<VarTable> {
    VarTable::new(vec![
        ("a", VarTable::indexed("a", m)),
        ("b", VarTable::indexed("b", n)),
    ])
    .expect("distinct names")
}

/// `y = T_m c`.
pub fn targets_for(c: &ECVector) -> Result<Vec<usize>> {
    let y = build_t_closed(c.len())?.mul_vec(&c.as_rationals())?;
    Ok(y.iter().map(|v| v.to_integer().to_usize().expect("T_m is non-negative")).collect())
}

/// Sign vectors of length `degree + 1` with a positive leading entry and
/// `variations` sign changes.
pub fn sign_patterns(degree: usize, variations: usize) -> Vec<Vec<i8>> {
    let len = degree + 1;
    let total = 3usize.pow(degree as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut v = Vec::with_capacity(len);
        let mut k = code;
        for _ in 0..degree {
            v.push((k % 3) as i8 - 1);
            k /= 3;
        }
        v.push(1);
        let q: Vec<Rational> = v.iter().map(|&s| Rational::from_integer(s.into())).collect();
        if sign_variations(&q) == variations {
            out.push(v);
        }
    }
    out
}

pub fn condition_for_ec(
    f: &SymMatrix,
    g: &SymMatrix,
    c: &ECVector,
    opts: &ConditionOptions,
) -> Result<Condition> {
    if f.table() != g.table() {
        return Err(Error::Structural("F and G are over different parameter tables".into()));
    }
    let (m, n) = (f.size(), g.size());
    if c.len() != m {
        return Err(Error::Structural(format!(
            "configuration has {} entries but F is {m}x{m}",
            c.len()
        )));
    }
    let y = targets_for(c)?;
    let mut unsatisfiable = Vec::new();
    if c.total() > n {
        unsatisfiable.push(format!("configuration places {} eigenvalues but G has {n}", c.total()));
    }
    for (r, &yr) in y.iter().enumerate() {
        let deg = h_degree(m, n, r + 1);
        if yr > deg {
            unsatisfiable.push(format!(
                "target y_{} = {yr} exceeds deg d_{} = {deg}",
                r + 1,
                r + 1
            ));
        }
    }
    let a: CharCoeffs = char_coeffs(f);
    let b: CharCoeffs = char_coeffs(g);
    let us = all_u(m, n, opts.degree_cap)?;
    let ab = ab_table(m, n);
    let clauses = us
        .par_iter()
        .map(|u| {
            let coeffs = match opts.form {
                ConditionForm::CharCoefficient => u
                    .x_coefficients()
                    .iter()
                    .map(|p| p.embed(&ab))
                    .collect::<Result<Vec<_>>>()?,
                ConditionForm::Expanded => build_d(u, &a, &b)?.poly.into_coeffs(),
            };
            let target = y[u.r - 1];
            let degree = coeffs.len() - 1;
            let patterns = (opts.sign_patterns && degree <= SIGN_PATTERN_MAX_DEGREE)
                .then(|| sign_patterns(degree, target));
            debug!("clause r={} degree {degree}", u.r);
            Ok(Clause {
                r: u.r,
                target,
                coeffs,
                sign_patterns: patterns,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Condition {
        m,
        n,
        params: f.table().clone(),
        target: c.clone(),
        form: opts.form,
        char_a: a.coeffs,
        char_b: b.coeffs,
        clauses,
        unsatisfiable,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    True,
    False,
    /// The point violates the genericity precondition.
    NonGeneric { gcd: String, gcd_degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub outcome: Outcome,
    /// `v(d_r)` at the point, one per clause.
    pub variations: Vec<usize>,
}

pub fn evaluate_condition(cond: &Condition, point: &HashMap<String, Rational>) -> Result<Evaluation> {
    let pv = point_vector(&cond.params, point)?;
    let a = cond.char_a.iter().map(|p| p.evaluate(&pv)).collect::<Result<Vec<_>>>()?;
    let b = cond.char_b.iter().map(|p| p.evaluate(&pv)).collect::<Result<Vec<_>>>()?;
    let ab: Vec<Rational> = a.iter().chain(&b).cloned().collect();
    let mut variations = Vec::with_capacity(cond.clauses.len());
    for cl in &cond.clauses {
        let vals = match cond.form {
            ConditionForm::CharCoefficient => &ab,
            ConditionForm::Expanded => &pv,
        };
        let coeffs = cl.coeffs.iter().map(|p| p.evaluate(vals)).collect::<Result<Vec<_>>>()?;
        variations.push(sign_variations(&coeffs));
    }
    let outcome = match require_generic(&poly_from_char_coeffs(&a), &poly_from_char_coeffs(&b)) {
        Err(Error::Genericity { gcd, gcd_degree }) => Outcome::NonGeneric { gcd, gcd_degree },
        Err(e) => return Err(e),
        Ok(()) => {
            if cond.clauses.iter().zip(&variations).all(|(c, &v)| v == c.target) {
                Outcome::True
            } else {
                Outcome::False
            }
        }
    };
    Ok(Evaluation { outcome, variations })
}

/// Every configuration of length `m` with total at most `n`.
pub fn all_configurations(m: usize, n: usize) -> Vec<ECVector> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; m];
    fn go(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<ECVector>) {
        if i == cur.len() {
            out.push(ECVector(cur.clone()));
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            go(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    go(0, n, &mut cur, &mut out);
    out
}

/// `binom(m, r) * n` for every level, the largest possible `y_r`.
pub fn max_targets(m: usize, n: usize) -> Vec<usize> {
    (1..=m)
        .map(|r| binomial(m as i64, r as i64).to_usize().unwrap_or(usize::MAX) * n)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn diag(v: &[i64]) -> SymMatrix {
        SymMatrix::diagonal(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(ec_oracle(&diag(&[4, 4]), &diag(&[2, 2, 8])).unwrap(), ECVector(vec![0, 1]));
        assert_eq!(
            ec_oracle(&diag(&[0, 0, 1, 3, 5, 8]), &diag(&[-1, 2, 2, 6])).unwrap(),
            ECVector(vec![0, 0, 2, 0, 1, 0])
        );
        assert_eq!(ec_oracle(&diag(&[0]), &diag(&[1])).unwrap(), ECVector(vec![1]));
        let rep = ec_oracle_report(&diag(&[0, 0, 1, 3, 5, 8]), &diag(&[-1, 2, 2, 6])).unwrap();
        assert_eq!(rep.below_first, 1);
    }

    #[test]
    fn theorem_examples() {
        let rep = ec_via_theorem(&diag(&[4, 4]), &diag(&[2, 2, 8])).unwrap();
        assert_eq!(rep.y, vec![2, 0]);
        assert_eq!(rep.ec, ECVector(vec![0, 1]));
        let rep = ec_via_theorem(&diag(&[0]), &diag(&[-1])).unwrap();
        assert_eq!((rep.y, rep.ec), (vec![0], ECVector(vec![0])));
        let rep = ec_via_theorem(&diag(&[0, 0, 1, 3, 5, 8]), &diag(&[-1, 2, 2, 6])).unwrap();
        assert_eq!(rep.ec, ECVector(vec![0, 0, 2, 0, 1, 0]));
    }

    #[test]
    fn four_two_configuration() {
        // alpha = 0, 2, 5, 6 and beta = 1, 3 as in the pictured arrangement
        let rep = ec_via_theorem(&diag(&[0, 2, 5, 6]), &diag(&[1, 3])).unwrap();
        assert_eq!(rep.y, vec![3, 7, 5, 1]);
        assert_eq!(rep.ec, ECVector(vec![1, 1, 0, 0]));
    }

    #[test]
    fn shared_eigenvalue_rejected() {
        let err = ec_oracle(&diag(&[1, 2]), &diag(&[2, 3])).unwrap_err();
        assert_eq!(err, Error::Genericity { gcd: "z - 2".into(), gcd_degree: 1 });
        assert!(matches!(ec_via_theorem(&diag(&[1]), &diag(&[1])), Err(Error::Genericity { .. })));
    }

    #[test]
    fn targets_examples() {
        assert_eq!(targets_for(&ECVector(vec![0, 1])).unwrap(), vec![2, 0]);
        assert_eq!(targets_for(&ECVector(vec![1, 1, 0, 0])).unwrap(), vec![3, 7, 5, 1]);
    }

    fn params(names: &[&str]) -> Arc<VarTable> {
        VarTable::single("p", names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn diag_family(t: &Arc<VarTable>, names: &[&str]) -> SymMatrix {
        let k = names.len();
        let rows = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { MultiPoly::var(t, names[i]).unwrap() } else { MultiPoly::zero(t) })
                    .collect()
            })
            .collect();
        SymMatrix::new(t, rows).unwrap()
    }

    #[test]
    fn one_by_one_condition() {
        let t = params(&["p", "q"]);
        let f = diag_family(&t, &["p"]);
        let g = diag_family(&t, &["q"]);
        let cond = condition_for_ec(&f, &g, &ECVector(vec![1]), &ConditionOptions::default()).unwrap();
        assert_eq!(cond.clauses.len(), 1);
        assert_eq!(cond.clauses[0].target, 1);
        let expected = vec![
            &MultiPoly::var(&ab_table(1, 1), "a1").unwrap() - &MultiPoly::var(&ab_table(1, 1), "b1").unwrap(),
            MultiPoly::one(&ab_table(1, 1)),
        ];
        assert_eq!(cond.clauses[0].coeffs, expected);
        let pt = |p: i64, q: i64| HashMap::from([("p".to_string(), rat(p)), ("q".to_string(), rat(q))]);
        assert_eq!(evaluate_condition(&cond, &pt(0, 1)).unwrap().outcome, Outcome::True);
        assert_eq!(evaluate_condition(&cond, &pt(1, 0)).unwrap().outcome, Outcome::False);
        assert!(matches!(
            evaluate_condition(&cond, &pt(1, 1)).unwrap().outcome,
            Outcome::NonGeneric { gcd_degree: 1, .. }
        ));
        let missing = HashMap::from([("p".to_string(), rat(0))]);
        assert!(matches!(evaluate_condition(&cond, &missing), Err(Error::Structural(_))));
    }

    #[test]
    fn unsatisfiable_flags() {
        let t = params(&["p", "q", "s"]);
        let f = diag_family(&t, &["p", "q"]);
        let g = diag_family(&t, &["s"]);
        let ok = condition_for_ec(&f, &g, &ECVector(vec![0, 1]), &ConditionOptions::default()).unwrap();
        assert_eq!(ok.clauses.iter().map(|c| c.target).collect::<Vec<_>>(), vec![2, 0]);
        assert!(ok.unsatisfiable.is_empty());
        let bad = condition_for_ec(&f, &g, &ECVector(vec![1, 1]), &ConditionOptions::default()).unwrap();
        assert!(!bad.unsatisfiable.is_empty());
    }

    #[test]
    fn expanded_form_agrees_with_char_form() {
        let t = params(&["p", "q", "s"]);
        let f = SymMatrix::new(
            &t,
            vec![
                vec![MultiPoly::var(&t, "p").unwrap(), MultiPoly::var(&t, "q").unwrap()],
                vec![MultiPoly::var(&t, "q").unwrap(), MultiPoly::zero(&t)],
            ],
        )
        .unwrap();
        let g = diag_family(&t, &["s"]);
        let c = ECVector(vec![1, 0]);
        let opts = ConditionOptions { form: ConditionForm::Expanded, ..Default::default() };
        let e = condition_for_ec(&f, &g, &c, &opts).unwrap();
        let k = condition_for_ec(&f, &g, &c, &ConditionOptions::default()).unwrap();
        for p in -2..=2 {
            for q in -2..=2 {
                for s in -3..=3 {
                    let pt = HashMap::from([
                        ("p".to_string(), rat(p)),
                        ("q".to_string(), rat(q)),
                        ("s".to_string(), ratio(s, 2)),
                    ]);
                    assert_eq!(evaluate_condition(&e, &pt).unwrap(), evaluate_condition(&k, &pt).unwrap());
                }
            }
        }
    }

    #[test]
    fn sign_pattern_counts() {
        // degree 1 with leading +: (-, +) has one variation, (0, +) and (+, +) none
        assert_eq!(sign_patterns(1, 1), vec![vec![-1, 1]]);
        assert_eq!(sign_patterns(1, 0).len(), 2);
        let total: usize = (0..=4).map(|v| sign_patterns(4, v).len()).sum();
        assert_eq!(total, 81);
    }

    #[test]
    fn grid_soundness_for_diagonal_families() {
        let grid = [ratio(-1, 1), rat(0), ratio(1, 2), rat(1), rat(2)];
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let pn: Vec<String> = (1..=m).map(|i| format!("p{i}")).collect();
            let qn: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
            let all: Vec<&str> = pn.iter().chain(&qn).map(|s| s.as_str()).collect();
            let t = params(&all);
            let f = diag_family(&t, &all[..m]);
            let g = diag_family(&t, &all[m..]);
            let configs = all_configurations(m, n);
            let conds: Vec<Condition> = configs
                .iter()
                .map(|c| condition_for_ec(&f, &g, c, &ConditionOptions::default()).unwrap())
                .collect();
            let k = m + n;
            for code in 0..grid.len().pow(k as u32) {
                let mut idx = code;
                let vals: Vec<Rational> = (0..k)
                    .map(|_| {
                        let v = grid[idx % grid.len()].clone();
                        idx /= grid.len();
                        v
                    })
                    .collect();
                let point: HashMap<String, Rational> =
                    all.iter().map(|s| s.to_string()).zip(vals.iter().cloned()).collect();
                let generic = vals[..m].iter().all(|a| !vals[m..].contains(a));
                let truth = ec_from_eigenvalues(&vals[..m], &vals[m..]);
                for (c, cond) in configs.iter().zip(&conds) {
                    let out = evaluate_condition(cond, &point).unwrap().outcome;
                    if generic {
                        assert_eq!(out == Outcome::True, *c == truth, "{vals:?} {c}");
                    } else {
                        assert!(matches!(out, Outcome::NonGeneric { .. }));
                    }
                }
            }
        }
    }
}
