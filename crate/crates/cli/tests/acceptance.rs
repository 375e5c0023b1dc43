//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use eigconf::charpoly::SymMatrix;
use eigconf::ec::{
    condition_for_ec, ec_from_y, ec_oracle, ec_oracle_report, ec_via_theorem, evaluate_condition,
    ConditionOptions, ECVector, Outcome,
};
use eigconf::rational::{rat, ratio};
use eigconf::roots::sign_variations;
use eigconf::sample::{dense_symmetric, random_spectrum};
use eigconf::symmetric::{back_substitute, build_h, e_table, ftsp_reduce, staged_u, DEGREE_CAP};
use eigconf::transform::{build_l, build_t_closed, build_t_enum, build_t_recurrence, build_u, det_t, expected_det_t, invert_t, RatMatrix};
use eigconf::{MultiPoly, Rational, UniPoly};
use eigconf_cli::input::parse_matrix_file;
use eigconf_cli::{cmd_verify, Format, VerifyParams};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn fracs(rows: &[&[(i64, i64)]]) -> RatMatrix {
    RatMatrix::from_fn(rows.len(), rows.len(), |i, j| ratio(rows[i][j].0, rows[i][j].1))
}

fn diag(v: &[i64]) -> SymMatrix {
    SymMatrix::diagonal(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
}

fn c1() -> Check {
    let t0 = Instant::now();
    let t = build_t_enum(4).map_err(|e| e.to_string())?;
    let c = invert_t(4).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    let want_t = RatMatrix::from_ints(&[vec![1, 2, 3, 4], vec![3, 4, 3, 0], vec![3, 2, 1, 4], vec![1, 0, 1, 0]]);
    let want_c = fracs(&[
        &[(-1, 4), (0, 1), (1, 4), (1, 2)],
        &[(0, 1), (1, 4), (0, 1), (-3, 4)],
        &[(1, 4), (0, 1), (-1, 4), (1, 2)],
        &[(1, 8), (-1, 8), (1, 8), (-1, 8)],
    ]);
    ensure(t == want_t, format!("T_4 =\n{t}"))?;
    ensure(c == want_c, format!("C_4 =\n{c}"))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("T_4 and C_4 exact ({elapsed:.2?})"))
}

fn c2() -> Check {
    let t0 = Instant::now();
    for m in 1..=8 {
        let e = |x: eigconf::Error| format!("m={m}: {x}");
        let t = build_t_closed(m).map_err(e)?;
        ensure(build_t_enum(m).map_err(e)? == t, format!("m={m}: enumeration differs"))?;
        ensure(build_t_recurrence(m).map_err(e)? == t, format!("m={m}: recurrence differs"))?;
        let det = det_t(m).map_err(e)?;
        ensure(det == expected_det_t(m), format!("m={m}: det {det}"))?;
        let lu = build_l(m).map_err(e)?.mul(&build_u(m).map_err(e)?).map_err(e)?;
        ensure(lu == t, format!("m={m}: L*U != T"))?;
    }
    let elapsed = t0.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("m = 1..8: det = (-2)^(m(m-1)/2), LU = T, three constructions agree ({elapsed:.2?})"))
}

/// Specializes alpha, beta in `h`, leaving x.
fn h_at(h: &MultiPoly, vals: &[i64]) -> UniPoly {
    let coeffs = h.coefficients_in(vals.len());
    let mut point: Vec<Rational> = vals.iter().map(|&v| rat(v)).collect();
    point.push(Rational::zero());
    UniPoly::new(coeffs.iter().map(|c| c.evaluate(&point).unwrap()).collect())
}

fn linear_power(c: i64, k: usize) -> UniPoly {
    (0..k).fold(UniPoly::from_ints(&[1]), |p, _| p.mul(&UniPoly::from_ints(&[c, 1])))
}

fn c3() -> Check {
    let t0 = Instant::now();
    let err = |e: eigconf::Error| e.to_string();
    let vals = [4, 4, 2, 2, 8];
    let h1 = h_at(&build_h(2, 3, 1).map_err(err)?.poly, &vals);
    let h2 = h_at(&build_h(2, 3, 2).map_err(err)?.poly, &vals);
    ensure(h1 == linear_power(2, 4).mul(&linear_power(-4, 2)), format!("h_1 = {h1}"))?;
    ensure(h2 == linear_power(4, 2).mul(&linear_power(16, 1)), format!("h_2 = {h2}"))?;
    let (f, g) = (diag(&[4, 4]), diag(&[2, 2, 8]));
    let rep = ec_via_theorem(&f, &g).map_err(err)?;
    ensure(rep.y == vec![2, 0], format!("y = {:?}", rep.y))?;
    ensure(rep.ec == ECVector(vec![0, 1]), format!("theorem EC = {}", rep.ec))?;
    let oracle = ec_oracle(&f, &g).map_err(err)?;
    ensure(oracle == rep.ec, format!("oracle EC = {oracle}"))?;
    ensure(det_t(2).map_err(err)? == rat(-2), "det T_2 != -2")?;
    let elapsed = t0.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("h_1, h_2, y = (2, 0), EC = (0, 1), det T_2 = -2 ({elapsed:.2?})"))
}

fn c4() -> Check {
    let t0 = Instant::now();
    let u = ftsp_reduce(&build_h(2, 2, 2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    let t = e_table(2, 2);
    let v = |n: &str| MultiPoly::var(&t, n).unwrap();
    let (a1, a2, b1, b2, x) = (v("a1"), v("a2"), v("b1"), v("b2"), v("x"));
    let k = |c: i64| MultiPoly::constant(&t, rat(c));
    let prod = |ps: &[&MultiPoly]| ps.iter().fold(k(1), |acc, p| &acc * *p);
    let terms = [
        prod(&[&x, &x]),
        &prod(&[&k(-1), &a1, &b1, &x]) + &prod(&[&b1, &b1, &x]),
        &prod(&[&k(2), &a2, &x]) - &prod(&[&k(2), &b2, &x]),
        &prod(&[&a1, &a1, &b2]) - &prod(&[&a1, &a2, &b1]),
        &prod(&[&a2, &b1, &b1]) - &prod(&[&a1, &b1, &b2]),
        &(&prod(&[&a2, &a2]) - &prod(&[&k(2), &a2, &b2])) + &prod(&[&b2, &b2]),
    ];
    let want = terms.iter().fold(MultiPoly::zero(&t), |acc, p| &acc + p);
    ensure(u.poly == want, format!("D_2 = {}", u.poly))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("D_2 matches term for term, {} terms ({elapsed:.2?})", want.len()))
}

fn generic_42_file() -> String {
    let name = |p: char, i: usize, j: usize| format!("{p}{}{}", i.min(j), i.max(j));
    let rows = |p: char, k: usize| {
        (1..=k)
            .map(|i| (1..=k).map(|j| name(p, i, j)).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let mut params: Vec<String> = Vec::new();
    for (p, k) in [('f', 4), ('g', 2)] {
        for i in 1..=k {
            for j in i..=k {
                params.push(name(p, i, j));
            }
        }
    }
    format!("params: {}\nF:\n{}\nG:\n{}\n", params.join(", "), rows('f', 4), rows('g', 2))
}

fn bind(point: &mut HashMap<String, Rational>, p: char, m: &SymMatrix) {
    let q = m.to_rationals().unwrap();
    for i in 0..q.len() {
        for j in i..q.len() {
            point.insert(format!("{p}{}{}", i + 1, j + 1), q[i][j].clone());
        }
    }
}

fn random_dense<R: Rng>(k: usize, rng: &mut R) -> SymMatrix {
    let mut q = vec![vec![Rational::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let v = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=3));
            q[i][j] = v.clone();
            q[j][i] = v;
        }
    }
    SymMatrix::from_rationals(q).unwrap()
}

fn c5() -> Check {
    let mf = parse_matrix_file(&generic_42_file()).map_err(|e| e.to_string())?;
    let c = ECVector(vec![1, 1, 0, 0]);
    let t0 = Instant::now();
    let cond = condition_for_ec(&mf.f, &mf.g, &c, &ConditionOptions::default()).map_err(|e| e.to_string())?;
    let build = t0.elapsed();
    let y: Vec<usize> = cond.clauses.iter().map(|cl| cl.target).collect();
    ensure(y == vec![3, 7, 5, 1], format!("targets {y:?}"))?;
    ensure(cond.clauses.len() == 4, "expected four clauses")?;
    within(build, Duration::from_secs(120))?;

    // Half the points are built to realise c, half are unconstrained dense
    // matrices, so both outcomes get exercised.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut generic, mut skipped, mut hits) = (0, 0, 0);
    let mut i = 0;
    while generic < 24 {
        i += 1;
        let (f, g) = if i % 2 == 0 {
            let mut alpha = random_spectrum(4, &mut rng);
            alpha.sort();
            if alpha.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let mid = |lo: &Rational, hi: &Rational| (lo + hi) / rat(2);
            let beta = vec![mid(&alpha[0], &alpha[1]), mid(&alpha[1], &alpha[2])];
            (dense_symmetric(&alpha, &mut rng), dense_symmetric(&beta, &mut rng))
        } else {
            (random_dense(4, &mut rng), random_dense(2, &mut rng))
        };
        let mut point = HashMap::new();
        bind(&mut point, 'f', &f);
        bind(&mut point, 'g', &g);
        let ev = evaluate_condition(&cond, &point).map_err(|e| e.to_string())?;
        let oracle = match ec_oracle(&f, &g) {
            Err(eigconf::Error::Genericity { .. }) => {
                ensure(matches!(ev.outcome, Outcome::NonGeneric { .. }), "condition missed a non-generic point")?;
                skipped += 1;
                continue;
            }
            other => other.map_err(|e| e.to_string())?,
        };
        generic += 1;
        let holds = ev.outcome == Outcome::True;
        ensure(holds == (oracle == c), format!("point {i}: condition says {holds}, oracle EC = {oracle}"))?;
        hits += usize::from(holds);
    }
    ensure(hits > 0 && hits < generic, format!("only one outcome seen ({hits}/{generic} true)"))?;
    Ok(format!(
        "y = (3, 7, 5, 1); d_1..d_4 built in {build:.2?}; {generic} generic points agree with the oracle ({hits} true, {skipped} non-generic skipped)"
    ))
}

fn c6() -> Check {
    let (f, g) = (diag(&[0, 0, 1, 3, 5, 8]), diag(&[-1, 2, 2, 6]));
    let want = ECVector(vec![0, 0, 2, 0, 1, 0]);
    let oracle = ec_oracle_report(&f, &g).map_err(|e| e.to_string())?;
    let theorem = ec_via_theorem(&f, &g).map_err(|e| e.to_string())?;
    ensure(oracle.ec == want, format!("oracle {}", oracle.ec))?;
    ensure(theorem.ec == want, format!("theorem {}", theorem.ec))?;
    ensure(ec_from_y(&theorem.y, 4).map_err(|e| e.to_string())? == want, "C*y")?;
    Ok(format!("both routes give {want} (y = {:?})", theorem.y))
}

fn c7() -> Check {
    let t0 = Instant::now();
    let mut out = Vec::new();
    let p = VerifyParams { m_max: 4, n_max: 4, count: 200, seed: 20_240_601, replay: None };
    let code = cmd_verify(&p, Format::Text, &mut out).map_err(|e| e.to_string())?;
    let text = String::from_utf8(out).unwrap();
    let elapsed = t0.elapsed();
    ensure(code == 0 && text.contains("200/200 agree"), text.clone())?;
    within(elapsed, Duration::from_secs(600))?;
    Ok(format!("{} ({elapsed:.2?})", text.lines().collect::<Vec<_>>().join("; ")))
}

fn c8() -> Check {
    let t0 = Instant::now();
    let mut checked = 0;
    for m in 1..=3 {
        for n in 1..=3 {
            for r in 1..=m {
                let e = |x: eigconf::Error| format!("(m, n, r) = ({m}, {n}, {r}): {x}");
                let h = build_h(m, n, r).map_err(e)?;
                let u = ftsp_reduce(&h).map_err(e)?;
                ensure(u.poly.has_integer_coefficients(), format!("u_{r} for ({m}, {n}) has a fraction"))?;
                ensure(back_substitute(&u).map_err(e)? == h.poly, format!("back-substitution differs at ({m}, {n}, {r})"))?;
                let staged = staged_u(m, n, r, DEGREE_CAP).map_err(e)?;
                ensure(staged.poly == u.poly, format!("staged reduction differs at ({m}, {n}, {r})"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (m, n, r) triples round-trip with integer coefficients ({:.2?})", t0.elapsed()))
}

fn c9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut max_deg = 0;
    for case in 0..100 {
        let deg = rng.gen_range(1..=12);
        max_deg = max_deg.max(deg);
        let roots: Vec<Rational> = (0..deg)
            .map(|_| {
                // a few repeated and zero roots on purpose
                ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))
            })
            .collect();
        let lead = rat(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 });
        let p = roots
            .iter()
            .fold(UniPoly::constant(lead), |acc, r| acc.mul(&UniPoly::linear_root(r)));
        let positive = roots.iter().filter(|r| **r > Rational::zero()).count();
        let v = sign_variations(p.coeffs());
        ensure(v == positive, format!("case {case}: {p} has {positive} positive roots, {v} variations"))?;
    }
    Ok(format!("100 products of linear factors (degree <= {max_deg})"))
}

fn c10() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut cases = vec![
        ("diagonal".to_string(), "F:\n2 0\n0 4\nG:\n2\n".to_string()),
        ("repeated".to_string(), "F:\n1 0 0\n0 1 0\n0 0 3\nG:\n1 0\n0 5\n".to_string()),
    ];
    // dense pairs that share an eigenvalue
    for k in 0..4 {
        let mut alpha = random_spectrum(3, &mut rng);
        let mut beta = random_spectrum(2, &mut rng);
        beta[0] = alpha[k % 3].clone();
        if k == 3 {
            alpha[1] = alpha[0].clone();
            beta[1] = alpha[0].clone();
        }
        let show = |m: &SymMatrix| {
            m.to_rationals()
                .unwrap()
                .iter()
                .map(|r| r.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", "))
                .collect::<Vec<_>>()
                .join("\n")
        };
        let (f, g) = (dense_symmetric(&alpha, &mut rng), dense_symmetric(&beta, &mut rng));
        cases.push((format!("dense #{k}"), format!("F:\n{}\nG:\n{}\n", show(&f), show(&g))));
    }
    for (name, text) in &cases {
        let path = dir.path().join(format!("{}.txt", name.replace([' ', '#'], "_")));
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        let out = Command::new(env!("CARGO_BIN_EXE_eigconf"))
            .args(["--format", "machine", "ec"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(2), format!("{name}: exit {:?}", out.status.code()))?;
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| format!("{name}: {e}"))?;
        for route in ["oracle", "theorem"] {
            let deg = doc[route]["gcd_degree"].as_u64().unwrap_or(0);
            ensure(deg > 0, format!("{name}: {route} route gave no gcd witness: {doc}"))?;
        }
    }
    Ok(format!("{} shared-eigenvalue pairs: exit 2 with a gcd witness from both routes", cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("T_4 and C_4", c1),
        ("transform identities m = 1..8", c2),
        ("running example", c3),
        ("D_2 for m = n = 2", c4),
        ("parametric m = 4, n = 2 condition", c5),
        ("EC with a repeated eigenvalue of F", c6),
        ("200-case fuzz", c7),
        ("symmetric reduction identity", c8),
        ("sign variations on real-rooted products", c9),
        ("genericity errors", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
