//! Random exact test instances: `Q^T D Q` with `Q` a product of rational
//! Givens rotations, so the eigenvalues are known in advance.

use num_traits::{One, Zero};
use rand::Rng;

use crate::charpoly::SymMatrix;
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct Instance {
    pub f: SymMatrix,
    pub g: SymMatrix,
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
}

impl Instance {
    /// No eigenvalue of `F` is an eigenvalue of `G`.
    pub fn is_generic(&self) -> bool {
        self.alpha.iter().all(|a| !self.beta.contains(a))
    }
}

/// `(cos, sin)` on the unit circle from a Pythagorean parametrisation.
fn rational_angle<R: Rng + ?Sized>(rng: &mut R) -> (Rational, Rational) {
    loop {
        let p: i64 = rng.gen_range(-4..=4);
        let q: i64 = rng.gen_range(1..=4);
        if p == 0 {
            continue;
        }
        let d = Rational::from_integer((p * p + q * q).into());
        let c = Rational::from_integer((p * p - q * q).into()) / &d;
        let s = Rational::from_integer((2 * p * q).into()) / &d;
        return (c, s);
    }
}

/// Product of `count` random plane rotations; exactly orthogonal.
pub fn random_rotation<R: Rng + ?Sized>(size: usize, count: usize, rng: &mut R) -> Vec<Vec<Rational>> {
    let mut q: Vec<Vec<Rational>> = (0..size)
        .map(|i| (0..size).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    if size < 2 {
        return q;
    }
    for _ in 0..count {
        let i = rng.gen_range(0..size);
        let mut j = rng.gen_range(0..size - 1);
        if j >= i {
            j += 1;
        }
        let (c, s) = rational_angle(rng);
        // q <- G q, rotating rows i and j
        for k in 0..size {
            let (a, b) = (q[i][k].clone(), q[j][k].clone());
            q[i][k] = &c * &a - &s * &b;
            q[j][k] = &s * &a + &c * &b;
        }
    }
    q
}

/// `Q^T diag(d) Q`.
pub fn conjugate(d: &[Rational], q: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = d.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &q[k][i] * &d[k] * &q[k][j]))
                .collect()
        })
        .collect()
}

/// Small rationals with denominators 1 or 2; repeats allowed.
pub fn random_spectrum<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Vec<Rational> {
    (0..size)
        .map(|_| {
            let num: i64 = rng.gen_range(-8..=8);
            let den: i64 = rng.gen_range(1..=2);
            Rational::new(num.into(), den.into())
        })
        .collect()
}

pub fn dense_symmetric<R: Rng + ?Sized>(spectrum: &[Rational], rng: &mut R) -> SymMatrix {
    let q = random_rotation(spectrum.len(), spectrum.len().max(1), rng);
    SymMatrix::from_rationals(conjugate(spectrum, &q)).expect("Q^T D Q is symmetric")
}

/// A random pair with `F` of size `m` and `G` of size `n` (not necessarily
/// generic; see [`Instance::is_generic`]).
pub fn sample_instance<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Instance {
    let alpha = random_spectrum(m, rng);
    let beta = random_spectrum(n, rng);
    Instance {
        f: dense_symmetric(&alpha, rng),
        g: dense_symmetric(&beta, rng),
        alpha,
        beta,
    }
}

/// Draws until a generic pair comes up; returns it with the number of
/// non-generic draws skipped.
pub fn sample_generic<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> (Instance, usize) {
    let mut skipped = 0;
    loop {
        let inst = sample_instance(m, n, rng);
        if inst.is_generic() {
            return (inst, skipped);
        }
        skipped += 1;
    }
}
