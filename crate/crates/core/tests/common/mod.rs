//! Independent reference computations used to cross-check the library.
//!
//! Everything here works on dense coefficient vectors with plain rational
//! Gaussian elimination and repeated differentiation, without touching the
//! catalecticant or apolarity code paths.

#![allow(dead_code)]

use apolarity::{Form, Monomial, Poly, Vars};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Rank by textbook row reduction over Q.
pub fn dense_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let factor = &rows[r][c] / &pivot;
                for j in c..ncols {
                    let t = &factor * &rows[rank][j];
                    rows[r][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// All exponent vectors of total degree `k` in `n` variables.
pub fn exponents(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in exponents(n - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn coefficient_vector(p: &Poly, basis: &[Vec<u32>]) -> Vec<BigRational> {
    basis.iter().map(|e| p.coeff(&Monomial::new(e.clone()))).collect()
}

/// `∂^α f` by repeated single-variable differentiation.
pub fn partial(f: &Poly, alpha: &[u32]) -> Poly {
    let mut g = f.clone();
    for (i, &a) in alpha.iter().enumerate() {
        for _ in 0..a {
            g = g.derivative(i);
        }
    }
    g
}

/// `a_k` = dimension of the span of all order-`k` partial derivatives.
pub fn dense_hilbert(f: &Form) -> Vec<usize> {
    let n = f.nvars();
    let d = f.degree();
    (0..=d)
        .map(|k| {
            let basis = exponents(n, d - k);
            let rows = exponents(n, k).iter().map(|a| coefficient_vector(&partial(f.poly(), a), &basis)).collect();
            dense_rank(rows)
        })
        .collect()
}

/// A random form with small integer coefficients and a random support.
pub fn random_form(rng: &mut ChaCha8Rng, max_vars: usize, min_degree: u32, max_degree: u32) -> Form {
    loop {
        let n = rng.random_range(1..=max_vars);
        let d = rng.random_range(min_degree..=max_degree);
        let all = exponents(n, d);
        let density = rng.random_range(0.15..0.8);
        let mut terms = Vec::new();
        for e in all {
            if rng.random_bool(density) {
                let c: i64 = rng.random_range(-3..=3);
                if c != 0 {
                    terms.push((Monomial::new(e), q(c)));
                }
            }
        }
        let p = Poly::from_terms(n, terms);
        if !p.is_zero() {
            return Form::new(Vars::indexed("x", n), p).unwrap();
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense univariate polynomial, constant term first.
fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let s = r.len() - 1 - db;
        let f = r.last().unwrap() / b.last().unwrap();
        for (i, c) in b.iter().enumerate() {
            let t = &f * c;
            r[s + i] -= t;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(a: Vec<BigRational>, b: Vec<BigRational>) -> Vec<BigRational> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Squarefree test for a binary form given by coefficients of `s^i t^(r-i)`,
/// counting a repeated root at `t = 0` through the dehomogenized degree drop.
pub fn binary_squarefree(c: &[BigRational]) -> bool {
    let r = c.len() - 1;
    let p = trim(c.to_vec());
    if p.is_empty() {
        return false;
    }
    if r - (p.len() - 1) >= 2 {
        return false;
    }
    if p.len() <= 2 {
        return true;
    }
    let dp: Vec<BigRational> = p.iter().enumerate().skip(1).map(|(i, x)| x * q(i as i64)).collect();
    poly_gcd(p, dp).len() == 1
}

/// Kernel of a dense matrix (rows of length `ncols`), as a list of vectors.
pub fn kernel(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for j in 0..ncols {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..ncols {
                    let t = &f * &m[rank][j];
                    m[r][j] -= t;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); ncols];
            v[fc] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            v
        })
        .collect()
}

/// Waring rank of a nonzero binary form `Σ coeffs[i] x^i y^(d-i)`.
///
/// Let `r` be the least degree of an annihilator. When `Ann(f)_r` is one
/// dimensional the rank is `r` if its generator is squarefree and `d + 2 - r`
/// otherwise; a pencil without common factor has squarefree members.
pub fn binary_rank_oracle(coeffs: &[i64]) -> usize {
    let d = coeffs.len() - 1;
    let binom = |n: usize, k: usize| -> BigRational {
        (0..k).fold(BigRational::one(), |b, j| b * q((n - j) as i64) / q((j + 1) as i64))
    };
    // f = Σ binom(d,i) a_i x^i y^(d-i)
    let a: Vec<BigRational> = (0..=d).map(|i| q(coeffs[i]) / binom(d, i)).collect();
    for r in 1..=d {
        // Σ g_j X^j Y^(r-j) kills f iff Σ_j g_j a_(j+m) = 0 for m = 0..=d-r.
        let rows: Vec<Vec<BigRational>> = (0..=d - r).map(|m| (0..=r).map(|j| a[j + m].clone()).collect()).collect();
        let ker = kernel(&rows, r + 1);
        match ker.len() {
            0 => continue,
            1 => return if binary_squarefree(&ker[0]) { r } else { d + 2 - r },
            _ => return if kernel_gcd_degree(&ker) == 0 { r } else { d + 2 - r },
        }
    }
    unreachable!("a binary form of degree d has an annihilator of degree at most d/2 + 1")
}

fn kernel_gcd_degree(ker: &[Vec<BigRational>]) -> usize {
    let mut g = trim(ker[0].clone());
    let mut inf = ker[0].len() - 1 - (g.len().max(1) - 1);
    for v in &ker[1..] {
        let t = trim(v.clone());
        inf = inf.min(v.len() - 1 - (t.len().max(1) - 1));
        g = poly_gcd(g, t);
    }
    g.len().saturating_sub(1) + inf
}

/// Evaluate a polynomial at an integer point.
pub fn eval(p: &Poly, point: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (i, &e) in m.exps().iter().enumerate() {
            for _ in 0..e {
                t *= &point[i];
            }
        }
        acc += t;
    }
    acc
}
