//! Sparse multivariate polynomials over the rationals.
//!
//! [`Poly`] is the general (not necessarily homogeneous) workhorse used by
//! the linear algebra layers. [`Form`] wraps a nonzero homogeneous `Poly`
//! together with its variable names, and [`DiffOp`] is an element of the
//! dual ring acting by differentiation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a monomial with its cached total degree.
///
/// Ordered graded-lexicographically: higher total degree is larger, ties are
/// broken by comparing exponents of `x_0`, then `x_1`, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Box<[u32]>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { exps: exps.into_boxed_slice(), degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other.exps.iter().zip(self.exps.iter()).map(|(b, a)| b - a).collect(),
            degree: other.degree - self.degree,
        })
    }

    /// Product of `b_t! / (b_t - a_t)!` over all variables: the scalar picked up
    /// when `X^self` differentiates `x^target`. Caller guarantees divisibility.
    pub fn falling_factor(&self, target: &Monomial) -> BigInt {
        let mut acc = BigInt::one();
        for (&a, &b) in self.exps.iter().zip(target.exps.iter()) {
            for j in 0..a {
                acc *= BigInt::from(b - j);
            }
        }
        acc
    }

    /// Product of the coefficient vector raised to these exponents.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::one();
        for (&e, x) in self.exps.iter().zip(point) {
            if e > 0 {
                acc *= num_traits::pow(x.clone(), e as usize);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of degree `k` in `nvars` variables, in descending
/// graded-lex order (`x_0^k` first). This is the canonical row/column order
/// for every matrix built from graded pieces.
pub fn monomials_of_degree(nvars: usize, k: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos + 1 == nvars {
            cur[pos] = left;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(nvars, pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if k == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return out;
    }
    let mut cur = vec![0; nvars];
    rec(nvars, 0, k, &mut cur, &mut out);
    out
}

/// Sparse polynomial with rational coefficients. Zero coefficients are never
/// stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Poly::monomial(Monomial::one(nvars), c)
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Poly::monomial(Monomial::var(nvars, i), BigRational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(nvars: usize, it: I) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in it {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// `Some(d)` if every term has degree `d`; `None` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Ok(None) };
        // BTreeMap is sorted by degree first, so min and max degrees sit at the ends.
        let last = self.terms.keys().next_back().unwrap();
        if first.degree() != last.degree() {
            return Err(Error::Inhomogeneous { first: first.degree(), second: last.degree() });
        }
        Ok(Some(first.degree()))
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, BigRational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// The apolarity action: `self` read as a differential operator in the
    /// dual variables, applied to `f`.
    pub fn apply_to(&self, f: &Poly) -> Poly {
        assert_eq!(self.nvars, f.nvars, "ambient mismatch in apply");
        let mut out = Poly::zero(f.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &f.terms {
                if let Some(q) = a.quotient_of(b) {
                    let scalar = BigRational::from_integer(a.falling_factor(b));
                    out.add_term(q, ca * cb * scalar);
                }
            }
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        // Cache powers per variable: entries are evaluated many times at one point.
        let maxdeg = self.terms.keys().flat_map(|m| m.exps().iter().copied()).max().unwrap_or(0) as usize;
        let powers: Vec<Vec<BigRational>> = point
            .iter()
            .map(|x| {
                let mut v = Vec::with_capacity(maxdeg + 1);
                v.push(BigRational::one());
                for i in 0..maxdeg {
                    let next = &v[i] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluation modulo the prime of [`crate::linalg::modp`]. `None` when a
    /// coefficient denominator vanishes modulo that prime.
    pub fn eval_mod_p(&self, point: &[u64]) -> Option<u64> {
        use crate::linalg::modp;
        assert_eq!(point.len(), self.nvars);
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = modp::from_rational(c)?;
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = modp::mul(t, modp::pow(point[i], e as u64));
                }
            }
            acc = modp::add(acc, t);
        }
        Some(acc)
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading() {
            let q = lm.quotient_of(m)?;
            let qc = c / &lc;
            rem = &rem - &divisor.mul_monomial(&q, &qc);
            quot.add_term(q, qc);
        }
        Some(quot)
    }

    /// Divide out the rational content, leaving integer coefficients with gcd 1
    /// and a positive leading coefficient. Returns the removed factor.
    pub fn primitive_part(&self) -> (BigRational, Poly) {
        if self.is_zero() {
            return (BigRational::one(), self.clone());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_integer::Integer::gcd(&num_gcd, c.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading().unwrap().1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    pub fn map_coeffs<F: Fn(&BigRational) -> BigRational>(&self, f: F) -> Poly {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.map_coeffs(|c| -c.clone())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "ambient mismatch in product");
        let mut acc: std::collections::HashMap<Monomial, BigRational> = std::collections::HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let m = a.mul(b);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// Ordered variable names shared by every object living in the same ring.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().trim().to_string()).collect();
        if names.is_empty() {
            return Err(Error::OutOfRange("at least one variable is required".into()));
        }
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Parse { pos: 0, msg: format!("invalid variable name `{n}`") });
            }
            if names[..i].contains(n) {
                return Err(Error::Parse { pos: 0, msg: format!("duplicate variable `{n}`") });
            }
        }
        Ok(Vars(names.into()))
    }

    /// Parse a comma separated list such as `x,y,u,v`.
    pub fn parse(list: &str) -> Result<Self> {
        let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Vars::new(&names)
    }

    /// `x_0, …, x_{n-1}`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
        Vars::new(&names).expect("indexed names are valid")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// Names of the dual (differential operator) variables.
    pub fn dual_names(&self) -> Vec<String> {
        self.0
            .iter()
            .map(|n| {
                let mut c = n.chars();
                match c.next() {
                    Some(f) if f.is_ascii_lowercase() => f.to_ascii_uppercase().to_string() + c.as_str(),
                    _ => format!("D{n}"),
                }
            })
            .collect()
    }
}

/// A nonzero homogeneous polynomial together with its ambient variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form {
    vars: Vars,
    degree: u32,
    poly: Poly,
}

impl Form {
    pub fn new(vars: Vars, poly: Poly) -> Result<Self> {
        if vars.len() != poly.nvars() {
            return Err(Error::AmbientMismatch { left: vars.len(), right: poly.nvars() });
        }
        let degree = poly.homogeneous_degree()?.ok_or(Error::ZeroForm)?;
        Ok(Form { vars, degree, poly })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    /// Analyses need a genuine form of positive degree.
    pub fn ensure_analyzable(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::OutOfRange("constant forms have no apolar algebra to analyse".into()));
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        crate::parse::render(&self.poly, self.vars.names())
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Homogeneous element of the dual ring `Q = K[X_0, …, X_n]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOp {
    vars: Vars,
    degree: u32,
    poly: Poly,
}

impl DiffOp {
    pub fn new(vars: Vars, poly: Poly) -> Result<Self> {
        if vars.len() != poly.nvars() {
            return Err(Error::AmbientMismatch { left: vars.len(), right: poly.nvars() });
        }
        let degree = poly.homogeneous_degree()?.ok_or(Error::ZeroForm)?;
        Ok(DiffOp { vars, degree, poly })
    }

    pub fn from_monomial(vars: Vars, m: Monomial) -> Self {
        let degree = m.degree();
        DiffOp { poly: Poly::monomial(m, BigRational::one()), vars, degree }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn render(&self) -> String {
        crate::parse::render(&self.poly, &self.vars.dual_names())
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Differentiate `f` by `op`. `None` is the zero marker: the derivative
/// vanishes (including the case `deg op > deg f`).
pub fn apply(op: &DiffOp, f: &Form) -> Result<Option<Form>> {
    if op.poly.nvars() != f.poly.nvars() {
        return Err(Error::AmbientMismatch { left: op.poly.nvars(), right: f.poly.nvars() });
    }
    if op.degree > f.degree {
        return Ok(None);
    }
    let p = op.poly.apply_to(&f.poly);
    if p.is_zero() {
        return Ok(None);
    }
    Ok(Some(Form { vars: f.vars.clone(), degree: f.degree - op.degree, poly: p }))
}

/// Linear form `Σ a_t x_t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearForm {
    coeffs: Vec<BigRational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        LinearForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        LinearForm { coeffs: coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect() }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_poly(&self) -> Poly {
        let n = self.coeffs.len();
        Poly::from_terms(n, self.coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(n, i), c.clone())))
    }

    /// The same linear form read as an operator in the dual ring.
    pub fn to_diff_poly(&self) -> Poly {
        self.to_poly()
    }

    /// Two forms are proportional when their coefficient vectors are.
    pub fn is_proportional(&self, other: &LinearForm) -> bool {
        let n = self.coeffs.len();
        if n != other.coeffs.len() {
            return false;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if &self.coeffs[i] * &other.coeffs[j] != &self.coeffs[j] * &other.coeffs[i] {
                    return false;
                }
            }
        }
        true
    }

    /// Multinomial expansion of `self^d`.
    pub fn power(&self, d: u32) -> Poly {
        let n = self.coeffs.len();
        let support: Vec<usize> = (0..n).filter(|&i| !self.coeffs[i].is_zero()).collect();
        let mut out = Poly::zero(n);
        if support.is_empty() {
            return out;
        }
        let fact: Vec<BigInt> = factorials(d);
        for m in monomials_of_degree(support.len(), d) {
            let mut coeff = BigRational::from_integer(fact[d as usize].clone());
            let mut exps = vec![0u32; n];
            for (slot, &e) in m.exps().iter().enumerate() {
                let var = support[slot];
                exps[var] = e;
                coeff /= BigRational::from_integer(fact[e as usize].clone());
                if e > 0 {
                    coeff *= num_traits::pow(self.coeffs[var].clone(), e as usize);
                }
            }
            out.add_term(Monomial::new(exps), coeff);
        }
        out
    }
}

/// `[0!, 1!, …, n!]`.
pub fn factorials(n: u32) -> Vec<BigInt> {
    let mut v = Vec::with_capacity(n as usize + 1);
    v.push(BigInt::one());
    for i in 1..=n {
        let next = &v[(i - 1) as usize] * BigInt::from(i);
        v.push(next);
    }
    v
}

/// Convenience: `power(l, d)` as a form over `vars`.
pub fn power(vars: &Vars, l: &LinearForm, d: u32) -> Result<Form> {
    if l.nvars() != vars.len() {
        return Err(Error::AmbientMismatch { left: l.nvars(), right: vars.len() });
    }
    if d == 0 {
        return Err(Error::OutOfRange("power degree must be at least 1".into()));
    }
    Form::new(vars.clone(), l.power(d))
}

/// Split of the variables into an `x`-block and a `u`-block.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    x_block: Vec<usize>,
    u_block: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct Bidegree {
    pub x: u32,
    pub u: u32,
}

impl Partition {
    pub fn new(nvars: usize, x_block: Vec<usize>, u_block: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; nvars];
        for &i in x_block.iter().chain(u_block.iter()) {
            if i >= nvars {
                return Err(Error::InvalidPartition(format!("variable index {i} out of range")));
            }
            if seen[i] {
                return Err(Error::InvalidPartition(format!("variable index {i} appears twice")));
            }
            seen[i] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("variable index {i} is in neither block")));
        }
        Ok(Partition { x_block, u_block })
    }

    pub fn from_names<S: AsRef<str>>(vars: &Vars, x: &[S], u: &[S]) -> Result<Self> {
        let idx = |names: &[S]| -> Result<Vec<usize>> {
            names
                .iter()
                .map(|n| vars.index_of(n.as_ref()).ok_or_else(|| Error::UnknownVariable(n.as_ref().to_string())))
                .collect()
        };
        Partition::new(vars.len(), idx(x)?, idx(u)?)
    }

    /// Parse `X=x,y;U=u,v`.
    pub fn parse(vars: &Vars, spec: &str) -> Result<Self> {
        let mut x: Option<Vec<String>> = None;
        let mut u: Option<Vec<String>> = None;
        for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, list) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidPartition(format!("expected BLOCK=vars, got `{part}`")))?;
            let names: Vec<String> =
                list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            match key.trim() {
                "X" | "x" => x = Some(names),
                "U" | "u" => u = Some(names),
                other => return Err(Error::InvalidPartition(format!("unknown block `{other}`"))),
            }
        }
        let x = x.unwrap_or_default();
        let u = u.unwrap_or_default();
        Partition::from_names(vars, &x, &u)
    }

    pub fn x_block(&self) -> &[usize] {
        &self.x_block
    }

    pub fn u_block(&self) -> &[usize] {
        &self.u_block
    }

    pub fn bidegree_of(&self, m: &Monomial) -> Bidegree {
        let e = m.exps();
        Bidegree {
            x: self.x_block.iter().map(|&i| e[i]).sum(),
            u: self.u_block.iter().map(|&i| e[i]).sum(),
        }
    }
}

/// The common bidegree of all terms of `f`, or an error naming two terms
/// with different bidegrees.
pub fn bigrade(f: &Form, partition: &Partition) -> Result<Bidegree> {
    let names = f.vars().names();
    let mut first: Option<(&Monomial, &BigRational, Bidegree)> = None;
    for (m, c) in f.poly().terms() {
        let bd = partition.bidegree_of(m);
        match first {
            None => first = Some((m, c, bd)),
            Some((fm, fc, fbd)) if fbd != bd => {
                let term = |m: &Monomial, c: &BigRational| {
                    crate::parse::render(&Poly::monomial(m.clone(), c.clone()), names)
                };
                return Err(Error::NotBihomogeneous {
                    first: term(fm, fc),
                    first_bidegree: (fbd.x, fbd.u),
                    second: term(m, c),
                    second_bidegree: (bd.x, bd.u),
                });
            }
            _ => {}
        }
    }
    Ok(first.expect("forms are nonzero").2)
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
