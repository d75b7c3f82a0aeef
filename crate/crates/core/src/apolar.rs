//! Graded pieces of the apolar algebra `A = Q / Ann(f)`.
//!
//! The degree-`k` catalecticant sends a dual monomial `α ∈ Q_k` to the
//! coefficient vector of `α(f) ∈ R_{d-k}`. Its kernel is `Ann(f)_k`, its rank
//! is `a_k = dim A_k`, and the greedy set of independent rows (in graded-lex
//! order) is the monomial basis of `A_k` used everywhere downstream.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{IncrementalEchelon, Insertion, QMatrix, SparseRow};
use crate::poly::{monomials_of_degree, DiffOp, Form, Monomial, Poly};

/// `binom(n + k, k)` as a `usize`, the dimension of `Q_k` in `n + 1` variables.
pub fn graded_dim(nvars: usize, k: u32) -> usize {
    if nvars == 0 {
        return usize::from(k == 0);
    }
    binomial(nvars - 1 + k as usize, k as usize)
}

#[derive(Clone, Debug)]
pub struct CatalecticantSlice {
    pub k: u32,
    pub rows: Vec<Monomial>,
    pub cols: Vec<Monomial>,
    /// Sparse rows: entry `(i, j)` is the coefficient of `cols[j]` in `rows[i](f)`.
    pub entries: Vec<Vec<(usize, BigRational)>>,
    pub rank: usize,
    /// Row indices of the greedy independent set (the monomial basis of `A_k`).
    pub basis_rows: Vec<usize>,
    /// `Ann(f)_k`, one generator per dependent row monomial, each of the form
    /// `X^m - Σ c_j X^{b_j}` with the `b_j` earlier basis monomials.
    pub kernel_basis: Vec<DiffOp>,
}

impl CatalecticantSlice {
    pub fn to_dense(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows.len(), self.cols.len());
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row {
                m.set(i, *j, v.clone());
            }
        }
        m
    }
}

/// Row `α ↦ α(f)` as sparse integer-scaled entries. `col_index` maps `R_{d-k}`
/// monomials to columns.
fn slice_rows(f: &Form, rows: &[Monomial], col_index: &HashMap<Monomial, usize>) -> Vec<Vec<(usize, BigRational)>> {
    rows.iter()
        .map(|alpha| {
            let mut row: Vec<(usize, BigRational)> = f
                .poly()
                .terms()
                .filter_map(|(b, c)| {
                    let q = alpha.quotient_of(b)?;
                    let v = c * BigRational::from_integer(alpha.falling_factor(b));
                    Some((col_index[&q], v))
                })
                .collect();
            row.sort_by_key(|(j, _)| *j);
            row
        })
        .collect()
}

/// Clear denominators of a sparse rational row, keeping it sparse.
fn integer_row(row: &[(usize, BigRational)]) -> SparseRow {
    let mut lcm = BigInt::one();
    for (_, x) in row {
        lcm = lcm.lcm(x.denom());
    }
    row.iter().map(|(j, x)| (*j, x.numer() * (&lcm / x.denom()))).collect()
}

fn check_order(f: &Form, k: u32) -> Result<()> {
    f.ensure_analyzable()?;
    if k > f.degree() {
        return Err(Error::OutOfRange(format!("catalecticant order {k} exceeds degree {}", f.degree())));
    }
    Ok(())
}

/// Full catalecticant slice with kernel and basis.
pub fn catalecticant(f: &Form, k: u32) -> Result<CatalecticantSlice> {
    check_order(f, k)?;
    let n = f.nvars();
    let rows = monomials_of_degree(n, k);
    let cols = monomials_of_degree(n, f.degree() - k);
    let col_index: HashMap<Monomial, usize> = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let entries = slice_rows(f, &rows, &col_index);

    let mut ech = IncrementalEchelon::new(true);
    let mut basis_rows = Vec::new();
    let mut kernel_basis = Vec::new();
    for (i, row) in entries.iter().enumerate() {
        match ech.insert(integer_row(row)) {
            Insertion::Independent => basis_rows.push(i),
            Insertion::Dependent(rel) => {
                let rel = rel.expect("relations are tracked");
                kernel_basis.push(relation_to_op(f, &rows, i, &rel));
            }
        }
    }
    Ok(CatalecticantSlice { k, rank: basis_rows.len(), rows, cols, entries, basis_rows, kernel_basis })
}

/// Normalise the integer relation so the dependent monomial has coefficient 1.
fn relation_to_op(f: &Form, rows: &[Monomial], own: usize, rel: &SparseRow) -> DiffOp {
    let lead = rel.iter().find(|(i, _)| *i == own).map(|(_, c)| c.clone()).expect("own coefficient present");
    let poly = Poly::from_terms(
        f.nvars(),
        rel.iter().map(|(i, c)| (rows[*i].clone(), BigRational::new(c.clone(), lead.clone()))),
    );
    DiffOp::new(f.vars().clone(), poly).expect("kernel relation is homogeneous and nonzero")
}

/// `a_k` only, without tracking kernel relations.
pub fn catalecticant_rank(f: &Form, k: u32) -> Result<usize> {
    check_order(f, k)?;
    let n = f.nvars();
    let rows = monomials_of_degree(n, k);
    let cols = monomials_of_degree(n, f.degree() - k);
    let col_index: HashMap<Monomial, usize> = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut entries = slice_rows(f, &rows, &col_index);
    // Eliminate along the shorter side by transposing this slice's own matrix.
    if rows.len() > cols.len() {
        let mut t: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); cols.len()];
        for (i, row) in entries.into_iter().enumerate() {
            for (j, v) in row {
                t[j].push((i, v));
            }
        }
        entries = t;
    }
    let mut ech = IncrementalEchelon::new(false);
    for row in entries {
        if !row.is_empty() {
            ech.insert(integer_row(&row));
        }
    }
    Ok(ech.rank())
}

/// Monomial basis of `A_k`: the pivot rows of the degree-`k` catalecticant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisOfAk {
    pub k: u32,
    pub monomials: Vec<Monomial>,
}

pub fn basis_of_ak(f: &Form, k: u32) -> Result<BasisOfAk> {
    check_order(f, k)?;
    let n = f.nvars();
    let rows = monomials_of_degree(n, k);
    let cols = monomials_of_degree(n, f.degree() - k);
    let col_index: HashMap<Monomial, usize> = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = IncrementalEchelon::new(false);
    let mut monomials = Vec::new();
    for (alpha, row) in rows.iter().zip(slice_rows(f, &rows, &col_index)) {
        if row.is_empty() {
            continue;
        }
        if let Insertion::Independent = ech.insert(integer_row(&row)) {
            monomials.push(alpha.clone());
        }
    }
    Ok(BasisOfAk { k, monomials })
}

/// Hilbert function `(a_0, …, a_d)` of the apolar algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HilbertFunction(pub Vec<usize>);

impl HilbertFunction {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.len().saturating_sub(1) as u32
    }

    pub fn get(&self, k: u32) -> usize {
        self.0[k as usize]
    }

    pub fn is_symmetric(&self) -> bool {
        let v = &self.0;
        (0..v.len()).all(|i| v[i] == v[v.len() - 1 - i])
    }
}

/// Every slice computed independently; symmetry is a checked property.
pub fn hilbert(f: &Form) -> Result<HilbertFunction> {
    f.ensure_analyzable()?;
    (0..=f.degree()).map(|k| catalecticant_rank(f, k)).collect::<Result<Vec<_>>>().map(HilbertFunction)
}

/// `true` iff `a_j = binom(n + j, j)` for every `j ≤ k`. Requires `d ≥ 2k + 1`.
pub fn is_k_concise(f: &Form, k: u32) -> Result<bool> {
    f.ensure_analyzable()?;
    if 2 * k + 1 > f.degree() {
        return Err(Error::Precondition(format!(
            "{k}-conciseness is defined for degree at least {}, form has degree {}",
            2 * k + 1,
            f.degree()
        )));
    }
    for j in 0..=k {
        if catalecticant_rank(f, j)? != graded_dim(f.nvars(), j) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Same test against a precomputed Hilbert function.
pub fn is_k_concise_from(h: &HilbertFunction, nvars: usize, k: u32) -> Result<bool> {
    if 2 * k + 1 > h.degree() {
        return Err(Error::Precondition(format!(
            "{k}-conciseness is defined for degree at least {}, form has degree {}",
            2 * k + 1,
            h.degree()
        )));
    }
    Ok((0..=k).all(|j| h.get(j) == graded_dim(nvars, j)))
}

/// Largest `k` with `2k + 1 ≤ d` for which the form is `k`-concise (0 if not concise).
pub fn concise_ladder(h: &HilbertFunction, nvars: usize) -> u32 {
    let mut best = 0;
    let mut k = 1;
    while 2 * k < h.degree() {
        if is_k_concise_from(h, nvars, k).unwrap_or(false) {
            best = k;
            k += 1;
        } else {
            break;
        }
    }
    best
}

/// No valleys: non-decreasing from `a_1` up to some peak, then non-increasing.
pub fn is_unimodal(h: &HilbertFunction) -> bool {
    let v = h.values();
    if v.len() <= 2 {
        return true;
    }
    let tail = &v[1..];
    let mut i = 0;
    while i + 1 < tail.len() && tail[i] <= tail[i + 1] {
        i += 1;
    }
    while i + 1 < tail.len() && tail[i] >= tail[i + 1] {
        i += 1;
    }
    i + 1 == tail.len()
}
