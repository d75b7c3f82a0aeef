//! Exact elimination for matrices with polynomial entries.
//!
//! Rank over the rational function field is computed by fraction-free
//! elimination in `Q[x]` (every Bareiss division is an exact polynomial
//! division), so no multivariate gcd is ever needed. Kernel witnesses come
//! from fraction-free Gauss-Jordan on a maximal nonsingular minor and are
//! polynomial vectors, checked by exact multiplication before being returned.

use num_rational::BigRational;
use num_traits::One;

use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, nvars: usize, data: Vec<Poly>) -> Self {
        assert_eq!(data.len(), rows * cols);
        PolyMatrix { rows, cols, nvars, data }
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        PolyMatrix { rows: r, cols: c, nvars, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        PolyMatrix { rows: self.cols, cols: self.rows, nvars: self.nvars, data }
    }

    pub fn max_entry_degree(&self) -> u32 {
        self.data.iter().filter_map(Poly::total_degree).max().unwrap_or(0)
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.nvars);
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        acc = &acc + &(a * vj);
                    }
                }
                acc
            })
            .collect()
    }

    fn rows_vec(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }
}

/// Rank over `Q(x)` with the rows and columns of a maximal nonsingular minor.
#[derive(Clone, Debug)]
pub struct SymbolicRank {
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
}

/// Fraction-free elimination with complete pivoting. Pivots with the fewest
/// terms are preferred, which keeps structured (block-sparse) matrices cheap.
pub fn symbolic_rank(m: &PolyMatrix) -> SymbolicRank {
    let mut a = m.rows_vec();
    let mut row_ids: Vec<usize> = (0..m.rows).collect();
    let mut col_ids: Vec<usize> = (0..m.cols).collect();
    let mut prev = Poly::constant(m.nvars, BigRational::one());
    let mut k = 0;
    while k < m.rows.min(m.cols) {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                if !e.is_zero() && best.is_none_or(|(_, _, s)| e.len() < s) {
                    best = Some((i, j, e.len()));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(k, pi);
        row_ids.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        col_ids.swap(k, pj);

        let (head, tail) = a.split_at_mut(k + 1);
        let prow = &head[k];
        let pv = &prow[k];
        for row in tail.iter_mut() {
            let f = std::mem::replace(&mut row[k], Poly::zero(m.nvars));
            for j in (k + 1)..m.cols {
                let left = if row[j].is_zero() { Poly::zero(m.nvars) } else { pv * &row[j] };
                let right = if f.is_zero() || prow[j].is_zero() { Poly::zero(m.nvars) } else { &f * &prow[j] };
                let v = &left - &right;
                row[j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = pv.clone();
        k += 1;
    }
    let mut pivot_rows = row_ids[..k].to_vec();
    let mut pivot_cols = col_ids[..k].to_vec();
    pivot_rows.sort_unstable();
    pivot_cols.sort_unstable();
    SymbolicRank { rank: k, pivot_rows, pivot_cols }
}

/// Determinant of a square polynomial matrix.
pub fn det(m: &PolyMatrix) -> Poly {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return Poly::constant(m.nvars, BigRational::one());
    }
    let mut a = m.rows_vec();
    let mut prev = Poly::constant(m.nvars, BigRational::one());
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].len()) else {
            return Poly::zero(m.nvars);
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let prow = &head[k];
        let pv = &prow[k];
        for row in tail.iter_mut() {
            let f = std::mem::replace(&mut row[k], Poly::zero(m.nvars));
            for j in (k + 1)..n {
                let v = &(pv * &row[j]) - &(&f * &prow[j]);
                row[j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = pv.clone();
    }
    if negate {
        -&prev
    } else {
        prev
    }
}

/// A nonzero polynomial vector `v` with `m * v = 0`, or `None` when the
/// columns are independent over `Q(x)`.
pub fn right_kernel_witness(m: &PolyMatrix) -> Option<Vec<Poly>> {
    let sr = symbolic_rank(m);
    if sr.rank == m.cols {
        return None;
    }
    let free = (0..m.cols).find(|c| !sr.pivot_cols.contains(c)).expect("a free column exists");
    let r = sr.rank;
    // Augmented r x (r+1) system [M_IJ | M_I,free], solved fraction-free.
    let mut a: Vec<Vec<Poly>> = sr
        .pivot_rows
        .iter()
        .map(|&i| {
            let mut row: Vec<Poly> = sr.pivot_cols.iter().map(|&j| m.get(i, j).clone()).collect();
            row.push(m.get(i, free).clone());
            row
        })
        .collect();
    let mut prev = Poly::constant(m.nvars, BigRational::one());
    for k in 0..r {
        let p = (k..r).find(|&i| !a[i][k].is_zero()).expect("pivot minor is nonsingular");
        a.swap(k, p);
        let prow = a[k].clone();
        let pv = prow[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let f = std::mem::replace(&mut row[k], Poly::zero(m.nvars));
            for j in (k + 1)..=r {
                let v = &(&pv * &row[j]) - &(&f * &prow[j]);
                row[j] = v.exact_div(&prev).expect("fraction-free Gauss-Jordan division is exact");
            }
            if i < k {
                row[i] = pv.clone();
            }
        }
        prev = pv;
    }
    let mut v = vec![Poly::zero(m.nvars); m.cols];
    v[free] = if r == 0 { Poly::constant(m.nvars, BigRational::one()) } else { prev };
    for (t, &j) in sr.pivot_cols.iter().enumerate() {
        v[j] = -&a[t][r];
    }
    // Strip common rational content for readability.
    if let Some(c) = v.iter().find(|p| !p.is_zero()).map(|p| p.primitive_part().0) {
        let inv = c.recip();
        v = v.iter().map(|p| p.scale(&inv)).collect();
    }
    debug_assert!(m.mul_vec(&v).iter().all(Poly::is_zero));
    Some(v)
}
