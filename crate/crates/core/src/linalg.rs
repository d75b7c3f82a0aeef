//! Exact linear algebra over the rationals.
//!
//! Ranks and determinants go through fraction-free (Bareiss) elimination on
//! integer rows; kernels and solves use rational Gauss-Jordan. The
//! [`IncrementalEchelon`] builder is the sparse workhorse behind catalecticant
//! slices, and [`term_rank`] gives the structural rank bound used by
//! zero-pattern certificates.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// Rows scaled to primitive integer vectors.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| integerize(self.row(i)).1).collect()
    }

    pub fn rank(&self) -> usize {
        bareiss(self.integer_rows(), self.cols).rank
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return BigRational::one();
        }
        let mut scale = BigRational::one();
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let (s, r) = integerize(self.row(i));
            scale *= s;
            rows.push(r);
        }
        let out = bareiss(rows, self.cols);
        if out.rank < self.rows {
            return BigRational::zero();
        }
        let d = BigRational::from_integer(out.last_pivot);
        let d = if out.swaps % 2 == 1 { -d } else { d };
        d / scale
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of `{v : self * v = 0}` in reduced form (one free column set to 1 per vector).
    pub fn right_kernel(&self) -> Vec<Vec<BigRational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[fc] = BigRational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, fc).clone();
                }
                v
            })
            .collect()
    }

    /// Unique solution of `self * x = b`, if one exists (columns independent).
    pub fn solve_unique(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() != self.cols || pivots.contains(&self.cols) {
            return None;
        }
        Some((0..self.cols).map(|i| r.get(i, self.cols).clone()).collect())
    }
}

/// Multiply a rational vector by the lcm of its denominators and divide by
/// the gcd of the numerators. Returns `(s, v)` with `row = v / s`.
pub fn integerize(row: &[BigRational]) -> (BigRational, Vec<BigInt>) {
    let mut lcm = BigInt::one();
    for x in row {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return (BigRational::from_integer(lcm), ints);
    }
    let ints = ints.into_iter().map(|x| x / &g).collect();
    (BigRational::new(lcm, g), ints)
}

pub(crate) struct BareissOutcome {
    pub rank: usize,
    pub last_pivot: BigInt,
    pub swaps: usize,
}

/// Fraction-free forward elimination. Columns without a usable pivot are
/// skipped, which keeps every division exact.
pub(crate) fn bareiss(mut a: Vec<Vec<BigInt>>, ncols: usize) -> BareissOutcome {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut swaps = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // Prefer the smallest nonzero entry to keep intermediate sizes down.
        let Some(p) = (r..nrows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].bits())
        else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pv = &pivot_row[c];
        for row in tail.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            for j in (c + 1)..ncols {
                let v = pv * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = pv.clone();
        r += 1;
    }
    BareissOutcome { rank: r, last_pivot: prev, swaps }
}

/// Sparse integer row: `(column, value)` pairs sorted by column, no zeros.
pub type SparseRow = Vec<(usize, BigInt)>;

/// `a*x - b*y` on sparse rows.
fn sparse_lincomb(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn content(rows: &[&SparseRow]) -> BigInt {
    let mut g = BigInt::zero();
    for r in rows {
        for (_, v) in r.iter() {
            g = g.gcd(v);
            if g.is_one() {
                return g;
            }
        }
    }
    g
}

fn divide_row(r: &mut SparseRow, g: &BigInt) {
    for (_, v) in r.iter_mut() {
        *v /= g;
    }
}

/// Outcome of inserting a row into an [`IncrementalEchelon`].
#[derive(Debug)]
pub enum Insertion {
    /// The row extended the span; its leading column became a pivot.
    Independent,
    /// The row is a combination of earlier independent rows. When tracking is
    /// enabled, the integer relation `Σ c_i · row_i = 0` over the original
    /// row indices is returned (the inserted row has a nonzero coefficient).
    Dependent(Option<SparseRow>),
}

/// Row echelon form built one row at a time, fraction-free with content
/// removal. Inserting rows in a fixed order yields the greedy
/// (lexicographically first) maximal independent set of rows.
pub struct IncrementalEchelon {
    track: bool,
    pivot_of_col: HashMap<usize, usize>,
    rows: Vec<SparseRow>,
    combos: Vec<SparseRow>,
    inserted: usize,
}

impl IncrementalEchelon {
    pub fn new(track_relations: bool) -> Self {
        IncrementalEchelon {
            track: track_relations,
            pivot_of_col: HashMap::new(),
            rows: Vec::new(),
            combos: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, row: SparseRow) -> Insertion {
        let idx = self.inserted;
        self.inserted += 1;
        let mut v = row;
        let mut combo: SparseRow = if self.track { vec![(idx, BigInt::one())] } else { Vec::new() };
        // Eliminate pivot columns in increasing order; echelon rows only hold
        // entries at or after their own pivot, so this terminates.
        let mut cursor = 0usize;
        loop {
            let next = v.iter().skip_while(|(c, _)| *c < cursor).find(|(c, _)| self.pivot_of_col.contains_key(c));
            let Some((c, vc)) = next.map(|(c, vc)| (*c, vc.clone())) else { break };
            let p = self.pivot_of_col[&c];
            let prow = &self.rows[p];
            let pv = prow[0].1.clone();
            debug_assert_eq!(prow[0].0, c);
            v = sparse_lincomb(&pv, &v, &vc, prow);
            if self.track {
                combo = sparse_lincomb(&pv, &combo, &vc, &self.combos[p]);
            }
            let g = if self.track { content(&[&v, &combo]) } else { content(&[&v]) };
            if !g.is_zero() && !g.is_one() {
                divide_row(&mut v, &g);
                divide_row(&mut combo, &g);
            }
            cursor = c + 1;
        }
        if v.is_empty() {
            return Insertion::Dependent(self.track.then_some(combo));
        }
        // Normalise sign so pivots are positive.
        if v[0].1.is_negative() {
            for (_, x) in v.iter_mut() {
                *x = -std::mem::take(x);
            }
            for (_, x) in combo.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        let lead = v[0].0;
        self.pivot_of_col.insert(lead, self.rows.len());
        self.rows.push(v);
        self.combos.push(combo);
        Insertion::Independent
    }
}

/// Largest bipartite matching on the nonzero pattern together with a König
/// zero block: rows `zero_rows` × cols `zero_cols` are all structurally zero
/// and `zero_rows.len() + zero_cols.len() == rows + cols - term_rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermRank {
    pub term_rank: usize,
    pub zero_rows: Vec<usize>,
    pub zero_cols: Vec<usize>,
}

pub fn term_rank(rows: usize, cols: usize, nonzero: impl Fn(usize, usize) -> bool) -> TermRank {
    let adj: Vec<Vec<usize>> = (0..rows).map(|i| (0..cols).filter(|&j| nonzero(i, j)).collect()).collect();
    let mut match_col: Vec<Option<usize>> = vec![None; cols];
    let mut match_row: Vec<Option<usize>> = vec![None; rows];

    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        match_col: &mut [Option<usize>],
        match_row: &mut [Option<usize>],
    ) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if match_col[j].is_none() || augment(match_col[j].unwrap(), adj, seen, match_col, match_row) {
                match_col[j] = Some(i);
                match_row[i] = Some(j);
                return true;
            }
        }
        false
    }

    let mut size = 0;
    for i in 0..rows {
        let mut seen = vec![false; cols];
        if augment(i, &adj, &mut seen, &mut match_col, &mut match_row) {
            size += 1;
        }
    }

    // Alternating reachability from unmatched rows gives the König cover.
    let mut row_reach = vec![false; rows];
    let mut col_reach = vec![false; cols];
    let mut stack: Vec<usize> = (0..rows).filter(|&i| match_row[i].is_none()).collect();
    for &i in &stack {
        row_reach[i] = true;
    }
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !col_reach[j] {
                col_reach[j] = true;
                if let Some(i2) = match_col[j] {
                    if !row_reach[i2] {
                        row_reach[i2] = true;
                        stack.push(i2);
                    }
                }
            }
        }
    }
    TermRank {
        term_rank: size,
        zero_rows: (0..rows).filter(|&i| row_reach[i]).collect(),
        zero_cols: (0..cols).filter(|&j| !col_reach[j]).collect(),
    }
}

/// Rank modulo the Mersenne prime `2^61 - 1`. Never exceeds the rank over
/// the rationals, so it is a certified lower bound.
pub fn rank_mod_p(rows: &[Vec<u64>], ncols: usize) -> usize {
    let mut a: Vec<Vec<u64>> = rows.to_vec();
    let n = a.len();
    let mut r = 0;
    for c in 0..ncols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| a[i][c] != 0) else { continue };
        a.swap(p, r);
        let inv = modp::inv(a[r][c]);
        for j in c..ncols {
            a[r][j] = modp::mul(a[r][j], inv);
        }
        for i in (r + 1)..n {
            let f = a[i][c];
            if f == 0 {
                continue;
            }
            for j in c..ncols {
                a[i][j] = modp::sub(a[i][j], modp::mul(f, a[r][j]));
            }
        }
        r += 1;
    }
    r
}

pub mod modp {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{ToPrimitive, Zero};

    pub const P: u64 = (1u64 << 61) - 1;

    pub fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    pub fn add(a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= P { s - P } else { s }
    }

    pub fn sub(a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { a + P - b }
    }

    pub fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }

    pub fn from_int(x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(P)).to_u64().expect("reduced residue fits")
    }

    /// `None` when the denominator vanishes modulo `P`.
    pub fn from_rational(x: &BigRational) -> Option<u64> {
        let d = from_int(x.denom());
        if d.is_zero() {
            return None;
        }
        Some(mul(from_int(x.numer()), inv(d)))
    }
}
