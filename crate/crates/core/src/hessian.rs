//! Mixed Hessians `Hess^{(k,l)} = [α_i β_j (f)]`, their generic ranks and the
//! Hessian criteria for weak and strong Lefschetz elements.
//!
//! Rows and columns are indexed by the monomial bases of `A_k` and `A_l`
//! from [`crate::apolar::basis_of_ak`], so every entry is a plain derivative
//! of `f`, homogeneous of degree `d - k - l`.
//!
//! Generic rank is bracketed from both sides. Evaluation at integer points
//! (reduced modulo a 61-bit prime) gives a certified lower bound. An upper
//! bound comes either from exact elimination over `Q(x)`, which also yields a
//! polynomial kernel vector, or from the zero pattern: the term rank of the
//! Hessian of `f - h` plus the rank contributed by a remainder `h`. When the
//! bounds meet the rank is certified; otherwise the report is probabilistic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::apolar::{basis_of_ak, BasisOfAk};
use crate::error::{Error, Result};
use crate::linalg::{modp, rank_mod_p, term_rank, IncrementalEchelon, QMatrix, SparseRow};
use crate::poly::{monomials_of_degree, Form, LinearForm, Monomial, Poly, Vars};
use crate::symbolic::{self, PolyMatrix};

#[derive(Clone, Debug)]
pub struct MixedHessian {
    pub k: u32,
    pub l: u32,
    vars: Vars,
    source: Poly,
    pub row_basis: BasisOfAk,
    pub col_basis: BasisOfAk,
    entries: Vec<Vec<Poly>>,
    entry_degree: u32,
}

/// `op(f)` for a dual monomial `op`.
fn derive(f: &Poly, op: &Monomial) -> Poly {
    Poly::monomial(op.clone(), BigRational::one()).apply_to(f)
}

impl MixedHessian {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.col_basis.monomials.len()
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    pub fn entry_degree(&self) -> u32 {
        self.entry_degree
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows() == self.cols()
            && (0..self.rows()).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn to_poly_matrix(&self) -> PolyMatrix {
        PolyMatrix::from_rows(self.vars.len(), self.entries.clone())
    }

    pub fn evaluate(&self, point: &[BigRational]) -> QMatrix {
        QMatrix::from_rows(self.entries.iter().map(|row| row.iter().map(|p| p.eval(point)).collect()).collect())
    }

    /// Exact rank of the matrix evaluated at `point`.
    pub fn rank_at(&self, point: &[BigRational]) -> usize {
        self.evaluate(point).rank()
    }

    fn eval_mod_p(&self, point: &[u64]) -> Option<Vec<Vec<u64>>> {
        self.entries.iter().map(|row| row.iter().map(|p| p.eval_mod_p(point)).collect()).collect()
    }

    /// Nonzero pattern of the Hessian of `g` in this matrix's bases.
    fn pattern_of(&self, g: &Poly) -> Vec<Vec<bool>> {
        self.row_basis
            .monomials
            .iter()
            .map(|a| {
                self.col_basis
                    .monomials
                    .iter()
                    .map(|b| {
                        let m = a.mul(b);
                        g.terms().any(|(t, _)| m.divides(t))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn render_entry(&self, i: usize, j: usize) -> String {
        crate::parse::render(&self.entries[i][j], self.vars.names())
    }
}

/// Hessian of `f` in explicitly supplied bases.
pub fn mixed_hessian_in_bases(f: &Form, row_basis: BasisOfAk, col_basis: BasisOfAk) -> Result<MixedHessian> {
    let (k, l) = (row_basis.k, col_basis.k);
    if k + l > f.degree() {
        return Err(Error::OutOfRange(format!("mixed order ({k},{l}) exceeds degree {}", f.degree())));
    }
    for m in row_basis.monomials.iter().chain(&col_basis.monomials) {
        if m.nvars() != f.nvars() {
            return Err(Error::AmbientMismatch { left: m.nvars(), right: f.nvars() });
        }
    }
    let entries = row_basis
        .monomials
        .iter()
        .map(|a| col_basis.monomials.iter().map(|b| derive(f.poly(), &a.mul(b))).collect())
        .collect();
    Ok(MixedHessian {
        k,
        l,
        vars: f.vars().clone(),
        source: f.poly().clone(),
        entry_degree: f.degree() - k - l,
        row_basis,
        col_basis,
        entries,
    })
}

pub fn mixed_hessian(f: &Form, k: u32, l: u32) -> Result<MixedHessian> {
    f.ensure_analyzable()?;
    if k + l > f.degree() {
        return Err(Error::OutOfRange(format!("mixed order ({k},{l}) exceeds degree {}", f.degree())));
    }
    mixed_hessian_in_bases(f, basis_of_ak(f, k)?, basis_of_ak(f, l)?)
}

#[derive(Clone, Debug)]
pub struct RankPolicy {
    /// Largest matrix side handed to exact elimination over `Q(x)`.
    pub max_symbolic_dim: usize,
    pub max_symbolic_degree: u32,
    pub trials: u32,
    /// Evaluation points are drawn from `[-2^(bits-1), 2^(bits-1))`.
    pub window_bits: u32,
    pub seed: u64,
    /// Try to prove degeneracy when evaluation does not reach full rank.
    pub certify: bool,
}

impl Default for RankPolicy {
    fn default() -> Self {
        RankPolicy { max_symbolic_dim: 12, max_symbolic_degree: 12, trials: 8, window_bits: 16, seed: 0, certify: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certainty {
    CertifiedSymbolic,
    CertifiedStructural,
    Probabilistic,
}

impl Certainty {
    pub fn is_certified(self) -> bool {
        self != Certainty::Probabilistic
    }

    pub fn label(self) -> &'static str {
        match self {
            Certainty::CertifiedSymbolic => "certified-symbolic",
            Certainty::CertifiedStructural => "certified-structural",
            Certainty::Probabilistic => "probabilistic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelSide {
    /// `H v = 0`.
    Right,
    /// `v^T H = 0`.
    Left,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KernelWitness {
    pub side: KernelSide,
    #[serde(skip)]
    pub vector: Vec<Poly>,
    #[serde(rename = "entries")]
    pub rendered: Vec<String>,
}

/// Upper bound from the zero pattern: `term_rank(Hess(f - h)) + rank(Hess(h))`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StructuralWitness {
    pub term_rank: usize,
    /// Rows and columns of a zero block of the Hessian of `f - h`.
    pub zero_rows: Vec<String>,
    pub zero_cols: Vec<String>,
    /// The remainder `h`, if any, and a bound on its Hessian's rank.
    pub remainder: Option<String>,
    pub remainder_rank: usize,
    pub upper_bound: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankReport {
    pub rows: usize,
    pub cols: usize,
    pub generic_rank: usize,
    pub certainty: Certainty,
    #[serde(serialize_with = "crate::ser::opt_rationals")]
    pub witness_point: Option<Vec<BigRational>>,
    pub trials: u32,
    pub window_bits: u32,
    /// Schwartz-Zippel bound on the chance that the true rank is higher.
    pub failure_bound: Option<f64>,
    /// Certification was requested but the matrix exceeds the symbolic cap.
    pub cap_exceeded: bool,
    pub kernel_witness: Option<KernelWitness>,
    pub structural: Option<StructuralWitness>,
}

impl RankReport {
    pub fn is_full(&self) -> bool {
        self.generic_rank == self.rows.min(self.cols)
    }

    /// A degeneracy claim that may feed a certificate.
    pub fn certified_degenerate(&self) -> bool {
        !self.is_full() && self.certainty.is_certified()
    }
}

fn random_point(rng: &mut ChaCha8Rng, nvars: usize, bits: u32) -> Vec<i64> {
    let half = 1i64 << (bits.clamp(2, 62) - 1);
    (0..nvars).map(|_| rng.random_range(-half..half)).collect()
}

fn to_rationals(p: &[i64]) -> Vec<BigRational> {
    p.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

/// Rank of `h` evaluated at an integer point: modulo `p` when possible
/// (never above the rational rank), exact otherwise.
fn lower_rank_at(h: &MixedHessian, point: &[i64]) -> usize {
    let residues: Vec<u64> = point.iter().map(|&x| modp::from_int(&BigInt::from(x))).collect();
    match h.eval_mod_p(&residues) {
        Some(m) => rank_mod_p(&m, h.cols()),
        None => h.rank_at(&to_rationals(point)),
    }
}

/// `dim span{ op(g) : op ∈ ops }`.
pub(crate) fn span_rank(g: &Poly, ops: &[Monomial]) -> usize {
    let mut index = std::collections::HashMap::new();
    let mut ech = IncrementalEchelon::new(false);
    for op in ops {
        let p = derive(g, op);
        if p.is_zero() {
            continue;
        }
        let mut lcm = BigInt::one();
        for (_, c) in p.terms() {
            lcm = num_integer::Integer::lcm(&lcm, c.denom());
        }
        let mut row: SparseRow = p
            .terms()
            .map(|(m, c)| {
                let n = index.len();
                let j = *index.entry(m.clone()).or_insert(n);
                (j, c.numer() * (&lcm / c.denom()))
            })
            .collect();
        row.sort_by_key(|(j, _)| *j);
        ech.insert(row);
    }
    ech.rank()
}

fn structural_bound(h: &MixedHessian, remainder: Option<&Poly>) -> StructuralWitness {
    let g = match remainder {
        Some(r) => &h.source - r,
        None => h.source.clone(),
    };
    let pattern = h.pattern_of(&g);
    let tr = term_rank(h.rows(), h.cols(), |i, j| pattern[i][j]);
    let remainder_rank = remainder.map_or(0, |r| {
        span_rank(r, &h.row_basis.monomials).min(span_rank(r, &h.col_basis.monomials))
    });
    let duals = h.vars.dual_names();
    let name = |m: &Monomial| crate::parse::render(&Poly::monomial(m.clone(), BigRational::one()), &duals);
    StructuralWitness {
        term_rank: tr.term_rank,
        zero_rows: tr.zero_rows.iter().map(|&i| name(&h.row_basis.monomials[i])).collect(),
        zero_cols: tr.zero_cols.iter().map(|&j| name(&h.col_basis.monomials[j])).collect(),
        remainder: remainder.map(|r| crate::parse::render(r, h.vars.names())),
        remainder_rank,
        upper_bound: tr.term_rank + remainder_rank,
    }
}

fn kernel_witness(h: &MixedHessian, m: &PolyMatrix, rank: usize) -> Option<KernelWitness> {
    let (side, target) = if rank < m.cols() { (KernelSide::Right, m.clone()) } else { (KernelSide::Left, m.transpose()) };
    let v = symbolic::right_kernel_witness(&target)?;
    // Never hand out an unchecked witness.
    if !target.mul_vec(&v).iter().all(Poly::is_zero) {
        return None;
    }
    let rendered = v.iter().map(|p| crate::parse::render(p, h.vars.names())).collect();
    Some(KernelWitness { side, vector: v, rendered })
}

pub fn generic_rank(h: &MixedHessian, policy: &RankPolicy) -> RankReport {
    generic_rank_with_remainders(h, policy, &[])
}

/// Like [`generic_rank`], additionally trying each `remainder` as the `h` of
/// the structural bound `term_rank(Hess(f - h)) + rank(Hess(h))`.
pub fn generic_rank_with_remainders(h: &MixedHessian, policy: &RankPolicy, remainders: &[Poly]) -> RankReport {
    let (rows, cols) = (h.rows(), h.cols());
    let full = rows.min(cols);
    let mut report = RankReport {
        rows,
        cols,
        generic_rank: 0,
        certainty: Certainty::Probabilistic,
        witness_point: None,
        trials: 0,
        window_bits: policy.window_bits,
        failure_bound: None,
        cap_exceeded: false,
        kernel_witness: None,
        structural: None,
    };
    if full == 0 {
        report.certainty = Certainty::CertifiedSymbolic;
        return report;
    }
    if h.entry_degree == 0 {
        // Constant matrix: the exact rank is the generic rank.
        let point = vec![BigRational::zero(); h.vars.len()];
        report.generic_rank = h.rank_at(&point);
        report.certainty = Certainty::CertifiedSymbolic;
        if report.generic_rank < full && policy.certify {
            report.kernel_witness = kernel_witness(h, &h.to_poly_matrix(), report.generic_rank);
        }
        return report;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut best = 0;
    let mut best_point = None;
    for _ in 0..policy.trials.max(1) {
        let point = random_point(&mut rng, h.vars.len(), policy.window_bits);
        report.trials += 1;
        let r = lower_rank_at(h, &point);
        if r > best || best_point.is_none() {
            best = best.max(r);
            best_point = Some(point);
        }
        if best == full {
            break;
        }
    }
    report.generic_rank = best;
    report.witness_point = best_point.as_deref().map(to_rationals);
    if best == full {
        report.certainty = Certainty::CertifiedSymbolic;
        return report;
    }

    let within_cap = rows.max(cols) <= policy.max_symbolic_dim && h.entry_degree <= policy.max_symbolic_degree;
    if policy.certify && within_cap {
        let m = h.to_poly_matrix();
        let sr = symbolic::symbolic_rank(&m);
        debug_assert!(sr.rank >= best);
        report.generic_rank = sr.rank;
        report.certainty = Certainty::CertifiedSymbolic;
        if sr.rank < full {
            report.kernel_witness = kernel_witness(h, &m, sr.rank);
        }
        return report;
    }

    let mut candidates = vec![structural_bound(h, None)];
    candidates.extend(remainders.iter().map(|r| structural_bound(h, Some(r))));
    let tightest = candidates.into_iter().min_by_key(|s| s.upper_bound).expect("at least one candidate");
    if tightest.upper_bound == best {
        report.certainty = Certainty::CertifiedStructural;
        report.structural = Some(tightest);
        return report;
    }

    report.cap_exceeded = policy.certify && !within_cap;
    let degree_bound = (best as f64 + 1.0) * f64::from(h.entry_degree);
    let per_trial = (degree_bound / 2f64.powi(policy.window_bits as i32)).min(1.0);
    report.failure_bound = Some(per_trial.powi(report.trials as i32));
    report
}

/// `hess^k_f = det Hess^{(k,k)}`; `None` is the zero marker.
pub fn hess_det(f: &Form, k: u32, cap: usize) -> Result<Option<Form>> {
    f.ensure_analyzable()?;
    if 2 * k > f.degree() {
        return Err(Error::OutOfRange(format!("hess^{k} needs 2k <= d, degree is {}", f.degree())));
    }
    let h = mixed_hessian(f, k, k)?;
    if h.rows() > cap {
        return Err(Error::OverSymbolicCap { size: h.rows(), cap });
    }
    let det = symbolic::det(&h.to_poly_matrix());
    if det.is_zero() {
        return Ok(None);
    }
    Form::new(f.vars().clone(), det).map(Some)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LefschetzProperty {
    #[serde(rename = "WLP")]
    Weak,
    #[serde(rename = "SLP")]
    Strong,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    Undetermined,
}

/// One map `×L^{l-k}: A_k → A_l` checked through `Hess^{(d-l,k)}`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeCheck {
    pub from: u32,
    pub to: u32,
    pub hessian: (u32, u32),
    pub required: usize,
    pub achieved: usize,
    pub certainty: Certainty,
}

impl DegreeCheck {
    pub fn passed(&self) -> bool {
        self.achieved >= self.required
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LefschetzReport {
    pub property: LefschetzProperty,
    #[serde(serialize_with = "crate::ser::opt_rationals")]
    pub element: Option<Vec<BigRational>>,
    pub verdict: Verdict,
    pub per_degree_ranks: Vec<DegreeCheck>,
    pub samples: u32,
}

/// `(k, l)` pairs of the maps the criterion inspects.
fn criterion_maps(d: u32, property: LefschetzProperty) -> Vec<(u32, u32)> {
    match property {
        LefschetzProperty::Strong => (0..=d / 2).map(|k| (k, d - k)).collect(),
        LefschetzProperty::Weak if d % 2 == 1 => vec![(d / 2, d / 2 + 1)],
        LefschetzProperty::Weak => vec![(d / 2 - 1, d / 2)],
    }
}

/// Rank modulo a prime at an integral point; never above the exact rank.
fn modular_rank_at(h: &MixedHessian, point: &[BigRational]) -> usize {
    let residues: Option<Vec<u64>> = point.iter().map(modp::from_rational).collect();
    match residues.and_then(|r| h.eval_mod_p(&r)) {
        Some(m) => rank_mod_p(&m, h.cols()),
        None => h.rank_at(point),
    }
}

/// Exact rank at `point`, skipping the rational elimination when a modular
/// image already has full rank.
fn rank_at_point(h: &MixedHessian, point: &[BigRational]) -> usize {
    let full = h.rows().min(h.cols());
    match modular_rank_at(h, point) {
        r if r == full => full,
        _ => h.rank_at(point),
    }
}

/// Ranks of the criterion Hessians at `point`; `rank` is either the exact
/// rank or a lower bound that is exact whenever it is full.
fn check_element(
    hessians: &[MixedHessian],
    maps: &[(u32, u32)],
    point: &[BigRational],
    rank: fn(&MixedHessian, &[BigRational]) -> usize,
) -> Vec<DegreeCheck> {
    hessians
        .iter()
        .zip(maps)
        .map(|(h, &(k, l))| DegreeCheck {
            from: k,
            to: l,
            hessian: (h.k, h.l),
            required: h.rows().min(h.cols()),
            achieved: rank(h, point),
            certainty: Certainty::CertifiedSymbolic,
        })
        .collect()
}

fn criterion_hessians(f: &Form, maps: &[(u32, u32)]) -> Result<Vec<MixedHessian>> {
    maps.iter().map(|&(k, l)| mixed_hessian(f, f.degree() - l, k)).collect()
}

/// Decide whether `L` is a weak or strong Lefschetz element of `A(f)` by
/// evaluating the relevant mixed Hessians at the coefficients of `L`.
pub fn lefschetz_check(f: &Form, l: &LinearForm, property: LefschetzProperty) -> Result<LefschetzReport> {
    f.ensure_analyzable()?;
    if l.nvars() != f.nvars() {
        return Err(Error::AmbientMismatch { left: l.nvars(), right: f.nvars() });
    }
    if l.is_zero() {
        return Err(Error::Precondition("the linear form must be nonzero".into()));
    }
    let maps = criterion_maps(f.degree(), property);
    let hessians = criterion_hessians(f, &maps)?;
    let checks = check_element(&hessians, &maps, l.coeffs(), rank_at_point);
    let verdict = if checks.iter().all(DegreeCheck::passed) { Verdict::Holds } else { Verdict::Fails };
    Ok(LefschetzReport {
        property,
        element: Some(l.coeffs().to_vec()),
        verdict,
        per_degree_ranks: checks,
        samples: 1,
    })
}

/// Whether the algebra has the property: holds if a sampled `L` passes,
/// fails only when some required Hessian is certifiably degenerate.
pub fn lefschetz_generic(f: &Form, property: LefschetzProperty, policy: &RankPolicy) -> Result<LefschetzReport> {
    f.ensure_analyzable()?;
    let maps = criterion_maps(f.degree(), property);
    let hessians = criterion_hessians(f, &maps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut last = Vec::new();
    let mut samples = 0;
    for _ in 0..policy.trials.max(1) {
        let point = to_rationals(&random_point(&mut rng, f.nvars(), policy.window_bits));
        samples += 1;
        let checks = check_element(&hessians, &maps, &point, modular_rank_at);
        if checks.iter().all(DegreeCheck::passed) {
            return Ok(LefschetzReport {
                property,
                element: Some(point),
                verdict: Verdict::Holds,
                per_degree_ranks: checks,
                samples,
            });
        }
        last = checks;
    }
    let mut verdict = Verdict::Undetermined;
    let mut checks = Vec::with_capacity(hessians.len());
    for (h, old) in hessians.iter().zip(last) {
        let r = generic_rank(h, policy);
        if r.certified_degenerate() {
            verdict = Verdict::Fails;
        }
        checks.push(DegreeCheck { achieved: r.generic_rank, certainty: r.certainty, ..old });
    }
    Ok(LefschetzReport { property, element: None, verdict, per_degree_ranks: checks, samples })
}

/// Matrix of `×L^{l-k}: A_k → A_l` in the monomial bases of `A_k` and `A_l`,
/// built by reducing `L^{l-k} α` against the slice of degree `l` (columns are
/// the coordinates of the images).
pub fn multiplication_map(f: &Form, l_form: &LinearForm, k: u32, l: u32) -> Result<QMatrix> {
    f.ensure_analyzable()?;
    if !(k < l && l <= f.degree()) {
        return Err(Error::OutOfRange(format!("need k < l <= d, got k={k}, l={l}, d={}", f.degree())));
    }
    if l_form.nvars() != f.nvars() {
        return Err(Error::AmbientMismatch { left: l_form.nvars(), right: f.nvars() });
    }
    let n = f.nvars();
    let source = basis_of_ak(f, k)?;
    let target = basis_of_ak(f, l)?;
    let cols = monomials_of_degree(n, f.degree() - l);
    let index: std::collections::HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let coords = |p: &Poly| -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); cols.len()];
        for (m, c) in p.terms() {
            v[index[m]] = c.clone();
        }
        v
    };
    // Augmented system [β_1(f) … β_{a_l}(f) | (L^{l-k} α_1)(f) …].
    let lpow = l_form.power(l - k);
    let a_l = target.monomials.len();
    let mut aug = QMatrix::zeros(cols.len(), a_l + source.monomials.len());
    for (j, b) in target.monomials.iter().enumerate() {
        for (i, x) in coords(&derive(f.poly(), b)).into_iter().enumerate() {
            aug.set(i, j, x);
        }
    }
    for (j, a) in source.monomials.iter().enumerate() {
        let op = lpow.mul_monomial(a, &BigRational::one());
        for (i, x) in coords(&op.apply_to(f.poly())).into_iter().enumerate() {
            aug.set(i, a_l + j, x);
        }
    }
    let (r, pivots) = aug.rref();
    debug_assert!(pivots.iter().take(a_l).copied().eq(0..a_l), "target basis rows are independent");
    let mut out = QMatrix::zeros(a_l, source.monomials.len());
    for i in 0..a_l {
        for j in 0..source.monomials.len() {
            out.set(i, j, r.get(i, a_l + j).clone());
        }
    }
    Ok(out)
}

pub fn multiplication_map_rank(f: &Form, l_form: &LinearForm, k: u32, l: u32) -> Result<usize> {
    Ok(multiplication_map(f, l_form, k, l)?.rank())
}
