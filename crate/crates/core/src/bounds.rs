//! Border rank upper bounds, cactus rank lower bounds and wild certificates.
//!
//! A form is certified wild when some border rank upper bound `b` and some
//! cactus rank lower bound `cr(f) > v` satisfy `b <= v`. Upper bounds come
//! from bi-homogeneous structure (`k(d+2)` for bidegree `(k, d-k)` in two
//! `u`-variables), monomials, explicit power sums, generic rank, and sums of
//! these over a split of `f`. Lower bounds `cr(f) > binom(n+k, k)` need a
//! `k`-concise form and a certified degenerate Hessian: either the classical
//! Hessian vanishes, or the Hilbert function is unimodal and some mixed
//! Hessian `Hess^{(l,s)}` with `l <= k <= s`, `s + l <= d` is degenerate.

use std::collections::BTreeMap;

use num_integer::binomial;
use num_rational::BigRational;
use serde::Serialize;

use crate::apolar::{graded_dim, hilbert, is_k_concise_from, is_unimodal, HilbertFunction};
use crate::error::{Error, Result};
use crate::hessian::{generic_rank_with_remainders, mixed_hessian, Certainty, MixedHessian, RankPolicy, RankReport};
use crate::linalg::QMatrix;
use crate::poly::{bigrade, Bidegree, Form, LinearForm, Monomial, Partition, Poly};
use crate::powersum::{verify_decomposition, PowerSumDecomposition};

pub const CERTIFICATE_SCHEMA: &str = "apolarity.wild-certificate/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Bihomogeneous,
    Monomial,
    ExplicitDecomposition,
    SummandAdditivity,
    AhGeneric,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BorderBound {
    pub value: usize,
    pub provenance: Provenance,
    /// The summand this bound applies to, when it is part of a split.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub part: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bidegree: Option<Bidegree>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<BorderBound>,
}

impl BorderBound {
    fn leaf(value: usize, provenance: Provenance) -> Self {
        BorderBound { value, provenance, part: None, bidegree: None, details: Vec::new() }
    }

    fn with_part(mut self, part: String) -> Self {
        self.part = Some(part);
        self
    }
}

/// `k(d+2)` for a form of bidegree `(k, d-k)` whose `u`-block has two variables.
pub fn border_bound_bihom(f: &Form, partition: &Partition) -> Result<BorderBound> {
    let bd = bigrade(f, partition)?;
    bihom_bound_for(bd, partition)
}

fn bihom_bound_for(bd: Bidegree, partition: &Partition) -> Result<BorderBound> {
    if partition.u_block().len() != 2 {
        return Err(Error::Precondition(format!(
            "the bi-homogeneous bound needs exactly two u-variables, got {}",
            partition.u_block().len()
        )));
    }
    let (k, d) = (bd.x, bd.x + bd.u);
    if !(1 <= k && k <= d - k) {
        return Err(Error::Precondition(format!("bidegree ({k},{}) needs 1 <= k <= d - k", bd.u)));
    }
    let mut b = BorderBound::leaf((k * (d + 2)) as usize, Provenance::Bihomogeneous);
    b.bidegree = Some(bd);
    Ok(b)
}

/// `Π (e_i + 1)` over all exponents but one copy of the largest.
pub fn border_bound_monomial(m: &Monomial) -> Result<BorderBound> {
    if m.degree() == 0 {
        return Err(Error::Precondition("the constant monomial has no border rank bound".into()));
    }
    let mut e: Vec<u32> = m.exps().to_vec();
    e.sort_unstable_by(|a, b| b.cmp(a));
    let value = e[1..].iter().map(|&x| x as usize + 1).product();
    Ok(BorderBound::leaf(value, Provenance::Monomial))
}

/// Length of a verified power-sum decomposition.
pub fn border_bound_decomposition(dec: &PowerSumDecomposition) -> Result<BorderBound> {
    if !verify_decomposition(dec) {
        return Err(Error::PartsMismatch);
    }
    Ok(BorderBound::leaf(dec.len(), Provenance::ExplicitDecomposition))
}

/// Subadditivity: the parts must sum to `target` exactly.
pub fn border_bound_additive(target: &Form, parts: Vec<(Poly, BorderBound)>) -> Result<BorderBound> {
    if parts.is_empty() {
        return Err(Error::PartsMismatch);
    }
    let sum = parts.iter().fold(Poly::zero(target.nvars()), |acc, (p, _)| &acc + p);
    if &sum != target.poly() {
        return Err(Error::PartsMismatch);
    }
    if parts.len() == 1 {
        return Ok(parts.into_iter().next().unwrap().1);
    }
    let names = target.vars().names();
    let details: Vec<BorderBound> = parts
        .into_iter()
        .map(|(p, b)| if b.part.is_some() { b } else { b.with_part(crate::parse::render(&p, names)) })
        .collect();
    let value = details.iter().map(|b| b.value).sum();
    Ok(BorderBound { value, provenance: Provenance::SummandAdditivity, part: None, bidegree: None, details })
}

/// Waring rank of a generic form of degree `d` in `n + 1` variables.
pub fn ah_generic_rank(n: u32, d: u32) -> Result<usize> {
    if n < 1 || d < 2 {
        return Err(Error::OutOfRange(format!("need n >= 1 and d >= 2, got ({n},{d})")));
    }
    if d == 2 {
        return Ok(n as usize + 1);
    }
    let dim: usize = binomial((n + d) as usize, d as usize);
    let base = dim.div_ceil(n as usize + 1);
    Ok(match (n, d) {
        (2, 4) | (3, 4) | (4, 3) | (4, 4) => base + 1,
        _ => base,
    })
}

/// Evidence that `hess^k_f ≡ 0` from a short separable expansion being
/// impossible: `f = Σ f_i(x) g_i(u)` needs `s` terms, more than the
/// dimension `binom(m+k-1, k)` allows for a nonvanishing `k`-th Hessian.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GnpCertificate {
    pub k: u32,
    pub bidegree: Bidegree,
    pub slice_rank: usize,
    pub u_count: usize,
    pub threshold: usize,
}

/// Rank of the matrix of coefficients indexed by (x-monomial, u-monomial).
pub fn bigraded_slice_rank(f: &Form, partition: &Partition) -> usize {
    let mut xs: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut us: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut entries = Vec::new();
    for (m, c) in f.poly().terms() {
        let xe: Vec<u32> = partition.x_block().iter().map(|&i| m.exps()[i]).collect();
        let ue: Vec<u32> = partition.u_block().iter().map(|&i| m.exps()[i]).collect();
        let n = xs.len();
        let i = *xs.entry(xe).or_insert(n);
        let n = us.len();
        let j = *us.entry(ue).or_insert(n);
        entries.push((i, j, c.clone()));
    }
    let mut q = QMatrix::zeros(xs.len(), us.len());
    for (i, j, c) in entries {
        q.set(i, j, c);
    }
    q.rank()
}

/// Applies to a form of bidegree `(k, e)` with `k < e`, for its `k`-th Hessian.
pub fn gnp_vanishing(f: &Form, partition: &Partition, k: u32) -> Result<Option<GnpCertificate>> {
    let bd = bigrade(f, partition)?;
    if k != bd.x || bd.x >= bd.u {
        return Err(Error::Precondition(format!(
            "the separable-length criterion needs k equal to the x-degree and below the u-degree; got k={k}, bidegree ({},{})",
            bd.x, bd.u
        )));
    }
    let m = partition.u_block().len();
    if m == 0 {
        return Ok(None);
    }
    let threshold = binomial(m + k as usize - 1, k as usize);
    let s = bigraded_slice_rank(f, partition);
    Ok((s > threshold).then_some(GnpCertificate { k, bidegree: bd, slice_rank: s, u_count: m, threshold }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckVerdict {
    Passed,
    Failed,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckCertainty {
    /// Decided by exact linear algebra on catalecticants.
    Exact,
    CertifiedSymbolic,
    CertifiedStructural,
    Probabilistic,
}

impl From<Certainty> for CheckCertainty {
    fn from(c: Certainty) -> Self {
        match c {
            Certainty::CertifiedSymbolic => CheckCertainty::CertifiedSymbolic,
            Certainty::CertifiedStructural => CheckCertainty::CertifiedStructural,
            Certainty::Probabilistic => CheckCertainty::Probabilistic,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HypothesisCheck {
    pub name: String,
    pub verdict: CheckVerdict,
    pub certainty: CheckCertainty,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl HypothesisCheck {
    fn exact(name: &str, ok: bool, detail: Option<String>) -> Self {
        HypothesisCheck {
            name: name.into(),
            verdict: if ok { CheckVerdict::Passed } else { CheckVerdict::Failed },
            certainty: CheckCertainty::Exact,
            detail,
        }
    }

    pub fn is_certified_pass(&self) -> bool {
        self.verdict == CheckVerdict::Passed && self.certainty != CheckCertainty::Probabilistic
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CactusRoute {
    /// `k`-concise with vanishing classical Hessian.
    VanishingHessian,
    /// `k`-concise, unimodal, with a degenerate mixed Hessian `Hess^{(l,s)}`.
    DegenerateMixedHessian,
}

/// `cr(f) > value` when every check is a certified pass.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CactusLowerBound {
    pub value: usize,
    pub k: u32,
    pub route: CactusRoute,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<(u32, u32)>,
    pub checks: Vec<HypothesisCheck>,
    pub valid: bool,
}

impl CactusLowerBound {
    fn assemble(value: usize, k: u32, route: CactusRoute, orders: Option<(u32, u32)>, checks: Vec<HypothesisCheck>) -> Self {
        let valid = checks.iter().all(HypothesisCheck::is_certified_pass);
        CactusLowerBound { value, k, route, orders, checks, valid }
    }
}

/// Extra knowledge about `f` and the budgets used while certifying.
#[derive(Clone, Debug)]
pub struct Strategy {
    pub policy: RankPolicy,
    /// Bi-grading to use; when absent every choice of two `u`-variables is tried.
    pub partition: Option<Partition>,
    /// Known power-sum summands `c l^d` of `f` (not necessarily all of `f`).
    pub power_parts: Vec<(BigRational, LinearForm)>,
    /// A full decomposition of `f`, if one is known.
    pub decomposition: Option<PowerSumDecomposition>,
    /// Range of `k` searched for cactus bounds; defaults to `1..=d/2`.
    pub k_range: Option<(u32, u32)>,
    /// Skip `k` whose space `Q_k` is larger than this.
    pub max_slice_dim: usize,
    /// A claimed polynomial vector `v` with `Hess^{(1,1)} v = 0`, checked exactly.
    pub hessian_kernel_witness: Option<Vec<Poly>>,
    /// Remarks copied into the certificate.
    pub notes: Vec<String>,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            policy: RankPolicy::default(),
            partition: None,
            power_parts: Vec::new(),
            decomposition: None,
            k_range: None,
            max_slice_dim: 400,
            hessian_kernel_witness: None,
            notes: Vec::new(),
        }
    }
}

/// Remainders `h` offered to the structural rank bound: the known power sum
/// and each bidegree class of `f`.
fn remainder_candidates(f: &Form, strategy: &Strategy) -> Vec<Poly> {
    let n = f.nvars();
    let mut out = Vec::new();
    if !strategy.power_parts.is_empty() {
        let d = f.degree();
        let h = strategy.power_parts.iter().fold(Poly::zero(n), |acc, (c, l)| &acc + &l.power(d).scale(c));
        if !h.is_zero() {
            out.push(h);
        }
    }
    if let Some(p) = &strategy.partition {
        let classes = bidegree_classes(f.poly(), p);
        if classes.len() > 1 {
            out.extend(classes.into_values());
        }
    }
    out
}

fn bidegree_classes(p: &Poly, partition: &Partition) -> BTreeMap<(u32, u32), Poly> {
    let mut classes: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let bd = partition.bidegree_of(m);
        classes.entry((bd.x, bd.u)).or_insert_with(|| Poly::zero(p.nvars())).add_term(m.clone(), c.clone());
    }
    classes
}

/// Exact check of a claimed kernel vector.
pub fn verify_kernel_witness(h: &MixedHessian, v: &[Poly]) -> bool {
    v.len() == h.cols()
        && v.iter().any(|p| !p.is_zero())
        && h.to_poly_matrix().mul_vec(v).iter().all(Poly::is_zero)
}

/// Cached Hessian rank reports keyed by mixed order.
struct HessianCache<'a> {
    f: &'a Form,
    strategy: &'a Strategy,
    remainders: Vec<Poly>,
    reports: BTreeMap<(u32, u32), (MixedHessian, RankReport)>,
}

impl<'a> HessianCache<'a> {
    fn new(f: &'a Form, strategy: &'a Strategy) -> Self {
        HessianCache { f, strategy, remainders: remainder_candidates(f, strategy), reports: BTreeMap::new() }
    }

    fn get(&mut self, k: u32, l: u32) -> Result<&(MixedHessian, RankReport)> {
        if !self.reports.contains_key(&(k, l)) {
            let h = mixed_hessian(self.f, k, l)?;
            let r = generic_rank_with_remainders(&h, &self.strategy.policy, &self.remainders);
            self.reports.insert((k, l), (h, r));
        }
        Ok(&self.reports[&(k, l)])
    }
}

/// Generic rank of `Hess^{(k,l)}` using the structure recorded in `strategy`.
pub fn hessian_rank(f: &Form, k: u32, l: u32, strategy: &Strategy) -> Result<(MixedHessian, RankReport)> {
    let h = mixed_hessian(f, k, l)?;
    let r = generic_rank_with_remainders(&h, &strategy.policy, &remainder_candidates(f, strategy));
    Ok((h, r))
}

fn degeneracy_check(name: String, report: &RankReport) -> HypothesisCheck {
    let full = report.rows.min(report.cols);
    let detail = Some(format!("generic rank {} of {}x{}", report.generic_rank, report.rows, report.cols));
    let (verdict, certainty) = if report.generic_rank < full {
        if report.certainty.is_certified() {
            (CheckVerdict::Passed, report.certainty.into())
        } else {
            (CheckVerdict::Undetermined, CheckCertainty::Probabilistic)
        }
    } else {
        // Full rank at an evaluation point is a proof of nondegeneracy.
        (CheckVerdict::Failed, report.certainty.into())
    };
    HypothesisCheck { name, verdict, certainty, detail }
}

/// Try the separable-length criterion for `hess^k`, if the form is bi-graded suitably.
fn gnp_check(f: &Form, strategy: &Strategy, k: u32) -> Option<HypothesisCheck> {
    let partitions = match &strategy.partition {
        Some(p) => vec![p.clone()],
        None => two_variable_u_blocks(f.nvars()),
    };
    for p in partitions {
        let Ok(Some(cert)) = gnp_vanishing(f, &p, k) else { continue };
        return Some(HypothesisCheck {
            name: format!("hess^{k} vanishes"),
            verdict: CheckVerdict::Passed,
            certainty: CheckCertainty::CertifiedStructural,
            detail: Some(format!(
                "bidegree ({},{}): separable length {} exceeds binom({}+{}-1,{}) = {}",
                cert.bidegree.x, cert.bidegree.u, cert.slice_rank, cert.u_count, k, k, cert.threshold
            )),
        });
    }
    None
}

fn conciseness_check(h: &HilbertFunction, nvars: usize, k: u32) -> HypothesisCheck {
    match is_k_concise_from(h, nvars, k) {
        Ok(ok) => HypothesisCheck::exact(
            &format!("{k}-concise"),
            ok,
            Some(format!("a_{k} = {}, binom(n+{k},{k}) = {}", h.get(k), graded_dim(nvars, k))),
        ),
        Err(e) => HypothesisCheck::exact(&format!("{k}-concise"), false, Some(e.to_string())),
    }
}

fn hessian_vanishing_check(f: &Form, strategy: &Strategy, cache: &mut HessianCache<'_>) -> Result<HypothesisCheck> {
    let (h, report) = cache.get(1, 1)?;
    let mut check = degeneracy_check("hess^1 vanishes".into(), report);
    if check.verdict == CheckVerdict::Passed {
        return Ok(check);
    }
    if let Some(v) = &strategy.hessian_kernel_witness {
        if verify_kernel_witness(h, v) {
            check.verdict = CheckVerdict::Passed;
            check.certainty = CheckCertainty::CertifiedSymbolic;
            check.detail = Some("supplied kernel vector verified by exact multiplication".into());
            return Ok(check);
        }
    }
    if check.verdict == CheckVerdict::Undetermined {
        if let Some(g) = gnp_check(f, strategy, 1) {
            return Ok(HypothesisCheck { name: check.name, ..g });
        }
    }
    Ok(check)
}

fn lower_value(nvars: usize, k: u32) -> usize {
    graded_dim(nvars, k)
}

/// Lower bound through a vanishing classical Hessian.
pub fn cactus_lower_a(f: &Form, k: u32, strategy: &Strategy) -> Result<CactusLowerBound> {
    let h = hilbert(f)?;
    let mut cache = HessianCache::new(f, strategy);
    cactus_lower_a_with(f, &h, k, strategy, &mut cache)
}

fn cactus_lower_a_with(
    f: &Form,
    h: &HilbertFunction,
    k: u32,
    strategy: &Strategy,
    cache: &mut HessianCache<'_>,
) -> Result<CactusLowerBound> {
    let d = f.degree();
    let mut checks = vec![HypothesisCheck::exact("1 <= k and 2k <= d", k >= 1 && 2 * k <= d, None)];
    checks.push(conciseness_check(h, f.nvars(), k));
    if d >= 2 {
        checks.push(hessian_vanishing_check(f, strategy, cache)?);
    }
    Ok(CactusLowerBound::assemble(lower_value(f.nvars(), k), k, CactusRoute::VanishingHessian, None, checks))
}

/// Lower bound through a degenerate mixed Hessian `Hess^{(l,s)}`.
pub fn cactus_lower_c(f: &Form, k: u32, l: u32, s: u32, strategy: &Strategy) -> Result<CactusLowerBound> {
    let h = hilbert(f)?;
    let mut cache = HessianCache::new(f, strategy);
    cactus_lower_c_with(f, &h, k, l, s, strategy, &mut cache)
}

fn check_orders(d: u32, k: u32, l: u32, s: u32) -> Result<()> {
    if !(l <= k && k <= s && s + l <= d && 2 * k <= d) {
        return Err(Error::OutOfRange(format!("need l <= k <= s, s + l <= d, 2k <= d; got k={k}, l={l}, s={s}, d={d}")));
    }
    Ok(())
}

fn cactus_lower_c_with(
    f: &Form,
    h: &HilbertFunction,
    k: u32,
    l: u32,
    s: u32,
    strategy: &Strategy,
    cache: &mut HessianCache<'_>,
) -> Result<CactusLowerBound> {
    check_orders(f.degree(), k, l, s)?;
    let mut checks = vec![conciseness_check(h, f.nvars(), k)];
    checks.push(HypothesisCheck::exact("unimodal Hilbert function", is_unimodal(h), Some(format!("{:?}", h.values()))));
    let name = format!("Hess^({l},{s}) degenerate");
    let (_, report) = cache.get(l, s)?;
    let mut check = degeneracy_check(name.clone(), report);
    if check.verdict == CheckVerdict::Undetermined && l == s {
        if let Some(g) = gnp_check(f, strategy, l) {
            check = HypothesisCheck { name, ..g };
        }
    }
    checks.push(check);
    Ok(CactusLowerBound::assemble(
        lower_value(f.nvars(), k),
        k,
        CactusRoute::DegenerateMixedHessian,
        Some((l, s)),
        checks,
    ))
}

fn two_variable_u_blocks(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let x: Vec<usize> = (0..n).filter(|&i| i != a && i != b).collect();
            out.push(Partition::new(n, x, vec![a, b]).expect("valid split"));
        }
    }
    out
}

/// Bound for one bidegree class: bi-homogeneous if admissible, otherwise
/// the sum of the monomial bounds of its terms.
fn class_bound(class: &Poly, bd: Bidegree, partition: &Partition, names: &[String]) -> BorderBound {
    if let Ok(mut b) = bihom_bound_for(bd, partition) {
        if class.len() > 1 {
            b.part = Some(crate::parse::render(class, names));
            return b;
        }
    }
    let parts: Vec<BorderBound> = class
        .terms()
        .map(|(m, c)| {
            border_bound_monomial(m)
                .expect("terms of a positive-degree form are nonconstant")
                .with_part(crate::parse::render(&Poly::monomial(m.clone(), c.clone()), names))
        })
        .collect();
    if parts.len() == 1 {
        return parts.into_iter().next().unwrap();
    }
    BorderBound {
        value: parts.iter().map(|b| b.value).sum(),
        provenance: Provenance::SummandAdditivity,
        part: Some(crate::parse::render(class, names)),
        bidegree: Some(bd),
        details: parts,
    }
}

/// Split `f` into the known power sum plus bidegree classes and add up.
fn split_bound(f: &Form, partition: &Partition, power_parts: &[(BigRational, LinearForm)]) -> Option<BorderBound> {
    let n = f.nvars();
    let d = f.degree();
    let names = f.vars().names();
    let powers = power_parts.iter().fold(Poly::zero(n), |acc, (c, l)| &acc + &l.power(d).scale(c));
    let rest = f.poly() - &powers;
    let mut parts: Vec<(Poly, BorderBound)> = Vec::new();
    if !powers.is_zero() {
        parts.push((
            powers.clone(),
            BorderBound::leaf(power_parts.len(), Provenance::ExplicitDecomposition)
                .with_part(format!("sum of {} powers of linear forms", power_parts.len())),
        ));
    }
    for ((x, u), class) in bidegree_classes(&rest, partition) {
        let b = class_bound(&class, Bidegree { x, u }, partition, names);
        parts.push((class, b));
    }
    border_bound_additive(f, parts).ok()
}

/// Smallest available border rank upper bound.
pub fn best_border_bound(f: &Form, strategy: &Strategy) -> Result<BorderBound> {
    f.ensure_analyzable()?;
    let mut candidates: Vec<BorderBound> = Vec::new();
    if let Some(dec) = &strategy.decomposition {
        if dec.target() == f {
            candidates.push(border_bound_decomposition(dec)?);
        }
    }
    let partitions = match &strategy.partition {
        Some(p) => vec![p.clone()],
        None => two_variable_u_blocks(f.nvars()),
    };
    for p in &partitions {
        if let Some(b) = split_bound(f, p, &strategy.power_parts) {
            candidates.push(b);
        }
    }
    if partitions.is_empty() {
        // One or two variables: every term on its own.
        let all_x = Partition::new(f.nvars(), (0..f.nvars()).collect(), Vec::new())?;
        if let Some(b) = split_bound(f, &all_x, &strategy.power_parts) {
            candidates.push(b);
        }
    }
    if f.nvars() >= 2 && f.degree() >= 2 {
        candidates.push(BorderBound::leaf(ah_generic_rank(f.nvars() as u32 - 1, f.degree())?, Provenance::AhGeneric));
    }
    if f.degree() == 1 || f.nvars() == 1 {
        candidates.push(BorderBound::leaf(1, Provenance::Monomial));
    }
    // Stable: ties keep the earlier (more specific) route.
    Ok(candidates.into_iter().min_by_key(|b| b.value).expect("some bound always applies"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WildVerdict {
    Wild,
    NotEstablished,
}

/// One step of the cactus search, kept so the certificate shows what was tried.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchEntry {
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<CactusRoute>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<(u32, u32)>,
    pub outcome: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WildCertificate {
    pub schema: &'static str,
    pub form: String,
    pub variables: Vec<String>,
    pub hilbert: HilbertFunction,
    pub border_upper: BorderBound,
    pub cactus_lower: Option<CactusLowerBound>,
    pub verdict: WildVerdict,
    pub search: Vec<SearchEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl WildCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// `(l, s)` pairs tried for the degenerate mixed Hessian route, `(k, k)` first.
fn order_candidates(d: u32, k: u32) -> Vec<(u32, u32)> {
    let mut out = vec![(k, k)];
    for l in (1..=k).rev() {
        for s in k..=(d - l) {
            if (l, s) != (k, k) {
                out.push((l, s));
            }
        }
    }
    out
}

/// Assemble the best border bound and the strongest certified cactus bound.
pub fn wild_certificate(f: &Form, strategy: &Strategy) -> Result<WildCertificate> {
    f.ensure_analyzable()?;
    let d = f.degree();
    let n = f.nvars();
    let h = hilbert(f)?;
    let border = best_border_bound(f, strategy)?;
    let mut cache = HessianCache::new(f, strategy);
    let mut search = Vec::new();
    let (k_lo, k_hi) = strategy.k_range.unwrap_or((1, d / 2));
    let mut best: Option<CactusLowerBound> = None;
    let mut first_attempt: Option<CactusLowerBound> = None;

    'outer: for k in (k_lo.max(1)..=k_hi.min(d / 2)).rev() {
        if graded_dim(n, k) > strategy.max_slice_dim {
            search.push(SearchEntry {
                k,
                route: None,
                orders: None,
                outcome: format!("skipped: dim Q_{k} = {} exceeds budget {}", graded_dim(n, k), strategy.max_slice_dim),
            });
            continue;
        }
        if !is_k_concise_from(&h, n, k).unwrap_or(false) {
            search.push(SearchEntry { k, route: None, orders: None, outcome: "not k-concise".into() });
            continue;
        }
        let a = cactus_lower_a_with(f, &h, k, strategy, &mut cache)?;
        search.push(entry(&a));
        if a.valid {
            best = Some(a);
            break;
        }
        first_attempt.get_or_insert(a);
        if !is_unimodal(&h) {
            search.push(SearchEntry {
                k,
                route: Some(CactusRoute::DegenerateMixedHessian),
                orders: None,
                outcome: "Hilbert function is not unimodal".into(),
            });
            continue;
        }
        for (l, s) in order_candidates(d, k) {
            if graded_dim(n, l).max(graded_dim(n, s)) > strategy.max_slice_dim {
                continue;
            }
            let c = cactus_lower_c_with(f, &h, k, l, s, strategy, &mut cache)?;
            search.push(entry(&c));
            if c.valid {
                best = Some(c);
                break 'outer;
            }
        }
    }

    let verdict = match &best {
        Some(c) if border.value <= c.value => WildVerdict::Wild,
        _ => WildVerdict::NotEstablished,
    };
    Ok(WildCertificate {
        schema: CERTIFICATE_SCHEMA,
        form: f.render(),
        variables: f.vars().names().to_vec(),
        hilbert: h,
        border_upper: border,
        cactus_lower: best.or(first_attempt),
        verdict,
        search,
        notes: strategy.notes.clone(),
    })
}

fn entry(c: &CactusLowerBound) -> SearchEntry {
    let failed: Vec<&str> = c.checks.iter().filter(|x| !x.is_certified_pass()).map(|x| x.name.as_str()).collect();
    SearchEntry {
        k: c.k,
        route: Some(c.route),
        orders: c.orders,
        outcome: if c.valid { format!("cr > {}", c.value) } else { format!("unproven: {}", failed.join(", ")) },
    }
}

/// Recompute every check of a certificate from scratch.
pub fn replay(f: &Form, cert: &WildCertificate, strategy: &Strategy) -> Result<bool> {
    if hilbert(f)? != cert.hilbert || f.render() != cert.form {
        return Ok(false);
    }
    let Some(c) = &cert.cactus_lower else { return Ok(cert.verdict == WildVerdict::NotEstablished) };
    let again = match (c.route, c.orders) {
        (CactusRoute::VanishingHessian, _) => cactus_lower_a(f, c.k, strategy)?,
        (CactusRoute::DegenerateMixedHessian, Some((l, s))) => cactus_lower_c(f, c.k, l, s, strategy)?,
        (CactusRoute::DegenerateMixedHessian, None) => return Ok(false),
    };
    let border = best_border_bound(f, strategy)?;
    let wild = again.valid && border.value <= again.value;
    Ok(again.valid == c.valid && border.value == cert.border_upper.value && wild == (cert.verdict == WildVerdict::Wild))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;
    use crate::poly::Vars;

    fn form(vars: &str, text: &str) -> Form {
        parse_form(text, &Vars::parse(vars).unwrap()).unwrap()
    }

    fn partition(f: &Form, spec: &str) -> Partition {
        Partition::parse(f.vars(), spec).unwrap()
    }

    #[test]
    fn monomial_bounds() {
        assert_eq!(border_bound_monomial(&Monomial::new(vec![2, 3])).unwrap().value, 3);
        assert_eq!(border_bound_monomial(&Monomial::new(vec![2, 2, 2])).unwrap().value, 9);
        assert_eq!(border_bound_monomial(&Monomial::new(vec![0, 5])).unwrap().value, 1);
        assert!(border_bound_monomial(&Monomial::new(vec![0, 0])).is_err());
    }

    #[test]
    fn generic_ranks() {
        assert_eq!(ah_generic_rank(2, 4).unwrap(), 6);
        assert_eq!(ah_generic_rank(3, 2).unwrap(), 4);
        assert_eq!(ah_generic_rank(1, 5).unwrap(), 3);
        assert_eq!(ah_generic_rank(2, 3).unwrap(), 4);
        assert_eq!(ah_generic_rank(4, 3).unwrap(), 8);
        assert!(ah_generic_rank(0, 3).is_err());
    }

    #[test]
    fn bihomogeneous_bound() {
        let f = form("x,y,z,u,v", "x*u^5*v + y*u^3*v^3 + z*u*v^5");
        let b = border_bound_bihom(&f, &partition(&f, "X=x,y,z;U=u,v")).unwrap();
        assert_eq!((b.value, b.provenance), (9, Provenance::Bihomogeneous));
        let three_u = Partition::parse(f.vars(), "X=x,y;U=z,u,v").unwrap();
        assert!(matches!(border_bound_bihom(&f, &three_u), Err(Error::Precondition(_)) | Err(Error::NotBihomogeneous { .. })));
    }

    #[test]
    fn separable_length_certificate() {
        let f = form("x,y,z,u,v", "x*u^5*v + y*u^3*v^3 + z*u*v^5");
        let p = partition(&f, "X=x,y,z;U=u,v");
        let c = gnp_vanishing(&f, &p, 1).unwrap().unwrap();
        assert_eq!((c.slice_rank, c.threshold), (3, 2));
        assert!(gnp_vanishing(&f, &p, 2).is_err());
    }

    #[test]
    fn additive_bound_rejects_wrong_parts() {
        let f = form("x,y", "x^3 + y^3");
        let parts = vec![(form("x,y", "x^3").into_poly(), BorderBound::leaf(1, Provenance::Monomial))];
        assert!(matches!(border_bound_additive(&f, parts), Err(Error::PartsMismatch)));
    }

    #[test]
    fn ikeda_is_wild() {
        let f = form("x,y,u,v", "x*u^3*v + y*u*v^3 + x^2*y^3");
        let strategy = Strategy { partition: Some(partition(&f, "X=x,y;U=u,v")), ..Strategy::default() };
        let cert = wild_certificate(&f, &strategy).unwrap();
        assert_eq!(cert.border_upper.value, 10);
        let c = cert.cactus_lower.as_ref().unwrap();
        assert!(c.valid);
        assert_eq!(c.value, 10);
        assert_eq!(cert.verdict, WildVerdict::Wild);
        assert!(replay(&f, &cert, &strategy).unwrap());
        let json: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        assert_eq!(json["schema"], CERTIFICATE_SCHEMA);
        assert_eq!(json["borderUpper"]["value"], 10);
    }

    #[test]
    fn ikeda_found_without_partition() {
        let f = form("x,y,u,v", "x*u^3*v + y*u*v^3 + x^2*y^3");
        let cert = wild_certificate(&f, &Strategy::default()).unwrap();
        assert_eq!(cert.border_upper.value, 10);
        assert_eq!(cert.verdict, WildVerdict::Wild);
    }

    #[test]
    fn binary_cubic_sum_is_not_wild() {
        let f = form("x0,x1", "x0^3 + x1^3");
        let cert = wild_certificate(&f, &Strategy::default()).unwrap();
        assert_eq!(cert.verdict, WildVerdict::NotEstablished);
    }

    #[test]
    fn vanishing_hessian_route() {
        let f = form("x,y,z,u,v", "x*u^2 + y*u^2 + 2*y*u*v + y*v^2 + z*v^2");
        let a = cactus_lower_a(&f, 1, &Strategy::default()).unwrap();
        assert!(a.valid, "{:?}", a.checks);
        assert_eq!(a.value, 5);
        let cert = wild_certificate(&f, &Strategy::default()).unwrap();
        assert_eq!(cert.border_upper.value, 5);
        assert_eq!(cert.verdict, WildVerdict::Wild);
    }

    #[test]
    fn mixed_orders_validated() {
        let f = form("x,y,u,v", "x*u^3*v + y*u*v^3 + x^2*y^3");
        assert!(matches!(cactus_lower_c(&f, 2, 3, 2, &Strategy::default()), Err(Error::OutOfRange(_))));
    }
}
