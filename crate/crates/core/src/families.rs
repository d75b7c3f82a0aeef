//! Named example forms: vanishing-Hessian cubics, the Ikeda quintic,
//! exceptional forms with generic power sums, monomial-spread forms, powers
//! of a Perazzo form, and closed-form bounds for large instances.
//!
//! "Generic" ingredients are small-integer linear forms drawn from a seeded
//! generator; the open conditions a construction relies on are checked after
//! building, reseeding a bounded number of times.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::apolar::{graded_dim, hilbert, is_k_concise, is_unimodal};
use crate::bounds::Strategy;
use crate::error::{Error, Result};
use crate::hessian::RankPolicy;
use crate::linalg::QMatrix;
use crate::poly::{monomials_of_degree, Form, LinearForm, Monomial, Partition, Poly, Vars};

/// Reseeding budget for constructions with generic ingredients.
pub const MAX_ATTEMPTS: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyName {
    Perazzo,
    BbCubic,
    Ikeda,
    Exceptional,
    MonomialSpread,
    PowerFamily,
    GnQuarticFormula,
}

impl FamilyName {
    pub const ALL: [FamilyName; 7] = [
        FamilyName::Perazzo,
        FamilyName::BbCubic,
        FamilyName::Ikeda,
        FamilyName::Exceptional,
        FamilyName::MonomialSpread,
        FamilyName::PowerFamily,
        FamilyName::GnQuarticFormula,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyName::Perazzo => "perazzo",
            FamilyName::BbCubic => "bb-cubic",
            FamilyName::Ikeda => "ikeda",
            FamilyName::Exceptional => "exceptional",
            FamilyName::MonomialSpread => "monomial-spread",
            FamilyName::PowerFamily => "power-family",
            FamilyName::GnQuarticFormula => "gn-quartic-formula",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            FamilyName::Perazzo => "xu^2 + yuv + zv^2, concise cubic with vanishing Hessian",
            FamilyName::BbCubic => "xu^2 + y(u+v)^2 + zv^2, concise cubic with vanishing Hessian",
            FamilyName::Ikeda => "xu^3v + yuv^3 + x^2y^3, vanishing second Hessian",
            FamilyName::Exceptional => "x_1u^dv + x_2u^(d-2)v^3 + ... + x_nuv^d + sum of binom(n+1,2) generic powers, d = 2n-1",
            FamilyName::MonomialSpread => "sum of M_i u^(b-1-i) v^i over all degree-k monomials M_i in n+1 variables",
            FamilyName::PowerFamily => "(xu^d + yu^(d-1)v + zv^d)^(d-1); built for small d, bounds for any d",
            FamilyName::GnQuarticFormula => "bounds binom(s+4,2) and 16e+40 for quartic Gordan-Noether compositions",
        }
    }

    /// Parameter names with defaults (`None` for required).
    pub fn parameters(self) -> &'static [(&'static str, Option<i64>)] {
        match self {
            FamilyName::Perazzo | FamilyName::BbCubic | FamilyName::Ikeda => &[],
            FamilyName::Exceptional => &[("n", Some(3))],
            FamilyName::MonomialSpread => &[("n", Some(2)), ("k", Some(4))],
            FamilyName::PowerFamily => &[("d", Some(2)), ("max-d", Some(4))],
            FamilyName::GnQuarticFormula => &[("s", Some(28)), ("e", None)],
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Family(format!("unknown family `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub name: FamilyName,
    pub params: BTreeMap<String, i64>,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(name: FamilyName) -> Self {
        FamilySpec { name, params: BTreeMap::new(), seed: 0 }
    }

    pub fn with_param(mut self, key: &str, value: i64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// From a family name and `key=value` strings.
    pub fn parse<S: AsRef<str>>(name: &str, params: &[S], seed: u64) -> Result<Self> {
        let mut spec = FamilySpec::new(name.parse()?).with_seed(seed);
        for p in params {
            let p = p.as_ref();
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Family(format!("expected key=value, got `{p}`")))?;
            let v: i64 = v.trim().parse().map_err(|_| Error::Family(format!("`{v}` is not an integer")))?;
            spec.params.insert(k.trim().to_string(), v);
        }
        Ok(spec)
    }

    fn param(&self, key: &str) -> Result<Option<i64>> {
        let known = self.name.parameters();
        for k in self.params.keys() {
            if !known.iter().any(|(n, _)| n == k) {
                return Err(Error::Family(format!("{} takes no parameter `{k}`", self.name)));
            }
        }
        let default = known.iter().find(|(n, _)| *n == key).and_then(|(_, d)| *d);
        Ok(self.params.get(key).copied().or(default))
    }

    fn bounded(&self, key: &str, lo: i64, hi: i64) -> Result<u32> {
        let v = self.param(key)?.ok_or_else(|| Error::Family(format!("{} needs `{key}`", self.name)))?;
        if v < lo || v > hi {
            return Err(Error::Family(format!("{} needs {lo} <= {key} <= {hi}, got {v}", self.name)));
        }
        Ok(v as u32)
    }
}

/// Bounds evaluated from closed formulas rather than from a built form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FormulaBounds {
    /// `cr(f) > cactus_lower`.
    pub cactus_lower: u128,
    /// `border rank <= border_upper`.
    pub border_upper: u128,
    pub wild: bool,
    /// Hypothesis the cactus bound depends on, when not verified here.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assumes: Option<String>,
}

impl FormulaBounds {
    fn new(cactus_lower: u128, border_upper: u128, assumes: Option<String>) -> Self {
        FormulaBounds { cactus_lower, border_upper, wild: border_upper <= cactus_lower, assumes }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyBuild {
    pub spec: FamilySpec,
    pub form: Option<Form>,
    pub partition: Option<Partition>,
    /// Power-sum summands of the form, when it contains some.
    pub power_parts: Vec<(BigRational, LinearForm)>,
    pub formula: Option<FormulaBounds>,
    /// Seed that produced the generic ingredients.
    pub seed_used: u64,
    pub attempts: u32,
    pub notes: Vec<String>,
}

impl FamilyBuild {
    fn formula_only(spec: &FamilySpec, formula: FormulaBounds, notes: Vec<String>) -> Self {
        FamilyBuild {
            spec: spec.clone(),
            form: None,
            partition: None,
            power_parts: Vec::new(),
            formula: Some(formula),
            seed_used: spec.seed,
            attempts: 0,
            notes,
        }
    }

    fn exact(spec: &FamilySpec, form: Form, partition: Partition) -> Self {
        FamilyBuild {
            spec: spec.clone(),
            form: Some(form),
            partition: Some(partition),
            power_parts: Vec::new(),
            formula: None,
            seed_used: spec.seed,
            attempts: 1,
            notes: Vec::new(),
        }
    }

    /// The form, or a [`Error::Family`] for formula-only builds.
    pub fn form(&self) -> Result<&Form> {
        self.form
            .as_ref()
            .ok_or_else(|| Error::Family(format!("{} with these parameters only evaluates bounds", self.spec.name)))
    }

    /// Certificate strategy carrying the known structure of the form.
    pub fn strategy(&self, policy: RankPolicy) -> Strategy {
        Strategy {
            policy,
            partition: self.partition.clone(),
            power_parts: self.power_parts.clone(),
            notes: self.notes.clone(),
            ..Strategy::default()
        }
    }
}

/// `x, y, z, w` for up to four variables, else `x1, …, xn`.
fn x_names(count: usize) -> Vec<String> {
    if count <= 4 {
        ["x", "y", "z", "w"][..count].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=count).map(|i| format!("x{i}")).collect()
    }
}

fn with_uv(x: Vec<String>) -> (Vars, Partition) {
    let m = x.len();
    let mut names = x;
    names.extend(["u".to_string(), "v".to_string()]);
    let vars = Vars::new(&names).expect("family variable names are valid");
    let partition = Partition::new(m + 2, (0..m).collect(), vec![m, m + 1]).expect("valid split");
    (vars, partition)
}

fn term(nvars: usize, exps: &[(usize, u32)], c: i64) -> (Monomial, BigRational) {
    let mut e = vec![0u32; nvars];
    for &(i, k) in exps {
        e[i] += k;
    }
    (Monomial::new(e), BigRational::from_integer(c.into()))
}

/// Pseudo-random small-integer linear forms, pairwise non-proportional and,
/// when checking is affordable, in general position.
pub fn generic_linear_forms(count: usize, var_count: usize, seed: u64) -> Vec<LinearForm> {
    assert!(count >= 1 && var_count >= 1, "need at least one form in at least one variable");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let check_general = binomial(count as u128, count.min(var_count) as u128) <= 5000;
    loop {
        let mut forms: Vec<LinearForm> = Vec::with_capacity(count);
        let mut guard = 0;
        while forms.len() < count && guard < 10_000 {
            guard += 1;
            let c: Vec<i64> = (0..var_count).map(|_| rng.random_range(-3..=3)).collect();
            let l = LinearForm::from_ints(&c);
            if l.is_zero() || forms.iter().any(|g| g.is_proportional(&l)) {
                continue;
            }
            forms.push(l);
        }
        if forms.len() < count {
            // Fewer distinct directions than requested (one variable): give what exists.
            return forms;
        }
        if !check_general || in_general_position(&forms) {
            return forms;
        }
    }
}

/// Every `min(count, nvars)` of the forms are linearly independent.
pub fn in_general_position(forms: &[LinearForm]) -> bool {
    let Some(first) = forms.first() else { return true };
    let r = forms.len().min(first.nvars());
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let rows: Vec<Vec<BigRational>> = idx.iter().map(|&i| forms[i].coeffs().to_vec()).collect();
        if QMatrix::from_rows(rows).rank() < r {
            return false;
        }
        // Next combination in lexicographic order.
        let mut i = r;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < forms.len() - r + i {
                break;
            }
            if i == 0 {
                return true;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn build(spec: &FamilySpec) -> Result<FamilyBuild> {
    match spec.name {
        FamilyName::Perazzo => {
            spec.param("")?;
            power_family_form(spec, 2)
        }
        FamilyName::BbCubic => {
            spec.param("")?;
            let (vars, p) = with_uv(x_names(3));
            // x u^2 + y (u+v)^2 + z v^2
            let t = [
                term(5, &[(0, 1), (3, 2)], 1),
                term(5, &[(1, 1), (3, 2)], 1),
                term(5, &[(1, 1), (3, 1), (4, 1)], 2),
                term(5, &[(1, 1), (4, 2)], 1),
                term(5, &[(2, 1), (4, 2)], 1),
            ];
            Ok(FamilyBuild::exact(spec, Form::new(vars, Poly::from_terms(5, t))?, p))
        }
        FamilyName::Ikeda => {
            spec.param("")?;
            let (vars, p) = with_uv(x_names(2));
            let t = [
                term(4, &[(0, 1), (2, 3), (3, 1)], 1),
                term(4, &[(1, 1), (2, 1), (3, 3)], 1),
                term(4, &[(0, 2), (1, 3)], 1),
            ];
            Ok(FamilyBuild::exact(spec, Form::new(vars, Poly::from_terms(4, t))?, p))
        }
        FamilyName::Exceptional => exceptional(spec),
        FamilyName::MonomialSpread => monomial_spread(spec),
        FamilyName::PowerFamily => {
            let d = spec.bounded("d", 2, 1000)?;
            let max_d = spec.bounded("max-d", 2, 8)?;
            if d <= max_d {
                power_family_form(spec, d)
            } else {
                let mut notes = vec![format!("degree {} form not built (max-d = {max_d}); bounds only", d * d - 1)];
                notes.push(format!("border rank <= (d-1)(d^2+1) = {}", power_family_bounds(d).border_upper));
                Ok(FamilyBuild::formula_only(spec, power_family_bounds(d), notes))
            }
        }
        FamilyName::GnQuarticFormula => gn_quartic(spec),
    }
}

fn power_family_bounds(d: u32) -> FormulaBounds {
    let d = d as u128;
    FormulaBounds::new(
        binomial(d + 3, 4),
        (d - 1) * (d * d + 1),
        Some(format!("the form is {}-concise", d - 1)),
    )
}

/// `(x u^d + y u^(d-1) v + z v^d)^(d-1)`.
fn power_family_form(spec: &FamilySpec, d: u32) -> Result<FamilyBuild> {
    let (vars, p) = with_uv(x_names(3));
    let g = Poly::from_terms(
        5,
        [
            term(5, &[(0, 1), (3, d)], 1),
            term(5, &[(1, 1), (3, d - 1), (4, 1)], 1),
            term(5, &[(2, 1), (4, d)], 1),
        ],
    );
    let form = Form::new(vars, g.pow(d - 1))?;
    let mut out = FamilyBuild::exact(spec, form, p);
    if spec.name == FamilyName::PowerFamily {
        let concise = is_k_concise(out.form.as_ref().unwrap(), d - 1).unwrap_or(false);
        let mut bounds = power_family_bounds(d);
        if concise {
            bounds.assumes = None;
        }
        out.notes.push(format!("{}-concise: {concise}", d - 1));
        out.formula = Some(bounds);
    }
    Ok(out)
}

fn exceptional(spec: &FamilySpec) -> Result<FamilyBuild> {
    let n = spec.bounded("n", 3, 12)? as usize;
    let d = 2 * n as u32 - 1;
    let (vars, partition) = with_uv(x_names(n));
    let nv = n + 2;
    let (u, v) = (n, n + 1);
    let mut base = Poly::zero(nv);
    for i in 0..n {
        let (a, b) = (d - 2 * i as u32, 2 * i as u32 + 1);
        let (m, c) = term(nv, &[(i, 1), (u, a), (v, b)], 1);
        base.add_term(m, c);
    }
    let count = n * (n + 1) / 2;
    let target = graded_dim(nv, 2);
    let mut reason = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        let seed = spec.seed.wrapping_add(attempt as u64);
        let ls = generic_linear_forms(count, n, seed);
        let power_parts: Vec<(BigRational, LinearForm)> = ls
            .iter()
            .map(|l| {
                let mut c = l.coeffs().to_vec();
                c.extend([BigRational::zero(), BigRational::zero()]);
                (BigRational::one(), LinearForm::new(c))
            })
            .collect();
        let mut f = base.clone();
        for (_, l) in &power_parts {
            f = &f + &l.power(d + 2);
        }
        let form = Form::new(vars.clone(), f)?;
        let h = hilbert(&form)?;
        if h.get(2) != target {
            reason = format!("a_2 = {} but 2-conciseness needs {target}", h.get(2));
            continue;
        }
        if !is_unimodal(&h) {
            reason = format!("Hilbert function {:?} is not unimodal", h.values());
            continue;
        }
        let notes = vec![format!(
            "seed {seed}: 2-concise (a_2 = {target}) and unimodal, verified; border rank <= {} + {count} = {}",
            d + 4,
            target
        )];
        return Ok(FamilyBuild {
            spec: spec.clone(),
            form: Some(form),
            partition: Some(partition),
            power_parts,
            formula: None,
            seed_used: seed,
            attempts: attempt + 1,
            notes,
        });
    }
    Err(Error::GenericityExhausted { attempts: MAX_ATTEMPTS, reason })
}

/// Degree `b - 1 + k` with `b = binom(n+k, k)` monomials.
fn monomial_spread(spec: &FamilySpec) -> Result<FamilyBuild> {
    let n = spec.bounded("n", 1, 6)? as usize;
    let k = spec.bounded("k", 1, 8)?;
    let ms = monomials_of_degree(n + 1, k);
    let b = ms.len() as u32;
    if b > 200 {
        return Err(Error::Family(format!("binom(n+k,k) = {b} monomials is beyond the supported size")));
    }
    let (vars, partition) = with_uv(x_names(n + 1));
    let nv = n + 3;
    let mut f = Poly::zero(nv);
    for (i, m) in ms.iter().enumerate() {
        let mut e = m.exps().to_vec();
        e.extend([b - 1 - i as u32, i as u32]);
        f.add_term(Monomial::new(e), BigRational::one());
    }
    let form = Form::new(vars, f)?;
    let deg = form.degree() as u128;
    let cactus = graded_dim(nv, k) as u128;
    let border = k as u128 * (deg + 2);
    let mut out = FamilyBuild::exact(spec, form, partition);
    out.notes.push(format!(
        "a_{k} = sum_i (k-i+1) binom(n+i,i) = binom(n+k+2,k) = {cactus} when {k}-concise, so the cactus bound is cr > {cactus}"
    ));
    if (n, k) == (2, 4) {
        out.notes.push("the value 140 printed for this example is binom(8,4) miscomputed; binom(8,4) = 70".into());
    }
    out.notes.push(format!("border rank <= k(d+2) = {border}"));
    Ok(out)
}

fn gn_quartic(spec: &FamilySpec) -> Result<FamilyBuild> {
    let s = spec.bounded("s", 1, 1_000_000)? as u128;
    let e = match spec.param("e")? {
        Some(e) if e >= 1 => e as u128,
        Some(e) => return Err(Error::Family(format!("gn-quartic-formula needs e >= 1, got {e}"))),
        None => 2 * (s / 2),
    };
    if e == 0 {
        return Err(Error::Family("e = 2 floor(s/2) is zero; pass s >= 2 or an explicit e".into()));
    }
    let bounds = FormulaBounds::new(
        binomial(s + 4, 2),
        16 * e + 40,
        Some("the composition P(Q1, Q2) is 2-concise with vanishing Hessian".into()),
    );
    let notes = vec![format!(
        "cr > binom(s+4,2) = {}, border rank <= 16e+40 = {} with e = {e}",
        bounds.cactus_lower, bounds.border_upper
    )];
    Ok(FamilyBuild::formula_only(spec, bounds, notes))
}
