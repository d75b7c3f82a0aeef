//! Power-sum decompositions `f = Σ c_r l_r^d` and what they say about the
//! mixed Hessians of `f`.
//!
//! For a decomposition, `Hess^{(d-l,k)}_f = d!/(l-k)! · W_{d-l} D_{k,l} W_k^T`
//! where column `r` of `W_k` holds the values `α(a_r)` of the basis monomials
//! of `A_k` at the coefficient vector of `l_r`, and `D_{k,l}` is the diagonal
//! of the scaled powers `c_r l_r^{l-k}`. Binary Waring rank is decided from
//! the annihilator: it is the least `r` for which `Ann(f)_r` contains a form
//! with distinct roots.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::apolar::{basis_of_ak, catalecticant, BasisOfAk};
use crate::error::{Error, Result};
use crate::hessian::{generic_rank, mixed_hessian_in_bases, MixedHessian, RankPolicy};
use crate::linalg::QMatrix;
use crate::poly::{factorials, DiffOp, Form, LinearForm, Poly, Vars};
use crate::univariate::BinaryForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumDecomposition {
    target: Form,
    scalars: Vec<BigRational>,
    forms: Vec<LinearForm>,
}

/// JSON shape: coefficient vectors plus scalars (omitted when all are 1).
#[derive(Serialize)]
struct DecompositionJson {
    forms: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scalars: Option<Vec<String>>,
}

impl Serialize for PowerSumDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let str_vec = |v: &[BigRational]| v.iter().map(crate::ser::rational_string).collect::<Vec<_>>();
        DecompositionJson {
            forms: self.forms.iter().map(|l| str_vec(l.coeffs())).collect(),
            scalars: (!self.is_pure()).then(|| str_vec(&self.scalars)),
        }
        .serialize(s)
    }
}

impl PowerSumDecomposition {
    /// `target = Σ scalars[r] · forms[r]^d` (claimed, see [`verify_decomposition`]).
    pub fn new(target: Form, terms: Vec<(BigRational, LinearForm)>) -> Result<Self> {
        target.ensure_analyzable()?;
        if terms.is_empty() {
            return Err(Error::Precondition("a decomposition needs at least one term".into()));
        }
        for (_, l) in &terms {
            if l.nvars() != target.nvars() {
                return Err(Error::AmbientMismatch { left: l.nvars(), right: target.nvars() });
            }
        }
        let (scalars, forms) = terms.into_iter().unzip();
        Ok(PowerSumDecomposition { target, scalars, forms })
    }

    /// All scalars equal to one.
    pub fn pure(target: Form, forms: Vec<LinearForm>) -> Result<Self> {
        PowerSumDecomposition::new(target, forms.into_iter().map(|l| (BigRational::one(), l)).collect())
    }

    /// Decomposition of its own expansion, so it verifies by construction.
    pub fn from_terms(vars: &Vars, degree: u32, terms: Vec<(BigRational, LinearForm)>) -> Result<Self> {
        let mut sum = Poly::zero(vars.len());
        for (c, l) in &terms {
            if l.nvars() != vars.len() {
                return Err(Error::AmbientMismatch { left: l.nvars(), right: vars.len() });
            }
            sum = &sum + &l.power(degree).scale(c);
        }
        let target = Form::new(vars.clone(), sum)?;
        if target.degree() != degree {
            return Err(Error::ZeroForm);
        }
        PowerSumDecomposition::new(target, terms)
    }

    pub fn target(&self) -> &Form {
        &self.target
    }

    pub fn degree(&self) -> u32 {
        self.target.degree()
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn scalars(&self) -> &[BigRational] {
        &self.scalars
    }

    pub fn is_pure(&self) -> bool {
        self.scalars.iter().all(One::is_one)
    }

    /// Pairwise non-proportional forms.
    pub fn is_reduced(&self) -> bool {
        (0..self.forms.len()).all(|i| (0..i).all(|j| !self.forms[i].is_proportional(&self.forms[j])))
    }

    pub fn expand(&self) -> Poly {
        let d = self.degree();
        self.scalars
            .iter()
            .zip(&self.forms)
            .fold(Poly::zero(self.target.nvars()), |acc, (c, l)| &acc + &l.power(d).scale(c))
    }
}

pub fn verify_decomposition(dec: &PowerSumDecomposition) -> bool {
    &dec.expand() == dec.target.poly()
}

/// Column `r` holds `α_j(a_r)` for the basis monomials `α_j` of `A_k`.
#[derive(Clone, Debug)]
pub struct WMatrix {
    pub k: u32,
    pub basis: BasisOfAk,
    pub matrix: QMatrix,
}

pub fn build_w_in_basis(dec: &PowerSumDecomposition, basis: &BasisOfAk) -> WMatrix {
    let mut m = QMatrix::zeros(basis.monomials.len(), dec.len());
    for (j, alpha) in basis.monomials.iter().enumerate() {
        for (r, l) in dec.forms.iter().enumerate() {
            m.set(j, r, alpha.eval(l.coeffs()));
        }
    }
    WMatrix { k: basis.k, basis: basis.clone(), matrix: m }
}

pub fn build_w(dec: &PowerSumDecomposition, k: u32) -> Result<WMatrix> {
    if k > dec.degree() {
        return Err(Error::OutOfRange(format!("k={k} exceeds degree {}", dec.degree())));
    }
    Ok(build_w_in_basis(dec, &basis_of_ak(&dec.target, k)?))
}

/// `Diag(c_1 l_1^{l-k}, …, c_s l_s^{l-k})`. The decomposition scalars live
/// here so that the `W` matrices stay pure Veronese coordinates.
#[derive(Clone, Debug)]
pub struct DMatrix {
    pub k: u32,
    pub l: u32,
    pub diagonal: Vec<Poly>,
}

pub fn build_d(dec: &PowerSumDecomposition, k: u32, l: u32) -> Result<DMatrix> {
    if k > l {
        return Err(Error::OutOfRange(format!("need k <= l, got ({k},{l})")));
    }
    let diagonal = dec.scalars.iter().zip(&dec.forms).map(|(c, f)| f.power(l - k).scale(c)).collect();
    Ok(DMatrix { k, l, diagonal })
}

#[derive(Clone, Debug)]
pub struct FactorizationCheck {
    pub k: u32,
    pub l: u32,
    pub holds: bool,
    /// `Hess^{(d-l,k)}` of the target.
    pub hessian: MixedHessian,
    /// `d!/(l-k)! · W_{d-l} D W_k^T`, entry by entry.
    pub product: Vec<Vec<Poly>>,
}

/// Compare the Hessian with the product built from explicit `W` and `D`.
pub fn factorization_check_with(
    dec: &PowerSumDecomposition,
    w_rows: &WMatrix,
    d_mat: &DMatrix,
    w_cols: &WMatrix,
) -> Result<FactorizationCheck> {
    let d = dec.degree();
    let (k, l) = (d_mat.k, d_mat.l);
    if l > d {
        return Err(Error::OutOfRange(format!("l={l} exceeds degree {d}")));
    }
    if w_rows.k != d - l || w_cols.k != k {
        return Err(Error::BasisMismatch(format!(
            "expected W_{} and W_{}, got W_{} and W_{}",
            d - l,
            k,
            w_rows.k,
            w_cols.k
        )));
    }
    let expected_rows = basis_of_ak(&dec.target, d - l)?;
    let expected_cols = basis_of_ak(&dec.target, k)?;
    if w_rows.basis != expected_rows || w_cols.basis != expected_cols {
        return Err(Error::BasisMismatch("W bases must be the target's monomial bases of A_k".into()));
    }
    if d_mat.diagonal.len() != dec.len() || w_rows.matrix.cols() != dec.len() || w_cols.matrix.cols() != dec.len() {
        return Err(Error::BasisMismatch("matrix sizes disagree with the decomposition length".into()));
    }
    let hessian = mixed_hessian_in_bases(&dec.target, expected_rows, expected_cols)?;
    let fact = factorials(d);
    let scalar = BigRational::new(fact[d as usize].clone(), fact[(l - k) as usize].clone());
    let n = dec.target.nvars();
    let mut product = Vec::with_capacity(hessian.rows());
    for i in 0..w_rows.matrix.rows() {
        let mut row = Vec::with_capacity(w_cols.matrix.rows());
        for j in 0..w_cols.matrix.rows() {
            let mut acc = Poly::zero(n);
            for r in 0..dec.len() {
                let c = w_rows.matrix.get(i, r) * w_cols.matrix.get(j, r);
                if !c.is_zero() {
                    acc = &acc + &d_mat.diagonal[r].scale(&c);
                }
            }
            row.push(acc.scale(&scalar));
        }
        product.push(row);
    }
    let holds = hessian.entries() == product.as_slice();
    Ok(FactorizationCheck { k, l, holds, hessian, product })
}

/// The factorization `Hess^{(d-l,k)} = d!/(l-k)! W_{d-l} D_{k,l} W_k^T`, exactly.
pub fn factorization_check(dec: &PowerSumDecomposition, k: u32, l: u32) -> Result<FactorizationCheck> {
    let d = dec.degree();
    if !(k <= l && k + l <= d) {
        return Err(Error::OutOfRange(format!("need k <= l and k + l <= d, got ({k},{l}) with d={d}")));
    }
    let w_rows = build_w(dec, d - l)?;
    let w_cols = build_w(dec, k)?;
    let d_mat = build_d(dec, k, l)?;
    factorization_check_with(dec, &w_rows, &d_mat, &w_cols)
}

/// A decomposition of length `a_k` forces `hess^k ≠ 0`; confirmed by finding
/// an evaluation point where the `k`-th Hessian is nonsingular.
pub fn corollary_easy_check(dec: &PowerSumDecomposition, k: u32, policy: &RankPolicy) -> Result<bool> {
    let d = dec.degree();
    if 2 * k > d {
        return Err(Error::OutOfRange(format!("hess^{k} needs 2k <= d, degree is {d}")));
    }
    let basis = basis_of_ak(&dec.target, k)?;
    if basis.monomials.len() != dec.len() {
        return Err(Error::Precondition(format!(
            "decomposition has {} terms but a_{k} = {}",
            dec.len(),
            basis.monomials.len()
        )));
    }
    let h = mixed_hessian_in_bases(&dec.target, basis.clone(), basis)?;
    let report = generic_rank(&h, &RankPolicy { certify: false, ..policy.clone() });
    Ok(report.is_full())
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BinaryRank {
    pub rank: usize,
    /// A squarefree element of `Ann(f)_rank`, when the seeded search found one.
    #[serde(serialize_with = "ser_op")]
    pub witness: Option<DiffOp>,
    /// Degree of the gcd of `Ann(f)_rank`.
    pub gcd_degree: usize,
}

fn ser_op<S: serde::Serializer>(op: &Option<DiffOp>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match op {
        Some(op) => s.serialize_str(&op.render()),
        None => s.serialize_none(),
    }
}

fn binary_avatar(op: &DiffOp) -> BinaryForm {
    let r = op.degree() as usize;
    let mut coeffs = vec![BigRational::zero(); r + 1];
    for (m, c) in op.poly().terms() {
        coeffs[m.exps()[0] as usize] = c.clone();
    }
    BinaryForm::from_coeffs(coeffs)
}

/// Waring rank over `C` of a binary form.
pub fn binary_waring_rank(f: &Form) -> Result<usize> {
    Ok(binary_waring_analysis(f)?.rank)
}

/// The least `r` with a squarefree element in `Ann(f)_r`. Every element of
/// `Ann(f)_r` is a multiple of the gcd `G` of the slice; the slice contains a
/// squarefree element exactly when `G` is squarefree (when `G` has positive
/// degree the slice is all multiples of `G`, otherwise it is base-point free).
pub fn binary_waring_analysis(f: &Form) -> Result<BinaryRank> {
    if f.nvars() != 2 {
        return Err(Error::NotBinary(f.nvars()));
    }
    f.ensure_analyzable()?;
    let d = f.degree();
    for r in 1..=d {
        let slice = catalecticant(f, r)?;
        if slice.kernel_basis.is_empty() {
            continue;
        }
        let avatars: Vec<BinaryForm> = slice.kernel_basis.iter().map(binary_avatar).collect();
        let g = BinaryForm::gcd_all(&avatars).expect("kernel generators are nonzero");
        if !g.is_squarefree() {
            continue;
        }
        let witness = find_squarefree(&slice.kernel_basis, &avatars);
        return Ok(BinaryRank { rank: r as usize, witness, gcd_degree: g.degree });
    }
    unreachable!("Ann(f)_d always contains a squarefree form")
}

fn find_squarefree(ops: &[DiffOp], avatars: &[BinaryForm]) -> Option<DiffOp> {
    if let Some(i) = avatars.iter().position(BinaryForm::is_squarefree) {
        return Some(ops[i].clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..256 {
        let mut p = Poly::zero(2);
        for op in ops {
            let c: i64 = rng.random_range(-5..=5);
            p = &p + &op.poly().scale(&BigRational::from_integer(c.into()));
        }
        if p.is_zero() {
            continue;
        }
        let op = DiffOp::new(ops[0].vars().clone(), p).expect("combination stays homogeneous");
        if binary_avatar(&op).is_squarefree() {
            return Some(op);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;
    use crate::poly::{apply, rat};

    fn vars(s: &str) -> Vars {
        Vars::parse(s).unwrap()
    }

    fn form(v: &str, text: &str) -> Form {
        parse_form(text, &vars(v)).unwrap()
    }

    #[test]
    fn verifies_sum_of_cubes() {
        let f = form("x0,x1", "x0^3 + x1^3");
        let dec = PowerSumDecomposition::pure(f.clone(), vec![LinearForm::from_ints(&[1, 0]), LinearForm::from_ints(&[0, 1])])
            .unwrap();
        assert!(verify_decomposition(&dec));
        assert!(dec.is_pure() && dec.is_reduced());
        let w = build_w(&dec, 1).unwrap();
        assert_eq!(w.matrix, QMatrix::identity(2));
        assert!(factorization_check(&dec, 1, 2).unwrap().holds);
        assert!(corollary_easy_check(&dec, 1, &RankPolicy::default()).unwrap());
    }

    #[test]
    fn signed_decomposition_of_a_product() {
        // 4 x0 x1 = (x0 + x1)^2 - (x0 - x1)^2
        let f = form("x0,x1", "4*x0*x1");
        let dec = PowerSumDecomposition::new(
            f,
            vec![(rat(1), LinearForm::from_ints(&[1, 1])), (rat(-1), LinearForm::from_ints(&[1, -1]))],
        )
        .unwrap();
        assert!(verify_decomposition(&dec));
        assert!(!dec.is_pure());
        let bad = PowerSumDecomposition::pure(
            form("x0", "x0^2"),
            vec![LinearForm::from_ints(&[1]), LinearForm::from_ints(&[1])],
        )
        .unwrap();
        assert!(!verify_decomposition(&bad));
        assert!(!bad.is_reduced());
    }

    #[test]
    fn w_entry_is_a_monomial_value() {
        // α = X0 X1 at l = x0 + 2 x1 gives 1 * 2.
        let f = form("x0,x1", "x0^2*x1^2");
        let basis = BasisOfAk { k: 2, monomials: vec![crate::poly::Monomial::new(vec![1, 1])] };
        let dec = PowerSumDecomposition::pure(f, vec![LinearForm::from_ints(&[1, 2])]).unwrap();
        assert_eq!(build_w_in_basis(&dec, &basis).matrix.get(0, 0), &rat(2));
    }

    #[test]
    fn perturbed_w_breaks_factorization() {
        let dec = PowerSumDecomposition::from_terms(
            &vars("x,y,z"),
            4,
            vec![
                (rat(1), LinearForm::from_ints(&[1, 2, 0])),
                (rat(2), LinearForm::from_ints(&[0, 1, -1])),
                (rat(-1), LinearForm::from_ints(&[3, 0, 1])),
            ],
        )
        .unwrap();
        let (k, l) = (1, 2);
        let mut w_rows = build_w(&dec, 2).unwrap();
        let w_cols = build_w(&dec, k).unwrap();
        let d = build_d(&dec, k, l).unwrap();
        assert!(factorization_check_with(&dec, &w_rows, &d, &w_cols).unwrap().holds);
        let v = w_rows.matrix.get(0, 0) + rat(1);
        w_rows.matrix.set(0, 0, v);
        assert!(!factorization_check_with(&dec, &w_rows, &d, &w_cols).unwrap().holds);
        assert!(matches!(
            factorization_check_with(&dec, &w_cols, &d, &w_cols),
            Err(Error::BasisMismatch(_))
        ));
    }

    #[test]
    fn easy_corollary_precondition() {
        let dec = PowerSumDecomposition::from_terms(
            &vars("x0,x1"),
            5,
            vec![
                (rat(1), LinearForm::from_ints(&[1, 0])),
                (rat(1), LinearForm::from_ints(&[0, 1])),
                (rat(1), LinearForm::from_ints(&[1, 1])),
            ],
        )
        .unwrap();
        assert!(matches!(corollary_easy_check(&dec, 1, &RankPolicy::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn binary_ranks() {
        assert_eq!(binary_waring_rank(&form("x0,x1", "x0^3 + x1^3")).unwrap(), 2);
        assert_eq!(binary_waring_rank(&form("x0,x1", "x0*x1^2")).unwrap(), 3);
        assert_eq!(binary_waring_rank(&form("x0,x1", "x0^6")).unwrap(), 1);
        assert!(matches!(binary_waring_rank(&form("x,y,z", "x*y*z")), Err(Error::NotBinary(3))));
        let a = binary_waring_analysis(&form("x0,x1", "x0*x1^4")).unwrap();
        assert_eq!(a.rank, 5);
        let w = a.witness.unwrap();
        assert!(apply(&w, &form("x0,x1", "x0*x1^4")).unwrap().is_none());
    }
}
