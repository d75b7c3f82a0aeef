//! Dense univariate polynomials over the rationals and the squarefree test
//! for binary forms.
//!
//! A binary form `G(X0, X1) = Σ g_i X0^i X1^(r-i)` is handled through its
//! dehomogenization `g(t) = G(t, 1)`; the factor `X1^m` that dehomogenization
//! loses (the root at infinity) is tracked as `m = r - deg g`.

use num_rational::BigRational;
use num_traits::Zero;

/// Coefficients from the constant term up; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<BigRational>);

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect(),
        )
    }

    pub fn rem(&self, divisor: &UPoly) -> UPoly {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.0[dd].clone();
        let mut r = self.0.clone();
        while r.len() > dd {
            let shift = r.len() - 1 - dd;
            let q = r.last().unwrap() / &lead;
            for (i, c) in divisor.0.iter().enumerate() {
                r[shift + i] -= &q * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UPoly::new(r)
    }

    pub fn monic(&self) -> UPoly {
        match self.0.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.recip();
                UPoly(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// No repeated complex roots.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) | Some(1) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }
}

/// A binary form of degree `r` in dehomogenized shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub degree: usize,
    /// `G(t, 1)`.
    pub affine: UPoly,
}

impl BinaryForm {
    /// From coefficients `g_i` of `X0^i X1^(r-i)`, `i = 0..=r`.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let degree = coeffs.len() - 1;
        BinaryForm { degree, affine: UPoly::new(coeffs) }
    }

    pub fn is_zero(&self) -> bool {
        self.affine.is_zero()
    }

    /// Multiplicity of the root at infinity, i.e. the power of `X1` dividing the form.
    pub fn infinity_multiplicity(&self) -> usize {
        self.affine.degree().map_or(self.degree, |a| self.degree - a)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.infinity_multiplicity() <= 1 && self.affine.is_squarefree()
    }

    /// Greatest common divisor of several forms, normalised monic in `t`.
    pub fn gcd_all(forms: &[BinaryForm]) -> Option<BinaryForm> {
        let nonzero: Vec<&BinaryForm> = forms.iter().filter(|f| !f.is_zero()).collect();
        let first = nonzero.first()?;
        let mut g = first.affine.clone();
        let mut inf = first.infinity_multiplicity();
        for f in &nonzero[1..] {
            g = g.gcd(&f.affine);
            inf = inf.min(f.infinity_multiplicity());
        }
        let g = g.monic();
        let degree = g.degree().unwrap_or(0) + inf;
        Some(BinaryForm { degree, affine: g })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    fn bf(c: &[i64]) -> BinaryForm {
        BinaryForm::from_coeffs(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    #[test]
    fn gcd_and_squarefree() {
        // (t-1)^2 (t+2) and (t-1)(t+3)
        let a = up(&[2, -3, 0, 1]);
        let b = up(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), up(&[-1, 1]));
        assert!(!a.is_squarefree());
        assert!(b.is_squarefree());
        assert!(up(&[5]).is_squarefree());
        assert!(!up(&[]).is_squarefree());
    }

    #[test]
    fn root_at_infinity_counts() {
        // X0 X1: roots 0 and infinity, squarefree.
        assert!(bf(&[0, 1, 0]).is_squarefree());
        // X1^2: double root at infinity.
        let x1sq = bf(&[1, 0, 0]);
        assert_eq!(x1sq.infinity_multiplicity(), 2);
        assert!(!x1sq.is_squarefree());
        // X0^2: double root at zero.
        assert!(!bf(&[0, 0, 1]).is_squarefree());
    }

    #[test]
    fn gcd_of_binary_forms() {
        // X0 X1 and X1^2 share X1.
        let g = BinaryForm::gcd_all(&[bf(&[0, 1, 0]), bf(&[1, 0, 0])]).unwrap();
        assert_eq!((g.degree, g.infinity_multiplicity()), (1, 1));
        assert!(BinaryForm::gcd_all(&[bf(&[0, 0])]).is_none());
    }
}
