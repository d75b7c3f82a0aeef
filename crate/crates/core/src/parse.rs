//! Text format for polynomials.
//!
//! Terms are joined by `+`/`-`. A term is an optional rational coefficient
//! (`p` or `p/q`) followed by `*`-separated factors `var` or `var^k`.
//! Whitespace is ignored. Variable names come from a declared [`Vars`] list.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Form, Monomial, Poly, Vars};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().expect("ascii digits parse"))
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a variable name");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }
}

/// Parse a (possibly inhomogeneous) polynomial.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<Poly> {
    let n = vars.len();
    let mut cur = Cursor { src: text.as_bytes(), pos: 0 };
    let mut out = Poly::zero(n);
    let mut first = true;
    loop {
        let mut sign = BigRational::one();
        match cur.peek() {
            None if first => return cur.err("empty polynomial"),
            None => return cur.err("expected a term after the operator"),
            Some(b'+') => {
                cur.pos += 1;
            }
            Some(b'-') => {
                cur.pos += 1;
                sign = -sign;
            }
            Some(_) if first => {}
            Some(c) => return cur.err(format!("expected `+` or `-`, found `{}`", c as char)),
        }
        first = false;

        let mut coeff = sign;
        let mut exps = vec![0u32; n];
        let mut have_factor = false;
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = cur.digits()?;
            let mut c = BigRational::from_integer(num);
            if cur.peek() == Some(b'/') {
                cur.pos += 1;
                let den = cur.digits()?;
                if den.is_zero() {
                    return cur.err("zero denominator");
                }
                c /= BigRational::from_integer(den);
            }
            coeff *= c;
            if cur.peek() == Some(b'*') {
                cur.pos += 1;
                parse_factor(&mut cur, vars, &mut exps)?;
                have_factor = true;
            } else if cur.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == b'_') {
                parse_factor(&mut cur, vars, &mut exps)?;
                have_factor = true;
            }
        } else {
            parse_factor(&mut cur, vars, &mut exps)?;
            have_factor = true;
        }
        if have_factor {
            while cur.peek() == Some(b'*') {
                cur.pos += 1;
                parse_factor(&mut cur, vars, &mut exps)?;
            }
        }
        out.add_term(Monomial::new(exps), coeff);
        if cur.peek().is_none() {
            break;
        }
    }
    Ok(out)
}

fn parse_factor(cur: &mut Cursor<'_>, vars: &Vars, exps: &mut [u32]) -> Result<()> {
    let at = {
        cur.skip_ws();
        cur.pos
    };
    let name = cur.ident()?;
    let idx = vars.index_of(name).ok_or_else(|| Error::Parse {
        pos: at,
        msg: format!("unknown variable `{name}`"),
    })?;
    let mut e: u32 = 1;
    if cur.peek() == Some(b'^') {
        cur.pos += 1;
        let k = cur.digits()?;
        e = u32::try_from(k).or_else(|_| cur.err("exponent too large"))?;
    }
    exps[idx] = exps[idx].checked_add(e).ok_or_else(|| Error::Parse { pos: cur.pos, msg: "exponent overflow".into() })?;
    Ok(())
}

/// Parse a homogeneous nonzero form.
pub fn parse_form(text: &str, vars: &Vars) -> Result<Form> {
    let p = parse_poly(text, vars)?;
    Form::new(vars.clone(), p)
}

fn render_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Render in descending graded-lex order, e.g. `x*u^3*v + y*u*v^3 - 1/2*x^2`.
pub fn render<S: AsRef<str>>(p: &Poly, names: &[S]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let factors: Vec<String> = m
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| if e == 1 { names[v].as_ref().to_string() } else { format!("{}^{e}", names[v].as_ref()) })
            .collect();
        if factors.is_empty() {
            out.push_str(&render_coeff(&abs));
        } else {
            if !abs.is_one() {
                out.push_str(&render_coeff(&abs));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}
