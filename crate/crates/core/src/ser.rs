//! Serde helpers for exact values: rationals serialize as strings (`"3/4"`).

use num_rational::BigRational;
use serde::ser::{SerializeSeq, Serializer};

pub fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rationals<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&rational_string(x))?;
    }
    seq.end()
}

pub fn opt_rationals<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => rationals(v, s),
        None => s.serialize_none(),
    }
}
