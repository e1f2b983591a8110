//! Integer-only JSON encoding. Gaussian integers are `[re, im]` arrays and
//! every integer is written with all of its digits.

use std::str::FromStr;

use gausshappy::GaussianInt;
use num_bigint::BigInt;
use serde_json::{Number, Value};

pub fn int(n: impl ToString) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integer literal"))
}

pub fn gaussian(z: &GaussianInt) -> Value {
    Value::Array(vec![int(z.re()), int(z.im())])
}

pub fn gaussians<'a>(zs: impl IntoIterator<Item = &'a GaussianInt>) -> Value {
    Value::Array(zs.into_iter().map(gaussian).collect())
}

/// Integer payload of a JSON number; floats and non-numbers give `None`.
pub fn to_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).ok(),
        _ => None,
    }
}

pub fn to_gaussian(v: &Value) -> Option<GaussianInt> {
    match v.as_array()?.as_slice() {
        [re, im] => Some(GaussianInt::new(to_int(re)?, to_int(im)?)),
        _ => None,
    }
}
