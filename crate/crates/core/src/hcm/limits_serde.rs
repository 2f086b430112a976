//! `[l0, linf]` as JSON, with infinite limits written as `"inf"` / `"-inf"`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Limit {
    Finite(f64),
    Named(String),
}

fn to_limit(v: f64) -> Limit {
    if v.is_finite() {
        Limit::Finite(v)
    } else if v > 0.0 {
        Limit::Named("inf".into())
    } else {
        Limit::Named("-inf".into())
    }
}

pub fn serialize<S: Serializer>(limits: &[f64; 2], s: S) -> Result<S::Ok, S::Error> {
    [to_limit(limits[0]), to_limit(limits[1])].serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 2], D::Error> {
    let raw = <[Limit; 2]>::deserialize(d)?;
    let mut out = [0.0; 2];
    for (slot, l) in out.iter_mut().zip(raw) {
        *slot = match l {
            Limit::Finite(v) => v,
            Limit::Named(s) => match s.as_str() {
                "inf" => f64::INFINITY,
                "-inf" => f64::NEG_INFINITY,
                other => return Err(serde::de::Error::custom(format!("unknown limit {other:?}"))),
            },
        };
    }
    Ok(out)
}
