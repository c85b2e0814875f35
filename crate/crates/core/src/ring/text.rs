//! Human-readable and JSON renderings of ring elements.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{Backend, RingElement, RingHandle};
use crate::error::{Error, Result};

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((num, den)) = self.ring.to_rational(self) {
            return if den.is_one() {
                write!(f, "{num}")
            } else {
                write!(f, "{num}/{den}")
            };
        }
        let names = self.ring.basis_names();
        let mut out = String::new();
        for (c, name) in self.coords.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = if name == "1" {
                mag.to_string()
            } else if mag.is_one() {
                name.clone()
            } else {
                format!("{mag}{name}")
            };
            if c.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// An integer as a JSON number, or a decimal string beyond 64 bits.
pub fn json_int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn value_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s}"))),
        other => Err(Error::Parse(format!("not an integer: {other}"))),
    }
}

impl RingElement {
    /// JSON rendering: an integer for rank-1 rings, a coordinate array
    /// otherwise, and `{"coords":[n],"k":k}` for fractions in a localization.
    pub fn to_json(&self) -> Value {
        if self.k > 0 {
            return json!({"coords": [json_int(&self.coords[0])], "k": self.k});
        }
        if self.coords.len() == 1 {
            return json_int(&self.coords[0]);
        }
        Value::Array(self.coords.iter().map(json_int).collect())
    }
}

impl RingHandle {
    /// Reads an element from JSON: an integer (its image in the ring), a
    /// coordinate array, a `{"coords", "k"}` object, or an expression string.
    pub fn element_from_json(&self, v: &Value) -> Result<RingElement> {
        match v {
            Value::Number(_) => Ok(self.int(value_int(v)?)),
            Value::String(s) => self.parse_element(s),
            Value::Array(xs) => {
                let coords = xs.iter().map(value_int).collect::<Result<Vec<_>>>()?;
                self.element(coords)
            }
            Value::Object(map) => {
                let coords = match map.get("coords") {
                    Some(Value::Array(xs)) => xs.iter().map(value_int).collect::<Result<Vec<_>>>()?,
                    _ => return Err(Error::Parse("element object needs a coords array".into())),
                };
                let k = match map.get("k") {
                    None => 0,
                    Some(k) => value_int(k)?
                        .to_u32()
                        .ok_or_else(|| Error::Parse("k must be a small non-negative integer".into()))?,
                };
                self.element_frac(coords, k)
            }
            other => Err(Error::Parse(format!("cannot read a ring element from {other}"))),
        }
    }

    /// Parses expressions such as `3-Y`, `2w`, `-1/2`, `X+XY` or `3*w`.
    /// Integers stand for multiples of the identity; basis names are matched
    /// longest first.
    pub fn parse_element(&self, text: &str) -> Result<RingElement> {
        let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let mut names: Vec<(Vec<char>, usize)> = self
            .basis_names()
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.chars().all(|c| c.is_ascii_digit()))
            .map(|(i, n)| (n.chars().collect(), i))
            .collect();
        names.sort_by_key(|n| std::cmp::Reverse(n.0.len()));
        let err = |msg: &str| Error::Parse(format!("{msg} in '{text}'"));
        let read_int = |pos: &mut usize| -> Option<BigInt> {
            let start = *pos;
            while *pos < s.len() && s[*pos].is_ascii_digit() {
                *pos += 1;
            }
            (start < *pos).then(|| s[start..*pos].iter().collect::<String>().parse().unwrap())
        };
        let mut total = self.zero();
        let mut pos = 0;
        while pos < s.len() {
            let mut negative = false;
            if s[pos] == '+' || s[pos] == '-' {
                negative = s[pos] == '-';
                pos += 1;
            } else if pos > 0 {
                return Err(err("expected '+' or '-'"));
            }
            let num = read_int(&mut pos);
            let mut den = None;
            if num.is_some() && pos < s.len() && s[pos] == '/' {
                pos += 1;
                den = Some(read_int(&mut pos).ok_or_else(|| err("missing denominator"))?);
            }
            if num.is_some() && pos < s.len() && s[pos] == '*' {
                pos += 1;
            }
            let basis = names
                .iter()
                .find(|(n, _)| s[pos..].starts_with(n))
                .map(|(n, i)| (n.len(), *i));
            let mut term = match basis {
                Some((len, i)) => {
                    pos += len;
                    self.basis(i)
                }
                None if num.is_some() => self.one(),
                None => return Err(err("expected an integer or a basis name")),
            };
            if let Some(n) = num {
                term = term.scale(n);
            }
            if let Some(d) = den {
                if d.is_zero() {
                    return Err(err("division by zero"));
                }
                term = self
                    .try_div_int(&term, &d)
                    .ok_or_else(|| err("fraction does not exist in this ring"))?;
            }
            total = if negative { &total - &term } else { &total + &term };
        }
        Ok(total)
    }

    /// Compact label used in CLI diagnostics.
    pub fn describe(&self) -> String {
        match &self.0.backend {
            Backend::Integers => "Z".into(),
            Backend::Table(t) => format!("table ring of rank {}", t.rank),
            Backend::Quotient { table, m } => format!("quotient of rank {} modulo {m}", table.rank),
            Backend::Localization { f, .. } => format!("Z[1/{f}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_round_trip() {
        let bq = RingHandle::parse("biquad8").unwrap();
        for text in ["3-Y", "X+XY", "-2X+3XY", "0", "7"] {
            let x = bq.parse_element(text).unwrap();
            assert_eq!(x.to_string(), text);
        }
        let r = RingHandle::parse("zsqrt8").unwrap();
        assert_eq!(r.parse_element("2w").unwrap(), r.basis(1).scale(2));
        assert_eq!(r.parse_element("3 + w").unwrap().to_string(), "3+w");
        assert_eq!(r.parse_element("17+6*w").unwrap().coords()[1], BigInt::from(6));
        let l = RingHandle::parse("zloc6").unwrap();
        let x = l.parse_element("3/2").unwrap();
        assert_eq!(x.to_string(), "3/2");
        assert_eq!(x.scale(2), l.int(3));
        assert!(r.parse_element("1/2").is_err());
        assert!(r.parse_element("q").is_err());
    }

    #[test]
    fn json_round_trip() {
        let l = RingHandle::parse("zloc6").unwrap();
        let x = l.parse_element("-1/2").unwrap();
        assert_eq!(x.to_json(), json!({"coords": [-3], "k": 1}));
        assert_eq!(l.element_from_json(&x.to_json()).unwrap(), x);
        let r = RingHandle::parse("zsqrt8").unwrap();
        let y = r.element_i64(&[3, 1]).unwrap();
        assert_eq!(y.to_json(), json!([3, 1]));
        assert_eq!(r.element_from_json(&json!("3+w")).unwrap(), y);
        assert_eq!(r.element_from_json(&json!(2)).unwrap(), r.int(2));
    }
}
