//! Twisted binary quadratic forms `a x²z + b xyz + c y²z` and their
//! `GL₂ × GL₁` and twisted `GL₂` actions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::quadtype::NaturalType;
use crate::ring::{RingElement, RingHandle};

/// The form `[a, b, c]` in a trivialized basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedForm {
    pub a: RingElement,
    pub b: RingElement,
    pub c: RingElement,
}

impl TwistedForm {
    pub fn new(a: RingElement, b: RingElement, c: RingElement) -> Result<Self> {
        if a.ring() != b.ring() || a.ring() != c.ring() {
            return Err(Error::RingMismatch);
        }
        Ok(TwistedForm { a, b, c })
    }

    pub fn over_integers(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        let z = RingHandle::integers();
        TwistedForm {
            a: z.int(a),
            b: z.int(b),
            c: z.int(c),
        }
    }

    pub fn ring(&self) -> &RingHandle {
        self.a.ring()
    }

    /// `q(u, v) = a u² + b uv + c v²`.
    pub fn eval(&self, u: &RingElement, v: &RingElement) -> RingElement {
        let t = &(&self.a * &u.square()) + &(&(&self.b * u) * v);
        &t + &(&self.c * &v.square())
    }

    /// `b² − 4ac`.
    pub fn discriminant(&self) -> RingElement {
        &self.b.square() - &(&self.a * &self.c).scale(4)
    }

    /// `(b² − 4ac, b mod 2)`.
    pub fn natural_type(&self) -> NaturalType {
        NaturalType {
            delta: self.discriminant(),
            parity: self.b.mod2(),
        }
    }

    /// The opposite form `[a, −b, c]`.
    pub fn opposite(&self) -> TwistedForm {
        TwistedForm {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
        }
    }

    /// Whether `a, b, c` generate the unit ideal.
    pub fn is_primitive(&self) -> Result<bool> {
        if self.ring().inverted().is_some() {
            return Err(Error::UnsupportedRing(
                "primitivity is defined for ℤ and table rings".into(),
            ));
        }
        self.ring()
            .generate_unit_ideal(&[self.a.clone(), self.b.clone(), self.c.clone()])
    }

    /// Integer coefficients of a form over ℤ.
    pub fn integer_coeffs(&self) -> Option<[BigInt; 3]> {
        Some([
            self.a.as_integer()?.clone(),
            self.b.as_integer()?.clone(),
            self.c.as_integer()?.clone(),
        ])
    }

    /// `[a, b, c]` as a JSON array of ring elements.
    pub fn coeffs_json(&self) -> Value {
        json!([self.a.to_json(), self.b.to_json(), self.c.to_json()])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring().descriptor(),
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "c": self.c.to_json(),
        })
    }

    /// Reads `[a, b, c]` or `{"ring":…, "a":…, "b":…, "c":…}`; `ring` is used
    /// when the JSON does not name one.
    pub fn from_json(ring: &RingHandle, v: &Value) -> Result<Self> {
        match v {
            Value::Array(xs) if xs.len() == 3 => TwistedForm::new(
                ring.element_from_json(&xs[0])?,
                ring.element_from_json(&xs[1])?,
                ring.element_from_json(&xs[2])?,
            ),
            Value::Object(map) => {
                let ring = match map.get("ring") {
                    Some(d) => RingHandle::new(
                        serde_json::from_value(d.clone()).map_err(|e| Error::Parse(e.to_string()))?,
                    )?,
                    None => ring.clone(),
                };
                let get = |k: &str| {
                    map.get(k)
                        .ok_or_else(|| Error::Parse(format!("form is missing '{k}'")))
                        .and_then(|x| ring.element_from_json(x))
                };
                TwistedForm::new(get("a")?, get("b")?, get("c")?)
            }
            other => Err(Error::Parse(format!("cannot read a form from {other}"))),
        }
    }
}

impl fmt::Display for TwistedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

/// The substitution `x ↦ αx + βy`, `y ↦ γx + δy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GL2Matrix {
    pub alpha: RingElement,
    pub beta: RingElement,
    pub gamma: RingElement,
    pub delta: RingElement,
}

impl GL2Matrix {
    /// Checks that the entries share a ring and the determinant is a unit.
    pub fn new(alpha: RingElement, beta: RingElement, gamma: RingElement, delta: RingElement) -> Result<Self> {
        let r = alpha.ring();
        if r != beta.ring() || r != gamma.ring() || r != delta.ring() {
            return Err(Error::RingMismatch);
        }
        let m = GL2Matrix {
            alpha,
            beta,
            gamma,
            delta,
        };
        if !m.det().is_unit() {
            return Err(Error::SingularMatrix);
        }
        Ok(m)
    }

    /// Matrix `[[α, β], [γ, δ]]` over ℤ.
    pub fn integer(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Self> {
        let z = RingHandle::integers();
        GL2Matrix::new(z.int(alpha), z.int(beta), z.int(gamma), z.int(delta))
    }

    pub fn identity(ring: &RingHandle) -> Self {
        GL2Matrix {
            alpha: ring.one(),
            beta: ring.zero(),
            gamma: ring.zero(),
            delta: ring.one(),
        }
    }

    pub fn det(&self) -> RingElement {
        &(&self.alpha * &self.delta) - &(&self.beta * &self.gamma)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &GL2Matrix) -> GL2Matrix {
        let dot = |a: &RingElement, b: &RingElement, c: &RingElement, d: &RingElement| &(a * b) + &(c * d);
        GL2Matrix {
            alpha: dot(&self.alpha, &other.alpha, &self.beta, &other.gamma),
            beta: dot(&self.alpha, &other.beta, &self.beta, &other.delta),
            gamma: dot(&self.gamma, &other.alpha, &self.delta, &other.gamma),
            delta: dot(&self.gamma, &other.beta, &self.delta, &other.delta),
        }
    }
}

impl fmt::Display for GL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.alpha, self.beta, self.gamma, self.delta)
    }
}

/// `e · q(αx + βy, γx + δy)`.
///
/// This is a right action: acting by `μ₂` and then by `μ₁` equals acting by
/// the product `μ₂ μ₁`.
pub fn act_gl2gl1(mu: &GL2Matrix, e: &RingElement, q: &TwistedForm) -> Result<TwistedForm> {
    let r = q.ring();
    if mu.alpha.ring() != r || e.ring() != r {
        return Err(Error::RingMismatch);
    }
    if !e.is_unit() {
        return Err(Error::NotAUnit);
    }
    let GL2Matrix {
        alpha,
        beta,
        gamma,
        delta,
    } = mu;
    let a = q.eval(alpha, gamma);
    let c = q.eval(beta, delta);
    let cross = &(alpha * delta) + &(beta * gamma);
    let b = &(&(&q.a * &(alpha * beta)).scale(2) + &(&q.b * &cross)) + &(&q.c * &(gamma * delta)).scale(2);
    Ok(TwistedForm {
        a: e * &a,
        b: e * &b,
        c: e * &c,
    })
}

/// The twisted action `(μ, det(μ)⁻¹) · q`, which preserves the natural type.
pub fn act_gl2tw(mu: &GL2Matrix, q: &TwistedForm) -> Result<TwistedForm> {
    let e = mu.det().inverse().ok_or(Error::SingularMatrix)?;
    act_gl2gl1(mu, &e, q)
}

fn integer_coeffs(q: &TwistedForm) -> Result<[BigInt; 3]> {
    q.integer_coeffs()
        .ok_or_else(|| Error::UnsupportedRing("reduction is only defined over ℤ".into()))
}

/// Reduced representative of a definite form over ℤ together with the
/// matrices that were applied (in order, each via [`act_gl2tw`]).
///
/// The output satisfies `|b| ≤ a ≤ c` with `b ≥ 0` when `|b| = a` or `a = c`.
pub fn reduce_posdef_with_witness(q: &TwistedForm) -> Result<(TwistedForm, Vec<GL2Matrix>)> {
    let [mut a, mut b, mut c] = integer_coeffs(q)?;
    if !(&b * &b - BigInt::from(4) * &a * &c).is_negative() {
        return Err(Error::NotDefinite);
    }
    let mut word = Vec::new();
    if a.is_negative() {
        word.push(GL2Matrix::integer(1, 0, 0, -1)?);
        a = -a;
        c = -c;
    }
    let swap = GL2Matrix::integer(0, -1, 1, 0)?;
    loop {
        // translate b into (−a, a]
        let t = (&a - &b).div_floor(&(&a * 2));
        if !t.is_zero() {
            let z = RingHandle::integers();
            word.push(GL2Matrix::new(z.one(), z.int(t.clone()), z.zero(), z.one())?);
            c = &a * &t * &t + &b * &t + &c;
            b = &b + &a * &t * 2;
        }
        if a > c {
            word.push(swap.clone());
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b.is_negative() {
            word.push(swap.clone());
            b = -b;
        }
        break;
    }
    Ok((TwistedForm::over_integers(a, b, c), word))
}

/// Reduced representative of a definite form over ℤ.
pub fn reduce_posdef(q: &TwistedForm) -> Result<TwistedForm> {
    reduce_posdef_with_witness(q).map(|(r, _)| r)
}

/// Whether a form over ℤ is reduced (positive definite case).
pub fn is_reduced(q: &TwistedForm) -> bool {
    let Some([a, b, c]) = q.integer_coeffs() else {
        return false;
    };
    a.is_positive() && b.abs() <= a && a <= c && (!b.is_negative() || (b.abs() != a && a != c))
}

fn check_pair(q1: &TwistedForm, q2: &TwistedForm) -> Result<()> {
    integer_coeffs(q1)?;
    integer_coeffs(q2)?;
    if q1.discriminant() != q2.discriminant() {
        return Err(Error::DiscriminantMismatch);
    }
    Ok(())
}

/// Equivalence under the twisted `GL₂` action (definite forms over ℤ).
pub fn equivalent_gl2tw(q1: &TwistedForm, q2: &TwistedForm) -> Result<bool> {
    check_pair(q1, q2)?;
    Ok(reduce_posdef(q1)? == reduce_posdef(q2)?)
}

/// Equivalence under `GL₂ × GL₁` (definite forms over ℤ): the twisted class
/// of `q2` or of its opposite.
pub fn equivalent_gl2gl1(q1: &TwistedForm, q2: &TwistedForm) -> Result<bool> {
    check_pair(q1, q2)?;
    let r1 = reduce_posdef(q1)?;
    Ok(r1 == reduce_posdef(q2)? || r1 == reduce_posdef(&q2.opposite())?)
}

/// Checks that `delta` is a negative integer congruent to 0 or 1 mod 4 and
/// returns its parity lift `delta mod 2`.
pub(crate) fn check_negative_discriminant(delta: &BigInt) -> Result<BigInt> {
    let r = delta.mod_floor(&BigInt::from(4));
    if !delta.is_negative() || r > BigInt::from(1) {
        return Err(Error::InvalidDiscriminant(delta.to_string()));
    }
    Ok(r)
}

/// `[1, π̃, (π̃² − Δ)/4]` with `π̃ = Δ mod 2`.
pub fn principal_form(delta: &BigInt) -> Result<TwistedForm> {
    let p = check_negative_discriminant(delta)?;
    let c = (&p * &p - delta) / 4;
    Ok(TwistedForm::over_integers(1, p, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;

    fn f(a: i64, b: i64, c: i64) -> TwistedForm {
        TwistedForm::over_integers(a, b, c)
    }

    #[test]
    fn gl2gl1_examples() {
        let z = RingHandle::integers();
        let q = f(3, 2, 4);
        let id = GL2Matrix::identity(&z);
        assert_eq!(act_gl2gl1(&id, &z.one(), &q).unwrap(), q);
        let s = GL2Matrix::integer(0, -1, 1, 0).unwrap();
        assert_eq!(act_gl2gl1(&s, &z.one(), &f(5, 7, 11)).unwrap(), f(11, -7, 5));
        let t = GL2Matrix::integer(1, 0, 1, 1).unwrap();
        assert_eq!(act_gl2gl1(&t, &z.one(), &f(5, 7, 11)).unwrap(), f(23, 29, 11));
        assert_eq!(act_gl2gl1(&t, &z.int(2), &q).unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn gl2tw_examples() {
        let z = RingHandle::integers();
        let q = f(3, 2, 4);
        assert_eq!(act_gl2tw(&GL2Matrix::identity(&z), &q).unwrap(), q);
        let t = GL2Matrix::integer(1, 0, 1, 1).unwrap();
        assert_eq!(act_gl2tw(&t, &q).unwrap(), f(9, 10, 4));
        let flip = GL2Matrix::integer(1, 0, 0, -1).unwrap();
        assert_eq!(act_gl2tw(&flip, &f(1, 0, 11)).unwrap(), f(-1, 0, -11));
        let singular = GL2Matrix {
            alpha: z.int(2),
            beta: z.zero(),
            gamma: z.zero(),
            delta: z.one(),
        };
        assert_eq!(act_gl2tw(&singular, &q).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn natural_types() {
        let z = RingHandle::integers();
        let t = f(3, 2, 4).natural_type();
        assert_eq!((t.delta, t.parity), (z.int(-44), z.zero().mod2()));
        assert_eq!(f(1, 0, 11).natural_type().delta, z.int(-44));
        let t = f(1, 1, -1).natural_type();
        assert_eq!((t.delta, t.parity), (z.int(5), z.one().mod2()));
    }

    #[test]
    fn primitivity() {
        assert!(f(3, 2, 4).is_primitive().unwrap());
        assert!(!f(2, 2, 4).is_primitive().unwrap());
        let r = RingHandle::new(RingDescriptor::sqrt(8)).unwrap();
        let w = r.basis(1);
        let q = TwistedForm::new(w.clone(), r.int(2), w.clone()).unwrap();
        assert!(!q.is_primitive().unwrap());
        let q = TwistedForm::new(w.clone(), r.int(3), w).unwrap();
        assert!(q.is_primitive().unwrap());
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce_posdef(&f(9, 10, 4)).unwrap(), f(3, 2, 4));
        assert_eq!(reduce_posdef(&f(1, 0, 11)).unwrap(), f(1, 0, 11));
        assert_eq!(reduce_posdef(&f(-3, 2, -4)).unwrap(), f(3, 2, 4));
        assert_eq!(reduce_posdef(&f(1, 1, -1)).unwrap_err(), Error::NotDefinite);
        assert_eq!(reduce_posdef(&f(4, -4, 5)).unwrap(), f(4, 4, 5));
        assert_eq!(reduce_posdef(&f(3, -2, 3)).unwrap(), f(3, 2, 3));
    }

    #[test]
    fn witness_replays() {
        for q in [f(9, 10, 4), f(-3, 2, -4), f(100, 181, 82), f(7, -13, 7)] {
            let (r, word) = reduce_posdef_with_witness(&q).unwrap();
            let mut cur = q.clone();
            for m in &word {
                cur = act_gl2tw(m, &cur).unwrap();
            }
            assert_eq!(cur, r);
            assert!(is_reduced(&r));
        }
    }

    #[test]
    fn equivalences() {
        assert!(equivalent_gl2tw(&f(9, 10, 4), &f(3, 2, 4)).unwrap());
        assert!(!equivalent_gl2tw(&f(3, 2, 4), &f(3, -2, 4)).unwrap());
        assert!(equivalent_gl2tw(&f(3, 2, 4), &f(3, 2, 4)).unwrap());
        assert!(equivalent_gl2gl1(&f(3, 2, 4), &f(3, -2, 4)).unwrap());
        assert!(!equivalent_gl2gl1(&f(1, 0, 11), &f(3, 2, 4)).unwrap());
        assert!(equivalent_gl2gl1(&f(1, 0, 11), &f(1, 0, 11)).unwrap());
        assert_eq!(
            equivalent_gl2tw(&f(1, 0, 11), &f(1, 1, 1)).unwrap_err(),
            Error::DiscriminantMismatch
        );
    }

    #[test]
    fn principal_forms() {
        assert_eq!(principal_form(&BigInt::from(-44)).unwrap(), f(1, 0, 11));
        assert_eq!(principal_form(&BigInt::from(-3)).unwrap(), f(1, 1, 1));
        assert_eq!(principal_form(&BigInt::from(-4)).unwrap(), f(1, 0, 1));
        assert!(principal_form(&BigInt::from(-5)).is_err());
        assert!(principal_form(&BigInt::from(5)).is_err());
    }
}
