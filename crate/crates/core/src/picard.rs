//! Imaginary quadratic orders over ℤ, their ideals in Hermite normal form,
//! and the correspondence between classes of primitive forms and ideal
//! classes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::algebras::FreeQuadraticAlgebra;
use crate::error::{Error, Result};
use crate::forms::{check_negative_discriminant, principal_form, reduce_posdef, TwistedForm};
use crate::lattice::hermite_basis;
use crate::ring::{json_int, RingHandle};

/// `ℤ[ω]` with `ω² + π̃ω − k = 0`, `k = (Δ − π̃²)/4`, `Δ < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticOrder {
    delta: BigInt,
    pitilde: BigInt,
    k: BigInt,
}

/// An element `x + yω` of an order.
pub type OrderElement = (BigInt, BigInt);

impl QuadraticOrder {
    pub fn new(delta: impl Into<BigInt>, pitilde: impl Into<BigInt>) -> Result<Self> {
        let (delta, pitilde) = (delta.into(), pitilde.into());
        let parity = check_negative_discriminant(&delta)?;
        if pitilde != parity {
            return Err(Error::BadParityLift);
        }
        let k = (&delta - &pitilde * &pitilde) / 4;
        Ok(QuadraticOrder { delta, pitilde, k })
    }

    /// The order with `π̃ = Δ mod 2`.
    pub fn from_delta(delta: impl Into<BigInt>) -> Result<Self> {
        let delta = delta.into();
        let p = check_negative_discriminant(&delta)?;
        QuadraticOrder::new(delta, p)
    }

    pub fn delta(&self) -> &BigInt {
        &self.delta
    }

    pub fn pitilde(&self) -> &BigInt {
        &self.pitilde
    }

    /// `(Δ − π̃²)/4`, so that `ω² = k − π̃ω`.
    pub fn k(&self) -> &BigInt {
        &self.k
    }

    /// The order as the algebra `ℤ[ω]/(ω² + π̃ω − k)`.
    pub fn algebra(&self) -> FreeQuadraticAlgebra {
        let z = RingHandle::integers();
        FreeQuadraticAlgebra {
            r: z.int(self.pitilde.clone()),
            s: z.int(-&self.k),
        }
    }

    pub fn mul(&self, x: &OrderElement, y: &OrderElement) -> OrderElement {
        let yy = &x.1 * &y.1;
        (
            &x.0 * &y.0 + &self.k * &yy,
            &x.0 * &y.1 + &y.0 * &x.1 - &self.pitilde * &yy,
        )
    }

    /// `N(x + yω) = x² − π̃xy − ky²`.
    pub fn norm(&self, x: &OrderElement) -> BigInt {
        &x.0 * &x.0 - &self.pitilde * &x.0 * &x.1 - &self.k * &x.1 * &x.1
    }

    /// Image under `ω ↦ −π̃ − ω`.
    pub fn conj(&self, x: &OrderElement) -> OrderElement {
        (&x.0 - &self.pitilde * &x.1, -&x.1)
    }

    /// The ideal generated (as a ℤ-module, after closing under `ω`) by the
    /// given elements.
    pub fn ideal(&self, generators: &[OrderElement]) -> Result<OrderIdeal> {
        let mut gens = Vec::with_capacity(generators.len() * 2);
        for g in generators {
            gens.push(g.clone());
            gens.push(self.mul(g, &(BigInt::zero(), BigInt::one())));
        }
        OrderIdeal::from_lattice(self, &gens)
    }

    pub fn unit_ideal(&self) -> OrderIdeal {
        OrderIdeal {
            order: self.clone(),
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"delta": json_int(&self.delta), "pitilde": json_int(&self.pitilde)})
    }
}

impl fmt::Display for QuadraticOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[ω], ω² + {}ω - ({}) = 0", self.pitilde, self.k)
    }
}

/// A nonzero ideal with ℤ-basis `a`, `b + cω`, where `a, c > 0` and
/// `0 ≤ b < a`; this basis is unique for the lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderIdeal {
    order: QuadraticOrder,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl OrderIdeal {
    /// Canonical basis of the ℤ-span of `generators`; fails with
    /// `NotAnIdeal` unless the span is a full-rank lattice stable under `ω`.
    pub fn from_lattice(order: &QuadraticOrder, generators: &[OrderElement]) -> Result<Self> {
        // coordinates ordered (ω, 1) so the echelon form is (c, b), (0, a)
        let rows: Vec<Vec<BigInt>> = generators.iter().map(|g| vec![g.1.clone(), g.0.clone()]).collect();
        let h = hermite_basis(&rows, 2);
        if h.len() < 2 || h[0][0].is_zero() {
            return Err(Error::NotAnIdeal);
        }
        let ideal = OrderIdeal {
            order: order.clone(),
            a: h[1][1].clone(),
            b: h[0][1].clone(),
            c: h[0][0].clone(),
        };
        let omega = (BigInt::zero(), BigInt::one());
        for g in ideal.basis() {
            if !ideal.contains(&order.mul(&g, &omega)) {
                return Err(Error::NotAnIdeal);
            }
        }
        Ok(ideal)
    }

    /// Ideal from its basis matrix `[[a, b], [0, c]]`.
    pub fn from_hnf(order: &QuadraticOrder, a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        OrderIdeal::from_lattice(order, &[(a, BigInt::zero()), (b, c)])
    }

    pub fn order(&self) -> &QuadraticOrder {
        &self.order
    }

    /// `(a, b, c)` of the basis `a`, `b + cω`.
    pub fn hnf(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    pub fn basis(&self) -> [OrderElement; 2] {
        [
            (self.a.clone(), BigInt::zero()),
            (self.b.clone(), self.c.clone()),
        ]
    }

    pub fn contains(&self, x: &OrderElement) -> bool {
        let (q, r) = x.1.div_rem(&self.c);
        r.is_zero() && ((&x.0 - &q * &self.b) % &self.a).is_zero()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "delta": json_int(&self.order.delta),
            "pitilde": json_int(&self.order.pitilde),
            "hnf": [[json_int(&self.a), json_int(&self.b)], [0, json_int(&self.c)]],
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let int = |x: Option<&Value>| {
            x.and_then(Value::as_i64)
                .map(BigInt::from)
                .ok_or_else(|| Error::Parse("ideal needs integer delta, pitilde and hnf entries".into()))
        };
        let order = QuadraticOrder::new(int(v.get("delta"))?, int(v.get("pitilde"))?)?;
        let h = v.get("hnf");
        let entry = |i: usize, j: usize| int(h.and_then(|h| h.get(i)).and_then(|r| r.get(j)));
        if !entry(1, 0)?.is_zero() {
            return Err(Error::Parse("hnf must be upper triangular".into()));
        }
        OrderIdeal::from_hnf(&order, entry(0, 0)?, entry(0, 1)?, entry(1, 1)?)
    }
}

impl fmt::Display for OrderIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match (self.b.is_zero(), self.c.is_one()) {
            (true, true) => "ω".to_string(),
            (true, false) => format!("{}ω", self.c),
            (false, true) => format!("{}+ω", self.b),
            (false, false) => format!("{}+{}ω", self.b, self.c),
        };
        write!(f, "⟨{}, {}⟩", self.a, v)
    }
}

fn same_order(i: &OrderIdeal, j: &OrderIdeal) -> Result<()> {
    if i.order != j.order {
        Err(Error::OrderMismatch)
    } else {
        Ok(())
    }
}

/// The ideal `⟨|a|, ω + (π̃ − b)/2⟩` attached to a primitive form `[a, b, c]`.
pub fn form_to_ideal(q: &TwistedForm, order: &QuadraticOrder) -> Result<OrderIdeal> {
    let [a, b, _] = q
        .integer_coeffs()
        .ok_or_else(|| Error::UnsupportedRing("forms must be over ℤ".into()))?;
    if a.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let t = q.natural_type();
    let z = q.ring();
    if t.delta != z.int(order.delta.clone()) || t.parity != z.int(order.pitilde.clone()).mod2() {
        return Err(Error::TypeMismatch);
    }
    if !q.is_primitive()? {
        return Err(Error::NotPrimitive);
    }
    let shift = (&order.pitilde - &b) / 2;
    let ideal = OrderIdeal::from_lattice(order, &[(a.abs(), BigInt::zero()), (shift, BigInt::one())])
        .map_err(|_| Error::Internal(format!("{q} does not give an ideal")))?;
    if ideal_norm(&ideal) != a.abs() {
        return Err(Error::Internal(format!("ideal of {q} has the wrong norm")));
    }
    Ok(ideal)
}

/// The norm form `N(x·a + y·(b + cω))/N(I)` with its middle coefficient
/// negated; under this convention `⟨3, ω − 1⟩` (discriminant −44) maps to
/// `[3, 2, 4]`.
pub fn ideal_to_form(ideal: &OrderIdeal) -> Result<TwistedForm> {
    if !is_invertible(ideal) {
        return Err(Error::NotInvertible);
    }
    let OrderIdeal { order, a, b, c } = ideal;
    let (p, k) = (&order.pitilde, &order.k);
    let n = a * c;
    let div = |x: BigInt, d: &BigInt| -> Result<BigInt> {
        let (q, r) = x.div_rem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Internal(format!("norm form of {ideal} is not integral")))
        }
    };
    let fa = div(a * a, &n)?;
    let fb = div(a * (b * 2 - p * c), &n)?;
    let fc = div(b * b - p * b * c - k * c * c, &n)?;
    Ok(TwistedForm::over_integers(fa, -fb, fc))
}

/// HNF of the product lattice.
pub fn ideal_mul(i: &OrderIdeal, j: &OrderIdeal) -> Result<OrderIdeal> {
    same_order(i, j)?;
    let o = &i.order;
    let mut gens = Vec::with_capacity(4);
    for x in i.basis() {
        for y in j.basis() {
            gens.push(o.mul(&x, &y));
        }
    }
    OrderIdeal::from_lattice(o, &gens)
}

/// Index of the ideal in the order.
pub fn ideal_norm(i: &OrderIdeal) -> BigInt {
    &i.a * &i.c
}

/// Image under `ω ↦ −π̃ − ω`.
pub fn conjugate(i: &OrderIdeal) -> OrderIdeal {
    let o = &i.order;
    let gens: Vec<_> = i.basis().iter().map(|g| o.conj(g)).collect();
    OrderIdeal::from_lattice(o, &gens).expect("conjugate of an ideal is an ideal")
}

/// Whether `I · Ī = N(I) · O`.
pub fn is_invertible(i: &OrderIdeal) -> bool {
    let n = ideal_norm(i);
    let prod = ideal_mul(i, &conjugate(i)).expect("same order");
    prod == OrderIdeal {
        order: i.order.clone(),
        a: n.clone(),
        b: BigInt::zero(),
        c: n,
    }
}

/// Principality through reduction of the attached form.
pub fn is_principal(i: &OrderIdeal) -> Result<bool> {
    let q = reduce_posdef(&ideal_to_form(i)?)?;
    Ok(q == principal_form(&i.order.delta)?)
}

/// Elements of the order of norm `n`, each up to nothing (all signs listed).
pub fn elements_of_norm(order: &QuadraticOrder, n: &BigInt) -> Vec<OrderElement> {
    // (2x − π̃y)² + |Δ|y² = 4n
    let d = order.delta.abs();
    let four_n: BigInt = n * 4;
    let ymax = (&four_n / &d).sqrt();
    let mut out = Vec::new();
    let mut y = -ymax.clone();
    while y <= ymax {
        let rest = &four_n - &d * &y * &y;
        if !rest.is_negative() {
            let t = rest.sqrt();
            if &t * &t == rest {
                let ts = if t.is_zero() { vec![t] } else { vec![t.clone(), -t] };
                for t in ts {
                    let two_x = t + &order.pitilde * &y;
                    if two_x.is_even() {
                        out.push((two_x / 2, y.clone()));
                    }
                }
            }
        }
        y += 1;
    }
    out
}

/// Principality by searching for a generator of norm `N(I)`; independent of
/// form reduction.
pub fn is_principal_by_search(i: &OrderIdeal) -> bool {
    let o = &i.order;
    elements_of_norm(o, &ideal_norm(i))
        .iter()
        .any(|g| i.contains(g) && o.ideal(std::slice::from_ref(g)).as_ref() == Ok(i))
}

/// Reduced primitive forms of a negative discriminant and their composition.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    pub order: QuadraticOrder,
    pub reps: Vec<TwistedForm>,
}

impl ClassGroup {
    pub fn h(&self) -> usize {
        self.reps.len()
    }

    pub fn identity(&self) -> TwistedForm {
        principal_form(&self.order.delta).expect("valid discriminant")
    }

    /// Class of the product of the attached ideals, as a reduced form.
    pub fn compose(&self, q1: &TwistedForm, q2: &TwistedForm) -> Result<TwistedForm> {
        let i1 = form_to_ideal(&reduce_posdef(q1)?, &self.order)?;
        let i2 = form_to_ideal(&reduce_posdef(q2)?, &self.order)?;
        reduce_posdef(&ideal_to_form(&ideal_mul(&i1, &i2)?)?)
    }

    /// Reduced opposite form.
    pub fn inverse(&self, q: &TwistedForm) -> Result<TwistedForm> {
        reduce_posdef(&q.opposite())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "h": self.h(),
            "reps": self.reps.iter().map(TwistedForm::coeffs_json).collect::<Vec<_>>(),
        })
    }
}

/// All reduced primitive positive definite forms of discriminant `delta`,
/// sorted by `(a, |b|)` with positive `b` first.
pub fn class_group(delta: &BigInt) -> Result<ClassGroup> {
    let order = QuadraticOrder::from_delta(delta.clone())?;
    let amax = (delta.abs() / BigInt::from(3)).sqrt();
    let mut reps = Vec::new();
    let mut a = BigInt::one();
    while a <= amax {
        let mut b: BigInt = -&a + 1;
        while b <= a {
            let num: BigInt = &b * &b - delta;
            let four_a: BigInt = &a * 4;
            if (&num % &four_a).is_zero() {
                let c: BigInt = num / four_a;
                let boundary = b.is_negative() && a == c;
                if c >= a && !boundary && a.gcd(&b).gcd(&c).is_one() {
                    reps.push((a.clone(), b.clone(), c));
                }
            }
            b += 1;
        }
        a += 1;
    }
    reps.sort_by(|x, y| (&x.0, x.1.abs(), x.1.is_negative()).cmp(&(&y.0, y.1.abs(), y.1.is_negative())));
    Ok(ClassGroup {
        order,
        reps: reps
            .into_iter()
            .map(|(a, b, c)| TwistedForm::over_integers(a, b, c))
            .collect(),
    })
}

/// Orbits of the class set under `q ↦ opposite(q)`, in order of first
/// appearance.
pub fn pic_mod_conjugation(delta: &BigInt) -> Result<Vec<Vec<TwistedForm>>> {
    let g = class_group(delta)?;
    let mut orbits: Vec<Vec<TwistedForm>> = Vec::new();
    for q in &g.reps {
        if orbits.iter().any(|o| o.contains(q)) {
            continue;
        }
        let opp = g.inverse(q)?;
        let mut orbit = vec![q.clone()];
        if opp != *q {
            orbit.push(opp);
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// `R[τ]/(τ² + bτ + ac)`.
pub fn wood_local_algebra(q: &TwistedForm) -> FreeQuadraticAlgebra {
    FreeQuadraticAlgebra {
        r: q.b.clone(),
        s: &q.a * &q.c,
    }
}
