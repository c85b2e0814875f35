//! Free quadratic algebras `R[τ]/(τ² + rτ + s)`: types, explicit
//! isomorphisms, orientations and exhaustive oracles over finite rings.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::quadtype::AlgebraType;
use crate::ring::{Mod2Element, RingElement, RingHandle};

/// Breadth-first closure limit when enumerating unit images in `R/2R`.
pub const UNIT_IMAGE_CAP: usize = 1 << 16;

/// `C = R[τ]/(τ² + rτ + s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeQuadraticAlgebra {
    pub r: RingElement,
    pub s: RingElement,
}

impl FreeQuadraticAlgebra {
    pub fn new(r: RingElement, s: RingElement) -> Result<Self> {
        if r.ring() != s.ring() {
            return Err(Error::RingMismatch);
        }
        Ok(FreeQuadraticAlgebra { r, s })
    }

    pub fn ring(&self) -> &RingHandle {
        self.r.ring()
    }

    pub fn to_json(&self) -> Value {
        json!({"ring": self.ring().descriptor(), "r": self.r.to_json(), "s": self.s.to_json()})
    }

    pub fn from_json(ring: &RingHandle, v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("algebra is missing '{k}'")))
                .and_then(|x| ring.element_from_json(x))
        };
        FreeQuadraticAlgebra::new(get("r")?, get("s")?)
    }
}

impl fmt::Display for FreeQuadraticAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "τ² + ({})τ + ({})", self.r, self.s)
    }
}

/// An orientation of a free algebra: the unit `u = θ(τ̄)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    pub u: RingElement,
}

impl Orientation {
    pub fn new(u: RingElement) -> Result<Self> {
        if !u.is_unit() {
            return Err(Error::NotAUnit);
        }
        Ok(Orientation { u })
    }

    pub fn trivial(ring: &RingHandle) -> Self {
        Orientation { u: ring.one() }
    }
}

/// The algebra map `τ ↦ uτ' + v` from a source to a target algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraHom {
    pub u: RingElement,
    pub v: RingElement,
}

impl AlgebraHom {
    pub fn identity(ring: &RingHandle) -> Self {
        AlgebraHom {
            u: ring.one(),
            v: ring.zero(),
        }
    }

    /// Whether `u` is a unit and `uτ' + v` satisfies the source equation in
    /// the target: the `τ'` and constant coefficients of
    /// `(uτ'+v)² + r(uτ'+v) + s` both vanish modulo `τ'² + r'τ' + s'`.
    pub fn verify(&self, source: &FreeQuadraticAlgebra, target: &FreeQuadraticAlgebra) -> bool {
        let ring = source.ring();
        if target.ring() != ring || self.u.ring() != ring || self.v.ring() != ring {
            return false;
        }
        if !self.u.is_unit() {
            return false;
        }
        let (u, v) = (&self.u, &self.v);
        let u2 = u.square();
        let lin = &(&(&u2 * &target.r).scale(-1) + &(u * v).scale(2)) + &(&source.r * u);
        let cst = &(&(&(&u2 * &target.s).scale(-1) + &v.square()) + &(&source.r * v)) + &source.s;
        lin.is_zero() && cst.is_zero()
    }

    /// `τ' ↦ u⁻¹τ − u⁻¹v`.
    pub fn inverse(&self) -> Option<AlgebraHom> {
        let ui = self.u.inverse()?;
        Some(AlgebraHom {
            v: -&(&ui * &self.v),
            u: ui,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({"u": self.u.to_json(), "v": self.v.to_json()})
    }
}

impl fmt::Display for AlgebraHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "τ ↦ ({})τ' + ({})", self.u, self.v)
    }
}

/// `(r² − 4s, r mod 2)`.
pub fn type_of(c: &FreeQuadraticAlgebra) -> AlgebraType {
    AlgebraType {
        delta: &c.r.square() - &c.s.scale(4),
        parity: c.r.mod2(),
    }
}

/// Presentation in the basis `τ' = ετ + α`: `r' = rε − 2α`,
/// `s' = α² − rαε + sε²`.
pub fn change_basis(c: &FreeQuadraticAlgebra, eps: &RingElement, alpha: &RingElement) -> Result<FreeQuadraticAlgebra> {
    if eps.ring() != c.ring() || alpha.ring() != c.ring() {
        return Err(Error::RingMismatch);
    }
    if !eps.is_unit() {
        return Err(Error::NotAUnit);
    }
    let r = &(&c.r * eps) - &alpha.scale(2);
    let s = &(&alpha.square() - &(&(&c.r * alpha) * eps)) + &(&c.s * &eps.square());
    Ok(FreeQuadraticAlgebra { r, s })
}

/// Whether `Δ − π̃² ∈ 4R` for a lift `π̃` of the parity.
pub fn is_valid_triple(t: &AlgebraType) -> Result<bool> {
    let ring = t.ring();
    if t.parity.ring() != ring {
        return Err(Error::RingMismatch);
    }
    if !ring.two_regular() {
        return Err(Error::NotTwoRegular);
    }
    let p = t.parity.lift();
    Ok(ring.in_4r(&(&t.delta - &p.square())))
}

/// `R[ω]/(ω² + π̃ω − (Δ − π̃²)/4)`.
pub fn build_from_type(t: &AlgebraType, lift: &RingElement) -> Result<FreeQuadraticAlgebra> {
    if !is_valid_triple(t)? {
        return Err(Error::InvalidTriple);
    }
    if !t.parity.is_lifted_by(lift) {
        return Err(Error::BadLift);
    }
    let ring = t.ring();
    let quarter = ring
        .try_div_int(&(&t.delta - &lift.square()), &BigInt::from(4))
        .ok_or(Error::InvalidTriple)?;
    Ok(FreeQuadraticAlgebra {
        r: lift.clone(),
        s: -&quarter,
    })
}

fn verified(hom: AlgebraHom, source: &FreeQuadraticAlgebra, target: &FreeQuadraticAlgebra) -> Result<AlgebraHom> {
    if hom.verify(source, target) {
        Ok(hom)
    } else {
        Err(Error::Internal(format!(
            "constructed map {hom} from {source} to {target} fails verification"
        )))
    }
}

/// The normalized presentation with linear coefficient `p̃` and the map
/// `τ ↦ ω + (p̃ − r)/2` into it.
pub fn freeok_iso(c: &FreeQuadraticAlgebra, p: &RingElement) -> Result<(FreeQuadraticAlgebra, AlgebraHom)> {
    let ring = c.ring();
    if p.ring() != ring {
        return Err(Error::RingMismatch);
    }
    let v = ring.try_halve(&(p - &c.r))?.ok_or(Error::ParityMismatch)?;
    let target = build_from_type(&type_of(c), p)?;
    let hom = verified(AlgebraHom { u: ring.one(), v }, c, &target)?;
    Ok((target, hom))
}

fn rational_sqrt(n: &BigInt, d: &BigInt) -> Option<(BigInt, BigInt)> {
    if n.is_negative() != d.is_negative() && !n.is_zero() {
        return None;
    }
    let (n, d) = (n.abs(), d.abs());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == n && &rd * &rd == d).then_some((rn, rd))
}

/// Some `ε` with `ε² = x` (the other root is `−ε` in the supported domains).
fn unit_square_root(ring: &RingHandle, x: &RingElement) -> Result<Option<RingElement>> {
    if ring.is_integers() || ring.inverted().is_some() {
        let (n, d) = ring.to_rational(x).expect("rational ring");
        return Ok(rational_sqrt(&n, &d).and_then(|(a, b)| ring.from_rational(&a, &b)));
    }
    match ring.sqrt_parameter() {
        Some(n) if !n.is_zero() && (n.is_negative() || n.sqrt().pow(2) != n) => {
            Ok(crate::ring::sqrt_in_quadratic(ring, &n, x))
        }
        _ => Err(Error::UnsupportedRing(format!(
            "square roots in {}",
            ring.describe()
        ))),
    }
}

/// Every residue class in `R/2R` hit by a unit, with a unit realizing it.
fn unit_images_mod2(ring: &RingHandle) -> Result<Vec<(Mod2Element, RingElement)>> {
    let gens = ring.unit_group_generators()?;
    let one = ring.one();
    let mut seen = vec![(one.mod2(), one.clone())];
    let mut queue = VecDeque::from([one]);
    while let Some(u) = queue.pop_front() {
        for g in &gens {
            let w = &u * g;
            let cls = w.mod2();
            if seen.iter().all(|(c, _)| *c != cls) {
                if seen.len() >= UNIT_IMAGE_CAP {
                    return Err(Error::UnsupportedRing("unit image in R/2R too large".into()));
                }
                seen.push((cls, w.clone()));
                queue.push_back(w);
            }
        }
    }
    Ok(seen)
}

/// A unit `ε` with `Δ₂ = ε²Δ₁` and `Π₂ = ε̄Π₁`, if one exists.
pub fn types_isomorphic(t1: &AlgebraType, t2: &AlgebraType) -> Result<Option<RingElement>> {
    let ring = t1.ring();
    if t2.ring() != ring {
        return Err(Error::RingMismatch);
    }
    let matches = |e: &RingElement| {
        &e.square() * &t1.delta == t2.delta && t1.parity.scale(e) == t2.parity
    };
    if ring.is_finite() {
        return Ok(ring.enumerate_units()?.into_iter().find(|e| matches(e)));
    }
    match (t1.delta.is_zero(), t2.delta.is_zero()) {
        (true, true) => {
            let images = unit_images_mod2(ring)?;
            Ok(images.into_iter().map(|(_, u)| u).find(|e| matches(e)))
        }
        (false, false) => {
            // validate ring support before the arithmetic
            ring.unit_group_generators()?;
            let Some(x) = ring.try_divide(&t2.delta, &t1.delta) else {
                return Ok(None);
            };
            let Some(e) = unit_square_root(ring, &x)? else {
                return Ok(None);
            };
            if !e.is_unit() {
                return Ok(None);
            }
            Ok([e.clone(), -&e].into_iter().find(|e| matches(e)))
        }
        _ => Ok(None),
    }
}

/// An isomorphism `C → C'`, present exactly when the types are isomorphic.
pub fn algebras_isomorphic(c1: &FreeQuadraticAlgebra, c2: &FreeQuadraticAlgebra) -> Result<Option<AlgebraHom>> {
    let ring = c1.ring();
    if c2.ring() != ring {
        return Err(Error::RingMismatch);
    }
    if !ring.two_regular() {
        return Err(Error::NotTwoRegular);
    }
    let Some(eps) = types_isomorphic(&type_of(c1), &type_of(c2))? else {
        return Ok(None);
    };
    let u = eps.inverse().ok_or(Error::NotAUnit)?;
    let v = ring
        .try_halve(&(&(&u * &c2.r) - &c1.r))?
        .ok_or_else(|| Error::Internal("parity relation does not halve".into()))?;
    verified(AlgebraHom { u, v }, c1, c2).map(Some)
}

/// `((r² − 4s)u⁻², r u⁻¹ mod 2)`.
pub fn oriented_type(c: &FreeQuadraticAlgebra, theta: &Orientation) -> Result<AlgebraType> {
    if theta.u.ring() != c.ring() {
        return Err(Error::RingMismatch);
    }
    let ui = theta.u.inverse().ok_or(Error::NotAUnit)?;
    let t = type_of(c);
    Ok(AlgebraType {
        delta: &t.delta * &ui.square(),
        parity: (&c.r * &ui).mod2(),
    })
}

/// The unique orientation-compatible isomorphism, present exactly when the
/// oriented types are equal.
pub fn oriented_isomorphic(
    c1: &FreeQuadraticAlgebra,
    theta1: &Orientation,
    c2: &FreeQuadraticAlgebra,
    theta2: &Orientation,
) -> Result<Option<AlgebraHom>> {
    let ring = c1.ring();
    if c2.ring() != ring {
        return Err(Error::RingMismatch);
    }
    if !ring.two_regular() {
        return Err(Error::NotTwoRegular);
    }
    if oriented_type(c1, theta1)? != oriented_type(c2, theta2)? {
        return Ok(None);
    }
    let u = &theta1.u * &theta2.u.inverse().ok_or(Error::NotAUnit)?;
    let Some(v) = ring.try_halve(&(&(&u * &c2.r) - &c1.r))? else {
        return Ok(None);
    };
    let hom = AlgebraHom { u, v };
    Ok(hom.verify(c1, c2).then_some(hom))
}

/// Every `τ ↦ uτ + v` (`u` a unit) that is an automorphism, over a finite ring.
pub fn automorphisms_bruteforce(c: &FreeQuadraticAlgebra) -> Result<Vec<AlgebraHom>> {
    all_homs(c, c, false)
}

/// The first isomorphism `C → C'` found by exhaustive search.
pub fn isomorphic_bruteforce(c1: &FreeQuadraticAlgebra, c2: &FreeQuadraticAlgebra) -> Result<Option<AlgebraHom>> {
    if c2.ring() != c1.ring() {
        return Err(Error::RingMismatch);
    }
    Ok(all_homs(c1, c2, true)?.into_iter().next())
}

fn all_homs(c1: &FreeQuadraticAlgebra, c2: &FreeQuadraticAlgebra, first_only: bool) -> Result<Vec<AlgebraHom>> {
    let ring = c1.ring();
    let elements = ring.enumerate_elements()?;
    let mut out = Vec::new();
    for u in elements.iter().filter(|u| u.is_unit()) {
        for v in &elements {
            let hom = AlgebraHom {
                u: u.clone(),
                v: v.clone(),
            };
            if hom.verify(c1, c2) {
                out.push(hom);
                if first_only {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Automorphisms compatible with the orientation, i.e. those with `u = 1`.
///
/// Finite rings are searched exhaustively. Over other rings (all of which are
/// 2-regular) the `τ` coefficient forces `2v = 0`, hence `v = 0`.
pub fn oriented_automorphisms_bruteforce(c: &FreeQuadraticAlgebra, theta: &Orientation) -> Result<Vec<AlgebraHom>> {
    let ring = c.ring();
    if theta.u.ring() != ring {
        return Err(Error::RingMismatch);
    }
    if ring.is_finite() {
        return Ok(automorphisms_bruteforce(c)?
            .into_iter()
            .filter(|h| h.u.is_one())
            .collect());
    }
    oriented_automorphisms_symbolic(c)
}

/// The 2-regular branch: solve `2v = 0`, then check the constant term.
pub fn oriented_automorphisms_symbolic(c: &FreeQuadraticAlgebra) -> Result<Vec<AlgebraHom>> {
    let ring = c.ring();
    let v = ring
        .try_halve(&ring.zero())?
        .ok_or_else(|| Error::Internal("zero does not halve".into()))?;
    let hom = AlgebraHom { u: ring.one(), v };
    Ok(if hom.verify(c, c) { vec![hom] } else { Vec::new() })
}

/// All parities `π` making `(Δ, π)` a valid triple.
pub fn find_parities(ring: &RingHandle, delta: &RingElement) -> Result<Vec<Mod2Element>> {
    if delta.ring() != ring {
        return Err(Error::RingMismatch);
    }
    let mut out = Vec::new();
    for p in ring.mod2_residues() {
        let t = AlgebraType {
            delta: delta.clone(),
            parity: p,
        };
        if is_valid_triple(&t)? {
            out.push(t.parity);
        }
    }
    Ok(out)
}

/// The integer discriminants `d` with `|d| ≤ bound` that admit a valid parity
/// over `ring`.
pub fn valid_integer_deltas(ring: &RingHandle, bound: i64) -> Result<Vec<RingElement>> {
    let mut out = Vec::new();
    for d in -bound..=bound {
        let delta = ring.int(d);
        if !find_parities(ring, &delta)?.is_empty() {
            out.push(delta);
        }
    }
    Ok(out)
}
