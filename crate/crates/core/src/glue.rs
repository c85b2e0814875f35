//! Quadratic algebras glued from free charts over a principal cover
//! `Spec ℤ = ⋃ D(f_i)`.
//!
//! Chart `i` lives over `ℤ[1/f_i]`, the overlap of `i` and `j` over
//! `ℤ[1/(f_i f_j)]`. Indices are 0-based.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebras::{build_from_type, is_valid_triple, type_of, AlgebraHom, FreeQuadraticAlgebra};
use crate::error::{Error, Result};
use crate::quadtype::AlgebraType;
use crate::ring::{RingElement, RingHandle};

/// The opens `D(f_1), …, D(f_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalCover {
    pub opens: Vec<BigInt>,
}

impl PrincipalCover {
    pub fn new<I: Into<BigInt>>(opens: impl IntoIterator<Item = I>) -> Self {
        PrincipalCover {
            opens: opens.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    /// `ℤ[1/∏ f_i]` over the given indices (`ℤ` when the product is 1).
    pub fn ring(&self, indices: &[usize]) -> Result<RingHandle> {
        let f = indices.iter().map(|&i| &self.opens[i]).product::<BigInt>();
        RingHandle::localization(&f)
    }
}

/// Transition units `ε_ij` for `i < j`, each in the overlap ring.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LineBundleCocycle {
    pub eps: BTreeMap<(usize, usize), RingElement>,
}

impl LineBundleCocycle {
    /// `ε_ij` embedded in `ring`, using `ε_ii = 1` and `ε_ji = ε_ij⁻¹`.
    pub fn get(&self, i: usize, j: usize, ring: &RingHandle) -> Option<RingElement> {
        if i == j {
            return Some(ring.one());
        }
        let e = ring.embed(self.eps.get(&(i.min(j), i.max(j)))?)?;
        if i < j {
            Some(e)
        } else {
            e.inverse()
        }
    }
}

/// Local discriminants `d_i` and parity lifts `p̃_i`, chart by chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedTypeData {
    pub d: Vec<RingElement>,
    pub p: Vec<RingElement>,
}

/// `ψ_ij(ω_i) = scale·ω_j + shift`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub scale: RingElement,
    pub shift: RingElement,
}

/// Charts `ω_i² + p̃_iω_i − (d_i − p̃_i²)/4` and transitions for `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedAlgebra {
    pub cover: PrincipalCover,
    pub charts: Vec<FreeQuadraticAlgebra>,
    pub transitions: BTreeMap<(usize, usize), Transition>,
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub indices: Vec<usize>,
    pub ok: bool,
}

fn fail(msg: String) -> Error {
    Error::ValidationFailed(msg)
}

/// All `f_i` positive with `gcd = 1`.
pub fn validate_cover(cover: &PrincipalCover) -> Result<()> {
    if cover.is_empty() {
        return Err(fail("cover has no opens".into()));
    }
    if let Some(i) = cover.opens.iter().position(|f| !f.is_positive()) {
        return Err(fail(format!("open {i} is not a positive integer")));
    }
    let g = cover.opens.iter().fold(BigInt::zero(), |g, f| g.gcd(f));
    if !g.is_one() {
        return Err(fail(format!("opens have common factor {g}")));
    }
    Ok(())
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).flat_map(move |j| ((j + 1)..n).map(move |k| (i, j, k))))
}

fn cocycle_unit_ok(cover: &PrincipalCover, cocycle: &LineBundleCocycle, i: usize, j: usize) -> Result<bool> {
    let ring = cover.ring(&[i, j])?;
    Ok(cocycle
        .eps
        .get(&(i, j))
        .is_some_and(|e| e.ring() == &ring && e.is_unit()))
}

fn cocycle_triple_ok(cover: &PrincipalCover, cocycle: &LineBundleCocycle, i: usize, j: usize, k: usize) -> Result<bool> {
    let ring = cover.ring(&[i, j, k])?;
    let get = |a, b| cocycle.get(a, b, &ring);
    Ok(match (get(i, j), get(j, k), get(i, k)) {
        (Some(ij), Some(jk), Some(ik)) => &ij * &jk == ik,
        _ => false,
    })
}

/// Every `ε_ij` is a unit of its overlap ring and `ε_ik = ε_ij ε_jk`.
pub fn validate_cocycle(cover: &PrincipalCover, cocycle: &LineBundleCocycle) -> Result<()> {
    validate_cover(cover)?;
    if let Some((i, j)) = cocycle.eps.keys().find(|(i, j)| i >= j || *j >= cover.len()) {
        return Err(fail(format!("cocycle entry ({i},{j}) is not an index pair i < j")));
    }
    for (i, j) in pairs(cover.len()) {
        if !cocycle_unit_ok(cover, cocycle, i, j)? {
            return Err(fail(format!("ε_({i},{j}) is missing or not a unit of its overlap ring")));
        }
    }
    for (i, j, k) in triples(cover.len()) {
        if !cocycle_triple_ok(cover, cocycle, i, j, k)? {
            return Err(fail(format!("cocycle condition fails on ({i},{j},{k})")));
        }
    }
    Ok(())
}

fn chart_ok(cover: &PrincipalCover, data: &GluedTypeData, i: usize) -> Result<bool> {
    let ring = cover.ring(&[i])?;
    let (d, p) = (&data.d[i], &data.p[i]);
    if d.ring() != &ring || p.ring() != &ring {
        return Ok(false);
    }
    is_valid_triple(&AlgebraType::from_lift(d.clone(), p)?)
}

fn overlap_ok(cover: &PrincipalCover, cocycle: &LineBundleCocycle, data: &GluedTypeData, i: usize, j: usize) -> Result<(bool, bool)> {
    let ring = cover.ring(&[i, j])?;
    let emb = |x: &RingElement| ring.embed(x);
    let (Some(e), Some(di), Some(dj), Some(pi), Some(pj)) = (
        cocycle.get(i, j, &ring),
        emb(&data.d[i]),
        emb(&data.d[j]),
        emb(&data.p[i]),
        emb(&data.p[j]),
    ) else {
        return Ok((false, false));
    };
    let delta_ok = di == &dj * &e.square();
    let parity_ok = ring.divisible_by_int(&(&pi - &(&pj * &e)), 2);
    Ok((delta_ok, parity_ok))
}

/// Chart validity `d_i ≡ p̃_i² mod 4`, and on overlaps `d_i = d_j ε_ij²` and
/// `p̃_i ≡ p̃_j ε_ij mod 2`.
pub fn validate_type_data(cover: &PrincipalCover, cocycle: &LineBundleCocycle, data: &GluedTypeData) -> Result<()> {
    validate_cocycle(cover, cocycle)?;
    if data.d.len() != cover.len() || data.p.len() != cover.len() {
        return Err(fail("type data needs one d and one p per open".into()));
    }
    for i in 0..cover.len() {
        if !chart_ok(cover, data, i)? {
            return Err(fail(format!("chart {i}: d is not congruent to p² mod 4")));
        }
    }
    for (i, j) in pairs(cover.len()) {
        let (delta_ok, parity_ok) = overlap_ok(cover, cocycle, data, i, j)?;
        if !delta_ok {
            return Err(fail(format!("overlap ({i},{j}): d_i ≠ d_j ε²")));
        }
        if !parity_ok {
            return Err(fail(format!("overlap ({i},{j}): p_i ≢ p_j ε mod 2")));
        }
    }
    Ok(())
}

/// Full verification report, one entry per individual check; the glued
/// checks are included when the input data validates.
pub fn verification_report(cover: &PrincipalCover, cocycle: &LineBundleCocycle, data: &GluedTypeData) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut push = |check: &str, indices: Vec<usize>, ok: bool| {
        out.push(CheckResult {
            check: check.to_string(),
            indices,
            ok,
        })
    };
    let cover_ok = validate_cover(cover).is_ok();
    push("cover", Vec::new(), cover_ok);
    if !cover_ok {
        return Ok(out);
    }
    let n = cover.len();
    for (i, j) in pairs(n) {
        push("cocycle_unit", vec![i, j], cocycle_unit_ok(cover, cocycle, i, j)?);
    }
    for (i, j, k) in triples(n) {
        push("cocycle_condition", vec![i, j, k], cocycle_triple_ok(cover, cocycle, i, j, k)?);
    }
    if data.d.len() != n || data.p.len() != n {
        push("data_shape", Vec::new(), false);
        return Ok(out);
    }
    for i in 0..n {
        push("chart_validity", vec![i], chart_ok(cover, data, i)?);
    }
    for (i, j) in pairs(n) {
        let (delta_ok, parity_ok) = overlap_ok(cover, cocycle, data, i, j)?;
        push("delta_compatibility", vec![i, j], delta_ok);
        push("parity_compatibility", vec![i, j], parity_ok);
    }
    if validate_type_data(cover, cocycle, data).is_err() {
        return Ok(out);
    }
    let glued = build_glued(cover, cocycle, data)?;
    for (i, j) in pairs(n) {
        push("transition_hom", vec![i, j], check_transition_hom(&glued, i, j));
    }
    for (i, j, k) in triples(n) {
        push("cocycle_transitions", vec![i, j, k], check_cocycle_transitions(&glued, i, j, k));
    }
    Ok(out)
}

/// Charts `Ω_i` and transitions `ψ_ij(ω_i) = ε_ij ω_j + ε_ij(p̃_j − p̃_i ε_ij⁻¹)/2`.
pub fn build_glued(cover: &PrincipalCover, cocycle: &LineBundleCocycle, data: &GluedTypeData) -> Result<GluedAlgebra> {
    validate_type_data(cover, cocycle, data)?;
    let mut charts = Vec::with_capacity(cover.len());
    for i in 0..cover.len() {
        let t = AlgebraType::from_lift(data.d[i].clone(), &data.p[i])?;
        charts.push(build_from_type(&t, &data.p[i])?);
    }
    let mut transitions = BTreeMap::new();
    for (i, j) in pairs(cover.len()) {
        let ring = cover.ring(&[i, j])?;
        let e = cocycle.get(i, j, &ring).ok_or_else(|| Error::Internal("missing ε".into()))?;
        let pi = ring.embed(&data.p[i]).ok_or_else(|| Error::Internal("embedding".into()))?;
        let pj = ring.embed(&data.p[j]).ok_or_else(|| Error::Internal("embedding".into()))?;
        let shift = ring
            .try_halve(&(&(&e * &pj) - &pi))?
            .ok_or_else(|| fail(format!("overlap ({i},{j}): shift does not halve")))?;
        transitions.insert((i, j), Transition { scale: e, shift });
    }
    let glued = GluedAlgebra {
        cover: cover.clone(),
        charts,
        transitions,
    };
    for (i, j) in pairs(cover.len()) {
        if !check_transition_hom(&glued, i, j) {
            return Err(Error::Internal(format!("transition ({i},{j}) fails verification")));
        }
    }
    for (i, j, k) in triples(cover.len()) {
        if !check_cocycle_transitions(&glued, i, j, k) {
            return Err(Error::Internal(format!("transitions fail the cocycle identity on ({i},{j},{k})")));
        }
    }
    Ok(glued)
}

fn chart_over(g: &GluedAlgebra, i: usize, ring: &RingHandle) -> Option<FreeQuadraticAlgebra> {
    let c = g.charts.get(i)?;
    Some(FreeQuadraticAlgebra {
        r: ring.embed(&c.r)?,
        s: ring.embed(&c.s)?,
    })
}

fn transition_over(g: &GluedAlgebra, i: usize, j: usize, ring: &RingHandle) -> Option<(RingElement, RingElement)> {
    let t = g.transitions.get(&(i, j))?;
    Some((ring.embed(&t.scale)?, ring.embed(&t.shift)?))
}

/// Whether `ψ_ij(ω_i)` satisfies chart `i`'s equation modulo chart `j`'s, over
/// the overlap ring. Pairs are taken with `i < j`; `i = j` is trivially true.
pub fn check_transition_hom(g: &GluedAlgebra, i: usize, j: usize) -> bool {
    if i == j {
        return i < g.charts.len();
    }
    let (i, j) = (i.min(j), i.max(j));
    let Ok(ring) = g.cover.ring(&[i, j]) else {
        return false;
    };
    let (Some(src), Some(dst), Some((u, v))) = (chart_over(g, i, &ring), chart_over(g, j, &ring), transition_over(g, i, j, &ring)) else {
        return false;
    };
    AlgebraHom { u, v }.verify(&src, &dst)
}

/// Whether `ψ_ik = ψ_jk ∘ ψ_ij` on the triple overlap. Triples with repeated
/// indices hold by convention.
pub fn check_cocycle_transitions(g: &GluedAlgebra, i: usize, j: usize, k: usize) -> bool {
    if i == j || j == k || i == k {
        return true;
    }
    let mut idx = [i, j, k];
    idx.sort_unstable();
    let [i, j, k] = idx;
    let Ok(ring) = g.cover.ring(&[i, j, k]) else {
        return false;
    };
    let (Some((e1, s1)), Some((e2, s2)), Some((e3, s3))) = (
        transition_over(g, i, j, &ring),
        transition_over(g, j, k, &ring),
        transition_over(g, i, k, &ring),
    ) else {
        return false;
    };
    // ω_i ↦ e1(e2 ω_k + s2) + s1
    &e1 * &e2 == e3 && &(&e1 * &s2) + &s1 == s3
}

/// `type_of` of chart `i`.
pub fn chart_type(g: &GluedAlgebra, i: usize) -> Option<AlgebraType> {
    g.charts.get(i).map(type_of)
}

impl GluedAlgebra {
    pub fn to_json(&self) -> Value {
        json!({
            "charts": self.charts.iter().zip(&self.cover.opens).map(|(c, f)| json!({
                "f": crate::ring::json_int(f),
                "r": c.r.to_json(),
                "s": c.s.to_json(),
            })).collect::<Vec<_>>(),
            "transitions": self.transitions.iter().map(|((i, j), t)| json!({
                "i": i,
                "j": j,
                "scale": t.scale.to_json(),
                "shift": t.shift.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Reads `{"cover":[f…], "cocycle":{"i,j": ε}, "data":{"d":[…], "p":[…]}}`.
pub fn parse_glue_input(v: &Value) -> Result<(PrincipalCover, LineBundleCocycle, GluedTypeData)> {
    let bad = |m: &str| Error::Parse(m.to_string());
    let opens = v
        .get("cover")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing cover array"))?
        .iter()
        .map(|f| f.as_i64().map(BigInt::from).ok_or_else(|| bad("cover entries must be integers")))
        .collect::<Result<Vec<_>>>()?;
    let cover = PrincipalCover { opens };
    for (i, f) in cover.opens.iter().enumerate() {
        if !f.is_positive() {
            return Err(fail(format!("open {i} is not a positive integer")));
        }
    }
    let mut cocycle = LineBundleCocycle::default();
    if let Some(map) = v.get("cocycle") {
        let map = map.as_object().ok_or_else(|| bad("cocycle must be an object"))?;
        for (key, val) in map {
            let (i, j) = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| bad("cocycle keys must look like \"i,j\""))?;
            if i >= j || j >= cover.len() {
                return Err(fail(format!("cocycle key ({i},{j}) is not an index pair i < j")));
            }
            let ring = cover.ring(&[i, j])?;
            cocycle.eps.insert((i, j), ring.element_from_json(val)?);
        }
    }
    let data = v.get("data").ok_or_else(|| bad("missing data"))?;
    let read = |name: &str| -> Result<Vec<RingElement>> {
        let xs = data
            .get(name)
            .and_then(Value::as_array)
            .ok_or_else(|| bad("data needs arrays d and p"))?;
        if xs.len() != cover.len() {
            return Err(fail("type data needs one d and one p per open".into()));
        }
        xs.iter()
            .enumerate()
            .map(|(i, x)| cover.ring(&[i])?.element_from_json(x))
            .collect()
    };
    Ok((cover.clone(), cocycle, GluedTypeData { d: read("d")?, p: read("p")? }))
}

const SMALL_PRIMES: [i64; 4] = [2, 3, 5, 7];

/// Random valid glueing data built as a coboundary: local trivializations
/// `λ_i` (signed products of primes dividing `f_i`), `ε_ij = λ_j/λ_i`,
/// `d_i = D/λ_i²` and `p̃_i = P/λ_i + 2t_i` for a global valid pair `(D, P)`.
pub fn random_valid_data<R: Rng + ?Sized>(rng: &mut R) -> Result<(PrincipalCover, LineBundleCocycle, GluedTypeData)> {
    let cover = loop {
        let k = rng.gen_range(1..=4);
        let opens: Vec<BigInt> = (0..k)
            .map(|_| {
                let mut f = BigInt::one();
                let count = rng.gen_range(0..=2);
                for &p in SMALL_PRIMES.choose_multiple(rng, count) {
                    f *= p;
                }
                f
            })
            .collect();
        let cover = PrincipalCover { opens };
        if validate_cover(&cover).is_ok() {
            break cover;
        }
    };
    let n = cover.len();
    let lambdas: Vec<RingElement> = (0..n)
        .map(|i| {
            let ring = cover.ring(&[i])?;
            let mut lam = ring.int(if rng.gen_bool(0.5) { 1 } else { -1 });
            for &p in &SMALL_PRIMES {
                if (&cover.opens[i] % p).is_zero() {
                    let e: i32 = rng.gen_range(-2..=2);
                    let pe = ring.int(BigInt::from(p).pow(e.unsigned_abs()));
                    let factor = if e < 0 { pe.inverse().expect("prime of f is a unit") } else { pe };
                    lam = &lam * &factor;
                }
            }
            Ok(lam)
        })
        .collect::<Result<_>>()?;
    let mut cocycle = LineBundleCocycle::default();
    for (i, j) in pairs(n) {
        let ring = cover.ring(&[i, j])?;
        let (li, lj) = (ring.embed(&lambdas[i]).unwrap(), ring.embed(&lambdas[j]).unwrap());
        cocycle.eps.insert((i, j), &lj * &li.inverse().expect("unit"));
    }
    let p_global: i64 = rng.gen_range(-5..=5);
    let d_global = p_global * p_global + 4 * rng.gen_range(-30..=30);
    let mut d = Vec::with_capacity(n);
    let mut p = Vec::with_capacity(n);
    for (i, lam) in lambdas.iter().enumerate() {
        let ring = cover.ring(&[i])?;
        let li = lam.inverse().expect("unit");
        d.push(&ring.int(d_global) * &li.square());
        let t = ring.sample(rng, 3);
        p.push(&(&ring.int(p_global) * &li) + &t.scale(2));
    }
    Ok((cover, cocycle, GluedTypeData { d, p }))
}
