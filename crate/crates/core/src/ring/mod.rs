//! Exact commutative base rings.
//!
//! Four backends share one element type: the integers, free ℤ-algebras given
//! by integer structure constants ("table rings"), finite quotients of those
//! by an integer modulus, and localizations `ℤ[1/f]`. Every operation returns
//! a canonical representative, so structural equality is ring equality.

mod text;
mod units;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;

pub use units::{fundamental_unit, FUNDAMENTAL_UNIT_STEP_CAP};
pub(crate) use units::sqrt_in_quadratic;
pub use text::json_int;

/// Serializable description of a base ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RingDescriptor {
    Integers,
    /// Free ℤ-module with basis `e_0..e_{rank-1}`; `mul[i][j][k]` is the
    /// coefficient of `e_k` in `e_i * e_j`.
    Table {
        rank: usize,
        mul: Vec<Vec<Vec<i64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        one: Option<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    Quotient {
        base: Box<RingDescriptor>,
        m: i64,
    },
    Localization {
        f: i64,
    },
}

impl RingDescriptor {
    /// `ℤ[w]/(w² − n)` with basis `(1, w)`.
    pub fn sqrt(n: i64) -> Self {
        RingDescriptor::Table {
            rank: 2,
            mul: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![n, 0]]],
            one: Some(vec![1, 0]),
            names: Some(vec!["1".into(), "w".into()]),
        }
    }

    /// `ℤ[X,Y]/(X² − n, Y² − n)` with basis `(1, X, Y, XY)`.
    pub fn biquadratic(n: i64) -> Self {
        // exponent vectors of the basis monomials
        let mono = [(0, 0), (1, 0), (0, 1), (1, 1)];
        let mut mul = vec![vec![vec![0i64; 4]; 4]; 4];
        for (i, &(xi, yi)) in mono.iter().enumerate() {
            for (j, &(xj, yj)) in mono.iter().enumerate() {
                let (mut x, mut y, mut c) = (xi + xj, yi + yj, 1i64);
                if x == 2 {
                    x = 0;
                    c *= n;
                }
                if y == 2 {
                    y = 0;
                    c *= n;
                }
                let k = mono.iter().position(|&m| m == (x, y)).unwrap();
                mul[i][j][k] = c;
            }
        }
        RingDescriptor::Table {
            rank: 4,
            mul,
            one: Some(vec![1, 0, 0, 0]),
            names: Some(vec!["1".into(), "X".into(), "Y".into(), "XY".into()]),
        }
    }

    /// `𝔽₄ = (ℤ[X]/(X² + X + 1)) / 2`.
    pub fn f4() -> Self {
        RingDescriptor::Quotient {
            base: Box::new(RingDescriptor::Table {
                rank: 2,
                mul: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![-1, -1]]],
                one: Some(vec![1, 0]),
                names: Some(vec!["1".into(), "X".into()]),
            }),
            m: 2,
        }
    }

    /// Resolves the built-in aliases `z`, `zsqrt<N>`, `zmod<m>`, `zloc<f>`,
    /// `f4` and `biquad8`.
    pub fn alias(name: &str) -> Option<Self> {
        match name {
            "z" => return Some(RingDescriptor::Integers),
            "f4" => return Some(RingDescriptor::f4()),
            "biquad8" => return Some(RingDescriptor::biquadratic(8)),
            _ => {}
        }
        if let Some(n) = name.strip_prefix("zsqrt") {
            return n.parse().ok().map(RingDescriptor::sqrt);
        }
        if let Some(m) = name.strip_prefix("zmod") {
            return m.parse().ok().map(|m| RingDescriptor::Quotient {
                base: Box::new(RingDescriptor::Integers),
                m,
            });
        }
        if let Some(f) = name.strip_prefix("zloc") {
            return f.parse().ok().map(|f| RingDescriptor::Localization { f });
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Table {
    rank: usize,
    mul: Vec<Vec<Vec<BigInt>>>,
    one: Vec<BigInt>,
}

impl Table {
    fn integers() -> Self {
        Table {
            rank: 1,
            mul: vec![vec![vec![BigInt::one()]]],
            one: vec![BigInt::one()],
        }
    }

    fn mul(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let n = self.rank;
        let mut z = vec![BigInt::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, zk) in z.iter_mut().enumerate() {
                    let t = &self.mul[i][j][k];
                    if !t.is_zero() {
                        *zk += &xy * t;
                    }
                }
            }
        }
        z
    }

    /// Rows of the matrix of multiplication by `x` in the basis.
    fn mul_matrix(&self, x: &[BigInt]) -> Vec<Vec<BigInt>> {
        let n = self.rank;
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| (0..n).map(|i| &x[i] * &self.mul[i][j][k]).sum())
                    .collect()
            })
            .collect()
    }

    fn basis(&self, i: usize) -> Vec<BigInt> {
        (0..self.rank)
            .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
            .collect()
    }

    fn build(rank: usize, mul: &[Vec<Vec<i64>>], one: Option<&[i64]>) -> Result<Self> {
        let bad = |msg: &str| Error::MalformedDescriptor(msg.to_string());
        if rank == 0 {
            return Err(bad("rank must be at least 1"));
        }
        if mul.len() != rank
            || mul
                .iter()
                .any(|row| row.len() != rank || row.iter().any(|c| c.len() != rank))
        {
            return Err(bad("structure constants must form a rank×rank×rank tensor"));
        }
        let mul: Vec<Vec<Vec<BigInt>>> = mul
            .iter()
            .map(|r| r.iter().map(|c| c.iter().map(|&v| BigInt::from(v)).collect()).collect())
            .collect();
        let mut t = Table {
            rank,
            mul,
            one: vec![BigInt::zero(); rank],
        };
        for i in 0..rank {
            for j in (i + 1)..rank {
                if t.mul[i][j] != t.mul[j][i] {
                    return Err(Error::NonCommutative(i, j));
                }
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                for k in 0..rank {
                    let left = t.mul(&t.mul[i][j], &t.basis(k));
                    let right = t.mul(&t.basis(i), &t.mul[j][k]);
                    if left != right {
                        return Err(Error::NonAssociative(i, j, k));
                    }
                }
            }
        }
        t.one = match one {
            Some(one) => {
                if one.len() != rank {
                    return Err(bad("identity coordinates have wrong length"));
                }
                one.iter().map(|&v| BigInt::from(v)).collect()
            }
            None => {
                // e * e_j = e_j for all j: rank² equations in rank unknowns
                let mut rows = Vec::new();
                let mut rhs = Vec::new();
                for j in 0..rank {
                    for k in 0..rank {
                        rows.push((0..rank).map(|i| t.mul[i][j][k].clone()).collect());
                        rhs.push(if j == k { BigInt::one() } else { BigInt::zero() });
                    }
                }
                lattice::solve_integer(&rows, rank, &rhs).ok_or(Error::NoIdentity)?
            }
        };
        for j in 0..rank {
            if t.mul(&t.one, &t.basis(j)) != t.basis(j) {
                return Err(Error::NoIdentity);
            }
        }
        Ok(t)
    }
}

#[derive(Debug)]
enum Backend {
    Integers,
    Table(Table),
    Quotient { table: Table, m: BigInt },
    Localization { f: BigInt, primes: Vec<BigInt> },
}

#[derive(Debug)]
struct RingData {
    descriptor: RingDescriptor,
    backend: Backend,
    two_regular: bool,
    names: Vec<String>,
}

/// Shared handle to a constructed ring. Cloning is cheap.
#[derive(Clone)]
pub struct RingHandle(Arc<RingData>);

impl fmt::Debug for RingHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingHandle({:?})", self.0.descriptor)
    }
}

impl PartialEq for RingHandle {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor == other.0.descriptor
    }
}

impl Eq for RingHandle {}

fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

impl RingHandle {
    /// Validates the descriptor and builds the ring.
    pub fn new(descriptor: RingDescriptor) -> Result<Self> {
        let (backend, names) = match &descriptor {
            RingDescriptor::Integers => (Backend::Integers, vec!["1".to_string()]),
            RingDescriptor::Table {
                rank,
                mul,
                one,
                names,
            } => {
                let t = Table::build(*rank, mul, one.as_deref())?;
                let names = default_names(names.as_ref(), *rank)?;
                (Backend::Table(t), names)
            }
            RingDescriptor::Quotient { base, m } => {
                if *m < 2 {
                    return Err(Error::MalformedDescriptor("modulus must be at least 2".into()));
                }
                let (table, names) = match base.as_ref() {
                    RingDescriptor::Integers => (Table::integers(), vec!["1".to_string()]),
                    RingDescriptor::Table {
                        rank,
                        mul,
                        one,
                        names,
                    } => (
                        Table::build(*rank, mul, one.as_deref())?,
                        default_names(names.as_ref(), *rank)?,
                    ),
                    _ => {
                        return Err(Error::MalformedDescriptor(
                            "quotient base must be integers or a table ring".into(),
                        ))
                    }
                };
                (
                    Backend::Quotient {
                        table,
                        m: BigInt::from(*m),
                    },
                    names,
                )
            }
            RingDescriptor::Localization { f } => {
                if *f < 2 {
                    return Err(Error::MalformedDescriptor(
                        "localization needs an inverted integer f ≥ 2".into(),
                    ));
                }
                let f = BigInt::from(*f);
                let primes = prime_factors(&f);
                (Backend::Localization { f, primes }, vec!["1".to_string()])
            }
        };
        let two_regular = match &backend {
            Backend::Quotient { m, .. } => m.is_odd(),
            _ => true,
        };
        Ok(RingHandle(Arc::new(RingData {
            descriptor,
            backend,
            two_regular,
            names,
        })))
    }

    pub fn integers() -> Self {
        RingHandle::new(RingDescriptor::Integers).expect("integers are a valid ring")
    }

    /// Ring for a built-in alias (see [`RingDescriptor::alias`]) or an inline
    /// JSON descriptor.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(d) = RingDescriptor::alias(text) {
            return RingHandle::new(d);
        }
        let d: RingDescriptor = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("unknown ring '{text}': {e}")))?;
        RingHandle::new(d)
    }

    /// `ℤ` when `f = 1`, otherwise `ℤ[1/f]`.
    pub fn localization(f: &BigInt) -> Result<Self> {
        if f.is_one() {
            return Ok(RingHandle::integers());
        }
        let f = f
            .to_i64()
            .ok_or_else(|| Error::MalformedDescriptor("localization f out of range".into()))?;
        RingHandle::new(RingDescriptor::Localization { f })
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.descriptor
    }

    pub fn two_regular(&self) -> bool {
        self.0.two_regular
    }

    /// Number of coordinates of an element.
    pub fn rank(&self) -> usize {
        match &self.0.backend {
            Backend::Integers | Backend::Localization { .. } => 1,
            Backend::Table(t) | Backend::Quotient { table: t, .. } => t.rank,
        }
    }

    pub fn basis_names(&self) -> &[String] {
        &self.0.names
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.0.backend, Backend::Quotient { .. })
    }

    pub fn is_integers(&self) -> bool {
        matches!(self.0.backend, Backend::Integers)
    }

    /// The inverted integer `f` of a localization.
    pub fn inverted(&self) -> Option<&BigInt> {
        match &self.0.backend {
            Backend::Localization { f, .. } => Some(f),
            _ => None,
        }
    }

    /// Number of elements of a finite ring.
    pub fn cardinality(&self) -> Option<BigInt> {
        match &self.0.backend {
            Backend::Quotient { table, m } => Some(m.pow(table.rank as u32)),
            _ => None,
        }
    }

    fn table(&self) -> Option<&Table> {
        match &self.0.backend {
            Backend::Table(t) | Backend::Quotient { table: t, .. } => Some(t),
            _ => None,
        }
    }

    fn canonical(&self, mut coords: Vec<BigInt>, mut k: u32) -> RingElement {
        match &self.0.backend {
            Backend::Integers | Backend::Table(_) => k = 0,
            Backend::Quotient { m, .. } => {
                k = 0;
                for c in coords.iter_mut() {
                    *c = c.mod_floor(m);
                }
            }
            Backend::Localization { f, .. } => {
                if coords[0].is_zero() {
                    k = 0;
                }
                while k > 0 && (&coords[0] % f).is_zero() {
                    coords[0] /= f;
                    k -= 1;
                }
            }
        }
        RingElement {
            ring: self.clone(),
            coords,
            k,
        }
    }

    /// Element from coordinates in the basis (a single coordinate for ℤ and
    /// localizations).
    pub fn element(&self, coords: Vec<BigInt>) -> Result<RingElement> {
        self.element_frac(coords, 0)
    }

    /// Element `coords / f^k` of a localization; `k` must be 0 elsewhere.
    pub fn element_frac(&self, coords: Vec<BigInt>, k: u32) -> Result<RingElement> {
        if coords.len() != self.rank() {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        if k > 0 && self.inverted().is_none() {
            return Err(Error::Parse("denominator exponent only valid in a localization".into()));
        }
        Ok(self.canonical(coords, k))
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<RingElement> {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The image of the integer `n`.
    pub fn int(&self, n: impl Into<BigInt>) -> RingElement {
        let n = n.into();
        match self.table() {
            Some(t) => {
                let coords = t.one.iter().map(|c| c * &n).collect();
                self.canonical(coords, 0)
            }
            None => self.canonical(vec![n], 0),
        }
    }

    pub fn zero(&self) -> RingElement {
        self.canonical(vec![BigInt::zero(); self.rank()], 0)
    }

    pub fn one(&self) -> RingElement {
        self.int(1)
    }

    /// The `i`-th basis element.
    pub fn basis(&self, i: usize) -> RingElement {
        let coords = (0..self.rank())
            .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
            .collect();
        self.canonical(coords, 0)
    }

    /// Element `num / den` of ℤ or a localization, when it exists there.
    pub fn from_rational(&self, num: &BigInt, den: &BigInt) -> Option<RingElement> {
        if den.is_zero() {
            return None;
        }
        match &self.0.backend {
            Backend::Integers => {
                let (q, r) = num.div_rem(den);
                r.is_zero().then(|| self.canonical(vec![q], 0))
            }
            Backend::Localization { .. } => {
                let n = self.int(num.clone());
                let sign = if den.is_negative() { -1 } else { 1 };
                self.try_div_int(&n, &den.abs()).map(|x| x.scale(sign))
            }
            _ => None,
        }
    }

    fn check(&self, x: &RingElement) -> Result<()> {
        if &x.ring == self {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_raw(x, y))
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_raw(x, &self.neg_raw(y)))
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_raw(x, y))
    }

    pub fn neg(&self, x: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        Ok(self.neg_raw(x))
    }

    fn add_raw(&self, x: &RingElement, y: &RingElement) -> RingElement {
        if let Backend::Localization { f, .. } = &self.0.backend {
            let k = x.k.max(y.k);
            let n = &x.coords[0] * f.pow(k - x.k) + &y.coords[0] * f.pow(k - y.k);
            return self.canonical(vec![n], k);
        }
        let coords = x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect();
        self.canonical(coords, 0)
    }

    fn neg_raw(&self, x: &RingElement) -> RingElement {
        self.canonical(x.coords.iter().map(|c| -c).collect(), x.k)
    }

    fn mul_raw(&self, x: &RingElement, y: &RingElement) -> RingElement {
        match &self.0.backend {
            Backend::Integers => self.canonical(vec![&x.coords[0] * &y.coords[0]], 0),
            Backend::Localization { .. } => {
                self.canonical(vec![&x.coords[0] * &y.coords[0]], x.k + y.k)
            }
            Backend::Table(t) | Backend::Quotient { table: t, .. } => {
                self.canonical(t.mul(&x.coords, &y.coords), 0)
            }
        }
    }

    /// Inverse of `x`, or `None` when `x` is not a unit.
    pub fn try_inverse(&self, x: &RingElement) -> Option<RingElement> {
        if self.check(x).is_err() {
            return None;
        }
        let inv = match &self.0.backend {
            Backend::Integers => {
                let c = &x.coords[0];
                (c.abs().is_one()).then(|| self.canonical(vec![c.clone()], 0))
            }
            Backend::Table(t) => {
                lattice::solve_integer(&t.mul_matrix(&x.coords), t.rank, &t.one)
                    .map(|y| self.canonical(y, 0))
            }
            Backend::Quotient { table: t, m } => {
                // x*y + m*z = 1 over ℤ
                let n = t.rank;
                let mut rows = t.mul_matrix(&x.coords);
                for (k, row) in rows.iter_mut().enumerate() {
                    for j in 0..n {
                        row.push(if j == k { m.clone() } else { BigInt::zero() });
                    }
                }
                lattice::solve_integer(&rows, 2 * n, &t.one)
                    .map(|sol| self.canonical(sol[..n].to_vec(), 0))
            }
            Backend::Localization { f, primes } => {
                let n = &x.coords[0];
                if n.is_zero() {
                    return None;
                }
                let mut rest = n.abs();
                for p in primes {
                    while (&rest % p).is_zero() {
                        rest /= p;
                    }
                }
                if !rest.is_one() {
                    return None;
                }
                let mut big_k = 0u32;
                let mut fk = BigInt::one();
                while !(&fk % n).is_zero() {
                    fk *= f;
                    big_k += 1;
                }
                let num = (&fk / n) * f.pow(x.k);
                Some(self.canonical(vec![num], big_k))
            }
        }?;
        (self.mul_raw(x, &inv) == self.one()).then_some(inv)
    }

    pub fn is_unit(&self, x: &RingElement) -> bool {
        self.try_inverse(x).is_some()
    }

    /// `x / t` for a positive integer `t`, when it exists. Unique whenever
    /// `t` is a non-zero-divisor; for quotient rings with `gcd(t, m) > 1`
    /// this returns one of several solutions.
    pub fn try_div_int(&self, x: &RingElement, t: &BigInt) -> Option<RingElement> {
        assert!(t.is_positive(), "divisor must be positive");
        match &self.0.backend {
            Backend::Integers | Backend::Table(_) => {
                let mut out = Vec::with_capacity(x.coords.len());
                for c in &x.coords {
                    let (q, r) = c.div_rem(t);
                    if !r.is_zero() {
                        return None;
                    }
                    out.push(q);
                }
                Some(self.canonical(out, 0))
            }
            Backend::Quotient { m, .. } => {
                let g = t.gcd(m);
                if x.coords.iter().any(|c| !(c % &g).is_zero()) {
                    return None;
                }
                let mg = m / &g;
                let tg = (t / &g).mod_floor(&mg);
                let inv = mod_inverse(&tg, &mg)?;
                let coords = x.coords.iter().map(|c| ((c / &g) * &inv).mod_floor(&mg)).collect();
                Some(self.canonical(coords, 0))
            }
            Backend::Localization { f, primes } => {
                // t = t_f * t_rest with t_f supported on primes of f
                let mut t_rest = t.clone();
                for p in primes {
                    while (&t_rest % p).is_zero() {
                        t_rest /= p;
                    }
                }
                let t_f = t / &t_rest;
                let (q, r) = x.coords[0].div_rem(&t_rest);
                if !r.is_zero() {
                    return None;
                }
                let mut big_k = 0u32;
                let mut fk = BigInt::one();
                while !(&fk % &t_f).is_zero() {
                    fk *= f;
                    big_k += 1;
                }
                Some(self.canonical(vec![q * (fk / &t_f)], x.k + big_k))
            }
        }
    }

    /// Whether `x ∈ tR` for a positive integer `t`.
    pub fn divisible_by_int(&self, x: &RingElement, t: u32) -> bool {
        self.try_div_int(x, &BigInt::from(t)).is_some()
    }

    /// The unique `y` with `2y = x`, when it exists.
    pub fn try_halve(&self, x: &RingElement) -> Result<Option<RingElement>> {
        self.check(x)?;
        if !self.two_regular() {
            return Err(Error::NotTwoRegular);
        }
        Ok(self.try_div_int(x, &BigInt::from(2)))
    }

    /// Whether `x ∈ 4R`.
    pub fn in_4r(&self, x: &RingElement) -> bool {
        self.divisible_by_int(x, 4)
    }

    /// The modulus `g` with `R/2R` read off coordinates modulo `g`; `None`
    /// for localizations.
    fn mod2_modulus(&self) -> Option<BigInt> {
        match &self.0.backend {
            Backend::Integers | Backend::Table(_) => Some(BigInt::from(2)),
            Backend::Quotient { m, .. } => Some(m.gcd(&BigInt::from(2))),
            Backend::Localization { .. } => None,
        }
    }

    /// Residue class of `x` modulo `2R`.
    pub fn mod2(&self, x: &RingElement) -> Mod2Element {
        let rep = match (&self.0.backend, self.mod2_modulus()) {
            (Backend::Localization { f, .. }, _) => {
                if f.is_even() {
                    self.zero()
                } else {
                    // f^k is odd, so n / f^k ≡ n mod 2
                    self.canonical(vec![x.coords[0].mod_floor(&BigInt::from(2))], 0)
                }
            }
            (_, Some(g)) => self.canonical(x.coords.iter().map(|c| c.mod_floor(&g)).collect(), 0),
            _ => unreachable!(),
        };
        Mod2Element { rep }
    }

    /// All residue classes of `R/2R`.
    pub fn mod2_residues(&self) -> Vec<Mod2Element> {
        let digits = match (&self.0.backend, self.mod2_modulus()) {
            (Backend::Localization { f, .. }, _) => {
                if f.is_even() {
                    1
                } else {
                    2
                }
            }
            (_, Some(g)) => g.to_u32().unwrap(),
            _ => unreachable!(),
        };
        let n = if digits == 1 { 0 } else { self.rank() };
        odometer(n, digits)
            .map(|mut c| {
                c.resize(self.rank(), BigInt::zero());
                Mod2Element {
                    rep: self.canonical(c, 0),
                }
            })
            .collect()
    }

    /// Every element of a finite ring, each exactly once.
    pub fn enumerate_elements(&self) -> Result<Vec<RingElement>> {
        match &self.0.backend {
            Backend::Quotient { table, m } => {
                let m = m.to_u32().ok_or(Error::UnsupportedRing("modulus too large".into()))?;
                Ok(odometer(table.rank, m)
                    .map(|c| self.canonical(c, 0))
                    .collect())
            }
            _ => Err(Error::InfiniteRing),
        }
    }

    /// All units of a finite ring.
    pub fn enumerate_units(&self) -> Result<Vec<RingElement>> {
        Ok(self
            .enumerate_elements()?
            .into_iter()
            .filter(|x| self.is_unit(x))
            .collect())
    }

    /// Some `z` with `y·z = x`, when one exists. Unique when `y` is a
    /// non-zero-divisor.
    pub fn try_divide(&self, x: &RingElement, y: &RingElement) -> Option<RingElement> {
        if self.check(x).is_err() || self.check(y).is_err() {
            return None;
        }
        let z = match &self.0.backend {
            Backend::Integers | Backend::Localization { .. } => {
                let (xn, xd) = self.to_rational(x)?;
                let (yn, yd) = self.to_rational(y)?;
                self.from_rational(&(xn * yd), &(xd * yn))?
            }
            Backend::Table(t) => {
                let sol = lattice::solve_integer(&t.mul_matrix(&y.coords), t.rank, &x.coords)?;
                self.canonical(sol, 0)
            }
            Backend::Quotient { table: t, m } => {
                let n = t.rank;
                let mut rows = t.mul_matrix(&y.coords);
                for (k, row) in rows.iter_mut().enumerate() {
                    for j in 0..n {
                        row.push(if j == k { m.clone() } else { BigInt::zero() });
                    }
                }
                let sol = lattice::solve_integer(&rows, 2 * n, &x.coords)?;
                self.canonical(sol[..n].to_vec(), 0)
            }
        };
        (self.mul_raw(y, &z) == *x).then_some(z)
    }

    /// Whether `gens` generate the unit ideal.
    pub fn generate_unit_ideal(&self, gens: &[RingElement]) -> Result<bool> {
        for g in gens {
            self.check(g)?;
        }
        match &self.0.backend {
            Backend::Integers => Ok(gens
                .iter()
                .fold(BigInt::zero(), |acc, g| acc.gcd(&g.coords[0]))
                .is_one()),
            Backend::Localization { .. } => {
                let g = gens.iter().fold(BigInt::zero(), |acc, g| acc.gcd(&g.coords[0]));
                Ok(self.is_unit(&self.int(g)))
            }
            Backend::Table(t) | Backend::Quotient { table: t, .. } => {
                let mut lattice = Vec::new();
                for g in gens {
                    for k in 0..t.rank {
                        lattice.push(t.mul(&g.coords, &t.basis(k)));
                    }
                }
                if let Backend::Quotient { m, .. } = &self.0.backend {
                    for k in 0..t.rank {
                        lattice.push(t.basis(k).into_iter().map(|c| c * m).collect());
                    }
                }
                Ok(lattice::lattice_index(&lattice, t.rank).is_some_and(|i| i.is_one()))
            }
        }
    }

    /// Rational value `(num, den)` of an element of ℤ or a localization.
    pub fn to_rational(&self, x: &RingElement) -> Option<(BigInt, BigInt)> {
        match &self.0.backend {
            Backend::Integers => Some((x.coords[0].clone(), BigInt::one())),
            Backend::Localization { f, .. } => {
                let num = x.coords[0].clone();
                let den = f.pow(x.k);
                let g = num.gcd(&den);
                Some((num / &g, den / g))
            }
            _ => None,
        }
    }

    /// Image of `x` (from ℤ or a localization) in this ring, when the
    /// denominators of `x` are invertible here.
    pub fn embed(&self, x: &RingElement) -> Option<RingElement> {
        if &x.ring == self {
            return Some(x.clone());
        }
        let (num, den) = x.ring.to_rational(x)?;
        self.from_rational(&num, &den)
    }

    /// Uniform random element with coordinates in `[-bound, bound]` (and, for
    /// localizations, a denominator exponent up to 2).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> RingElement {
        let coords = (0..self.rank())
            .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
            .collect();
        let k = if self.inverted().is_some() {
            rng.gen_range(0..=2)
        } else {
            0
        };
        self.canonical(coords, k)
    }
}

fn default_names(names: Option<&Vec<String>>, rank: usize) -> Result<Vec<String>> {
    match names {
        Some(n) if n.len() == rank => Ok(n.clone()),
        Some(_) => Err(Error::MalformedDescriptor("names must have one entry per basis element".into())),
        None => Ok((0..rank).map(|i| format!("e{i}")).collect()),
    }
}

fn odometer(n: usize, base: u32) -> impl Iterator<Item = Vec<BigInt>> {
    let total = (base as u64).pow(n as u32);
    (0..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let d = idx % base as u64;
                idx /= base as u64;
                BigInt::from(d)
            })
            .collect()
    })
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// An element of a [`RingHandle`] in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: RingHandle,
    coords: Vec<BigInt>,
    k: u32,
}

impl RingElement {
    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Denominator exponent (localizations only).
    pub fn denominator_exponent(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    /// The single coordinate of an element of ℤ.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.ring.is_integers().then(|| &self.coords[0])
    }

    pub fn scale(&self, n: impl Into<BigInt>) -> RingElement {
        self.ring.mul_raw(self, &self.ring.int(n))
    }

    pub fn square(&self) -> RingElement {
        self.ring.mul_raw(self, self)
    }

    pub fn inverse(&self) -> Option<RingElement> {
        self.ring.try_inverse(self)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self)
    }

    pub fn mod2(&self) -> Mod2Element {
        self.ring.mod2(self)
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn assert_same(x: &RingElement, y: &RingElement) {
    assert!(x.ring == y.ring, "ring mismatch in arithmetic on {x} and {y}");
}

// Operator sugar panics on mixed rings; the checked methods on RingHandle
// return `Error::RingMismatch` instead.
impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        assert_same(self, rhs);
        self.ring.add_raw(self, rhs)
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        assert_same(self, rhs);
        self.ring.add_raw(self, &self.ring.neg_raw(rhs))
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        assert_same(self, rhs);
        self.ring.mul_raw(self, rhs)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.ring.neg_raw(self)
    }
}

/// Residue class of a ring element modulo `2R`, stored as its canonical
/// representative.
#[derive(Clone, PartialEq, Eq)]
pub struct Mod2Element {
    rep: RingElement,
}

impl Mod2Element {
    /// Canonical lift of the class.
    pub fn lift(&self) -> &RingElement {
        &self.rep
    }

    pub fn ring(&self) -> &RingHandle {
        &self.rep.ring
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Whether `x` lifts this class.
    pub fn is_lifted_by(&self, x: &RingElement) -> bool {
        x.ring == self.rep.ring && x.mod2() == *self
    }

    /// The class of `u·p̃` for a lift `p̃` of `self`.
    pub fn scale(&self, u: &RingElement) -> Mod2Element {
        (u * &self.rep).mod2()
    }

    pub fn add(&self, other: &Mod2Element) -> Mod2Element {
        (&self.rep + &other.rep).mod2()
    }
}

impl fmt::Debug for Mod2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Mod2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 2", self.rep)
    }
}
