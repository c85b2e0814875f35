use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Backend, RingElement, RingHandle};
use crate::error::{Error, Result};

/// Continued-fraction steps allowed before giving up on a period.
pub const FUNDAMENTAL_UNIT_STEP_CAP: u64 = 1_000_000;

/// Fundamental unit `x + y√n` (`x, y > 0`) of `ℤ[√n]` for a positive
/// non-square `n`, read off the last convergent of the first period of the
/// continued fraction of `√n`. Its norm may be `−1`.
pub fn fundamental_unit(n: &BigInt) -> Result<(BigInt, BigInt)> {
    if !n.is_positive() {
        return Err(Error::InvalidDiscriminant(format!("{n} is not positive")));
    }
    let a0 = n.sqrt();
    if &a0 * &a0 == *n {
        return Err(Error::InvalidDiscriminant(format!("{n} is a perfect square")));
    }
    let (mut m, mut d, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    // convergents p_{-1}/q_{-1} = 1/0, p_0/q_0 = a0/1
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for _ in 0..FUNDAMENTAL_UNIT_STEP_CAP {
        m = &d * &a - &m;
        d = (n - &m * &m) / &d;
        a = (&a0 + &m) / &d;
        if a == &a0 * 2 {
            return Ok((p, q));
        }
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    Err(Error::PeriodCapExceeded(FUNDAMENTAL_UNIT_STEP_CAP))
}

impl RingHandle {
    /// `Some(n)` when this is the table ring `ℤ[w]/(w² − n)` in the basis
    /// `(1, w)`.
    pub fn sqrt_parameter(&self) -> Option<BigInt> {
        let Backend::Table(t) = &self.0.backend else {
            return None;
        };
        if t.rank != 2 || t.one != [BigInt::one(), BigInt::zero()] {
            return None;
        }
        let e = |i: i64, j: i64| [BigInt::from(i), BigInt::from(j)];
        if t.mul[0][0] != e(1, 0) || t.mul[0][1] != e(0, 1) || !t.mul[1][1][1].is_zero() {
            return None;
        }
        Some(t.mul[1][1][0].clone())
    }

    /// Generators of the unit group (the identity is omitted).
    ///
    /// Finite rings list every non-identity unit; `ℤ[√n]` with `n < 0` lists
    /// its finitely many units; `ℤ[√n]` with `n > 0` non-square gives `−1`
    /// and the fundamental unit; `ℤ[1/f]` gives `−1` and the primes of `f`.
    pub fn unit_group_generators(&self) -> Result<Vec<RingElement>> {
        match &self.0.backend {
            Backend::Integers => return Ok(vec![self.int(-1)]),
            Backend::Quotient { .. } => {
                return Ok(self
                    .enumerate_units()?
                    .into_iter()
                    .filter(|u| !u.is_one())
                    .collect())
            }
            Backend::Localization { primes, .. } => {
                let mut gens = vec![self.int(-1)];
                gens.extend(primes.iter().map(|p| self.int(p.clone())));
                return Ok(gens);
            }
            Backend::Table(_) => {}
        }
        let n = self
            .sqrt_parameter()
            .ok_or_else(|| Error::UnsupportedRing("unit group of a general table ring".into()))?;
        if n.is_negative() {
            let mut units = vec![self.int(-1)];
            if n == BigInt::from(-1) {
                units.push(self.basis(1));
                units.push(-&self.basis(1));
            }
            return Ok(units);
        }
        if n.is_zero() || n.sqrt().pow(2) == n {
            return Err(Error::UnsupportedRing(format!("ℤ[√{n}] with square parameter")));
        }
        let (x, y) = fundamental_unit(&n)?;
        Ok(vec![self.int(-1), self.element(vec![x, y])?])
    }
}

/// Square roots of `t` in `ℤ[√n]` (`n` non-square), up to sign: solves
/// `a² + n b² = t₀`, `2ab = t₁` using `a² − n b² = ±√(t₀² − n t₁²)`.
pub(crate) fn sqrt_in_quadratic(ring: &RingHandle, n: &BigInt, t: &RingElement) -> Option<RingElement> {
    let c = t.coords();
    let (t0, t1) = (&c[0], &c[1]);
    let disc = t0 * t0 - n * t1 * t1;
    if disc.is_negative() {
        return None;
    }
    let root = disc.sqrt();
    if &root * &root != disc {
        return None;
    }
    for nrm in [root.clone(), -root] {
        // a² = (t0 + nrm)/2, n b² = (t0 − nrm)/2
        let two_a2 = t0 + &nrm;
        if two_a2.is_odd() || two_a2.is_negative() {
            continue;
        }
        let a2: BigInt = two_a2 / 2;
        let a = a2.sqrt();
        if &a * &a != a2 {
            continue;
        }
        let nb2: BigInt = (t0 - &nrm) / 2;
        let b2 = if n.is_zero() {
            continue;
        } else {
            let (q, r) = nb2.div_rem(n);
            if !r.is_zero() || q.is_negative() {
                continue;
            }
            q
        };
        let b = b2.sqrt();
        if &b * &b != b2 {
            continue;
        }
        for sb in [b.clone(), -b.clone()] {
            let cand = ring.element(vec![a.clone(), sb]).ok()?;
            if cand.square() == *t {
                return Some(cand);
            }
        }
    }
    None
}
