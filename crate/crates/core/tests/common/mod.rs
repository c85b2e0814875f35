//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use quadalg::forms::GL2Matrix;
use quadalg::picard::{conjugate, ideal_mul, is_invertible, is_principal_by_search, OrderIdeal, QuadraticOrder};
use rand::Rng;

/// Negative discriminants in `[lo, hi]` congruent to 0 or 1 mod 4.
pub fn negative_discriminants(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).filter(|d| *d < 0 && d.rem_euclid(4) <= 1).collect()
}

fn same_class(i: &OrderIdeal, j: &OrderIdeal) -> bool {
    is_principal_by_search(&ideal_mul(i, &conjugate(j)).unwrap())
}

/// Number of ideal classes, computed without forms: collect the invertible
/// ideals `⟨a, b + ω⟩` of small norm, sort them into classes by searching for
/// a generator of `I·J̄`, then close the classes under multiplication.
pub fn hnf_class_count(delta: i64) -> usize {
    let order = QuadraticOrder::from_delta(delta).unwrap();
    let mut bound = 1;
    while 3 * (bound + 1) * (bound + 1) <= delta.abs() {
        bound += 1;
    }
    let mut classes: Vec<OrderIdeal> = Vec::new();
    for a in 1..=bound {
        for b in 0..a {
            let Ok(i) = OrderIdeal::from_hnf(&order, a.into(), b.into(), 1.into()) else {
                continue;
            };
            if is_invertible(&i) && !classes.iter().any(|j| same_class(&i, j)) {
                classes.push(i);
            }
        }
    }
    loop {
        let snapshot = classes.clone();
        for x in &snapshot {
            for y in &snapshot {
                let p = ideal_mul(x, y).unwrap();
                if !classes.iter().any(|j| same_class(&p, j)) {
                    classes.push(p);
                }
            }
        }
        if classes.len() == snapshot.len() {
            return classes.len();
        }
    }
}

/// A random element of `GL₂(ℤ)` as a product of elementary moves.
pub fn random_gl2z<R: Rng>(rng: &mut R, steps: usize) -> GL2Matrix {
    let mut m = GL2Matrix::integer(1, 0, 0, 1).unwrap();
    for _ in 0..steps {
        let t = rng.gen_range(-3..=3);
        let e = match rng.gen_range(0..4) {
            0 => GL2Matrix::integer(1, t, 0, 1),
            1 => GL2Matrix::integer(1, 0, t, 1),
            2 => GL2Matrix::integer(0, 1, 1, 0),
            _ => GL2Matrix::integer(-1, 0, 0, 1),
        };
        m = m.mul(&e.unwrap());
    }
    m
}

/// Maps `τ ↦ uτ + v` of `(ℤ/m)[τ]/(τ² + rτ + s)` to itself, found by checking
/// multiplicativity of the induced linear map on every pair of elements.
/// Returns the `(u, v)` pairs with `u` a unit.
pub fn affine_automorphisms_mod(m: i64, r: i64, s: i64) -> Vec<(i64, i64)> {
    let md = |x: i64| x.rem_euclid(m);
    // (x0 + x1τ)(y0 + y1τ) with τ² = −rτ − s
    let mul = |x: (i64, i64), y: (i64, i64)| {
        let t2 = x.1 * y.1;
        (md(x.0 * y.0 - s * t2), md(x.0 * y.1 + x.1 * y.0 - r * t2))
    };
    let mut out = Vec::new();
    for u in 0..m {
        if num_integer::gcd(u, m) != 1 {
            continue;
        }
        for v in 0..m {
            let phi = |x: (i64, i64)| (md(x.0 + x.1 * v), md(x.1 * u));
            let multiplicative = (0..m * m).all(|i| {
                let x = (i / m, i % m);
                (0..m * m).all(|j| {
                    let y = (j / m, j % m);
                    phi(mul(x, y)) == mul(phi(x), phi(y))
                })
            });
            if multiplicative {
                out.push((u, v));
            }
        }
    }
    out
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}
