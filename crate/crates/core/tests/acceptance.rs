//! Acceptance suite: one PASS/FAIL line per criterion, each checked against
//! its time budget.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use quadalg::algebras::{
    algebras_isomorphic, automorphisms_bruteforce, change_basis, find_parities, isomorphic_bruteforce,
    oriented_automorphisms_bruteforce, oriented_isomorphic, oriented_type, type_of, types_isomorphic,
    valid_integer_deltas, AlgebraHom, FreeQuadraticAlgebra, Orientation,
};
use quadalg::forms::{act_gl2tw, equivalent_gl2tw, principal_form, TwistedForm};
use quadalg::glue::{
    build_glued, check_cocycle_transitions, check_transition_hom, random_valid_data, verification_report,
    GluedTypeData, LineBundleCocycle, PrincipalCover,
};
use quadalg::picard::{class_group, form_to_ideal, ideal_to_form, pic_mod_conjugation, wood_local_algebra};
use quadalg::quadtype::AlgebraType;
use quadalg::ring::{RingElement, RingHandle};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{affine_automorphisms_mod, big, hnf_class_count, negative_discriminants, random_gl2z};

type Outcome = Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn form(a: i64, b: i64, c: i64) -> TwistedForm {
    TwistedForm::over_integers(a, b, c)
}

fn alg(ring: &RingHandle, r: &str, s: &str) -> FreeQuadraticAlgebra {
    FreeQuadraticAlgebra::new(ring.parse_element(r).unwrap(), ring.parse_element(s).unwrap()).unwrap()
}

fn ty(ring: &RingHandle, d: &str, p: &str) -> AlgebraType {
    AlgebraType::from_lift(ring.parse_element(d).unwrap(), &ring.parse_element(p).unwrap()).unwrap()
}

fn class_group_minus_44() -> Outcome {
    let g = class_group(&big(-44)).map_err(err)?;
    ensure(g.h() == 3, || format!("h = {}", g.h()))?;
    let want = vec![form(1, 0, 11), form(3, 2, 4), form(3, -2, 4)];
    ensure(g.reps == want, || format!("reps {:?}", g.reps))?;
    let i = form_to_ideal(&form(3, 2, 4), &g.order).map_err(err)?;
    let expected = g.order.ideal(&[(big(3), big(0)), (big(-1), big(1))]).map_err(err)?;
    ensure(i == expected, || format!("[3,2,4] ↦ {i}"))?;
    ensure(i.hnf() == (&big(3), &big(2), &big(1)), || format!("hnf {:?}", i.hnf()))?;
    let o = form_to_ideal(&form(1, 0, 11), &g.order).map_err(err)?;
    ensure(o == g.order.unit_ideal(), || format!("[1,0,11] ↦ {o}"))
}

fn pic_mod_conj_minus_44() -> Outcome {
    let orbits = pic_mod_conjugation(&big(-44)).map_err(err)?;
    let want = vec![vec![form(1, 0, 11)], vec![form(3, 2, 4), form(3, -2, 4)]];
    ensure(orbits == want, || format!("orbits {orbits:?}"))
}

fn bijection_sweep() -> Outcome {
    for d in negative_discriminants(-400, -3) {
        let g = class_group(&big(d)).map_err(err)?;
        let h = g.h();
        let independent = hnf_class_count(d);
        ensure(h == independent, || format!("Δ={d}: {h} reduced forms, {independent} ideal classes"))?;
        let index = |q: &TwistedForm| g.reps.iter().position(|r| r == q);
        for q in &g.reps {
            let back = ideal_to_form(&form_to_ideal(q, &g.order).map_err(err)?).map_err(err)?;
            ensure(equivalent_gl2tw(&back, q).map_err(err)?, || format!("Δ={d}: round trip of {q} gives {back}"))?;
        }
        let mut table = vec![vec![0usize; h]; h];
        for (i, p) in g.reps.iter().enumerate() {
            for (j, q) in g.reps.iter().enumerate() {
                let r = g.compose(p, q).map_err(err)?;
                table[i][j] = index(&r).ok_or_else(|| format!("Δ={d}: {p}∘{q} = {r} is not a representative"))?;
            }
        }
        let e = index(&principal_form(&big(d)).map_err(err)?)
            .ok_or_else(|| format!("Δ={d}: principal form missing"))?;
        for i in 0..h {
            ensure(table[e][i] == i && table[i][e] == i, || format!("Δ={d}: identity fails on {}", g.reps[i]))?;
            ensure((0..h).any(|j| table[i][j] == e), || format!("Δ={d}: {} has no inverse", g.reps[i]))?;
            let opp = g.inverse(&g.reps[i]).map_err(err)?;
            ensure(g.compose(&g.reps[i], &opp).map_err(err)? == g.identity(), || {
                format!("Δ={d}: q∘opposite(q) not principal for {}", g.reps[i])
            })?;
            for j in 0..h {
                ensure(table[i][j] == table[j][i], || format!("Δ={d}: not commutative"))?;
                for k in 0..h {
                    ensure(table[table[i][j]][k] == table[i][table[j][k]], || format!("Δ={d}: not associative"))?;
                }
            }
        }
    }
    Ok(())
}

fn parity_over_zsqrt8() -> Outcome {
    let r = RingHandle::parse("zsqrt8").map_err(err)?;
    let c1 = alg(&r, "0", "-6");
    let c2 = alg(&r, "w", "-4");
    let (t1, t2) = (type_of(&c1), type_of(&c2));
    ensure(t1 == ty(&r, "24", "0"), || format!("type_of(τ²−6) = {t1}"))?;
    ensure(t2 == ty(&r, "24", "w"), || format!("type_of(τ²+wτ−4) = {t2}"))?;
    ensure(types_isomorphic(&t1, &t2).map_err(err)?.is_none(), || "types isomorphic".into())?;
    ensure(algebras_isomorphic(&c1, &c2).map_err(err)?.is_none(), || "algebras isomorphic".into())
}

fn zero_divisor_suite() -> Outcome {
    let f4 = RingHandle::parse("f4").map_err(err)?;
    let (c1, c2) = (alg(&f4, "1", "1"), alg(&f4, "1", "X"));
    let t = ty(&f4, "1", "1");
    ensure(type_of(&c1) == t && type_of(&c2) == t, || "F4 types differ from (1, 1)".into())?;
    ensure(isomorphic_bruteforce(&c1, &c2).map_err(err)?.is_none(), || "F4 algebras isomorphic".into())?;

    let z4 = RingHandle::parse("zmod4").map_err(err)?;
    let algs: Vec<_> = (0..4).map(|s| FreeQuadraticAlgebra::new(z4.int(0), z4.int(-s)).unwrap()).collect();
    let zero_type = ty(&z4, "0", "0");
    for (i, a) in algs.iter().enumerate() {
        ensure(type_of(a) == zero_type, || format!("Z/4 type of τ²−{i} is {}", type_of(a)))?;
        for (j, b) in algs.iter().enumerate().filter(|(j, _)| *j != i) {
            ensure(isomorphic_bruteforce(a, b).map_err(err)?.is_none(), || format!("Z/4: τ²−{i} ≅ τ²−{j}"))?;
        }
    }

    let z8 = RingHandle::parse("zmod8").map_err(err)?;
    let c = alg(&z8, "0", "-2");
    let autos = automorphisms_bruteforce(&c).map_err(err)?;
    let oracle = affine_automorphisms_mod(8, 0, -2);
    ensure(autos.len() == 8 && oracle.len() == 8, || format!("Z/8: {} automorphisms, oracle {}", autos.len(), oracle.len()))?;
    for u in [1, 3, 5, 7] {
        let theta = Orientation::new(z8.int(u)).map_err(err)?;
        let oriented = oriented_automorphisms_bruteforce(&c, &theta).map_err(err)?;
        ensure(oriented.len() == 2, || format!("Z/8: {} oriented automorphisms", oriented.len()))?;
    }
    let oracle_oriented = oracle.iter().filter(|(u, _)| *u == 1).count();
    ensure(oracle_oriented == 2, || format!("Z/8 oracle: {oracle_oriented} oriented automorphisms"))
}

fn oriented_biquadratic() -> Outcome {
    let r = RingHandle::parse("biquad8").map_err(err)?;
    let c = alg(&r, "X", "2");
    let th1 = Orientation::new(r.one()).map_err(err)?;
    let th2 = Orientation::new(r.parse_element("3-Y").unwrap()).map_err(err)?;
    let (o1, o2) = (oriented_type(&c, &th1).map_err(err)?, oriented_type(&c, &th2).map_err(err)?);
    ensure(o1.delta.is_zero() && o2.delta.is_zero(), || format!("oriented discriminants {} and {}", o1.delta, o2.delta))?;
    ensure(o1.parity == r.parse_element("X").unwrap().mod2(), || format!("θ₁ parity {}", o1.parity))?;
    ensure(o2.parity == r.parse_element("X+XY").unwrap().mod2(), || format!("θ₂ parity {}", o2.parity))?;
    ensure(oriented_isomorphic(&c, &th1, &c, &th2).map_err(err)?.is_none(), || "oriented isomorphism found".into())
}

fn random_unit(ring: &RingHandle, rng: &mut StdRng) -> RingElement {
    let gens = ring.unit_group_generators().unwrap();
    let mut u = ring.one();
    for g in gens {
        let e: i32 = rng.gen_range(-3..=3);
        let factor = if e < 0 { g.inverse().unwrap() } else { g };
        for _ in 0..e.unsigned_abs() {
            u = &u * &factor;
        }
    }
    u
}

fn two_regular_rings() -> Vec<RingHandle> {
    ["z", "zsqrt2", "zsqrt8"].iter().map(|n| RingHandle::parse(n).unwrap()).collect()
}

fn oriented_rigidity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x0a17);
    for ring in two_regular_rings() {
        for _ in 0..400 {
            let c = FreeQuadraticAlgebra::new(ring.sample(&mut rng, 50), ring.sample(&mut rng, 50)).map_err(err)?;
            let theta = Orientation::new(random_unit(&ring, &mut rng)).map_err(err)?;
            let autos = oriented_automorphisms_bruteforce(&c, &theta).map_err(err)?;
            ensure(autos == vec![AlgebraHom::identity(&ring)], || format!("{c}: automorphisms {autos:?}"))?;
        }
    }
    Ok(())
}

fn parity_uniqueness() -> Outcome {
    let z = RingHandle::integers();
    let s2 = RingHandle::parse("zsqrt2").map_err(err)?;
    for ring in [&z, &s2] {
        let deltas = valid_integer_deltas(ring, 200).map_err(err)?;
        ensure(!deltas.is_empty(), || "no valid deltas".into())?;
        for d in deltas {
            let n = find_parities(ring, &d).map_err(err)?.len();
            ensure(n == 1, || format!("{} parities for {d}", n))?;
        }
    }
    for a in -200..=200 {
        for b in -20..=20 {
            let d = s2.element_i64(&[a, b]).unwrap();
            let n = find_parities(&s2, &d).map_err(err)?.len();
            ensure(n <= 1, || format!("{n} parities for {d}"))?;
        }
    }
    let s8 = RingHandle::parse("zsqrt8").map_err(err)?;
    let n = find_parities(&s8, &s8.int(24)).map_err(err)?.len();
    ensure(n == 2, || format!("{n} parities for 24 over Z[√8]"))
}

/// `(x₀ + x₁τ)(y₀ + y₁τ)` in `R[τ]/(τ² + rτ + s)`.
fn alg_mul(c: &FreeQuadraticAlgebra, x: &(RingElement, RingElement), y: &(RingElement, RingElement)) -> (RingElement, RingElement) {
    let t2 = &x.1 * &y.1;
    (
        &(&x.0 * &y.0) - &(&c.s * &t2),
        &(&(&x.0 * &y.1) + &(&x.1 * &y.0)) - &(&c.r * &t2),
    )
}

/// Whether `uτ' + v` is a root of the source polynomial, computed in the target.
fn hom_is_root(h: &AlgebraHom, source: &FreeQuadraticAlgebra, target: &FreeQuadraticAlgebra) -> bool {
    let t = (h.v.clone(), h.u.clone());
    let sq = alg_mul(target, &t, &t);
    let c0 = &(&sq.0 + &(&source.r * &t.0)) + &source.s;
    let c1 = &sq.1 + &(&source.r * &t.1);
    h.u.is_unit() && c0.is_zero() && c1.is_zero()
}

fn norm_zsqrt2(x: &RingElement) -> BigInt {
    let c = x.coords();
    &c[0] * &c[0] - BigInt::from(2) * &c[1] * &c[1]
}

fn uniqueness_property() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let z = RingHandle::integers();
    let s2 = RingHandle::parse("zsqrt2").map_err(err)?;
    for ring in [&z, &s2] {
        let (mut iso, mut non_iso) = (0, 0);
        while iso < 600 || non_iso < 600 {
            let c1 = FreeQuadraticAlgebra::new(ring.sample(&mut rng, 30), ring.sample(&mut rng, 30)).map_err(err)?;
            if iso < 600 {
                let eps = random_unit(ring, &mut rng);
                let c2 = change_basis(&c1, &eps, &ring.sample(&mut rng, 30)).map_err(err)?;
                let h = algebras_isomorphic(&c1, &c2)
                    .map_err(err)?
                    .ok_or_else(|| format!("{c1} and {c2}: no hom"))?;
                ensure(hom_is_root(&h, &c1, &c2), || format!("{c1} → {c2}: {h} does not verify"))?;
                iso += 1;
            }
            let c2 = FreeQuadraticAlgebra::new(ring.sample(&mut rng, 30), ring.sample(&mut rng, 30)).map_err(err)?;
            let (t1, t2) = (type_of(&c1), type_of(&c2));
            let differ = if ring.is_integers() {
                t1 != t2
            } else {
                norm_zsqrt2(&t1.delta) != norm_zsqrt2(&t2.delta)
            };
            if differ && non_iso < 600 {
                ensure(algebras_isomorphic(&c1, &c2).map_err(err)?.is_none(), || format!("{c1} ≅ {c2} reported"))?;
                non_iso += 1;
            }
        }
    }
    Ok(())
}

fn glue_verification() -> Outcome {
    let cover = PrincipalCover::new([2, 3]);
    let (r0, r1, r01) = (
        cover.ring(&[0]).map_err(err)?,
        cover.ring(&[1]).map_err(err)?,
        cover.ring(&[0, 1]).map_err(err)?,
    );
    let mut cocycle = LineBundleCocycle::default();
    cocycle.eps.insert((0, 1), r01.parse_element("3/2").map_err(err)?);
    let data = GluedTypeData {
        d: vec![r0.int(-99), r1.int(-44)],
        p: vec![r0.int(1), r1.int(0)],
    };
    let g = build_glued(&cover, &cocycle, &data).map_err(err)?;
    ensure(check_transition_hom(&g, 0, 1), || "worked example transition fails".into())?;
    let n = g.charts.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                ensure(check_cocycle_transitions(&g, i, j, k), || format!("cocycle fails on ({i},{j},{k})"))?;
            }
        }
    }
    let mut bad = g.clone();
    let t = bad.transitions.get_mut(&(0, 1)).unwrap();
    t.shift = &t.shift + &r01.one();
    ensure(!check_transition_hom(&bad, 0, 1), || "perturbed shift accepted".into())?;
    let mut rng = StdRng::seed_from_u64(0x61e);
    for n in 0..150 {
        let (cover, cocycle, data) = random_valid_data(&mut rng).map_err(err)?;
        let report = verification_report(&cover, &cocycle, &data).map_err(err)?;
        let glued_checked = cover.len() == 1 || report.iter().any(|c| c.check == "transition_hom");
        ensure(glued_checked, || format!("dataset {n}: glued checks missing"))?;
        if let Some(c) = report.iter().find(|c| !c.ok) {
            return Err(format!("dataset {n} over {:?}: {} {:?} failed", cover.opens, c.check, c.indices));
        }
    }
    Ok(())
}

fn type_preservation() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x7e);
    for d in negative_discriminants(-400, -3) {
        for q in class_group(&big(d)).map_err(err)?.reps {
            let nt = q.natural_type();
            ensure(type_of(&wood_local_algebra(&q)) == nt, || format!("{q}: algebra type differs"))?;
            for _ in 0..10 {
                let mu = random_gl2z(&mut rng, 6);
                let moved = act_gl2tw(&mu, &q).map_err(err)?;
                ensure(moved.natural_type() == nt, || format!("{q} ↦ {moved}: natural type changed"))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("class group of discriminant -44", 1, class_group_minus_44),
        ("class group modulo conjugation for -44", 1, pic_mod_conj_minus_44),
        ("forms and ideal classes agree on [-400,-3]", 30, bijection_sweep),
        ("types over Z[√8] do not determine parity", 1, parity_over_zsqrt8),
        ("counterexamples when 2 is a zero divisor", 1, zero_divisor_suite),
        ("oriented types over the biquadratic ring", 1, oriented_biquadratic),
        ("oriented automorphisms are trivial", 5, oriented_rigidity),
        ("at most one parity per discriminant", 5, parity_uniqueness),
        ("isomorphic types give verified isomorphisms", 10, uniqueness_property),
        ("glued algebras over principal covers", 5, glue_verification),
        ("the form to algebra map preserves types", 10, type_preservation),
    ];
    let mut failures = 0;
    for (n, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed < Duration::from_secs(*budget), || format!("took {elapsed:.2?}, budget {budget}s"))
        });
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({elapsed:.2?})", n + 1),
            Err(e) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {e}", n + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
