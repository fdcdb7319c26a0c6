//! Shared instances and property checks for the integration tests and the
//! acceptance harness. Each check returns `Err` with a description of the
//! first violation.

#![allow(dead_code)]

use std::sync::OnceLock;

use maxclass::action::ActorElement;
use maxclass::analysis::{assign_types, partition_trees, GaloisTree};
use maxclass::fixed::{congruent, divisors, eigen_component, exact_level, in_eigenspace, stabilizer_u2};
use maxclass::lattice::ParamPoint;
use maxclass::session::{Session, SessionConfig};
use maxclass::skeleton::{build_skeleton, BuildOptions, Parallelism, SkeletonTree};
use maxclass::CycElem;
use proptest::prelude::*;

pub type Outcome = Result<(), String>;

pub fn session(p: u64, n: u32, depth: u32) -> Session {
    Session::new(SessionConfig::new(p, n, depth)).expect("valid instance")
}

pub fn s7_11() -> &'static Session {
    static S: OnceLock<Session> = OnceLock::new();
    S.get_or_init(|| session(7, 11, 5))
}

pub fn s11_20() -> &'static Session {
    static S: OnceLock<Session> = OnceLock::new();
    S.get_or_init(|| session(11, 20, 6))
}

/// Full skeleton of S_7(11) with typed Galois trees.
pub fn s7_11_tree() -> &'static (SkeletonTree, Vec<GaloisTree>) {
    static T: OnceLock<(SkeletonTree, Vec<GaloisTree>)> = OnceLock::new();
    T.get_or_init(|| {
        let s = s7_11();
        let tree = build_skeleton(s, BuildOptions::full(5)).expect("build");
        let mut trees = partition_trees(&tree);
        assign_types(s, &tree, &mut trees, Parallelism::Auto).expect("types");
        (tree, trees)
    })
}

/// The point with layer digits `digits` (ℓ per layer) starting at `level`.
pub fn point(s: &Session, digits: &[u64], level: u32) -> ParamPoint {
    let f = &s.field;
    let lat = &s.lattice;
    let mut x = ParamPoint::zero(s.ell());
    for (i, chunk) in digits.chunks(s.ell()).enumerate() {
        x = lat.add(f, &x, &lat.from_layer_digits(f, chunk, level + i as u32));
    }
    x
}

/// A unit from θ-power coefficients, nudged off the maximal ideal.
pub fn unit(s: &Session, coeffs: &[i64]) -> CycElem {
    let f = &s.field;
    let u = f.from_theta_coeffs(coeffs);
    if f.is_unit(&u) {
        u
    } else {
        f.add(&u, &f.one())
    }
}

/// The `k(n − 2j)` eigenvalue exponents of `(1, σ^k)` that occur on
/// `Γ_n / Γ_{n+1}` equal `{k(n − 2j) mod d : j = 1..ℓ}`, for every `k | d`.
pub fn spectrum(s: &Session) -> Outcome {
    let f = &s.field;
    let lat = &s.lattice;
    let (n, d) = (s.n(), s.d());
    for k in divisors(d) {
        let h = d / k;
        let mut expected: Vec<u32> =
            (1..=s.ell() as i64).map(|j| (k as i64 * (n as i64 - 2 * j)).rem_euclid(d as i64) as u32).collect();
        expected.sort_unstable();
        expected.dedup();
        let mut found = Vec::new();
        for t in (0..d).step_by(k as usize) {
            let mut occurs = false;
            for j in 0..s.ell() {
                let mut y = vec![0u64; s.ell()];
                y[j] = 1;
                let c = eigen_component(s, &lat.from_layer_digits(f, &y, n), k, h, t).map_err(|e| e.to_string())?;
                occurs |= lat.level_of(f, &c) == Some(n);
            }
            if occurs {
                found.push(t);
            }
        }
        if found != expected {
            return Err(format!("S_{}({n}), k = {k}: eigenvalues {found:?}, expected {expected:?}", s.p()));
        }
    }
    Ok(())
}

/// `x` is the sum of its eigencomponents under `(1, σ^k)`, each lying in
/// its eigenspace and in the same `Γ_m` as `x`.
pub fn direct_sum(s: &Session, x: &ParamPoint, k: u32) -> Outcome {
    let f = &s.field;
    let lat = &s.lattice;
    let d = s.d();
    let h = d / k;
    let level = lat.level_of(f, x).unwrap_or(s.n());
    let mut sum = ParamPoint::zero(s.ell());
    for t in (0..d).step_by(k as usize) {
        let c = eigen_component(s, x, k, h, t).map_err(|e| e.to_string())?;
        if !in_eigenspace(s, &c, k, t).map_err(|e| e.to_string())? {
            return Err(format!("k = {k}: component {t} is not an eigenvector"));
        }
        if !lat.gamma_member(f, &c, level).map_err(|e| e.to_string())? {
            return Err(format!("k = {k}: component {t} leaves Γ_{level}"));
        }
        sum = lat.add(f, &sum, &c);
    }
    if !congruent(s, &sum, x, exact_level(s)).map_err(|e| e.to_string())? {
        return Err(format!("k = {k}: components do not reassemble x"));
    }
    Ok(())
}

/// `x ∈ Δ_m` implies `p·x ∈ Δ_{m+d}`, and every point of `Γ_{m+d}` is
/// `p` times a point of `Γ_m`.
pub fn p_scaling(s: &Session, x: &ParamPoint) -> Outcome {
    let f = &s.field;
    let lat = &s.lattice;
    let d = s.d();
    let Some(m) = lat.level_of(f, x) else {
        return Ok(());
    };
    let px = lat.scale(f, x, s.p());
    if lat.level_of(f, &px) != Some(m + d) {
        return Err(format!("x ∈ Δ_{m} but p·x has level {:?}", lat.level_of(f, &px)));
    }
    let quotient = ParamPoint {
        tau: px.tau.iter().map(|t| f.div_p(t)).collect::<Result<_, _>>().map_err(|e| e.to_string())?,
    };
    if !congruent(s, &quotient, x, m + d).map_err(|e| e.to_string())? {
        return Err("p·x / p differs from x".into());
    }
    Ok(())
}

/// Composition, identity, additivity and level preservation of the action.
pub fn action_axioms(s: &Session, g: &ActorElement, h: &ActorElement, x: &ParamPoint, y: &ParamPoint) -> Outcome {
    let f = &s.field;
    let lat = &s.lattice;
    let top = exact_level(s);
    let act = |g: &ActorElement, x: &ParamPoint| s.act(g, x).map_err(|e| e.to_string());
    let eq = |a: &ParamPoint, b: &ParamPoint| congruent(s, a, b, top).map_err(|e| e.to_string());
    if !eq(&act(&g.compose(f, h), x)?, &act(g, &act(h, x)?)?)? {
        return Err("(gh)x ≠ g(hx)".into());
    }
    if !eq(&act(&ActorElement::identity(f), x)?, x)? {
        return Err("identity moves x".into());
    }
    if !eq(&act(g, &lat.add(f, x, y))?, &lat.add(f, &act(g, x)?, &act(g, y)?))? {
        return Err("g(x + y) ≠ gx + gy".into());
    }
    if lat.level_of(f, &act(g, x)?) != lat.level_of(f, x) {
        return Err("the action changes the level of x".into());
    }
    let inv = g.inverse(f).map_err(|e| e.to_string())?;
    if !eq(&act(&inv, &act(g, x)?)?, x)? {
        return Err("g⁻¹(gx) ≠ x".into());
    }
    Ok(())
}

/// For `u, u'` stabilizing `x + Γ_{n+e}`, the affine layer maps compose:
/// `(uu')·y = u·(u'·y)`, and `u·y` is the layer of `(u,1)(x + y) − x`.
pub fn affine_composition(s: &Session, x: &ParamPoint, e: u32, a: &[u64], b: &[u64], y: &[u64]) -> Outcome {
    let f = &s.field;
    let lat = &s.lattice;
    let units = &s.units;
    let n = s.n();
    let stab = stabilizer_u2(s, x, n + e).map_err(|e| e.to_string())?;
    let combine = |coeffs: &[u64]| {
        let mut c = [0u64; maxclass::MAX_DEGREE];
        for (row, &k) in stab.rows().iter().zip(coeffs) {
            c = units.add(&c, &units.scale(row, k));
        }
        units.to_unit(f, &c)
    };
    let (u1, u2) = (combine(a), combine(b));
    let aff = |u: &CycElem, y: &[u64]| s.affine_act(u, x, y, n, e).map_err(|e| e.to_string());
    let lhs = aff(&f.mul(&u1, &u2), y)?;
    let rhs = aff(&u1, &aff(&u2, y)?)?;
    if lhs != rhs {
        return Err(format!("(uu')·y = {lhs:?} but u·(u'·y) = {rhs:?}"));
    }
    let lifted = lat.add(f, x, &lat.from_layer_digits(f, y, n + e));
    let moved = lat.sub(f, &s.act(&ActorElement::from_unit(u2), &lifted).map_err(|e| e.to_string())?, x);
    if lat.layer_digits(f, &moved, n + e) != aff(&u2, y)? {
        return Err("affine formula disagrees with the action on x + y".into());
    }
    Ok(())
}

/// `log ∘ exp` and `exp ∘ log` are the identity, and `log` is a
/// homomorphism.
pub fn exp_log(s: &Session, xi: &CycElem, eta: &CycElem) -> Outcome {
    let f = &s.field;
    let prec = f.precision();
    let xi = f.mul(xi, &f.pi_pow(2));
    let eta = f.mul(eta, &f.pi_pow(2));
    let e = |r: maxclass::Result<CycElem>| r.map_err(|e| e.to_string());
    let u = e(f.exp(&xi))?;
    if !f.eq_mod(&e(f.log(&u))?, &xi, prec) {
        return Err("log(exp ξ) ≠ ξ".into());
    }
    let v = f.add(&f.one(), &eta);
    if !f.eq_mod(&e(f.exp(&e(f.log(&v))?))?, &v, prec) {
        return Err("exp(log u) ≠ u".into());
    }
    let lhs = e(f.log(&f.mul(&u, &v)))?;
    let rhs = f.add(&xi, &e(f.log(&v))?);
    if !f.eq_mod(&lhs, &rhs, prec) {
        return Err("log(uv) ≠ log u + log v".into());
    }
    Ok(())
}

pub fn instance() -> impl Strategy<Value = &'static Session> {
    prop_oneof![Just(()).prop_map(|_| s7_11()), Just(()).prop_map(|_| s11_20())]
}

/// Digits of a point of `Δ_m` modulo `Γ_{m+layers}`.
pub fn digits(s: &Session, layers: usize) -> impl Strategy<Value = Vec<u64>> {
    let (p, ell) = (s.p(), s.ell());
    prop::collection::vec(0..p, ell * layers).prop_map(move |mut v| {
        if v[..ell].iter().all(|&c| c == 0) {
            v[0] = 1;
        }
        v
    })
}

pub fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, 1..10)
}

pub fn actor(s: &'static Session) -> impl Strategy<Value = ActorElement> {
    (coeffs(), 0..s.d()).prop_map(move |(c, g)| ActorElement { unit: unit(s, &c), gal: g })
}

pub type Case<T> = (&'static Session, T);

pub fn direct_sum_cases() -> impl Strategy<Value = Case<(Vec<u64>, u32)>> {
    instance().prop_flat_map(|s| (Just(s), (digits(s, 3), prop::sample::select(divisors(s.d())))))
}

pub fn scaling_cases() -> impl Strategy<Value = Case<(Vec<u64>, u32)>> {
    instance().prop_flat_map(|s| (Just(s), (digits(s, 2), 0u32..3)))
}

pub fn action_cases() -> impl Strategy<Value = Case<(ActorElement, ActorElement, Vec<u64>, Vec<u64>)>> {
    instance().prop_flat_map(|s| (Just(s), (actor(s), actor(s), digits(s, 3), digits(s, 3))))
}

pub fn affine_cases() -> impl Strategy<Value = Case<(u32, Vec<u64>, Vec<u64>, Vec<u64>, Vec<u64>)>> {
    instance().prop_flat_map(|s| {
        let (p, ell, d) = (s.p(), s.ell(), s.d() as usize);
        (1u32..3).prop_flat_map(move |e| {
            (
                Just(s),
                (
                    Just(e),
                    digits(s, e as usize),
                    prop::collection::vec(0..p * p, d),
                    prop::collection::vec(0..p * p, d),
                    prop::collection::vec(0..p, ell),
                ),
            )
        })
    })
}

pub fn exp_log_cases() -> impl Strategy<Value = Case<(Vec<i64>, Vec<i64>)>> {
    instance().prop_flat_map(|s| (Just(s), (coeffs(), coeffs())))
}

pub fn direct_sum_case((s, (ds, k)): Case<(Vec<u64>, u32)>) -> Outcome {
    direct_sum(s, &point(s, &ds, s.n()), k)
}

pub fn scaling_case((s, (ds, shift)): Case<(Vec<u64>, u32)>) -> Outcome {
    p_scaling(s, &point(s, &ds, s.n() + shift))
}

pub fn action_case((s, (g, h, a, b)): Case<(ActorElement, ActorElement, Vec<u64>, Vec<u64>)>) -> Outcome {
    action_axioms(s, &g, &h, &point(s, &a, s.n()), &point(s, &b, s.n() + 1))
}

pub fn affine_case((s, (e, ds, a, b, y)): Case<(u32, Vec<u64>, Vec<u64>, Vec<u64>, Vec<u64>)>) -> Outcome {
    affine_composition(s, &point(s, &ds, s.n()), e, &a, &b, &y)
}

pub fn exp_log_case((s, (a, b)): Case<(Vec<i64>, Vec<i64>)>) -> Outcome {
    let f = &s.field;
    exp_log(s, &f.from_theta_coeffs(&a), &f.from_theta_coeffs(&b))
}
