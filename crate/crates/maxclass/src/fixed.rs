//! Transporters, fixed points and types.
//!
//! `solve_u_map` decides whether some `u ∈ U` maps `(1, σ^r)x` to `y` modulo
//! `Γ_m`, lifting through the layers `Γ_k / Γ_{k+1}` with the same affine
//! machinery as the orbit enumeration. Global fixed points are built from a
//! stabilizer element `(u, τ)` by removing the image-of-χ part of `u` and
//! projecting onto an eigenspace of `(1, τ)`.

use crate::action::ActorElement;
use crate::error::{Error, Result};
use crate::lattice::ParamPoint;
use crate::modular::inv_mod;
use crate::orbits::LatticeAction;
use crate::session::Session;
use crate::units::{split_unit, Exps, U2Lattice};

/// `Stab_{U_2}(x + Γ_m)` for `x ∈ Γ_n`, modulo `U_J`.
pub fn stabilizer_u2(session: &Session, x: &ParamPoint, level: u32) -> Result<U2Lattice> {
    let mut lat = U2Lattice::full(&session.units);
    let zero = vec![0u64; session.ell()];
    for k in session.n()..level {
        let act = LatticeAction::new(session, &lat, x, k)?;
        lat = act.point_stabilizer(session, &lat, &zero);
    }
    Ok(lat)
}

/// Some `c ∈ U_2` with `(c, 1)x ≡ y mod Γ_m`, for `x ≡ y mod Γ_n`.
pub fn solve_u2(session: &Session, x: &ParamPoint, y: &ParamPoint, level: u32) -> Result<Option<Exps>> {
    solve_u2_in(session, &U2Lattice::full(&session.units), x, y, level)
}

/// As [`solve_u2`], with `c` restricted to the subgroup `within`.
pub fn solve_u2_in(session: &Session, within: &U2Lattice, x: &ParamPoint, y: &ParamPoint, level: u32) -> Result<Option<Exps>> {
    let f = &session.field;
    let lat_ops = &session.lattice;
    let units = &session.units;
    let mut lat = within.clone();
    let mut acc = [0u64; crate::MAX_DEGREE];
    let mut w = x.clone();
    let zero = vec![0u64; session.ell()];
    for k in session.n()..level {
        let diff = lat_ops.sub(f, y, &w);
        if !lat_ops.gamma_member(f, &diff, k)? {
            return Err(Error::InternalInconsistency(format!("lift lost congruence at level {k}")));
        }
        let target = lat_ops.layer_digits(f, &diff, k);
        let act = LatticeAction::new(session, &lat, &w, k)?;
        let Some(t) = act.transporter(session, &zero, &target) else {
            return Ok(None);
        };
        lat = act.point_stabilizer(session, &lat, &target);
        acc = units.add(&acc, &t);
        w = session.act(&ActorElement::from_unit(units.to_unit(f, &acc)), x)?;
    }
    Ok(Some(acc))
}

/// Some `u ∈ U` with `(u, σ^r)x ≡ y mod Γ_m`, for `x, y ∈ Γ_n`.
pub fn solve_u_map(session: &Session, x: &ParamPoint, y: &ParamPoint, r: u32, level: u32) -> Result<Option<ActorElement>> {
    let f = &session.field;
    let x1 = session.act(&ActorElement::galois(f, r), x)?;
    for a in 0..session.d() {
        let w = f.from_u64(f.omega_pow(a as i64));
        let x2 = session.act(&ActorElement::from_unit(w), &x1)?;
        if let Some(c) = solve_u2(session, &x2, y, level)? {
            let u = f.mul(&session.units.to_unit(f, &c), &w);
            return Ok(Some(ActorElement { unit: u, gal: r % session.d() }));
        }
    }
    Ok(None)
}

/// Galois order of `x + Γ_m`, from the fixed-point criterion: the largest
/// `h | d` such that some `(u, σ^{d/h})` fixes the class.
pub fn class_galois_order(session: &Session, x: &ParamPoint, level: u32, candidates: &[u32]) -> Result<u32> {
    let d = session.d();
    let mut best = 1;
    for &h in candidates {
        if h > best && solve_u_map(session, x, x, d / h, level)?.is_some() {
            best = h;
        }
    }
    Ok(best)
}

/// Positive divisors of `n`, increasing.
pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// Split `c ∈ U_2` (exponents) as `v + w` with `v` fixed by `σ^k` and `w` in
/// the image of `1 - T`, where `T` is `σ^k` on exponents and `h` its order.
pub fn kernel_image_split(session: &Session, c: &Exps, k: u32, h: u32) -> Result<(Exps, Exps)> {
    let f = &session.field;
    let units = &session.units;
    let t = units.galois_matrix(f, f.sigma_index(k as i64))?;
    let mut sum = [0u64; crate::MAX_DEGREE];
    let mut cur = *c;
    for _ in 0..h {
        sum = units.add(&sum, &cur);
        cur = units.apply_matrix(&t, &cur);
    }
    let v = units.scale(&sum, inv_mod(h as u64, units.work_mod()));
    let w = units.add(c, &units.neg(&v));
    Ok((v, w))
}

/// `{c σ^k(c)^{-1} : c ∈ L}`, the image of `L` under `χ` for `τ = σ^k`.
pub fn chi_image(session: &Session, lattice: &U2Lattice, k: u32) -> Result<U2Lattice> {
    let f = &session.field;
    let units = &session.units;
    let t = units.galois_matrix(f, f.sigma_index(k as i64))?;
    let gens: Vec<Exps> = lattice
        .rows()
        .iter()
        .map(|r| units.add(r, &units.neg(&units.apply_matrix(&t, r))))
        .collect();
    Ok(U2Lattice::from_generators(units, &gens))
}

/// A solution `s` of `s τ(s)^{-1} = w^{-1}` for `w` in the image part.
pub fn coboundary(session: &Session, w: &Exps, k: u32, h: u32) -> Result<Exps> {
    let f = &session.field;
    let units = &session.units;
    let t = units.galois_matrix(f, f.sigma_index(k as i64))?;
    let mut acc = [0u64; crate::MAX_DEGREE];
    let mut cur = *w;
    for r in 0..h as u64 {
        acc = units.add(&acc, &units.scale(&cur, r));
        cur = units.apply_matrix(&t, &cur);
    }
    Ok(units.scale(&acc, inv_mod(h as u64, units.work_mod())))
}

/// A global fixed point of a class and the data that produced it.
#[derive(Debug, Clone)]
pub struct FixedPoint {
    /// Order of `τ = σ^{d/h}`.
    pub h: u32,
    /// `z ∈ Ω_{n,t}` with `z ≡ (s, 1)x mod Γ_m`.
    pub z: ParamPoint,
    pub t: u32,
    /// `(ω^t v, τ)` with `v` fixed by τ, fixing `(s, 1)x mod Γ_m`.
    pub stabilizer: ActorElement,
    /// Conjugating unit `s`, as exponents.
    pub s: Exps,
}

/// The ω^t-eigencomponent of `x` under `(1, σ^k)`, which has order `h`.
pub fn eigen_component(session: &Session, x: &ParamPoint, k: u32, h: u32, t: u32) -> Result<ParamPoint> {
    let f = &session.field;
    let lat = &session.lattice;
    let mut acc = ParamPoint::zero(session.ell());
    let mut cur = x.clone();
    let step = session.action_matrix(&ActorElement::galois(f, k))?;
    for r in 0..h as i64 {
        acc = lat.add(f, &acc, &lat.scale(f, &cur, f.omega_pow(-(t as i64) * r)));
        cur = step.apply(f, &cur);
    }
    Ok(lat.scale(f, &acc, inv_mod(h as u64, f.modulus())))
}

/// `x ≡ y mod Γ_m`.
pub fn congruent(session: &Session, x: &ParamPoint, y: &ParamPoint, level: u32) -> Result<bool> {
    let f = &session.field;
    session.lattice.gamma_member(f, &session.lattice.sub(f, x, y), level)
}

/// Level to which exact identities between parameters are compared.
pub fn exact_level(session: &Session) -> u32 {
    session.n() + session.max_depth() + 1
}

/// `x ∈ Σ_{n,t}` for `(1, σ^k)`: `(1, σ^k)x = ω^t x` at working precision.
pub fn in_eigenspace(session: &Session, x: &ParamPoint, k: u32, t: u32) -> Result<bool> {
    let f = &session.field;
    let img = session.act(&ActorElement::galois(f, k), x)?;
    let scaled = session.lattice.scale(f, x, f.omega_pow(t as i64));
    congruent(session, &img, &scaled, exact_level(session))
}

/// Global fixed point for `τ = σ^{d/h}` of the class `x + Γ_m`, given an
/// element `gamma` of its stabilizer whose Galois part has order divisible
/// by `h`.
pub fn global_fixed_point(
    session: &Session,
    x: &ParamPoint,
    gamma: &ActorElement,
    h: u32,
    level: u32,
) -> Result<FixedPoint> {
    let f = &session.field;
    let units = &session.units;
    let d = session.d();
    let k = d / h;
    let b = gamma.galois_order(d);
    if b % h != 0 {
        return Err(Error::InvalidParameters(format!("{h} does not divide the Galois order {b}")));
    }
    let j = (0..b as u64)
        .find(|&j| (j * gamma.gal as u64) % d as u64 == k as u64 % d as u64)
        .ok_or_else(|| Error::InternalInconsistency("no power of the stabilizer generator has Galois part τ".into()))?;
    let g = gamma.pow(f, j);
    let split = split_unit(f, &g.unit)?;
    let c = units.dlog(f, &f.exp(&split.xi)?)?;
    let (v, w) = kernel_image_split(session, &c, k, h)?;
    let s = coboundary(session, &w, k, h)?;
    let s_unit = units.to_unit(f, &s);
    let x1 = session.act(&ActorElement::from_unit(s_unit), x)?;
    let stab_unit = f.mul(&f.from_u64(f.omega_pow(split.a as i64)), &units.to_unit(f, &v));
    let stabilizer = ActorElement { unit: stab_unit, gal: k % d };
    if !congruent(session, &session.act(&stabilizer, &x1)?, &x1, level)? {
        return Err(Error::ModelViolation("conjugated stabilizer element does not fix the class".into()));
    }
    let t = split.a % d;
    let z = eigen_component(session, &x1, k, h, t)?;
    if !congruent(session, &z, &x1, level)? {
        return Err(Error::ModelViolation(format!("class is not definable in the ω^{t}-eigenspace")));
    }
    if !session.lattice.delta_member(f, &z, session.n())? {
        return Err(Error::ModelViolation("fixed point left Δ_n".into()));
    }
    Ok(FixedPoint { h, z, t, stabilizer, s })
}

/// Admissible types `{k(n - 2i) mod d : i = 1..ℓ}` for `τ` of order `h`.
pub fn admissible_types(session: &Session, h: u32) -> Vec<u32> {
    let d = session.d() as i64;
    let k = (session.d() / h) as i64;
    let n = session.n() as i64;
    let mut out: Vec<u32> = (1..=session.ell() as i64).map(|i| (k * (n - 2 * i)).rem_euclid(d) as u32).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `ker(χ) ∩ U_2` for `τ = σ^k` of order `h`, modulo `U_J`.
pub fn ker_chi_lattice(session: &Session, k: u32, h: u32) -> Result<U2Lattice> {
    let units = &session.units;
    let mut gens = Vec::with_capacity(units.dim());
    for i in 0..units.dim() {
        let mut e = [0u64; crate::MAX_DEGREE];
        e[i] = 1;
        gens.push(kernel_image_split(session, &e, k, h)?.0);
    }
    Ok(U2Lattice::from_generators(units, &gens))
}

/// The slice `Z(n, e, t)`: layer points at level `m` of `Σ_{m,t}`, as a mask
/// over layer indices.
pub fn slice_mask(session: &Session, level: u32, k: u32, h: u32, t: u32) -> Result<Vec<bool>> {
    let f = &session.field;
    let lat = &session.lattice;
    let layer = session.layer();
    let ell = session.ell();
    let mut basis = Vec::new();
    for j in 0..ell {
        let mut y = vec![0u64; ell];
        y[j] = 1;
        let v = eigen_component(session, &lat.from_layer_digits(f, &y, level), k, h, t)?;
        basis.push(lat.layer_digits(f, &v, level));
    }
    let p = session.p();
    let mut mask = vec![false; layer.size()];
    mask[0] = true;
    let mut frontier = vec![vec![0u64; ell]];
    while let Some(pt) = frontier.pop() {
        for b in &basis {
            let q: Vec<u64> = pt.iter().zip(b).map(|(a, c)| (a + c) % p).collect();
            let idx = layer.encode(&q) as usize;
            if !mask[idx] {
                mask[idx] = true;
                frontier.push(q);
            }
        }
    }
    Ok(mask)
}

/// An element of `Σ_{m,t}` with the given layer digits, which must lie in
/// the slice.
pub fn lift_to_slice(session: &Session, y: &[u64], level: u32, k: u32, h: u32, t: u32) -> Result<ParamPoint> {
    let f = &session.field;
    eigen_component(session, &session.lattice.from_layer_digits(f, y, level), k, h, t)
}
